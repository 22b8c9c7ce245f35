import io
import json
import subprocess
import sys

import jsonschema
import pytest

from dolbeault.classes import CohClass, Context
from dolbeault.cli import build_parser, main, run
from dolbeault.engine import reduce
from dolbeault.serialize import JSON_SCHEMA, ParseError, emit, from_json, parse


def cli(*argv):
    out = io.StringIO()
    code = run(build_parser().parse_args(list(argv)), out)
    return code, out.getvalue()


def test_parse_examples():
    ctx = Context(1, 3)
    assert reduce(parse("w(1,2)*w(2,3) + w(2,3)*w(3,1) + w(3,1)*w(1,2)", ctx)).is_zero()
    assert reduce(parse("z(2,1)*w(1,2)", Context(2, 2))) == parse("z(1,1)*w(1,2)", Context(2, 2))
    (mono,) = parse("d[1,0]w(1,2)", Context(2, 2))
    assert mono.factors[0].J == (1, 0)


def test_emit_examples():
    ctx = Context(2, 3)
    assert emit(CohClass.zero(ctx)) == "0"
    assert json.loads(emit(CohClass.zero(ctx), "json"))["terms"] == []
    x = parse("z(1,1)*w(1,2)", ctx)
    assert emit(x) == "z(1,1)*w(1,2)"
    assert json.loads(emit(x, "json"))["terms"][0]["coeff"] == "1"
    assert emit(reduce(parse("w(1,3)*w(2,3)", ctx))) == "w(1,2)*w(2,3) - w(1,2)*w(1,3)"


@pytest.mark.parametrize("text,col", [("w(1,", 5), ("w(1,4)", 5), ("w(2,2)", 1), ("dzb(1,1)", 1),
                                      ("3/0", 3), ("d[1]w(1,2)", 1), ("z(1,1) $", 8), ("d[0,0]z(1,1)", 7)])
def test_parse_errors_locate(text, col):
    with pytest.raises(ParseError) as info:
        parse(text, Context(2, 3))
    assert info.value.line == 1 and info.value.column == col


def test_parse_error_line_numbers():
    with pytest.raises(ParseError) as info:
        parse("w(1,2) +\n  w(9,1)", Context(1, 3))
    assert (info.value.line, info.value.column) == (2, 5)


def test_grammar_extras():
    ctx = Context(1, 2)
    assert parse("-(z(2,1) + 1)^2", ctx) == parse("-z(2,1)^2 - 2*z(2,1) - 1", ctx)
    assert parse("w(2,1)", ctx) == parse("-w(1,2)", ctx)
    assert parse("1/2*z(1,1) + 1/2*z(1,1)", ctx) == parse("z(1,1)", ctx)


def test_torus_mode_syntax():
    ctx = Context(1, 2, mode="torus", max_poly_deg=0)
    assert emit(parse("dzb(2,1)*wt(1,2)", ctx)) == "dzb(2,1)*wt(1,2)"
    with pytest.raises(ParseError):
        parse("w(1,2)", ctx)


def test_json_round_trip_and_schema():
    x = reduce(parse("3/4*z(1,1)*dz(2,2)*d[1,0]w(1,3) - w(1,2)*w(1,3)", Context(2, 3)))
    doc = json.loads(emit(x, "json"))
    jsonschema.validate(doc, JSON_SCHEMA)
    assert from_json(doc) == x


def test_reduce_command():
    code, out = cli("--n", "2", "--m", "3", "reduce", "w(1,3)*w(2,3)")
    assert code == 0 and out == "w(1,2)*w(2,3) - w(1,2)*w(1,3)\n"
    code, out = cli("reduce", "--n", "1", "--m", "2", "--format", "json", "z(2,1)*w(1,2)")
    assert [t["coeff"] for t in json.loads(out)["terms"]] == ["1", "-1"]


def test_mul_and_residue_commands():
    assert cli("--n", "1", "--m", "2", "mul", "w(1,2)", "w(1,2)") == (0, "d[1]w(1,2)\n")
    assert cli("--n", "2", "--m", "3", "residue", "w(1,2)*w(1,3)", "--pair", "1", "3") == (0, "w(1,2)\n")


def test_table_commands():
    code, out = cli("--n", "2", "--m", "2", "dim", "--D", "1", "--d", "0", "--p-max", "0", "--q-max", "1")
    assert out == "p,q,dim\n0,0,1\n0,1,3\n"
    code, out = cli("--n", "2", "--m", "2", "--format", "json", "torus-dim", "--D", "0", "--p-max", "0")
    assert {(e["p"], e["q"]): e["dim"] for e in json.loads(out)["entries"]}[(0, 1)] == 5
    code, out = cli("--n", "2", "--m", "3", "e2-dim", "--D", "0", "--p-max", "0")
    assert "0,2,29" in out
    assert cli("--n", "2", "--m", "3", "degeneration-check", "--D", "1", "--p-max", "2") == (0, "True\n")


def test_oracle_and_quadrature_commands():
    assert cli("--n", "1", "--m", "3", "oracle-check", "w(1,3)", "w(2,3)") == (0, "ok\n")
    code, out = cli("bm-verify", "--grid", "16", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and all(r["error"] < 1e-6 for r in rows)


def test_exit_codes(capsys):
    assert main(["--n", "1", "--m", "2", "reduce", "w(1,"]) == 2
    assert main(["--n", "1", "--m", "2", "--max-deriv", "1", "mul", "d[1]w(1,2)", "w(1,2)"]) == 1
    assert main(["--mode", "torus", "--n", "1", "--m", "2", "mul", "wt(1,2)", "wt(1,2)"]) == 1
    assert main(["--n", "2", "--m", "2", "residue", "w(1,2)", "--pair", "2", "1"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    err = capsys.readouterr().err
    assert "parse error at 1:5" in err and "Eisenstein" in err


def test_stdin_and_console_script():
    proc = subprocess.run([sys.executable, "-m", "dolbeault.cli", "--n", "2", "--m", "2", "reduce"],
                          input="z(2,1)*w(1,2)", capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "z(1,1)*w(1,2)\n"
