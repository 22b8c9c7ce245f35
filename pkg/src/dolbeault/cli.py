"""Command-line driver.

Examples::

    dolbeault reduce --n 2 --m 3 "w(1,3)*w(2,3)"
    echo "z(2,1)*w(1,2)" | dolbeault reduce --n 1 --m 2
    dolbeault dim --n 2 --m 2 --D 1 --d 0 --format json
    dolbeault degeneration-check --n 2 --m 3 --D 1

Exit status: 0 on success, 1 when reduction fails (caps exceeded, torus
same-pair products for n = 1, invalid residue query), 2 on parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .classes import AFFINE, TORUS, Context, DimensionTable, Truncation, TruncationOverflow, dim_table
from .engine import TorusSquareError, multiply, reduce
from .serialize import ParseError, emit, parse

EXIT_OK, EXIT_REDUCTION, EXIT_PARSE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _common(defaults: bool) -> argparse.ArgumentParser:
    """Global flags; accepted before or after the command name."""
    def d(v):
        return v if defaults else argparse.SUPPRESS
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, default=d(1), help="complex dimension")
    p.add_argument("--m", type=int, default=d(2), help="number of points")
    p.add_argument("--mode", choices=[AFFINE, TORUS], default=d(AFFINE))
    p.add_argument("--max-deriv", type=int, default=d(8), help="hard cap on |J| per kernel factor")
    p.add_argument("--max-poly-deg", type=int, default=d(8), help="hard cap on coefficient degree")
    p.add_argument("--format", choices=["text", "json"], default=d("text"))
    p.add_argument("--seed", type=int, default=d(0))
    return p


def _table_args(p: argparse.ArgumentParser, with_d: bool = True):
    p.add_argument("--D", type=int, default=1, help="derivative order bound of the window")
    if with_d:
        p.add_argument("--d", type=int, default=1, help="coefficient degree bound of the window")
    p.add_argument("--p-max", type=int, default=None, help="largest p (default n*m)")
    p.add_argument("--q-max", type=int, default=None, help="largest q (default n*m)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="dolbeault", description="Normal forms in Dolbeault cohomology of configuration spaces.",
                  parents=[_common(True)])
    common = _common(False)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", parents=[common], help="normal form of an expression")
    p.add_argument("expr", nargs="?", help="expression (read from stdin when omitted)")

    p = sub.add_parser("mul", parents=[common], help="reduced product of two expressions")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("dim", parents=[common], help="basis counts per bidegree")
    _table_args(p)

    p = sub.add_parser("residue", parents=[common], help="residue along one kernel factor")
    p.add_argument("expr", nargs="?")
    p.add_argument("--pair", type=int, nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--I", type=int, nargs="+", default=None, help="decoration multi-index (default 0)")

    p = sub.add_parser("oracle-check", parents=[common], help="compare a product with rational evaluation (n=1)")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("bm-verify", parents=[common], help="sphere and contour quadrature checks")
    p.add_argument("--grid", type=int, default=64)

    for name, helptext in (("torus-dim", "torus basis counts"), ("e2-dim", "E2-page counts for tori"),
                           ("degeneration-check", "compare torus and E2 counts")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _table_args(p, with_d=False)
    return top


def _context(args, mode: Optional[str] = None) -> Context:
    mode = mode or args.mode
    deg = 0 if mode == TORUS else args.max_poly_deg
    return Context(args.n, args.m, mode, args.max_deriv, deg)


def _expr(text: Optional[str]) -> str:
    return sys.stdin.read() if text is None or text == "-" else text


def _print_table(t: DimensionTable, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(t.to_json()) + "\n")
    else:
        out.write(t.to_csv())


def _ranges(args):
    top = args.n * args.m
    p_max = top if args.p_max is None else args.p_max
    q_max = top if args.q_max is None else args.q_max
    return range(p_max + 1), range(q_max + 1)


def run(args, out=sys.stdout) -> int:
    cmd = args.command
    if cmd == "reduce":
        ctx = _context(args)
        out.write(emit(reduce(parse(_expr(args.expr), ctx)), args.format) + "\n")
    elif cmd == "mul":
        ctx = _context(args)
        x, y = reduce(parse(args.left, ctx)), reduce(parse(args.right, ctx))
        out.write(emit(multiply(x, y), args.format) + "\n")
    elif cmd == "dim":
        ps, qs = _ranges(args)
        _print_table(dim_table(_context(args), Truncation(args.D, args.d), ps, qs), args.format, out)
    elif cmd == "residue":
        from .residues import ResidueQuery, residue_coeff
        ctx = _context(args)
        I = tuple(args.I) if args.I is not None else (0,) * ctx.n
        q = ResidueQuery(args.pair[0], args.pair[1], I)
        out.write(emit(residue_coeff(parse(_expr(args.expr), ctx), q), args.format) + "\n")
    elif cmd == "oracle-check":
        from .oracle import check_product
        ctx = _context(args)
        x, y = reduce(parse(args.left, ctx)), reduce(parse(args.right, ctx))
        ok, bad = check_product(x, y, trials=args.trials, seed=args.seed)
        if args.format == "json":
            out.write(json.dumps({"ok": ok, "counterexample": None if bad is None else {k: str(v) for k, v in bad.items()}}) + "\n")
        else:
            out.write("ok\n" if ok else f"mismatch {bad}\n")
        return EXIT_OK if ok else EXIT_REDUCTION
    elif cmd == "bm-verify":
        _bm_verify(args, out)
    elif cmd in ("torus-dim", "e2-dim", "degeneration-check"):
        from .torus import degeneration_check, e2_dim_table, torus_dim_table
        ps, qs = _ranges(args)
        if cmd == "torus-dim":
            _print_table(torus_dim_table(args.n, args.m, args.D, ps, qs), args.format, out)
        elif cmd == "e2-dim":
            _print_table(e2_dim_table(args.n, args.m, args.D, ps, qs), args.format, out)
        else:
            ok = degeneration_check(args.n, args.m, args.D, ps, qs)
            out.write(json.dumps({"consistent": ok}) + "\n" if args.format == "json" else f"{ok}\n")
            return EXIT_OK if ok else EXIT_REDUCTION
    return EXIT_OK


def _bm_verify(args, out):
    from .quadrature import (
        QuadratureGrid, coordinate_change_check_n1, lie_derivative_check, sphere_residue_numeric,
    )
    grid = QuadratureGrid.cube(args.grid)
    rows = [("sphere n=2 I=(0,0)", sphere_residue_numeric(2, (0, 0), grid), 1)]
    for I in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
        rows.append((f"sphere n=2 I={I}", sphere_residue_numeric(2, I, grid), 0))
    rows.append(("lie n=2 j=1", lie_derivative_check(2, 1, grid), 0))
    rows.append(("lie n=2 j=2", lie_derivative_check(2, 2, grid), 0))
    rows.append(("contour n=1 I=0", sphere_residue_numeric(1, (0,), grid), 1))
    rows.append(("coordinate change w=z+z^2 r=0.1", coordinate_change_check_n1([1, 1], 0.1, grid), 0))
    if args.format == "json":
        out.write(json.dumps([{"check": name, "value": [v.real, v.imag], "expected": e, "error": abs(v - e)}
                              for name, v, e in rows]) + "\n")
    else:
        for name, v, e in rows:
            out.write(f"{name}: {v.real:+.3e}{v.imag:+.3e}i (expected {e}, error {abs(v - e):.2e})\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ParseError as e:
        sys.stderr.write(f"parse error at {e.line}:{e.column}: {e.message}\n")
        return EXIT_PARSE
    except (TruncationOverflow, TorusSquareError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_REDUCTION


if __name__ == "__main__":
    sys.exit(main())
