"""Surface syntax for classes: parser, text emitter and JSON form.

Grammar (whitespace insensitive)::

    expr     := ["-"] term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := atom ("^" uint)? | "(" expr ")" ("^" uint)? | rational
    atom     := "z(" a "," j ")" | "dz(" a "," j ")" | "dzb(" a "," j ")"
              | "w(" a "," b ")" | "wt(" a "," b ")" | "d[" uint ("," uint)* "]" atom
    rational := int ("/" uint)?

A derivative prefix ``d[J]`` is taken with respect to the second written
point of the kernel it decorates; ``w(b,a)`` with ``b > a`` is oriented on
ingestion. Parsing yields a raw (canonicalized but unreduced) class.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import ANTI, HOLO, pm_from_dict
from .classes import AFFINE, TORUS, CohClass, Context, Monomial, OmegaFactor
from .engine import Terms, _add, canonicalize, mono_product


class ParseError(ValueError):
    """Syntax, range or mode error, located by line and column (1-based)."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# ---------------------------------------------------------------- emit

def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def monomial_str(mono: Monomial, torus: bool = False) -> str:
    parts = []
    for (a, j), e in mono.poly:
        parts.append(f"z({a},{j})" + (f"^{e}" if e > 1 else ""))
    for kind, a, j in mono.ext:
        parts.append(("dz" if kind == HOLO else "dzb") + f"({a},{j})")
    name = "wt" if torus else "w"
    for f in mono.factors:
        deco = "" if not any(f.J) else "d[" + ",".join(map(str, f.J)) + "]"
        parts.append(f"{deco}{name}({f.a},{f.b})")
    return "*".join(parts)


def ordered_terms(x: CohClass) -> List[Tuple[Monomial, Fraction]]:
    """Terms in the canonical emission order (largest canonical key first)."""
    return sorted(x.items(), key=lambda t: t[0].canonical_key(), reverse=True)


def emit_text(x: CohClass) -> str:
    out = []
    for i, (mono, c) in enumerate(ordered_terms(x)):
        body = monomial_str(mono, x.ctx.torus)
        mag = abs(c)
        if not body:
            piece = _coeff_str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{_coeff_str(mag)}*{body}"
        if i == 0:
            out.append(("-" if c < 0 else "") + piece)
        else:
            out.append(("- " if c < 0 else "+ ") + piece)
    return " ".join(out) if out else "0"


def to_json(x: CohClass) -> dict:
    terms = []
    for mono, c in ordered_terms(x):
        terms.append({
            "coeff": _coeff_str(c),
            "poly": [["z", a, j, e] for (a, j), e in mono.poly],
            "ext": [["dz" if k == HOLO else "dzb", a, j] for k, a, j in mono.ext],
            "omega": [{"a": f.a, "b": f.b, "J": list(f.J)} for f in mono.factors],
        })
    return {"context": {"n": x.ctx.n, "m": x.ctx.m, "mode": x.ctx.mode}, "terms": terms}


def emit(x: CohClass, fmt: str = "text") -> str:
    import json
    if fmt == "text":
        return emit_text(x)
    if fmt == "json":
        return json.dumps(to_json(x), sort_keys=False)
    raise ValueError(f"unknown format {fmt!r}")


def from_json(data: dict, ctx: Optional[Context] = None) -> CohClass:
    """Inverse of :func:`to_json`; the context is read from the document unless given."""
    if ctx is None:
        c = data["context"]
        ctx = Context(c["n"], c["m"], c["mode"])
    terms: Dict[Monomial, Fraction] = {}
    for t in data["terms"]:
        poly = pm_from_dict({(a, j): e for _, a, j, e in t["poly"]})
        ext = tuple((HOLO if k == "dz" else ANTI, a, j) for k, a, j in t["ext"])
        factors = tuple(OmegaFactor(f["a"], f["b"], tuple(f["J"])) for f in t["omega"])
        for mono, v in canonicalize(ctx, Fraction(t["coeff"]), poly, ext, factors).items():
            terms[mono] = terms.get(mono, 0) + v
    return CohClass(ctx, terms)


JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["context", "terms"],
    "additionalProperties": False,
    "properties": {
        "context": {
            "type": "object",
            "required": ["n", "m", "mode"],
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "m": {"type": "integer", "minimum": 1},
                "mode": {"enum": [AFFINE, TORUS]},
            },
        },
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "poly", "ext", "omega"],
                "additionalProperties": False,
                "properties": {
                    "coeff": {"type": "string", "pattern": r"^-?[0-9]+(/[1-9][0-9]*)?$"},
                    "poly": {"type": "array", "items": {
                        "type": "array",
                        "prefixItems": [{"const": "z"}, {"type": "integer", "minimum": 1},
                                        {"type": "integer", "minimum": 1}, {"type": "integer", "minimum": 1}],
                        "items": False, "minItems": 4}},
                    "ext": {"type": "array", "items": {
                        "type": "array",
                        "prefixItems": [{"enum": ["dz", "dzb"]}, {"type": "integer", "minimum": 1},
                                        {"type": "integer", "minimum": 1}],
                        "items": False, "minItems": 3}},
                    "omega": {"type": "array", "items": {
                        "type": "object",
                        "required": ["a", "b", "J"],
                        "additionalProperties": False,
                        "properties": {
                            "a": {"type": "integer", "minimum": 1},
                            "b": {"type": "integer", "minimum": 1},
                            "J": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                        }}},
                },
            },
        },
    },
}


# ---------------------------------------------------------------- parse

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>dzb|dz|wt|w|z|d)|(?P<op>[-+*^/(),\[\]]))")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text: str) -> List[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        kind = mt.lastgroup
        start = mt.start(kind)
        toks.append(_Tok(kind, mt.group(kind), start))
        pos = mt.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _error(text: str, pos: int, msg: str) -> ParseError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ParseError(msg, line, col)


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Optional[_Tok] = None):
        raise _error(self.text, (tok or self.tok).pos, msg)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "name") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            got = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, got {got!r}")

    def uint(self) -> int:
        if self.tok.kind != "num":
            self.fail("expected an unsigned integer")
        v = int(self.tok.text)
        self.i += 1
        return v

    # arithmetic on raw term maps
    def times(self, x: Terms, y: Terms) -> Terms:
        out: Terms = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for mo, v in mono_product(self.ctx, m1, m2).items():
                    _add(out, mo, c1 * c2 * v)
        return out

    @staticmethod
    def plus(x: Terms, y: Terms, s: int = 1) -> Terms:
        out = dict(x)
        for mo, c in y.items():
            _add(out, mo, s * c)
        return out

    # grammar
    def parse(self) -> Terms:
        val = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return val

    def expr(self) -> Terms:
        neg = self.accept("-")
        val = self.term()
        if neg:
            val = {mo: -c for mo, c in val.items()}
        while True:
            if self.accept("+"):
                val = self.plus(val, self.term())
            elif self.accept("-"):
                val = self.plus(val, self.term(), -1)
            else:
                return val

    def term(self) -> Terms:
        val = self.factor()
        while self.accept("*"):
            val = self.times(val, self.factor())
        return val

    def factor(self) -> Terms:
        if self.accept("("):
            val = self.expr()
            self.expect(")")
            return self.power(val)
        if self.tok.kind == "num":
            num = self.uint()
            if self.accept("/"):
                start = self.tok
                den = self.uint()
                if den == 0:
                    self.fail("zero denominator", start)
                return {Monomial(): Fraction(num, den)} if num else {}
            return {Monomial(): Fraction(num)} if num else {}
        return self.power(self.atom())

    def power(self, val: Terms) -> Terms:
        if not self.accept("^"):
            return val
        out: Terms = {Monomial(): Fraction(1)}
        for _ in range(self.uint()):
            out = self.times(out, val)
        return out

    def pair(self) -> Tuple[int, int, _Tok, _Tok]:
        self.expect("(")
        t1 = self.tok
        a = self.uint()
        self.expect(",")
        t2 = self.tok
        b = self.uint()
        self.expect(")")
        return a, b, t1, t2

    def point(self, a: int, tok: _Tok):
        if not 1 <= a <= self.ctx.m:
            self.fail(f"point index {a} outside 1..{self.ctx.m}", tok)

    def coord(self, j: int, tok: _Tok):
        if not 1 <= j <= self.ctx.n:
            self.fail(f"coordinate index {j} outside 1..{self.ctx.n}", tok)

    def atom(self, deco: Optional[Tuple[int, ...]] = None, deco_tok: Optional[_Tok] = None) -> Terms:
        tok = self.tok
        if tok.kind != "name":
            self.fail(f"expected a generator, got {tok.text or 'end of input'!r}")
        name = tok.text
        self.i += 1
        if name == "d":
            if deco is not None:
                self.fail("repeated derivative prefix", tok)
            self.expect("[")
            J = [self.uint()]
            while self.accept(","):
                J.append(self.uint())
            self.expect("]")
            if len(J) != self.ctx.n:
                self.fail(f"derivative multi-index needs {self.ctx.n} entries, got {len(J)}", tok)
            if self.tok.kind != "name" or self.tok.text not in ("w", "wt"):
                self.fail("a derivative prefix must decorate w(a,b) or wt(a,b)")
            return self.atom(tuple(J), tok)
        torus = self.ctx.torus
        if name in ("dzb", "wt") and not torus:
            self.fail(f"{name} is only available in torus mode", tok)
        if name in ("w", "z") and torus:
            self.fail(f"{name} is not available in torus mode" + (" (use wt)" if name == "w" else ""), tok)
        a, b, t1, t2 = self.pair()
        self.point(a, t1)
        if name in ("w", "wt"):
            self.point(b, t2)
            if a == b:
                self.fail(f"{name}({a},{b}) lies on the diagonal", tok)
            J = deco if deco is not None else (0,) * self.ctx.n
            return canonicalize(self.ctx, 1, (), (), [OmegaFactor(a, b, J)])
        self.coord(b, t2)
        if name == "z":
            return {Monomial((((a, b), 1),)): Fraction(1)}
        kind = HOLO if name == "dz" else ANTI
        return {Monomial((), ((kind, a, b),)): Fraction(1)}


def parse(text: str, ctx: Context) -> CohClass:
    """Parse surface syntax into a raw class (factors oriented and sorted, not reduced)."""
    return CohClass(ctx, _Parser(text, ctx).parse())
