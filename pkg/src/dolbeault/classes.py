"""Canonical basis monomials and cohomology classes.

A monomial is ``coefficient-monomial * exterior-word * omega-word`` in that
order. The omega word holds factors ``d^J_{z^b} w_{ab}`` with derivatives
always taken with respect to the second point ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .algebra import (
    ANTI, HOLO, ZERO, ExtWord, MultiIndex, PolyMonomial, ext_bidegree, mi_order,
    multi_indices_upto, pm_degree, pm_key, pm_points, poly_monomials, scalar,
)

AFFINE = "affine"
TORUS = "torus"


class TruncationOverflow(ArithmeticError):
    """A computation left the configured derivative / degree caps."""


@dataclass(frozen=True)
class Context:
    """Ambient data: dimension n, number of points m, mode, hard caps."""

    n: int
    m: int
    mode: str = AFFINE
    max_deriv: int = 8
    max_poly_deg: int = 8

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        if self.mode not in (AFFINE, TORUS):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def torus(self) -> bool:
        return self.mode == TORUS

    @property
    def omega_degree(self) -> int:
        return self.n - 1

    def with_caps(self, max_deriv: int, max_poly_deg: int) -> "Context":
        return Context(self.n, self.m, self.mode, max_deriv, max_poly_deg)

    def same_ring(self, other: "Context") -> bool:
        return (self.n, self.m, self.mode) == (other.n, other.m, other.mode)


@dataclass(frozen=True)
class Truncation:
    D: int = 0   # max |J| per omega factor
    d: int = 0   # max total degree of the coefficient

    def __post_init__(self):
        if self.D < 0 or self.d < 0:
            raise ValueError("truncation bounds must be nonnegative")


class OmegaFactor(NamedTuple):
    a: int
    b: int
    J: MultiIndex

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.a, self.b)

    def sort_key(self):
        return (self.b, self.a, self.J)


class Monomial(NamedTuple):
    """Skeleton of a term (unit coefficient)."""

    poly: PolyMonomial = ()
    ext: ExtWord = ()
    factors: Tuple[OmegaFactor, ...] = ()

    def bidegree(self, n: int) -> Tuple[int, int]:
        p, qbar = ext_bidegree(self.ext)
        return p, qbar + len(self.factors) * (n - 1)

    def degree(self, n: int) -> int:
        return sum(self.bidegree(n))

    def punctured(self) -> set:
        return {f.b for f in self.factors}

    def max_deriv(self) -> int:
        return max((mi_order(f.J) for f in self.factors), default=0)

    def canonical_key(self):
        return (len(self.factors), tuple(f.b for f in self.factors), tuple(f.a for f in self.factors),
                tuple(f.J for f in self.factors), self.ext, pm_key(self.poly))


UNIT = Monomial()


def orient_factor(a: int, b: int, J: MultiIndex, n: int) -> Tuple[OmegaFactor, int]:
    """Orient ``d^J_{z^b} w_{ab}`` so that a < b.

    Swapping the pair costs (-1)^n; moving each derivative from the old
    second point to the new one costs another -1.
    """
    if a == b:
        raise ValueError(f"w({a},{b}) lies on the diagonal")
    J = tuple(J)
    if len(J) != n:
        raise ValueError(f"multi-index {J} has wrong length for n={n}")
    if a < b:
        return OmegaFactor(a, b, J), 1
    sign = (-1) ** (n + mi_order(J))
    return OmegaFactor(b, a, J), sign


def is_admissible(mono: Monomial, ctx: Context) -> bool:
    """True iff ``mono`` is one of the canonical basis elements."""
    n, m = ctx.n, ctx.m
    bs = [f.b for f in mono.factors]
    if any(not (1 <= f.a < f.b <= m) or len(f.J) != n or min(f.J, default=0) < 0 for f in mono.factors):
        return False
    if any(b1 >= b2 for b1, b2 in zip(bs, bs[1:])):
        return False
    punct = set(bs)
    if pm_points(mono.poly) & punct:
        return False
    if list(mono.ext) != sorted(set(mono.ext)):
        return False
    for kind, a, j in mono.ext:
        if not (1 <= a <= m and 1 <= j <= n):
            return False
        if kind == ANTI and (not ctx.torus or a in punct):
            return False
    if ctx.torus and mono.poly:
        return False
    return True


class CohClass:
    """Finite exact linear combination of monomials in a fixed context.

    Instances produced by the engine hold admissible monomials only; raw
    (pre-reduction) combinations use the same container.
    """

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: Context, terms: Mapping[Monomial, object] | None = None):
        self.ctx = ctx
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = scalar(c)
            if c:
                clean[mono] = clean.get(mono, ZERO) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean

    # construction helpers
    @classmethod
    def zero(cls, ctx: Context) -> "CohClass":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: Context, c=1) -> "CohClass":
        return cls(ctx, {UNIT: c})

    @classmethod
    def monomial(cls, ctx: Context, mono: Monomial, c=1) -> "CohClass":
        return cls(ctx, {mono: c})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def bidegrees(self) -> set:
        return {m.bidegree(self.ctx.n) for m in self._terms}

    def homogeneous_part(self, bideg: Tuple[int, int]) -> "CohClass":
        return CohClass(self.ctx, {m: c for m, c in self._terms.items() if m.bidegree(self.ctx.n) == bideg})

    def is_normal_form(self) -> bool:
        return all(is_admissible(m, self.ctx) for m in self._terms)

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: t[0].canonical_key())

    def _check(self, other: "CohClass"):
        if not self.ctx.same_ring(other.ctx):
            raise ValueError("classes live in different contexts")

    def __add__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, ZERO) + c
        return CohClass(self.ctx, out)

    def __neg__(self) -> "CohClass":
        return CohClass(self.ctx, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + (-other)

    def scale(self, c) -> "CohClass":
        c = scalar(c)
        return CohClass(self.ctx, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, CohClass):
            from .engine import multiply
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohClass):
            return NotImplemented
        return self.ctx.same_ring(other.ctx) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ctx.n, self.ctx.m, self.ctx.mode, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        from .serialize import emit_text
        return f"CohClass({emit_text(self)!r})"


# ---------------------------------------------------------------- enumeration

def _pair_words(m: int, k: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """(b-sequence, a-sequence) with 1 < b_1 < ... < b_k <= m and a_i < b_i."""
    for bs in combinations(range(2, m + 1), k):
        for as_ in product(*(range(1, b) for b in bs)):
            yield bs, tuple(as_)


def _factor_counts(ctx: Context, q: int) -> List[Tuple[int, int]]:
    """Admissible (k, number of antiholomorphic generators) splits of q."""
    out = []
    for k in range(ctx.m):
        rest = q - k * (ctx.n - 1)
        if rest < 0:
            continue
        if rest > 0 and not ctx.torus:
            continue
        out.append((k, rest))
    return out


def enumerate_basis(ctx: Context, trunc: Truncation, bidegree: Tuple[int, int]) -> List[Monomial]:
    """Every admissible monomial of the given bidegree inside the truncation."""
    p, q = bidegree
    n, m = ctx.n, ctx.m
    if p < 0 or q < 0:
        return []
    holo = [(HOLO, a, j) for a in range(1, m + 1) for j in range(1, n + 1)]
    js = list(multi_indices_upto(n, trunc.D))
    out: List[Monomial] = []
    for k, nbar in _factor_counts(ctx, q):
        for bs, as_ in _pair_words(m, k):
            free = [a for a in range(1, m + 1) if a not in bs]
            anti = [(ANTI, a, j) for a in free for j in range(1, n + 1)]
            if nbar > len(anti):
                continue
            polys = [()] if ctx.torus else poly_monomials([(a, j) for a in free for j in range(1, n + 1)], trunc.d)
            for Js in product(js, repeat=k):
                factors = tuple(OmegaFactor(a, b, J) for a, b, J in zip(as_, bs, Js))
                for hw in combinations(holo, p):
                    for aw in combinations(anti, nbar):
                        ext = tuple(sorted(hw + aw))
                        for poly in polys:
                            out.append(Monomial(poly, ext, factors))
    return out


@dataclass
class DimensionTable:
    """Map (p, q) -> dimension, with the window it was computed in."""

    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)
    label: str = ""

    def __getitem__(self, bideg: Tuple[int, int]) -> int:
        return self.entries.get(tuple(bideg), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DimensionTable):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self[k] == other[k] for k in keys)

    def to_csv(self) -> str:
        lines = ["p,q,dim"]
        for (p, q), v in sorted(self.entries.items()):
            lines.append(f"{p},{q},{v}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"label": self.label,
                "entries": [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(self.entries.items())]}


def dim_table(ctx: Context, trunc: Truncation, p_range: Iterable[int], q_range: Iterable[int]) -> DimensionTable:
    q_range = list(q_range)
    entries = {}
    for p in p_range:
        for q in q_range:
            entries[(p, q)] = len(enumerate_basis(ctx, trunc, (p, q))) if q >= 0 and p >= 0 else 0
    return DimensionTable(entries, label=f"basis n={ctx.n} m={ctx.m} mode={ctx.mode} D={trunc.D} d={trunc.d}")
