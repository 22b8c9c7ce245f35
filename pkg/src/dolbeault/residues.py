"""Residue functionals: Kronecker extraction of one kernel factor.

On normal forms the residue along ``(a, b)`` at decoration ``I`` picks the
monomials carrying exactly the factor ``d^I_{z^b} w_ab`` and strips it.
The factor is first moved to the end of the word, which costs
``(-1)^{(n-1) * (number of factors after it)}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .algebra import MultiIndex
from .classes import CohClass, Context, Monomial, Truncation, enumerate_basis
from .engine import reduce
from .linalg import EchelonSpace


@dataclass(frozen=True)
class ResidueQuery:
    a: int
    b: int
    I: MultiIndex

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"residue pair needs a < b, got ({self.a},{self.b})")
        object.__setattr__(self, "I", tuple(self.I))


def strip_factor(mono: Monomial, q: ResidueQuery, n: int):
    """(sign, remaining monomial) if ``mono`` carries the queried factor, else None."""
    for idx, f in enumerate(mono.factors):
        if f.b == q.b:
            if f.a != q.a or f.J != q.I:
                return None
            after = len(mono.factors) - idx - 1
            sign = -1 if (n - 1) * after % 2 else 1
            return sign, Monomial(mono.poly, mono.ext, mono.factors[:idx] + mono.factors[idx + 1:])
    return None


def residue_coeff(x: CohClass, q: ResidueQuery) -> CohClass:
    """Residue of ``x`` along ``q``; inputs are reduced to normal form first."""
    ctx = x.ctx
    if len(q.I) != ctx.n:
        raise ValueError(f"multi-index {q.I} has wrong length for n={ctx.n}")
    if not q.b <= ctx.m:
        raise ValueError(f"point {q.b} outside 1..{ctx.m}")
    if not x.is_normal_form():
        x = reduce(x)
    out: Dict[Monomial, Fraction] = {}
    for mono, c in x.items():
        hit = strip_factor(mono, q, ctx.n)
        if hit is not None:
            sign, rest = hit
            out[rest] = out.get(rest, 0) + sign * c
    return CohClass(ctx, out)


def iterated_queries(mono: Monomial) -> List[ResidueQuery]:
    """Queries that strip every factor of ``mono``, largest b first."""
    return [ResidueQuery(f.a, f.b, f.J) for f in sorted(mono.factors, key=lambda f: f.b, reverse=True)]


def iterated_residue(x: CohClass, queries: Sequence[ResidueQuery]) -> CohClass:
    for q in queries:
        x = residue_coeff(x, q)
    return x


def _strip_all(mono: Monomial, queries: Sequence[ResidueQuery], n: int):
    sign = 1
    for q in queries:
        hit = strip_factor(mono, q, n)
        if hit is None:
            return None
        s, mono = hit
        sign *= s
    return sign, mono


def pairing(x: CohClass, target: Monomial) -> Fraction:
    """Iterated residues along ``target``'s factors, then coefficient extraction.

    After all factors are stripped, what remains is a coefficient times an
    exterior word; the pairing reads off the coefficient of ``target``'s.
    """
    if not x.is_normal_form():
        x = reduce(x)
    rest = iterated_residue(x, iterated_queries(target))
    return rest.coefficient(Monomial(target.poly, target.ext, ()))


def pairing_rows(ctx: Context, basis: Sequence[Monomial], queries: Sequence[Monomial]) -> List[Dict[int, int]]:
    """Sparse pairing matrix, one row per basis monomial.

    Queries sharing a factor word are handled together: the iterated
    residue is computed once per (basis monomial, factor word) and the
    remaining coefficient is looked up for every query in the group.
    """
    groups: Dict[tuple, Dict[Monomial, int]] = {}
    for i, q in enumerate(queries):
        groups.setdefault(q.factors, {})[Monomial(q.poly, q.ext, ())] = i
    # stripping every factor of a word F leaves no factors only when the
    # basis monomial carries exactly F, so each row has one candidate group;
    # stripping never looks at the coefficient or exterior word, so the
    # sign is computed once per word
    signs: Dict[tuple, int] = {}
    for F in groups:
        hit = _strip_all(Monomial((), (), F), iterated_queries(Monomial((), (), F)), ctx.n)
        if hit is not None and hit[1].factors == ():
            signs[F] = hit[0]
    rows = []
    for b in basis:
        row: Dict[int, int] = {}
        sign = signs.get(b.factors)
        if sign is not None:
            col = groups[b.factors].get(Monomial(b.poly, b.ext, ()))
            if col is not None:
                row[col] = sign
        rows.append(row)
    return rows


def residue_matrix_rank(ctx: Context, trunc: Truncation, bidegree: Tuple[int, int], min_factors: int = 0) -> int:
    """Rank of basis-versus-iterated-residue pairing at one bidegree.

    The query set is indexed by the same admissible data as the basis;
    ``min_factors`` restricts to monomials with at least that many kernels.
    """
    basis = [b for b in enumerate_basis(ctx, trunc, bidegree) if len(b.factors) >= min_factors]
    rows = pairing_rows(ctx, basis, basis)
    if all(len(r) <= 1 for r in rows):
        # rows with a single nonzero entry: the rank counts the columns hit
        return len({i for r in rows for i in r})
    space = EchelonSpace(lambda i: i)
    for row in rows:
        space.insert(row)
    return space.rank
