"""Exact scalars, multi-indices, polynomials and exterior words.

Variables z^a_j are addressed by ``(a, j)`` with 1-based point index ``a``
and coordinate index ``j``. A polynomial monomial is a sorted tuple of
``((a, j), exponent)`` pairs; the empty tuple is the constant monomial.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Sequence, Tuple

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

HOLO = 0
ANTI = 1

MultiIndex = Tuple[int, ...]
PolyMonomial = Tuple[Tuple[Tuple[int, int], int], ...]


def scalar(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to an exact scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not exact scalars")
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


# ---------------------------------------------------------------- multi-indices

def multiindex_count(n: int, D: int) -> int:
    """Number of multi-indices J in N^n with |J| <= D."""
    if n < 1 or D < 0:
        raise ValueError("need n >= 1 and D >= 0")
    return comb(D + n, n)


def multi_indices(n: int, order: int) -> Iterator[MultiIndex]:
    """All multi-indices of length n with |J| == order, lexicographic."""
    if n == 1:
        yield (order,)
        return
    for first in range(order, -1, -1):
        for rest in multi_indices(n - 1, order - first):
            yield (first,) + rest


def multi_indices_upto(n: int, D: int) -> Iterator[MultiIndex]:
    for order in range(D + 1):
        yield from multi_indices(n, order)


def mi_add(I: MultiIndex, J: MultiIndex) -> MultiIndex:
    return tuple(i + j for i, j in zip(I, J))


def mi_sub(I: MultiIndex, J: MultiIndex) -> MultiIndex:
    return tuple(i - j for i, j in zip(I, J))


def mi_order(J: MultiIndex) -> int:
    return sum(J)


def mi_factorial(J: MultiIndex) -> int:
    out = 1
    for j in J:
        out *= factorial(j)
    return out


def mi_splits(J: MultiIndex) -> Iterator[Tuple[MultiIndex, MultiIndex, int]]:
    """Leibniz splittings J = K + L with binomial weight prod C(J_t, K_t)."""
    for K in product(*(range(j + 1) for j in J)):
        L = tuple(j - k for j, k in zip(J, K))
        w = 1
        for j, k in zip(J, K):
            w *= comb(j, k)
        yield tuple(K), L, w


def unit_index(n: int, j: int) -> MultiIndex:
    """e_j for 1-based coordinate j."""
    return tuple(1 if t == j - 1 else 0 for t in range(n))


# ---------------------------------------------------------------- signs

def koszul_sign(degrees: Sequence[int], permutation: Sequence[int]) -> int:
    """Sign picked up by reordering graded factors.

    ``permutation[i]`` is the original position of the factor that ends up
    in slot ``i``. Every inverted pair of odd-degree factors contributes -1.
    """
    perm = list(permutation)
    if sorted(perm) != list(range(len(degrees))):
        raise ValueError("permutation must be a bijection of positions")
    sign = 1
    for i in range(len(perm)):
        di = degrees[perm[i]] & 1
        if not di:
            continue
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j] and degrees[perm[j]] & 1:
                sign = -sign
    return sign


def graded_sort(items: Sequence, degrees: Sequence[int], key=None):
    """Stable sort of graded items; returns (sign, sorted items)."""
    order = sorted(range(len(items)), key=(lambda i: items[i]) if key is None else (lambda i: key(items[i])))
    return koszul_sign(degrees, order), [items[i] for i in order]


def odd_sort(items: Sequence, key=None):
    """graded_sort for items that are all of odd degree: sign is the permutation parity."""
    k = len(items)
    if k < 2:
        return 1, list(items)
    keys = [key(x) for x in items] if key is not None else list(items)
    order = sorted(range(k), key=keys.__getitem__)
    inv = 0
    for i in range(k):
        oi = order[i]
        for j in range(i + 1, k):
            if order[j] < oi:
                inv += 1
    return (-1 if inv & 1 else 1), [items[i] for i in order]


# ---------------------------------------------------------------- polynomials

class Variable(NamedTuple):
    a: int
    j: int

    def __str__(self) -> str:
        return f"z({self.a},{self.j})"


def pm_from_dict(exps: Mapping[Tuple[int, int], int]) -> PolyMonomial:
    return tuple(sorted(((tuple(v), e) for v, e in exps.items() if e), key=lambda t: t[0]))


def pm_mul(p: PolyMonomial, q: PolyMonomial) -> PolyMonomial:
    if not p:
        return q
    if not q:
        return p
    exps = dict(p)
    for v, e in q:
        exps[v] = exps.get(v, 0) + e
    return pm_from_dict(exps)


def pm_degree(p: PolyMonomial) -> int:
    return sum(e for _, e in p)


def pm_points(p: PolyMonomial) -> set:
    return {v[0] for v, _ in p}


def pm_remove(p: PolyMonomial, var: Tuple[int, int]) -> PolyMonomial:
    """Divide by one power of ``var`` (which must occur)."""
    exps = dict(p)
    exps[var] -= 1
    return pm_from_dict(exps)


def pm_key(p: PolyMonomial):
    """Degree-lexicographic key, variables ordered by (a, j)."""
    return (pm_degree(p), p)


def pm_str(p: PolyMonomial) -> str:
    parts = []
    for (a, j), e in p:
        parts.append(f"z({a},{j})" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def poly_monomials(variables: Sequence[Tuple[int, int]], d: int) -> list:
    """All monomials of total degree <= d in ``variables``, deg-lex order."""
    out = [()]
    variables = sorted(variables)

    def rec(start, remaining, current):
        for i in range(start, len(variables)):
            v = variables[i]
            nxt = dict(current)
            nxt[v] = nxt.get(v, 0) + 1
            out.append(pm_from_dict(nxt))
            if remaining > 1:
                rec(i, remaining - 1, nxt)

    if d > 0:
        rec(0, d, {})
    return sorted(set(out), key=pm_key)


class Polynomial:
    """Sparse polynomial with exact rational coefficients; immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[PolyMonomial, object] | None = None):
        clean: Dict[PolyMonomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = scalar(c)
            if c:
                mono = pm_from_dict(dict(mono))
                clean[mono] = clean.get(mono, ZERO) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = dict(sorted(clean.items(), key=lambda t: pm_key(t[0])))

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, a: int, j: int) -> "Polynomial":
        return cls({(((a, j), 1),): 1})

    @property
    def terms(self) -> Dict[PolyMonomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def degree(self) -> int:
        return max((pm_degree(m) for m in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, ZERO) + c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = scalar(other)
            return Polynomial({m: c * v for m, v in self._terms.items()})
        out: Dict[PolyMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = pm_mul(m1, m2)
                out[m] = out.get(m, ZERO) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        out = Polynomial.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "Polynomial(0)"
        parts = []
        for m, c in self._terms.items():
            parts.append(f"{c}*{pm_str(m)}" if m else str(c))
        return "Polynomial(" + " + ".join(parts) + ")"

    def evaluate(self, values: Mapping[Tuple[int, int], object]):
        total = 0
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total


def poly_substitute(p: Polynomial, mapping: Mapping[Tuple[int, int], Tuple[int, int]]) -> Polynomial:
    """Rename variables; coefficients of colliding monomials are merged."""
    out: Dict[PolyMonomial, Fraction] = {}
    for mono, c in p.items():
        exps: Dict[Tuple[int, int], int] = {}
        for v, e in mono:
            w = tuple(mapping.get(v, v))
            exps[w] = exps.get(w, 0) + e
        m = pm_from_dict(exps)
        out[m] = out.get(m, ZERO) + c
    return Polynomial(out)


# ---------------------------------------------------------------- exterior words

ExtGen = Tuple[int, int, int]   # (kind, a, j); kind HOLO -> dz, ANTI -> dzbar
ExtWord = Tuple[ExtGen, ...]


def ext_normalize(gens: Iterable[ExtGen]):
    """Sort generators into canonical order; (sign, word) or (0, None) on repeats."""
    gens = list(gens)
    if len(set(gens)) != len(gens):
        return 0, None
    sign, word = odd_sort(gens)
    return sign, tuple(word)


def ext_wedge(w1: ExtWord, w2: ExtWord):
    return ext_normalize(tuple(w1) + tuple(w2))


def ext_bidegree(w: ExtWord) -> Tuple[int, int]:
    p = sum(1 for g in w if g[0] == HOLO)
    return p, len(w) - p


def ext_str(g: ExtGen) -> str:
    return ("dz" if g[0] == HOLO else "dzb") + f"({g[1]},{g[2]})"


def factorial_ratio(p: int, q: int) -> Fraction:
    """p! q! / (p + q + 1)!"""
    return Fraction(factorial(p) * factorial(q), factorial(p + q + 1))
