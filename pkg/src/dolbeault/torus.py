"""Punctured complex tori: constant-coefficient presentation and E2 bookkeeping.

Torus classes live in a ``Context(mode="torus")``. The engine treats the
periodized kernels exactly like the affine ones, with constant
coefficients and one extra rule: ``dzb^b_j * wt_ab = dzb^a_j * wt_ab``.
Repeatedly applying it sends every antiholomorphic generator to the root
of its component in the forest with edges (a_i, b_i).
"""
from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple

from .algebra import ANTI, multiindex_count
from .classes import TORUS, CohClass, Context, DimensionTable, Monomial, Truncation, enumerate_basis
from .engine import TorusSquareError, multiply

__all__ = [
    "TorusSquareError", "UnionFind", "dzbar_representative", "torus_context", "torus_multiply",
    "torus_dim_table", "e2_dim_table", "degeneration_check",
]


class UnionFind:
    """Forest over points 1..m; the representative of a component is its smallest point."""

    def __init__(self, m: int):
        self.parent = list(range(m + 1))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge components; False if x and y were already connected."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        lo, hi = min(rx, ry), max(rx, ry)
        self.parent[hi] = lo
        return True

    def roots(self) -> List[int]:
        return sorted({self.find(x) for x in range(1, len(self.parent))})


def forest(m: int, edges: Iterable[Tuple[int, int]]) -> UnionFind:
    uf = UnionFind(m)
    for a, b in edges:
        if not uf.union(a, b):
            raise ValueError(f"edge ({a},{b}) closes a cycle")
    return uf


def dzbar_representative(mono: Monomial, m: int, point: int) -> int:
    """Point that carries ``dzb^point`` once all identifications along ``mono`` are made."""
    return forest(m, (f.pair for f in mono.factors)).find(point)


def torus_context(n: int, m: int, max_deriv: int = 8) -> Context:
    return Context(n, m, TORUS, max_deriv=max_deriv, max_poly_deg=0)


def torus_multiply(x: CohClass, y: CohClass) -> CohClass:
    """Reduced product of torus classes (same-pair products raise for n = 1)."""
    if not (x.ctx.torus and y.ctx.torus):
        raise ValueError("torus_multiply needs torus-mode classes")
    return multiply(x, y)


def torus_dim_table(n: int, m: int, D: int, p_range: Iterable[int], q_range: Iterable[int]) -> DimensionTable:
    """Counts of admissible torus monomials per bidegree."""
    ctx = torus_context(n, m)
    trunc = Truncation(D, 0)
    q_range = list(q_range)
    entries = {}
    for p in p_range:
        for q in q_range:
            entries[(p, q)] = len(enumerate_basis(ctx, trunc, (p, q)))
    return DimensionTable(entries, label=f"torus n={n} m={m} D={D}")


def _index_tuples(m: int, k: int):
    """All (pairs) with 1 < b_1 < ... < b_k <= m and a_i < b_i."""
    for bs in combinations(range(2, m + 1), k):
        for as_ in product(*(range(1, b) for b in bs)):
            yield tuple(zip(as_, bs))


def e2_dim_table(n: int, m: int, D: int, p_range: Iterable[int], q_range: Iterable[int]) -> DimensionTable:
    """E2-page dimensions from trivial bundles on the diagonal subtori.

    A tuple of k pairs contributes holomorphic forms on X^m, one derivative
    decoration per pair, and the antiholomorphic cohomology of an
    n(m-k)-dimensional subtorus shifted by k(n-1).
    """
    q_range = list(q_range)
    per_factor = multiindex_count(n, D)
    entries = {}
    for p in p_range:
        for q in q_range:
            total = 0
            if p >= 0 and q >= 0:
                for k in range(m):
                    rest = q - k * (n - 1)
                    if rest < 0:
                        continue
                    tuples = sum(1 for _ in _index_tuples(m, k))
                    total += tuples * comb(n * m, p) * per_factor ** k * comb(n * (m - k), rest)
            entries[(p, q)] = total
    return DimensionTable(entries, label=f"E2 n={n} m={m} D={D}")


def degeneration_check(n: int, m: int, D: int, p_range: Sequence[int], q_range: Sequence[int]) -> bool:
    return torus_dim_table(n, m, D, p_range, q_range) == e2_dim_table(n, m, D, p_range, q_range)
