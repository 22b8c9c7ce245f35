"""Sparse exact echelon forms over Q with a caller-supplied monomial order.

Entries are kept as GMP rationals internally; they compare and hash like
``fractions.Fraction`` and convert to it losslessly.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional

from gmpy2 import mpq

Vector = Dict[Hashable, mpq]


def to_mpq(c) -> mpq:
    if isinstance(c, Fraction):
        return mpq(int(c.numerator), int(c.denominator))
    return mpq(c)


def to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class _Desc:
    """Heap entry that pops the largest key first."""

    __slots__ = ("k", "m")

    def __init__(self, k, m):
        self.k = k
        self.m = m

    def __lt__(self, other):
        return self.k > other.k


class EchelonSpace:
    """Span of sparse vectors kept with distinct, monic pivots.

    The pivot of a row is its largest monomial under ``key``. Rows are
    reduced against earlier rows at insertion time, so reduction of an
    arbitrary vector terminates and its remainder does not depend on the
    order in which rows were inserted.
    """

    def __init__(self, key: Callable[[Hashable], object]):
        self._key_fn = key
        self._keys: Dict[Hashable, object] = {}
        self.rows: Dict[Hashable, Vector] = {}
        self.inserted = 0

    def key(self, mono):
        k = self._keys.get(mono)
        if k is None:
            k = self._key_fn(mono)
            self._keys[mono] = k
        return k

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[Hashable]:
        return sorted(self.rows, key=self.key, reverse=True)

    def leading(self, vec: Mapping) -> Optional[Hashable]:
        return max(vec, key=self.key) if vec else None

    def reduce(self, vec: Mapping) -> Vector:
        """Remainder of ``vec`` after eliminating every pivot monomial."""
        acc: Vector = {m: to_mpq(c) for m, c in vec.items() if c}
        if not self.rows:
            return acc
        heap = [_Desc(self.key(m), m) for m in acc if m in self.rows]
        heapq.heapify(heap)
        done = set()
        while heap:
            m = heapq.heappop(heap).m
            if m in done:
                continue
            done.add(m)
            c = acc.pop(m, None)
            if not c:
                continue
            for m2, c2 in self.rows[m].items():
                if m2 == m:
                    continue
                v = acc.get(m2, 0) - c * c2
                if v:
                    acc[m2] = v
                    if m2 in self.rows and m2 not in done:
                        heapq.heappush(heap, _Desc(self.key(m2), m2))
                else:
                    acc.pop(m2, None)
        return acc

    def _top_reduce(self, vec: Mapping):
        """Cancel leading terms against rows until the leader is not a pivot."""
        acc: Vector = {m: to_mpq(c) for m, c in vec.items() if c}
        heap = [_Desc(self.key(m), m) for m in acc]
        heapq.heapify(heap)
        while heap:
            m = heapq.heappop(heap).m
            c = acc.get(m)
            if not c:
                continue
            row = self.rows.get(m)
            if row is None:
                return acc, m
            del acc[m]
            for m2, c2 in row.items():
                if m2 == m:
                    continue
                old = acc.get(m2)
                if old is None:
                    acc[m2] = -c * c2
                    heapq.heappush(heap, _Desc(self.key(m2), m2))
                else:
                    v = old - c * c2
                    if v:
                        acc[m2] = v
                    else:
                        del acc[m2]
        return acc, None

    def insert(self, vec: Mapping) -> bool:
        """Add ``vec`` to the span; False when it was already dependent.

        Only leading terms are reduced, so rows form a triangular (not fully
        reduced) basis; :meth:`reduce` still yields the unique remainder
        supported off the pivot set.
        """
        self.inserted += 1
        r, piv = self._top_reduce(vec)
        if piv is None:
            return False
        c = r[piv]
        self.rows[piv] = {m: v / c for m, v in r.items()}
        return True

    def extend(self, vecs: Iterable[Mapping]) -> int:
        return sum(1 for v in vecs if self.insert(v))

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def rref(self) -> Dict[Hashable, Vector]:
        """Fully reduced rows: no row mentions another row's pivot."""
        out = {}
        for piv, row in self.rows.items():
            tail = {m: c for m, c in row.items() if m != piv}
            red = self.reduce(tail)
            red[piv] = mpq(1)
            out[piv] = red
        return out


def rank_of(rows: List[Mapping], key: Callable = repr) -> int:
    space = EchelonSpace(key)
    return space.extend(rows)


class IndexedEchelon:
    """Triangular basis of a span of sparse vectors over a fixed, pre-ordered ambient.

    Coordinates are integers whose natural order is the monomial order, so
    pivot bookkeeping runs on machine integers.
    """

    def __init__(self):
        self.rows: Dict[int, Dict[int, mpq]] = {}
        self.inserted = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _eliminate(self, vec: Mapping[int, object], full: bool):
        acc: Dict[int, mpq] = {i: to_mpq(c) for i, c in vec.items() if c}
        heap = [-i for i in acc]
        heapq.heapify(heap)
        rows = self.rows
        pop, push = heapq.heappop, heapq.heappush
        last = None
        while heap:
            i = -pop(heap)
            if i == last:
                continue
            last = i
            c = acc.get(i)
            if not c:
                continue
            row = rows.get(i)
            if row is None:
                if full:
                    continue
                return acc, i
            del acc[i]
            for j, cj in row.items():
                if j == i:
                    continue
                old = acc.get(j)
                if old is None:
                    acc[j] = -c * cj
                    push(heap, -j)
                else:
                    v = old - c * cj
                    if v:
                        acc[j] = v
                    else:
                        del acc[j]
        return acc, None

    def reduce(self, vec: Mapping[int, object]) -> Dict[int, mpq]:
        return self._eliminate(vec, True)[0]

    def insert(self, vec: Mapping[int, object]) -> bool:
        self.inserted += 1
        r, piv = self._eliminate(vec, False)
        if piv is None:
            return False
        c = r[piv]
        self.rows[piv] = {j: v / c for j, v in r.items()}
        return True
