"""Products and normal forms.

Reduction is exact linear algebra: every inadmissible monomial that shows
up gets a reducer relation (an instance of a decorated Arnold relation or a
point-splitting relation), reducers are echelonized in an
:class:`~dolbeault.linalg.EchelonSpace`, and the input is reduced against
that span. Monomials are ordered so that inadmissible ones sit above
admissible ones; the leading term of each reducer is the monomial it
eliminates.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    ANTI, HOLO, ONE, ZERO, MultiIndex, PolyMonomial, ext_normalize, factorial_ratio, odd_sort,
    mi_add, mi_order, mi_splits, mi_sub, multi_indices, multi_indices_upto, pm_degree, pm_from_dict,
    pm_mul, pm_points, pm_remove, poly_monomials, unit_index,
)
from .classes import (
    CohClass, Context, Monomial, OmegaFactor, Truncation, TruncationOverflow, UNIT, is_admissible,
    orient_factor,
)
from .linalg import EchelonSpace, IndexedEchelon, to_fraction

Terms = Dict[Monomial, Fraction]


class TorusSquareError(ValueError):
    """Same-pair products of torus kernels for n = 1 need Eisenstein data."""


@dataclass
class Relation:
    """A combination of monomials that vanishes in cohomology."""

    terms: Terms
    provenance: str

    def monomials(self):
        return self.terms.keys()


# ---------------------------------------------------------------- canonical form

def _add(acc: Terms, mono: Monomial, c) -> None:
    v = acc.get(mono, ZERO) + c
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


def canonicalize(ctx: Context, coeff, poly: PolyMonomial, ext: Sequence, factors: Sequence) -> Terms:
    """Bring ``coeff * poly * ext * factors`` to canonical monomials.

    Factors may be unoriented ``(a, b, J)`` triples in any order. Orients,
    sorts with Koszul signs and applies the same-pair product rule.
    """
    n = ctx.n
    if not coeff:
        return {}
    s, ext_word = ext_normalize(ext)
    if not s:
        return {}
    sign = s
    oriented = []
    for a, b, J in factors:
        if a < b:
            oriented.append(OmegaFactor(a, b, tuple(J)))
        else:
            f, sg = orient_factor(a, b, J, n)
            oriented.append(f)
            sign *= sg
    scale = None
    while True:
        if n % 2 == 0:
            s, fs = odd_sort(oriented, key=OmegaFactor.sort_key)
            sign *= s
        else:
            fs = sorted(oriented, key=OmegaFactor.sort_key)
        clash = next((i for i in range(len(fs) - 1) if fs[i].a == fs[i + 1].a and fs[i].b == fs[i + 1].b), None)
        if clash is None:
            break
        if n >= 2:
            return {}
        if ctx.torus:
            raise TorusSquareError(
                "same-pair product of torus kernels for n=1 requires Eisenstein data")
        f1, f2 = fs[clash], fs[clash + 1]
        p, q = f1.J[0], f2.J[0]
        r = factorial_ratio(p, q)
        scale = r if scale is None else scale * r
        oriented = fs[:clash] + [OmegaFactor(f1.a, f1.b, (p + q + 1,))] + fs[clash + 2:]
    c = Fraction(coeff) if sign > 0 else -Fraction(coeff)
    if scale is not None:
        c *= scale
    return {Monomial(poly, ext_word, tuple(fs)): c}


def canonical_class(ctx: Context, raw: Iterable[Tuple[object, PolyMonomial, Sequence, Sequence]]) -> CohClass:
    acc: Terms = {}
    for c, poly, ext, factors in raw:
        for mono, v in canonicalize(ctx, c, poly, ext, factors).items():
            _add(acc, mono, v)
    return CohClass(ctx, acc)


def mono_product(ctx: Context, x: Monomial, y: Monomial) -> Terms:
    """Canonical expansion of the product x*y (no relation elimination)."""
    sign = -1 if (len(y.ext) * len(x.factors) * (ctx.n - 1)) % 2 else 1
    return canonicalize(ctx, sign, pm_mul(x.poly, y.poly), x.ext + y.ext, x.factors + y.factors)


def _check_caps(ctx: Context, terms: Terms) -> None:
    for mono in terms:
        if mono.max_deriv() > ctx.max_deriv:
            raise TruncationOverflow(
                f"derivative order {mono.max_deriv()} exceeds cap {ctx.max_deriv}")
        if pm_degree(mono.poly) > ctx.max_poly_deg:
            raise TruncationOverflow(
                f"coefficient degree {pm_degree(mono.poly)} exceeds cap {ctx.max_poly_deg}")


# ---------------------------------------------------------------- relations

def square_rule(f1: OmegaFactor, f2: OmegaFactor, n: int) -> List[Tuple[Fraction, OmegaFactor]]:
    """Product of two decorated kernels on the same pair.

    Zero for n >= 2; for n = 1, d^p w * d^q w = p! q!/(p+q+1)! d^{p+q+1} w.
    """
    if f1.pair != f2.pair:
        raise ValueError("square_rule needs two factors on the same pair")
    if n >= 2:
        return []
    p, q = f1.J[0], f2.J[0]
    return [(factorial_ratio(p, q), OmegaFactor(f1.a, f1.b, (p + q + 1,)))]


_ARNOLD_BASE = (((1, 2), (2, 3)), ((2, 3), (3, 1)), ((3, 1), (1, 2)))


def _apply_derivs(pair_word, derivs: Dict[int, MultiIndex], n: int):
    """Leibniz expansion of prod_p d^{D_p}_{z^p} applied to a word of kernels.

    Each kernel in ``pair_word`` is ``(u, v)`` with decoration stored with
    respect to ``v``; d/dz^u acts as minus d/dz^v.
    """
    zero = (0,) * n
    states = [(1, [zero] * len(pair_word))]
    for p, D in derivs.items():
        if not any(D):
            continue
        holders = [i for i, (u, v) in enumerate(pair_word) if p in (u, v)]
        if not holders:
            return []
        new_states = []
        for c, Js in states:
            for parts in _distribute(D, len(holders)):
                c2 = c
                Js2 = list(Js)
                for i, (K, w) in zip(holders, parts):
                    u, v = pair_word[i]
                    c2 *= w
                    if p == u and mi_order(K) % 2:
                        c2 = -c2
                    Js2[i] = mi_add(Js2[i], K)
                new_states.append((c2, Js2))
        states = new_states
    return states


def _distribute(D: MultiIndex, slots: int):
    """Split D over ``slots`` holders with multinomial weights."""
    if slots == 1:
        yield [(D, 1)]
        return
    for K, L, w in mi_splits(D):
        for rest in _distribute(L, slots - 1):
            yield [(K, w)] + rest


def decorated_arnold(ctx: Context, pts: Tuple[int, int, int], derivs: Tuple[MultiIndex, MultiIndex, MultiIndex]) -> Terms:
    """d^A_{z^a} d^B_{z^b} d^C_{z^c} (w_ab w_bc + w_bc w_ca + w_ca w_ab), canonicalized."""
    a, b, c = pts
    label = {1: a, 2: b, 3: c}
    dmap = {1: tuple(derivs[0]), 2: tuple(derivs[1]), 3: tuple(derivs[2])}
    acc: Terms = {}
    for word in _ARNOLD_BASE:
        for coef, Js in _apply_derivs(word, dmap, ctx.n):
            raw = [(label[u], label[v], J) for (u, v), J in zip(word, Js)]
            for mono, val in canonicalize(ctx, coef, (), (), raw).items():
                _add(acc, mono, val)
    return acc


def arnold_relations(ctx: Context, a: int, b: int, c: int, budget: int) -> List[Relation]:
    """All derivative-decorated Arnold relations on the points a, b, c.

    Derivatives are distributed over the three points with total order at
    most ``budget``; identically vanishing expansions are dropped.
    """
    if len({a, b, c}) != 3:
        raise ValueError("Arnold relations need three distinct points")
    n = ctx.n
    out = []
    for total in range(budget + 1):
        for A_ord in range(total + 1):
            for B_ord in range(total - A_ord + 1):
                C_ord = total - A_ord - B_ord
                for A in multi_indices(n, A_ord):
                    for B in multi_indices(n, B_ord):
                        for C in multi_indices(n, C_ord):
                            terms = decorated_arnold(ctx, (a, b, c), (A, B, C))
                            if terms:
                                out.append(Relation(terms, "arnold"))
    return out


def split_relation_terms(ctx: Context, mono: Monomial, var: Tuple[int, int], idx: int) -> Terms:
    """Point-splitting applied to one coefficient variable of ``mono``.

    With factor ``d^J_{z^b} w_ab`` at position ``idx`` and ``var = z^b_j``:
    z^b_j * X = z^a_j * X - J_j * X[J - e_j]  (- X without the factor if
    n = 1 and J = 0). Returns the relation mono - (right-hand side).
    """
    f = mono.factors[idx]
    b, j = var
    if b != f.b:
        raise ValueError("variable does not sit at the factor's punctured point")
    rest = pm_remove(mono.poly, var)
    acc: Terms = {mono: ONE}
    moved = Monomial(pm_mul(rest, (((f.a, j), 1),)), mono.ext, mono.factors)
    _add(acc, moved, -ONE)
    Jj = f.J[j - 1]
    if Jj:
        lowered = mono.factors[:idx] + (OmegaFactor(f.a, f.b, mi_sub(f.J, unit_index(ctx.n, j))),) + mono.factors[idx + 1:]
        _add(acc, Monomial(rest, mono.ext, lowered), Fraction(Jj))
    elif ctx.n == 1:
        _add(acc, Monomial(rest, mono.ext, mono.factors[:idx] + mono.factors[idx + 1:]), ONE)
    return acc


def split_relations(ctx: Context, mono: Monomial) -> List[Relation]:
    """Every point-splitting relation anchored at a punctured coefficient variable."""
    out = []
    seen = set()
    for idx, f in enumerate(mono.factors):
        for (a, j), _ in mono.poly:
            if a == f.b and (a, j, idx) not in seen:
                seen.add((a, j, idx))
                out.append(Relation(split_relation_terms(ctx, mono, (a, j), idx), "split"))
    return out


def antiholo_relation_terms(ctx: Context, mono: Monomial, gen, idx: int) -> Terms:
    """(dzbar^b_j - dzbar^a_j) w~_ab = 0 applied to one generator of ``mono``."""
    f = mono.factors[idx]
    kind, b, j = gen
    acc: Terms = {mono: ONE}
    pos = mono.ext.index(gen)
    new_ext = mono.ext[:pos] + ((ANTI, f.a, j),) + mono.ext[pos + 1:]
    s, word = ext_normalize(new_ext)
    if s:
        _add(acc, Monomial(mono.poly, word, mono.factors), Fraction(-s))
    return acc


# ---------------------------------------------------------------- local collision table

@lru_cache(maxsize=None)
def collision_table(n: int, T: MultiIndex) -> Dict[Tuple[MultiIndex, MultiIndex], Tuple[Tuple[Fraction, OmegaFactor, OmegaFactor], ...]]:
    """Normal forms of d^I w_13 * d^J w_23 for all I + J = T on points 1 < 2 < 3.

    Solved by echelonizing every decorated Arnold relation of total
    decoration T on the triple, with the repeated-b products ordered first.
    """
    ctx = Context(n, 3)
    space = EchelonSpace(_local_key)
    zero = (0,) * n
    for B_ord in range(sum(T) + 1):
        for B in multi_indices(n, B_ord):
            if any(bt > t for bt, t in zip(B, T)):
                continue
            C = mi_sub(T, B)
            terms = decorated_arnold(ctx, (1, 2, 3), (zero, B, C))
            if terms:
                space.insert(terms)
    table = {}
    for I_ord in range(sum(T) + 1):
        for I in multi_indices(n, I_ord):
            if any(i > t for i, t in zip(I, T)):
                continue
            J = mi_sub(T, I)
            mono = Monomial((), (), (OmegaFactor(1, 3, I), OmegaFactor(2, 3, J)))
            if mono not in space.rows:
                raise ArithmeticError(f"Arnold relations do not eliminate {mono} (n={n}, T={T})")
            nf = space.reduce({mono: ONE})
            table[(I, J)] = tuple((to_fraction(c), m.factors[0], m.factors[1]) for m, c in sorted(nf.items(), key=lambda t: t[0].canonical_key()))
    return table


def _local_key(mono: Monomial):
    bs = [f.b for f in mono.factors]
    return (len(set(bs)) < len(bs), mono.canonical_key())


# ---------------------------------------------------------------- monomial order

def order_key(mono: Monomial):
    """Inadmissible monomials first, then a rewriting-decreasing refinement.

    Secondary key: second indices sorted descending (collisions replace a
    repeated b by a smaller one). Tertiary key: point weight of the
    coefficient and antiholomorphic generators (splitting moves weight from
    b to a < b).
    """
    bs = [f.b for f in mono.factors]
    punct = set(bs)
    bad = (len(punct) < len(bs)
           or bool(pm_points(mono.poly) & punct)
           or any(g[0] == ANTI and g[1] in punct for g in mono.ext))
    weight = sum(a * e for (a, _), e in mono.poly) + sum(g[1] for g in mono.ext if g[0] == ANTI)
    return (bad, tuple(sorted(bs, reverse=True)), weight, mono.canonical_key())


def is_reducible(ctx: Context, mono: Monomial) -> bool:
    return order_key(mono)[0]


# ---------------------------------------------------------------- engine

def reducer(ctx: Context, mono: Monomial) -> Optional[Relation]:
    """The relation whose leading monomial is ``mono`` (None if admissible)."""
    fs = mono.factors
    for i in range(len(fs) - 1):
        if fs[i].b == fs[i + 1].b:
            f1, f2 = fs[i], fs[i + 1]
            T = mi_add(f1.J, f2.J)
            label = {1: f1.a, 2: f2.a, 3: f1.b}
            acc: Terms = {mono: ONE}
            for c, g1, g2 in collision_table(ctx.n, T)[(f1.J, f2.J)]:
                new = fs[:i] + (OmegaFactor(label[g1.a], label[g1.b], g1.J),
                                OmegaFactor(label[g2.a], label[g2.b], g2.J)) + fs[i + 2:]
                for m2, v in canonicalize(ctx, c, mono.poly, mono.ext, new).items():
                    _add(acc, m2, -v)
            _check_caps(ctx, acc)
            return Relation(acc, "arnold")
    where = {f.b: idx for idx, f in enumerate(fs)}
    for gen in mono.ext:
        if gen[0] == ANTI and gen[1] in where:
            return Relation(antiholo_relation_terms(ctx, mono, gen, where[gen[1]]), "antiholo")
    for var, _ in sorted(mono.poly, key=lambda t: (-t[0][0], t[0][1])):
        if var[0] in where:
            return Relation(split_relation_terms(ctx, mono, var, where[var[0]]), "split")
    return None


def reducer_closure(ctx: Context, monos: Iterable[Monomial], known=()) -> List[Relation]:
    """Reducers for every inadmissible monomial reachable from ``monos``."""
    known = set(known)
    pending = [m for m in monos if is_reducible(ctx, m) and m not in known]
    out = []
    while pending:
        m = pending.pop()
        if m in known:
            continue
        known.add(m)
        rel = reducer(ctx, m)
        out.append(rel)
        pending.extend(m2 for m2 in rel.terms if m2 not in known and is_reducible(ctx, m2))
    return out


class Engine:
    """Normal-form engine for one context; its relation space only grows."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.space = EchelonSpace(order_key)

    def ensure(self, monos: Iterable[Monomial]) -> None:
        for rel in reducer_closure(self.ctx, monos, known=self.space.rows):
            self.space.insert(rel.terms)

    def reduce_terms(self, terms: Terms) -> Terms:
        _check_caps(self.ctx, terms)
        self.ensure(terms)
        out = {m: to_fraction(c) for m, c in self.space.reduce(terms).items()}
        assert all(is_admissible(m, self.ctx) for m in out), "reduction left an inadmissible monomial"
        return out

    def reduce(self, x: CohClass) -> CohClass:
        return CohClass(self.ctx, self.reduce_terms(x.terms))

    def multiply(self, x: CohClass, y: CohClass) -> CohClass:
        acc: Terms = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for m, v in mono_product(self.ctx, m1, m2).items():
                    _add(acc, m, c1 * c2 * v)
        return CohClass(self.ctx, self.reduce_terms(acc))


_ENGINES: Dict[Context, Engine] = {}


def engine_for(ctx: Context) -> Engine:
    eng = _ENGINES.get(ctx)
    if eng is None:
        eng = _ENGINES[ctx] = Engine(ctx)
    return eng


def reduce(x: CohClass, shuffle_seed: Optional[int] = None) -> CohClass:
    """Unique admissible representative of ``x``.

    With ``shuffle_seed`` the reducer relations are inserted into a fresh
    echelon space in a random order instead of the shared cached one.
    """
    if shuffle_seed is None:
        return engine_for(x.ctx).reduce(x)
    ctx = x.ctx
    terms = x.terms
    _check_caps(ctx, terms)
    rels = reducer_closure(ctx, terms)
    random.Random(shuffle_seed).shuffle(rels)
    space = EchelonSpace(order_key)
    for rel in rels:
        space.insert(rel.terms)
    return CohClass(ctx, space.reduce(terms))


def multiply(x: CohClass, y: CohClass) -> CohClass:
    if not x.ctx.same_ring(y.ctx):
        raise ValueError("classes live in different contexts")
    return engine_for(x.ctx).multiply(x, y)


def product_of(ctx: Context, factors: Sequence[CohClass]) -> CohClass:
    out = CohClass.one(ctx)
    for f in factors:
        out = multiply(out, f)
    return out


# ---------------------------------------------------------------- full windows

@dataclass(frozen=True)
class Window:
    """Graded truncated monomial window: caps, holomorphic degree p and factor count."""

    trunc: Truncation
    p: int = 0
    k_max: Optional[int] = None
    k_min: int = 0


def weight(ctx: Context, mono: Monomial) -> Tuple[int, ...]:
    """Per-coordinate homogeneity: coefficient degree minus derivative order minus k.

    Every relation is homogeneous for this grading, so windows split into
    independent components.
    """
    w = [-len(mono.factors)] * ctx.n
    for (_, j), e in mono.poly:
        w[j - 1] += e
    for f in mono.factors:
        for t, x in enumerate(f.J):
            w[t] -= x
    return tuple(w)


@dataclass
class RelationSpace:
    """Echelonized span of all relation instances inside one window.

    ``ambient`` is sorted ascending in the monomial order and coordinates
    are positions in it; the span is stored per weight component.
    """

    ctx: Context
    window: Window
    ambient: List[Monomial]
    components: Dict[Tuple[int, ...], IndexedEchelon] = field(default_factory=dict)
    provenance: Dict[str, int] = field(default_factory=dict)
    record: bool = False
    relations: List[Relation] = field(default_factory=list)

    def __post_init__(self):
        self.ambient = sorted(self.ambient, key=order_key)
        self.index = {mo: i for i, mo in enumerate(self.ambient)}

    @property
    def rank(self) -> int:
        return sum(sp.rank for sp in self.components.values())

    def pivots(self) -> List[Monomial]:
        return [self.ambient[i] for i in sorted((i for sp in self.components.values() for i in sp.rows), reverse=True)]

    def pivot_map(self) -> Dict[Monomial, Dict[Monomial, Fraction]]:
        amb = self.ambient
        return {amb[p]: {amb[i]: to_fraction(c) for i, c in row.items()}
                for sp in self.components.values() for p, row in sp.rows.items()}

    def inadmissible_pivots_only(self) -> bool:
        return all(not is_admissible(self.ambient[i], self.ctx) for sp in self.components.values() for i in sp.rows)

    def admissible_pivots(self) -> List[Monomial]:
        return [p for p in self.pivots() if is_admissible(p, self.ctx)]

    def _vector(self, terms: Terms) -> Dict[int, object]:
        try:
            return {self.index[mo]: c for mo, c in terms.items()}
        except KeyError as e:
            raise ValueError(f"{e.args[0]} lies outside the window") from None

    def reduce(self, terms: Terms) -> Terms:
        self._vector(terms)
        out: Terms = {}
        by_w: Dict[Tuple[int, ...], Terms] = {}
        for mono, c in terms.items():
            by_w.setdefault(weight(self.ctx, mono), {})[mono] = c
        for w, part in by_w.items():
            sp = self.components.get(w)
            if sp is None:
                out.update(part)
                continue
            for i, c in sp.reduce(self._vector(part)).items():
                out[self.ambient[i]] = to_fraction(c)
        return out

    def contains(self, terms: Terms) -> bool:
        return not self.reduce(terms)

    def insert(self, terms: Terms, tag: str) -> bool:
        if self.record:
            self.relations.append(Relation(dict(terms), tag))
        w = weight(self.ctx, next(iter(terms)))
        sp = self.components.get(w)
        if sp is None:
            sp = self.components[w] = IndexedEchelon()
        new = sp.insert(self._vector(terms))
        if new:
            self.provenance[tag] = self.provenance.get(tag, 0) + 1
        return new


def window_monomials(ctx: Context, window: Window) -> List[Monomial]:
    """Canonical (possibly inadmissible) monomials of the window."""
    n, m = ctx.n, ctx.m
    D, d = window.trunc.D, window.trunc.d
    pairs = list(combinations(range(1, m + 1), 2))
    js = list(multi_indices_upto(n, D))
    k_hi = len(pairs) if window.k_max is None else min(window.k_max, len(pairs))
    holo = [(HOLO, a, j) for a in range(1, m + 1) for j in range(1, n + 1)]
    exts = [tuple(sorted(w)) for w in combinations(holo, window.p)]
    polys = [()] if ctx.torus else poly_monomials([(a, j) for a in range(1, m + 1) for j in range(1, n + 1)], d)
    out = []
    for k in range(window.k_min, k_hi + 1):
        for ps in combinations(pairs, k):
            for Js in product(js, repeat=k):
                fs = sorted((OmegaFactor(a, b, J) for (a, b), J in zip(ps, Js)), key=OmegaFactor.sort_key)
                for ext in exts:
                    for poly in polys:
                        out.append(Monomial(poly, ext, tuple(fs)))
    return out


def _arnold_bases(ctx: Context, D: int, independent: bool = False) -> List[Terms]:
    """Decorated Arnold relations whose terms respect the derivative cap D.

    With ``independent`` only a basis of their span (per triple) is kept.
    """
    n, m = ctx.n, ctx.m
    out = []
    for pts in combinations(range(1, m + 1), 3):
        space = EchelonSpace(Monomial.canonical_key)
        for A in multi_indices_upto(n, 2 * D):
            for B in multi_indices_upto(n, 2 * D - sum(A)):
                for C in multi_indices_upto(n, 2 * D - sum(A) - sum(B)):
                    terms = decorated_arnold(ctx, pts, (A, B, C))
                    if terms and all(mo.max_deriv() <= D for mo in terms):
                        if not independent or space.insert(terms):
                            out.append(terms)
    return out


def build_relation_space(ctx: Context, window: Window, record: bool = False) -> RelationSpace:
    """Echelonize every relation instance lying entirely in the window.

    Instances are: point-splitting (and, for tori, antiholomorphic
    identification) anchored at each window monomial, and every
    multiplier * decorated-Arnold product. Same-pair products and
    orientation are applied during canonicalization. With ``record`` every
    generated instance is also kept in ``rs.relations``.
    """
    rs = RelationSpace(ctx, window, window_monomials(ctx, window), record=record)
    inside = rs.index
    ambient = rs.ambient
    for mono in ambient:
        for idx, f in enumerate(mono.factors):
            for var, _ in mono.poly:
                if var[0] == f.b:
                    rs.insert(split_relation_terms(ctx, mono, var, idx), "split")
            for gen in mono.ext:
                if gen[0] == ANTI and gen[1] == f.b:
                    rs.insert(antiholo_relation_terms(ctx, mono, gen, idx), "antiholo")
    k_hi = window.k_max if window.k_max is not None else len(list(combinations(range(ctx.m), 2)))
    mult_window = Window(window.trunc, 0, k_hi - 2 if ctx.n >= 2 else k_hi, 0)
    multipliers = window_monomials(ctx, mult_window) if k_hi >= 2 else []
    exts = sorted({mo.ext for mo in ambient})
    D = window.trunc.D
    # for n >= 2 every nonzero product lands in the window, so a basis of
    # the decorated Arnold span yields the same span of instances
    for base in _arnold_bases(ctx, D, independent=ctx.n >= 2):
        # n = 1 merges same-pair factors into order p + q + 1; skip multipliers
        # for which some product term would leave the window that way
        merge_cap = {}
        if ctx.n == 1:
            for bm in base:
                for f in bm.factors:
                    merge_cap[f.pair] = min(merge_cap.get(f.pair, D), D - 1 - mi_order(f.J))
        for mult in multipliers:
            if merge_cap and any(mi_order(f.J) > merge_cap.get(f.pair, D) for f in mult.factors):
                continue
            for ext in exts:
                left = Monomial(mult.poly, ext, mult.factors)
                acc: Terms = {}
                for bm, c in base.items():
                    for mo, v in mono_product(ctx, left, bm).items():
                        _add(acc, mo, c * v)
                if acc and all(mo in inside for mo in acc):
                    rs.insert(acc, "arnold")
    return rs
