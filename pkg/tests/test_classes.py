from math import prod
from itertools import combinations

import pytest

from dolbeault.algebra import multiindex_count
from dolbeault.classes import (
    CohClass, Context, Monomial, OmegaFactor, Truncation, dim_table, enumerate_basis, is_admissible,
    orient_factor,
)


def w(a, b, J):
    return OmegaFactor(a, b, tuple(J))


def test_orient_factor_examples():
    assert orient_factor(1, 2, (0, 0), 2) == (w(1, 2, (0, 0)), 1)
    assert orient_factor(2, 1, (0,), 1) == (w(1, 2, (0,)), -1)
    assert orient_factor(2, 1, (1, 0), 2) == (w(1, 2, (1, 0)), -1)
    with pytest.raises(ValueError):
        orient_factor(1, 1, (0,), 1)


def test_admissibility_examples():
    ctx = Context(2, 3)
    z0 = (0, 0)
    assert is_admissible(Monomial((), (), (w(1, 2, z0), w(2, 3, z0))), ctx)
    assert not is_admissible(Monomial((((2, 1), 1),), (), (w(1, 2, z0),)), ctx)
    assert not is_admissible(Monomial((), (), (w(1, 3, z0), w(2, 3, z0))), ctx)


def test_enumerate_examples():
    basis = enumerate_basis(Context(2, 2), Truncation(1, 0), (0, 1))
    assert sorted(f.J for b in basis for f in b.factors) == [(0, 0), (0, 1), (1, 0)]
    assert enumerate_basis(Context(2, 2), Truncation(3, 0), (0, 0)) == [Monomial()]
    b3 = enumerate_basis(Context(1, 3), Truncation(0, 0), (0, 0))
    words = {tuple(f.pair for f in b.factors) for b in b3}
    assert words == {(), ((1, 2),), ((1, 3),), ((2, 3),), ((1, 2), (2, 3)), ((1, 2), (1, 3))}


def test_dim_table_examples():
    assert dim_table(Context(2, 2), Truncation(1, 0), [0], [1])[(0, 1)] == 3
    assert dim_table(Context(2, 2), Truncation(0, 1), [0], [1])[(0, 1)] == 3
    assert dim_table(Context(2, 2), Truncation(1, 1), [0], [-1])[(0, -1)] == 0


@pytest.mark.parametrize("n,m,D", [(2, 3, 1), (2, 4, 0), (3, 3, 1), (2, 4, 2)])
def test_closed_form_count_at_pure_kernel_degrees(n, m, D):
    ctx = Context(n, m)
    for k in range(m):
        expected = sum(prod(b - 1 for b in bs) for bs in combinations(range(2, m + 1), k)) * multiindex_count(n, D) ** k
        assert len(enumerate_basis(ctx, Truncation(D, 0), (0, k * (n - 1)))) == expected


@pytest.mark.parametrize("n,m", [(1, 3), (2, 3), (2, 2)])
def test_enumeration_is_admissible_and_duplicate_free(n, m):
    ctx = Context(n, m)
    for p in range(n * m + 1):
        for q in range(n * m + 1):
            basis = enumerate_basis(ctx, Truncation(1, 1), (p, q))
            assert len(set(basis)) == len(basis)
            assert all(is_admissible(b, ctx) and b.bidegree(n) == (p, q) for b in basis)


def test_n1_cohomology_sits_in_q_zero():
    ctx = Context(1, 4)
    assert all(not enumerate_basis(ctx, Truncation(2, 2), (p, q)) for p in range(5) for q in range(1, 5))


def test_class_arithmetic():
    ctx = Context(1, 2)
    x = CohClass.monomial(ctx, Monomial((), (), (w(1, 2, (0,)),)), 3)
    assert (x - x).is_zero()
    assert (x + x) == x.scale(2)
    assert CohClass.one(ctx).coefficient(Monomial()) == 1


def test_dimension_table_serialization():
    t = dim_table(Context(2, 2), Truncation(1, 0), [0], [0, 1])
    assert t.to_csv() == "p,q,dim\n0,0,1\n0,1,3\n"
    assert t.to_json()["entries"][1] == {"p": 0, "q": 1, "dim": 3}
