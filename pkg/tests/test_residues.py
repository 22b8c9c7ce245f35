import pytest

from dolbeault.classes import CohClass, Context, Truncation, enumerate_basis
from dolbeault.engine import Window, build_relation_space, reduce
from dolbeault.residues import (
    ResidueQuery, iterated_queries, pairing, residue_coeff, residue_matrix_rank,
)
from dolbeault.serialize import parse


def P(text, n, m):
    return parse(text, Context(n, m))


def test_residue_examples():
    x = reduce(P("z(1,1)^2*d[2,0]w(1,2)", 2, 2))
    assert residue_coeff(x, ResidueQuery(1, 2, (2, 0))) == P("z(1,1)^2", 2, 2)
    assert residue_coeff(reduce(P("w(1,2)", 2, 2)), ResidueQuery(1, 2, (1, 0))).is_zero()
    x = reduce(P("w(1,2)*w(1,3)", 2, 3))
    assert residue_coeff(x, ResidueQuery(1, 3, (0, 0))) == P("w(1,2)", 2, 3)


def test_residue_reduces_raw_input():
    raw = P("w(1,3)*w(2,3)", 2, 3)
    assert residue_coeff(raw, ResidueQuery(2, 3, (0, 0))) == P("w(1,2)", 2, 3)


def test_residue_query_validation():
    with pytest.raises(ValueError):
        ResidueQuery(2, 1, (0,))
    with pytest.raises(ValueError):
        residue_coeff(P("w(1,2)", 1, 2), ResidueQuery(1, 2, (0, 0)))


def test_residue_rank_examples():
    assert residue_matrix_rank(Context(2, 2), Truncation(1, 0), (0, 1)) == 3
    assert residue_matrix_rank(Context(1, 3), Truncation(0, 0), (0, 0), min_factors=1) == 5
    assert residue_matrix_rank(Context(1, 3), Truncation(0, 0), (0, 1)) == 0


def test_pairing_is_identity_small():
    ctx = Context(2, 3)
    basis = enumerate_basis(ctx, Truncation(1, 1), (1, 1))
    for i, b in enumerate(basis[::5]):
        x = CohClass.monomial(ctx, b)
        for c in basis[::5]:
            assert pairing(x, c) == (1 if c == b else 0)


def test_iterated_queries_descend():
    (mono,) = P("w(1,2)*w(2,3)", 2, 3)
    assert [q.b for q in iterated_queries(mono)] == [3, 2]


@pytest.mark.parametrize("n", [1, 2])
def test_residues_annihilate_relations(n):
    ctx = Context(n, 3)
    rs = build_relation_space(ctx, Window(Truncation(1, 1)))
    for pivot, row in list(rs.pivot_map().items())[::4]:
        rel = CohClass(ctx, row)
        for b in enumerate_basis(ctx, Truncation(1, 1), next(iter(row)).bidegree(n))[::3]:
            assert pairing(rel, b) == 0
