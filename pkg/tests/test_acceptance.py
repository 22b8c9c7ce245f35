"""Acceptance criteria; each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are written
straight to the terminal, bypassing output capture).
"""
from __future__ import annotations

import json
import random
import time
from fractions import Fraction
from itertools import product

import jsonschema
import pytest

from dolbeault.algebra import multi_indices_upto
from dolbeault.classes import CohClass, Context, Monomial, OmegaFactor, Truncation, enumerate_basis
from dolbeault.engine import Window, arnold_relations, build_relation_space, multiply, product_of, reduce
from dolbeault.oracle import PointConfig, check_product, eval_class
from dolbeault.quadrature import (
    QuadratureGrid, coordinate_change_check_n1, lie_derivative_check, sphere_residue_numeric,
)
from dolbeault.residues import pairing, pairing_rows, residue_matrix_rank
from dolbeault.serialize import JSON_SCHEMA, emit, from_json, parse
from dolbeault.torus import degeneration_check

from _gen import random_generator, random_homogeneous, random_normal_form, random_raw_class, total_degree


@pytest.fixture
def report(capsys):
    def _report(number: int, name: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"
    return _report


def test_01_arnold_vanishing(report):
    t0 = time.perf_counter()
    failures, count = [], 0
    for n in (1, 2, 3):
        ctx = Context(n, 3)
        for rel in arnold_relations(ctx, 1, 2, 3, 3):
            count += 1
            if not reduce(CohClass(ctx, rel.terms)).is_zero():
                failures.append((n, rel))
    elapsed = time.perf_counter() - t0
    report(1, "decorated Arnold combinations reduce to zero", not failures and elapsed < 10,
           f"{count} combinations, {len(failures)} nonzero, {elapsed:.1f}s")


def _n1_generator(ctx, rng, allow_z):
    if allow_z and rng.random() < 0.3:
        return random_generator(ctx, rng, kinds=("z",))
    return random_generator(ctx, rng, D=3, kinds=("w",))


def test_02_n1_oracle_equivalence(report):
    rng = random.Random(20240602)
    t0 = time.perf_counter()
    mismatches, checked = 0, 0
    for trial in range(1000):
        m = rng.randint(2, 4)
        # four kernels of order 3 on one pair merge to order 15
        ctx = Context(1, m, max_deriv=15, max_poly_deg=3)
        gens, zs = [], 0
        for _ in range(rng.randint(1, 4)):
            g = _n1_generator(ctx, rng, zs < 3)
            zs += any(mono.poly for mono in g)
            gens.append(g)
        engine = product_of(ctx, gens)
        for _ in range(100):
            P = PointConfig.random(m, rng)
            direct = Fraction(1)
            for g in gens:
                direct *= eval_class(g, P)
            checked += 1
            if eval_class(engine, P) != direct:
                mismatches += 1
    elapsed = time.perf_counter() - t0
    report(2, "n=1 products agree with rational evaluation", mismatches == 0 and elapsed < 60,
           f"1000 products, {checked} evaluations, {mismatches} mismatches, {elapsed:.1f}s")


def test_03_same_pair_rule(report):
    ctx = Context(1, 2, max_deriv=9)
    bad = []
    for p, q in product(range(5), repeat=2):
        x = CohClass.monomial(ctx, Monomial((), (), (OmegaFactor(1, 2, (p,)),)))
        y = CohClass.monomial(ctx, Monomial((), (), (OmegaFactor(1, 2, (q,)),)))
        coeff = Fraction(1)
        for t in range(1, p + 1):
            coeff *= t
        for t in range(1, q + 1):
            coeff *= t
        for t in range(1, p + q + 2):
            coeff /= t
        expected = CohClass.monomial(ctx, Monomial((), (), (OmegaFactor(1, 2, (p + q + 1,)),)), coeff)
        ok, _ = check_product(x, y, trials=100, seed=p * 5 + q)
        if multiply(x, y) != expected or not ok:
            bad.append((p, q))
    report(3, "same-pair products for n=1, p,q <= 4", not bad, f"25 pairs, failing {bad}")


# windows for criterion 4; m = 4 uses the largest window (every smaller
# window's instances are instances of it) and, for n = 2, factor count <= 3
PIVOT_WINDOWS = [(n, m, D, d, None) for n in (1, 2) for m in (2, 3) for D in range(3) for d in range(3)]
PIVOT_WINDOWS += [(1, 4, 2, 2, None), (2, 4, 2, 2, 3)]


def test_04_pivot_discipline_and_residue_rank(report):
    t0 = time.perf_counter()
    bad_pivots, bad_ranks, sizes = [], [], []
    for n, m, D, d, k_max in PIVOT_WINDOWS:
        rs = build_relation_space(Context(n, m), Window(Truncation(D, d), k_max=k_max))
        sizes.append(len(rs.ambient))
        if not rs.inadmissible_pivots_only():
            bad_pivots.append((n, m, D, d))
    for n in (1, 2):
        for m in (2, 3, 4):
            ctx = Context(n, m)
            for D, d in product(range(3), repeat=2):
                for p, q in product(range(n * m + 1), repeat=2):
                    size = len(enumerate_basis(ctx, Truncation(D, d), (p, q)))
                    if residue_matrix_rank(ctx, Truncation(D, d), (p, q)) != size:
                        bad_ranks.append((n, m, D, d, p, q))
    elapsed = time.perf_counter() - t0
    report(4, "pivots are inadmissible; residue rank equals basis count",
           not bad_pivots and not bad_ranks,
           f"{len(PIVOT_WINDOWS)} windows up to {max(sizes)} monomials, pivot failures {bad_pivots}, "
           f"rank failures {bad_ranks[:5]}, {elapsed:.0f}s")


def test_05_ring_axioms(report):
    rng = random.Random(5)
    ctx = Context(2, 3)
    comm = assoc = 0
    for _ in range(500):
        x, y, z = (random_homogeneous(ctx, rng, terms=3, max_len=3) for _ in range(3))
        sign = -1 if total_degree(x) * total_degree(y) % 2 else 1
        comm += multiply(x, y) != multiply(y, x).scale(sign)
        assoc += multiply(multiply(x, y), z) != multiply(x, multiply(y, z))
    report(5, "graded commutativity and associativity (n=2, m=3)", comm == 0 and assoc == 0,
           f"500 triples, {comm} commutativity and {assoc} associativity failures")


def test_06_reduce_idempotent_and_order_independent(report):
    rng = random.Random(6)
    contexts = [Context(1, 3), Context(1, 4), Context(2, 3), Context(2, 4), Context(3, 3)]
    failures = 0
    for i in range(500):
        ctx = contexts[i % len(contexts)]
        x = random_raw_class(ctx, rng, terms=3, max_len=4, D=2)
        nf = reduce(x)
        forms = {reduce(x, shuffle_seed=s) for s in range(5)}
        failures += forms != {nf} or reduce(nf) != nf
    report(6, "reduce is idempotent and insertion-order independent", failures == 0,
           f"500 inputs x 5 shuffles, {failures} failures")


def test_07_quadrature(report):
    t0 = time.perf_counter()
    grid = QuadratureGrid.cube(64)
    errors = {"I=0": abs(sphere_residue_numeric(2, (0, 0), grid) - 1)}
    for I in [I for I in multi_indices_upto(2, 2) if sum(I)]:
        errors[f"I={I}"] = abs(sphere_residue_numeric(2, I, grid))
    for j in (1, 2):
        errors[f"lie j={j}"] = abs(lie_derivative_check(2, j, grid))
    sphere_ok = all(e < 1e-6 for e in errors.values())
    contour = {
        "w=z": abs(coordinate_change_check_n1([1], 0.5, grid)),
        "w=z+z^2": abs(coordinate_change_check_n1([1, 1], 0.1, grid)),
        "w=2z": abs(coordinate_change_check_n1([2], 0.5, grid)),
    }
    contour_ok = all(e < 1e-8 for e in contour.values())
    elapsed = time.perf_counter() - t0
    worst = max(list(errors.values()) + list(contour.values()))
    report(7, "sphere residues, Lie derivatives and coordinate change",
           sphere_ok and contour_ok and elapsed < 30, f"worst error {worst:.1e}, {elapsed:.1f}s")


def test_08_residue_projection(report):
    rng = random.Random(8)
    ctx = Context(2, 3)
    not_identity, literal_mismatch = [], 0
    for D, d in product(range(3), repeat=2):
        trunc = Truncation(D, d)
        for p, q in product(range(7), repeat=2):
            basis = enumerate_basis(ctx, trunc, (p, q))
            rows = pairing_rows(ctx, basis, basis)
            if any(row != {i: 1} for i, row in enumerate(rows)):
                not_identity.append((D, d, p, q))
            # the grouped matrix agrees with iterated residue_coeff calls
            for _ in range(min(20, len(basis))):
                i, j = rng.randrange(len(basis)), rng.randrange(len(basis))
                for a, b in ((i, i), (i, j)):
                    value = pairing(CohClass.monomial(ctx, basis[a]), basis[b])
                    literal_mismatch += value != rows[a].get(b, 0)
    nonzero = 0
    relations = 0
    for n in (1, 2):
        rctx = Context(n, 3)
        rs = build_relation_space(rctx, Window(Truncation(2, 2)), record=True)
        for rel in rs.relations:
            relations += 1
            nonzero += not reduce(CohClass(rctx, rel.terms)).is_zero()
    report(8, "residue pairing is the identity and kills relations",
           not not_identity and literal_mismatch == 0 and nonzero == 0,
           f"non-identity blocks {not_identity}, {literal_mismatch} sampled mismatches, "
           f"{relations} relations with {nonzero} nonzero residues")


def test_09_torus_degeneration(report):
    t0 = time.perf_counter()
    results = {}
    for n, m, D in [(1, 2, 2), (2, 2, 2), (2, 3, 1)]:
        top = n * m
        results[(n, m, D)] = degeneration_check(n, m, D, range(top + 1), range(top + 1))
    elapsed = time.perf_counter() - t0
    report(9, "torus tables equal E2 tables", all(results.values()) and elapsed < 10,
           f"{results}, {elapsed:.2f}s")


def test_10_round_trip(report):
    rng = random.Random(10)
    contexts = [Context(1, 3), Context(2, 3), Context(2, 4), Context(3, 3)]
    text_bad = json_bad = schema_bad = 0
    for i in range(200):
        ctx = contexts[i % len(contexts)]
        x = random_normal_form(ctx, rng, terms=4, max_len=3, D=2)
        text_bad += parse(emit(x), ctx) != x
        doc = json.loads(emit(x, "json"))
        json_bad += from_json(doc) != x
        try:
            jsonschema.validate(doc, JSON_SCHEMA)
        except jsonschema.ValidationError:
            schema_bad += 1
    report(10, "parse(emit(x)) == x and JSON matches the schema", text_bad == json_bad == schema_bad == 0,
           f"200 classes, {text_bad} text, {json_bad} json, {schema_bad} schema failures")
