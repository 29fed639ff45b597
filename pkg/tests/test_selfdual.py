import math
from fractions import Fraction as F

import pytest

from oracles import simplex_overlap_oracle
from gptlab import linalg
from gptlab.bits import distinguishable_pairs, is_bit_symmetric
from gptlab.errors import Degenerate, NotBitSymmetric, NotTransitive
from gptlab.spaces import StateSpace, default_catalog, make_cube, make_ngon, make_simplex, square
from gptlab.symmetry import automorphism_group, subgroup
from gptlab.selfdual import (
    bloch_decomposition,
    check_statements,
    e_omega,
    invariant_inner_product,
    maximally_mixed,
    mixed_orthogonality_search,
    verify_self_dual,
)

CATALOG = default_catalog()


def test_maximally_mixed_examples():
    assert maximally_mixed(square()) == (0, 0, 1)
    assert maximally_mixed(make_simplex(4)) == (F(1, 4),) * 4
    assert maximally_mixed(make_ngon(5)) == pytest.approx((0, 0, 1), abs=1e-12)


@pytest.mark.parametrize("space", CATALOG, ids=lambda s: s.name)
def test_bloch_decomposition_invariants(space):
    group = automorphism_group(space)
    bloch = bloch_decomposition(space, group)
    b = space.backend
    assert b.eq(linalg.dot(space.unit, bloch.mu), 1)
    assert all(b.is_zero(linalg.dot(space.unit, h)) for h in bloch.hat_basis)
    assert len(bloch.hat_basis) == space.dimension - 1
    for g in group.generators:
        assert b.vec_eq(g.apply(bloch.mu), bloch.mu)
    x0, xh = bloch.project(space.vertices[0])
    assert b.eq(x0, 1) and b.vec_eq(linalg.add(linalg.scale(bloch.mu, x0), xh), space.vertices[0])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_simplex_c_and_lambda_match_gram_oracle(n):
    form = invariant_inner_product(make_simplex(n))
    c, lam = simplex_overlap_oracle(n)
    assert (form.c, form.lam) == (c, lam)
    assert (form.c, form.lam) == (F(-1, n - 1), F(1, n))


def test_pentagon_values():
    form = invariant_inner_product(make_ngon(5))
    assert math.isclose(form.c, math.cos(4 * math.pi / 5), abs_tol=1e-9)
    assert math.isclose(form.lam, 0.4472136, abs_tol=1e-7)


def test_e_omega_examples():
    sq = square()
    form = invariant_inner_product(sq)
    assert form.c == -1
    e = e_omega(sq, form, 0)
    assert e(sq.vertices[0]) == 1 and e(sq.vertices[1]) == 0

    pent = make_ngon(5)
    form = invariant_inner_product(pent)
    vals = e_omega(pent, form, 0).values(pent)
    golden = (math.cos(2 * math.pi / 5) - form.c) / (1 - form.c)
    assert vals == pytest.approx((1, golden, 0, 0, golden), abs=1e-9)
    assert math.isclose(golden, 0.6180, abs_tol=1e-4)

    simplex = make_simplex(4)
    form = invariant_inner_product(simplex)
    for k in range(4):
        assert e_omega(simplex, form, k).covector == tuple(int(i == k) for i in range(4))


@pytest.mark.parametrize("space", CATALOG, ids=lambda s: s.name)
def test_e_omega_is_proper_and_form_positive_definite(space):
    form = invariant_inner_product(space)
    b = space.backend
    assert linalg.is_positive_definite(form.full_form, b)
    assert b.lt(form.lam, 1) and b.gt(form.lam, 0)
    for k in range(len(space.vertices)):
        e = e_omega(space, form, k)
        assert e.is_proper(space) and b.eq(e(space.vertices[k]), 1)


@pytest.mark.parametrize("space", CATALOG, ids=lambda s: s.name)
def test_form_invariant_under_every_element(space):
    group = automorphism_group(space)
    form = invariant_inner_product(space, group)
    b = space.backend
    verts = space.vertices
    for g in group.elements:
        for x in verts[:3]:
            for y in verts:
                assert b.eq(form(g.apply(x), g.apply(y)), form(x, y))


@pytest.mark.parametrize("n", range(3, 12))
def test_ngon_self_duality_parity(n):
    space = make_ngon(n)
    assert verify_self_dual(space, invariant_inner_product(space)).is_self_dual == (n % 2 == 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_simplex_self_dual(n):
    space = make_simplex(n)
    cert = verify_self_dual(space, invariant_inner_product(space))
    assert cert.is_self_dual and cert.rays_match


def test_square_witness():
    sq = square()
    form = invariant_inner_product(sq)
    cert = verify_self_dual(sq, form)
    assert not cert.is_self_dual
    w = cert.witness
    assert w["kind"] == "effect"
    assert linalg.dot(w["violated"], w["representative"]) < 0
    # the hand-derived witness: e(x) = (x1 + x3) / 2 has representative (2, 0, 1)
    ginv = linalg.inverse(form.full_form, sq.backend)
    rep = linalg.matvec(ginv, (F(1, 2), 0, F(1, 2)))
    assert rep == (2, 0, 1)
    assert linalg.dot((-1, 0, 1), rep) < 0
    # ours is its mirror image under x1 -> -x1
    assert w["effect"] == (-1, 0, 1)


def test_cube_is_not_self_dual():
    space = make_cube(3)
    assert not verify_self_dual(space, invariant_inner_product(space)).is_self_dual


@pytest.mark.parametrize("space", CATALOG, ids=lambda s: s.name)
def test_bit_symmetry_implies_self_duality(space):
    group = automorphism_group(space)
    verdict = is_bit_symmetric(space, group)
    if not verdict.is_bit_symmetric:
        return
    form = invariant_inner_product(space, group)
    assert verify_self_dual(space, form).is_self_dual
    report = check_statements(space, group, form, verdict.pairs, True)
    assert report.all_pass and not report.advisory, report.failures


def test_pentagon_statements():
    pent = make_ngon(5)
    group = automorphism_group(pent)
    form = invariant_inner_product(pent, group)
    report = check_statements(pent, group, form)
    assert report.all_pass
    dist = {(p.i, p.j) for p in distinguishable_pairs(pent, group)}
    at_c = {
        (i, j) for i in range(5) for j in range(5)
        if i != j and abs(form.bloch_overlap(pent.vertices[i], pent.vertices[j]) - form.c) < 1e-9
    }
    assert dist == at_c


def test_square_statements_are_advisory():
    sq = square()
    group = automorphism_group(sq)
    form = invariant_inner_product(sq, group)
    report = check_statements(sq, group, form)
    assert report.advisory
    assert not report.distinguishable_implies_min_overlap
    # adjacent distinguishable pairs have orthogonal Bloch vectors
    assert form.bloch_overlap(sq.vertices[0], sq.vertices[2]) == 0
    with pytest.raises(NotBitSymmetric) as err:
        check_statements(sq, group, form, strict=True)
    assert err.value.report.advisory


def test_uniqueness_flag():
    assert invariant_inner_product(make_ngon(5)).unique_up_to_scale
    assert invariant_inner_product(make_simplex(4)).unique_up_to_scale


def test_not_transitive():
    kite = StateSpace.build("kite", [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -2, 1)], (0, 0, 1))
    with pytest.raises(NotTransitive):
        maximally_mixed(kite)


def test_single_point_is_degenerate():
    with pytest.raises(Degenerate):
        invariant_inner_product(make_simplex(1))


def test_explicit_subgroup_is_honoured():
    sq = square()
    group = automorphism_group(sq)
    rotations = subgroup([g for g in group.elements if linalg.determinant(g.matrix, sq.backend) == 1])
    form = invariant_inner_product(sq, rotations)
    assert form.c == -1


def test_mixed_orthogonality_experiment_runs():
    # the experiment reports what it finds; it asserts nothing about the answer
    pent = make_ngon(5)
    hits = mixed_orthogonality_search(pent, invariant_inner_product(pent), steps=2)
    assert isinstance(hits, list)
