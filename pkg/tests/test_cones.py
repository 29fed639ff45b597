import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pointed_cones
from oracles import brute_force_facets, extreme_by_facets
from gptlab import linalg
from gptlab.cones import (
    ConeH,
    ConeV,
    cone_member,
    dd_convert,
    dual_cone,
    extreme_rays,
    face_generated_by,
)
from gptlab.errors import DimensionMismatch, IndexOutOfRange, NotFullDimensional, NotPointed
from gptlab.scalar import EXACT, float_backend
from gptlab.spaces import make_ngon, square

SQUARE_RAYS = [(1, 1, 1), (-1, -1, 1), (1, -1, 1), (-1, 1, 1)]


def as_ints(vectors):
    return {tuple(int(x) for x in v) for v in vectors}


def test_square_h_representation():
    h = dd_convert(ConeV.from_generators(SQUARE_RAYS))
    # x3 - x1, x3 + x1, x3 - x2, x3 + x2 >= 0 (Fourier-Motzkin by hand)
    assert as_ints(h.inequalities) == {(-1, 0, 1), (1, 0, 1), (0, -1, 1), (0, 1, 1)}


def test_square_facets_match_brute_force():
    assert as_ints(dd_convert(ConeV.from_generators(SQUARE_RAYS)).inequalities) == brute_force_facets(
        SQUARE_RAYS, 3
    )


@pytest.mark.parametrize("d", [2, 3, 5])
def test_orthant_is_self_described(d):
    basis = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    cone = ConeV.from_generators(basis)
    assert as_ints(dd_convert(cone).inequalities) == set(basis)
    assert dual_cone(cone).same_as(cone)


def test_square_dual_rays():
    dual = dual_cone(ConeV.from_generators(SQUARE_RAYS))
    assert as_ints(dual.rays) == {(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)}


def test_triangle_simplex_cone_dual():
    # the simplex cone is the orthant in these coordinates
    cone = ConeV.from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert as_ints(dual_cone(cone).rays) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_redundant_generators_removed():
    gens = SQUARE_RAYS + [(0, 0, 1), (1, 0, 1), (2, 2, 2)]
    cone = ConeV.from_generators(gens)
    assert as_ints(cone.rays) == set(SQUARE_RAYS)


def test_redundant_inequalities_removed():
    rows = [(-1, 0, 1), (1, 0, 1), (0, -1, 1), (0, 1, 1), (0, 0, 1), (1, 1, 3)]
    h = ConeH.from_inequalities(rows)
    assert as_ints(h.inequalities) == {(-1, 0, 1), (1, 0, 1), (0, -1, 1), (0, 1, 1)}


def test_not_pointed_rejected():
    with pytest.raises(NotPointed):
        ConeV.from_generators([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_not_full_dimensional_rejected():
    with pytest.raises(NotFullDimensional):
        ConeV.from_generators([(1, 0, 0), (0, 1, 0), (1, 1, 0)])


def test_h_cone_with_lineality_rejected():
    with pytest.raises(NotPointed):
        ConeH.from_inequalities([(1, 0, 0), (0, 1, 0)])


@pytest.mark.parametrize(
    "x, expected",
    [((0, 0, 1), True), ((2, 0, 1), False), ((1, 1, 1), True), ((0, 0, -1), False)],
)
def test_square_membership(x, expected):
    v = ConeV.from_generators(SQUARE_RAYS)
    assert cone_member(v, x) is expected
    assert cone_member(dd_convert(v), x) is expected


def test_membership_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        cone_member(ConeV.from_generators(SQUARE_RAYS), (1, 0))


def test_float_membership_within_eps():
    b = float_backend(1e-9)
    v = ConeV.from_generators(SQUARE_RAYS, backend=b)
    assert cone_member(v, (1 + 1e-12, 0.0, 1.0))
    assert not cone_member(v, (1 + 1e-6, 0.0, 1.0))


@settings(max_examples=40, deadline=None)
@given(pointed_cones())
def test_v_h_round_trip(data):
    d, rays = data
    cone = ConeV.from_generators(rays)
    h = dd_convert(cone)
    assert dd_convert(h).same_as(cone)
    assert dd_convert(dd_convert(h)).same_as(h)


@settings(max_examples=40, deadline=None)
@given(pointed_cones())
def test_duality_involution(data):
    d, rays = data
    cone = ConeV.from_generators(rays)
    assert dual_cone(dual_cone(cone)).same_as(cone)


@settings(max_examples=25, deadline=None)
@given(pointed_cones(max_dim=5))
def test_facets_agree_with_brute_force(data):
    d, rays = data
    cone = ConeV.from_generators(rays)
    facets = as_ints(dd_convert(cone).inequalities)
    assert facets == brute_force_facets(rays, d)
    # extremality oracle: rays on d-1 independent facets
    canon = as_ints(cone.rays)
    assert canon == extreme_by_facets(sorted(canon), sorted(facets), d)


@settings(max_examples=30, deadline=None)
@given(pointed_cones(), st.randoms(use_true_random=False))
def test_canonical_form_stable_under_permutation_and_scaling(data, rnd):
    d, rays = data
    shuffled = list(rays)
    rnd.shuffle(shuffled)
    scaled = []
    for r in shuffled:
        k = F(rnd.randint(1, 7), rnd.randint(1, 5))
        scaled.append(tuple(k * x for x in r))
    a = ConeV.from_generators(rays)
    b = ConeV.from_generators(scaled)
    assert a.rays == b.rays
    assert dd_convert(a).inequalities == dd_convert(b).inequalities


@settings(max_examples=30, deadline=None)
@given(pointed_cones())
def test_representation_equivalence(data):
    d, rays = data
    v = ConeV.from_generators(rays)
    h = dd_convert(v)
    for r in v.rays:
        assert all(linalg.dot(f, r) >= 0 for f in h.inequalities)
        tight = [f for f in h.inequalities if linalg.dot(f, r) == 0]
        assert linalg.rank(tight, EXACT) >= d - 1
    for f in h.inequalities:
        tight = [r for r in v.rays if linalg.dot(f, r) == 0]
        assert linalg.rank(tight, EXACT) >= d - 1


@settings(max_examples=20, deadline=None)
@given(pointed_cones(max_dim=5))
def test_float_backend_matches_exact(data):
    d, rays = data
    exact = extreme_rays(rays, d, EXACT)
    approx = extreme_rays([tuple(float(x) for x in r) for r in rays], d, float_backend(1e-9))
    assert len(exact) == len(approx)
    for r in exact:
        norm = sum(float(x) ** 2 for x in r) ** 0.5
        unit = tuple(float(x) / norm for x in r)
        assert any(max(abs(a - b) for a, b in zip(unit, s)) < 1e-9 for s in approx)


def test_face_examples():
    sq = square()
    assert len(face_generated_by(sq, [0, 2])) == 2  # adjacent: an edge
    assert len(face_generated_by(sq, [0, 1])) == 4  # diametral: the whole square
    pent = make_ngon(5)
    assert len(face_generated_by(pent, [0, 2])) == 5
    assert face_generated_by(pent, [3]).vertex_indices == (3,)


def test_face_index_errors():
    with pytest.raises(IndexOutOfRange):
        face_generated_by(square(), [0, 4])
    with pytest.raises(IndexOutOfRange):
        face_generated_by(square(), [])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.data())
def test_face_monotone_and_idempotent(n, data):
    space = make_ngon(n)
    idx = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
    face = face_generated_by(space, idx)
    assert set(idx) <= set(face.vertex_indices)
    assert face_generated_by(space, face.vertex_indices).vertex_indices == face.vertex_indices


def test_dd_deterministic_under_row_order():
    rng = random.Random(3)
    rows = [(-1, 0, 1), (1, 0, 1), (0, -1, 1), (0, 1, 1), (1, 1, 2)]
    ref = extreme_rays(rows, 3)
    for _ in range(5):
        rng.shuffle(rows)
        assert extreme_rays(rows, 3) == ref
