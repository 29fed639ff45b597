import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptlab import linalg
from gptlab.cones import cone_member
from gptlab.errors import BadParameter, ParseError, ValidationError
from gptlab.spaces import (
    NGON4_TO_SQUARE,
    Effect,
    default_catalog,
    dumps,
    effect_cone,
    is_extreme,
    load,
    loads,
    make_cube,
    make_ngon,
    make_simplex,
    resolve,
    save,
    square,
)

CATALOG = default_catalog()


def space_file(**overrides):
    data = {
        "name": "sq",
        "dimension": 3,
        "arithmetic": "exact",
        "unit": ["0", "0", "1"],
        "vertices": [["1", "1", "1"], ["-1", "-1", "1"], ["1", "-1", "1"], ["-1", "1", "1"]],
    }
    data.update(overrides)
    return json.dumps(data)


@pytest.mark.parametrize("space", CATALOG, ids=lambda s: s.name)
def test_catalog_spaces_validate(space):
    space.validate()
    assert all(is_extreme(space, k) for k in range(len(space.vertices)))
    b = space.backend
    assert all(b.eq(linalg.dot(space.unit, v), 1) for v in space.vertices)


def test_square_literal_coordinates():
    sq = square()
    assert sq.vertices == ((1, 1, 1), (-1, -1, 1), (1, -1, 1), (-1, 1, 1))
    assert sq.unit == (0, 0, 1)
    assert sq.backend.exact


def test_ngon4_maps_onto_square():
    ngon = make_ngon(4)
    assert ngon.backend.exact
    images = {linalg.matvec(NGON4_TO_SQUARE, v) for v in ngon.vertices}
    assert images == set(square().vertices)


def test_ngon_coordinates():
    pent = make_ngon(5)
    assert not pent.backend.exact and len(pent.vertices) == 5
    for k, v in enumerate(pent.vertices):
        assert math.isclose(v[0], math.cos(2 * math.pi * k / 5), abs_tol=1e-12)
        assert math.isclose(v[1], math.sin(2 * math.pi * k / 5), abs_tol=1e-12)


def test_triangle_is_affinely_a_simplex():
    tri = make_ngon(3)
    # the vertices are affinely independent: the 3x3 matrix is invertible
    assert abs(linalg.determinant(tri.vertices, tri.backend)) > 1e-6
    assert len(make_simplex(3).vertices) == 3


def test_simplex_examples():
    bit = make_simplex(2)
    assert bit.vertices == ((1, 0), (0, 1)) and bit.unit == (1, 1)
    assert make_simplex(1).degenerate
    assert not make_simplex(4).degenerate
    assert len(make_cube(3).vertices) == 8


@pytest.mark.parametrize("call", [lambda: make_ngon(2), lambda: make_simplex(0), lambda: make_cube(0)])
def test_bad_parameters(call):
    with pytest.raises(BadParameter):
        call()


def test_resolve():
    assert resolve("square").name == "square"
    assert resolve("ngon:7").name == "ngon:7"
    assert len(resolve("cube:2").vertices) == 4
    with pytest.raises(BadParameter):
        resolve("ngon:x")
    with pytest.raises(BadParameter):
        resolve("nonsense")


@pytest.mark.parametrize("space", [square(), make_ngon(5), make_simplex(3), make_cube(3)], ids=str)
def test_file_round_trip(space, tmp_path):
    path = tmp_path / "space.json"
    save(space, path)
    back = load(path)
    assert back.backend == space.backend
    assert back.vertices == space.vertices and back.unit == space.unit
    assert dumps(back) == dumps(space)


def test_unit_violation():
    with pytest.raises(ValidationError) as err:
        loads(space_file(unit=["0", "0", "2"]))
    assert err.value.invariant == "unit"


def test_interior_point_violates_extremality():
    verts = json.loads(space_file())["vertices"] + [["0", "0", "1"]]
    with pytest.raises(ValidationError) as err:
        loads(space_file(vertices=verts))
    assert err.value.invariant == "extremality"


def test_not_full_dimensional():
    with pytest.raises(ValidationError) as err:
        loads(space_file(vertices=[["1", "0", "1"], ["-1", "0", "1"]]))
    assert err.value.invariant == "full-dimensionality"


@pytest.mark.parametrize(
    "text, field",
    [
        (space_file(colour="red"), "colour"),
        (space_file(arithmetic="decimal"), "arithmetic"),
        (space_file(dimension=0), "dimension"),
        (space_file(unit=[0.0, 0.0, 1.0]), "unit[0]"),
        (space_file(vertices=[["1/0", "1", "1"]]), "vertices[0][0]"),
    ],
)
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as err:
        loads(text)
    assert err.value.field == field


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as err:
        loads('{\n "name": "x",\n oops\n}')
    assert err.value.line == 3


def test_missing_field():
    data = json.loads(space_file())
    del data["unit"]
    with pytest.raises(ParseError) as err:
        loads(json.dumps(data))
    assert err.value.field == "unit"


def test_square_effect_cone():
    assert set(effect_cone(square()).rays) == {(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)}


@pytest.mark.parametrize("n", [2, 3, 5])
def test_simplex_effect_cone_is_the_outcome_indicators(n):
    rays = set(effect_cone(make_simplex(n)).rays)
    assert rays == {tuple(int(i == j) for j in range(n)) for i in range(n)}


def test_state_functional_is_not_an_effect_on_the_square():
    sq = square()
    e_omega = Effect(sq.vertices[0])  # x1 + x2 + x3
    assert e_omega(sq.vertices[1]) == -1
    assert not cone_member(effect_cone(sq), e_omega.covector)


@pytest.mark.parametrize("space", CATALOG, ids=lambda s: s.name)
def test_unit_is_an_effect(space):
    assert cone_member(effect_cone(space), space.unit)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(0, 1, max_denominator=6), min_size=3, max_size=3))
def test_complement_of_proper_effect_is_an_effect(values):
    # a proper effect on the square is pinned down by its values on three vertices
    sq = square()
    target = values[:3]
    cov = linalg.solve(sq.vertices[:1] + sq.vertices[2:], (target[0], target[1], target[2]), sq.backend)
    e = Effect(cov)
    if not e.is_proper(sq):
        return
    cone = effect_cone(sq)
    assert cone_member(cone, e.covector)
    assert cone_member(cone, e.complement(sq).covector)
    assert e.complement(sq)(sq.vertices[0]) == 1 - e(sq.vertices[0])
