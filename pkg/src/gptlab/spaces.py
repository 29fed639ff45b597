"""State spaces, effects, the built-in catalog and the JSON file format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from gptlab import linalg
from gptlab.cones import ConeV, dual_cone
from gptlab.errors import BadParameter, ParseError, ValidationError
from gptlab.lp import LinearProgram, solve
from gptlab.scalar import DEFAULT_EPS, EXACT, Backend, float_backend, to_json_scalar


@dataclass(frozen=True, eq=False)
class StateSpace:
    """A polytopal state space given by its pure states.

    ``vertices`` live in the affine slice ``unit . x = 1`` of R^dimension and
    their cone is the state cone.  Construct through :meth:`build`, which
    enforces the invariants; the raw constructor trusts its input.
    """

    name: str
    vertices: tuple
    unit: tuple
    backend: Backend = EXACT
    metadata: dict = field(default_factory=dict)

    @classmethod
    def build(cls, name, vertices, unit, backend=EXACT, metadata=None, check_extremality=True):
        vertices = tuple(backend.vector(v) for v in vertices)
        unit = backend.vector(unit)
        space = cls(name, vertices, unit, backend, dict(metadata or {}))
        space.validate(check_extremality=check_extremality)
        return space

    @property
    def dimension(self) -> int:
        return len(self.unit)

    @property
    def degenerate(self) -> bool:
        """Fewer than two pure states: no pair can be distinguished."""
        return len(self.vertices) < 2

    def validate(self, check_extremality=True):
        b = self.backend
        d = self.dimension
        if d < 1:
            raise ValidationError("dimension", "ambient dimension must be positive")
        if not self.vertices:
            raise ValidationError("dimension", "no vertices")
        for k, v in enumerate(self.vertices):
            if len(v) != d:
                raise ValidationError("dimension", f"vertex {k} has length {len(v)}, expected {d}")
        for k, v in enumerate(self.vertices):
            if not b.eq(linalg.dot(self.unit, v), 1):
                raise ValidationError("unit", f"u(v_{k}) = {linalg.dot(self.unit, v)} != 1")
        if linalg.rank(self.vertices, b) < d:
            raise ValidationError(
                "full-dimensionality", "vertices do not span the ambient space"
            )
        if check_extremality:
            for k in range(len(self.vertices)):
                if not is_extreme(self, k):
                    raise ValidationError("extremality", f"vertex {k} is not extreme")

    @cached_property
    def cone(self) -> ConeV:
        return ConeV(self.dimension, tuple(self.backend.sort_vectors(
            [self.backend.canonical_ray(v) for v in self.vertices])), self.backend)

    @cached_property
    def facets(self) -> tuple:
        """Extreme rays of the effect cone; also the facet normals of the state cone."""
        return effect_cone(self).rays

    def evaluate(self, covector, x):
        return linalg.dot(covector, x)

    def __repr__(self):
        return (
            f"StateSpace({self.name!r}, dim={self.dimension}, "
            f"vertices={len(self.vertices)}, {self.backend})"
        )


def is_extreme(space: StateSpace, k: int) -> bool:
    """LP separation test: vertex ``k`` is not a nonnegative combination of the others."""
    b = space.backend
    v = space.vertices[k]
    others = [w for j, w in enumerate(space.vertices) if j != k]
    if any(b.vec_eq(v, w) for w in others):
        return False
    if not others:
        return True
    n = len(others)
    cons = []
    for j in range(n):
        e = [b.zero] * n
        e[j] = b.one
        cons.append((tuple(e), ">=", b.zero))
    for i in range(space.dimension):
        cons.append((tuple(w[i] for w in others), "=", v[i]))
    return not solve(LinearProgram(n, tuple(cons), backend=b)).feasible


def effect_cone(space: StateSpace) -> ConeV:
    """All effects, as extreme rays of the dual of the state cone."""
    return dual_cone(space.cone)


@dataclass(frozen=True)
class Effect:
    covector: tuple

    def __call__(self, x):
        return linalg.dot(self.covector, x)

    def values(self, space: StateSpace) -> tuple:
        return tuple(self(v) for v in space.vertices)

    def is_proper(self, space: StateSpace) -> bool:
        b = space.backend
        return all(b.ge(x, 0) and b.le(x, 1) for x in self.values(space))

    def complement(self, space: StateSpace) -> "Effect":
        return Effect(linalg.sub(space.unit, self.covector))


# --- catalog ----------------------------------------------------------------

# maps ngon:4 coordinates onto the square's coordinates
NGON4_TO_SQUARE = ((1, -1, 0), (1, 1, 0), (0, 0, 1))


def square() -> StateSpace:
    half = Fraction(1, 2)
    return StateSpace.build(
        "square",
        [(1, 1, 1), (-1, -1, 1), (1, -1, 1), (-1, 1, 1)],
        (0, 0, 1),
        EXACT,
        metadata={
            "fiducial": ((half, 0, half), (0, half, half)),
            "ngon4_to_square": NGON4_TO_SQUARE,
        },
    )


def _exact_trig(k: int, n: int):
    """cos/sin of 2 pi k / n when both are rational, else None."""
    table = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}
    if (4 * k) % n == 0:
        return table[(4 * k // n) % 4]
    return None


def make_ngon(n: int, eps: float = DEFAULT_EPS) -> StateSpace:
    """Regular n-gon with vertices (cos 2 pi k/n, sin 2 pi k/n, 1)."""
    if not isinstance(n, int) or n < 3:
        raise BadParameter(f"n-gon needs n >= 3, got {n!r}")
    exact = [_exact_trig(k, n) for k in range(n)]
    if all(e is not None for e in exact):
        verts = [(c, s, 1) for c, s in exact]
        meta = {"ngon4_to_square": NGON4_TO_SQUARE} if n == 4 else {}
        return StateSpace.build(f"ngon:{n}", verts, (0, 0, 1), EXACT, metadata=meta)
    backend = float_backend(eps)
    verts = []
    for k in range(n):
        t = 2 * math.pi * k / n
        c, s = math.cos(t), math.sin(t)
        verts.append((0.0 if abs(c) < 1e-15 else c, 0.0 if abs(s) < 1e-15 else s, 1.0))
    return StateSpace.build(f"ngon:{n}", verts, (0, 0, 1), backend)


def make_simplex(n: int) -> StateSpace:
    """Classical n-outcome system: probability vectors, u = sum of entries."""
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"simplex needs n >= 1, got {n!r}")
    verts = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return StateSpace.build(f"simplex:{n}", verts, (1,) * n, EXACT)


def make_cube(n: int) -> StateSpace:
    """Hypercube [-1, 1]^n lifted to height one (n = 2 is the square)."""
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"cube needs n >= 1, got {n!r}")
    verts = []
    for mask in range(2**n):
        verts.append(tuple(1 if (mask >> (n - 1 - i)) & 1 == 0 else -1 for i in range(n)) + (1,))
    unit = (0,) * n + (1,)
    return StateSpace.build(f"cube:{n}", verts, unit, EXACT)


CATALOG = {
    "square": "square state space [-1,1]^2 (exact)",
    "ngon:N": "regular N-gon, N >= 3 (exact for N = 4, float otherwise)",
    "simplex:N": "classical N-level system, N >= 1 (exact)",
    "cube:N": "hypercube [-1,1]^N (exact)",
}


def default_catalog(eps: float = DEFAULT_EPS) -> list:
    spaces = [make_ngon(n, eps) for n in range(3, 12)]
    spaces += [make_simplex(n) for n in range(2, 6)]
    spaces += [square(), make_cube(3)]
    return spaces


def resolve(spec: str, eps: float = DEFAULT_EPS) -> StateSpace:
    """Catalog name (``square``, ``ngon:N``, ``simplex:N``, ``cube:N``) or file path."""
    if spec == "square":
        return square()
    kind, sep, arg = spec.partition(":")
    builders = {"ngon": lambda n: make_ngon(n, eps), "simplex": make_simplex, "cube": make_cube}
    if sep and kind in builders:
        try:
            n = int(arg)
        except ValueError:
            raise BadParameter(f"{spec!r}: {arg!r} is not an integer") from None
        return builders[kind](n)
    path = Path(spec)
    if path.exists():
        return load(path, eps=eps)
    raise BadParameter(f"unknown space {spec!r}; try one of {', '.join(CATALOG)} or a file path")


# --- file format ------------------------------------------------------------

FIELDS = {"name", "dimension", "arithmetic", "unit", "vertices"}


def _parse_scalar(x, arithmetic, where):
    if arithmetic == "exact":
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            raise ParseError("exact scalars must be \"p/q\" strings", field=where)
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {x!r}", field=where) from None
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError("float scalars must be numbers", field=where)
    return float(x)


def loads(text: str, eps: float = DEFAULT_EPS) -> StateSpace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    unknown = sorted(set(data) - FIELDS)
    if unknown:
        raise ParseError(f"unknown field(s) {unknown}", field=unknown[0])
    for key in sorted(FIELDS):
        if key not in data:
            raise ParseError("missing field", field=key)
    arithmetic = data["arithmetic"]
    if arithmetic not in ("exact", "float"):
        raise ParseError(f"arithmetic must be 'exact' or 'float', got {arithmetic!r}", field="arithmetic")
    dim = data["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError("dimension must be a positive integer", field="dimension")
    if not isinstance(data["name"], str):
        raise ParseError("name must be a string", field="name")
    if not isinstance(data["unit"], list):
        raise ParseError("unit must be a list", field="unit")
    unit = [_parse_scalar(x, arithmetic, f"unit[{i}]") for i, x in enumerate(data["unit"])]
    if not isinstance(data["vertices"], list):
        raise ParseError("vertices must be a list of lists", field="vertices")
    verts = []
    for k, row in enumerate(data["vertices"]):
        if not isinstance(row, list):
            raise ParseError("vertex must be a list", field=f"vertices[{k}]")
        verts.append([_parse_scalar(x, arithmetic, f"vertices[{k}][{i}]") for i, x in enumerate(row)])
    if len(unit) != dim:
        raise ValidationError("dimension", f"unit has length {len(unit)}, expected {dim}")
    backend = EXACT if arithmetic == "exact" else float_backend(eps)
    return StateSpace.build(data["name"], verts, unit, backend)


def load(path, eps: float = DEFAULT_EPS) -> StateSpace:
    return loads(Path(path).read_text(encoding="utf-8"), eps=eps)


def to_dict(space: StateSpace) -> dict:
    return {
        "name": space.name,
        "dimension": space.dimension,
        "arithmetic": space.backend.kind,
        "unit": [to_json_scalar(x) for x in space.unit],
        "vertices": [[to_json_scalar(x) for x in v] for v in space.vertices],
    }


def dumps(space: StateSpace) -> str:
    return json.dumps(to_dict(space), indent=1)


def save(space: StateSpace, path):
    Path(path).write_text(dumps(space) + "\n", encoding="utf-8")
