"""Maximal tensor products, product/entangled vertex classes and CHSH."""

from __future__ import annotations

from dataclasses import dataclass

from gptlab import linalg
from gptlab.bits import is_bit_symmetric
from gptlab.cones import NotFullDimensional, NotPointed, _RaysDeficient, _RowsDeficient, extreme_rays, maximal_incidence
from gptlab.errors import BudgetExceeded, ImproperEffect
from gptlab.lp import OPTIMAL, LinearProgram, maximize_over_polytope, solve, to_vertex
from gptlab.spaces import Effect, StateSpace

DEFAULT_BUDGET = 16
DEFAULT_VERTEX_LIMIT = 30


@dataclass(frozen=True)
class VertexClass:
    kind: str  # "product" | "entangled"
    a: tuple | None = None
    b: tuple | None = None

    @property
    def entangled(self) -> bool:
        return self.kind == "entangled"


@dataclass(frozen=True, eq=False)
class TensorSpace:
    composite: StateSpace
    factors: tuple
    vertex_class: tuple

    @property
    def product_count(self) -> int:
        return sum(1 for v in self.vertex_class if not v.entangled)

    @property
    def entangled_count(self) -> int:
        return sum(1 for v in self.vertex_class if v.entangled)

    def entangled_indices(self) -> list:
        return [k for k, v in enumerate(self.vertex_class) if v.entangled]


def _check_budget(a: StateSpace, b: StateSpace, budget: int) -> int:
    dim = a.dimension * b.dimension
    if dim > budget:
        raise BudgetExceeded(f"{a.name} (x) {b.name} has dimension {dim} > budget {budget}")
    return dim


def product_effects(a: StateSpace, b: StateSpace) -> list:
    """``e (x) f`` for every pair of factor facets; they cut out the composite."""
    backend = a.backend.join(b.backend)
    fa = [backend.vector(e) for e in a.facets]
    fb = [backend.vector(f) for f in b.facets]
    return [linalg.kron(e, f) for e in fa for f in fb]


def max_tensor(
    a: StateSpace, b: StateSpace, budget: int = DEFAULT_BUDGET, ray_limit=None
) -> TensorSpace:
    """``A (x)max B``: normalised vectors nonnegative on every product effect.

    ``ray_limit`` caps the number of rays held during enumeration
    (BudgetExceeded when hit).
    """
    dim = _check_budget(a, b, budget)
    backend = a.backend.join(b.backend)
    rows = product_effects(a, b)
    try:
        rays, rows, tight = extreme_rays(rows, dim, backend, incidence=True, limit=ray_limit)
    except _RowsDeficient:
        raise NotPointed("product effects do not span the dual space") from None
    except _RaysDeficient:
        raise NotFullDimensional("maximal tensor cone has empty interior") from None
    unit = linalg.kron(backend.vector(a.unit), backend.vector(b.unit))
    verts = []
    for r in rays:
        s = linalg.dot(unit, r)
        verts.append(tuple(backend.snap(x / s) for x in r))
    verts = backend.sort_vectors(verts)
    composite = StateSpace.build(
        f"{a.name}*{b.name}", verts, unit, backend, check_extremality=False
    )
    # the facets of the composite are the product effects whose tight
    # vertex sets are maximal
    on_row = [frozenset(k for k, t in enumerate(tight) if j in t) for j in range(len(rows))]
    facets = [rows[j] for j in maximal_incidence(on_row)]
    composite.__dict__["facets"] = tuple(backend.sort_vectors(facets))
    tensor = TensorSpace(composite, (a, b), ())
    classes = tuple(classify_vertex(tensor, w) for w in composite.vertices)
    return TensorSpace(composite, (a, b), classes)


def _is_state(space: StateSpace, x, backend) -> bool:
    return backend.eq(linalg.dot(backend.vector(space.unit), x), 1) and all(
        backend.ge(linalg.dot(backend.vector(h), x), 0) for h in space.facets
    )


def classify_vertex(tensor: TensorSpace, w) -> VertexClass:
    """Product iff the ``d_A x d_B`` matricisation has rank one.

    Exact arithmetic checks every 2 x 2 minor; floats compare the second
    singular value against eps.  Factors are read off as ``a = M u_B`` and
    ``b = M^T u_A`` and must be states of their factor.
    """
    a_space, b_space = tensor.factors
    return _classify(a_space, b_space, tensor.composite.backend, w)


def _classify(a_space, b_space, backend, w) -> VertexClass:
    da, db = a_space.dimension, b_space.dimension
    m = [tuple(w[i * db:(i + 1) * db]) for i in range(da)]
    if backend.exact:
        rank_one = all(
            m[i][j] * m[k][l] == m[i][l] * m[k][j]
            for i in range(da)
            for k in range(i + 1, da)
            for j in range(db)
            for l in range(j + 1, db)
        )
    else:
        import numpy as np

        sv = np.linalg.svd(np.array(m, dtype=float), compute_uv=False)
        rank_one = len(sv) < 2 or sv[1] < backend.eps
    if not rank_one:
        return VertexClass("entangled")
    ua, ub = backend.vector(a_space.unit), backend.vector(b_space.unit)
    fa = tuple(backend.snap(x) for x in linalg.matvec(m, ub))
    fb = tuple(backend.snap(x) for x in linalg.vecmat(ua, m))
    if not backend.vec_eq(linalg.kron(fa, fb), w):
        return VertexClass("entangled")
    if not (_is_state(a_space, fa, backend) and _is_state(b_space, fb, backend)):
        return VertexClass("entangled")
    return VertexClass("product", fa, fb)


@dataclass(frozen=True)
class ChshSetup:
    """Two binary measurements per side, each given by its outcome-0 effect."""

    alice: tuple
    bob: tuple

    def validate(self, a: StateSpace, b: StateSpace):
        for side, space, effects in (("alice", a, self.alice), ("bob", b, self.bob)):
            if len(effects) != 2:
                raise ImproperEffect(f"{side}: need exactly two measurements")
            for k, e in enumerate(effects):
                if len(e) != space.dimension:
                    raise ImproperEffect(f"{side} effect {k} has wrong length")
                if not Effect(space.backend.vector(e)).is_proper(space):
                    raise ImproperEffect(f"{side} effect {k} is not proper on {space.name}")


def fiducial_effects(space: StateSpace) -> tuple:
    """Two binary measurements recorded for the space, or the first two facets
    scaled to a maximum of one."""
    if "fiducial" in space.metadata:
        return tuple(space.backend.vector(e) for e in space.metadata["fiducial"])
    out = []
    for h in space.facets[:2]:
        top = max(linalg.dot(h, v) for v in space.vertices)
        out.append(tuple(space.backend.snap(x / top) for x in h))
    if len(out) == 1:
        out.append(out[0])
    return tuple(out)


def default_setup(a: StateSpace, b: StateSpace) -> ChshSetup:
    return ChshSetup(fiducial_effects(a), fiducial_effects(b))


def chsh_covector(tensor: TensorSpace, setup: ChshSetup) -> tuple:
    """``S = C11 + C12 + C21 - C22`` with ``C_ij = ((2e_i - u) (x) (2f_j - u))``."""
    a_space, b_space = tensor.factors
    return _chsh_covector(a_space, b_space, tensor.composite.backend, setup)


def _chsh_covector(a_space, b_space, backend, setup: ChshSetup) -> tuple:
    setup.validate(a_space, b_space)
    ua, ub = backend.vector(a_space.unit), backend.vector(b_space.unit)
    obs_a = [linalg.sub(linalg.scale(backend.vector(e), 2), ua) for e in setup.alice]
    obs_b = [linalg.sub(linalg.scale(backend.vector(f), 2), ub) for f in setup.bob]
    total = [backend.zero] * (a_space.dimension * b_space.dimension)
    for i in range(2):
        for j in range(2):
            sign = -1 if (i, j) == (1, 1) else 1
            total = linalg.add(total, linalg.scale(linalg.kron(obs_a[i], obs_b[j]), sign))
    return tuple(total)


def chsh_value(tensor: TensorSpace, setup: ChshSetup, w):
    return linalg.dot(chsh_covector(tensor, setup), w)


def chsh_max(tensor: TensorSpace, setup: ChshSetup):
    """Maximum of the CHSH functional over the composite and a maximising vertex."""
    return maximize_over_polytope(chsh_covector(tensor, setup), tensor.composite)


def entangled_witness(a: StateSpace, b: StateSpace, budget: int = DEFAULT_BUDGET):
    """An entangled vertex of ``A (x)max B`` found without enumerating vertices.

    Each CHSH variant (the minus sign on each of the four correlators, both
    senses) built from the fiducial measurements is optimised by the simplex
    method over the product-effect description, and the optimal point is
    walked to a vertex of its face.
    Returns ``(vertex, functional)`` or None when no variant lands on an
    entangled vertex (which proves nothing).
    """
    dim = _check_budget(a, b, budget)
    backend = a.backend.join(b.backend)
    rows = product_effects(a, b)
    unit = linalg.kron(backend.vector(a.unit), backend.vector(b.unit))
    cons = tuple((h, ">=", backend.zero) for h in rows) + ((unit, "=", backend.one),)
    setup = default_setup(a, b)
    base = _chsh_covector(a, b, backend, setup)
    ua, ub = backend.vector(a.unit), backend.vector(b.unit)
    obs_a = [linalg.sub(linalg.scale(backend.vector(e), 2), ua) for e in setup.alice]
    obs_b = [linalg.sub(linalg.scale(backend.vector(f), 2), ub) for f in setup.bob]
    for i in range(2):
        for j in range(2):
            # move the minus sign onto correlator (i, j)
            corr = lambda x, y: linalg.kron(obs_a[x], obs_b[y])
            obj = base
            obj = linalg.add(obj, linalg.scale(corr(1, 1), 2))
            obj = linalg.sub(obj, linalg.scale(corr(i, j), 2))
            for sense in ("max", "min"):
                res = solve(LinearProgram(dim, cons, tuple(obj), sense, backend))
                if res.status != OPTIMAL:
                    continue
                w = to_vertex(rows, unit, res.witness, backend)
                if _classify(a, b, backend, w).entangled:
                    return w, tuple(obj)
    return None


@dataclass
class Theorem2Verdict:
    status: str
    entangled: int | None
    product: int | None
    vertices: int | None
    bit_symmetric: bool | None
    consistent: bool
    message: str
    witness: tuple | None = None


NO_CONSTRAINT = "no-constraint"
CONSISTENT = "consistent"
PREDICTED = "predicted-not-bit-symmetric"
CONTRADICTION = "contradiction"

# composites whose enumeration would hold more rays than this are not built
# once an entangled vertex is already known
ENUMERATION_LIMIT = 5000


def theorem2_check(
    a: StateSpace,
    b: StateSpace,
    budget: int = DEFAULT_BUDGET,
    vertex_limit: int = DEFAULT_VERTEX_LIMIT,
    tensor: TensorSpace | None = None,
) -> Theorem2Verdict:
    """A maximal tensor product with an entangled vertex is never bit-symmetric.

    The direct bit-symmetry decision runs only when the composite has at most
    ``vertex_limit`` vertices; otherwise the verdict is a tagged prediction.
    Without a prebuilt ``tensor``, an LP search for an entangled vertex runs
    first; when it succeeds, full enumeration is skipped for composites too
    large to matter for the direct check.
    """
    witness = None
    if tensor is None:
        _check_budget(a, b, budget)
        found = entangled_witness(a, b, budget)
        if found is None:
            tensor = max_tensor(a, b, budget)
        else:
            witness = found[0]
            try:
                tensor = max_tensor(a, b, budget, ray_limit=ENUMERATION_LIMIT)
            except BudgetExceeded:
                return Theorem2Verdict(
                    PREDICTED, None, None, None, None, True,
                    "entangled vertex found by LP; predicted-not-bit-symmetric, "
                    f"composite not enumerated (> {ENUMERATION_LIMIT} rays)",
                    witness,
                )
    n = len(tensor.composite.vertices)
    ent, prod = tensor.entangled_count, tensor.product_count
    if witness is None and ent:
        witness = tensor.composite.vertices[tensor.entangled_indices()[0]]
    direct = None
    if n <= vertex_limit:
        direct = is_bit_symmetric(tensor.composite).is_bit_symmetric
    if ent == 0:
        return Theorem2Verdict(
            NO_CONSTRAINT, ent, prod, n, direct, True,
            "no entangled vertices; the no-go statement imposes no constraint",
        )
    if direct is None:
        return Theorem2Verdict(
            PREDICTED, ent, prod, n, None, True,
            f"{ent} entangled vertices; predicted-not-bit-symmetric, direct check skipped "
            f"({n} vertices > {vertex_limit})",
            witness,
        )
    if direct:
        return Theorem2Verdict(
            CONTRADICTION, ent, prod, n, True, False,
            "entangled vertices present but the composite is bit-symmetric",
            witness,
        )
    return Theorem2Verdict(
        CONSISTENT, ent, prod, n, False, True,
        f"{ent} entangled vertices; composite is not bit-symmetric",
        witness,
    )
