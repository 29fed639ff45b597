"""Invariant inner product of a transitive state space and self-duality.

Pipeline: maximally mixed state ``mu`` (orbit average of a pure state),
Bloch vectors ``x - u(x) mu`` in the hyperplane ``u = 0``, a group-averaged
inner product there scaled to give pure states unit Bloch norm, the minimal
Bloch overlap ``c``, the weight ``lam = -c / (1 - c)`` and the full form
``<x, y> = lam x0 y0 + (1 - lam) (x^, y^)``.  Self-duality is then tested by
mapping every extreme effect to its vector representative under the full
form and checking cone membership, and conversely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from gptlab import linalg
from gptlab.bits import distinguishable_pairs, separating_effect
from gptlab.errors import Degenerate, NotBitSymmetric, NotTransitive
from gptlab.spaces import Effect, StateSpace
from gptlab.symmetry import SymmetryGroup, automorphism_group, on_vertices, orbits


@dataclass(frozen=True)
class BlochDecomposition:
    mu: tuple
    hat_basis: tuple
    unit: tuple

    def project(self, x):
        """Split ``x = x0 * mu + x_hat``; returns ``(x0, x_hat)``."""
        x0 = linalg.dot(self.unit, x)
        return x0, linalg.sub(x, linalg.scale(self.mu, x0))

    def projector(self) -> tuple:
        """Matrix of ``x -> x_hat``."""
        d = len(self.mu)
        return tuple(
            tuple((1 if i == j else 0) - self.mu[i] * self.unit[j] for j in range(d))
            for i in range(d)
        )


@dataclass(frozen=True)
class InnerProductForm:
    """``hat_form`` is a d x d matrix whose restriction to ``u = 0`` is ``(.,.)``."""

    bloch: BlochDecomposition
    hat_form: tuple
    c: object
    lam: object
    full_form: tuple
    unique_up_to_scale: bool | None = None

    def hat(self, x, y):
        return linalg.dot(x, linalg.matvec(self.hat_form, y))

    def bloch_overlap(self, x, y):
        return self.hat(self.bloch.project(x)[1], self.bloch.project(y)[1])

    def __call__(self, x, y):
        return linalg.dot(x, linalg.matvec(self.full_form, y))

    def functional(self, x) -> tuple:
        """Covector ``<x, .>``."""
        return linalg.vecmat(x, self.full_form)


@dataclass
class SelfDualityCertificate:
    is_self_dual: bool
    form: InnerProductForm
    witness: dict | None = None
    representatives: tuple = ()
    rays_match: bool | None = None


def _require_transitive(space: StateSpace, group: SymmetryGroup):
    if space.degenerate and len(space.vertices) == 0:
        raise Degenerate("empty state space")
    if len(orbits(group, range(len(space.vertices)), on_vertices)) != 1:
        raise NotTransitive(f"{space.name}: symmetry group is not transitive on pure states")


def maximally_mixed(space: StateSpace, group: SymmetryGroup | None = None) -> tuple:
    """Group average of ``T v_0``.

    Under a transitive action every vertex is hit by the same number of group
    elements, so the average equals the centroid of the orbit of vertex 0.
    """
    group = group or automorphism_group(space)
    _require_transitive(space, group)
    b = space.backend
    orbit = orbits(group, range(len(space.vertices)), on_vertices)[0]
    acc = [b.zero] * space.dimension
    for k in orbit:
        acc = linalg.add(acc, space.vertices[k])
    return tuple(b.snap(x / len(orbit)) for x in acc)


def bloch_decomposition(space: StateSpace, group: SymmetryGroup | None = None):
    mu = maximally_mixed(space, group)
    hat_basis = tuple(linalg.nullspace([space.unit], space.dimension, space.backend))
    return BlochDecomposition(mu, hat_basis, space.unit)


def _average_form(group, start, backend):
    def conj(g, m):
        t = g.matrix
        return linalg.matmul(linalg.transpose(t), linalg.matmul(m, t))

    avg = group.average(conj, tuple(tuple(row) for row in start))
    return tuple(tuple(backend.snap(x) for x in row) for row in avg)


def _random_spd(d, rng, backend):
    m = [[backend.scalar(rng.randint(-3, 3)) for _ in range(d)] for _ in range(d)]
    s = linalg.matmul(linalg.transpose(m), m)
    return linalg.mat_add(s, linalg.identity(d, backend))


def _restricted(form, basis):
    return tuple(tuple(linalg.dot(x, linalg.matvec(form, y)) for y in basis) for x in basis)


def _proportional(a, b, backend) -> bool:
    flat_a = [x for row in a for x in row]
    flat_b = [x for row in b for x in row]
    k = max(range(len(flat_a)), key=lambda i: abs(flat_a[i]))
    if backend.is_zero(flat_a[k]):
        return all(backend.is_zero(x) for x in flat_b)
    s = flat_b[k] / flat_a[k]
    if not backend.exact:
        return all(abs(y - s * x) <= 1e3 * backend.eps * max(1.0, abs(y)) for x, y in zip(flat_a, flat_b))
    return all(y == s * x for x, y in zip(flat_a, flat_b))


def invariant_inner_product(
    space: StateSpace, group: SymmetryGroup | None = None, check_uniqueness: bool = True, seed: int = 0
) -> InnerProductForm:
    group = group or automorphism_group(space)
    b = space.backend
    if len(space.vertices) < 2:
        raise Degenerate("single-point state space has no Bloch geometry")
    bloch = bloch_decomposition(space, group)
    d = space.dimension
    raw = _average_form(group, linalg.identity(d, b), b)
    w0 = bloch.project(space.vertices[0])[1]
    norm = linalg.dot(w0, linalg.matvec(raw, w0))
    if b.is_zero(norm):
        raise Degenerate("pure state coincides with the maximally mixed state")
    hat_form = linalg.mat_scale(raw, 1 / norm if not b.exact else Fraction(1) / norm)

    hats = [bloch.project(v)[1] for v in space.vertices]
    overlaps = [linalg.dot(x, linalg.matvec(hat_form, y)) for x in hats for y in hats]
    c = min(overlaps)
    lam = -c / (1 - c)

    p = bloch.projector()
    u = space.unit
    full = linalg.mat_add(
        linalg.mat_scale(linalg.outer(u, u), lam),
        linalg.mat_scale(linalg.matmul(linalg.transpose(p), linalg.matmul(hat_form, p)), 1 - lam),
    )
    full = tuple(tuple(b.snap(x) for x in row) for row in full)

    unique = None
    if check_uniqueness and bloch.hat_basis:
        rng = random.Random(seed)
        ref = _restricted(hat_form, bloch.hat_basis)
        unique = all(
            _proportional(ref, _restricted(_average_form(group, _random_spd(d, rng, b), b), bloch.hat_basis), b)
            for _ in range(2)
        )
    return InnerProductForm(bloch, hat_form, c, lam, full, unique)


def e_omega(space: StateSpace, form: InnerProductForm, vertex: int) -> Effect:
    """Linear extension of ``phi -> ((w^, phi^) - c) / (1 - c)`` for pure ``w``."""
    w_hat = form.bloch.project(space.vertices[vertex])[1]
    p = form.bloch.projector()
    pulled = linalg.vecmat(linalg.matvec(form.hat_form, w_hat), p)
    cov = linalg.scale(linalg.sub(pulled, linalg.scale(space.unit, form.c)), 1 / (1 - form.c))
    return Effect(tuple(space.backend.snap(x) for x in cov))


def verify_self_dual(space: StateSpace, form: InnerProductForm) -> SelfDualityCertificate:
    """Check both cone inclusions under the full form.

    Extreme effects are mapped to representatives ``F#`` with ``F(x) = <F#, x>``
    and tested against the facet inequalities of the state cone; every
    vertex functional ``<w, .>`` is tested for nonnegativity on the vertices.
    Polytopes have only exposed extreme rays, so this is a complete check.
    """
    b = space.backend
    ginv = linalg.inverse(form.full_form, b)
    reps = []
    for ray in space.facets:
        rep = tuple(b.snap(x) for x in linalg.matvec(ginv, ray))
        reps.append(rep)
        for h in space.facets:
            if b.lt(linalg.dot(h, rep), 0):
                return SelfDualityCertificate(
                    False,
                    form,
                    {"kind": "effect", "effect": ray, "representative": rep, "violated": h},
                    tuple(reps),
                    False,
                )
    for k, w in enumerate(space.vertices):
        f = form.functional(w)
        for j, v in enumerate(space.vertices):
            if b.lt(linalg.dot(f, v), 0):
                return SelfDualityCertificate(
                    False,
                    form,
                    {"kind": "state", "vertex": k, "functional": f, "negative_on": j},
                    tuple(reps),
                    False,
                )
    # representatives, rescaled to unit trace, must be exactly the pure states
    normalized = [linalg.scale(r, 1 / linalg.dot(space.unit, r)) for r in reps]
    matched = len(normalized) == len(space.vertices) and all(
        any(b.vec_eq(r, v) for v in space.vertices) for r in normalized
    )
    return SelfDualityCertificate(True, form, None, tuple(reps), matched)


@dataclass
class StatementReport:
    c_negative: bool
    overlaps_in_range: bool  # statement (i)
    min_overlap_implies_distinguishable: bool  # statement (ii)
    distinguishable_implies_min_overlap: bool  # statement (iii)
    unit_norm_pure: bool
    orthogonal_distinguishable: bool
    nonnegative: bool
    invariant: bool
    advisory: bool = False
    failures: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(
            (
                self.c_negative,
                self.overlaps_in_range,
                self.min_overlap_implies_distinguishable,
                self.distinguishable_implies_min_overlap,
                self.unit_norm_pure,
                self.orthogonal_distinguishable,
                self.nonnegative,
                self.invariant,
            )
        )


def check_statements(space, group, form, pairs=None, bit_symmetric=None, strict=False) -> StatementReport:
    """Overlap statements and product properties on all vertex pairs.

    When the space is not bit-symmetric the report is still produced but
    marked ``advisory``; with ``strict=True`` it is raised inside
    :class:`NotBitSymmetric` instead.
    """
    b = space.backend
    if pairs is None:
        pairs = distinguishable_pairs(space, group)
    dist = {(p.i, p.j) for p in pairs}
    if bit_symmetric is None:
        from gptlab.bits import is_bit_symmetric

        bit_symmetric = is_bit_symmetric(space, group, pairs).is_bit_symmetric
    n = len(space.vertices)
    c = form.c
    failures = []
    in_range = at_min_dist = dist_at_min = unit_norm = ortho = nonneg = True
    for i in range(n):
        if not b.eq(form(space.vertices[i], space.vertices[i]), 1):
            unit_norm = False
            failures.append(("unit_norm", i))
        for j in range(n):
            o = form.bloch_overlap(space.vertices[i], space.vertices[j])
            if not (b.le(c, o) and b.le(o, 1)):
                in_range = False
                failures.append(("range", i, j))
            if i != j and b.eq(o, c) and (i, j) not in dist:
                at_min_dist = False
                failures.append(("ii", i, j))
            if (i, j) in dist and not b.eq(o, c):
                dist_at_min = False
                failures.append(("iii", i, j))
            ip = form(space.vertices[i], space.vertices[j])
            if (i, j) in dist and not b.is_zero(ip):
                ortho = False
                failures.append(("orthogonal", i, j))
            if b.lt(ip, 0):
                nonneg = False
                failures.append(("nonnegative", i, j))
    invariant = all(
        linalg.mat_eq(
            linalg.matmul(linalg.transpose(g.matrix), linalg.matmul(form.full_form, g.matrix)),
            form.full_form,
            b,
        )
        for g in group.generators
    )
    report = StatementReport(
        c_negative=b.lt(c, 0),
        overlaps_in_range=in_range,
        min_overlap_implies_distinguishable=at_min_dist,
        distinguishable_implies_min_overlap=dist_at_min,
        unit_norm_pure=unit_norm,
        orthogonal_distinguishable=ortho,
        nonnegative=nonneg,
        invariant=invariant,
        advisory=not bit_symmetric,
        failures=failures,
    )
    if strict and not bit_symmetric:
        raise NotBitSymmetric(f"{space.name} is not bit-symmetric; statements are advisory", report)
    return report


def mixed_orthogonality_search(space: StateSpace, form: InnerProductForm, steps: int = 4):
    """Look for mixed pairs with ``<x, y> = 0`` that are not perfectly distinguishable.

    States are sampled as convex combinations of two vertices on a grid with
    ``steps`` subdivisions.  Returns the list of such pairs; an empty list
    only means none was found on this grid.
    """
    b = space.backend
    n = len(space.vertices)
    grid = []
    ts = [b.scalar(Fraction(k, steps)) if b.exact else k / steps for k in range(steps + 1)]
    for i in range(n):
        for j in range(i + 1, n):
            for t in ts[1:-1]:
                grid.append(linalg.add(linalg.scale(space.vertices[i], t), linalg.scale(space.vertices[j], 1 - t)))
    points = list(space.vertices) + grid
    hits = []
    for x in range(len(points)):
        for y in range(x + 1, len(points)):
            if x < n and y < n:
                continue
            if b.is_zero(form(points[x], points[y])):
                if separating_effect(space, points[x], points[y]) is None:
                    hits.append((points[x], points[y]))
    return hits
