"""Polyhedral cones: generator/inequality representations and duality.

A pointed, full-dimensional cone is stored either by its extreme rays
(:class:`ConeV`) or by its facet inequalities ``h . x >= 0`` (:class:`ConeH`).
Conversion in both directions is the double description method; because the
facets of ``cone(R)`` are exactly the extreme rays of ``{h : h . r >= 0}``,
one routine (:func:`extreme_rays`) serves both directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from gptlab import linalg
from gptlab.errors import (
    BudgetExceeded,
    DimensionMismatch,
    IndexOutOfRange,
    NotFullDimensional,
    NotPointed,
)
from gptlab.scalar import EXACT, Backend


class _RowsDeficient(Exception):
    """Inequality system has rank < dimension (its cone has a lineality space)."""


class _RaysDeficient(Exception):
    """The computed rays do not span the space (the cone is not full-dimensional)."""


def _integer_row(v) -> tuple:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    return _primitive(ints)


def _primitive(ints) -> tuple:
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return None
    return tuple(x // g for x in ints)


def _unit(v) -> tuple:
    n = math.sqrt(sum(x * x for x in v))
    return tuple(x / n for x in v)


def _canonical_rows(vectors, backend: Backend) -> list:
    out = []
    for v in vectors:
        if all(backend.is_zero(x) for x in v):
            continue
        out.append(backend.canonical_ray(v))
    return dedupe_sorted(out, backend)


def dedupe_sorted(vectors, backend: Backend) -> list:
    """Sort canonically and drop duplicates (tolerant on the float backend)."""
    if backend.exact:
        return sorted(set(vectors))
    # bucket on two staggered grids much coarser than eps; near-equal vectors
    # share a bucket in at least one of them
    cell = 1e3 * backend.eps
    seen = ({}, {})
    out = []
    for v in vectors:
        keys = (
            tuple(round(x / cell) for x in v),
            tuple(round(x / cell + 0.5) for x in v),
        )
        dup = False
        for table, key in zip(seen, keys):
            if any(backend.vec_eq(v, w) for w in table.get(key, ())):
                dup = True
                break
        if dup:
            continue
        out.append(v)
        for table, key in zip(seen, keys):
            table.setdefault(key, []).append(v)
    return backend.sort_vectors(out)


def extreme_rays(
    rows, dimension: int, backend: Backend = EXACT, incidence: bool = False, limit=None
):
    """Extreme rays of ``{x : r . x >= 0 for r in rows}`` by double description.

    Rows are canonicalised and inserted in lexicographic order after an
    initial simplicial cone built from the first ``dimension`` independent
    rows.  Adjacency of a (+, -) ray pair is decided combinatorially from
    zero sets kept as bitmasks.  Returns canonical rays, sorted.
    """
    rows = _canonical_rows(rows, backend)
    d = dimension
    if backend.exact:
        work = [tuple(int(x) for x in r) for r in rows]

        def combine(a, p, b, q):
            return _primitive([a * x - b * y for x, y in zip(p, q)])

        def sgn(v):
            return (v > 0) - (v < 0)

    else:
        tol = backend.eps
        work = [_unit(r) for r in rows]

        def combine(a, p, b, q):
            return _unit([a * x - b * y for x, y in zip(p, q)])

        def sgn(v):
            return 0 if abs(v) <= tol else (1 if v > 0 else -1)

    basis = linalg.independent_rows(rows, backend)
    if len(basis) < d:
        raise _RowsDeficient()
    order = basis + [i for i in range(len(work)) if i not in set(basis)]

    init = linalg.inverse([rows[i] for i in basis], backend)
    rays = []
    for k, col in enumerate(linalg.transpose(init)):
        if backend.exact:
            rays.append(_integer_row(col))
        else:
            rays.append(_unit(col))
    words = max(1, (len(order) + 63) // 64)
    zeros = np.zeros((d, words), dtype=np.uint64)
    for k in range(d):
        for j in range(d):
            if j != k:
                _set_bit(zeros[k], j)

    for pos in range(d, len(order)):
        a = work[order[pos]]
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        signs = np.array([sgn(v) for v in vals], dtype=np.int8)
        plus = np.flatnonzero(signs > 0)
        minus = np.flatnonzero(signs < 0)
        if len(minus):
            new_rays, new_zeros = [], []
            for p, n, zs in _adjacent_pairs(zeros, plus, minus, d, pos):
                r = combine(vals[p], rays[n], vals[n], rays[p])
                if r is None:
                    continue
                new_rays.append(r)
                new_zeros.append(zs)
                if limit is not None and len(new_rays) + len(signs) - len(minus) > limit:
                    raise BudgetExceeded(f"double description exceeds {limit} rays")
            keep = np.flatnonzero(signs >= 0)
            rays = [rays[k] for k in keep] + new_rays
            zeros = np.concatenate([zeros[keep]] + ([np.array(new_zeros)] if new_zeros else []))
            tight = np.concatenate([signs[keep] == 0, np.ones(len(new_rays), dtype=bool)])
        else:
            tight = signs == 0
        word, bit = divmod(pos, 64)
        zeros[tight, word] |= np.uint64(1 << bit)
        if limit is not None and len(rays) > limit:
            raise BudgetExceeded(f"double description holds {len(rays)} rays > limit {limit}")

    out = [backend.canonical_ray(backend.vector(r)) for r in rays]
    out = dedupe_sorted(out, backend)
    if len(out) < d or linalg.rank(out, backend) < d:
        raise _RaysDeficient()
    if incidence:
        return out, rows, incidence_sets(out, rows, backend)
    return out


def incidence_sets(points, rows, backend: Backend) -> list:
    """``out[k]`` is the frozenset of row indices vanishing on ``points[k]``."""
    if backend.exact:
        ip = [_integer_row(p) for p in points]
        ir = [_integer_row(r) for r in rows]
        return [
            frozenset(j for j, r in enumerate(ir) if sum(x * y for x, y in zip(p, r)) == 0)
            for p in ip
        ]
    vals = np.array(points, dtype=float) @ np.array(rows, dtype=float).T
    return [frozenset(np.flatnonzero(np.abs(v) <= backend.eps).tolist()) for v in vals]


def maximal_incidence(sets) -> list:
    """Indices whose set is not strictly contained in another one."""
    keep = []
    for k, s in enumerate(sets):
        if not s:
            continue
        if any(s < t for t in sets):
            continue
        keep.append(k)
    return keep


def _set_bit(row, j):
    word, bit = divmod(j, 64)
    row[word] |= np.uint64(1 << bit)


def _adjacent_pairs(zeros, plus, minus, d, width):
    """Combinatorially adjacent (+, -) ray pairs.

    Two rays are adjacent iff their common zero set ``s`` has at least
    ``d - 2`` members and no third ray vanishes on all of ``s``.  The
    containment counts for a batch of candidate pairs come from one
    matrix product of 0/1 incidence matrices.
    """
    need = d - 2
    ps, ns = [], []
    zm = zeros[minus]
    block = max(1, (1 << 22) // max(1, zm.size))
    for start in range(0, len(plus), block):
        pb = plus[start:start + block]
        size = np.bitwise_count(zeros[pb][:, None, :] & zm[None, :, :]).sum(axis=2)
        i, j = np.nonzero(size >= need)
        ps.append(pb[i])
        ns.append(minus[j])
    if not ps:
        return
    ps, ns = np.concatenate(ps), np.concatenate(ns)
    bits = _unpack(zeros, width)
    chunk = max(64, (1 << 23) // max(1, len(zeros)))
    for start in range(0, len(ps), chunk):
        p, n = ps[start:start + chunk], ns[start:start + chunk]
        s = zeros[p] & zeros[n]
        sb = _unpack(s, width)
        counts = bits @ sb.T
        contained = (counts == sb.sum(axis=1)[None, :]).sum(axis=0)
        for k in np.flatnonzero(contained == 2):
            yield int(p[k]), int(n[k]), s[k]


def _unpack(masks, width):
    raw = np.unpackbits(masks.view(np.uint8), axis=1, bitorder="little")
    return raw[:, :width].astype(np.float32)


@dataclass(frozen=True)
class ConeV:
    """Cone generated by canonical, irredundant extreme rays."""

    dimension: int
    rays: tuple
    backend: Backend = EXACT

    @classmethod
    def from_generators(cls, generators, backend: Backend = EXACT, dimension=None) -> "ConeV":
        gens = [backend.vector(g) for g in generators]
        if dimension is None:
            if not gens:
                raise NotFullDimensional("no generators")
            dimension = len(gens[0])
        if any(len(g) != dimension for g in gens):
            raise DimensionMismatch("generators of unequal length")
        rays = _canonical_rows(gens, backend)
        facets = _facets_of(rays, dimension, backend)
        # a generator is extreme iff no other generator lies on strictly more facets
        sets = incidence_sets(rays, facets, backend)
        return cls(dimension, tuple(rays[k] for k in maximal_incidence(sets)), backend)

    def same_as(self, other) -> bool:
        return _same_sets(self.rays, other.rays, self.backend.join(other.backend)) and (
            self.dimension == other.dimension
        )


@dataclass(frozen=True)
class ConeH:
    """Cone ``{x : h . x >= 0 for every h}`` with canonical facet normals."""

    dimension: int
    inequalities: tuple
    backend: Backend = EXACT

    @classmethod
    def from_inequalities(cls, rows, backend: Backend = EXACT, dimension=None) -> "ConeH":
        rows = [backend.vector(r) for r in rows]
        if dimension is None:
            if not rows:
                raise NotPointed("no inequalities")
            dimension = len(rows[0])
        if any(len(r) != dimension for r in rows):
            raise DimensionMismatch("inequalities of unequal length")
        rows = _canonical_rows(rows, backend)
        rays = _rays_of(rows, dimension, backend)
        sets = incidence_sets(rows, rays, backend)
        return cls(dimension, tuple(rows[k] for k in maximal_incidence(sets)), backend)

    def same_as(self, other) -> bool:
        return _same_sets(
            self.inequalities, other.inequalities, self.backend.join(other.backend)
        ) and (self.dimension == other.dimension)


def _same_sets(a, b, backend: Backend) -> bool:
    if len(a) != len(b):
        return False
    if backend.exact:
        return sorted(a) == sorted(b)
    unused = list(b)
    for v in a:
        for k, w in enumerate(unused):
            if backend.vec_eq(v, w):
                del unused[k]
                break
        else:
            return False
    return True


def _facets_of(rays, d, backend):
    try:
        return extreme_rays(rays, d, backend)
    except _RowsDeficient:
        raise NotFullDimensional("generators do not span the ambient space") from None
    except _RaysDeficient:
        raise NotPointed("cone contains a line") from None


def _rays_of(rows, d, backend):
    try:
        return extreme_rays(rows, d, backend)
    except _RowsDeficient:
        raise NotPointed("inequalities have a nontrivial common kernel") from None
    except _RaysDeficient:
        raise NotFullDimensional("inequality cone has empty interior") from None


def dd_convert(cone):
    """Switch representation: ``ConeV -> ConeH`` or ``ConeH -> ConeV``."""
    if isinstance(cone, ConeV):
        facets = _facets_of(list(cone.rays), cone.dimension, cone.backend)
        return ConeH(cone.dimension, tuple(facets), cone.backend)
    if isinstance(cone, ConeH):
        rays = _rays_of(list(cone.inequalities), cone.dimension, cone.backend)
        return ConeV(cone.dimension, tuple(rays), cone.backend)
    raise TypeError(f"not a cone: {type(cone).__name__}")


def dual_cone(cone: ConeV) -> ConeV:
    """Generators of ``{y : y . x >= 0 for all x in cone}`` (standard pairing)."""
    h = dd_convert(cone)
    return ConeV(h.dimension, h.inequalities, h.backend)


def cone_member(cone, x) -> bool:
    if len(x) != cone.dimension:
        raise DimensionMismatch(f"vector of length {len(x)} in a {cone.dimension}-d cone")
    backend = cone.backend
    x = backend.vector(x)
    if isinstance(cone, ConeV) and backend.exact:
        from gptlab.lp import LinearProgram, solve

        n = len(cone.rays)
        cons = []
        for k in range(n):
            e = [Fraction(0)] * n
            e[k] = Fraction(1)
            cons.append((tuple(e), ">=", Fraction(0)))
        for i in range(cone.dimension):
            cons.append((tuple(r[i] for r in cone.rays), "=", x[i]))
        return solve(LinearProgram(n, tuple(cons))).feasible
    if isinstance(cone, ConeV):
        cone = dd_convert(cone)
    return all(backend.ge(linalg.dot(h, x), 0) for h in cone.inequalities)


@dataclass(frozen=True)
class Face:
    parent: object
    vertex_indices: tuple

    def __len__(self):
        return len(self.vertex_indices)

    @property
    def vertices(self) -> tuple:
        return tuple(self.parent.vertices[i] for i in self.vertex_indices)


def face_generated_by(space, indices) -> Face:
    """Smallest face of the state space containing the listed vertices.

    A facet inequality is tight at the barycenter of the listed vertices iff
    it is tight at each of them, so the face is the common zero set of those
    facets.
    """
    indices = sorted(set(indices))
    if not indices:
        raise IndexOutOfRange("face of an empty vertex set")
    n = len(space.vertices)
    for i in indices:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"vertex index {i} outside 0..{n - 1}")
    backend = space.backend
    pts = [space.vertices[i] for i in indices]
    tight = [
        h for h in space.facets if all(backend.is_zero(linalg.dot(h, p)) for p in pts)
    ]
    members = tuple(
        k
        for k, v in enumerate(space.vertices)
        if all(backend.is_zero(linalg.dot(h, v)) for h in tight)
    )
    return Face(space, members)
