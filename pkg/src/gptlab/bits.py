"""Perfect distinguishability, logical bits and the bit-symmetry decision."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from gptlab import linalg
from gptlab.cones import Face, face_generated_by
from gptlab.errors import IndexOutOfRange, NotDistinguishable
from gptlab.lp import LinearProgram, solve
from gptlab.spaces import Effect, StateSpace
from gptlab.symmetry import SymmetryGroup, automorphism_group, on_pairs, on_vertices, orbits


@dataclass(frozen=True)
class DistinguishablePair:
    i: int
    j: int
    witness: Effect

    def check(self, space: StateSpace) -> bool:
        b = space.backend
        return (
            self.witness.is_proper(space)
            and b.eq(self.witness(space.vertices[self.i]), 1)
            and b.eq(self.witness(space.vertices[self.j]), 0)
        )


@dataclass
class BitSymmetryVerdict:
    is_bit_symmetric: bool
    orbit_count: int
    orbit_representatives: list
    transitive_on_pure_states: bool
    degenerate: bool = False
    orbits: list = field(default_factory=list)
    pairs: list = field(default_factory=list)


def separating_effect(space: StateSpace, one, zero):
    """Proper effect with value 1 on ``one`` and 0 on ``zero``, or None.

    Works for arbitrary (possibly mixed) states; properness is imposed on the
    vertices only, which suffices by convexity.
    """
    b = space.backend
    cons = [(b.vector(one), "=", b.one), (b.vector(zero), "=", b.zero)]
    for v in space.vertices:
        cons.append((v, ">=", b.zero))
        cons.append((v, "<=", b.one))
    res = solve(LinearProgram(space.dimension, tuple(cons), backend=b))
    if not res.feasible:
        return None
    return Effect(res.witness)


def _pair_job(args):
    space, i, j = args
    return separating_effect(space, space.vertices[i], space.vertices[j])


def _check_indices(space, i, j):
    n = len(space.vertices)
    for k in (i, j):
        if not 0 <= k < n:
            raise IndexOutOfRange(f"vertex index {k} outside 0..{n - 1}")


def distinguish(space: StateSpace, i: int, j: int):
    """Single-pair query; returns a :class:`DistinguishablePair` or None."""
    _check_indices(space, i, j)
    if i == j:
        raise IndexOutOfRange("a state is never distinguishable from itself")
    e = _pair_job((space, i, j))
    return None if e is None else DistinguishablePair(i, j, e)


def distinguishable_pairs(space: StateSpace, group: SymmetryGroup | None = None, jobs: int = 1):
    """All ordered vertex pairs separated by a proper effect, sorted by (i, j).

    With a symmetry group, one LP is solved per orbit of ordered pairs and the
    witness is transported: if ``e`` separates ``(i, j)`` then ``e o T^-1``
    separates ``(T i, T j)``.
    """
    n = len(space.vertices)
    all_pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    if group is None:
        reps = [[p] for p in all_pairs]
    else:
        reps = orbits(group, all_pairs, on_pairs)
    todo = [(space, orb[0][0], orb[0][1]) for orb in reps]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            effects = list(pool.map(_pair_job, todo))
    else:
        effects = [_pair_job(t) for t in todo]

    found = {}
    b = space.backend
    inverses = None
    for orb, e in zip(reps, effects):
        if e is None:
            continue
        root = orb[0]
        found[root] = e
        if len(orb) == 1:
            continue
        if inverses is None:
            inverses = [linalg.inverse(g.matrix, b) for g in group.generators]
        # spread the witness along a breadth-first tree of generator moves
        queue = [root]
        while queue:
            x = queue.pop()
            for g, ginv in zip(group.generators, inverses):
                y = on_pairs(g, x)
                if y not in found:
                    cov = linalg.vecmat(found[x].covector, ginv)
                    found[y] = Effect(tuple(b.snap(c) for c in cov))
                    queue.append(y)
    return [DistinguishablePair(i, j, found[(i, j)]) for (i, j) in sorted(found)]


def logical_bit(space: StateSpace, pair) -> Face:
    """Smallest face containing a perfectly distinguishable pure pair."""
    if isinstance(pair, DistinguishablePair):
        i, j = pair.i, pair.j
    else:
        i, j = pair
        _check_indices(space, i, j)
        if i == j or distinguish(space, i, j) is None:
            raise NotDistinguishable(f"vertices {i} and {j} are not perfectly distinguishable")
    return face_generated_by(space, (i, j))


def is_bit_symmetric(space: StateSpace, group: SymmetryGroup | None = None, pairs=None, jobs: int = 1):
    """Orbit count of the group on ordered distinguishable pure pairs.

    Single-point spaces are vacuously bit-symmetric with zero orbits and the
    ``degenerate`` flag set.
    """
    if group is None:
        group = automorphism_group(space)
    if pairs is None:
        pairs = distinguishable_pairs(space, group, jobs=jobs)
    vertex_orbits = orbits(group, range(len(space.vertices)), on_vertices)
    transitive = len(vertex_orbits) == 1
    by_key = {(p.i, p.j): p for p in pairs}
    pair_orbits = orbits(group, sorted(by_key), on_pairs) if by_key else []
    reps = [by_key[orb[0]] for orb in pair_orbits]
    return BitSymmetryVerdict(
        is_bit_symmetric=len(pair_orbits) <= 1,
        orbit_count=len(pair_orbits),
        orbit_representatives=reps,
        transitive_on_pure_states=transitive,
        degenerate=space.degenerate,
        orbits=pair_orbits,
        pairs=list(pairs),
    )


def transported(space, pair: DistinguishablePair, g) -> DistinguishablePair:
    """Image of a pair under a symmetry, witness ``e o g^-1``."""
    b = space.backend
    ginv = linalg.inverse(g.matrix, b)
    cov = tuple(b.snap(x) for x in linalg.vecmat(pair.witness.covector, ginv))
    return DistinguishablePair(g.permutation[pair.i], g.permutation[pair.j], Effect(cov))
