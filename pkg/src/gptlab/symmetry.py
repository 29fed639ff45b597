"""Linear symmetry groups of polytopal state spaces.

Every linear symmetry ``T`` permutes the vertices and therefore preserves
``Q = sum_i v_i v_i^T`` (it maps ``Q`` to ``T Q T^T``).  The Gram matrix
``G_ij = v_i^T Q^-1 v_j`` is thus invariant under the induced vertex
permutation, which is what the backtracking search matches on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from gptlab import linalg
from gptlab.errors import ActionNotClosed, Degenerate
from gptlab.scalar import Backend


@dataclass(frozen=True)
class LinearSymmetry:
    matrix: tuple
    permutation: tuple

    def apply(self, x) -> tuple:
        return linalg.matvec(self.matrix, x)

    def pull_back(self, covector) -> tuple:
        """``covector o T``."""
        return linalg.vecmat(covector, self.matrix)


ELEMENT_LIMIT = 50_000


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """Finite group of linear symmetries, stored as a stabilizer chain.

    ``transversals[k]`` maps each image of the k-th base vertex to one group
    element that fixes the earlier base vertices, so every element factors
    uniquely as ``t_0 t_1 ... t_{m-1}``.  ``elements`` is materialised on
    demand and refuses groups larger than ``ELEMENT_LIMIT``.
    """

    generators: tuple
    transversals: tuple
    identity: LinearSymmetry

    @property
    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def __len__(self):
        return self.order

    @cached_property
    def elements(self) -> tuple:
        if self.order > ELEMENT_LIMIT:
            raise ValueError(f"group of order {self.order} is too large to enumerate")
        out = [self.identity]
        for level in reversed(self.transversals):
            out = [multiply(t, g) for t in level.values() for g in out]
        ident = self.identity.permutation
        out.sort(key=lambda g: (g.permutation != ident, g.permutation))
        return tuple(out)

    def __iter__(self):
        return iter(self.elements)

    def by_permutation(self) -> dict:
        return {g.permutation: g for g in self.elements}

    def inverse(self, g: LinearSymmetry) -> LinearSymmetry:
        return invert(g, self.identity)

    def average(self, fn, start):
        """Group average of ``fn(g, x)`` for an additive ``x``, level by level.

        Valid when ``fn(gh, x) = fn(h, fn(g, x))``, as for ``T^T R T``.
        """
        x = start
        for level in self.transversals:
            reps = list(level.values())
            acc = None
            for t in reps:
                y = fn(t, x)
                acc = y if acc is None else _add_nested(acc, y)
            x = _scale_nested(acc, len(reps))
        return x

    def table_check(self) -> bool:
        """Closure, identity and inverses, verified on the permutation table."""
        perms = set(self.by_permutation())
        if len(perms) != self.order:
            return False
        n = len(next(iter(perms)))
        if tuple(range(n)) not in perms:
            return False
        for p in perms:
            inv = [0] * n
            for i, j in enumerate(p):
                inv[j] = i
            if tuple(inv) not in perms:
                return False
            for q in perms:
                if compose(p, q) not in perms:
                    return False
        return True


def _add_nested(a, b):
    if isinstance(a, tuple):
        return tuple(_add_nested(x, y) for x, y in zip(a, b))
    return a + b


def _scale_nested(a, n):
    if isinstance(a, tuple):
        return tuple(_scale_nested(x, n) for x in a)
    return a / n


def multiply(g: LinearSymmetry, h: LinearSymmetry) -> LinearSymmetry:
    """``g o h``."""
    return LinearSymmetry(linalg.matmul(g.matrix, h.matrix), compose(g.permutation, h.permutation))


def invert(g: LinearSymmetry, identity: LinearSymmetry) -> LinearSymmetry:
    n = len(g.permutation)
    inv = [0] * n
    for i, j in enumerate(g.permutation):
        inv[j] = i
    # g has finite order, so g^-1 is a power of g
    power, prev = g, identity
    while power.permutation != identity.permutation:
        prev, power = power, multiply(g, power)
    assert prev.permutation == tuple(inv)
    return prev


def compose(p, q) -> tuple:
    """Permutation ``p o q``."""
    return tuple(p[i] for i in q)


def _closure(perms) -> set:
    perms = list(perms)
    if not perms:
        return set()
    n = len(perms[0])
    seen = {tuple(range(n))}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in perms:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _value_classes(values, backend: Backend) -> dict:
    """Map each value to a class id; float values within eps share a class."""
    if backend.exact:
        return {v: k for k, v in enumerate(sorted(set(values)))}
    classes = {}
    ordered = sorted(set(values))
    cid = -1
    anchor = None
    for v in ordered:
        if anchor is None or v - anchor > backend.eps:
            cid += 1
            anchor = v
        classes[v] = cid
    return classes


def canonical_form(space) -> tuple:
    """Gram matrix of the vertices in the metric ``Q^-1``, ``Q = sum v v^T``."""
    b = space.backend
    d = space.dimension
    if linalg.rank(space.vertices, b) < d:
        raise Degenerate("vertices do not span the ambient space")
    q = [[b.zero] * d for _ in range(d)]
    for v in space.vertices:
        for i in range(d):
            for j in range(d):
                q[i][j] += v[i] * v[j]
    qinv = linalg.inverse(q, b)
    w = [linalg.matvec(qinv, v) for v in space.vertices]
    return tuple(tuple(b.snap(linalg.dot(v, x)) for x in w) for v in space.vertices)


class _VertexIndex:
    def __init__(self, vertices, backend: Backend):
        self.backend = backend
        self.vertices = vertices
        if backend.exact:
            self.lookup = {v: k for k, v in enumerate(vertices)}

    def find(self, x):
        if self.backend.exact:
            return self.lookup.get(tuple(x))
        for k, v in enumerate(self.vertices):
            if self.backend.vec_eq(v, x):
                return k
        return None


def automorphism_group(space) -> SymmetryGroup:
    """All linear maps ``T`` with ``T(Omega) = Omega`` and ``u o T = u``.

    A base of ``d`` independent vertices is fixed.  Level by level, from the
    deepest stabilizer up, backtracking under Gram-matrix constraints looks
    for an element sending the base vertex to each candidate not yet in its
    orbit under the generators found so far.  Each completed choice of base
    images fixes ``T``, which is verified on every vertex and on the unit.
    """
    b = space.backend
    verts = space.vertices
    n = len(verts)
    d = space.dimension
    gram = canonical_form(space)
    classes = _value_classes([x for row in gram for x in row], b)
    cls = [[classes[x] for x in row] for row in gram]
    signature = [(cls[i][i], tuple(sorted(cls[i]))) for i in range(n)]

    base = linalg.independent_rows(verts, b)
    if len(base) < d:
        raise Degenerate("vertices do not span the ambient space")
    base_inv = linalg.inverse(linalg.transpose([verts[i] for i in base]), b)
    index = _VertexIndex(verts, b)

    def realise(images):
        t = linalg.matmul(linalg.transpose([verts[i] for i in images]), base_inv)
        t = tuple(tuple(b.snap(x) for x in row) for row in t)
        if not b.vec_eq(linalg.vecmat(space.unit, t), space.unit):
            return None
        perm = []
        for v in verts:
            k = index.find(linalg.matvec(t, v))
            if k is None:
                return None
            perm.append(k)
        if len(set(perm)) != n:
            return None
        return LinearSymmetry(t, tuple(perm))

    table = np.array(cls, dtype=np.int64)
    sig_ids = {x: k for k, x in enumerate(sorted(set(signature)))}
    sig = np.array([sig_ids[x] for x in signature])
    start = sig[:, None] == sig[None, :]

    def restrict(allowed, src, cand):
        # v may go to w only if <v, src> and <w, cand> fall in the same class
        allowed = allowed & (table[src][:, None] == table[cand][None, :])
        allowed[src, :] = False
        allowed[:, cand] = False
        allowed[src, cand] = True
        return allowed

    def consistent(allowed):
        if not allowed.any(axis=1).all():
            return False
        forced = allowed.sum(axis=1) == 1
        targets = allowed[forced].argmax(axis=1)
        return len(set(targets.tolist())) == len(targets)

    def complete(images, allowed=None):
        if allowed is None:
            allowed = start
            for m, img in enumerate(images):
                allowed = restrict(allowed, base[m], img)
            if not consistent(allowed):
                return None
        k = len(images)
        if k == d:
            return realise(images)
        src = base[k]
        for cand in np.flatnonzero(allowed[src]).tolist():
            if cand in images:
                continue
            nxt = restrict(allowed, src, cand)
            if consistent(nxt):
                g = complete(images + [cand], nxt)
                if g is not None:
                    return g
        return None

    identity = LinearSymmetry(linalg.identity(d, b), tuple(range(n)))
    gens = []
    transversals = [None] * d
    for level in range(d - 1, -1, -1):
        fixed = base[:level]
        src = base[level]
        level_gens = [g for g in gens if all(g.permutation[x] == x for x in fixed)]
        reps = _transversal(src, level_gens, identity)
        for cand in range(n):
            if cand in reps or cand in fixed or signature[cand] != signature[src]:
                continue
            g = complete(list(fixed) + [cand])
            if g is not None:
                gens.append(g)
                level_gens.append(g)
                reps = _transversal(src, level_gens, identity)
        transversals[level] = reps
    gens.sort(key=lambda g: g.permutation)
    return SymmetryGroup(tuple(gens), tuple(transversals), identity)


def _transversal(point, gens, identity) -> dict:
    """Orbit of ``point`` with one group element reaching each orbit point."""
    reps = {point: identity}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g.permutation[x]
            if y not in reps:
                reps[y] = multiply(g, reps[x])
                queue.append(y)
    return dict(sorted(reps.items()))


def subgroup(elements) -> SymmetryGroup:
    """Wrap a user-supplied closed set of symmetries as a group.

    The set is checked for closure; its chain is built over the vertex
    permutation action with trivial (single-element) transversals except
    the first, which carries every element.
    """
    elements = sorted(elements, key=lambda g: g.permutation)
    perms = {g.permutation for g in elements}
    n = len(elements[0].permutation)
    identity = next((g for g in elements if g.permutation == tuple(range(n))), None)
    if identity is None or any(compose(p, q) not in perms for p in perms for q in perms):
        raise ValueError("elements are not closed under composition")
    gens = _generators(elements)
    rest = {k: g for k, g in enumerate(elements)}
    return SymmetryGroup(gens, (rest,), identity)


def _generators(elements) -> tuple:
    gens = []
    span = {tuple(range(len(elements[0].permutation)))} if elements else set()
    for g in elements:
        if g.permutation in span:
            continue
        gens.append(g)
        span = _closure([h.permutation for h in gens])
    return tuple(gens)


def orbits(group: SymmetryGroup, items, action) -> list:
    """Partition ``items`` into orbits; each orbit is listed in item order.

    ``action(g, item)`` must return another member of ``items``.
    """
    items = list(items)
    pos = {item: k for k, item in enumerate(items)}
    seen = [False] * len(items)
    out = []
    for k, item in enumerate(items):
        if seen[k]:
            continue
        seen[k] = True
        orbit = [k]
        queue = deque([item])
        while queue:
            x = queue.popleft()
            for g in group.generators:
                y = action(g, x)
                j = pos.get(y)
                if j is None:
                    raise ActionNotClosed(f"{y!r} is not among the items")
                if not seen[j]:
                    seen[j] = True
                    orbit.append(j)
                    queue.append(y)
        out.append([items[j] for j in sorted(orbit)])
    return out


def on_vertices(g: LinearSymmetry, i: int) -> int:
    return g.permutation[i]


def on_pairs(g: LinearSymmetry, pair) -> tuple:
    i, j = pair
    return (g.permutation[i], g.permutation[j])
