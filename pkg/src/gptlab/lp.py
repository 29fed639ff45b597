"""Dense two-phase simplex with Bland's rule.

Variables of a :class:`LinearProgram` are free; sign restrictions are
ordinary constraints.  Internally each free variable is split into a
difference of two nonnegative columns, every row gets an artificial
variable, and phase one minimises their sum.  When phase one ends with a
positive value the simplex multipliers give a Farkas certificate, stored on
the result so that infeasibility can be re-checked without the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


from gptlab import linalg
from gptlab.errors import DimensionMismatch, MalformedProgram
from gptlab.scalar import EXACT, Backend

RELATIONS = (">=", "=", "<=")

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
OPTIMAL = "Optimal"
UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    variables: int
    constraints: tuple  # (covector, relation, rhs)
    objective: tuple | None = None
    sense: str = "max"
    backend: Backend = EXACT

    def validate(self):
        if self.variables < 1:
            raise MalformedProgram("need at least one variable")
        if self.sense not in ("max", "min"):
            raise MalformedProgram(f"unknown sense {self.sense!r}")
        if self.objective is not None and len(self.objective) != self.variables:
            raise MalformedProgram("objective length differs from variable count")
        for k, con in enumerate(self.constraints):
            if len(con) != 3:
                raise MalformedProgram(f"constraint {k} is not (covector, relation, rhs)")
            a, rel, _ = con
            if rel not in RELATIONS:
                raise MalformedProgram(f"constraint {k}: unknown relation {rel!r}")
            if len(a) != self.variables:
                raise MalformedProgram(f"constraint {k}: length {len(a)} != {self.variables}")


@dataclass
class LpResult:
    status: str
    witness: tuple | None = None
    optimum: object = None
    farkas: tuple | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status in (FEASIBLE, OPTIMAL, UNBOUNDED)


def check_witness(lp: LinearProgram, x) -> bool:
    """Independent re-check that ``x`` satisfies every constraint."""
    b = lp.backend
    if x is None or len(x) != lp.variables:
        return False
    for a, rel, rhs in lp.constraints:
        lhs = linalg.dot(b.vector(a), x)
        rhs = b.scalar(rhs)
        if rel == ">=" and not b.ge(lhs, rhs):
            return False
        if rel == "<=" and not b.le(lhs, rhs):
            return False
        if rel == "=" and not b.eq(lhs, rhs):
            return False
    return True


def check_farkas(lp: LinearProgram, y) -> bool:
    """Re-check a certificate of infeasibility.

    ``y`` holds one multiplier per constraint, nonnegative on ``>=`` rows and
    nonpositive on ``<=`` rows, with ``sum y_i a_i = 0`` and
    ``sum y_i b_i > 0``; summing the scaled constraints then reads ``0 > 0``.
    """
    b = lp.backend
    if y is None or len(y) != len(lp.constraints):
        return False
    combo = [b.zero] * lp.variables
    total = b.zero
    for yi, (a, rel, rhs) in zip(y, lp.constraints):
        if rel == ">=" and b.lt(yi, 0):
            return False
        if rel == "<=" and b.gt(yi, 0):
            return False
        combo = [c + yi * b.scalar(x) for c, x in zip(combo, a)]
        total += yi * b.scalar(rhs)
    return all(b.is_zero(c) for c in combo) and b.gt(total, 0)


class _Tableau:
    """Simplex tableau with phase-one and phase-two cost rows carried along.

    Exact programs use integer-preserving pivots: every stored row equals the
    true row times the last pivot element ``D`` and entries stay integers, so
    no rational normalisation happens inside the loop.  Float programs use
    ordinary Gauss-Jordan pivots with ``D = 1``.
    """

    def __init__(self, rows, rhs, basis, costs, backend):
        self.b = backend
        self.rows = [list(r) + [x] for r, x in zip(rows, rhs)]
        self.basis = basis
        self.costs = [list(c) for c in costs]
        self.d = 1 if backend.exact else 1.0
        self.pivots = 0

    def sign(self, x) -> int:
        s = self.b.sign(x)
        return -s if self.b.exact and self.d < 0 else s

    def true(self, x):
        return Fraction(x, self.d) if self.b.exact else x

    def rhs(self, i):
        return self.true(self.rows[i][-1])

    def reduced(self, k, j):
        return self.true(self.costs[k][j])

    def pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        if self.b.exact:
            d = self.d
            for row in self.rows + self.costs:
                if row is prow:
                    continue
                f = row[c]
                if f == 0:
                    row[:] = [(p * x) // d for x in row] if p != d else row
                else:
                    row[:] = [(p * x - f * y) // d for x, y in zip(row, prow)]
            self.d = p
        else:
            prow[:] = [x / p for x in prow]
            prow[c] = 1.0
            for row in self.rows + self.costs:
                if row is prow:
                    continue
                f = row[c]
                if f == 0.0:
                    continue
                row[:] = [x - f * y for x, y in zip(row, prow)]
                row[c] = 0.0
        self.basis[r] = c
        self.pivots += 1

    def run(self, k, allowed):
        """Minimise cost row ``k`` with Bland's rule."""
        while True:
            cost = self.costs[k]
            entering = next((j for j in allowed if self.sign(cost[j]) < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                if self.sign(row[entering]) > 0:
                    ratio = (
                        Fraction(row[-1], row[entering]) if self.b.exact else row[-1] / row[entering]
                    )
                    if best is None or self.b.lt(ratio, best[0]) or (
                        self.b.eq(ratio, best[0]) and self.basis[i] < self.basis[best[1]]
                    ):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def _integer_scaled(values):
    den = 1
    for x in values:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in values], den


def solve(lp: LinearProgram) -> LpResult:
    lp.validate()
    b = lp.backend
    n = lp.variables
    m = len(lp.constraints)
    exact = b.exact

    # stored row i = mult[i] * original row i, with nonnegative right-hand side
    stored, mult, kinds = [], [], []
    for a, rel, rhs in lp.constraints:
        a = list(b.vector(a))
        rhs = b.scalar(rhs)
        scale = 1
        if exact:
            ints, scale = _integer_scaled(a + [rhs])
            a, rhs = ints[:-1], ints[-1]
        sigma = 1
        if rel == ">=":
            sigma, rel = -1, "<="
        if (rhs * sigma) < 0 and not b.is_zero(rhs):
            sigma, rel = -sigma, {"<=": ">=", "=": "="}[rel]
        stored.append(([sigma * x for x in a], sigma * rhs if not b.is_zero(rhs) else 0 * rhs))
        mult.append(sigma * scale)
        kinds.append(rel)

    n_slack = sum(1 for k in kinds if k != "=")
    arts = [i for i, k in enumerate(kinds) if k != "<="]
    art0 = 2 * n + n_slack
    width = art0 + len(arts)
    zero = 0 if exact else 0.0
    one = 1 if exact else 1.0

    rows, rhs, basis, unit_col, slack_sign = [], [], [], [], []
    s = 2 * n
    art_of = {i: art0 + k for k, i in enumerate(arts)}
    for i, ((a, r), kind) in enumerate(zip(stored, kinds)):
        row = [zero] * width
        for k in range(n):
            row[k] = a[k]
            row[n + k] = -a[k]
        sc = None
        if kind != "=":
            sc = s
            row[s] = one if kind == "<=" else -one
            s += 1
        if kind == "<=":
            basis.append(sc)
            unit_col.append(sc)
        else:
            row[art_of[i]] = one
            basis.append(art_of[i])
            unit_col.append(art_of[i])
        rows.append(row)
        rhs.append(r)

    # cost rows hold reduced costs; their last entry is minus the objective value
    phase1 = [zero] * (width + 1)
    for i in arts:
        phase1[art_of[i]] = one
    for i in arts:
        phase1 = [x - y for x, y in zip(phase1, rows[i] + [rhs[i]])]
    phase2 = [zero] * (width + 1)
    if lp.objective is not None:
        obj = list(b.vector(lp.objective))
        if exact:
            obj, _ = _integer_scaled(obj)
        sgn = -1 if lp.sense == "max" else 1
        for k in range(n):
            phase2[k] = sgn * obj[k]
            phase2[n + k] = -sgn * obj[k]

    tab = _Tableau(rows, rhs, basis, [phase1, phase2], b)
    tab.run(0, range(width))
    infeasibility = -tab.reduced(0, width)
    if arts and b.gt(infeasibility, 0):
        y = []
        for i in range(m):
            col = unit_col[i]
            r = tab.reduced(0, col)
            yi = (1 - r) if col >= art0 else -r
            y.append(b.scalar(mult[i] * yi) if exact else mult[i] * yi)
        return LpResult(INFEASIBLE, farkas=tuple(y), pivots=tab.pivots)

    # drive artificials out of the basis; rows with no structural entry are redundant
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] >= art0:
            j = next((j for j in range(art0) if not b.is_zero(tab.rows[i][j])), None)
            if j is None:
                continue
            tab.pivot(i, j)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    def extract():
        z = [b.zero] * width
        for i, bv in enumerate(tab.basis):
            z[bv] = tab.rhs(i)
        return tuple(b.snap(z[k] - z[n + k]) for k in range(n))

    if lp.objective is None:
        return LpResult(FEASIBLE, witness=extract(), pivots=tab.pivots)

    status = tab.run(1, range(art0))
    x = extract()
    if status == "unbounded":
        return LpResult(UNBOUNDED, witness=x, pivots=tab.pivots)
    return LpResult(
        OPTIMAL, witness=x, optimum=linalg.dot(b.vector(lp.objective), x), pivots=tab.pivots
    )


def maximize_over_polytope(objective, space):
    """Maximum of a linear functional over the state space and a maximiser.

    Solved as an LP over the facet description ``{h . x >= 0, u(x) = 1}``;
    the returned vertex index is the lowest one attaining the optimum.
    """
    if len(objective) != space.dimension:
        raise DimensionMismatch(
            f"objective of length {len(objective)} on a {space.dimension}-d space"
        )
    b = space.backend
    obj = b.vector(objective)
    cons = [(h, ">=", b.zero) for h in space.facets]
    cons.append((space.unit, "=", b.one))
    res = solve(LinearProgram(space.dimension, tuple(cons), obj, "max", b))
    if res.status != OPTIMAL:
        raise RuntimeError(f"bounded polytope LP returned {res.status}")
    best = res.optimum
    for k, v in enumerate(space.vertices):
        if b.eq(linalg.dot(obj, v), best):
            return best, k
    raise RuntimeError("LP optimum not attained at any vertex")



def to_vertex(rows, unit, x, backend: Backend):
    """Walk from a point of ``{h . x >= 0, u . x = 1}`` to a vertex of its face.

    While the tight rows have rank below ``d - 1``, step along a direction
    that keeps them tight until one more row becomes tight.  Every point of
    the starting face stays in it, so an optimal point stays optimal.
    Assumes the polytope is bounded.
    """
    d = len(x)
    x = tuple(x)
    while True:
        tight = [h for h in rows if backend.is_zero(linalg.dot(h, x))]
        if linalg.rank(tight, backend) >= d - 1:
            return x
        z = linalg.nullspace(tight + [tuple(unit)], d, backend)[0]
        for direction in (z, tuple(-c for c in z)):
            steps = [
                (-linalg.dot(h, x) / s, h)
                for h in rows
                if backend.lt(s := linalg.dot(h, direction), 0)
            ]
            if steps:
                t = min(steps, key=lambda p: p[0])[0]
                x = tuple(backend.snap(a + t * c) for a, c in zip(x, direction))
                break
        else:
            raise RuntimeError("unbounded direction in a polytope")
