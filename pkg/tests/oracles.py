"""Independent reference computations used by the tests.

None of these touch the double description, simplex or symmetry search
code; they are slow brute-force routes kept deliberately simple.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def _nullvector(rows, d):
    """One nonzero solution of rows @ x = 0 (Fractions, plain Gauss-Jordan)."""
    m = [list(map(Fraction, r)) for r in rows]
    piv_cols = []
    r = 0
    for c in range(d):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(d) if c not in piv_cols]
    if len(free) != 1:
        return None
    x = [Fraction(0)] * d
    x[free[0]] = Fraction(1)
    for row, c in zip(m, piv_cols):
        x[c] = -row[free[0]]
    return x


def _primitive(v):
    from math import gcd

    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    # positive scaling only: the sign is fixed by orientation, not by us
    return tuple(ints), lead


def brute_force_facets(rays, d):
    """Facet normals of cone(rays): every (d-1)-subset spanning a hyperplane
    with all rays on one side.  Returned as primitive integer tuples."""
    out = set()
    for subset in itertools.combinations(rays, d - 1):
        h = _nullvector(subset, d)
        if h is None:
            continue
        vals = [sum(Fraction(a) * b for a, b in zip(h, r)) for r in rays]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            h = [-x for x in h]
        else:
            continue
        out.add(_primitive(h)[0])
    return out


def extreme_by_facets(rays, facets, d):
    """Rays lying on at least d-1 independent facets."""
    out = set()
    for r in rays:
        tight = [h for h in facets if sum(Fraction(a) * b for a, b in zip(h, r)) == 0]
        if tight and np.linalg.matrix_rank(np.array(tight, dtype=float)) >= d - 1:
            out.add(tuple(r))
    return out


def brute_force_group_order(vertices, unit) -> int:
    """Count vertex permutations realised by a linear map fixing ``unit``."""
    v = np.array([[float(x) for x in p] for p in vertices])
    u = np.array([float(x) for x in unit])
    n, d = v.shape
    count = 0
    for perm in itertools.permutations(range(n)):
        w = v[list(perm)]
        # T v_i = w_i for all i:  V T^T = W
        t_transposed, *_ = np.linalg.lstsq(v, w, rcond=None)
        if np.allclose(v @ t_transposed, w, atol=1e-9) and np.allclose(u @ t_transposed.T, u, atol=1e-9):
            count += 1
    return count


def vertex_scan_max(objective, vertices):
    vals = [sum(a * b for a, b in zip(objective, v)) for v in vertices]
    best = max(vals)
    return best, vals.index(best)


def simplex_overlap_oracle(n):
    """c and lambda for the n-outcome simplex from the Gram matrix of the
    centred basis vectors e_i - (1/n) 1 in the standard inner product."""
    centred = [[Fraction(int(i == j)) - Fraction(1, n) for j in range(n)] for i in range(n)]
    gram = [[sum(a * b for a, b in zip(x, y)) for y in centred] for x in centred]
    norm = gram[0][0]
    c = min(g / norm for row in gram for g in row)
    return c, -c / (1 - c)
