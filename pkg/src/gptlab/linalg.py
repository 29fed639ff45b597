"""Dense linear algebra over either scalar backend.

Matrices are tuples of row tuples.  Pivoting picks the entry of largest
magnitude, which is harmless for rationals and keeps floats stable.
"""

from __future__ import annotations

import math

from gptlab.scalar import Backend


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), start=0 * u[0] if u else 0)


def matvec(m, v) -> tuple:
    return tuple(dot(row, v) for row in m)


def vecmat(v, m) -> tuple:
    """Row vector times matrix (a covector pulled back through ``m``)."""
    return tuple(dot(v, col) for col in transpose(m))


def matmul(a, b) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m) -> tuple:
    return tuple(zip(*m))


def identity(n: int, backend: Backend) -> tuple:
    return tuple(
        tuple(backend.one if i == j else backend.zero for j in range(n)) for i in range(n)
    )


def scale(v, s) -> tuple:
    return tuple(s * x for x in v)


def add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def outer(u, v) -> tuple:
    return tuple(tuple(a * b for b in v) for a in u)


def kron(u, v) -> tuple:
    """Kronecker product of two vectors, row-major in (i, j)."""
    return tuple(a * b for a in u for b in v)


def mat_add(a, b) -> tuple:
    return tuple(add(r, s) for r, s in zip(a, b))


def mat_scale(a, s) -> tuple:
    return tuple(scale(r, s) for r in a)


def mat_eq(a, b, backend: Backend) -> bool:
    return len(a) == len(b) and all(backend.vec_eq(r, s) for r, s in zip(a, b))


def row_reduce(rows, backend: Backend):
    """Reduced row echelon form.

    Returns ``(rref_rows, pivot_columns, row_origin)`` where ``row_origin[k]``
    is the input row whose pivot ended up in position ``k`` (rows are swapped
    during elimination, never mixed into earlier pivots before being chosen).
    """
    m = [list(r) for r in rows]
    origin = list(range(len(m)))
    if not m:
        return [], [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        best = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
        if backend.is_zero(m[best][c]):
            continue
        m[r], m[best] = m[best], m[r]
        origin[r], origin[best] = origin[best], origin[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and not backend.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        if not backend.exact:
            for i in range(len(m)):
                m[i][c] = backend.one if i == r else backend.zero
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots, origin[:r]


def rank(rows, backend: Backend) -> int:
    if not rows:
        return 0
    if backend.exact:
        return _integer_rank(rows)
    import numpy as np

    return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=1e2 * backend.eps))


def _integer_rank(rows) -> int:
    """Fraction-free elimination on rows scaled to integers."""
    m = []
    for row in rows:
        den = 1
        for x in row:
            q = getattr(x, "denominator", 1)
            den = den * q // math.gcd(den, q)
        m.append([int(x * den) for x in row])
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r]
        pc = p[c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                row = [pc * x - f * y for x, y in zip(m[i], p)]
                g = 0
                for x in row:
                    g = math.gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(m):
            break
    return r


def independent_rows(rows, backend: Backend) -> list:
    """Indices of a maximal independent subset, greedily in input order."""
    chosen = []
    basis = []
    for i, row in enumerate(rows):
        if rank(basis + [row], backend) > len(basis):
            basis.append(row)
            chosen.append(i)
            if len(basis) == len(row):
                break
    return chosen


def nullspace(rows, ncols: int, backend: Backend) -> list:
    """Basis of {x : rows @ x = 0}."""
    red, pivots, _ = row_reduce(rows, backend) if rows else ([], [], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [backend.zero] * ncols
        x[f] = backend.one
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a, b, backend: Backend) -> tuple:
    """Solve the square system ``a x = b``; raises on singular ``a``."""
    n = len(a)
    aug = [tuple(row) + (rhs,) for row, rhs in zip(a, b)]
    red, pivots, _ = row_reduce(aug, backend)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in red)


def inverse(a, backend: Backend) -> tuple:
    n = len(a)
    eye = identity(n, backend)
    aug = [tuple(row) + eye[i] for i, row in enumerate(a)]
    red, pivots, _ = row_reduce(aug, backend)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def determinant(a, backend: Backend):
    m = [list(r) for r in a]
    n = len(m)
    det = backend.one
    for c in range(n):
        best = max(range(c, n), key=lambda i: abs(m[i][c]))
        if backend.is_zero(m[best][c]):
            return backend.zero
        if best != c:
            m[c], m[best] = m[best], m[c]
            det = -det
        p = m[c][c]
        det *= p
        for i in range(c + 1, n):
            f = m[i][c] / p
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def is_positive_definite(a, backend: Backend) -> bool:
    """Leading principal minors for rationals, eigenvalues for floats."""
    if backend.exact:
        return all(
            determinant([row[:k] for row in a[:k]], backend) > 0 for k in range(1, len(a) + 1)
        )
    import numpy as np

    arr = np.array(a, dtype=float)
    if not np.allclose(arr, arr.T, atol=backend.eps):
        return False
    return bool(np.linalg.eigvalsh(arr).min() > backend.eps)
