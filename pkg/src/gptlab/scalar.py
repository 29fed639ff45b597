"""Scalar backends.

Two arithmetic regimes sit behind one small interface: exact rationals
(``fractions.Fraction``, tolerance zero) and IEEE doubles compared with a
single tolerance ``eps``.  Vectors are plain tuples of scalars so the same
algorithms run unchanged on either backend.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class Backend:
    kind: str = "exact"
    eps: float = 0.0

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "float" and not self.eps > 0:
            raise ValueError("float backend needs eps > 0")
        if self.kind == "exact" and self.eps != 0:
            raise ValueError("exact backend has no tolerance")

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def __str__(self):
        return "exact" if self.exact else f"float({self.eps:g})"

    # --- conversion -----------------------------------------------------
    def scalar(self, x):
        if self.exact:
            if isinstance(x, float):
                raise TypeError(f"float {x!r} given to the exact backend")
            return Fraction(x)
        return float(x)

    def vector(self, xs) -> tuple:
        return tuple(self.scalar(x) for x in xs)

    def matrix(self, rows) -> tuple:
        return tuple(self.vector(r) for r in rows)

    @property
    def zero(self):
        return Fraction(0) if self.exact else 0.0

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    # --- comparisons ----------------------------------------------------
    def is_zero(self, x) -> bool:
        return x == 0 if self.exact else abs(x) <= self.eps

    def sign(self, x) -> int:
        if self.is_zero(x):
            return 0
        return 1 if x > 0 else -1

    def eq(self, a, b) -> bool:
        return self.is_zero(a - b)

    def ge(self, a, b) -> bool:
        return a - b >= -self.eps if not self.exact else a >= b

    def le(self, a, b) -> bool:
        return self.ge(b, a)

    def gt(self, a, b) -> bool:
        return not self.le(a, b)

    def lt(self, a, b) -> bool:
        return not self.ge(a, b)

    def vec_eq(self, u, v) -> bool:
        return len(u) == len(v) and all(self.eq(a, b) for a, b in zip(u, v))

    def snap(self, x):
        """Round float noise below eps to zero; identity on exact values."""
        if not self.exact and abs(x) <= self.eps:
            return 0.0
        return x

    # --- canonical forms ------------------------------------------------
    def canonical_ray(self, v) -> tuple:
        """Positive rescaling to a unique representative.

        Exact: primitive integer vector.  Float: unit Euclidean norm with
        sub-eps entries snapped to zero.
        """
        if self.exact:
            return primitive_integer(v)
        norm = math.sqrt(sum(x * x for x in v))
        if norm <= self.eps:
            raise ValueError("zero vector has no canonical ray")
        return tuple(self.snap(x / norm) for x in v)

    def compare_vectors(self, u, v) -> int:
        for a, b in zip(u, v):
            if not self.eq(a, b):
                return -1 if a < b else 1
        return (len(u) > len(v)) - (len(u) < len(v))

    def sort_vectors(self, vs) -> list:
        if self.exact:
            return sorted(vs)
        return sorted(vs, key=functools.cmp_to_key(self.compare_vectors))

    def join(self, other: "Backend") -> "Backend":
        """Backend able to represent values from both operands."""
        if self.exact and other.exact:
            return self
        return float_backend(max(self.eps, other.eps))


EXACT = Backend()


def float_backend(eps: float = DEFAULT_EPS) -> Backend:
    return Backend("float", eps)


def primitive_integer(v) -> tuple:
    """Scale a rational vector to integers with gcd 1, keeping its direction."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no canonical ray")
    return tuple(Fraction(x // g) for x in ints)


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{x:.10g}"


def to_json_scalar(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return float(x)
