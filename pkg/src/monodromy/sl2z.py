"""Exact 2x2 unimodular integer matrices and primitive parabolic elements.

Entries are plain Python ints, so nothing overflows.  A primitive parabolic
element of SL(2,Z) is written

    I + eps * [[c*d, d**2], [-c**2, -c*d]],   gcd(c, d) = 1,

and (eps, c, d), (eps, -c, -d) give the same matrix.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, List, Optional, Tuple


class NotUnimodularError(ValueError):
    """Raised when a matrix does not have determinant +1 or -1."""


class NotPrimitiveParabolic(ValueError):
    """Raised when a matrix is not conjugate to [[1, 1], [0, 1]] or its inverse."""


@dataclass(frozen=True, order=True)
class Mat2:
    """Row-major integer matrix [[a, b], [c, d]] with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, operator.index(getattr(self, name)))
        if self.det not in (1, -1):
            raise NotUnimodularError(
                f"determinant {self.det} of {self.rows()} is not +-1")

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def flat(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def apply(self, v: Tuple[int, int]) -> Tuple[int, int]:
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> "Mat2":
        return mat_pow(self, n)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Mat2(1, 0, 0, 1)


def mat_mul(lhs: Mat2, rhs: Mat2) -> Mat2:
    return Mat2(lhs.a * rhs.a + lhs.b * rhs.c,
                lhs.a * rhs.b + lhs.b * rhs.d,
                lhs.c * rhs.a + lhs.d * rhs.c,
                lhs.c * rhs.b + lhs.d * rhs.d)


def mat_inv(m: Mat2) -> Mat2:
    # det is +-1, so the inverse is det * adjugate
    s = m.det
    return Mat2(s * m.d, -s * m.b, -s * m.c, s * m.a)


def mat_pow(m: Mat2, n: int) -> Mat2:
    if n < 0:
        m, n = mat_inv(m), -n
    result = IDENTITY
    while n:
        if n & 1:
            result = result @ m
        m = m @ m
        n >>= 1
    return result


def mat_prod(factors: Iterable[Mat2]) -> Mat2:
    """Left-to-right product of ``factors``."""
    result = IDENTITY
    for f in factors:
        result = result @ f
    return result


def conjugate(m: Mat2, by: Mat2) -> Mat2:
    """Return ``by^-1 * m * by``."""
    return mat_inv(by) @ m @ by


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True, order=True)
class ParabolicParams:
    """Parameters (eps, c, d) of a primitive parabolic matrix.

    Construction normalizes the sign of (c, d) so that d > 0, or d == 0 and
    c > 0; the two sign choices describe the same matrix.
    """

    eps: int
    c: int
    d: int

    def __post_init__(self):
        eps, c, d = (operator.index(x) for x in (self.eps, self.c, self.d))
        if eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {eps}")
        if gcd(c, d) != 1:
            raise NotPrimitiveParabolic(f"gcd({c}, {d}) = {gcd(c, d)} != 1")
        if d < 0 or (d == 0 and c < 0):
            c, d = -c, -d
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def vector(self) -> Tuple[int, int]:
        return (self.c, self.d)

    def __str__(self):
        return f"{self.eps:+d}:{self.c}:{self.d}"


def parabolic_matrix(p: ParabolicParams) -> Mat2:
    e, c, d = p.eps, p.c, p.d
    return Mat2(1 + e * c * d, e * d * d, -e * c * c, 1 - e * c * d)


def _exact_sqrt(n: int):
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def parabolic_params(m: Mat2) -> ParabolicParams:
    """Invert :func:`parabolic_matrix`.

    Raises NotPrimitiveParabolic for the identity, for det or trace other
    than 1 and 2, and for imprimitive parabolics such as [[1, 0], [9, 1]].
    """
    if m.det != 1 or m.trace != 2 or m == IDENTITY:
        raise NotPrimitiveParabolic(f"{m} is not a nontrivial parabolic")
    p, q, r = m.a - 1, m.b, m.c
    eps = _sign(q) if q else -_sign(r)
    d = _exact_sqrt(eps * q)
    c = _exact_sqrt(-eps * r)
    if c is None or d is None:
        raise NotPrimitiveParabolic(f"{m}: off-diagonal entries are not squares")
    if eps * c * d != p:
        c = -c
        if eps * c * d != p:
            raise NotPrimitiveParabolic(f"{m}: inconsistent diagonal")
    if gcd(c, d) != 1:
        raise NotPrimitiveParabolic(
            f"{m} is imprimitive (gcd(c, d) = {gcd(c, d)})")
    return ParabolicParams(eps, c, d)


def is_primitive_parabolic(m: Mat2) -> bool:
    try:
        parabolic_params(m)
    except NotPrimitiveParabolic:
        return False
    return True


def conj_params(p: ParabolicParams, by: Mat2) -> ParabolicParams:
    """Parameters of ``by^-1 * parabolic_matrix(p) * by``.

    The vector (c, d) is mapped by the transpose of ``by`` and eps is
    multiplied by det(by).
    """
    c, d = by.transpose().apply(p.vector)
    return ParabolicParams(p.eps * by.det, c, d)


def primitive_params(bound: int, eps: Optional[int] = None) -> List[ParabolicParams]:
    """All canonical parameters with |c|, |d| <= bound, in sorted order."""
    signs = (1, -1) if eps is None else (eps,)
    out = []
    for e in signs:
        for d in range(0, bound + 1):
            for c in range(-bound, bound + 1):
                if d == 0 and c <= 0:
                    continue
                if gcd(c, d) == 1:
                    out.append(ParabolicParams(e, c, d))
    out.sort()
    return out


def parse_matrix(text: str) -> Mat2:
    """Parse a row-major quadruple such as ``"-7,-1,1,0"``."""
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated integers, got {text!r}")
    try:
        entries = [int(t) for t in parts]
    except ValueError:
        raise ValueError(f"non-integer entry in {text!r}") from None
    return Mat2(*entries)


def parse_params(text: str) -> ParabolicParams:
    """Parse an ``eps:c:d`` triple such as ``"+1:2:1"``."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValueError(f"expected eps:c:d, got {text!r}")
    try:
        eps, c, d = (int(t) for t in parts)
    except ValueError:
        raise ValueError(f"non-integer entry in {text!r}") from None
    return ParabolicParams(eps, c, d)
