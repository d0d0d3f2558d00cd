"""The path group G = R + R^n + R^n: points, group law, frame, metric.

Points are written (x | l | y) in canonical coordinates of the first kind.
The only nontrivial brackets are [X_i, X_0] = Y_i, which fixes the group law

    (x | l | y) . (x' | l' | y') = (x + x' | l + l' | y + y' + (l x' - x l') / 2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, NonHorizontal

DEFAULT_TOL = 1e-9


def _frozen(v) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(-1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """A point (x | l | y) of the path group."""

    x: float
    l: np.ndarray = field(repr=True)
    y: np.ndarray = field(repr=True)

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "l", _frozen(self.l))
        object.__setattr__(self, "y", _frozen(self.y))
        if self.l.shape != self.y.shape:
            raise DimensionMismatch(
                f"l has length {self.l.size} but y has length {self.y.size}")
        if self.l.size < 1:
            raise DimensionMismatch("n must be at least 1")

    @property
    def n(self) -> int:
        return self.l.size

    @classmethod
    def identity(cls, n: int) -> "GroupPoint":
        return cls(0.0, np.zeros(n), np.zeros(n))

    @classmethod
    def from_vector(cls, v) -> "GroupPoint":
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.size % 2 != 1:
            raise DimensionMismatch(f"vector of length {v.size} is not 2n+1")
        n = (v.size - 1) // 2
        return cls(v[0], v[1:n + 1], v[n + 1:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate(([self.x], self.l, self.y))

    def __eq__(self, other):
        if not isinstance(other, GroupPoint):
            return NotImplemented
        return (self.x == other.x and np.array_equal(self.l, other.l)
                and np.array_equal(self.y, other.y))

    __hash__ = None

    def __mul__(self, other: "GroupPoint") -> "GroupPoint":
        return multiply(self, other)

    def allclose(self, other: "GroupPoint", atol=1e-12, rtol=0.0) -> bool:
        _check_same_n(self, other)
        return bool(np.allclose(self.as_vector(), other.as_vector(), atol=atol, rtol=rtol))


class Stratum(enum.Enum):
    """Orbit type under SO(n): dimension of span{l, y}."""

    G0 = 0
    G1 = 1
    G2 = 2


def _check_same_n(p: GroupPoint, q: GroupPoint) -> None:
    if p.n != q.n:
        raise DimensionMismatch(f"points have n={p.n} and n={q.n}")


def multiply(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    _check_same_n(p, q)
    return GroupPoint(
        p.x + q.x,
        p.l + q.l,
        p.y + q.y + 0.5 * (p.l * q.x - p.x * q.l),
    )


def inverse(p: GroupPoint) -> GroupPoint:
    # the cross term l(-x) - x(-l) cancels
    return GroupPoint(-p.x, -p.l, -p.y)


def reduce_to_origin(q0: GroupPoint, q1: GroupPoint) -> GroupPoint:
    """Translate the pair (q0, q1) so that q0 goes to the identity.

    Returns q0^{-1} . q1. Left multiplication is what preserves the frame, so
    geodesics from q0 to q1 are q0 . g(t) for geodesics g from the identity to
    this point.
    """
    return multiply(inverse(q0), q1)


def frame_at(p: GroupPoint) -> np.ndarray:
    """Coordinate components of the left-invariant frame at ``p``.

    Row order is X_0, X_1..X_n, Y_1..Y_n; column order is d/dx, d/dl_i, d/dy_i.
    """
    n = p.n
    F = np.zeros((2 * n + 1, 2 * n + 1))
    F[0, 0] = 1.0
    F[0, n + 1:] = 0.5 * p.l
    for i in range(n):
        F[1 + i, 1 + i] = 1.0
        F[1 + i, n + 1 + i] = -0.5 * p.x
        F[n + 1 + i, n + 1 + i] = 1.0
    return F


def _split(p: GroupPoint, v):
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != 2 * p.n + 1:
        raise DimensionMismatch(f"tangent vector of length {v.size} at a point with n={p.n}")
    return v[0], v[1:p.n + 1], v[p.n + 1:]


def horizontality_defect(p: GroupPoint, v) -> float:
    """Euclidean norm of ydot - (xdot l - ldot x)/2; zero iff v is horizontal at p."""
    xd, ld, yd = _split(p, v)
    return float(np.linalg.norm(yd - 0.5 * (xd * p.l - ld * p.x)))


def horizontal_speed(p: GroupPoint, v, tol: float = DEFAULT_TOL) -> float:
    xd, ld, _ = _split(p, v)
    speed = float(np.sqrt(xd * xd + ld @ ld))
    defect = horizontality_defect(p, v)
    if defect > tol * max(1.0, speed):
        raise NonHorizontal(f"horizontality defect {defect:.3e} exceeds tolerance")
    return speed


def wedge_norm(l, y) -> float:
    """|l ^ y| computed from the 2x2 minors (Lagrange identity)."""
    l = np.asarray(l, dtype=float)
    y = np.asarray(y, dtype=float)
    if l.size < 2:
        return 0.0
    s = 0.0
    for i, j in combinations(range(l.size), 2):
        m = l[i] * y[j] - l[j] * y[i]
        s += m * m
    return float(np.sqrt(s))


def classify(p: GroupPoint, tol: float = DEFAULT_TOL) -> Stratum:
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = max(np.linalg.norm(p.l), np.linalg.norm(p.y))
    if scale < tol:
        return Stratum.G0
    # relative test: the sine of the angle between l and y
    if wedge_norm(p.l, p.y) <= tol * np.linalg.norm(p.l) * np.linalg.norm(p.y):
        return Stratum.G1
    return Stratum.G2
