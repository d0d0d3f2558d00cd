"""SO(n) symmetry: the rotation action, orbit invariants, and the exponential
map expressed in invariants (the factorized exponential map)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._series import a_fun, b_fun
from .analytic import f_det
from .errors import DimensionMismatch, NotSpecialOrthogonal
from .group import GroupPoint, wedge_norm


@dataclass(frozen=True)
class InvariantPoint:
    """SO(n)-invariant coordinates (x, l.l, l.y, |l^y|) plus |y|^2.

    ``y2`` is carried explicitly so that |y| is available when l = 0.
    """

    x: float
    l2: float
    ldoty: float
    lwedge: float
    y2: float

    @property
    def l_norm(self) -> float:
        return math.sqrt(self.l2)

    @property
    def y_norm(self) -> float:
        return math.sqrt(self.y2)

    @property
    def phi(self) -> Optional[float]:
        """Angle between l and y; None unless l and y are independent."""
        if self.lwedge > 0:
            return math.atan2(self.lwedge, self.ldoty)
        return None

    @classmethod
    def from_wedge(cls, x, l2, ldoty, lwedge):
        if l2 <= 0:
            raise ValueError("y^2 cannot be recovered from the invariants when l = 0")
        return cls(x, l2, ldoty, lwedge, (ldoty ** 2 + lwedge ** 2) / l2)

    def representative(self, n: int = 2) -> GroupPoint:
        """A point with these invariants, l along e1 and y in the (e1, e2) plane."""
        l = np.zeros(n)
        y = np.zeros(n)
        if self.l2 > 0:
            ln = self.l_norm
            l[0] = ln
            y[0] = self.ldoty / ln
            if self.lwedge > 0:
                if n < 2:
                    raise DimensionMismatch("a point with l^y != 0 needs n >= 2")
                y[1] = self.lwedge / ln
        else:
            y[0] = self.y_norm
        return GroupPoint(self.x, l, y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.l2, self.ldoty, self.lwedge, self.y2])


def so_n_act(R, p: GroupPoint, tol: float = 1e-10) -> GroupPoint:
    R = np.asarray(R, dtype=float)
    if R.shape != (p.n, p.n):
        raise DimensionMismatch(f"rotation of shape {R.shape} acting on n={p.n}")
    if not np.allclose(R.T @ R, np.eye(p.n), rtol=0, atol=tol):
        raise NotSpecialOrthogonal("R^T R != I")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise NotSpecialOrthogonal("det R != 1")
    return GroupPoint(p.x, R @ p.l, R @ p.y)


def invariants_of(p: GroupPoint) -> InvariantPoint:
    return InvariantPoint(
        x=p.x,
        l2=float(p.l @ p.l),
        ldoty=float(p.l @ p.y),
        lwedge=wedge_norm(p.l, p.y),
        y2=float(p.y @ p.y),
    )


def reduced_exp(tau, rho, sigma, alpha) -> InvariantPoint:
    """Invariants of the helix endpoint at rescaled time ``tau``."""
    s = math.sin(tau)
    beta = tau + alpha
    cb = math.cos(beta)
    a = a_fun(tau)
    b = b_fun(tau)
    x = 2.0 / rho * s * math.sin(beta)
    l2 = 4.0 / rho ** 2 * (s * s * cb * cb + tau * tau * sigma * sigma)
    ldoty = 2.0 / rho ** 3 * cb * (s * a + 2.0 * tau * sigma * sigma * b)
    lwedge = 2.0 / rho ** 3 * sigma * f_det(tau, alpha)
    y2 = (a * a + 4.0 * sigma * sigma * cb * cb * b * b) / rho ** 4
    return InvariantPoint(x, l2, ldoty, lwedge, y2)
