"""Cut time, cut locus and first conjugate time of geodesics from the identity.

Every helix stops minimizing at rescaled time tau = pi, i.e. at
t_cut = 2 pi sqrt(1 + sigma^2) / rho. Its endpoint is reached by infinitely
many geodesics when sigma = 0 and by the pair alpha, -alpha otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .analytic import (A_fun, B_fun, a1_minus, f0, f1, f_det, f_wedge, g3, h3,
                       jacobian_J2, jacobian_J3, jacobian_J4)
from .errors import NotInCutLocus, RootNotBracketed
from .geodesics import GeodesicParams, Line, physical_time
from .group import DEFAULT_TOL, GroupPoint, Stratum, classify
from .symmetry import invariants_of

__all__ = [
    "A_fun", "B_fun", "CutInfo", "Multiplicity", "TAU0", "a1_minus", "conjugate_time",
    "cut_info", "cut_time", "cut_time_at_point", "f0", "f1", "f_det", "f_wedge", "g3",
    "h3", "in_cut_locus", "jacobian_J2", "jacobian_J3", "jacobian_J4", "phi0",
]

ALPHA_TOL = 1e-9
TAU_XTOL = 1e-14


def _tan_fixed_point():
    # least positive solution of tan(tau) = tau, written as sin - tau cos = 0
    return brentq(lambda t: math.sin(t) - t * math.cos(t), math.pi + 1e-6, 1.5 * math.pi - 1e-6,
                  xtol=1e-15)


TAU0 = _tan_fixed_point()


class Multiplicity(enum.Enum):
    TWO = "two"
    INFINITE = "infinite"


@dataclass(frozen=True)
class CutInfo:
    t_cut: float
    is_conjugate_at_cut: bool
    multiplicity: Multiplicity


def cut_time(g: GeodesicParams) -> float:
    if isinstance(g, Line):
        return math.inf
    return 2.0 * math.pi * math.sqrt(1.0 + g.sigma ** 2) / g.rho


def _alpha_degenerate(alpha: float) -> bool:
    # alpha in {0, pi} modulo 2 pi
    return abs(math.sin(alpha)) < ALPHA_TOL


def cut_info(g: GeodesicParams) -> CutInfo:
    if isinstance(g, Line):
        raise ValueError("straight lines minimize for all times")
    if g.sigma == 0.0:
        return CutInfo(cut_time(g), True, Multiplicity.INFINITE)
    return CutInfo(cut_time(g), _alpha_degenerate(g.alpha), Multiplicity.TWO)


def _x_is_zero(p: GroupPoint, tol: float) -> bool:
    scale = max(1.0, float(np.linalg.norm(p.l)), math.sqrt(float(np.linalg.norm(p.y))))
    return abs(p.x) <= tol * scale


def in_cut_locus(q: GroupPoint, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the cut locus of the identity.

    Uses pi (l.y)^2 <= |l|^3 |l^y| on the G2 part, so no angles are needed.
    """
    if not _x_is_zero(q, tol):
        return False
    stratum = classify(q, tol)
    if stratum is Stratum.G0:
        return False
    inv = invariants_of(q)
    if stratum is Stratum.G1:
        return inv.l_norm < tol and inv.y_norm >= tol
    return math.pi * inv.ldoty ** 2 <= inv.l2 * inv.l_norm * inv.lwedge


def cut_time_at_point(q: GroupPoint, tol: float = DEFAULT_TOL) -> float:
    if not in_cut_locus(q, tol):
        raise NotInCutLocus(f"{q!r} is not in the cut locus")
    inv = invariants_of(q)
    if classify(q, tol) is Stratum.G1:
        return math.sqrt(4.0 * math.pi * inv.y_norm)
    # |y| sin(phi) = |l^y| / |l|
    return math.sqrt(4.0 * math.pi * inv.lwedge / inv.l_norm + inv.l2)


def phi0(l_norm: float, y_norm: float) -> float:
    """Smallest angle between l and y for which (0 | l | y) is a cut point."""
    if not (l_norm > 0 and y_norm > 0):
        raise ValueError("both norms must be positive")
    l2 = l_norm * l_norm
    # (-l2 + sqrt(l2^2 + 4 pi^2 y^2)) / (2 pi y), rationalized against cancellation
    s = 2.0 * math.pi * y_norm / (l2 + math.sqrt(l2 * l2 + 4.0 * math.pi ** 2 * y_norm ** 2))
    return math.asin(min(1.0, s))


def _first_zero_of_A(alpha: float) -> float:
    grid = np.arange(math.pi + 1e-3, TAU0 + 0.1, 1e-3)
    vals = A_fun(grid, alpha)
    neg = np.nonzero(vals <= 0)[0]
    if neg.size == 0:
        raise RootNotBracketed(f"A(., {alpha}) has no zero on (pi, tau0 + 0.1]")
    i = neg[0]
    if i == 0:
        lo = math.pi
    else:
        lo = grid[i - 1]
    return brentq(lambda t: A_fun(t, alpha), lo, grid[i], xtol=TAU_XTOL)


def conjugate_rescaled_time(sigma: float, alpha: float) -> float:
    """First conjugate time in rescaled units, for sigma > 0."""
    if _alpha_degenerate(alpha):
        return math.pi
    tau_a = _first_zero_of_A(alpha)
    s2 = sigma * sigma

    def jac(t):
        return A_fun(t, alpha) * s2 + B_fun(t, alpha)

    lo, hi = math.pi, tau_a
    if not (jac(lo) > 0 and jac(hi) < 0):
        raise RootNotBracketed(
            f"A sigma^2 + B does not change sign on (pi, {tau_a}) for sigma={sigma}, alpha={alpha}")
    return brentq(jac, lo, hi, xtol=TAU_XTOL)


def conjugate_time(g: GeodesicParams) -> float:
    if isinstance(g, Line):
        return math.inf
    if g.sigma == 0.0:
        return 2.0 * math.pi / g.rho
    return physical_time(g, conjugate_rescaled_time(g.sigma, g.alpha))
