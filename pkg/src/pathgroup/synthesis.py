"""Inverse exponential map: all minimizing geodesics from the identity to a
target point, and the sub-Riemannian distance.

Generic targets (l and y independent) are solved in invariants. For a fixed
rescaled time tau the three equations for (x, l.l, l.y) are solved for
(1/rho, sigma, alpha); the remaining equation for y.y becomes a scalar
function of tau,

    F(tau) = y.y rho^4 - [(tau - sin cos)^2 + 4 sigma^2 cos^2(tau + alpha) (sin - tau cos)^2],

whose first sign change on (0, pi) is the optimal rescaled time. Targets with
F >= 0 on all of (0, pi] lie in the cut locus and are reached at tau = pi by
the pair alpha, -alpha.

The inner solve is one-dimensional: eliminating sin(tau + alpha) with the x
equation and sigma with the l.l equation leaves |l.y| as a strictly increasing
function of 1/rho on its feasible interval, so it is solved by bracketing.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from ._series import a_fun, b_fun, evaluate
from .errors import ConvergenceFailure
from .geodesics import GeodesicParams, Helix, Line, geodesic_curve, plane_coordinates
from .group import DEFAULT_TOL, GroupPoint, Stratum, classify, multiply, reduce_to_origin
from .symmetry import InvariantPoint, invariants_of, reduced_exp

log = logging.getLogger(__name__)

GRID_POINTS = 128
NEWTON_BUDGET = 64
BISECTION_BUDGET = 200
TAU_XTOL = 1e-14


class Multiplicity(enum.Enum):
    UNIQUE = "unique"
    MAXWELL_PAIR = "maxwell_pair"
    INFINITE_FAMILY = "infinite_family"


class Solution(NamedTuple):
    params: GeodesicParams
    time: float


@dataclass(frozen=True)
class SynthesisResult:
    solutions: tuple
    distance: float
    multiplicity: Multiplicity
    stratum: Stratum
    # rescaled time of the helix solutions; None for lines and the identity
    tau: Optional[float] = None
    is_conjugate_at_cut: bool = False
    diagnostics: dict = field(default_factory=dict, compare=False)


# -- inner solve at fixed tau -------------------------------------------------

@dataclass(frozen=True)
class _Target:
    """Normalized invariants of a G2 target."""

    x: float
    r2: float  # x^2 + l.l
    d: float   # l.y
    y2: float


def _dot_l_y(u, tau, s, f1, b, tgt):
    """|l.y| as a function of u = 1/rho at fixed tau (the other two equations eliminated)."""
    c2 = 1.0 - tgt.x * tgt.x / (4.0 * u * u * s * s) if tgt.x != 0.0 else 1.0
    c = np.sqrt(np.maximum(c2, 0.0))
    return 2.0 * c * (u ** 3 * s * f1 / tau + u * b * tgt.r2 / (2.0 * tau))


def _bounds(s, tgt):
    u_lo = abs(tgt.x) / (2.0 * s)
    u_hi = math.sqrt(tgt.r2) / (2.0 * s)
    return u_lo, u_hi


def _params_from_u(u, tau, s, tgt):
    """sigma and beta = tau + alpha given u = 1/rho."""
    sig2 = np.maximum((tgt.r2 / (4.0 * u * u) - s * s), 0.0) / (tau * tau)
    sin_b = tgt.x / (2.0 * u * s)
    cos_b = np.sign(tgt.d) * np.sqrt(np.maximum(1.0 - sin_b * sin_b, 0.0))
    return np.sqrt(sig2), np.arctan2(sin_b, cos_b)


def _inner_grid(taus, tgt):
    """Vectorized bisection of the inner equation; NaN where infeasible."""
    taus = np.asarray(taus, dtype=float)
    s = np.sin(taus)
    f1 = evaluate("f1", taus)
    b = evaluate("b", taus)
    lo = np.abs(tgt.x) / (2.0 * s)
    hi = math.sqrt(tgt.r2) / (2.0 * s)
    target = abs(tgt.d)
    feasible = _dot_l_y(hi, taus, s, f1, b, tgt) >= target
    for _ in range(BISECTION_BUDGET):
        mid = 0.5 * (lo + hi)
        up = _dot_l_y(mid, taus, s, f1, b, tgt) >= target
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
        if np.all((hi - lo) <= 4e-16 * hi):
            break
    u = np.where(feasible, 0.5 * (lo + hi), np.nan)
    return u


def _inner_scalar(tau, tgt):
    s = math.sin(tau)
    f1 = evaluate("f1", tau)
    b = evaluate("b", tau)
    u_lo, u_hi = _bounds(s, tgt)
    target = abs(tgt.d)
    g_hi = _dot_l_y(u_hi, tau, s, f1, b, tgt) - target
    if g_hi < 0:
        return math.nan
    if g_hi == 0:
        return u_hi
    return brentq(lambda u: _dot_l_y(u, tau, s, f1, b, tgt) - target, u_lo, u_hi,
                  xtol=1e-300, rtol=1e-15, maxiter=BISECTION_BUDGET)


def _geodesic_y2_scaled(tau, u, tgt):
    """rho^4 y.y of the geodesic selected by the inner solve."""
    s = np.sin(tau)
    sig, beta = _params_from_u(u, tau, s, tgt)
    a = a_fun(tau)
    b = b_fun(tau)
    return a * a + 4.0 * sig * sig * np.cos(beta) ** 2 * b * b


def _F(tau, tgt, u=None):
    if u is None:
        u = _inner_scalar(tau, tgt)
    if not np.isfinite(u):
        return math.nan
    # sign-equivalent to y.y rho^4 - (...) but free of the rho^4 range problem
    return tgt.y2 - u ** 4 * _geodesic_y2_scaled(tau, u, tgt)


def _tau_grid(x_zero: bool):
    taus = math.pi * np.arange(1, GRID_POINTS) / GRID_POINTS
    # short geodesics: after normalization tau is comparable to |y| / |l|^2
    head = np.geomspace(1e-10, taus[0], 41)[:-1]
    if x_zero:
        tail = [math.pi]
    else:
        # F tends to a negative limit at pi; approach it geometrically
        tail = [math.pi * (1.0 - 10.0 ** -k) for k in range(3, 13)]
    return np.concatenate((head, taus, tail))


def _normalized_target(inv: InvariantPoint) -> _Target:
    return _Target(inv.x, inv.x * inv.x + inv.l2, inv.ldoty, inv.y2)


def F_y2_profile(inv: InvariantPoint, tau_grid, tol: float = DEFAULT_TOL):
    """Values of F on ``tau_grid`` as (tau, F) pairs; F is NaN where the inner
    three-equation system has no solution at that tau."""
    tgt = _normalized_target(inv)
    if abs(tgt.x) <= tol * max(1.0, math.sqrt(tgt.r2)):
        tgt = _Target(0.0, inv.l2, tgt.d, tgt.y2)
    taus = np.asarray(tau_grid, dtype=float)
    u = _inner_grid(taus, tgt)
    out = []
    for tau, ui in zip(taus, u):
        if not np.isfinite(ui):
            out.append((float(tau), math.nan))
            continue
        out.append((float(tau), float(tgt.y2 / ui ** 4 - _geodesic_y2_scaled(tau, ui, tgt))))
    return out


def _sign_changes(taus, F):
    """Brackets (taus[i], taus[j]) with F[i] > 0 >= F[j], j the next finite entry."""
    idx = [i for i, v in enumerate(F) if np.isfinite(v)]
    return [(taus[i], taus[j]) for i, j in zip(idx, idx[1:]) if F[i] > 0 and F[j] <= 0]


def _feasibility_edge(taus, F, tgt):
    """Bracket between the start of the feasible set and the first feasible
    grid point, when F is already non-positive there.

    Feasibility starts where sigma = 0, which can fall between grid points
    with the root in the sliver before the first feasible one.
    """
    finite = [i for i, v in enumerate(F) if np.isfinite(v)]
    if not finite or finite[0] == 0 or F[finite[0]] > 0:
        return None
    lo, hi = taus[finite[0] - 1], taus[finite[0]]
    for _ in range(BISECTION_BUDGET):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if np.isfinite(_inner_scalar(mid, tgt)):
            hi = mid
        else:
            lo = mid
    return hi, taus[finite[0]]


# -- polishing ---------------------------------------------------------------

def _residual(z, inv: InvariantPoint):
    tau, u, sig, beta = z
    r = reduced_exp(tau, 1.0 / u, sig, beta - tau)
    return np.array([r.x - inv.x, r.l2 - inv.l2, r.ldoty - inv.ldoty, r.y2 - inv.y2])


def _newton_polish(z, inv, tau_max):
    z = np.array(z, dtype=float)
    res = _residual(z, inv)
    norm = np.linalg.norm(res)
    for _ in range(NEWTON_BUDGET):
        if norm < 1e-15:
            break
        J = np.empty((4, 4))
        for j in range(4):
            h = 1e-7 * max(1.0, abs(z[j]))
            e = np.zeros(4)
            e[j] = h
            J[:, j] = (_residual(z + e, inv) - _residual(z - e, inv)) / (2 * h)
        try:
            step = np.linalg.solve(J, -res)
        except np.linalg.LinAlgError:
            break
        cand = z + step
        if not (0 < cand[0] < tau_max and cand[1] > 0 and cand[2] > 0):
            break
        cres = _residual(cand, inv)
        cnorm = np.linalg.norm(cres)
        if not cnorm < norm:
            break
        z, res, norm = cand, cres, cnorm
    return z, norm


# -- frames ------------------------------------------------------------------

def _plane_frame(l, y, tau, rho, sigma, alpha):
    """Orthonormal (k, kperp) carrying the helix plane coordinates onto (l, y)."""
    e1 = l / np.linalg.norm(l)
    yp = y - (y @ e1) * e1
    e2 = yp / np.linalg.norm(yp)
    T = np.array([[np.linalg.norm(l), y @ e1], [0.0, np.linalg.norm(yp)]])
    _, l1, l2, y1, y2 = plane_coordinates(tau, rho, sigma, alpha)
    P = np.array([[float(l1), float(y1)], [float(l2), float(y2)]])
    U, _, Vt = np.linalg.svd(T @ np.linalg.inv(P))
    Q = U @ Vt
    E = np.column_stack((e1, e2))
    K = E @ Q
    k = K[:, 0] / np.linalg.norm(K[:, 0])
    kp = K[:, 1] - (K[:, 1] @ k) * k
    return k, kp / np.linalg.norm(kp)


# -- strata ------------------------------------------------------------------

def _line(p: GroupPoint, stratum):
    t = math.sqrt(p.x * p.x + float(p.l @ p.l))
    g = Line(p.x / t, p.l / t)
    return SynthesisResult((Solution(g, t),), t, Multiplicity.UNIQUE, stratum)


def _heisenberg(p: GroupPoint, tol):
    ynorm = float(np.linalg.norm(p.y))
    k = p.y / ynorm
    lk = float(p.l @ k)
    r = math.hypot(p.x, lk)
    if r <= tol:
        rho = math.sqrt(math.pi / ynorm)
        t = math.sqrt(4.0 * math.pi * ynorm)
        g = Helix(0.0, rho, 0.0, k)
        return SynthesisResult((Solution(g, t),), t, Multiplicity.INFINITE_FAMILY, Stratum.G1,
                               tau=math.pi, is_conjugate_at_cut=True)
    m = ynorm / (r * r)

    # (tau - sin cos) / (4 sin^2) = |y| / r^2, divided through by tau^2
    def eq(tau):
        s = math.sin(tau) / tau
        return a_fun(tau) / (tau * tau) - 4.0 * s * s * m

    tau = brentq(eq, min(m, 1.0), math.pi, xtol=TAU_XTOL, maxiter=BISECTION_BUDGET)
    rho = 2.0 * math.sin(tau) / r
    alpha = math.atan2(p.x, lk) - tau
    g = Helix(alpha, rho, 0.0, k)
    return SynthesisResult((Solution(g, 2.0 * tau / rho),), 2.0 * tau / rho,
                           Multiplicity.UNIQUE, Stratum.G1, tau=tau)


def _cut_locus_g2(p: GroupPoint, inv: InvariantPoint, diagnostics):
    sin_phi = inv.lwedge / (inv.l_norm * inv.y_norm)
    cos_phi = inv.ldoty / (inv.l_norm * inv.y_norm)
    ys = inv.y_norm * sin_phi
    rho = math.sqrt(math.pi / ys)
    sigma = inv.l_norm / math.sqrt(4.0 * math.pi * ys)
    cos_a = -cos_phi / inv.l_norm * math.sqrt(math.pi * inv.y_norm / sin_phi)
    conj = abs(cos_a) >= 1.0 - 1e-12
    alpha = math.acos(max(-1.0, min(1.0, cos_a)))
    k, kp = _plane_frame(p.l, p.y, math.pi, rho, sigma, alpha)
    sols = []
    for a in (alpha, -alpha):
        g = Helix(a, rho, sigma, k, kp)
        sols.append(Solution(g, 2.0 * math.pi * math.sqrt(1.0 + sigma * sigma) / rho))
    return SynthesisResult(tuple(sols), sols[0].time, Multiplicity.MAXWELL_PAIR, Stratum.G2,
                           tau=math.pi, is_conjugate_at_cut=conj, diagnostics=diagnostics)


def _generic(p: GroupPoint, tol):
    inv = invariants_of(p)
    x_zero = abs(inv.x) <= tol
    if x_zero:
        inv = InvariantPoint(0.0, inv.l2, inv.ldoty, inv.lwedge, inv.y2)
        p = GroupPoint(0.0, p.l, p.y)
    diagnostics = {}
    if x_zero and inv.ldoty == 0.0:
        diagnostics["route"] = "orthogonal cut point"
        return _cut_locus_g2(p, inv, diagnostics)

    tgt = _normalized_target(inv)
    taus = _tau_grid(x_zero)
    u = _inner_grid(taus, tgt)
    F = [(_F(t, tgt, ui) if np.isfinite(ui) else math.nan) for t, ui in zip(taus, u)]
    changes = _sign_changes(taus, F)
    edge = _feasibility_edge(taus, F, tgt)
    if edge is not None:
        changes.insert(0, edge)
    diagnostics["sign_changes"] = len(changes)
    if len(changes) > 1:
        log.info("F profile has %d sign changes; taking the first", len(changes))
    if not changes:
        if x_zero:
            diagnostics["route"] = "cut locus"
            return _cut_locus_g2(p, inv, diagnostics)
        raise ConvergenceFailure("no sign change of F on (0, pi)",
                                 {"F": F, "taus": taus.tolist()})
    lo, hi = changes[0]
    if _F(lo, tgt) <= 0:
        tau = lo
    elif _F(hi, tgt) >= 0:
        # root within roundoff of a grid point
        tau = hi
    else:
        tau = brentq(lambda t: _F(t, tgt), lo, hi, xtol=TAU_XTOL, maxiter=BISECTION_BUDGET)
    ui = _inner_scalar(tau, tgt)
    if not np.isfinite(ui):
        raise ConvergenceFailure("inner system infeasible at the outer root", {"tau": tau})
    sig, beta = _params_from_u(ui, tau, math.sin(tau), tgt)
    z, resid = _newton_polish((tau, ui, float(sig), float(beta)), inv, math.pi)
    tau, ui, sig, beta = z
    diagnostics["residual"] = float(resid)
    if resid > 1e-8:
        raise ConvergenceFailure("polished residual too large", {"residual": resid, "tau": tau})
    rho = 1.0 / ui
    alpha = beta - tau
    k, kp = _plane_frame(p.l, p.y, tau, rho, sig, alpha)
    g = Helix(alpha, rho, sig, k, kp)
    t = 2.0 * tau * math.sqrt(1.0 + sig * sig) / rho
    diagnostics["route"] = "generic"
    return SynthesisResult((Solution(g, t),), t, Multiplicity.UNIQUE, Stratum.G2, tau=tau,
                           diagnostics=diagnostics)


def _rescale(result: SynthesisResult, lam: float) -> SynthesisResult:
    """Undo the dilation (x, l, y) -> (x, l, y scaled by lam, lam, lam^2)."""
    sols = []
    for g, t in result.solutions:
        if isinstance(g, Helix):
            g = Helix(g.alpha, g.rho / lam, g.sigma, g.k, g.kperp)
        sols.append(Solution(g, t * lam))
    return SynthesisResult(tuple(sols), result.distance * lam, result.multiplicity,
                           result.stratum, result.tau, result.is_conjugate_at_cut,
                           result.diagnostics)


def synthesize(target: GroupPoint, tol: float = DEFAULT_TOL) -> SynthesisResult:
    """All minimizing geodesics from the identity to ``target``.

    For cut points in the Heisenberg stratum (points (0 | 0 | y)) the family is
    infinite; the representative with alpha = 0 is returned.
    """
    lam = max(abs(target.x), float(np.linalg.norm(target.l)),
              math.sqrt(float(np.linalg.norm(target.y))))
    if lam == 0.0:
        return SynthesisResult((), 0.0, Multiplicity.UNIQUE, Stratum.G0)
    p = GroupPoint(target.x / lam, target.l / lam, target.y / lam ** 2)
    if float(np.linalg.norm(p.y)) <= tol:
        result = _line(p, classify(p, tol))
    else:
        stratum = classify(p, tol)
        if stratum is Stratum.G1:
            result = _heisenberg(p, tol)
        else:
            result = _generic(p, tol)
    log.debug("synthesized %r: %s", target, result.diagnostics)
    return _rescale(result, lam)


def distance(q0: GroupPoint, q1: GroupPoint, tol: float = DEFAULT_TOL) -> float:
    return synthesize(reduce_to_origin(q0, q1), tol).distance


def trajectory(g: GeodesicParams, ts, q0: Optional[GroupPoint] = None):
    """Geodesic samples, left-translated to start at ``q0`` when given."""
    x, l, y = geodesic_curve(g, ts)
    pts = [GroupPoint(xi, li, yi) for xi, li, yi in zip(x, l, y)]
    if q0 is not None:
        pts = [multiply(q0, p) for p in pts]
    return pts
