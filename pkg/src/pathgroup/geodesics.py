"""Normal geodesics from the identity: covelocities, the closed-form
exponential map, and a Runge-Kutta integration of the Hamiltonian system
that serves as an independent check on it.

Helix geodesics use the rescaled time tau = rho t / (2 sqrt(1 + sigma^2)).
In the orthonormal plane frame (k, kperp) the endpoint is

    x  = (2/rho) sin(tau) sin(tau + alpha)
    l  = (2/rho) (sin(tau) cos(tau + alpha), tau sigma)
    y  = (1/rho^2) (tau - sin(tau) cos(tau),
                    2 sigma cos(tau + alpha) (sin(tau) - tau cos(tau)))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ._rk4 import rk4_rows
from ._series import a_fun, b_fun
from .errors import InvalidParams, NotUnitLevel
from .group import GroupPoint

TWO_PI = 2.0 * math.pi
SIGMA_ZERO = 1e-12
PARAM_TOL = 1e-12


def _vec(v) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(-1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Covelocity:
    """Fiber coordinates (h0, h, w) of an initial covector at the identity."""

    h0: float
    h: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h0", float(self.h0))
        object.__setattr__(self, "h", _vec(self.h))
        object.__setattr__(self, "w", _vec(self.w))
        if self.h.shape != self.w.shape:
            raise InvalidParams("h and w must have the same length")

    @property
    def n(self) -> int:
        return self.h.size

    def hamiltonian(self) -> float:
        return 0.5 * (self.h0 ** 2 + float(self.h @ self.h))

    def allclose(self, other: "Covelocity", atol=1e-10) -> bool:
        return (abs(self.h0 - other.h0) <= atol
                and np.allclose(self.h, other.h, rtol=0, atol=atol)
                and np.allclose(self.w, other.w, rtol=0, atol=atol))


@dataclass(frozen=True, eq=False)
class Line:
    """Straight geodesic t -> (c0 t | c t | 0) with c0^2 + |c|^2 = 1."""

    c0: float
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "c", _vec(self.c))
        norm2 = self.c0 ** 2 + float(self.c @ self.c)
        if abs(norm2 - 1.0) > PARAM_TOL:
            raise InvalidParams(f"line is not arclength: c0^2 + |c|^2 = {norm2!r}")

    @property
    def n(self) -> int:
        return self.c.size


@dataclass(frozen=True, eq=False)
class Helix:
    """Non-straight geodesic with shift ``alpha``, dilation ``rho`` and pitch ``sigma``.

    ``k`` and ``kperp`` span the plane that contains l(t) and y(t).
    ``kperp`` is ignored (and may be None) when sigma is zero.
    """

    alpha: float
    rho: float
    sigma: float
    k: np.ndarray
    kperp: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "k", _vec(self.k))
        if not self.rho > 0:
            raise InvalidParams(f"rho must be positive, got {self.rho!r}")
        if not self.sigma >= 0:
            raise InvalidParams(f"sigma must be non-negative, got {self.sigma!r}")
        if abs(float(np.linalg.norm(self.k)) - 1.0) > PARAM_TOL:
            raise InvalidParams("k must be a unit vector")
        if self.sigma < SIGMA_ZERO:
            object.__setattr__(self, "sigma", 0.0)
            if self.kperp is not None:
                object.__setattr__(self, "kperp", _vec(self.kperp))
            return
        if self.kperp is None:
            raise InvalidParams("kperp is required when sigma > 0")
        kp = _vec(self.kperp)
        object.__setattr__(self, "kperp", kp)
        if kp.shape != self.k.shape:
            raise InvalidParams("k and kperp must have the same length")
        if abs(float(np.linalg.norm(kp)) - 1.0) > PARAM_TOL or abs(float(kp @ self.k)) > PARAM_TOL:
            raise InvalidParams("kperp must be a unit vector orthogonal to k")

    @property
    def n(self) -> int:
        return self.k.size

    @property
    def kperp_or_zero(self) -> np.ndarray:
        if self.sigma == 0.0 or self.kperp is None:
            return np.zeros_like(self.k)
        return self.kperp


GeodesicParams = Union[Line, Helix]


def covelocity_from_params(g: GeodesicParams) -> Covelocity:
    if isinstance(g, Line):
        return Covelocity(g.c0, g.c, np.zeros_like(g.c))
    q = math.sqrt(1.0 + g.sigma ** 2)
    h0 = math.sin(g.alpha) / q
    h = g.k * (math.cos(g.alpha) / q) + g.kperp_or_zero * (g.sigma / q)
    w = g.k * (g.rho / q)
    return Covelocity(h0, h, w)


def params_from_covelocity(c: Covelocity, tol: float = 1e-12) -> GeodesicParams:
    """Invert :func:`covelocity_from_params`.

    A covelocity with w = 0, or with h0 = 0 and h orthogonal to w, gives a
    straight line (the latter drops w, so the roundtrip is not exact there).
    """
    if abs(2.0 * c.hamiltonian() - 1.0) > tol:
        raise NotUnitLevel(f"h0^2 + |h|^2 = {2.0 * c.hamiltonian()!r}, expected 1")
    Knorm = float(np.linalg.norm(c.w))
    if Knorm == 0.0:
        return Line(c.h0, c.h)
    k = c.w / Knorm
    proj = float(c.h @ k)
    r = math.hypot(c.h0, proj)  # = |K| / rho
    if r <= tol:
        return Line(c.h0, c.h)
    rho = Knorm / r
    alpha = math.atan2(c.h0, proj)
    kp = c.h - proj * k
    kp_norm = float(np.linalg.norm(kp))
    sigma = rho * kp_norm / Knorm
    if sigma < SIGMA_ZERO:
        return Helix(alpha, rho, 0.0, k)
    return Helix(alpha, rho, sigma, k, kp / kp_norm)


def vertical_flow(c: Covelocity, t: float) -> Covelocity:
    """Closed-form solution of the fiber system at time ``t``."""
    Knorm = float(np.linalg.norm(c.w))
    if Knorm == 0.0 or t == 0.0:
        return c
    k = c.w / Knorm
    proj = float(c.h @ k)
    Kperp = c.h - proj * k
    # (|K|/rho) sin(alpha + |K| t) and (1/rho) cos(alpha + |K| t) times |K|
    amp = math.hypot(c.h0, proj)
    phase = math.atan2(c.h0, proj) + Knorm * t
    h0 = amp * math.sin(phase)
    h = k * (amp * math.cos(phase)) + Kperp
    return Covelocity(h0, h, c.w)


def rescaled_time(g: Helix, t):
    if np.ndim(t):
        t = np.asarray(t, dtype=float)
    return g.rho * t / (2.0 * math.sqrt(1.0 + g.sigma ** 2))


def physical_time(g: Helix, tau):
    if np.ndim(tau):
        tau = np.asarray(tau, dtype=float)
    return 2.0 * tau * math.sqrt(1.0 + g.sigma ** 2) / g.rho


def plane_coordinates(tau, rho, sigma, alpha):
    """x and the (k, kperp) components of l and y at rescaled time ``tau``.

    Returns ``(x, l1, l2, y1, y2)``; broadcasts over array arguments.
    """
    tau = np.asarray(tau, dtype=float)
    s = np.sin(tau)
    beta = tau + alpha
    cb = np.cos(beta)
    x = 2.0 / rho * s * np.sin(beta)
    l1 = 2.0 / rho * s * cb
    l2 = 2.0 / rho * tau * sigma
    y1 = a_fun(tau) / rho ** 2
    y2 = 2.0 * sigma * cb * b_fun(tau) / rho ** 2
    return x, l1, l2, y1, y2


def geodesic_curve(g: GeodesicParams, ts):
    """Sample the geodesic at the times ``ts``.

    Returns arrays ``x`` (m,), ``l`` (m, n), ``y`` (m, n).
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if isinstance(g, Line):
        return g.c0 * ts, np.outer(ts, g.c), np.zeros((ts.size, g.n))
    tau = rescaled_time(g, ts)
    x, l1, l2, y1, y2 = plane_coordinates(tau, g.rho, g.sigma, g.alpha)
    k, kp = g.k, g.kperp_or_zero
    l2 = np.broadcast_to(l2, tau.shape)
    l = np.outer(l1, k) + np.outer(l2, kp)
    y = np.outer(y1, k) + np.outer(y2, kp)
    return np.asarray(x, dtype=float), l, y


def exp_point(g: GeodesicParams, t: float) -> GroupPoint:
    """Endpoint at arclength ``t`` of the geodesic from the identity."""
    x, l, y = geodesic_curve(g, [t])
    return GroupPoint(x[0], l[0], y[0])


def hamiltonian_flow(h0, h, w, t, steps: int):
    """Fixed-step RK4 integration of the Hamiltonian system from the identity.

    Vectorized: ``h0`` has shape (m,), ``h`` and ``w`` shape (m, n), ``t`` shape
    (m,); each row is integrated to its own final time with ``steps`` steps.
    Returns the final ``(x, l, y, h0, h, w)`` arrays.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    h = np.atleast_2d(np.asarray(h, dtype=float))
    w = np.ascontiguousarray(np.atleast_2d(np.asarray(w, dtype=float)))
    m, n = h.shape
    h0 = np.ascontiguousarray(np.broadcast_to(np.asarray(h0, dtype=float), (m,)))
    t = np.ascontiguousarray(np.broadcast_to(np.asarray(t, dtype=float), (m,)))
    state = rk4_rows(h0, np.ascontiguousarray(h), w, t, int(steps))
    return (state[:, 0], state[:, 1:n + 1], state[:, n + 1:2 * n + 1],
            state[:, 2 * n + 1], state[:, 2 * n + 2:], w)


def integrate_hamiltonian(c: Covelocity, t: float, steps: int = 10_000) -> GroupPoint:
    x, l, y, *_ = hamiltonian_flow([c.h0], c.h[None, :], c.w[None, :], [t], steps)
    return GroupPoint(x[0], l[0], y[0])
