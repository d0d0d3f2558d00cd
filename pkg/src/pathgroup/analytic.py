"""Closed-form functions of (tau, alpha) that govern optimality.

All functions accept scalars or numpy arrays. ``tau`` is the rescaled time.

Jacobian conventions. ``jacobian_J4`` is the determinant of the map
(tau, 1/rho, sigma, alpha) -> (x, l.l, l.y, y.y) and ``jacobian_J3`` that of
(1/rho, sigma, alpha) -> (x, l.l, l.y) at fixed tau; using 1/rho instead of rho
flips the sign and multiplies by rho^2. ``jacobian_J2`` is the determinant of
(rho, sigma) -> (l.l, l.y) on the slice x = 0 with cos(tau + alpha) = 1.
"""

import numpy as np

from ._series import evaluate


def _trig(tau, alpha):
    tau = np.asarray(tau, dtype=float)
    cb2 = np.cos(tau + alpha) ** 2
    return tau, np.sin(tau), cb2


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def f0(tau):
    """tau (tau - sin cos); the value of f where cos(tau + alpha) = 0."""
    return _out(np.asarray(tau, dtype=float) * evaluate("a", tau))


def f1(tau):
    """tau^2 + tau sin cos - 2 sin^2; the value of f where cos^2(tau + alpha) = 1."""
    return evaluate("f1", tau)


# the same function shows up as the wedge bound in the no-shortcut argument
f_wedge = f1


def a1_minus(tau):
    """tau sin - tau^2 cos - tau^2 + sin^2."""
    return evaluate("a1m", tau)


def g3(tau):
    """3 sin - 3 tau cos - tau^2 sin."""
    return evaluate("g3", tau)


def h3(tau):
    """3 tau^2 + tau cos sin - 4 sin^2."""
    return evaluate("h3", tau)


def f_det(tau, alpha):
    """f = tau^2 - tau sin cos - 2 sin (sin - tau cos) cos^2(tau + alpha).

    Along a helix, det(l, y) in the (k, kperp) frame equals -(2 sigma / rho^3) f.
    """
    tau, s, cb2 = _trig(tau, alpha)
    # f = f0 sin^2(tau+alpha) + f1 cos^2(tau+alpha) avoids the cancellation near 0
    return _out(f0(tau) * (1.0 - cb2) + evaluate("f1", tau) * cb2)


def A_fun(tau, alpha):
    """A = tau^2 (sin - tau cos)^2 - (tau^2 - sin^2)^2 cos^2(tau + alpha)."""
    tau, s, cb2 = _trig(tau, alpha)
    b = evaluate("b", tau)
    d2 = evaluate("d2", tau)
    a0 = tau * tau * b * b
    # tau^2 b^2 - d2^2 = (tau b - d2)(tau b + d2) and tau b - d2 = a1_minus
    a1 = evaluate("a1m", tau) * (tau * b + d2)
    return _out(a0 * (1.0 - cb2) + a1 * cb2)


def B_fun(tau, alpha):
    """B = sin (sin - tau cos) f / 2."""
    tau = np.asarray(tau, dtype=float)
    return _out(0.5 * np.sin(tau) * evaluate("b", tau) * f_det(tau, alpha))


def jacobian_J4(tau, rho, sigma, alpha):
    return _out(256.0 * sigma / rho ** 9 * f_det(tau, alpha)
                * (A_fun(tau, alpha) * sigma ** 2 + B_fun(tau, alpha)))


def jacobian_J3(tau, rho, sigma, alpha):
    tau, s, cb2 = _trig(tau, alpha)
    b = evaluate("b", tau)
    a = evaluate("a", tau)
    inner = (2.0 * sigma ** 2 * tau ** 2 * b + tau * s * a
             + 2.0 * s * cb2 * evaluate("f1", tau))
    return _out(-32.0 / rho ** 5 * sigma * tau * s * inner)


def jacobian_J2(tau, rho, sigma):
    tau = np.asarray(tau, dtype=float)
    s = np.sin(tau)
    b = evaluate("b", tau)
    return _out(16.0 * sigma * tau / rho ** 6
                * (2.0 * sigma ** 2 * tau ** 2 * b + s * evaluate("h3", tau)))
