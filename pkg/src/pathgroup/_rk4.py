"""Compiled fixed-step RK4 for the Hamiltonian system from the identity.

State per row: x, l (n), y (n), h0, h (n); w is constant and read from input.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def _rhs(s, n, w, r, out):
    x = s[0]
    h0 = s[2 * n + 1]
    out[0] = h0
    acc = 0.0
    for i in range(n):
        li = s[1 + i]
        hi = s[2 * n + 2 + i]
        out[1 + i] = hi
        out[n + 1 + i] = 0.5 * (h0 * li - x * hi)
        acc += w[r, i] * hi
        out[2 * n + 2 + i] = -w[r, i] * h0
    out[2 * n + 1] = acc


@numba.njit(cache=True)
def rk4_rows(h0, h, w, t, steps):
    m, n = h.shape
    d = 3 * n + 2
    out = np.zeros((m, d))
    s = np.empty(d)
    tmp = np.empty(d)
    k1 = np.empty(d)
    k2 = np.empty(d)
    k3 = np.empty(d)
    k4 = np.empty(d)
    for r in range(m):
        for j in range(d):
            s[j] = 0.0
        s[2 * n + 1] = h0[r]
        for i in range(n):
            s[2 * n + 2 + i] = h[r, i]
        dt = t[r] / steps
        for _ in range(steps):
            _rhs(s, n, w, r, k1)
            for j in range(d):
                tmp[j] = s[j] + 0.5 * dt * k1[j]
            _rhs(tmp, n, w, r, k2)
            for j in range(d):
                tmp[j] = s[j] + 0.5 * dt * k2[j]
            _rhs(tmp, n, w, r, k3)
            for j in range(d):
                tmp[j] = s[j] + dt * k3[j]
            _rhs(tmp, n, w, r, k4)
            for j in range(d):
                s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        for j in range(d):
            out[r, j] = s[j]
    return out
