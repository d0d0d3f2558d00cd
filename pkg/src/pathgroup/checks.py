"""Acceptance suites shared by ``pathgroup verify`` and the test-suite.

Each check draws its samples from a seeded generator and returns a
:class:`CheckResult`; none of them raise on a numerical mismatch.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import mpmath
import numpy as np

from . import analytic
from .geodesics import (Helix, Line, covelocity_from_params, exp_point, geodesic_curve,
                        hamiltonian_flow)
from .group import GroupPoint
from .optimality import TAU0, conjugate_rescaled_time, conjugate_time, cut_time, in_cut_locus, phi0
from .symmetry import invariants_of, reduced_exp
from .synthesis import Multiplicity, synthesize

RK4_STEPS = 10_000


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _frame(rng, n):
    k = rng.normal(size=n)
    k /= np.linalg.norm(k)
    kp = rng.normal(size=n)
    kp -= (kp @ k) * k
    kp -= (kp @ k) * k  # second pass for nearly parallel draws
    return k, kp / np.linalg.norm(kp)


def _alpha_away(rng, margin=1e-2):
    """alpha uniform on the circle minus margin-neighbourhoods of 0 and pi."""
    a = rng.uniform(margin, math.pi - margin)
    return a if rng.random() < 0.5 else a + math.pi


def random_helix(rng, n, sigma_zero=False, rho=(0.3, 3.0), sigma=(0.05, 3.0)):
    k, kp = _frame(rng, n)
    s = 0.0 if sigma_zero else rng.uniform(*sigma)
    return Helix(rng.uniform(0, 2 * math.pi), rng.uniform(*rho), s, k, kp)


def check_oracle(rng):
    """Closed-form exponential map against RK4 on the Hamiltonian system."""
    worst = 0.0
    for n in (2, 3, 5):
        count = 34 if n != 5 else 32  # 100 geodesics in total
        h0, h, w, ts, expected = [], [], [], [], []
        for i in range(count):
            if i % 10 == 0:
                c = rng.normal(size=n + 1)
                c /= np.linalg.norm(c)
                g = Line(c[0], c[1:])
                horizon = 5.0
            else:
                g = random_helix(rng, n, sigma_zero=(i % 10 == 5))
                horizon = cut_time(g)
            cov = covelocity_from_params(g)
            t = np.sort(rng.uniform(0, horizon, 50))
            x, l, y = geodesic_curve(g, t)
            expected.append(np.column_stack((x, l, y)))
            h0.append(np.full(50, cov.h0))
            h.append(np.tile(cov.h, (50, 1)))
            w.append(np.tile(cov.w, (50, 1)))
            ts.append(t)
        x, l, y, *_ = hamiltonian_flow(np.concatenate(h0), np.vstack(h), np.vstack(w),
                                       np.concatenate(ts), RK4_STEPS)
        got = np.column_stack((x, l, y))
        worst = max(worst, float(np.max(np.abs(got - np.vstack(expected)))))
    return worst, worst < 1e-7


def check_heisenberg(rng):
    worst = 0.0
    worst_cut = 0.0
    for _ in range(1000):
        rho = rng.uniform(0.5, 5.0)
        alpha = rng.uniform(0, 2 * math.pi)
        t = rng.uniform(0, 2 * math.pi / rho)
        k, _ = _frame(rng, 3)
        g = Helix(alpha, rho, 0.0, k)
        p = exp_point(g, t)
        # three-dimensional Heisenberg geodesic along the direction k
        hx = (math.cos(alpha) - math.cos(rho * t + alpha)) / rho
        hl = (math.sin(rho * t + alpha) - math.sin(alpha)) / rho
        hy = (rho * t - math.sin(rho * t)) / (2 * rho ** 2)
        ref = np.concatenate(([hx], hl * k, hy * k))
        worst = max(worst, float(np.max(np.abs(p.as_vector() - ref))))
        end = exp_point(g, cut_time(g))
        tc = math.sqrt(4 * math.pi * float(np.linalg.norm(end.y)))
        worst_cut = max(worst_cut, abs(tc - 2 * math.pi / rho))
    return (worst, worst_cut), worst < 1e-13 and worst_cut < 1e-9


def check_cut_parametrization(rng):
    worst = 0.0
    for rho in np.linspace(0.5, 3.0, 10):
        for sigma in np.linspace(0.0, 3.0, 10):
            for alpha in np.linspace(0, 2 * math.pi, 10, endpoint=False):
                r = reduced_exp(math.pi, rho, sigma, alpha)
                cb = math.cos(math.pi + alpha)
                ref = np.array([
                    0.0,
                    2 * math.pi * sigma / rho,
                    4 * math.pi ** 2 * sigma ** 2 * cb / rho ** 3,
                    2 * math.pi ** 2 * sigma / rho ** 3,
                    math.pi / rho ** 2 * math.sqrt(1 + 4 * sigma ** 2 * cb ** 2),
                ])
                got = np.array([r.x, r.l_norm, r.ldoty, r.lwedge, r.y_norm])
                worst = max(worst, float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref)))))
    return worst, worst < 1e-10


def check_maxwell(rng):
    worst_same = 0.0
    least_apart = math.inf
    for _ in range(100):
        k, kp = _frame(rng, 3)
        rho = rng.uniform(0.3, 3.0)
        sigma = rng.uniform(0.05, 3.0)
        alpha = _alpha_away(rng)
        g1 = Helix(alpha, rho, sigma, k, kp)
        g2 = Helix(-alpha, rho, sigma, k, kp)
        tc = cut_time(g1)
        i1 = invariants_of(exp_point(g1, tc)).as_array()
        i2 = invariants_of(exp_point(g2, tc)).as_array()
        worst_same = max(worst_same, float(np.max(np.abs(i1 - i2))))
        mid = np.linalg.norm(exp_point(g1, tc / 2).as_vector() - exp_point(g2, tc / 2).as_vector())
        least_apart = min(least_apart, float(mid))
    return (worst_same, least_apart), worst_same < 1e-9 and least_apart > 1e-3


def _invariants_mp(tau, u, sigma, alpha):
    """(x, l.l, l.y, y.y) at the current mpmath precision; u = 1/rho."""
    s, c = mpmath.sin(tau), mpmath.cos(tau)
    cb = mpmath.cos(tau + alpha)
    a = tau - s * c
    b = s - tau * c
    return [2 * u * s * mpmath.sin(tau + alpha),
            4 * u ** 2 * (s * s * cb * cb + tau * tau * sigma * sigma),
            2 * u ** 3 * cb * (s * a + 2 * tau * sigma * sigma * b),
            u ** 4 * (a * a + 4 * sigma * sigma * cb * cb * b * b)]


def _fd_det(tau, rho, sigma, alpha):
    """det d(x, l.l, l.y, y.y)/d(tau, 1/rho, sigma, alpha) by central differences in
    60-digit arithmetic, where the truncation error is far below double precision."""
    with mpmath.workdps(60):
        z = [mpmath.mpf(tau), 1 / mpmath.mpf(rho), mpmath.mpf(sigma), mpmath.mpf(alpha)]
        h = mpmath.mpf("1e-25")
        J = mpmath.matrix(4, 4)
        for j in range(4):
            zp, zm = list(z), list(z)
            zp[j] += h
            zm[j] -= h
            fp, fm = _invariants_mp(*zp), _invariants_mp(*zm)
            for i in range(4):
                J[i, j] = (fp[i] - fm[i]) / (2 * h)
        return float(mpmath.det(J))


def check_jacobians(rng):
    worst = 0.0
    for _ in range(1000):
        tau = rng.uniform(0.1, math.pi - 0.1)
        rho = rng.uniform(0.5, 2.0)
        sigma = rng.uniform(0.1, 2.0)
        alpha = rng.uniform(0, 2 * math.pi)
        exact = analytic.jacobian_J4(tau, rho, sigma, alpha)
        worst = max(worst, abs(_fd_det(tau, rho, sigma, alpha) - exact) / abs(exact))
    T, A, S, R = np.meshgrid(np.linspace(0, math.pi, 27)[1:-1],
                             np.linspace(0, 2 * math.pi, 20, endpoint=False),
                             np.geomspace(1e-2, 10.0, 10), np.array([0.5, 2.0]), indexing="ij")
    signs = (bool(np.all(analytic.jacobian_J2(T, R, S) > 0))
             and bool(np.all(analytic.jacobian_J3(T, R, S, A) < 0))
             and bool(np.all(analytic.jacobian_J4(T, R, S, A) > 0)))
    return (worst, signs), worst < 1e-5 and signs


def check_positivity(rng):
    N = 10_000
    half = np.linspace(0, math.pi, N + 1)[1:-1]
    full = np.linspace(0, 4 * math.pi, N + 1)[1:]
    alphas = np.linspace(0, 2 * math.pi, 24, endpoint=False)
    failing = []
    if not all(np.all(analytic.f_det(full, a) > 0) for a in alphas):
        failing.append("f")
    if not all(np.all(analytic.A_fun(half, a) > 0) for a in alphas):
        failing.append("A")
    if not all(np.all(analytic.B_fun(half, a) > 0) for a in alphas):
        failing.append("B")
    for name, fn in (("f0", analytic.f0), ("f1", analytic.f1), ("f_wedge", analytic.f_wedge),
                     ("A1-", analytic.a1_minus), ("g3", analytic.g3), ("h3", analytic.h3)):
        if not np.all(fn(half) > 0):
            failing.append(name)
    return failing, not failing


def check_conjugate(rng):
    taus = []
    for _ in range(200):
        sigma = 10 ** rng.uniform(-2, 1.5)
        taus.append(conjugate_rescaled_time(sigma, _alpha_away(rng, 1e-3)))
    taus = np.array(taus)
    bracket = bool(np.all(taus > math.pi) and np.all(taus < TAU0))
    degenerate = max(abs(conjugate_rescaled_time(s, a) - math.pi)
                     for s in (0.1, 1.0, 5.0) for a in (0.0, math.pi))
    heis = max(abs(conjugate_time(Helix(a, r, 0.0, [1.0, 0.0])) - 2 * math.pi / r)
               for r in (0.5, 1.0, 3.0) for a in (0.0, 1.0))
    ok = bracket and degenerate < 1e-9 and heis < 1e-9
    return (float(taus.min()), float(taus.max()), degenerate, heis), ok


def check_roundtrip(rng):
    worst_end = 0.0
    worst_time = 0.0
    failures = 0
    for i in range(1000):
        n = int(rng.integers(2, 6))
        g = random_helix(rng, n, sigma_zero=(i % 20 == 0))
        t = 0.8 * cut_time(g)
        q = exp_point(g, t)
        try:
            r = synthesize(q)
        except Exception:
            failures += 1
            continue
        worst_time = max(worst_time, abs(r.distance - t))
        for sol in r.solutions:
            end = exp_point(sol.params, sol.time)
            worst_end = max(worst_end, float(np.max(np.abs(end.as_vector() - q.as_vector()))))
    ok = failures == 0 and worst_end < 1e-7 and worst_time < 1e-8
    return (worst_end, worst_time, failures), ok


BAND = 1e-6


def check_cut_consistency(rng):
    """in_cut_locus against the synthesis verdict on targets with x = 0 whose
    angle between l and y sweeps through the boundary angle.

    The synthesis verdict is the returned branch: a pair reached at tau = pi
    versus a unique geodesic with tau < pi.
    """
    disagreements = 0
    in_band = 0
    for _ in range(200):
        L = 10 ** rng.uniform(-1, 1)
        Y = 10 ** rng.uniform(-1, 1.5)
        p0 = phi0(L, Y)
        phi = p0 + rng.choice([-1.0, 1.0]) * 10 ** rng.uniform(-7, -0.5)
        phi = min(max(phi, 1e-3), math.pi - 1e-3)
        k, kp = _frame(rng, int(rng.integers(2, 5)))
        q = GroupPoint(0.0, L * k, Y * (math.cos(phi) * k + math.sin(phi) * kp))
        r = synthesize(q)
        at_pi = r.multiplicity is Multiplicity.MAXWELL_PAIR and abs(r.tau - math.pi) <= 1e-6
        before_pi = r.multiplicity is Multiplicity.UNIQUE and r.tau < math.pi
        if abs(phi - p0) <= BAND:
            in_band += 1
            continue
        cut = in_cut_locus(q)
        if (cut and not at_pi) or (not cut and not before_pi):
            disagreements += 1
    return (disagreements, in_band), disagreements == 0


def check_covering_loop(rng):
    worst = 0.0
    for t in (0.0, 0.25, 0.5, 0.75):
        r = reduced_exp(math.pi / 2, 1.0, 1.0, 2 * math.pi * t)
        s2 = math.sin(2 * math.pi * t) ** 2
        ref = np.array([2 * math.cos(2 * math.pi * t), math.sqrt(4 * s2 + math.pi ** 2),
                        math.sqrt(4 * s2 + math.pi ** 2 / 4),
                        -3 * math.pi * math.sin(2 * math.pi * t)])
        got = np.array([r.x, r.l_norm, r.y_norm, r.ldoty])
        worst = max(worst, float(np.max(np.abs(got - ref))))
    return worst, worst < 1e-10


def _fmt(v):
    if isinstance(v, tuple):
        return ", ".join(_fmt(a) for a in v)
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


# (number, name, function, detail label, time limit in seconds)
SUITES = [
    (1, "ODE oracle", check_oracle, "max |closed form - RK4|", 30.0),
    (2, "Heisenberg reduction", check_heisenberg, "max error, cut-time error", None),
    (3, "cut-locus parametrization", check_cut_parametrization, "max relative error", None),
    (4, "Maxwell pairs", check_maxwell, "endpoint invariant gap, least mid-time separation", None),
    (5, "Jacobian factorization", check_jacobians, "max relative FD error, signs ok", None),
    (6, "positivity", check_positivity, "non-positive functions", None),
    (7, "conjugate-time bracket", check_conjugate,
     "tau range, degenerate-alpha error, Heisenberg error", None),
    (8, "synthesis roundtrip", check_roundtrip, "endpoint error, time error, failures", 60.0),
    (9, "cut-locus consistency", check_cut_consistency, "disagreements, targets in band", None),
    (10, "covering loop", check_covering_loop, "max error", None),
]


def run_check(number: int, seed: int = 0) -> CheckResult:
    num, name, fn, label, limit = SUITES[number - 1]
    rng = np.random.default_rng([seed, num])
    start = time.perf_counter()
    value, ok = fn(rng)
    elapsed = time.perf_counter() - start
    detail = f"{label} = {_fmt(value)}"
    if limit is not None:
        ok = ok and elapsed < limit
        detail += f"; limit {limit:.0f}s"
    return CheckResult(num, name, bool(ok), detail, elapsed)


def run_all(seed: int = 0, progress: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    results = []
    for num, *_ in SUITES:
        r = run_check(num, seed)
        if progress is not None:
            progress(r)
        results.append(r)
    return results
