import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathgroup import (TAU0, GroupPoint, Helix, Line, NotInCutLocus, conjugate_time, cut_info,
                       cut_time, cut_time_at_point, exp_point, in_cut_locus, phi0)
from pathgroup.geodesics import rescaled_time
from pathgroup.optimality import (A_fun, B_fun, Multiplicity, conjugate_rescaled_time, f_det,
                                  jacobian_J2, jacobian_J3, jacobian_J4)
from pathgroup.symmetry import reduced_exp

from _util import random_helix

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def _fd_jacobian(F, z, rel=1e-4):
    z = np.asarray(z, dtype=float)
    cols = []
    for j in range(z.size):
        h = rel * max(1.0, abs(z[j]))
        e = np.zeros(z.size)
        e[j] = h
        cols.append((-F(z + 2 * e) + 8 * F(z + e) - 8 * F(z - e) + F(z - 2 * e)) / (12 * h))
    return np.column_stack(cols)


def _inv4(v):
    r = reduced_exp(v[0], 1.0 / v[1], v[2], v[3])
    return np.array([r.x, r.l2, r.ldoty, r.y2])


def test_tau0_is_the_first_fixed_point_of_tan():
    assert math.pi < TAU0 < 1.5 * math.pi
    assert math.tan(TAU0) == pytest.approx(TAU0, rel=1e-12)


def test_cut_time_examples():
    assert cut_time(Helix(0, 1, 0, E1)) == pytest.approx(2 * math.pi)
    assert cut_time(Helix(0, 2, math.sqrt(3), E1, E2)) == pytest.approx(2 * math.pi)
    assert cut_time(Line(1.0, [0.0, 0.0])) == math.inf
    rng = np.random.default_rng(0)
    for _ in range(10):
        g = random_helix(rng)
        assert rescaled_time(g, cut_time(g)) == pytest.approx(math.pi, rel=1e-15)


def test_cut_info():
    assert cut_info(Helix(0.4, 1, 0, E1)).multiplicity is Multiplicity.INFINITE
    info = cut_info(Helix(0.4, 1, 1, E1, E2))
    assert info.multiplicity is Multiplicity.TWO and not info.is_conjugate_at_cut
    assert cut_info(Helix(math.pi, 1, 1, E1, E2)).is_conjugate_at_cut


def test_cut_time_at_point_examples():
    assert cut_time_at_point(GroupPoint(0, [0, 0], [math.pi, 0])) == pytest.approx(2 * math.pi)
    L, Y = np.array([0.3, 0.0]), np.array([0.0, 2.0])
    assert cut_time_at_point(GroupPoint(0, L, Y)) == pytest.approx(math.sqrt(4 * math.pi * 2 + 0.09))
    with pytest.raises(NotInCutLocus):
        cut_time_at_point(GroupPoint(1, E1, E2))


def test_cut_time_at_generated_cut_points():
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = random_helix(rng, 3, sigma=rng.choice([0.0, rng.uniform(0.05, 3)]))
        q = exp_point(g, cut_time(g))
        assert in_cut_locus(q)
        assert cut_time_at_point(q) == pytest.approx(cut_time(g), rel=1e-9)


def test_in_cut_locus_examples():
    assert in_cut_locus(GroupPoint(0, [0, 0], [0, 1.5]))
    assert not in_cut_locus(GroupPoint(0.1, [0, 0], [0, 1.5]))
    assert in_cut_locus(GroupPoint(0, E1, E2))
    tiny = 1e-3
    assert not in_cut_locus(GroupPoint(0, E1, [math.cos(tiny), math.sin(tiny)]))
    assert not in_cut_locus(GroupPoint.identity(2))
    assert not in_cut_locus(GroupPoint(0, E1, 2 * E1))


def test_phi0_examples():
    assert phi0(1e-9, 1.0) == pytest.approx(math.pi / 2)
    assert phi0(math.sqrt(math.pi), 1.0) == pytest.approx(math.asin((math.sqrt(5) - 1) / 2))
    assert phi0(math.sqrt(math.pi), 1.0) == pytest.approx(0.66624, abs=1e-5)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 10), st.floats(0.05, 30))
def test_phi0_is_the_boundary(L, Y):
    p = phi0(L, Y)
    ldoty = L * Y * math.cos(p)
    lwedge = L * Y * math.sin(p)
    assert math.pi * ldoty ** 2 == pytest.approx(L ** 3 * lwedge, rel=1e-9)


def test_f_examples():
    assert f_det(0.0, 1.0) == 0.0
    for a in np.linspace(0, 2 * math.pi, 7):
        assert f_det(math.pi, a) == pytest.approx(math.pi ** 2, rel=1e-14)


def test_A_B_examples():
    assert B_fun(math.pi, 0.3) == pytest.approx(0, abs=1e-14)
    assert A_fun(math.pi, 0.0) == pytest.approx(0, abs=1e-12)
    for a in (0.3, 1.0, 2.5):
        assert A_fun(math.pi, a) == pytest.approx(math.pi ** 4 * math.sin(a) ** 2, rel=1e-12)


def test_J4_vanishes_at_degenerate_cut():
    assert jacobian_J4(math.pi, 1.0, 1.0, 0.0) == pytest.approx(0, abs=1e-10)


def test_J4_against_finite_differences():
    rng = np.random.default_rng(2)
    for _ in range(50):
        tau, rho = rng.uniform(0.1, 3.0), rng.uniform(0.5, 2)
        sigma, alpha = rng.uniform(0.1, 2), rng.uniform(0, 2 * math.pi)
        det = np.linalg.det(_fd_jacobian(_inv4, [tau, 1 / rho, sigma, alpha]))
        assert det == pytest.approx(jacobian_J4(tau, rho, sigma, alpha), rel=1e-6)


def test_J3_against_finite_differences():
    rng = np.random.default_rng(3)
    for _ in range(50):
        tau, rho = rng.uniform(0.1, 3.0), rng.uniform(0.5, 2)
        sigma, alpha = rng.uniform(0.1, 2), rng.uniform(0, 2 * math.pi)

        def F(v):
            return _inv4([tau, v[0], v[1], v[2]])[:3]

        det = np.linalg.det(_fd_jacobian(F, [1 / rho, sigma, alpha]))
        assert det == pytest.approx(jacobian_J3(tau, rho, sigma, alpha), rel=1e-6)


def test_J2_against_finite_differences():
    rng = np.random.default_rng(4)
    for _ in range(50):
        tau, rho, sigma = rng.uniform(0.1, 3.0), rng.uniform(0.5, 2), rng.uniform(0.1, 2)

        def F(v):
            r = reduced_exp(tau, v[0], v[1], -tau)  # x = 0 with cos(tau + alpha) = 1
            return np.array([r.l2, r.ldoty])

        det = np.linalg.det(_fd_jacobian(F, [rho, sigma]))
        assert det == pytest.approx(jacobian_J2(tau, rho, sigma), rel=1e-6)


def test_conjugate_time_examples():
    assert conjugate_time(Helix(0.5, 1, 0, E1)) == pytest.approx(2 * math.pi)
    g = Helix(0.0, 1, 1, E1, E2)
    assert conjugate_time(g) == pytest.approx(cut_time(g)) == pytest.approx(2 * math.pi * math.sqrt(2))
    tau = conjugate_rescaled_time(1.0, math.pi / 2)
    assert math.pi < tau < TAU0
    assert conjugate_time(Line(1.0, [0.0])) == math.inf


def test_conjugate_time_is_where_the_jacobian_degenerates():
    rng = np.random.default_rng(5)
    for _ in range(20):
        sigma, alpha = rng.uniform(0.1, 3), rng.uniform(0.2, math.pi - 0.2)
        tau = conjugate_rescaled_time(sigma, alpha)
        eps = 1e-3
        before = np.linalg.det(_fd_jacobian(_inv4, [tau - eps, 1.0, sigma, alpha]))
        after = np.linalg.det(_fd_jacobian(_inv4, [tau + eps, 1.0, sigma, alpha]))
        assert before > 0 > after
        # and no earlier sign change after the cut time
        for t in np.linspace(math.pi + 1e-3, tau - 2 * eps, 10):
            assert np.linalg.det(_fd_jacobian(_inv4, [t, 1.0, sigma, alpha])) > 0


def test_conjugate_after_cut():
    rng = np.random.default_rng(6)
    for _ in range(50):
        g = random_helix(rng)
        assert conjugate_time(g) >= cut_time(g) * (1 - 1e-15)
