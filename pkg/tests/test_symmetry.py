import math

import numpy as np
import pytest

from pathgroup import (GroupPoint, InvariantPoint, NotSpecialOrthogonal, exp_point, invariants_of,
                       reduced_exp, so_n_act)
from pathgroup.geodesics import rescaled_time

from _util import random_helix, random_point, random_rotation

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def test_so_n_act_examples():
    p = GroupPoint(1, E1, E1)
    assert so_n_act(np.eye(2), p) == p
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert so_n_act(R, p).allclose(GroupPoint(1, E2, E2), atol=1e-15)


def test_so_n_act_rejects_reflections_and_non_orthogonal():
    p = GroupPoint(1, E1, E2)
    with pytest.raises(NotSpecialOrthogonal):
        so_n_act(np.diag([1.0, -1.0]), p)
    with pytest.raises(NotSpecialOrthogonal):
        so_n_act(np.array([[1.0, 0.1], [0.0, 1.0]]), p)


def test_invariants_examples():
    assert invariants_of(GroupPoint.identity(2)).as_array().tolist() == [0, 0, 0, 0, 0]
    assert invariants_of(GroupPoint(0, E1, E2)).as_array()[:4].tolist() == [0, 1, 0, 1]
    assert invariants_of(GroupPoint(0, 2 * E1, 3 * E1)).as_array()[:4].tolist() == [0, 4, 6, 0]


def test_invariants_are_rotation_invariant():
    rng = np.random.default_rng(0)
    for n in (2, 3, 6):
        for _ in range(10):
            p = random_point(rng, n)
            R = random_rotation(rng, n)
            np.testing.assert_allclose(invariants_of(so_n_act(R, p)).as_array(),
                                       invariants_of(p).as_array(), rtol=1e-12, atol=1e-12)


def test_rotation_is_an_automorphism():
    rng = np.random.default_rng(1)
    from pathgroup import multiply
    p, q = random_point(rng, 4), random_point(rng, 4)
    R = random_rotation(rng, 4)
    assert so_n_act(R, multiply(p, q)).allclose(multiply(so_n_act(R, p), so_n_act(R, q)), atol=1e-12)


def test_rotation_commutes_with_exp():
    from pathgroup import Helix
    rng = np.random.default_rng(2)
    g = random_helix(rng, 4)
    R = random_rotation(rng, 4)
    gr = Helix(g.alpha, g.rho, g.sigma, R @ g.k, R @ g.kperp)
    assert exp_point(gr, 1.3).allclose(so_n_act(R, exp_point(g, 1.3)), atol=1e-12)


def test_reduced_exp_matches_invariants_of_exp():
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = random_helix(rng, 3)
        t = rng.uniform(0.05, 1.5) * 2 * math.pi * math.sqrt(1 + g.sigma ** 2) / g.rho
        r = reduced_exp(rescaled_time(g, t), g.rho, g.sigma, g.alpha)
        np.testing.assert_allclose(r.as_array(), invariants_of(exp_point(g, t)).as_array(),
                                   rtol=1e-10, atol=1e-10)


def test_reduced_exp_at_cut_example():
    r = reduced_exp(math.pi, 1.0, 1.0, math.pi / 2)
    assert r.x == pytest.approx(0, abs=1e-14)
    assert r.l_norm == pytest.approx(2 * math.pi)
    assert r.lwedge == pytest.approx(2 * math.pi ** 2)
    assert r.ldoty == pytest.approx(0, abs=1e-13)
    assert r.y_norm == pytest.approx(math.pi)


def test_reduced_exp_loop_example():
    r = reduced_exp(math.pi / 2, 1.0, 1.0, 2 * math.pi * 0.25)
    assert r.x == pytest.approx(0, abs=1e-15)
    assert r.ldoty == pytest.approx(-3 * math.pi, abs=1e-14)


def test_reduced_exp_heisenberg_limit():
    rho, alpha, tau = 1.4, 0.9, 1.1
    r = reduced_exp(tau, rho, 0.0, alpha)
    t = 2 * tau / rho
    assert r.x == pytest.approx((math.cos(alpha) - math.cos(rho * t + alpha)) / rho, abs=1e-15)
    assert r.l_norm == pytest.approx(abs(math.sin(rho * t + alpha) - math.sin(alpha)) / rho)
    assert r.y_norm == pytest.approx((rho * t - math.sin(rho * t)) / (2 * rho ** 2))
    assert r.lwedge == 0.0


def test_representative_has_the_invariants():
    rng = np.random.default_rng(4)
    p = random_point(rng, 3)
    inv = invariants_of(p)
    np.testing.assert_allclose(invariants_of(inv.representative(3)).as_array(), inv.as_array(),
                               rtol=1e-12)
    assert inv.phi == pytest.approx(math.acos(inv.ldoty / (inv.l_norm * inv.y_norm)))
    back = InvariantPoint.from_wedge(inv.x, inv.l2, inv.ldoty, inv.lwedge)
    assert back.y2 == pytest.approx(inv.y2)


def test_high_precision_invariants_match_reduced_exp():
    # the finite-difference Jacobian oracle differentiates this transcription
    from pathgroup.checks import _invariants_mp

    rng = np.random.default_rng(11)
    for _ in range(200):
        tau = rng.uniform(1e-3, 2 * np.pi)
        rho = rng.uniform(0.3, 3.0)
        sigma = rng.uniform(0.0, 3.0)
        alpha = rng.uniform(0, 2 * np.pi)
        r = reduced_exp(tau, rho, sigma, alpha)
        ref = [float(v) for v in _invariants_mp(tau, 1 / rho, sigma, alpha)]
        got = [r.x, r.l2, r.ldoty, r.y2]
        scale = [2 / rho, 4 / rho ** 2 * (1 + tau * tau * sigma * sigma),
                 2 / rho ** 3 * (1 + tau) ** 3 * (1 + sigma * sigma),
                 ((1 + tau) ** 2 * (1 + sigma)) ** 2 / rho ** 4]
        for g, e, sc in zip(got, ref, scale):
            assert abs(g - e) <= 1e-13 * sc
