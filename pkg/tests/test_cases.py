"""Benchmark definitions, the exact shock solution and the error metric."""

import numpy as np
import pytest

from ksctb.cases import (
    QUINTIC_GRE_CASE_A,
    REFERENCE_GRE_CASE_A,
    ShockParams,
    case_a,
    case_b,
    case_c,
    exact_shock,
    gre,
)

# tanh -> +/-1 limits of the case (a) shock profile:
# 5 +/- (15/19) sqrt(11/19) * 2 = 5 +/- 1.2013988056...
PLATEAU_RIGHT = 6.201398806
PLATEAU_LEFT = 3.798601194


def test_shock_centre_value():
    p = case_a().exact
    for t in (0.0, 0.7, 2.5):
        assert exact_shock(p, p.x0 + p.b * t, t) == pytest.approx(5.0, rel=1e-14)


def test_shock_limits():
    p = case_a().exact
    assert exact_shock(p, 1e4, 0.0) == pytest.approx(PLATEAU_RIGHT, abs=1e-8)
    assert exact_shock(p, -1e4, 0.0) == pytest.approx(PLATEAU_LEFT, abs=1e-8)
    # limits follow from the parameter combination directly
    amp = (15.0 / 19.0) * p.d * (p.e + p.f)
    assert p.b + amp == pytest.approx(PLATEAU_RIGHT, abs=1e-8)
    assert p.b - amp == pytest.approx(PLATEAU_LEFT, abs=1e-8)


def test_shock_translation_property():
    p = case_a().exact
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = rng.uniform(-30, 30)
        t = rng.uniform(0, 4)
        s = rng.uniform(-2, 2)
        assert exact_shock(p, x + p.b * s, t + s) == pytest.approx(
            exact_shock(p, x, t), rel=1e-12
        )


def test_shock_satisfies_pde():
    # substitute into u_t + u u_x + u_xx + u_xxxx with mpmath derivatives
    mp = pytest.importorskip("mpmath")
    p = case_a().exact
    b, k, x0 = mp.mpf(p.b), mp.mpf(p.k), mp.mpf(p.x0)
    d, e, f = mp.mpf(p.d), mp.mpf(p.e), mp.mpf(p.f)

    def u(x, t):
        z = mp.tanh(k * (x - b * t - x0))
        return b + mp.mpf(15) / 19 * d * (e * z + f * z**3)

    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        x = mp.mpf(float(rng.uniform(-20, 5)))
        t = mp.mpf(float(rng.uniform(0, 4)))
        u_t = mp.diff(lambda tt: u(x, tt), t)
        u_x = mp.diff(lambda xx: u(xx, t), x)
        u_xx = mp.diff(lambda xx: u(xx, t), x, 2)
        u_xxxx = mp.diff(lambda xx: u(xx, t), x, 4)
        res = abs(u_t + u(x, t) * u_x + u_xx + u_xxxx)
        worst = max(worst, float(res))
    assert worst <= 1e-5


def test_shock_params_validation():
    with pytest.raises(ValueError):
        ShockParams(b=1.0, k=0.0, x0=0.0, d=1.0, e=1.0, f=1.0)


def test_gre_examples_and_properties():
    u = np.array([1.0, 2.0, 1.0])
    assert gre(u, u) == 0.0
    assert gre(2 * u, u) == pytest.approx(1.0, rel=1e-15)
    assert gre(np.array([1.0, 2.4, 1.0]), u) == pytest.approx(0.1, rel=1e-14)
    assert gre(-np.array([1.0, 2.4, 1.0]), -u) == pytest.approx(0.1, rel=1e-14)
    assert gre(np.array([0.9, 2.2, 1.3]), u) > 0.0
    with pytest.raises(ZeroDivisionError):
        gre(u, np.zeros(3))
    with pytest.raises(ValueError):
        gre(u, np.zeros(4))


def test_case_a_definition():
    case = case_a()
    problem = case.problem
    assert problem.grid.h == pytest.approx(0.4, rel=1e-15)
    assert problem.grid.n_intervals == 150
    assert problem.dt == 0.01
    assert problem.alpha == 1.0 and problem.theta == 1.0
    u0 = problem.initial_u(np.array([-12.0, 30.0, -30.0]))
    assert u0[0] == pytest.approx(5.0, rel=1e-14)  # shock centred at x0
    assert u0[1] == pytest.approx(PLATEAU_RIGHT, abs=1e-6)  # tanh saturated
    # boundary records carry the endpoint values of the initial profile;
    # the left tail is ~3e-5 short of full saturation at t = 0
    assert problem.boundary.g0 == pytest.approx(float(u0[2]), rel=1e-15)
    assert problem.boundary.g0 == pytest.approx(PLATEAU_LEFT, abs=1e-4)
    assert problem.boundary.g1 == pytest.approx(PLATEAU_RIGHT, abs=1e-6)
    assert case.reference_gre == REFERENCE_GRE_CASE_A
    assert set(QUINTIC_GRE_CASE_A) == {1.0, 2.0, 3.0, 4.0}
    assert case.snapshot_times == (1.0, 2.0, 3.0, 4.0)
    assert case.t_end == 4.0


def test_case_b_definition():
    case = case_b(theta=0.02)
    problem = case.problem
    assert problem.theta == 0.02
    assert problem.grid.n_intervals == 512
    assert problem.grid.h == pytest.approx(4.0 * np.pi / 512, rel=1e-15)
    assert problem.dt == 0.001
    x = np.linspace(0.0, 4.0 * np.pi, 257)
    u0 = problem.initial_u(x)
    # product form collapses to sin(x)/2
    np.testing.assert_allclose(u0, 0.5 * np.sin(x), rtol=0, atol=1e-15)
    assert problem.initial_u(np.array([0.0]))[0] == pytest.approx(0.0, abs=1e-15)
    assert abs(problem.initial_u(np.array([4.0 * np.pi]))[0]) < 1e-15
    assert problem.initial_u(np.array([np.pi / 2]))[0] == pytest.approx(0.5, rel=1e-14)
    v0 = problem.initial_v(x)
    np.testing.assert_allclose(v0, -u0, rtol=0, atol=1e-15)
    with pytest.raises(ValueError):
        case_b(theta=0.0)
    with pytest.raises(ValueError):
        case_b(theta=-0.01)


def test_case_c_definition():
    case = case_c()
    problem = case.problem
    assert problem.grid.n_intervals == 120
    assert problem.grid.h == pytest.approx(0.5, rel=1e-15)
    assert problem.dt == 0.001
    assert problem.alpha == 1.0 and problem.theta == 1.0
    u0 = problem.initial_u(np.array([0.0, -30.0, 30.0]))
    assert u0[0] == -1.0
    assert abs(u0[1]) <= 1e-300 and abs(u0[2]) <= 1e-300
    assert problem.boundary.g0 == 0.0 and problem.boundary.g1 == 0.0
    v0 = problem.initial_v(np.array([0.0]))
    assert v0[0] == pytest.approx(2.0, rel=1e-14)  # (2 - 4 x^2) e^{-x^2} at 0
