"""Smoke tests for the python bindings: a few closed-form constants checked
against independent references (math / scipy), plus a coarse end-to-end run."""

import math

import numpy as np
import pytest

import chemfront as cf


def test_constants():
    assert cf.kpp_speed(1.0) == 2.0
    assert cf.kpp_speed(2.0) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-14)
    assert cf.reduced_growth_rate(0.5, 1.0) == pytest.approx(0.6875, rel=1e-14)
    assert cf.eigen_box_halfwidth(0.5, 1.0, 1) == pytest.approx(
        2.0 * math.pi / math.sqrt(0.5), rel=1e-12
    )
    abar = cf.reduced_growth_rate(0.5, 1.0)
    assert cf.principal_eigenvalue(0.0, abar, 0.5, 1.0, 1) == pytest.approx(0.65625)
    # floor attained at the endpoint speed
    cmax = 2.0 - 0.5
    assert cf.principal_eigenvalue(cmax, abar, 0.5, 1.0, 1) == pytest.approx(
        cf.eigenvalue_floor(0.5, 1.0), abs=1e-12
    )
    assert cf.persistence_time(0.1, 10.0, 1.0) == pytest.approx(math.log(100.0))
    assert cf.envelope_speed(0.5, 1.0) == 2.5
    assert cf.envelope_v_amplitude(1.0, 1.0, 1.0, 1.0) == 0.5
    assert cf.chemical_response_bound(1.0, 1.0, 1.0, 1) == pytest.approx(3.0)


def test_gaussian_tail_against_erfc():
    scipy_special = pytest.importorskip("scipy.special")
    for r in (0.0, 0.5, 1.3, 2.0):
        want = math.sqrt(math.pi) * scipy_special.erfc(r)
        assert cf.gaussian_tail(1, r, 0) == pytest.approx(want, rel=1e-8)
        assert cf.gaussian_tail(1, r, 1) == pytest.approx(math.exp(-r * r), rel=1e-8)
        assert cf.gaussian_tail(2, r, 0) == pytest.approx(math.pi * math.exp(-r * r), rel=1e-8)


def test_params_and_steady_state():
    p = cf.Params(chi=1.0, a=1.0, b=0.6, lam=1.0, mu=1.0, dim=2)
    assert cf.damping_condition(p)  # 0.5 < 0.6
    p.b = 0.5
    assert not cf.damping_condition(p)  # strict inequality
    u_star, v_star = cf.steady_state(cf.Params(a=1.0, b=2.0))
    assert (u_star, v_star) == (0.5, 0.5)
    with pytest.raises(ValueError):
        cf.Params(a=-1.0)


def test_field_numpy_roundtrip():
    g = cf.Grid.line(0.0, 1.0, 16)
    f = cf.Field(g, 0.0)
    data = np.linspace(0.0, 1.0, 16)
    f.set(data)
    assert np.array_equal(f.numpy(), data)
    assert f.max() == 1.0


def test_front_position_on_a_ramp():
    g = cf.Grid.line(0.0, 1.0, 101)
    f = cf.Field(g, 0.0)
    f.set(np.linspace(1.0, 0.0, 101))
    assert cf.front_position(f, 0.25) == pytest.approx(0.75, abs=1e-12)


def test_coarse_fisher_run_speed():
    p = cf.Params(chi=0.0, a=1.0, b=1.0)
    g = cf.Grid.line(-150.0, 150.0, 1501)
    spec = cf.InitialDataSpec()
    spec.radius = 8.0
    res = cf.simulate(p, cf.SchemeConfig(), spec, g, horizon=50.0, thresholds=[0.5])
    trace = next(t for t in res["traces"] if t.direction == "+e0")
    fit = cf.fit_speed(trace, 0.5)
    assert fit.speed == pytest.approx(2.0, rel=0.10)
    # mass grows as the population colonizes the box
    assert res["snapshots"][-1]["u_mass"] > res["snapshots"][0]["u_mass"]


def test_chemotaxis_speed_matches_baseline():
    g = cf.Grid.line(-150.0, 150.0, 1501)
    spec = cf.InitialDataSpec()
    spec.radius = 8.0
    speeds = []
    for chi in (0.0, 0.4):
        p = cf.Params(chi=chi, a=1.0, b=1.0)
        assert cf.damping_condition(p)
        res = cf.simulate(p, cf.SchemeConfig(), spec, g, horizon=50.0, thresholds=[0.5])
        trace = next(t for t in res["traces"] if t.direction == "+e0")
        speeds.append(cf.fit_speed(trace, 0.5).speed)
    assert abs(speeds[0] - speeds[1]) / 2.0 < 0.02
