import numpy as np
import pytest

from miscc.config import cfg
from model import (GridParams, InverterParams, LoadParams, ScenarioSpec, aggregate_parallel,
                   build_component_admittance, build_scenario, grid_admittance,
                   inverter_admittance, lcl_admittances, load_admittance, pr_controller)
from poly_rat import pade_delay
from rhp_id import census
from verdict import STABLE, UNSTABLE, assess_stability, characteristic_roots_oracle

S = 2j * np.pi * np.array([7.0, 50.0, 613.0, 2400.0])


def _inverter(**overrides):
    return InverterParams.from_cfg(cfg.SCENARIO.INVERTER, overrides)


def test_lcl_admittances_match_impedance_form():
    p = _inverter()
    y_o, y_m = lcl_admittances(p)
    z1, z2, zc = S * p.L1, S * p.L2, 1.0 / (S * p.Cf)
    den = zc * z1 + z1 * z2 + zc * z2
    np.testing.assert_allclose(y_o(S), (z1 + zc) / den, rtol=1e-10)
    np.testing.assert_allclose(y_m(S), zc / den, rtol=1e-10)


def test_pr_controller_gain_at_fundamental():
    p = _inverter()
    g = pr_controller(p)
    assert g(1j * p.omega1) == pytest.approx(p.Kp + p.Kr, rel=1e-9)
    assert g.label == 'G_c'


def test_inverter_admittance_closes_the_loop():
    p = _inverter()
    y_io = inverter_admittance(p)
    y_o, y_m = lcl_admittances(p)
    expected = y_o(S) / (1.0 + pr_controller(p)(S) * pade_delay(p.t_delay)(S) * y_m(S))
    np.testing.assert_allclose(y_io(S), expected, rtol=1e-8)
    assert (y_io.num.degree, y_io.den.degree) == (7, 8)
    assert p.t_delay == pytest.approx(1.5e-4)


def test_grid_and_load_admittances():
    g = GridParams(1e-3, 2e-6)
    l = LoadParams(10.0, 1e-3)
    np.testing.assert_allclose(grid_admittance(g)(S), S * 2e-6 + 1.0 / (S * 1e-3), rtol=1e-12)
    np.testing.assert_allclose(load_admittance(l)(S), 1.0 / (10.0 + S * 1e-3), rtol=1e-12)
    assert build_component_admittance('load', l).label == 'Y_d'
    with pytest.raises(ValueError):
        build_component_admittance('motor', l)


def test_parameter_validation():
    with pytest.raises(ValueError):
        _inverter(L1=0.0)
    with pytest.raises(ValueError):
        _inverter(KP=-1.0)
    with pytest.raises(ValueError):
        LoadParams(0.0, 1e-3)
    with pytest.raises(AssertionError):
        ScenarioSpec(3, None, None, None, None)


def test_second_inverter_overrides():
    cfg.SCENARIO.INVERTER2.KP = 4.0
    spec = ScenarioSpec.from_cfg(1)
    assert spec.inverter1.Kp == 8.0
    assert spec.inverter2.Kp == 4.0
    assert spec.inverter2.L1 == spec.inverter1.L1


def test_aggregate_parallel_is_a_sum():
    a = load_admittance(LoadParams(10.0, 1e-3))
    b = grid_admittance(GridParams(1e-3, 2e-6))
    total = aggregate_parallel([a, b], 'Y')
    np.testing.assert_allclose(total(S), a(S) + b(S), rtol=1e-12)
    assert total.label == 'Y'


def test_scenario_one_grid_side_has_rhp_zeros():
    models = build_scenario(ScenarioSpec.from_cfg(1))
    assert census(models['Y_to2'].exact).rhp_zeros == 4
    assert census(models['Y_to2'].exact).rhp_poles == 0
    assert census(models['Y_to1'].exact).rhp_poles == 0


def test_scenario_one_is_unstable():
    models = build_scenario(ScenarioSpec.from_cfg(1))
    report = assess_stability(models['Y_to1'], models['Y_to2'])
    assert report.orientation.numerator_id == 'Y_to1'
    assert report.P_open_loop == 4
    assert report.encirclements.N == 0
    assert report.verdict == UNSTABLE
    roots = characteristic_roots_oracle(models['Y_to1'].exact, models['Y_to2'].exact)
    assert roots.verdict == UNSTABLE
    assert roots.rhp >= 2


def test_scenario_two_is_stable():
    models = build_scenario(ScenarioSpec.from_cfg(2))
    report = assess_stability(models['Y_to1'], models['Y_to2'])
    assert report.P_open_loop == 4
    enc = report.encirclements
    assert (enc.n_acc, enc.N_ACC, enc.N) == (2, 4, -4)
    assert report.verdict == STABLE
    assert characteristic_roots_oracle(models['Y_to1'].exact, models['Y_to2'].exact).verdict == STABLE
