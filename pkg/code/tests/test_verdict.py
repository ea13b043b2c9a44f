import numpy as np
import pytest

from conftest import SUITE_GRID
from freq import FrequencyGrid, SampledResponse, evaluate_response
from miscc.errors import Ambiguous, HiddenModeRisk, NonProperRatio, PreconditionRhpPoles
from poly_rat import Polynomial, RationalFunction, RootSet
from verdict import (INDETERMINATE, MARGINAL, STABLE, UNSTABLE, SubsystemModel, assess_inverse,
                     assess_stability, characteristic_roots_oracle, impedance_sum_criterion,
                     interconnection_type, select_proper_ratio)

LAG3 = (Polynomial([1.0, 0.1]) * Polynomial([1.0, 0.1]) * Polynomial([1.0, 0.1])).coeffs


def _exact(id, num, den=(1.0,), kind='impedance'):
    return SubsystemModel(id, kind, exact=RationalFunction(list(num), list(den), id))


def _sampled(id, num, den, grid):
    rf = RationalFunction(list(num), list(den), id)
    resp = evaluate_response(rf, grid)
    return SubsystemModel(id, 'impedance', sampled=SampledResponse(resp.f, resp.values, id))


def test_orientation_by_relative_degree():
    a = _exact('R', [1.0])
    b = _exact('L', [0.0, 1e-3])
    o = select_proper_ratio(a, b)
    assert (o.numerator_id, o.denominator_id, o.basis) == ('R', 'L', 'relative_degree')


def test_orientation_by_magnitude():
    o = select_proper_ratio(_exact('b', [5.0]), _exact('a', [2.0]))
    assert (o.numerator_id, o.basis) == ('a', 'hf_magnitude')


def test_orientation_tie_is_ambiguous():
    with pytest.raises(Ambiguous):
        select_proper_ratio(_exact('a', [2.0]), _exact('b', [-2.0]))
    o = select_proper_ratio(_exact('a', [2.0]), _exact('b', [-2.0]), force='b')
    assert (o.numerator_id, o.basis) == ('b', 'user_forced')


def test_orientation_from_sampled_slopes():
    grid = FrequencyGrid(1.0, 1e4, 200)
    a = _sampled('R', [1.0], [1.0], grid)
    b = _sampled('L', [0.0, 1e-3], [1.0], grid)
    o = select_proper_ratio(a, b)
    assert (o.numerator_id, o.basis) == ('R', 'hf_slope')
    assert o.hf_slope_den_db_dec == pytest.approx(20.0, abs=0.5)


def test_subsystem_model_consistency():
    grid = FrequencyGrid(1.0, 1e3, 100)
    rf = RationalFunction([1.0], [1.0, 1.0])
    resp = evaluate_response(rf, grid)
    SubsystemModel('ok', exact=rf, sampled=SampledResponse(resp.f, resp.values))
    with pytest.raises(ValueError):
        SubsystemModel('bad', exact=rf, sampled=SampledResponse(resp.f, 2.0 * resp.values))


def test_trivial_stable_pair():
    report = assess_stability(_exact('a', [1.0]), _exact('b', [1.0, 1.0]))
    assert report.verdict == STABLE
    assert report.P_open_loop == 0
    assert report.encirclements.N == 0
    assert report.crossings == []
    assert report.cross_checks['characteristic_roots'] == STABLE
    assert report.cross_checks['winding_number'] == STABLE


def test_third_order_lag_unstable():
    report = assess_stability(_exact('Z1', [10.0], LAG3), _exact('Z2', [1.0]),
                              grid=FrequencyGrid(1e-2, 1e4, 400))
    assert report.verdict == UNSTABLE
    assert report.encirclements.N == 2
    assert report.P_open_loop == 0
    assert report.cross_checks['characteristic_roots'] == UNSTABLE


@pytest.mark.parametrize('gain,verdict,n', [(2.0, STABLE, -1), (0.5, UNSTABLE, 0)])
def test_unstable_open_loop(gain, verdict, n):
    report = assess_stability(_exact('Z1', [gain], [-1.0, 1.0]), _exact('Z2', [1.0]),
                              grid=FrequencyGrid(1e-3, 1e3, 400))
    assert report.P_open_loop == 1
    assert report.encirclements.N == n
    assert report.verdict == verdict
    assert report.cross_checks['characteristic_roots'] == verdict
    if verdict == UNSTABLE:
        assert any('anticlockwise' in note for note in report.evidence_notes)


def test_sampled_pair_without_oracles():
    grid = FrequencyGrid(1e-3, 1e5, 400)
    # three real poles two decades apart, -180 deg crossed near 160 Hz with |ratio| ~ 10
    den = Polynomial([1.0, 1.0]) * Polynomial([100.0, 1.0]) * Polynomial([1e4, 1.0])
    a = _sampled('Z1', [1e11], den.coeffs, grid)
    b = _sampled('Z2', [1.0], [1.0], grid)
    report = assess_stability(a, b)
    assert report.verdict == UNSTABLE
    assert report.encirclements.N == 2
    assert not report.cross_checks
    assert report.censuses[0].source == 'bode_heuristic'


def test_sampled_undetermined_census_is_indeterminate():
    grid = FrequencyGrid(1e-2, 1e4, 400)
    w0 = 2 * np.pi * 50.0
    num = Polynomial([w0 ** 2, -2 * 0.1 * w0, 1.0])
    den = Polynomial([w0, 1.0]) * Polynomial([w0, 1.0]) * Polynomial([1.0, 1e-3])
    a = _sampled('Z1', num.coeffs, den.coeffs, grid)
    b = _sampled('Z2', [1.0], [1.0], grid)
    report = assess_stability(a, b, force_orientation='Z1')
    assert report.verdict == INDETERMINATE


def test_undamped_pole_on_sweep_is_marginal():
    w0 = 2 * np.pi * 10.0
    a = _exact('Z1', [1.0], [w0 ** 2, 0.0, 1.0])
    report = assess_stability(a, _exact('Z2', [1.0]),
                              grid=FrequencyGrid(1.0, 100.0, 100, extra_points=[10.0]))
    assert report.verdict == MARGINAL


def test_inverse_view_agrees():
    a = _exact('Z1', [2.0], [1.0, 1.0])
    b = _exact('Z2', [1.0], [2.0, 1.0])
    forward = assess_stability(a, b)
    inverse = assess_inverse(a, b)
    assert forward.verdict == inverse.verdict == STABLE
    assert forward.cross_checks['inverse_nsc'] == STABLE


def test_dc_crossing_below_default_sweep_is_stable():
    # 2/(s - 1) against 1: ACC at w = 0 only, |ratio| < 1 over the whole 1 Hz - 100 kHz sweep
    report = assess_stability(_exact('Z1', [2.0], [-1.0, 1.0]), _exact('Z2', [1.0]))
    assert report.P_open_loop == 1
    assert [(c.at_zero, c.kind) for c in report.crossings] == [(True, 'ACC')]
    assert report.encirclements.N == -1
    assert report.verdict == STABLE
    assert report.cross_checks['winding_number'] == STABLE


def test_sampled_dc_crossing_is_stable():
    grid = FrequencyGrid(1e-2, 1e3, 400)
    report = assess_stability(_sampled('Z1', [2.0], [-1.0, 1.0], grid), _sampled('Z2', [1.0], [1.0], grid))
    assert report.P_open_loop == 1
    assert report.encirclements.N == -1
    assert report.verdict == STABLE


def test_sampled_dc_phase_unresolved_is_indeterminate():
    f = FrequencyGrid(1e-2, 10.0, 200).frequencies()
    a = SubsystemModel('Z1', 'impedance',
                       sampled=SampledResponse(f, 10.0 * np.exp(1j * np.deg2rad(140.0 + 50.0 * f)), 'Z1'))
    b = SubsystemModel('Z2', 'impedance', sampled=SampledResponse(f, np.ones_like(f), 'Z2'))
    report = assess_stability(a, b, force_orientation='Z1')
    assert report.verdict == INDETERMINATE
    assert any('w = 0' in note for note in report.evidence_notes)


def test_interconnection_type():
    stable = _exact('Zs', [1.0], [1.0, 1.0])
    y_type = _exact('Zy', [1.0, 1.0], [-1.0, 1.0])
    assert interconnection_type(stable, stable) == 'Z+Z'
    assert interconnection_type(stable, y_type) == 'Z+Y'


def test_impedance_sum_criterion():
    a = RationalFunction([1.0], [1.0, 1.0], 'a')
    b = RationalFunction([1.0], [2.0, 1.0], 'b')
    result = impedance_sum_criterion(a, b)
    assert result.verdict == STABLE
    assert result.rhp_zero_count == 0
    assert result.winding == 0

    c = RationalFunction([-3.0, 1.0], [2.0, 1.0], 'c')  # (s - 3)/(s + 2)
    result = impedance_sum_criterion(a, c)
    assert result.verdict == UNSTABLE
    assert result.rhp_zero_count == result.winding == 1

    with pytest.raises(PreconditionRhpPoles):
        impedance_sum_criterion(RationalFunction([1.0], [-1.0, 1.0]), b)


def test_characteristic_roots_oracle():
    got = characteristic_roots_oracle(RationalFunction([2.0], [-1.0, 1.0]), RationalFunction([1.0]))
    assert got.verdict == STABLE
    assert isinstance(got.roots, RootSet)
    np.testing.assert_allclose(got.roots.roots, [-1.0])

    got = characteristic_roots_oracle(RationalFunction([2.0]), RationalFunction([3.0]))
    assert isinstance(got.roots, RootSet) and len(got.roots) == 0

    got = characteristic_roots_oracle(RationalFunction([1.0], [0.0, 1.0]),
                                      RationalFunction([0.0, 1.0]))
    assert got.verdict == MARGINAL


def test_characteristic_roots_hidden_mode():
    shared = [-1.0, 1.0]  # s - 1
    with pytest.raises(HiddenModeRisk):
        characteristic_roots_oracle(RationalFunction([1.0], shared), RationalFunction([2.0], shared))
    got = characteristic_roots_oracle(RationalFunction([1.0], [1.0, 1.0]),
                                      RationalFunction([2.0], [1.0, 1.0]))
    assert got.notes


def test_random_pairs_rule_matches_oracles(random_pairs):
    marginal = 0
    for a, b, report in random_pairs:
        oracle = characteristic_roots_oracle(a.exact, b.exact).verdict
        if MARGINAL in (report.verdict, oracle):
            marginal += 1
            continue
        assert report.verdict == oracle, report.evidence_notes
        if report.verdict == STABLE:
            assert report.encirclements.N == -report.P_open_loop
    assert marginal < 0.05 * len(random_pairs)


def test_random_pairs_inverse_view_agrees(random_pairs):
    checked = 0
    for a, b, report in random_pairs:
        if report.verdict == MARGINAL:
            continue
        num_m, den_m = (a, b) if report.orientation.numerator_id == a.id else (b, a)
        try:
            inverse = assess_inverse(num_m, den_m, grid=SUITE_GRID)
        except NonProperRatio:
            continue
        if inverse.verdict == MARGINAL:
            continue
        assert inverse.verdict == report.verdict, report.evidence_notes
        checked += 1
    assert checked >= 20


def test_crossing_next_to_ambiguous_unwrap():
    from encircle import Crossing
    from freq import BodeSeries
    from verdict import _near_ambiguous_unwrap
    f = np.logspace(0, 2, 21)
    b = BodeSeries(f, np.zeros(21), np.zeros(21), 'Z', ambiguous_f=[f[10]])
    near = Crossing(0.5 * (f[10] + f[11]), -1.0, -1, False, 0.0)
    far = Crossing(f[3], -1.0, -1, False, 0.0)
    assert _near_ambiguous_unwrap([near, far], b) == [near]
    b_exact = BodeSeries(f, np.zeros(21), np.zeros(21), 'Z', exact=RationalFunction([1.0]),
                         ambiguous_f=[f[10]])
    assert _near_ambiguous_unwrap([near], b_exact) == []
