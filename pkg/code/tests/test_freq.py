import numpy as np
import pytest

from conftest import random_factors
from freq import (FrequencyGrid, SampledResponse, check_same_grid, evaluate_response,
                  phase_derivative, phase_jumps, phase_slope, unwrap_phase, wrap_phase)
from miscc.errors import GridMismatch, PoleOnGrid, ValueNearZero
from poly_rat import RationalFunction, pade_delay


def test_grid_is_log_spaced_with_extras():
    grid = FrequencyGrid(1.0, 1e3, 100, extra_points=[50.0, 5e3])
    f = grid.frequencies()
    assert f[0] == 1.0 and f[-1] == 1e3
    assert 50.0 in f
    assert 5e3 not in f
    assert len(f) == 302
    assert np.all(np.diff(f) > 0)


def test_grid_defaults_from_cfg():
    from miscc.config import cfg
    cfg.FREQ.POINTS_PER_DECADE = 10
    grid = FrequencyGrid()
    assert grid.points_per_decade == 10
    assert grid.f_min == cfg.FREQ.F_MIN


def test_grid_rejects_bad_span():
    with pytest.raises(AssertionError):
        FrequencyGrid(10.0, 1.0)


@pytest.mark.parametrize('raw,wrapped', [
    (180.0, 180.0),
    (-180.0, 180.0),
    (190.0, -170.0),
    (540.0, 180.0),
    (-90.0, -90.0),
])
def test_wrap_phase(raw, wrapped):
    assert wrap_phase(raw) == pytest.approx(wrapped)


def test_unwrap_phase_is_continuous():
    true = np.linspace(-10.0, -700.0, 200)
    raw = wrap_phase(true)
    np.testing.assert_allclose(unwrap_phase(raw), true, atol=1e-9)


def test_phase_jumps_flagged():
    raw = np.array([0.0, 10.0, 185.0, 190.0])
    assert list(phase_jumps(raw, 170.0)) == [1]


def test_evaluate_response_bode_of_integrator():
    rf = RationalFunction([1.0], [0.0, 1.0], '1/s')
    b = evaluate_response(rf, FrequencyGrid(1.0, 100.0, 100)).bode()
    np.testing.assert_allclose(b.phase_deg, -90.0, atol=1e-9)
    np.testing.assert_allclose(b.mag_db, -20.0 * np.log10(2 * np.pi * b.f), atol=1e-9)
    assert b.exact is rf


def test_evaluate_response_pole_on_grid():
    w0 = 2 * np.pi * 10.0
    rf = RationalFunction([1.0], [w0 ** 2, 0.0, 1.0])
    with pytest.raises(PoleOnGrid) as exc:
        evaluate_response(rf, FrequencyGrid(1.0, 100.0, 100, extra_points=[10.0]))
    assert exc.value.f_hz == pytest.approx(10.0)


def test_sampled_response_validation():
    with pytest.raises(ValueError):
        SampledResponse([1.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        SampledResponse([1.0, 2.0], [1.0, np.nan])
    with pytest.raises(ValueNearZero):
        SampledResponse([1.0, 2.0], [1.0, 0.0]).bode()


def test_check_same_grid():
    a = SampledResponse([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], 'a')
    b = SampledResponse([1.0, 2.0, 3.5], [1.0, 1.0, 1.0], 'b')
    assert check_same_grid(a, a) is a.f
    with pytest.raises(GridMismatch):
        check_same_grid(a, b)


def test_phase_slope_of_first_order_pole():
    # arg 1/(jw + a) = -atan(w/a), slope -a / (a^2 + w^2)
    a = 100.0
    rf = RationalFunction([1.0], [a, 1.0])
    w = np.array([10.0, 100.0, 1000.0])
    np.testing.assert_allclose(phase_slope(rf, w), -a / (a ** 2 + w ** 2), rtol=1e-12)


def test_phase_derivative_sampled_matches_exact():
    rf = RationalFunction([1.0], [2 * np.pi * 50.0, 1.0])
    resp = evaluate_response(rf, FrequencyGrid(1.0, 1e4, 400))
    sampled = SampledResponse(resp.f, resp.values)
    f = np.array([10.0, 50.0, 300.0])
    np.testing.assert_allclose(phase_derivative(sampled, f), phase_derivative(rf, f), rtol=1e-2)
    with pytest.raises(ValueError):
        phase_derivative(sampled, [2e4])


@pytest.mark.parametrize('raw,unwrapped', [
    ([170.0, -175.0, -160.0], [170.0, 185.0, 200.0]),
    ([-90.0, -90.0], [-90.0, -90.0]),
])
def test_unwrap_phase_examples(raw, unwrapped):
    np.testing.assert_allclose(unwrap_phase(raw), unwrapped)


def test_unwrap_phase_is_idempotent(rng):
    raw = wrap_phase(np.cumsum(rng.uniform(-150.0, 150.0, size=500)))
    once = unwrap_phase(raw)
    np.testing.assert_array_equal(unwrap_phase(once), once)


def test_unwrap_third_order_lag():
    # 1/(s + 1)^3 from 0.01 to 100 rad/s: -3 atan(w), no 360 deg jumps
    rf = RationalFunction([1.0], [1.0, 3.0, 3.0, 1.0])
    b = evaluate_response(rf, FrequencyGrid(0.01 / (2 * np.pi), 100.0 / (2 * np.pi), 100)).bode()
    assert np.all(np.diff(b.phase_deg) < 0)
    np.testing.assert_allclose(b.phase_deg, -3.0 * np.degrees(np.arctan(2 * np.pi * b.f)), atol=1e-9)
    assert b.phase_deg[0] == pytest.approx(0.0, abs=2.0)
    assert b.phase_deg[-1] == pytest.approx(-270.0, abs=2.0)


def test_conjugate_symmetry(rng):
    w = np.logspace(-2, 4, 61)
    for _ in range(50):
        rf = RationalFunction(rng.normal(size=int(rng.integers(1, 5))), rng.normal(size=int(rng.integers(2, 7))))
        np.testing.assert_allclose(rf(-1j * w), np.conj(rf(1j * w)), rtol=1e-12)


def test_phase_slope_examples():
    assert phase_slope(RationalFunction([1.0], [1.0, 1.0]), 1.0) == pytest.approx(-0.5)
    assert phase_derivative(RationalFunction([3.0]), [1.0, 10.0]).tolist() == [0.0, 0.0]


def test_pade_phase_slope_is_the_delay():
    t = 1.5 / 10e3
    w = np.logspace(0, np.log10(0.1 / t), 50)
    np.testing.assert_allclose(phase_slope(pade_delay(t), w), -t, rtol=1e-2)


def test_phase_derivative_sampled_matches_exact_random(rng):
    grid = FrequencyGrid(1e-2, 1e4, 200)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        den = random_factors(rng, n)
        num = random_factors(rng, int(rng.integers(0, n + 1)), rhp_share=0.3)
        rf = RationalFunction(num, den)
        resp = evaluate_response(rf, grid)
        f = resp.f[1:-1]
        exact = phase_derivative(rf, f)
        sampled = phase_derivative(SampledResponse(resp.f, resp.values), f)
        np.testing.assert_allclose(sampled, exact, rtol=2e-2, atol=1e-2 * np.max(np.abs(exact)))
