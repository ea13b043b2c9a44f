"""Frequency grids, sampled responses, Bode views and phase derivatives."""
from __future__ import division
from __future__ import print_function

import logging
import math

import numpy as np

from miscc.config import cfg
from miscc.errors import GridMismatch, PoleOnGrid, ValueNearZero
from poly_rat import RationalFunction, axis_tolerance, poly_roots

logger = logging.getLogger(__name__)

KINDS = ('impedance', 'admittance', 'ratio', 'generic')


class FrequencyGrid(object):
    """Log-spaced sweep in Hz with optional refinement points."""

    def __init__(self, f_min=None, f_max=None, points_per_decade=None, extra_points=()):
        self.f_min = float(cfg.FREQ.F_MIN if f_min is None else f_min)
        self.f_max = float(cfg.FREQ.F_MAX if f_max is None else f_max)
        self.points_per_decade = int(cfg.FREQ.POINTS_PER_DECADE if points_per_decade is None
                                     else points_per_decade)
        assert 0 < self.f_min < self.f_max, \
            "Required 0 < f_min < f_max but {} and {} are given".format(self.f_min, self.f_max)
        assert self.points_per_decade >= 1, \
            "Required points_per_decade >= 1 but {} is given".format(self.points_per_decade)
        self.extra_points = tuple(float(f) for f in extra_points)

    def frequencies(self):
        decades = math.log10(self.f_max / self.f_min)
        n = int(math.ceil(decades * self.points_per_decade)) + 1
        f = np.logspace(math.log10(self.f_min), math.log10(self.f_max), n)
        f[0], f[-1] = self.f_min, self.f_max
        extra = [x for x in self.extra_points if self.f_min < x < self.f_max]
        return np.unique(np.concatenate([f, extra]))

    def __repr__(self):
        return "FrequencyGrid({}, {}, {}/dec, +{})".format(
            self.f_min, self.f_max, self.points_per_decade, len(self.extra_points))


def wrap_phase(phase_deg):
    """Map degrees into (-180, 180]."""
    p = np.asarray(phase_deg, dtype=float)
    return p - 360.0 * np.ceil((p - 180.0) / 360.0)


def unwrap_phase(raw_phase_deg):
    """Continuous phase anchored at the principal value of the first sample."""
    raw = np.asarray(raw_phase_deg, dtype=float)
    if raw.size == 0:
        return raw.copy()
    out = np.unwrap(raw, period=360.0)
    return out + (wrap_phase(raw[0]) - raw[0])


def phase_jumps(raw_phase_deg, limit_deg=None):
    """Indices i where the step i -> i+1 is too large to unwrap unambiguously."""
    limit_deg = cfg.TOL.UNWRAP_FLAG_DEG if limit_deg is None else limit_deg
    raw = np.asarray(raw_phase_deg, dtype=float)
    step = np.abs(wrap_phase(np.diff(raw)))
    return np.flatnonzero(step > limit_deg)


class BodeSeries(object):
    """Magnitude (dB) and unwrapped phase (deg) on a frequency vector."""

    def __init__(self, f, mag_db, phase_deg, label='', exact=None, ambiguous_f=()):
        self.f = np.asarray(f, dtype=float)
        self.mag_db = np.asarray(mag_db, dtype=float)
        self.phase_deg = np.asarray(phase_deg, dtype=float)
        assert self.f.shape == self.mag_db.shape == self.phase_deg.shape, \
            "Bode arrays must share one shape"
        self.label = label
        # the RationalFunction the series was sampled from, if any
        self.exact = exact
        self.ambiguous_f = tuple(ambiguous_f)

    @property
    def phase_wrapped_deg(self):
        return wrap_phase(self.phase_deg)

    @property
    def values(self):
        return 10.0 ** (self.mag_db / 20.0) * np.exp(1j * np.deg2rad(self.phase_deg))

    def __len__(self):
        return len(self.f)


class SampledResponse(object):
    def __init__(self, f, values, label='', kind='generic', exact=None):
        f = np.asarray(f, dtype=float)
        values = np.asarray(values, dtype=complex)
        assert kind in KINDS, "Required one of {} but {} is given".format(KINDS, kind)
        if f.ndim != 1 or f.shape != values.shape:
            raise ValueError("Frequencies and values must be 1-D of equal length")
        if np.any(np.diff(f) <= 0):
            raise ValueError("Frequencies must be strictly increasing '{}'".format(label))
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(values))):
            raise ValueError("Response '{}' holds non-finite samples".format(label))
        self.f = f
        self.values = values
        self.label = label
        self.kind = kind
        self.exact = exact

    @property
    def points(self):
        return list(zip(self.f, self.values))

    def bode(self):
        mag = np.abs(self.values)
        if np.any(mag == 0):
            raise ValueNearZero("Response '{}' vanishes at {} Hz".format(
                self.label, self.f[np.argmin(mag)]))
        raw = np.angle(self.values, deg=True)
        jumps = phase_jumps(raw)
        if len(jumps):
            logger.warning("Ambiguous phase unwrap in '%s' near %s Hz", self.label,
                           ", ".join("%.6g" % self.f[i] for i in jumps))
        return BodeSeries(self.f, 20.0 * np.log10(mag), unwrap_phase(raw), self.label,
                          exact=self.exact, ambiguous_f=self.f[jumps])

    def __len__(self):
        return len(self.f)


def check_same_grid(*series):
    f0 = series[0].f
    for s in series[1:]:
        if s.f.shape != f0.shape or not np.allclose(s.f, f0, rtol=1e-12, atol=0.0):
            raise GridMismatch("Responses '{}' and '{}' are not on one grid".format(
                series[0].label, s.label))
    return f0


def evaluate_response(rf, grid, label=None, kind='generic', axis_tol=None):
    """Sample rf at s = j*2*pi*f on the grid.

    Return:
        SampledResponse that remembers rf, so ``.bode()`` carries exact mode
    """
    f = grid.frequencies() if isinstance(grid, FrequencyGrid) else np.asarray(grid, dtype=float)
    label = rf.label if label is None else label
    if rf.den.degree >= 1:
        poles = poly_roots(rf.den)
        tol = axis_tolerance(poles, axis_tol)
        w = 2 * np.pi * f
        for r, t in zip(poles.roots, tol):
            if abs(r.real) <= t:
                i = int(np.argmin(np.abs(w - abs(r.imag))))
                if abs(w[i] - abs(r.imag)) <= t:
                    raise PoleOnGrid(f[i])
    values = rf(2j * np.pi * f)
    return SampledResponse(f, values, label, kind, exact=rf)


def bode(rf, grid, label=None):
    return evaluate_response(rf, grid, label).bode()


def phase_slope(rf, omega):
    """d arg F(jw) / dw in rad per rad/s, from Re{F'(s)/F(s)}."""
    s = 1j * np.asarray(omega, dtype=float)
    value = rf(s)
    if np.any(np.abs(value) < 1e-12):
        raise ValueNearZero("|F(jw)| < 1e-12 at w = {}".format(omega))
    return np.real(rf.log_derivative(s))


def phase_derivative(source, f):
    """Phase derivative in deg/Hz.

    Exact for a RationalFunction; central difference on the unwrapped phase for
    a SampledResponse or BodeSeries.
    """
    if isinstance(source, RationalFunction):
        # deg/Hz = (180/pi) * 2*pi * rad/(rad/s)
        return 360.0 * phase_slope(source, 2 * np.pi * np.asarray(f, dtype=float))
    b = source.bode() if isinstance(source, SampledResponse) else source
    f = np.asarray(f, dtype=float)
    if np.any(f < b.f[0]) or np.any(f > b.f[-1]):
        raise ValueError("Frequency {} outside the sampled span [{}, {}]".format(f, b.f[0], b.f[-1]))
    grad = np.gradient(b.phase_deg, b.f)
    return np.interp(f, b.f, grad)
