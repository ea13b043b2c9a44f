"""Encirclements of (-1, j0) counted straight from two Bode plots.

Exterior regions (ERs) are where |Z1| > |Z2|. Inside them, a frequency where the
phase difference meets a crossing boundary (CB), -180 + k*360 deg, is a
crossing of the negative real axis left of -1. The sign of
d/dw(angle Z1 - angle Z2) gives its direction: negative is clockwise (CC),
positive is anticlockwise (ACC). Crossings at w != 0 count twice for the
mirrored negative-frequency half.

The winding-number oracle is independent: it tracks arg(1 + Z1/Z2) along
the whole Nyquist contour.
"""
from __future__ import division
from __future__ import print_function

import logging
import math

import numpy as np
from scipy.optimize import brentq

from freq import check_same_grid, phase_derivative, wrap_phase
from miscc.config import cfg
from miscc.errors import (BoundaryCrossing, MarginalCondition, NonProperRatio, PoleOnAxis,
                          TangentCrossing, UnresolvedZeroCrossing)
from poly_rat import Polynomial, axis_tolerance, poly_roots

logger = logging.getLogger(__name__)

CC, ACC = 'CC', 'ACC'


class ExteriorRegion(object):
    def __init__(self, f_lo, f_hi):
        self.f_lo = f_lo
        self.f_hi = f_hi

    def __contains__(self, f):
        return self.f_lo < f < self.f_hi

    def __repr__(self):
        return "ExteriorRegion({:.6g}, {:.6g})".format(self.f_lo, self.f_hi)


class Crossing(object):
    def __init__(self, f, phase_diff_deriv, boundary, at_zero=False, f_uncertainty=0.0):
        self.f = f
        self.phase_diff_deriv = phase_diff_deriv
        self.kind = CC if phase_diff_deriv < 0 else ACC
        self.boundary = boundary
        self.at_zero = at_zero
        self.f_uncertainty = f_uncertainty

    def __repr__(self):
        return "Crossing({:.6g} Hz, {}, {:+d}{})".format(
            self.f, self.kind, self.boundary, ", w=0" if self.at_zero else "")


class EncirclementCount(object):
    def __init__(self, n_cc, n_cc0, n_acc, n_acc0):
        self.n_cc = n_cc
        self.n_cc0 = n_cc0
        self.n_acc = n_acc
        self.n_acc0 = n_acc0

    @property
    def N_CC(self):
        return 2 * self.n_cc + self.n_cc0

    @property
    def N_ACC(self):
        return 2 * self.n_acc + self.n_acc0

    @property
    def N(self):
        return self.N_CC - self.N_ACC

    def __repr__(self):
        return "EncirclementCount(N_CC={}, N_ACC={}, N={})".format(self.N_CC, self.N_ACC, self.N)


#############################
def _exact(b1, b2):
    return b1.exact is not None and b2.exact is not None


def _mag_diff(b1, b2, f):
    s = 2j * np.pi * f
    return 20.0 * (np.log10(np.abs(b1.exact(s))) - np.log10(np.abs(b2.exact(s))))


def _phase_offset(b1, b2, f, target):
    """Wrapped angle(Z1/Z2) - target, in degrees."""
    s = 2j * np.pi * f
    v = b1.exact(s) * np.conj(b2.exact(s)) * np.exp(-1j * np.deg2rad(target))
    return np.angle(v, deg=True)


def _interp_log(f, i, y, y_target):
    x0, x1 = math.log10(f[i]), math.log10(f[i + 1])
    t = (y_target - y[i]) / (y[i + 1] - y[i])
    return 10.0 ** (x0 + t * (x1 - x0))


def _root_in(fun, lo, hi, refine_tol):
    flo, fhi = fun(lo), fun(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        return None
    return brentq(fun, lo, hi, xtol=refine_tol * lo, rtol=4 * np.finfo(float).eps)


def _edge_below(fun, f0, refine_tol, decades=30):
    """Highest sign change of fun below f0, searched a decade at a time; 0 if none."""
    hi, sign = f0, np.sign(fun(f0))
    for _ in range(decades):
        lo = hi / 10.0
        if np.sign(fun(lo)) != sign:
            r = _root_in(fun, lo, hi, refine_tol)
            return lo if r is None else r
        hi = lo
    return 0.0


def _starts_at_zero(b1, b2):
    """|Z1/Z2| > 1 as w -> 0, origin roots included."""
    num = b1.exact.num * b2.exact.den
    den = b1.exact.den * b2.exact.num
    if num.is_zero or den.is_zero:
        return False
    a = int(np.flatnonzero(num.coeffs)[0])
    b = int(np.flatnonzero(den.coeffs)[0])
    if a != b:
        return a < b
    return abs(num.coeffs[a] / den.coeffs[b]) > 1.0


def exterior_regions(b1, b2, refine_tol=None):
    """Maximal frequency intervals where |Z1| > |Z2|.

    With exact models a region starts at 0 iff |Z1/Z2| > 1 at w = 0, whatever
    the lowest grid frequency; with sampled data a region touching the lowest
    grid frequency starts at 0. A region touching the highest grid frequency
    ends there.
    """
    f = check_same_grid(b1, b2)
    refine_tol = cfg.TOL.REFINE_HZ if refine_tol is None else refine_tol
    md = b1.mag_db - b2.mag_db
    inside = md > 0
    exact = _exact(b1, b2)

    def mag_diff(x):
        return _mag_diff(b1, b2, x)

    def edge(i):
        if exact:
            r = _root_in(mag_diff, f[i], f[i + 1], refine_tol)
            if r is not None:
                return r
        return _interp_log(f, i, md, 0.0)

    regions = []
    n = len(f)
    i = 0
    while i < n:
        if not inside[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and inside[j + 1]:
            j += 1
        f_lo = edge(i - 1) if i else 0.0
        if not i and exact and not _starts_at_zero(b1, b2):
            f_lo = _edge_below(mag_diff, f[0], refine_tol)
        f_hi = float(f[-1]) if j == n - 1 else edge(j)
        regions.append(ExteriorRegion(float(f_lo), float(f_hi)))
        i = j + 1
    if exact and not inside[0] and _starts_at_zero(b1, b2):
        regions.insert(0, ExteriorRegion(0.0, float(_edge_below(mag_diff, f[0], refine_tol))))
    logger.debug("ERs of %s/%s: %s", b1.label, b2.label, regions)
    return regions


def locate_phase_crossings(b1, b2, refine_tol=None):
    """All positive-frequency solutions of angle Z1 - angle Z2 = -180 + k*360.

    Return:
        list of (f, boundary, mag_diff_db, f_uncertainty); boundary is +180 for
        a positive target phase and -180 otherwise
    """
    f = check_same_grid(b1, b2)
    refine_tol = cfg.TOL.REFINE_HZ if refine_tol is None else refine_tol
    phi = b1.phase_deg - b2.phase_deg
    md = b1.mag_db - b2.mag_db
    k = np.floor((phi - 180.0) / 360.0)
    exact = _exact(b1, b2)
    found = []
    for i in np.flatnonzero(k[1:] != k[:-1]):
        lo, hi = sorted((k[i], k[i + 1]))
        for m in np.arange(lo + 1, hi + 1):
            target = 180.0 + 360.0 * m
            f_star = None
            if exact:
                f_star = _root_in(lambda x: _phase_offset(b1, b2, x, target),
                                  f[i], f[i + 1], refine_tol)
            if f_star is not None:
                mag = float(_mag_diff(b1, b2, f_star))
                unc = 0.0
            else:
                f_star = _interp_log(f, i, phi, target)
                x = math.log10(f_star)
                mag = float(np.interp(x, np.log10(f[i:i + 2]), md[i:i + 2]))
                unc = 0.5 * (f[i + 1] - f[i])
            boundary = 180 if target > 0 else -180
            found.append((float(f_star), boundary, mag, unc))
    return found


def _phase_diff_deriv(b1, b2, f):
    if _exact(b1, b2):
        return float(phase_derivative(b1.exact, f) - phase_derivative(b2.exact, f))
    grad = np.gradient(b1.phase_deg - b2.phase_deg, b1.f)
    return float(np.interp(f, b1.f, grad))


def _dc_ratio(b1, b2):
    """Limit of Z1/Z2 at s = 0 and d(arg)/dw there (rad per rad/s), or None."""
    num = b1.exact.num * b2.exact.den
    den = b1.exact.den * b2.exact.num
    a = int(np.flatnonzero(num.coeffs)[0]) if not num.is_zero else None
    b = int(np.flatnonzero(den.coeffs)[0])
    if a is None or a != b:
        return None
    n = Polynomial(num.coeffs[a:])
    d = Polynomial(den.coeffs[b:])
    value = n.coeffs[0] / d.coeffs[0]
    slope = n.deriv()(0.0) / n.coeffs[0] - d.deriv()(0.0) / d.coeffs[0]
    return value, slope


def _extrapolate_dc_phase(b1, b2):
    """Phase difference at w = 0 and its slope (deg, deg/Hz) from the lowest samples."""
    f = b1.f
    dphi = b1.phase_deg - b2.phase_deg
    n = max(3, int(np.count_nonzero(f <= f[0] * 10.0 ** cfg.TOL.DC_FIT_DECADES)))
    n = min(n, len(f))
    slope, phi0 = np.polyfit(f[:n], dphi[:n], 1)
    return float(phi0), float(slope)


def zero_crossing(b1, b2, regions, tol_deg):
    """The CB crossing at w = 0, or None when the curve does not start left of -1."""
    critical = cfg.TOL.CRITICAL_DB
    if _exact(b1, b2):
        dc = _dc_ratio(b1, b2)
        if dc is None or dc[0] >= 0:
            return None
        value, slope = dc
        if abs(20.0 * math.log10(abs(value))) <= critical:
            raise BoundaryCrossing("Nyquist curve passes through -1 at w = 0", 0.0)
        if abs(value) < 1.0:
            return None
        deriv = 360.0 * slope
    else:
        if not regions or regions[0].f_lo != 0.0:
            return None
        phi0, deriv = _extrapolate_dc_phase(b1, b2)
        if abs(wrap_phase(b1.phase_deg[0] - b2.phase_deg[0])) < 180.0 - tol_deg:
            # not on a CB at the lowest sample, read the phase at w = 0 off the fit
            wrapped = float(wrap_phase(phi0))
            nearest = 90.0 * round(wrapped / 90.0)
            if abs(wrapped - nearest) > cfg.TOL.DC_SNAP_DEG:
                if 180.0 - abs(wrapped) < 90.0:
                    raise UnresolvedZeroCrossing(
                        "Phase difference at w = 0 extrapolates to %.1f deg" % wrapped, wrapped)
                return None
            if abs(nearest) != 180.0:
                return None
    if abs(deriv) < cfg.TOL.TANGENT_DEG_HZ:
        raise TangentCrossing("Tangent crossing at w = 0", 0.0)
    return Crossing(0.0, deriv, 180, at_zero=True)


def find_crossings(b1, b2, regions, tol_deg=None):
    """CB crossings inside the ERs, classified CC/ACC.

    Raises TangentCrossing or BoundaryCrossing when a crossing cannot be
    classified; both mean a marginal verdict.
    """
    tol_deg = cfg.TOL.DEG if tol_deg is None else tol_deg
    crossings = []
    zero = zero_crossing(b1, b2, regions, tol_deg)
    if zero is not None:
        crossings.append(zero)
    for f_star, boundary, mag, unc in locate_phase_crossings(b1, b2):
        if abs(mag) <= cfg.TOL.CRITICAL_DB:
            raise BoundaryCrossing("|Z1/Z2| = 1 at a CB crossing, {} Hz".format(f_star), f_star)
        if mag < 0 or not any(f_star in r for r in regions):
            continue
        deriv = _phase_diff_deriv(b1, b2, f_star)
        if abs(deriv) < cfg.TOL.TANGENT_DEG_HZ:
            raise TangentCrossing("Tangent CB crossing at {} Hz".format(f_star), f_star)
        crossings.append(Crossing(f_star, deriv, boundary, f_uncertainty=unc))
    crossings.sort(key=lambda c: c.f)
    logger.info("Crossings of %s/%s: %s", b1.label, b2.label, crossings)
    return crossings


def count_encirclements(crossings):
    n_cc = sum(1 for c in crossings if c.kind == CC and not c.at_zero)
    n_acc = sum(1 for c in crossings if c.kind == ACC and not c.at_zero)
    n_cc0 = sum(1 for c in crossings if c.kind == CC and c.at_zero)
    n_acc0 = sum(1 for c in crossings if c.kind == ACC and c.at_zero)
    assert n_cc0 + n_acc0 <= 1, "At most one crossing at w = 0"
    return EncirclementCount(n_cc, n_cc0, n_acc, n_acc0)


#############################
def _sweep(values_at, w, max_step, max_refine):
    """Accumulated arg along w, refined until no step exceeds max_step."""
    for _ in range(max_refine):
        arg = np.angle(values_at(w), deg=True)
        step = np.abs(wrap_phase(np.diff(arg)))
        bad = np.flatnonzero(step > max_step)
        if not len(bad):
            break
        lo, hi = w[bad], w[bad + 1]
        same_sign = lo * hi > 0
        mid = np.where(same_sign, np.sign(lo) * np.sqrt(np.abs(lo * hi)), 0.5 * (lo + hi))
        w = np.sort(np.concatenate([w, mid]))
    else:
        logger.warning("Winding sweep still coarse after %d refinements", max_refine)
    arg = np.angle(values_at(w), deg=True)
    return float(np.sum(wrap_phase(np.diff(arg))))


def winding_number(num, den, axis_tol=None, span=None, points_per_decade=None, two_sided=False):
    """Clockwise encirclements of the origin by num(s)/den(s) on the Nyquist contour.

    The contour runs up the jw axis, around an origin pole by a small
    right indentation, and closes clockwise at infinity. Equals Z - P.
    """
    span = cfg.ORACLE.SPAN if span is None else span
    ppd = cfg.ORACLE.POINTS_PER_DECADE if points_per_decade is None else points_per_decade
    num = num if isinstance(num, Polynomial) else Polynomial(num)
    den = den if isinstance(den, Polynomial) else Polynomial(den)

    def _roots(poly):
        return poly_roots(poly).roots if poly.degree >= 1 else np.zeros(0, dtype=complex)

    zeros, poles = _roots(num), _roots(den)
    for r, t in zip(zeros, axis_tolerance(zeros, axis_tol)):
        if abs(r.real) <= t:
            raise MarginalCondition("Contour passes through a zero at {}".format(r),
                                    abs(r.imag) / (2 * math.pi))
    origin_order = 0
    for r, t in zip(poles, axis_tolerance(poles, axis_tol)):
        if abs(r) <= t:
            origin_order += 1
        elif abs(r.real) <= t:
            raise PoleOnAxis("Pole on the jw axis at {}".format(r))

    roots = np.concatenate([zeros, poles])
    mags = np.abs(roots)
    mags = mags[mags > axis_tolerance(roots, axis_tol)]
    w_lo = 1e-3 * mags.min() if len(mags) else 1e-3
    w_hi = span * mags.max() if len(mags) else 1.0
    decades = max(1.0, math.log10(w_hi / w_lo))
    w = np.logspace(math.log10(w_lo), math.log10(w_hi), int(decades * ppd) + 1)
    if origin_order == 0:
        w = np.concatenate([[0.0], w])

    def values_at(x):
        s = 1j * x
        return num(s) / den(s)

    max_step, max_refine = cfg.ORACLE.MAX_STEP_DEG, cfg.ORACLE.MAX_REFINE
    if two_sided:
        if origin_order == 0:
            full = np.concatenate([-w[:0:-1], w])
            total = _sweep(values_at, full, max_step, max_refine)
        else:
            total = (_sweep(values_at, -w[::-1], max_step, max_refine) +
                     _sweep(values_at, w, max_step, max_refine))
    else:
        total = 2.0 * _sweep(values_at, w, max_step, max_refine)
    total += -180.0 * origin_order
    total += -180.0 * (num.degree - den.degree) if not num.is_zero else 0.0

    turns = -total / 360.0
    n = int(round(turns))
    if abs(turns - n) > 0.25:
        logger.warning("Winding number %.3f is not close to an integer", turns)
    return n


def winding_number_oracle(ratio, grid=None, axis_tol=None, two_sided=False):
    """Clockwise encirclements of (-1, j0) by the ratio, from arg(1 + ratio)."""
    if not ratio.is_proper:
        raise NonProperRatio("Ratio '{}' is not proper (relative degree {})".format(
            ratio.label, ratio.relative_degree))
    ppd = grid.points_per_decade if grid is not None else None
    return winding_number(ratio.num + ratio.den, ratio.den, axis_tol=axis_tol,
                          points_per_decade=ppd, two_sided=two_sided)
