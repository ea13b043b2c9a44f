"""Right-half-plane pole/zero census, exact or read off Bode plots.

On a Bode plot an isolated break is read by its slope change and its phase
step:

    ==========  =============  ==========  ==========
    kind        slope, dB/dec  LHP phase   RHP phase
    ==========  =============  ==========  ==========
    real pole   -20            -90         +90
    real zero   +20            +90         -90
    conj pole   -40            -180        +180
    conj zero   +40            +180        -180
    ==========  =============  ==========  ==========
"""
from __future__ import division
from __future__ import print_function

import logging

import numpy as np
from scipy.signal import find_peaks

from freq import BodeSeries, SampledResponse
from miscc.config import cfg
from miscc.errors import GridTooSparse, OverlappingBreaks, UndeterminedBreaks
from poly_rat import RationalFunction, axis_tolerance, poly_roots

logger = logging.getLogger(__name__)

REAL_POLE, REAL_ZERO, CONJ_POLE, CONJ_ZERO = 'real_pole', 'real_zero', 'conj_pole', 'conj_zero'
LHP, RHP, UNDETERMINED = 'LHP', 'RHP', 'undetermined'
OVERLAPPING = 'overlapping breaks'


class BreakPoint(object):
    def __init__(self, f_b, kind, half_plane, slope_change_db_dec, phase_step_deg,
                 zeta_est=None, resonant=False, note=''):
        self.f_b = f_b
        self.kind = kind
        self.half_plane = half_plane
        self.slope_change_db_dec = slope_change_db_dec
        self.phase_step_deg = phase_step_deg
        self.zeta_est = zeta_est
        self.resonant = resonant
        self.note = note

    @property
    def multiplicity(self):
        return 2 if self.kind in (CONJ_POLE, CONJ_ZERO) else 1

    @property
    def is_pole(self):
        return self.kind in (REAL_POLE, CONJ_POLE)

    def __repr__(self):
        return "BreakPoint({:.6g} Hz, {}, {}, {:+.1f} dB/dec, {:+.1f} deg{})".format(
            self.f_b, self.kind, self.half_plane, self.slope_change_db_dec,
            self.phase_step_deg, ", " + self.note if self.note else "")


class RhpCensus(object):
    def __init__(self, rhp_poles, rhp_zeros, evidence=(), source='exact',
                 on_axis_poles=0, on_axis_zeros=0, label=''):
        assert rhp_poles >= 0 and rhp_zeros >= 0, "Counts must be non-negative"
        self.rhp_poles = int(rhp_poles)
        self.rhp_zeros = int(rhp_zeros)
        self.evidence = tuple(evidence)
        self.source = source
        self.on_axis_poles = int(on_axis_poles)
        self.on_axis_zeros = int(on_axis_zeros)
        self.label = label

    def __repr__(self):
        return "RhpCensus('{}', poles={}, zeros={}, on-axis {}/{}, {})".format(
            self.label, self.rhp_poles, self.rhp_zeros, self.on_axis_poles,
            self.on_axis_zeros, self.source)


#############################
def _fit_slope(x, y, lo, hi):
    m = (x >= lo) & (x <= hi)
    if np.count_nonzero(m) < 3:
        return None
    return np.polyfit(x[m], y[m], 1)[0]


def _classify(slope_change, phase_step, slope_tol, phase_tol):
    order = int(round(abs(slope_change) / 20.0))
    if order not in (1, 2) or abs(abs(slope_change) - 20.0 * order) > slope_tol:
        return None, UNDETERMINED, "slope change {:+.1f} dB/dec fits no row".format(slope_change)
    if abs(abs(phase_step) - 90.0 * order) > phase_tol:
        return None, UNDETERMINED, "phase step {:+.1f} deg does not match order {}".format(
            phase_step, order)
    pole = slope_change < 0
    if order == 1:
        kind = REAL_POLE if pole else REAL_ZERO
    else:
        kind = CONJ_POLE if pole else CONJ_ZERO
    # minimum phase: the phase moves with the magnitude slope
    half_plane = LHP if np.sign(phase_step) == np.sign(slope_change) else RHP
    return kind, half_plane, ''


def identify_breakpoints(b, window_decades=None, slope_tol_db_dec=None, phase_step_tol_deg=None):
    """Detect and classify the breaks of one Bode series.

    Candidates are peaks of |d(phase)/d(log f)|. The slope change is the
    difference of two regressions over [-2w, -w] and [w, 2w] decades around
    the candidate; the phase step is taken across +-2w decades, or half the
    distance to a neighbouring candidate. Candidates closer than one window,
    or too close to the grid edge, are returned undetermined.

    Return:
        list of BreakPoint, ascending in frequency
    """
    if isinstance(b, SampledResponse):
        b = b.bode()
    w = cfg.RHP.WINDOW_DECADES if window_decades is None else window_decades
    slope_tol = cfg.RHP.SLOPE_TOL_DB_DEC if slope_tol_db_dec is None else slope_tol_db_dec
    phase_tol = cfg.RHP.PHASE_STEP_TOL_DEG if phase_step_tol_deg is None else phase_step_tol_deg

    x = np.log10(b.f)
    span = x[-1] - x[0]
    density = (len(x) - 1) / span if span > 0 else 0.0
    if density < cfg.RHP.MIN_POINTS_PER_DECADE:
        raise GridTooSparse("Grid has {:.1f} points/decade, {} required".format(
            density, cfg.RHP.MIN_POINTS_PER_DECADE))

    dphase = np.abs(np.gradient(b.phase_deg, x))
    step = span / (len(x) - 1)
    peaks, _ = find_peaks(dphase, height=cfg.RHP.PEAK_DEG_DEC,
                          prominence=0.5 * cfg.RHP.PEAK_DEG_DEC,
                          distance=max(1, int(0.1 / step)))
    xb = x[peaks]

    breaks = []
    for i, p in enumerate(peaks):
        gap_lo = xb[i] - xb[i - 1] if i > 0 else np.inf
        gap_hi = xb[i + 1] - xb[i] if i + 1 < len(xb) else np.inf
        f_b = float(b.f[p])
        if min(gap_lo, gap_hi) < 2 * w:
            breaks.append(BreakPoint(f_b, None, UNDETERMINED, float('nan'), float('nan'),
                                     note=OVERLAPPING))
            continue
        if xb[i] - 2 * w < x[0] or xb[i] + 2 * w > x[-1]:
            breaks.append(BreakPoint(f_b, None, UNDETERMINED, float('nan'), float('nan'),
                                     note='break near grid edge'))
            continue
        before = _fit_slope(x, b.mag_db, xb[i] - 2 * w, xb[i] - w)
        after = _fit_slope(x, b.mag_db, xb[i] + w, xb[i] + 2 * w)
        reach_lo = min(2 * w, 0.5 * gap_lo)
        reach_hi = min(2 * w, 0.5 * gap_hi)
        phase_step = float(np.interp(xb[i] + reach_hi, x, b.phase_deg) -
                           np.interp(xb[i] - reach_lo, x, b.phase_deg))
        slope_change = float(after - before)
        kind, half_plane, note = _classify(slope_change, phase_step, slope_tol, phase_tol)

        zeta, resonant = None, False
        if kind in (CONJ_POLE, CONJ_ZERO):
            # deviation from the low-frequency asymptote extended to f_b
            m = (x >= xb[i] - 2 * w) & (x <= xb[i] - w)
            k, c = np.polyfit(x[m], b.mag_db[m], 1)
            near = np.abs(x - xb[i]) <= 0.25 * w
            dev = b.mag_db[near] - (k * x[near] + c)
            peak = float(dev[np.argmax(np.abs(dev))])
            resonant = abs(peak) > cfg.RHP.RESONANCE_DB
            zeta = 1.0 / (2.0 * 10.0 ** (abs(peak) / 20.0))
        breaks.append(BreakPoint(f_b, kind, half_plane, slope_change, phase_step,
                                 zeta_est=zeta, resonant=resonant, note=note))
    for bp in breaks:
        if bp.half_plane == UNDETERMINED:
            logger.warning("Undetermined break in '%s': %s", b.label, bp)
        else:
            logger.debug("Break in '%s': %s", b.label, bp)
    return breaks


def census(source, axis_tol=None):
    """RHP poles and zeros of one subsystem.

    Exact mode (RationalFunction) counts roots; heuristic mode (Bode data)
    sums break classifications and refuses partial counts.
    """
    if isinstance(source, RationalFunction):
        return _exact_census(source, axis_tol)
    breaks = identify_breakpoints(source)
    bad = [bp for bp in breaks if bp.half_plane == UNDETERMINED]
    if any(bp.note == OVERLAPPING for bp in bad):
        raise OverlappingBreaks(bad)
    if bad:
        raise UndeterminedBreaks(bad)
    poles = sum(bp.multiplicity for bp in breaks if bp.half_plane == RHP and bp.is_pole)
    zeros = sum(bp.multiplicity for bp in breaks if bp.half_plane == RHP and not bp.is_pole)
    label = source.label
    return RhpCensus(poles, zeros, breaks, 'bode_heuristic', label=label)


def _split(poly, axis_tol):
    if poly.degree < 1:
        return [], []
    rs = poly_roots(poly)
    tol = axis_tolerance(rs, axis_tol)
    rhp = [r for r, t in zip(rs.roots, tol) if r.real > t]
    axis = [r for r, t in zip(rs.roots, tol) if abs(r.real) <= t]
    return rhp, axis


def _exact_census(rf, axis_tol):
    rhp_z, axis_z = _split(rf.num, axis_tol)
    rhp_p, axis_p = _split(rf.den, axis_tol)
    evidence = [('zero', r) for r in rhp_z] + [('pole', r) for r in rhp_p]
    if axis_z or axis_p:
        logger.info("'%s' has jw-axis roots: %d zero(s), %d pole(s)", rf.label, len(axis_z), len(axis_p))
    return RhpCensus(len(rhp_p), len(rhp_z), evidence, 'exact',
                     on_axis_poles=len(axis_p), on_axis_zeros=len(axis_z), label=rf.label)


def open_loop_rhp_poles(num_census, den_census):
    """P[Z1/Z2] = P[Z1] + Z[Z2]."""
    return num_census.rhp_poles + den_census.rhp_zeros
