"""Stability of two interconnected subsystems from their impedances.

The general rule runs in four stages: orient the proper ratio Z1/Z2, count
its open-loop RHP poles P = P[Z1] + Z[Z2], count encirclements N from the
two Bode plots, and call the system stable iff N = -P. Exact models also go
through two independent oracles, the winding number of 1 + Z1/Z2 and the
roots of the characteristic polynomial.
"""
from __future__ import division
from __future__ import print_function

import logging
from collections import OrderedDict, namedtuple

import numpy as np

from encircle import (count_encirclements, exterior_regions, find_crossings,
                      winding_number, winding_number_oracle)
from freq import FrequencyGrid, check_same_grid, evaluate_response, wrap_phase
from miscc.config import cfg
from miscc.errors import (Ambiguous, HiddenModeRisk, MarginalCondition, NonProperRatio,
                          PoleOnGrid, PreconditionRhpPoles, StabilityError,
                          UndeterminedBreaks, UnresolvedZeroCrossing)
from poly_rat import RootSet, axis_tolerance, count_rhp_roots, poly_roots, rat_arith
from rhp_id import census, open_loop_rhp_poles

logger = logging.getLogger(__name__)

STABLE, UNSTABLE, MARGINAL, INDETERMINATE = 'STABLE', 'UNSTABLE', 'MARGINAL', 'INDETERMINATE'
VERDICTS = (STABLE, UNSTABLE, MARGINAL, INDETERMINATE)

RootsVerdict = namedtuple('RootsVerdict', ['roots', 'verdict', 'rhp', 'notes'])
SumVerdict = namedtuple('SumVerdict', ['verdict', 'rhp_zero_count', 'winding'])


class SubsystemModel(object):
    """One side of the interconnection, exact and/or sampled."""

    def __init__(self, id, kind='impedance', exact=None, sampled=None):
        assert kind in ('impedance', 'admittance'), \
            "Required 'impedance' or 'admittance' but {} is given".format(kind)
        assert exact is not None or sampled is not None, \
            "Subsystem '{}' needs an exact model or a sampled response".format(id)
        self.id = id
        self.kind = kind
        self.exact = exact
        self.sampled = sampled
        if exact is not None and sampled is not None:
            self._check_consistent()

    def _check_consistent(self):
        ref = evaluate_response(self.exact, self.sampled.f).bode()
        got = self.sampled.bode()
        dmag = np.max(np.abs(ref.mag_db - got.mag_db))
        dphase = np.max(np.abs(wrap_phase(ref.phase_deg - got.phase_deg)))
        if dmag > cfg.TOL.MODEL_DB or dphase > cfg.TOL.MODEL_DEG:
            raise ValueError("Sampled response of '{}' departs from its model by {:.3g} dB / {:.3g} deg".format(
                self.id, dmag, dphase))

    def bode_on(self, f):
        if self.exact is not None:
            return evaluate_response(self.exact, f, label=self.id).bode()
        b = self.sampled.bode()
        b.label = self.id
        return b

    def __repr__(self):
        return "SubsystemModel('{}', {}{}{})".format(
            self.id, self.kind, ", exact" if self.exact is not None else "",
            ", sampled" if self.sampled is not None else "")


class RatioOrientation(object):
    def __init__(self, numerator_id, denominator_id, basis, hf_slope_num_db_dec, hf_slope_den_db_dec):
        self.numerator_id = numerator_id
        self.denominator_id = denominator_id
        self.basis = basis
        self.hf_slope_num_db_dec = hf_slope_num_db_dec
        self.hf_slope_den_db_dec = hf_slope_den_db_dec

    def __repr__(self):
        return "RatioOrientation({}/{}, {})".format(self.numerator_id, self.denominator_id, self.basis)


class StabilityReport(object):
    def __init__(self, orientation):
        self.orientation = orientation
        self.P_open_loop = None
        self.encirclements = None
        self.crossings = []
        self.regions = []
        self.verdict = INDETERMINATE
        self.cross_checks = OrderedDict()
        self.evidence_notes = []
        self.censuses = ()

    def note(self, text, level=logging.INFO):
        logger.log(level, text)
        self.evidence_notes.append(text)

    def __repr__(self):
        return "StabilityReport({}, P={}, {})".format(self.verdict, self.P_open_loop, self.encirclements)


#############################
def _sample_grid(a, b, grid):
    sampled = [m.sampled for m in (a, b) if m.exact is None]
    if len(sampled) == 2:
        return check_same_grid(*sampled)
    if sampled:
        return sampled[0].f
    grid = FrequencyGrid() if grid is None else grid
    return grid.frequencies()


def _top_decade_slope(b):
    m = b.f >= b.f[-1] / 10.0
    return float(np.polyfit(np.log10(b.f[m]), b.mag_db[m], 1)[0]), float(np.mean(b.mag_db[m]))


def select_proper_ratio(a, b, force=None, grid=None):
    """Choose which subsystem goes on top so that |ratio| -> 0 (or < 1) at high frequency.

    Args:
        a, b: SubsystemModel
        force: id of the subsystem to put in the numerator, or None
    """
    if force is not None:
        if force not in (a.id, b.id):
            raise ValueError("Forced numerator '{}' is neither '{}' nor '{}'".format(force, a.id, b.id))
        num, den = (a, b) if force == a.id else (b, a)
        return RatioOrientation(num.id, den.id, 'user_forced', float('nan'), float('nan'))

    if a.exact is not None and b.exact is not None:
        ra, rb = a.exact.relative_degree, b.exact.relative_degree
        if ra != rb:
            num, den = (a, b) if ra > rb else (b, a)
            return RatioOrientation(num.id, den.id, 'relative_degree',
                                    -20.0 * num.exact.relative_degree, -20.0 * den.exact.relative_degree)
        la = abs(a.exact.num.leading / a.exact.den.leading)
        lb = abs(b.exact.num.leading / b.exact.den.leading)
        if np.isclose(la, lb, rtol=1e-12, atol=0.0):
            raise Ambiguous("'{}' and '{}' tie in slope and magnitude; force an orientation".format(a.id, b.id))
        num, den = (a, b) if la < lb else (b, a)
        return RatioOrientation(num.id, den.id, 'hf_magnitude', -20.0 * ra, -20.0 * rb)

    f = _sample_grid(a, b, grid)
    sa, ma = _top_decade_slope(a.bode_on(f))
    sb, mb = _top_decade_slope(b.bode_on(f))
    if abs(sa - sb) > cfg.ORIENT.SLOPE_TIE_DB_DEC:
        num_is_a = sa < sb
        basis = 'hf_slope'
    elif abs(ma - mb) > cfg.ORIENT.MAG_TIE_DB:
        num_is_a = ma < mb
        basis = 'hf_magnitude'
    else:
        raise Ambiguous("'{}' and '{}' tie in slope and magnitude; force an orientation".format(a.id, b.id))
    if num_is_a:
        return RatioOrientation(a.id, b.id, basis, sa, sb)
    return RatioOrientation(b.id, a.id, basis, sb, sa)


def _encirclement_stage(b1, b2, tol_deg):
    regions = exterior_regions(b1, b2)
    crossings = find_crossings(b1, b2, regions, tol_deg)
    return regions, crossings, count_encirclements(crossings)


def _near_ambiguous_unwrap(crossings, *series):
    """Crossings inside a grid step the unwrap could not resolve."""
    hits = []
    for b in series:
        if b.exact is not None:
            continue
        for f_a in b.ambiguous_f:
            i = int(np.searchsorted(b.f, f_a))
            lo, hi = b.f[max(i - 1, 0)], b.f[min(i + 2, len(b.f) - 1)]
            hits.extend(c for c in crossings if lo <= c.f <= hi)
    return hits


def _census(model, b):
    return census(model.exact if model.exact is not None else b)


def _axis_poles_off_origin(ratio):
    if ratio.den.degree < 1:
        return []
    rs = poly_roots(ratio.den)
    tol = axis_tolerance(rs)
    return [r for r, t in zip(rs.roots, tol) if abs(r.real) <= t and abs(r) > t]


def assess_stability(a, b, force_orientation=None, grid=None, tol_deg=None, cross_check=True,
                     valid_below_hz=None):
    """Run the four-stage rule and, for exact models, the oracles.

    Return:
        StabilityReport
    """
    orientation = select_proper_ratio(a, b, force=force_orientation, grid=grid)
    num_m, den_m = (a, b) if orientation.numerator_id == a.id else (b, a)
    report = StabilityReport(orientation)
    report.note("Ratio {}/{} chosen by {}".format(num_m.id, den_m.id, orientation.basis))
    exact = num_m.exact is not None and den_m.exact is not None

    f = _sample_grid(a, b, grid)
    if valid_below_hz is not None and f[-1] > valid_below_hz:
        report.note("Responses above {:.6g} Hz are beyond model validity".format(valid_below_hz))
    try:
        b1, b2 = num_m.bode_on(f), den_m.bode_on(f)
    except PoleOnGrid as exc:
        report.verdict = MARGINAL
        report.note("Undamped pole on the sweep: {}".format(exc), logging.WARNING)
        return report

    # stage 2: open-loop RHP poles
    try:
        c_num, c_den = _census(num_m, b1), _census(den_m, b2)
    except UndeterminedBreaks as exc:
        report.verdict = INDETERMINATE
        report.note("Census refused: {}; an exact model is required".format(exc), logging.WARNING)
        return report
    report.censuses = (c_num, c_den)
    report.P_open_loop = open_loop_rhp_poles(c_num, c_den)
    report.note("P = P[{}] + Z[{}] = {} + {} = {}".format(
        num_m.id, den_m.id, c_num.rhp_poles, c_den.rhp_zeros, report.P_open_loop))
    report.note("Interconnection type {}".format(interconnection_type(num_m, den_m, c_num, c_den)))

    marginal = False
    ratio = rat_arith('div', num_m.exact, den_m.exact) if exact else None
    if exact:
        undamped = _axis_poles_off_origin(ratio)
        if undamped:
            marginal = True
            report.note("Ratio has {} undamped pole(s) on the jw axis".format(len(undamped)), logging.WARNING)

    # stage 3: encirclements
    try:
        report.regions, report.crossings, report.encirclements = _encirclement_stage(b1, b2, tol_deg)
    except MarginalCondition as exc:
        marginal = True
        report.note("Marginal: {}".format(exc), logging.WARNING)
    except UnresolvedZeroCrossing as exc:
        report.verdict = INDETERMINATE
        report.note("{}; data closer to w = 0 is required".format(exc), logging.WARNING)
        return report

    if not marginal and _near_ambiguous_unwrap(report.crossings, b1, b2):
        report.verdict = INDETERMINATE
        report.note("Crossing next to an ambiguous phase unwrap, denser data is required", logging.WARNING)
        return report

    # stage 4
    if marginal:
        report.verdict = MARGINAL
    else:
        enc = report.encirclements
        report.verdict = STABLE if enc.N == -report.P_open_loop else UNSTABLE
        report.note("N_CC - N_ACC = {} - {} = {}, -P = {}".format(
            enc.N_CC, enc.N_ACC, enc.N, -report.P_open_loop))
        if report.verdict == UNSTABLE and report.P_open_loop > 0:
            report.note("Stability needs the ratio to cross CBs inside ERs anticlockwise "
                        "{} time(s) net, found {}".format(report.P_open_loop, -enc.N))

    if exact and cross_check:
        _cross_check(report, num_m, den_m, ratio, grid, tol_deg)
    return report


def _cross_check(report, num_m, den_m, ratio, grid, tol_deg):
    checks = report.cross_checks
    try:
        n_oracle = winding_number_oracle(ratio, grid)
        checks['winding_number'] = STABLE if n_oracle == -report.P_open_loop else UNSTABLE
        if report.encirclements is not None and n_oracle != report.encirclements.N:
            report.note("Winding oracle counts N = {}".format(n_oracle), logging.WARNING)
    except MarginalCondition as exc:
        checks['winding_number'] = MARGINAL
        report.note("Winding oracle: {}".format(exc))
    except StabilityError as exc:
        report.note("Winding oracle unavailable: {}".format(exc), logging.WARNING)
    try:
        checks['characteristic_roots'] = characteristic_roots_oracle(num_m.exact, den_m.exact).verdict
    except StabilityError as exc:
        report.note("Characteristic-roots oracle unavailable: {}".format(exc), logging.WARNING)
    if num_m.exact.relative_degree == den_m.exact.relative_degree:
        try:
            checks['inverse_nsc'] = assess_inverse(num_m, den_m, grid=grid, tol_deg=tol_deg).verdict
        except StabilityError as exc:
            report.note("Inverse view unavailable: {}".format(exc))

    if report.verdict in (STABLE, UNSTABLE):
        disagree = [k for k, v in checks.items() if v != report.verdict]
        if disagree:
            report.note("Cross-checks {} disagree with the rule verdict {}".format(
                ", ".join(disagree), report.verdict), logging.WARNING)
            report.verdict = INDETERMINATE


def assess_inverse(num_m, den_m, grid=None, tol_deg=None):
    """Same rule applied to the reciprocal ratio Z2/Z1.

    Its open-loop RHP poles are Z[Z1] + P[Z2]; the system is stable iff the
    reciprocal encircles (-1, j0) exactly -(Z[Z1] + P[Z2]) times.
    """
    if num_m.exact is not None and den_m.exact is not None:
        top, bottom = den_m.exact, num_m.exact
        if top.relative_degree != bottom.relative_degree:
            raise NonProperRatio("Reciprocal ratio {}/{} is not proper".format(den_m.id, num_m.id))
        limit = (top.num.leading / top.den.leading) / (bottom.num.leading / bottom.den.leading)
        if limit <= -1.0:
            # the curve meets the real axis left of -1 at w = infinity
            raise NonProperRatio("Reciprocal ratio {}/{} ends at {:.4g}".format(den_m.id, num_m.id, limit))
    orientation = RatioOrientation(den_m.id, num_m.id, 'user_forced', float('nan'), float('nan'))
    report = StabilityReport(orientation)
    f = _sample_grid(num_m, den_m, grid)
    b1, b2 = den_m.bode_on(f), num_m.bode_on(f)
    try:
        c_top, c_bottom = _census(num_m, b2), _census(den_m, b1)
    except UndeterminedBreaks as exc:
        report.note("Census refused: {}".format(exc))
        return report
    report.censuses = (c_bottom, c_top)
    report.P_open_loop = c_top.rhp_zeros + c_bottom.rhp_poles
    try:
        report.regions, report.crossings, report.encirclements = _encirclement_stage(b1, b2, tol_deg)
    except MarginalCondition as exc:
        report.verdict = MARGINAL
        report.note("Marginal: {}".format(exc))
        return report
    except UnresolvedZeroCrossing as exc:
        report.note("{}".format(exc))
        return report
    report.verdict = STABLE if report.encirclements.N == -report.P_open_loop else UNSTABLE
    return report


def interconnection_type(num_m, den_m, c_num=None, c_den=None):
    """'Z+Z', 'Z+Y' or 'Y+Y': the form in which each side is stable."""
    def side(model, c):
        as_given = c.rhp_poles == 0
        inverse = c.rhp_zeros == 0
        if model.kind == 'impedance':
            return 'Z' if as_given else ('Y' if inverse else '?')
        return 'Y' if as_given else ('Z' if inverse else '?')

    c_num = census(num_m.exact) if c_num is None else c_num
    c_den = census(den_m.exact) if c_den is None else c_den
    return '+'.join(sorted((side(num_m, c_num), side(den_m, c_den)), key='ZY?'.index))


#############################
def impedance_sum_criterion(a, b):
    """Stable iff Z1 + Z2 has no RHP zeros, given both Z1 and Z2 are stable."""
    for rf in (a, b):
        if rf.den.degree >= 1 and count_rhp_roots(rf.den).rhp > 0:
            raise PreconditionRhpPoles("'{}' has RHP poles; the sum criterion does not apply".format(rf.label))
    total = rat_arith('add', a, b)
    counts = count_rhp_roots(total.num) if total.num.degree >= 1 else None
    rhp = counts.rhp if counts is not None else 0
    if rhp > 0:
        verdict = UNSTABLE
    elif counts is not None and counts.on_axis > 0:
        verdict = MARGINAL
    else:
        verdict = STABLE
    try:
        # N[Z1+Z2] = Z[Z1+Z2] - P[Z1+Z2] = Z[Z1+Z2]
        winding = winding_number(total.num, total.den)
    except StabilityError as exc:
        logger.info("Winding of the sum unavailable: %s", exc)
        winding = None
    return SumVerdict(verdict, rhp, winding)


def characteristic_roots_oracle(a, b, axis_tol=None):
    """Closed-loop roots of num(a)*den(b) + num(b)*den(a)."""
    notes = []
    shared = _shared_roots(a.den, b.den)
    if shared:
        closed_rhp = [r for r, t in zip(shared, axis_tolerance(shared, axis_tol)) if r.real > -t]
        if closed_rhp:
            raise HiddenModeRisk(closed_rhp)
        notes.append("{} stable denominator root(s) shared by both sides".format(len(shared)))
        logger.info(notes[-1])
    char = a.num * b.den + b.num * a.den
    if char.degree < 1:
        return RootsVerdict(RootSet(np.zeros(0, dtype=complex), cfg.TOL.CLUSTER), STABLE, 0, notes)
    rs = poly_roots(char)
    tol = axis_tolerance(rs, axis_tol)
    re = rs.roots.real
    rhp = int(np.sum(re > tol))
    if rhp:
        verdict = UNSTABLE
    elif np.any(np.abs(re) <= tol):
        verdict = MARGINAL
    else:
        verdict = STABLE
    return RootsVerdict(rs, verdict, rhp, notes)


def _shared_roots(p, q):
    if p.degree < 1 or q.degree < 1:
        return []
    rp, rq = poly_roots(p).roots, poly_roots(q).roots
    tol = cfg.TOL.CLUSTER
    return [r for r in rp if np.min(np.abs(rq - r)) <= tol * max(1.0, abs(r))]
