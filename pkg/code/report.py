"""Machine-readable reports and plot data."""
from __future__ import division
from __future__ import print_function

import json
import logging
import math
from collections import OrderedDict

import numpy as np
import pandas as pd

from criteria import CriterionReport, Margins
from freq import wrap_phase
from miscc import __version__
from miscc.errors import IoError
from rhp_id import RhpCensus

logger = logging.getLogger(__name__)


def _num(x):
    """17 significant digits; non-finite values as strings, JSON has no inf."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float('%.17g' % x)


def _crossing(c):
    return OrderedDict([
        ('f_hz', _num(c.f)),
        ('kind', c.kind),
        ('at_zero', bool(c.at_zero)),
        ('boundary', int(c.boundary)),
        ('phase_diff_deriv_deg_hz', _num(c.phase_diff_deriv)),
        ('f_uncertainty_hz', _num(c.f_uncertainty)),
    ])


def _census(c):
    return OrderedDict([
        ('label', c.label),
        ('source', c.source),
        ('rhp_poles', c.rhp_poles),
        ('rhp_zeros', c.rhp_zeros),
        ('on_axis_poles', c.on_axis_poles),
        ('on_axis_zeros', c.on_axis_zeros),
    ])


def stability_dict(report):
    enc = report.encirclements
    o = report.orientation
    d = OrderedDict()
    d['verdict'] = report.verdict
    d['P_open_loop'] = report.P_open_loop
    d['N_CC'] = enc.N_CC if enc else None
    d['N_ACC'] = enc.N_ACC if enc else None
    d['N'] = enc.N if enc else None
    d['n_cc'] = enc.n_cc if enc else None
    d['n_cc0'] = enc.n_cc0 if enc else None
    d['n_acc'] = enc.n_acc if enc else None
    d['n_acc0'] = enc.n_acc0 if enc else None
    d['crossings'] = [_crossing(c) for c in report.crossings]
    d['exterior_regions'] = [[_num(r.f_lo), _num(r.f_hi)] for r in report.regions]
    d['orientation'] = OrderedDict([
        ('numerator', o.numerator_id),
        ('denominator', o.denominator_id),
        ('basis', o.basis),
        ('hf_slope_num_db_dec', _num(o.hf_slope_num_db_dec)),
        ('hf_slope_den_db_dec', _num(o.hf_slope_den_db_dec)),
    ])
    d['censuses'] = [_census(c) for c in report.censuses]
    d['cross_checks'] = OrderedDict(report.cross_checks)
    d['evidence_notes'] = list(report.evidence_notes)
    d['version'] = __version__
    return d


def criterion_dict(report):
    m = report.margins
    d = OrderedDict()
    d['criterion'] = report.kind
    d['pass'] = report.passed
    d['violations'] = [OrderedDict([('f_lo_hz', _num(lo)), ('f_hi_hz', _num(hi)), ('condition', cond)])
                       for lo, hi, cond in report.violations]
    d['margins'] = margins_dict(m)
    d['opac_phi_deg'] = [[_num(f), _num(p)] for f, p in report.opac_phi_deg]
    d['version'] = __version__
    return d


def margins_dict(m):
    return OrderedDict([
        ('GM_db', _num(m.GM_db)),
        ('gm', _num(m.gm)),
        ('PM_deg', _num(m.PM_deg)),
        ('gain_crossover_hz', [_num(f) for f in m.gain_crossover_hz]),
        ('phase_crossover_hz', [_num(f) for f in m.phase_crossover_hz]),
    ])


def census_dict(c):
    d = _census(c)
    d['breaks'] = [OrderedDict([
        ('f_hz', _num(bp.f_b)),
        ('kind', bp.kind),
        ('half_plane', bp.half_plane),
        ('slope_change_db_dec', _num(bp.slope_change_db_dec)),
        ('phase_step_deg', _num(bp.phase_step_deg)),
        ('zeta_est', _num(bp.zeta_est)),
        ('note', bp.note),
    ]) for bp in c.evidence if hasattr(bp, 'f_b')]
    d['version'] = __version__
    return d


def to_dict(report):
    if isinstance(report, (list, tuple)):
        return [to_dict(r) for r in report]
    if isinstance(report, CriterionReport):
        return criterion_dict(report)
    if isinstance(report, RhpCensus):
        return census_dict(report)
    if isinstance(report, Margins):
        d = margins_dict(report)
        d['version'] = __version__
        return d
    if isinstance(report, dict):
        return report
    return stability_dict(report)


def dumps(report):
    return json.dumps(to_dict(report), indent=2, allow_nan=False) + '\n'


def write_report(report, path):
    """Write a StabilityReport, CriterionReport or census as JSON text."""
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as fp:
            fp.write(dumps(report))
    except OSError as exc:
        raise IoError("Cannot write report to '{}': {}".format(path, exc))
    logger.info('Report written to %s', path)


#############################
def bode_frame(b1, b2, regions=(), crossings=()):
    """Both Bode series side by side, ER membership and CB hits marked."""
    f = b1.f
    in_er = np.zeros(len(f), dtype=bool)
    for r in regions:
        in_er |= (f > r.f_lo) & (f < r.f_hi)
    on_cb = np.zeros(len(f), dtype=bool)
    for c in crossings:
        on_cb[int(np.argmin(np.abs(f - c.f)))] = True
    return pd.DataFrame(OrderedDict([
        ('f_hz', f),
        ('mag_db_1', b1.mag_db),
        ('phase_deg_1', b1.phase_deg),
        ('mag_db_2', b2.mag_db),
        ('phase_deg_2', b2.phase_deg),
        ('phase_diff_wrapped_deg', wrap_phase(b1.phase_deg - b2.phase_deg)),
        ('in_er', in_er.astype(int)),
        ('on_cb', on_cb.astype(int)),
    ]))


def nyquist_frame(b1, b2):
    """Trajectory of Z1/Z2 for w > 0, built from the two Bode series."""
    ratio = 10.0 ** ((b1.mag_db - b2.mag_db) / 20.0) * np.exp(1j * np.deg2rad(b1.phase_deg - b2.phase_deg))
    return pd.DataFrame(OrderedDict([('f_hz', b1.f), ('re', ratio.real), ('im', ratio.imag)]))


def write_frame(df, path):
    try:
        df.to_csv(path, index=False, float_format='%.17g', encoding='utf-8', lineterminator='\n')
    except OSError as exc:
        raise IoError("Cannot write '{}': {}".format(path, exc))
    logger.info('Wrote %d rows to %s', len(df), path)
