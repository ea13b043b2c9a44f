"""Forbidden-region impedance specifications and classical margins.

Each criterion forbids a region of the Z1/Z2 plane. The checks are
pointwise on the shared frequency grid and the failing samples are merged
into intervals. Boundaries count as violations. All of them are sufficient
conditions only, and only meaningful when Z1/Z2 has no open-loop RHP poles.
"""
from __future__ import division
from __future__ import print_function

import logging
import math

import numpy as np

from encircle import exterior_regions, locate_phase_crossings, zero_crossing
from freq import check_same_grid, wrap_phase
from miscc.config import cfg
from miscc.errors import InvalidSpec, OpenLoopRhpPoles, StabilityError

logger = logging.getLogger(__name__)

KINDS = ('middlebrook', 'small_gain', 'gmpm', 'opac', 'nssc', 'mpc')


def db2mag(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 20.0)


class Margins(object):
    def __init__(self, GM_db, PM_deg, gain_crossover_hz, phase_crossover_hz):
        self.GM_db = GM_db
        self.gm = float(db2mag(GM_db)) if np.isfinite(GM_db) else float('inf')
        self.PM_deg = PM_deg
        self.gain_crossover_hz = sorted(gain_crossover_hz)
        self.phase_crossover_hz = sorted(phase_crossover_hz)

    def __repr__(self):
        return "Margins(GM={:.4g} dB, PM={:.4g} deg)".format(self.GM_db, self.PM_deg)


class ForbiddenRegionSpec(object):
    def __init__(self, kind, GM_db=None, PM_deg=None, Ms=None):
        if kind not in KINDS:
            raise InvalidSpec("Unknown criterion '{}'".format(kind))
        self.kind = kind
        self.GM_db = GM_db
        self.PM_deg = PM_deg
        if kind in ('middlebrook', 'gmpm', 'opac') or (kind == 'mpc' and Ms is None):
            if GM_db is None or not GM_db > 0:
                raise InvalidSpec("Criterion '{}' needs GM_db > 0, got '{}'".format(kind, GM_db))
        if kind == 'gmpm' and (PM_deg is None or not 0 < PM_deg < 180):
            raise InvalidSpec("Criterion 'gmpm' needs 0 < PM_deg < 180, got '{}'".format(PM_deg))
        if kind == 'mpc':
            if Ms is None:
                Ms = 1.0 / mpc_radius(float(db2mag(GM_db)))
            if not Ms > 1:
                raise InvalidSpec("Criterion 'mpc' needs Ms > 1, got '{}'".format(Ms))
        self.Ms = Ms

    @property
    def gm(self):
        return float(db2mag(self.GM_db))

    def __repr__(self):
        return "ForbiddenRegionSpec({}, GM={}, PM={}, Ms={})".format(self.kind, self.GM_db, self.PM_deg, self.Ms)


class CriterionReport(object):
    def __init__(self, kind, violations, margins, opac_phi_deg=()):
        self.kind = kind
        self.violations = violations
        self.margins = margins
        self.opac_phi_deg = list(opac_phi_deg)

    @property
    def passed(self):
        return not self.violations

    def __repr__(self):
        return "CriterionReport({}, {}, {} violation(s))".format(
            self.kind, "pass" if self.passed else "fail", len(self.violations))


def mpc_radius(gm):
    """Radius 1/Ms = 1 - 1/gm of the disc forbidden around (-1, j0)."""
    if not gm > 1:
        raise InvalidSpec("Real-coordinate gain margin must exceed 1, got '{}'".format(gm))
    return 1.0 - 1.0 / gm


#############################
def _margins(b1, b2):
    phase_x = locate_phase_crossings(b1, b2)
    phase_hz = [f for f, _, _, _ in phase_x]
    GM = min([-mag for _, _, mag, _ in phase_x], default=float('inf'))

    gain_hz = []
    for r in exterior_regions(b1, b2):
        gain_hz.extend(x for x in (r.f_lo, r.f_hi) if b1.f[0] < x < b1.f[-1])
    x = np.log10(b1.f)
    pms = []
    for f in gain_hz:
        # interpolate on the unwrapped difference, then wrap
        phi = np.interp(math.log10(f), x, b1.phase_deg - b2.phase_deg)
        pms.append(float(wrap_phase(phi + 180.0)))
    PM = min(pms, default=float('inf'))
    return Margins(GM, PM, gain_hz, phase_hz)


def compute_margins(b1, b2, p_open_loop=0):
    """GM (most restrictive phase crossover) and PM of Z1/Z2."""
    if p_open_loop:
        raise OpenLoopRhpPoles("Classical margins undefined with {} open-loop RHP pole(s)".format(p_open_loop))
    check_same_grid(b1, b2)
    return _margins(b1, b2)


def _intervals(f, mask, condition):
    out = []
    idx = np.flatnonzero(mask)
    if not len(idx):
        return out
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    ends = np.concatenate([idx[breaks], [idx[-1]]])
    for s, e in zip(starts, ends):
        out.append((float(f[s]), float(f[e]), condition))
    return out


def check_criterion(spec, b1, b2, tol_deg=None):
    """Check one forbidden-region criterion on Z1/Z2 sampled on a shared grid."""
    f = check_same_grid(b1, b2)
    tol_deg = cfg.TOL.DEG if tol_deg is None else tol_deg
    md = b1.mag_db - b2.mag_db
    wrapped = wrap_phase(b1.phase_deg - b2.phase_deg)
    ratio = db2mag(md) * np.exp(1j * np.deg2rad(wrapped))
    kind = spec.kind
    phi = []

    if kind == 'middlebrook':
        violations = _intervals(f, md >= -spec.GM_db, 'magnitude')
    elif kind == 'small_gain':
        violations = _intervals(f, md >= 0, 'magnitude')
    elif kind == 'gmpm':
        mask = (md >= -spec.GM_db) & (np.abs(wrapped) >= 180.0 - spec.PM_deg)
        violations = _intervals(f, mask, 'magnitude+phase')
    elif kind == 'opac':
        violations = _intervals(f, ratio.real <= -1.0 / spec.gm, 'real_part')
        arg = (1.0 / spec.gm) / db2mag(md)
        ok = arg <= 1.0
        phi = [(float(x), float(np.degrees(np.arcsin(a)))) for x, a in zip(f[ok], arg[ok])]
    elif kind == 'nssc':
        mask = (md >= 0) & (np.abs(wrapped) >= 180.0 - tol_deg)
        violations = _intervals(f, mask, 'magnitude+phase')
        for f_star, _, mag, _ in locate_phase_crossings(b1, b2):
            if mag >= 0 and not any(lo <= f_star <= hi for lo, hi, _ in violations):
                violations.append((f_star, f_star, 'crossing'))
        try:
            at_zero = zero_crossing(b1, b2, exterior_regions(b1, b2), tol_deg) is not None
        except StabilityError:
            at_zero = True
        if at_zero and not any(lo <= f[0] for lo, _, _ in violations):
            violations.append((0.0, 0.0, 'crossing'))
        violations.sort(key=lambda v: v[0])
    elif kind == 'mpc':
        violations = _intervals(f, np.abs(1.0 + ratio) <= 1.0 / spec.Ms, 'sensitivity')
    else:
        raise InvalidSpec("Unknown criterion '{}'".format(kind))

    report = CriterionReport(kind, violations, _margins(b1, b2), phi)
    logger.info("%s: %s", kind, report)
    return report


def spec_from_cfg(kind, GM_db=None, PM_deg=None):
    """ForbiddenRegionSpec with the configured GM/PM filled in where needed."""
    GM_db = cfg.CRITERIA.GM_DB if GM_db is None else GM_db
    PM_deg = cfg.CRITERIA.PM_DEG if PM_deg is None else PM_deg
    if kind in ('small_gain', 'nssc'):
        return ForbiddenRegionSpec(kind)
    return ForbiddenRegionSpec(kind, GM_db=GM_db, PM_deg=PM_deg if kind == 'gmpm' else None)
