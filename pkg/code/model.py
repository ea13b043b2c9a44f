"""Small-signal admittances of the paralleled-inverter case study.

Inverter: LCL filter (L1 inverter side, Cf, L2 grid side) under a PR current
controller with a 1.5-sample control delay. Grid: Lg with a shunt Cg.
Load: Rd in series with Ld. Every composition is done with rat_arith and
nothing is cancelled.
"""
from __future__ import division
from __future__ import print_function

import logging

from miscc.config import cfg
from poly_rat import RationalFunction, pade_delay, rat_arith
from verdict import SubsystemModel

logger = logging.getLogger(__name__)


def _positive(name, value):
    if not value > 0:
        raise ValueError("Parameter {} must be positive, got '{}'".format(name, value))


class InverterParams(object):
    def __init__(self, L1, L2, Cf, Kp, Kr, omega1, omega_c, fs, Vdc=None):
        for name, value in (('L1', L1), ('L2', L2), ('Cf', Cf), ('omega1', omega1),
                            ('omega_c', omega_c), ('fs', fs)):
            _positive(name, value)
        if Kp < 0 or Kr < 0:
            raise ValueError("Controller gains must be non-negative, got Kp={} Kr={}".format(Kp, Kr))
        self.L1, self.L2, self.Cf = L1, L2, Cf
        self.Kp, self.Kr = Kp, Kr
        self.omega1, self.omega_c = omega1, omega_c
        self.fs = fs
        # recorded only, the admittance does not depend on it
        self.Vdc = Vdc

    @property
    def t_delay(self):
        return 1.5 / self.fs

    @classmethod
    def from_cfg(cls, section, overrides=None):
        s = dict(section)
        s.update(overrides or {})
        return cls(s['L1'], s['L2'], s['CF'], s['KP'], s['KR'], s['OMEGA1'], s['OMEGA_C'], s['FS'],
                   s.get('VDC'))


class GridParams(object):
    def __init__(self, Lg, Cg, Vgrms_ll=None):
        _positive('Lg', Lg)
        if Cg < 0:
            raise ValueError("Parameter Cg must be non-negative, got '{}'".format(Cg))
        self.Lg, self.Cg = Lg, Cg
        self.Vgrms_ll = Vgrms_ll

    @classmethod
    def from_cfg(cls, section):
        return cls(section.LG, section.CG, section.get('VGRMS_LL'))


class LoadParams(object):
    def __init__(self, Rd, Ld):
        _positive('Rd', Rd)
        if Ld < 0:
            raise ValueError("Parameter Ld must be non-negative, got '{}'".format(Ld))
        self.Rd, self.Ld = Rd, Ld

    @classmethod
    def from_cfg(cls, section):
        return cls(section.RD, section.LD)


class ScenarioSpec(object):
    """Scenario 1: inverter 2 against inverter 1 + grid. Scenario 2 adds the load to inverter 2."""

    def __init__(self, scenario, inverter1, inverter2, grid, load):
        assert scenario in (1, 2), "Required scenario 1 or 2 but {} is given".format(scenario)
        self.scenario = scenario
        self.inverter1 = inverter1
        self.inverter2 = inverter2
        self.grid = grid
        self.load = load

    @classmethod
    def from_cfg(cls, scenario=None):
        sc = cfg.SCENARIO
        scenario = sc.ID if scenario is None else scenario
        inv1 = InverterParams.from_cfg(sc.INVERTER)
        inv2 = InverterParams.from_cfg(sc.INVERTER, sc.INVERTER2)
        return cls(scenario, inv1, inv2, GridParams.from_cfg(sc.GRID), LoadParams.from_cfg(sc.LOAD))


#############################
def lcl_admittances(p):
    """Y_o and Y_m of the LCL filter with ideal elements.

    Y_o = (Z_L1 + Z_Cf) / (Z_Cf Z_L1 + Z_L1 Z_L2 + Z_Cf Z_L2) and
    Y_m = Z_Cf / (same), both multiplied through by s*Cf, so they share the
    denominator D = L1 L2 Cf s^3 + (L1 + L2) s.
    """
    den = [0.0, p.L1 + p.L2, 0.0, p.L1 * p.L2 * p.Cf]
    y_o = RationalFunction([1.0, 0.0, p.L1 * p.Cf], den, 'Y_o')
    y_m = RationalFunction([1.0], den, 'Y_m')
    return y_o, y_m


def pr_controller(p):
    """G_c = Kp + 2 Kr wc s / (s^2 + 2 wc s + w1^2)."""
    kp = RationalFunction([p.Kp], [1.0])
    resonant = RationalFunction([0.0, 2 * p.Kr * p.omega_c], [p.omega1 ** 2, 2 * p.omega_c, 1.0])
    return rat_arith('add', kp, resonant).relabel('G_c')


def inverter_admittance(p):
    """Y_io = Y_o / (1 + G_c G_del Y_m).

    Y_o and Y_m share D, so the loop is closed on their numerators:
    Y_io = N_o / (D + G_c G_del N_m). D is not duplicated top and bottom.
    """
    y_o, y_m = lcl_admittances(p)
    loop = rat_arith('mul', pr_controller(p), pade_delay(p.t_delay))
    loop = rat_arith('mul', loop, RationalFunction(y_m.num, [1.0]))
    closed = rat_arith('add', RationalFunction(y_o.den, [1.0]), loop)
    y_io = rat_arith('div', RationalFunction(y_o.num, [1.0]), closed)
    logger.debug("Y_io degrees %d/%d", y_io.num.degree, y_io.den.degree)
    return y_io.relabel('Y_io')


def grid_admittance(g):
    """Y_g = s Cg + 1 / (s Lg)."""
    y = rat_arith('add', RationalFunction([0.0, g.Cg], [1.0]), RationalFunction([1.0], [0.0, g.Lg]))
    return y.relabel('Y_g')


def load_admittance(l):
    """Y_d = 1 / (Rd + s Ld)."""
    return RationalFunction([1.0], [l.Rd, l.Ld], 'Y_d')


def build_component_admittance(kind, params):
    if kind == 'inverter':
        return inverter_admittance(params)
    elif kind == 'grid':
        return grid_admittance(params)
    elif kind == 'load':
        return load_admittance(params)
    raise ValueError("Unknown component kind '{}'".format(kind))


def aggregate_parallel(admittances, label=''):
    """Sum of paralleled admittances, uncancelled."""
    admittances = list(admittances)
    assert admittances, "Nothing to aggregate"
    total = admittances[0]
    for y in admittances[1:]:
        total = rat_arith('add', total, y)
    return total.relabel(label) if label else total


def build_scenario(spec):
    """Y_to1 and Y_to2 seen at the point of common connection.

    Return:
        dict with SubsystemModel entries 'Y_to1' and 'Y_to2'
    """
    y_inv1 = inverter_admittance(spec.inverter1)
    y_inv2 = inverter_admittance(spec.inverter2)
    y_to2 = aggregate_parallel([y_inv1, grid_admittance(spec.grid)], 'Y_to2')
    if spec.scenario == 1:
        y_to1 = y_inv2.relabel('Y_to1')
    else:
        y_to1 = aggregate_parallel([y_inv2, load_admittance(spec.load)], 'Y_to1')
    logger.info("Scenario %d: Y_to1 %d/%d, Y_to2 %d/%d", spec.scenario,
                y_to1.num.degree, y_to1.den.degree, y_to2.num.degree, y_to2.den.degree)
    return {
        'Y_to1': SubsystemModel('Y_to1', 'admittance', exact=y_to1),
        'Y_to2': SubsystemModel('Y_to2', 'admittance', exact=y_to2),
    }
