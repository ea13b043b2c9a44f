from __future__ import division
from __future__ import print_function

import logging
import math

import numpy as np
import yaml
from easydict import EasyDict as edict

logger = logging.getLogger(__name__)

__C = edict()
cfg = __C

__C.CONFIG_NAME = ''

# Frequency sweep used whenever a model has to be sampled
__C.FREQ = edict()
__C.FREQ.F_MIN = 1.0
__C.FREQ.F_MAX = 1.0e+5
__C.FREQ.POINTS_PER_DECADE = 400

# Numerical tolerances
__C.TOL = edict()
__C.TOL.AXIS = 1e-6  # rad/s, relative to the root magnitude when it exceeds 1
__C.TOL.CLUSTER = 1e-6  # relative, root multiplicity / shared-root matching
__C.TOL.DEG = 1.0  # phase tolerance on the +-180 deg condition
__C.TOL.CRITICAL_DB = 1e-4  # |ratio| this close to 0 dB at a crossing is critical
__C.TOL.TANGENT_DEG_HZ = 1e-4
__C.TOL.UNWRAP_FLAG_DEG = 170.0
__C.TOL.REFINE_HZ = 1e-9  # relative bisection tolerance
__C.TOL.MODEL_DB = 0.1  # sampled-vs-exact consistency of a subsystem
__C.TOL.MODEL_DEG = 1.0
# sampled data: phase at w = 0 extrapolated from the lowest DC_FIT_DECADES
__C.TOL.DC_FIT_DECADES = 0.1
__C.TOL.DC_SNAP_DEG = 15.0  # a DC phase is a multiple of 90 deg

# Break-point identification on Bode data
__C.RHP = edict()
__C.RHP.WINDOW_DECADES = 0.5
__C.RHP.SLOPE_TOL_DB_DEC = 6.0
__C.RHP.PHASE_STEP_TOL_DEG = 30.0
__C.RHP.MIN_POINTS_PER_DECADE = 100
__C.RHP.PEAK_DEG_DEC = 20.0
__C.RHP.RESONANCE_DB = 3.0

# Proper-ratio selection
__C.ORIENT = edict()
__C.ORIENT.SLOPE_TIE_DB_DEC = 2.0
__C.ORIENT.MAG_TIE_DB = 1e-6

# Winding-number oracle
__C.ORACLE = edict()
__C.ORACLE.SPAN = 100.0  # sweep up to SPAN x largest break
__C.ORACLE.POINTS_PER_DECADE = 200
__C.ORACLE.MAX_STEP_DEG = 20.0
__C.ORACLE.MAX_REFINE = 40

# Forbidden-region criteria
__C.CRITERIA = edict()
__C.CRITERIA.KINDS = ['middlebrook', 'small_gain', 'gmpm', 'opac', 'nssc', 'mpc']
__C.CRITERIA.GM_DB = 6.0
__C.CRITERIA.PM_DEG = 30.0

# Paralleled-inverter case study
__C.SCENARIO = edict()
__C.SCENARIO.ID = 1

__C.SCENARIO.INVERTER = edict()
__C.SCENARIO.INVERTER.L1 = 1.8e-3
__C.SCENARIO.INVERTER.L2 = 0.9e-3
__C.SCENARIO.INVERTER.CF = 10e-6
__C.SCENARIO.INVERTER.KP = 8.0
__C.SCENARIO.INVERTER.KR = 500.0
__C.SCENARIO.INVERTER.OMEGA1 = 2 * math.pi * 50
__C.SCENARIO.INVERTER.OMEGA_C = 3.14
__C.SCENARIO.INVERTER.FS = 10e3
__C.SCENARIO.INVERTER.VDC = 730.0

# Overrides for the second inverter, empty means identical to the first
__C.SCENARIO.INVERTER2 = edict()

__C.SCENARIO.GRID = edict()
__C.SCENARIO.GRID.LG = 1e-3
__C.SCENARIO.GRID.CG = 2e-6
__C.SCENARIO.GRID.VGRMS_LL = 400.0

__C.SCENARIO.LOAD = edict()
__C.SCENARIO.LOAD.RD = 10.0
__C.SCENARIO.LOAD.LD = 1e-3


def _merge_a_into_b(a, b, open_keys=False):
    """Merge config dictionary a into config dictionary b, clobbering the
    options in b whenever they are also specified in a.
    """
    if type(a) is not edict:
        return

    for k, v in a.items():
        # a must specify keys that are in b
        if k not in b:
            if not open_keys:
                raise KeyError('{} is not a valid config key'.format(k))
            b[k] = v
            continue

        # the types must match, too
        old_type = type(b[k])
        if old_type is not type(v):
            if isinstance(b[k], np.ndarray):
                v = np.array(v, dtype=b[k].dtype)
            elif old_type is float and type(v) is int:
                v = float(v)
            else:
                raise ValueError(('Type mismatch ({} vs. {}) '
                                  'for config key: {}').format(type(b[k]),
                                                               type(v), k))

        # recursively merge dicts
        if type(v) is edict:
            try:
                # INVERTER2 starts empty and takes any INVERTER key
                _merge_a_into_b(a[k], b[k], open_keys=(k == 'INVERTER2'))
            except (KeyError, ValueError):
                logger.error('Error under config key: {}'.format(k))
                raise
        else:
            b[k] = v


def cfg_from_file(filename):
    """Load a config file and merge it into the default options."""
    with open(filename, 'r') as f:
        yaml_cfg = edict(yaml.safe_load(f) or {})

    _merge_a_into_b(yaml_cfg, __C)
    logger.info('Config merged from %s', filename)


def _plain(d):
    if isinstance(d, dict):
        return {k: _plain(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_plain(v) for v in d]
    return d


def cfg_to_file(filename, config=None):
    """Dump a config (the global one by default) as YAML."""
    config = __C if config is None else config
    with open(filename, 'w') as f:
        yaml.safe_dump(_plain(config), f, default_flow_style=False, sort_keys=False)
