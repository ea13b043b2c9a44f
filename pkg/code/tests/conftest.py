import copy
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.realpath(__file__))))

from freq import FrequencyGrid  # noqa: E402
from miscc.config import cfg  # noqa: E402
from poly_rat import Polynomial, RationalFunction  # noqa: E402
from verdict import SubsystemModel, assess_stability  # noqa: E402

SUITE_GRID = FrequencyGrid(1e-3, 1e5, 200)
SUITE_SIZE = 500


@pytest.fixture(autouse=True)
def restore_cfg():
    saved = copy.deepcopy(cfg)
    yield
    cfg.clear()
    cfg.update(saved)


@pytest.fixture
def rng():
    return np.random.default_rng(47)


def random_factors(gen, degree, rhp_share=0.0, zeta=(0.2, 1.0)):
    """Product of (1 + s/w) and (1 + 2 zeta s/w + s^2/w^2) terms, w in [1, 1000] rad/s."""
    p, n = Polynomial([1.0]), 0
    while n < degree:
        w = 10.0 ** gen.uniform(0, 3)
        sign = -1.0 if gen.random() < rhp_share else 1.0
        if degree - n >= 2 and gen.random() < 0.5:
            z = gen.uniform(*zeta)
            p = p * Polynomial([1.0, sign * 2 * z / w, 1.0 / w ** 2])
            n += 2
        else:
            p = p * Polynomial([1.0, sign / w])
            n += 1
    return p


def random_subsystem(gen, id):
    """Stable subsystem of degree <= 6; a quarter of its zeros in the RHP."""
    n = int(gen.integers(1, 7))
    m = int(gen.integers(0, n + 1))
    den = random_factors(gen, n)
    num = random_factors(gen, m, rhp_share=0.25)
    gain = 10.0 ** gen.uniform(-1, 2) * (1.0 if gen.random() < 0.8 else -1.0)
    return SubsystemModel(id, 'impedance', exact=RationalFunction(gain * num.coeffs, den.coeffs, id))


@pytest.fixture(scope='session')
def random_pairs():
    """(a, b, rule-only report) for the randomized rule-vs-oracle suite."""
    gen = np.random.default_rng(47)
    pairs = []
    for _ in range(SUITE_SIZE):
        a, b = random_subsystem(gen, 'Z1'), random_subsystem(gen, 'Z2')
        pairs.append((a, b, assess_stability(a, b, grid=SUITE_GRID, cross_check=False)))
    return pairs
