"""Polynomials and rational functions with real coefficients in s.

Coefficients are stored in ascending order (``coeffs[k]`` multiplies s**k),
the convention of ``numpy.polynomial.polynomial``. Rational functions are
never simplified: a common factor of numerator and denominator stays where
it is, because cancelling it could hide a right-half-plane mode.
"""
from __future__ import division
from __future__ import print_function

import logging
from collections import namedtuple

import numpy as np
from numpy.polynomial import polynomial as P

from miscc.config import cfg
from miscc.errors import AllZeroRow, DivisorZero, NoRoots

logger = logging.getLogger(__name__)

RootCount = namedtuple('RootCount', ['rhp', 'on_axis', 'lhp'])


class Polynomial(object):
    __slots__ = ('coeffs',)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.ndim != 1:
            raise ValueError("Polynomial coefficients must be 1-D, got shape {}".format(c.shape))
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("Polynomial coefficients must be finite '{}'".format(c))
        c = P.polytrim(c)
        c.setflags(write=False)
        object.__setattr__(self, 'coeffs', c)

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0.0

    @property
    def leading(self):
        return self.coeffs[-1]

    def __call__(self, s):
        return P.polyval(s, self.coeffs)

    def deriv(self):
        if self.degree == 0:
            return Polynomial([0.0])
        return Polynomial(P.polyder(self.coeffs))

    def __add__(self, other):
        return Polynomial(P.polyadd(self.coeffs, _coeffs(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(P.polysub(self.coeffs, _coeffs(other)))

    def __rsub__(self, other):
        return Polynomial(P.polysub(_coeffs(other), self.coeffs))

    def __mul__(self, other):
        return Polynomial(P.polymul(self.coeffs, _coeffs(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        return "Polynomial({})".format(list(self.coeffs))


def _coeffs(p):
    if isinstance(p, Polynomial):
        return p.coeffs
    return np.atleast_1d(np.asarray(p, dtype=float))


class RationalFunction(object):
    """num(s) / den(s), kept exactly as composed."""
    __slots__ = ('num', 'den', 'label')

    def __init__(self, num, den=1.0, label=''):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero:
            raise DivisorZero("Denominator of '{}' is the zero polynomial".format(label))
        object.__setattr__(self, 'num', num)
        object.__setattr__(self, 'den', den)
        object.__setattr__(self, 'label', label)

    def __setattr__(self, key, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def relative_degree(self):
        return self.den.degree - self.num.degree

    @property
    def is_proper(self):
        return self.num.is_zero or self.relative_degree >= 0

    def __call__(self, s):
        return self.num(s) / self.den(s)

    def log_derivative(self, s):
        """F'(s) / F(s) = N'/N - D'/D."""
        return self.num.deriv()(s) / self.num(s) - self.den.deriv()(s) / self.den(s)

    def relabel(self, label):
        return RationalFunction(self.num, self.den, label)

    def __add__(self, other):
        return rat_arith('add', self, _as_rational(other))

    __radd__ = __add__

    def __sub__(self, other):
        return rat_arith('sub', self, _as_rational(other))

    def __rsub__(self, other):
        return rat_arith('sub', _as_rational(other), self)

    def __mul__(self, other):
        return rat_arith('mul', self, _as_rational(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return rat_arith('div', self, _as_rational(other))

    def __rtruediv__(self, other):
        return rat_arith('div', _as_rational(other), self)

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.label)

    def __repr__(self):
        return "RationalFunction(num={}, den={}, label='{}')".format(
            list(self.num.coeffs), list(self.den.coeffs), self.label)


def _as_rational(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x, 1.0)
    return RationalFunction([float(x)], 1.0)


#############################
def rat_arith(kind, a, b=None):
    """Exact cross-multiplied arithmetic, no cancellation.

    Args:
        kind: one of 'add', 'sub', 'mul', 'div', 'reciprocal'
        a: RationalFunction
        b: RationalFunction, unused for 'reciprocal'

    Return:
        RationalFunction
    """
    if kind == 'reciprocal':
        if a.num.is_zero:
            raise DivisorZero("Reciprocal of zero function '{}'".format(a.label))
        return RationalFunction(a.den, a.num, '1/' + a.label if a.label else '')
    if b is None:
        raise ValueError("Operation '{}' requires two operands".format(kind))
    if kind == 'add':
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den,
                                _label(a.label, '+', b.label))
    elif kind == 'sub':
        return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den,
                                _label(a.label, '-', b.label))
    elif kind == 'mul':
        return RationalFunction(a.num * b.num, a.den * b.den, _label(a.label, '*', b.label))
    elif kind == 'div':
        if b.num.is_zero:
            raise DivisorZero("Division by zero function '{}'".format(b.label))
        return RationalFunction(a.num * b.den, a.den * b.num, _label(a.label, '/', b.label))
    raise ValueError("Unknown arithmetic kind '{}'".format(kind))


def _label(*parts):
    if all(parts[i] for i in range(0, len(parts), 2)):
        return ''.join(parts)
    return ''


#############################
def _frequency_scale(c):
    """Geometric mean of the root magnitudes, ignoring roots at the origin."""
    nz = np.flatnonzero(c)
    lo, hi = nz[0], nz[-1]
    if hi == lo:
        return 1.0
    return (abs(c[lo]) / abs(c[hi])) ** (1.0 / (hi - lo))


def _scaled(c, sigma):
    """Coefficients of p(sigma * w) normalised to unit max magnitude."""
    cs = c * sigma ** np.arange(len(c))
    return cs / np.max(np.abs(cs))


def poly_roots(p, cluster_tol=None):
    """Roots of p with one Newton pass and enforced conjugate symmetry.

    The variable is rescaled by the geometric-mean root magnitude before the
    companion eigenvalues are taken; case-study polynomials span five decades.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.degree < 1:
        raise NoRoots("Polynomial of degree {} has no roots".format(p.degree))
    cluster_tol = cfg.TOL.CLUSTER if cluster_tol is None else cluster_tol

    c = p.coeffs
    sigma = _frequency_scale(c)
    roots = P.polyroots(_scaled(c, sigma)) * sigma

    dp = p.deriv()
    refined = np.empty_like(roots, dtype=complex)
    for i, r in enumerate(roots.astype(complex)):
        d = dp(r)
        if d != 0:
            step = p(r) / d
            cand = r - step
            if np.isfinite(cand) and abs(p(cand)) <= abs(p(r)):
                r = cand
        refined[i] = r
    return RootSet(_conjugate_close(refined, cluster_tol), cluster_tol)


def _conjugate_close(roots, tol):
    out = []
    upper, lower = [], []
    for r in roots:
        if abs(r.imag) <= tol * max(1.0, abs(r)):
            out.append(complex(r.real, 0.0))
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)
    lower = list(lower)
    for r in upper:
        if not lower:
            out.extend([r, r.conjugate()])
            continue
        j = int(np.argmin([abs(r - q.conjugate()) for q in lower]))
        q = lower.pop(j)
        m = 0.5 * (r + q.conjugate())
        out.extend([m, m.conjugate()])
    # a lone lower-half root cannot come from real coefficients
    out.extend(q.conjugate() for q in lower)
    out = np.array(out, dtype=complex)
    return out[np.lexsort((out.imag, out.real))]


class RootSet(object):
    __slots__ = ('roots', 'cluster_tol')

    def __init__(self, roots, cluster_tol):
        roots = np.asarray(roots, dtype=complex)
        roots.setflags(write=False)
        object.__setattr__(self, 'roots', roots)
        object.__setattr__(self, 'cluster_tol', cluster_tol)

    def __setattr__(self, key, value):
        raise AttributeError("RootSet is immutable")

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def max_abs(self):
        return float(np.max(np.abs(self.roots))) if len(self.roots) else 0.0

    def __repr__(self):
        return "RootSet({})".format(list(self.roots))


def axis_tolerance(roots, axis_tol=None):
    """Per-root distance from the jw axis still read as on it, axis_tol * max(1, |r|)."""
    axis_tol = cfg.TOL.AXIS if axis_tol is None else axis_tol
    r = roots.roots if isinstance(roots, RootSet) else np.asarray(roots, dtype=complex)
    return axis_tol * np.maximum(1.0, np.abs(r))


def count_rhp_roots(p, axis_tol=None):
    """Count roots right of, on, and left of the jw axis.

    Return:
        RootCount(rhp, on_axis, lhp)
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.is_zero:
        raise NoRoots("Zero polynomial has no finite root set")
    if p.degree == 0:
        return RootCount(0, 0, 0)
    rs = poly_roots(p)
    tol = axis_tolerance(rs, axis_tol)
    re = rs.roots.real
    rhp = int(np.sum(re > tol))
    on_axis = int(np.sum(np.abs(re) <= tol))
    return RootCount(rhp, on_axis, p.degree - rhp - on_axis)


def routh_rhp_count(p, eps=1e-9):
    """RHP root count from sign changes in the first Routh column.

    A zero leading element is replaced by ``eps`` (relative to the row scale);
    a row of zeros raises AllZeroRow with the auxiliary-polynomial degree.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.is_zero:
        raise NoRoots("Zero polynomial")
    n = p.degree
    if n == 0:
        return 0
    c = p.coeffs
    # descending powers of the rescaled variable
    a = _scaled(c, _frequency_scale(c))[::-1]
    width = n // 2 + 1
    prev2 = np.zeros(width)
    prev = np.zeros(width)
    prev2[:len(a[0::2])] = a[0::2]
    prev[:len(a[1::2])] = a[1::2]
    first = [prev2[0]]
    for i in range(1, n + 1):
        scale = max(np.max(np.abs(prev2)), np.max(np.abs(prev)))
        if np.all(np.abs(prev) <= 1e-12 * scale):
            raise AllZeroRow(n - i + 1)
        if abs(prev[0]) <= 1e-12 * scale:
            logger.debug('Routh row %d: zero pivot replaced by eps', i)
            prev = prev.copy()
            prev[0] = eps * scale
        first.append(prev[0])
        if i == n:
            break
        nxt = np.zeros(width)
        for j in range(width - 1):
            nxt[j] = (prev[0] * prev2[j + 1] - prev2[0] * prev[j + 1]) / prev[0]
        prev2, prev = prev, nxt
    signs = np.sign(first)
    return int(np.sum(signs[1:] != signs[:-1]))


def pade_delay(t_delay):
    """Third-order delay approximant with x = T*s:
    (1 - x/2 + x^2/8 - x^3/48) / (1 + x/2 + x^2/8 + x^3/48).
    """
    if t_delay < 0:
        raise ValueError("Delay must be non-negative, got '{}'".format(t_delay))
    t = float(t_delay)
    den = [1.0, t / 2, t ** 2 / 8, t ** 3 / 48]
    num = [1.0, -t / 2, t ** 2 / 8, -t ** 3 / 48]
    return RationalFunction(num, den, 'G_del')
