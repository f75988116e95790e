"""
Finite-difference operators as exact combinations of translations.

An operator over ``s`` symbolic steps ``h_1..h_s`` is a finite map from
shift vectors (tuples of :class:`~fractions.Fraction`, the shift being
``sum_r c_r h_r``) to rational coefficients.  Composition is convolution
of these maps, so every identity between operators can be checked by
exact equality.  Real step values enter only in :func:`apply` and
:func:`apply_sampled`.
"""

from fractions import Fraction
from itertools import product
from math import comb

import numpy as np

from .errors import InputError
from .exppoly import ExpPolynomial, translate

MAX_DJOKOVIC_STEPS = 8


def _shift(vec):
    return tuple(Fraction(c) for c in vec)


class DifferenceOp:
    """Immutable finite linear combination of translations ``tau_v``."""

    __slots__ = ("s", "_terms")

    def __init__(self, s, terms=()):
        if s < 1:
            raise InputError("operators need at least one symbolic step")
        if isinstance(terms, dict):
            terms = terms.items()
        acc = {}
        for shift, coef in terms:
            shift = _shift(shift)
            if len(shift) != s:
                raise InputError("shift %r has length %d, expected %d" % (shift, len(shift), s))
            acc[shift] = acc.get(shift, Fraction(0)) + Fraction(coef)
        self.s = s
        self._terms = {k: v for k, v in acc.items() if v != 0}

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, s):
        return cls(s, {(0,) * s: 1})

    @classmethod
    def translation(cls, shift):
        shift = _shift(shift)
        return cls(len(shift), {shift: 1})

    @classmethod
    def along(cls, shift):
        """``Delta_v = tau_v - 1`` for a shift vector ``v``."""
        shift = _shift(shift)
        s = len(shift)
        return cls(s, [(shift, 1), ((0,) * s, -1)])

    # -- structure ----------------------------------------------------------

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient_sum(self):
        return sum(self._terms.values(), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, DifferenceOp):
            return NotImplemented
        return self.s == other.s and self._terms == other._terms

    def __hash__(self):
        return hash((self.s, frozenset(self._terms.items())))

    def __repr__(self):
        return "DifferenceOp(%s)" % self.describe()

    def describe(self):
        """Human-readable ``{shift: coefficient}`` map, e.g. ``{'2*h1': '1'}``."""
        return {format_shift(k): str(v) for k, v in self.items()}

    # -- algebra ------------------------------------------------------------

    def _check(self, other):
        if self.s != other.s:
            raise InputError("operators over %d and %d steps cannot be combined" % (self.s, other.s))

    def __add__(self, other):
        self._check(other)
        return DifferenceOp(self.s, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return DifferenceOp(self.s, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, DifferenceOp):
            return compose(self, c)
        return DifferenceOp(self.s, {k: v * Fraction(c) for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        return compose(self, other)

    def __pow__(self, m):
        return power(self, m)


def format_shift(vec):
    parts = []
    for r, c in enumerate(vec, start=1):
        if c == 0:
            continue
        name = "h%d" % r
        if c == 1:
            parts.append(name)
        elif c == -1:
            parts.append("-" + name)
        else:
            parts.append("%s*%s" % (c, name))
    return "+".join(parts).replace("+-", "-") or "0"


def delta(step_index, s=None):
    """``Delta_{h_i} = tau_{h_i} - 1`` (``step_index`` is 0-based)."""
    s = step_index + 1 if s is None else s
    if not 0 <= step_index < s:
        raise InputError("step index %d out of range for %d steps" % (step_index, s))
    v = [0] * s
    v[step_index] = 1
    return DifferenceOp.along(v)


def compose(a, b):
    """Product of two operators; commutative since translations commute."""
    a._check(b)
    acc = {}
    for ka, va in a._terms.items():
        for kb, vb in b._terms.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            acc[k] = acc.get(k, Fraction(0)) + va * vb
    return DifferenceOp(a.s, acc)


def power(a, m):
    if m < 0:
        raise InputError("negative operator power %d" % m)
    out = DifferenceOp.identity(a.s)
    base = a
    while m:
        if m & 1:
            out = compose(out, base)
        m >>= 1
        if m:
            base = compose(base, base)
    return out


def mixed(indices, s=None):
    """``Delta_{h_i1 h_i2 ...} = prod (tau_{h_i} - 1)`` over 0-based ``indices``."""
    indices = list(indices)
    if not indices:
        raise InputError("mixed difference needs at least one step")
    s = max(indices) + 1 if s is None else s
    out = DifferenceOp.identity(s)
    for i in indices:
        out = compose(out, delta(i, s))
    return out


def djokovic_terms(s):
    """Unreduced terms ``(coefficient, shift)`` of the Djokovic expansion.

    Each sign pattern ``eps`` in ``{0,1}^s`` contributes
    ``(-1)^|eps| tau_beta Delta_alpha^s`` with ``beta = sum eps_r h_r`` and
    ``alpha = -sum eps_r h_r / r``; the ``s + 1`` binomial terms of every
    pattern are listed separately, zero coefficients included.
    """
    if not 1 <= s <= MAX_DJOKOVIC_STEPS:
        raise InputError("djokovic expansion supports 1 <= s <= %d" % MAX_DJOKOVIC_STEPS)
    out = []
    for eps in product((0, 1), repeat=s):
        sign = -1 if sum(eps) % 2 else 1
        alpha = [Fraction(-e, r + 1) for r, e in enumerate(eps)]
        beta = [Fraction(e) for e in eps]
        for k in range(s + 1):
            coef = sign * comb(s, k) * (-1) ** (s - k)
            shift = tuple(b + k * a for a, b in zip(alpha, beta))
            out.append((Fraction(coef), shift))
    return out


def djokovic_rhs(s):
    return DifferenceOp(s, [(shift, c) for c, shift in djokovic_terms(s)])


def djokovic_check(s):
    """``(equal, terms_before_cancel)`` for the expansion against ``mixed(0..s-1)``."""
    terms = djokovic_terms(s)
    rhs = DifferenceOp(s, [(shift, c) for c, shift in terms])
    return rhs == mixed(range(s), s), len(terms)


def shift_value(shift, steps):
    return float(sum(float(c) * float(h) for c, h in zip(shift, steps) if c != 0))


def _check_steps(op, steps):
    steps = list(steps)
    if len(steps) != op.s:
        raise InputError("operator has %d steps but %d values were given" % (op.s, len(steps)))
    return steps


def apply(op, f, steps, tol=None):
    """``sum_v c_v f(t + v . steps)`` as an exponential polynomial.

    With ``tol`` set, coefficients below ``tol`` times the rounding scale
    ``sum |c_v| * max|coeff(tau_v f)|`` are dropped.
    """
    steps = _check_steps(op, steps)
    out = []
    scale = 0.0
    for shift, c in op.items():
        g = translate(f, shift_value(shift, steps))
        scale += abs(float(c)) * g.max_abs_coeff()
        out.extend((lam, p.scale(float(c))) for lam, p in g.terms)
    result = ExpPolynomial(out, f.tol)
    if tol is not None:
        result = result.chop(tol * scale)
    return result


def apply_sampled(op, f, steps, grid):
    """Pointwise ``sum_v c_v f(t + v . steps)`` for each ``t`` in ``grid``."""
    steps = _check_steps(op, steps)
    grid = np.asarray(grid, dtype=np.float64)
    total = None
    for shift, c in op.items():
        vals = _call(f, grid + shift_value(shift, steps))
        term = float(c) * vals
        total = term if total is None else total + term
    if total is None:
        return np.zeros_like(grid)
    return total


def _call(f, x):
    y = np.asarray(f(x))
    if y.shape != x.shape:
        y = np.asarray(np.vectorize(f)(x))
    return y
