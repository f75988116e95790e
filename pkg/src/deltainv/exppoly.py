"""
Exponential polynomials ``sum_lambda p_lambda(t) exp(lambda t)``.

Values are immutable.  Frequencies are complex numbers; two frequencies
closer than the merge radius (``tol``) are treated as the same one, and
a frequency within ``tol`` of zero is stored as exactly ``0``.

The ambient space with frequencies ``(lambda_i, m_i)`` has the ordered
basis ``t^k exp(lambda_i t)``, ``k = 0..m_i - 1``, block by block, with the
zero-frequency (pure polynomial) block always first.
"""

import cmath
import json
from collections import namedtuple
from math import comb

import numpy as np

from .algebra import DEFAULT_TOL
from .errors import ExpOverflowError, InputError, NotInAmbientError

__all__ = [
    "Polynomial",
    "ExpPolynomial",
    "AmbientSpace",
    "RealExpPolynomial",
    "RealTerm",
    "evaluate",
    "translate",
    "coordinates",
    "from_coordinates",
    "hull",
    "realify",
    "parse_complex",
]


def parse_complex(value):
    """Read a JSON scalar: a number or a ``[re, im]`` pair."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InputError("complex value must be [re, im], got %r" % (value,))
        re, im = value
        return complex(float(re), float(im))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError("not a number: %r" % (value,))
    return complex(float(value), 0.0)


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


class Polynomial:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``t**k``.

    Coefficients may be any numbers supporting field arithmetic
    (``complex``, ``float``, :class:`~fractions.Fraction`); exact
    zeros at the top are stripped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Polynomial(%r)" % (list(self.coeffs),)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        if s == 0:
            return Polynomial()
        return Polynomial(s * c for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = scale

    def shift(self, h):
        """The polynomial ``t -> p(t + h)`` via the binomial theorem."""
        if h == 0 or self.is_zero():
            return self
        n = len(self.coeffs)
        powers = [1] * n
        for k in range(1, n):
            powers[k] = powers[k - 1] * h
        out = []
        for j in range(n):
            out.append(sum(self.coeffs[k] * comb(k, j) * powers[k - j] for k in range(j, n)))
        return Polynomial(out)

    def chop(self, thresh):
        return Polynomial(0 if abs(c) <= thresh else c for c in self.coeffs)

    def max_abs(self):
        return max((abs(c) for c in self.coeffs), default=0.0)


def _snap_zero(lam, tol):
    lam = complex(lam)
    return 0j if abs(lam) <= tol else lam


def _freq_key(lam):
    return (lam != 0, lam.real, lam.imag)


class ExpPolynomial:
    """Finite sum ``sum p_lambda(t) exp(lambda t)`` with distinct frequencies.

    ``terms`` may be a mapping or an iterable of ``(lambda, coeffs)`` pairs
    where ``coeffs`` is a :class:`Polynomial` or a coefficient sequence.
    Terms whose frequencies lie within ``tol`` of each other are merged;
    zero polynomials are dropped.
    """

    __slots__ = ("terms", "tol")

    def __init__(self, terms=(), tol=DEFAULT_TOL):
        if isinstance(terms, dict):
            terms = terms.items()
        merged = []
        for lam, p in terms:
            lam = _snap_zero(lam, tol)
            if not isinstance(p, Polynomial):
                p = Polynomial(complex(c) for c in p)
            for idx, (mu, q) in enumerate(merged):
                if abs(mu - lam) <= tol:
                    merged[idx] = (mu, q + p)
                    break
            else:
                merged.append((lam, p))
        merged = [(lam, p) for lam, p in merged if not p.is_zero()]
        merged.sort(key=lambda lp: _freq_key(lp[0]))
        self.terms = tuple(merged)
        self.tol = tol

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def polynomial(cls, coeffs):
        return cls([(0, coeffs)])

    @classmethod
    def exponential(cls, lam, coeffs=(1,)):
        return cls([(lam, coeffs)])

    @classmethod
    def monomial(cls, k, lam=0):
        """``t**k * exp(lam t)``."""
        return cls([(lam, [0] * k + [1])])

    # -- structure ----------------------------------------------------------

    @property
    def frequencies(self):
        return [lam for lam, _ in self.terms]

    def poly(self, lam):
        for mu, p in self.terms:
            if abs(mu - lam) <= self.tol:
                return p
        return Polynomial()

    def is_zero(self):
        return not self.terms

    def is_polynomial(self):
        return all(lam == 0 for lam, _ in self.terms)

    def max_abs_coeff(self):
        return max((p.max_abs() for _, p in self.terms), default=0.0)

    def chop(self, thresh):
        """Drop coefficients of modulus at most ``thresh``."""
        return ExpPolynomial([(lam, p.chop(thresh)) for lam, p in self.terms], self.tol)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        return ExpPolynomial(list(self.terms) + list(other.terms), self.tol)

    def __neg__(self):
        return ExpPolynomial([(lam, -p) for lam, p in self.terms], self.tol)

    def __sub__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, ExpPolynomial):
            return NotImplemented
        return ExpPolynomial([(lam, p.scale(s)) for lam, p in self.terms], self.tol)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        parts = []
        for lam, p in self.terms:
            parts.append("(%s)*exp(%s t)" % (list(p.coeffs), lam) if lam != 0 else str(list(p.coeffs)))
        return "ExpPolynomial(%s)" % (" + ".join(parts) or "0")

    def __call__(self, t):
        return evaluate(self, t)

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        return {
            "terms": [
                {"lambda": _pair(lam), "coeffs": [_pair(c) for c in p.coeffs]}
                for lam, p in self.terms
            ]
        }

    @classmethod
    def from_dict(cls, data, tol=DEFAULT_TOL):
        if not isinstance(data, dict) or "terms" not in data:
            raise InputError("exponential polynomial JSON needs a 'terms' list")
        terms = []
        for i, term in enumerate(data["terms"]):
            try:
                lam = parse_complex(term["lambda"])
                coeffs = [parse_complex(c) for c in term["coeffs"]]
            except (KeyError, TypeError) as exc:
                raise InputError("term %d: expected {'lambda', 'coeffs'} (%s)" % (i, exc)) from None
            terms.append((lam, coeffs))
        return cls(terms, tol)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text, tol=DEFAULT_TOL):
        return cls.from_dict(json.loads(text), tol)


def evaluate(f, t):
    """Value of ``f`` at real ``t`` (scalar or array) as complex."""
    if np.ndim(t) == 0:
        t = float(t)
        total = 0j
        for lam, p in f.terms:
            if lam == 0:
                total += complex(p(t))
                continue
            try:
                e = cmath.exp(lam * t)
            except OverflowError:
                raise ExpOverflowError(
                    "exp(%s * %s) overflows" % (lam, t), lam=lam, t=t
                ) from None
            total += complex(p(t)) * e
        return total
    t = np.asarray(t, dtype=np.float64)
    total = np.zeros(t.shape, dtype=np.complex128)
    for lam, p in f.terms:
        pv = np.asarray(p(t.astype(np.complex128)), dtype=np.complex128)
        if lam == 0:
            total += pv
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(lam * t)
        if not np.all(np.isfinite(e)):
            bad = float(t[~np.isfinite(e)].ravel()[0])
            raise ExpOverflowError("exp(%s * %s) overflows" % (lam, bad), lam=lam, t=bad)
        total += pv * e
    return total


def translate(f, h):
    """``t -> f(t + h)``: each ``p_lambda`` becomes ``exp(lambda h) p_lambda(t + h)``."""
    if h == 0:
        return f
    h = float(h)
    out = []
    for lam, p in f.terms:
        factor = 1.0 if lam == 0 else cmath.exp(lam * h)
        out.append((lam, p.shift(h).scale(factor)))
    return ExpPolynomial(out, f.tol)


class AmbientSpace:
    """Frequency structure ``{(lambda_i, m_i)}`` with its ordered basis.

    The zero frequency is always block 0 (possibly with multiplicity 0).
    """

    __slots__ = ("freqs", "tol", "_offsets")

    def __init__(self, freqs, tol=DEFAULT_TOL):
        items = [(_snap_zero(lam, tol), int(m)) for lam, m in freqs]
        zero = [m for lam, m in items if lam == 0]
        if len(zero) > 1:
            raise InputError("zero frequency listed twice")
        rest = [(lam, m) for lam, m in items if lam != 0]
        for i, (lam, m) in enumerate(rest):
            if m < 1:
                raise InputError("multiplicity of frequency %s must be positive" % lam)
            for mu, _ in rest[:i]:
                if abs(mu - lam) <= tol:
                    raise InputError("frequencies %s and %s coincide within tol" % (mu, lam))
        m0 = zero[0] if zero else 0
        if m0 < 0:
            raise InputError("negative multiplicity for the zero frequency")
        self.freqs = ((0j, m0),) + tuple(rest)
        self.tol = tol
        offsets = [0]
        for _, m in self.freqs:
            offsets.append(offsets[-1] + m)
        self._offsets = tuple(offsets)
        if self.size == 0:
            raise InputError("ambient space must have a nonempty basis")

    @property
    def size(self):
        return self._offsets[-1]

    def block_range(self, i):
        return range(self._offsets[i], self._offsets[i + 1])

    def block_index(self, lam):
        lam = _snap_zero(lam, self.tol)
        for i, (mu, _) in enumerate(self.freqs):
            if abs(mu - lam) <= self.tol:
                return i
        return None

    def basis(self):
        return [ExpPolynomial.monomial(k, lam) for lam, m in self.freqs for k in range(m)]

    def basis_labels(self):
        return [(lam, k) for lam, m in self.freqs for k in range(m)]

    def with_zero_multiplicity(self, m0):
        """Same space with the polynomial block padded to at least ``m0``."""
        cur = self.freqs[0][1]
        return AmbientSpace(((0, max(cur, m0)),) + self.freqs[1:], self.tol)

    def __eq__(self, other):
        return isinstance(other, AmbientSpace) and self.freqs == other.freqs

    def __hash__(self):
        return hash(self.freqs)

    def __repr__(self):
        return "AmbientSpace(%r)" % (list(self.freqs),)

    def to_list(self):
        return [{"lambda": _pair(lam), "mult": m} for lam, m in self.freqs]

    @classmethod
    def from_list(cls, data, tol=DEFAULT_TOL):
        try:
            return cls([(parse_complex(d["lambda"]), int(d["mult"])) for d in data], tol)
        except (KeyError, TypeError) as exc:
            raise InputError("ambient entries need 'lambda' and 'mult' (%s)" % exc) from None


def coordinates(f, S, tol=DEFAULT_TOL):
    """Coordinate vector of ``f`` in the ordered basis of ``S``."""
    c = np.zeros(S.size, dtype=np.complex128)
    for lam, p in f.terms:
        i = S.block_index(lam)
        if i is None:
            raise NotInAmbientError(
                "not in ambient space: frequency %s is absent" % lam, lam=lam
            )
        m = S.freqs[i][1]
        if p.degree >= m:
            top = max(
                (k for k, a in enumerate(p.coeffs) if abs(a) > tol * (1 + p.max_abs())),
                default=-1,
            )
            if top >= m:
                raise NotInAmbientError(
                    "not in ambient space: frequency %s needs degree %d but only %d allowed"
                    % (lam, top, m - 1),
                    lam=lam,
                    degree=top,
                )
        start = S.block_range(i).start
        for k, a in enumerate(p.coeffs[:m]):
            c[start + k] = a
    return c


def from_coordinates(c, S):
    c = np.asarray(c, dtype=np.complex128).ravel()
    if len(c) != S.size:
        raise InputError("coordinate vector of length %d for ambient of size %d" % (len(c), S.size))
    terms = []
    for i, (lam, m) in enumerate(S.freqs):
        r = S.block_range(i)
        terms.append((lam, [complex(x) for x in c[r.start : r.stop]]))
    return ExpPolynomial(terms, S.tol)


def hull(fs, min_zero_mult=0, tol=DEFAULT_TOL):
    """Smallest ambient space containing every member of ``fs``.

    ``min_zero_mult`` pads the polynomial block; nothing is padded otherwise.
    """
    fs = list(fs)
    if not fs:
        raise InputError("hull of an empty list")
    mults = []
    for f in fs:
        for lam, p in f.terms:
            for idx, (mu, m) in enumerate(mults):
                if abs(mu - lam) <= tol:
                    mults[idx] = (mu, max(m, p.degree + 1))
                    break
            else:
                mults.append((lam, p.degree + 1))
    zero = [m for lam, m in mults if lam == 0]
    m0 = max(zero[0] if zero else 0, min_zero_mult)
    rest = sorted(((lam, m) for lam, m in mults if lam != 0), key=lambda lm: _freq_key(lm[0]))
    if m0 == 0 and not rest:
        m0 = 1
    return AmbientSpace([(0, m0)] + rest, tol)


RealTerm = namedtuple("RealTerm", ["power", "rate", "freq", "cos", "sin"])
RealTerm.__doc__ = "``t**power * exp(rate t) * (cos*cos(freq t) + sin*sin(freq t))``, freq >= 0."


class RealExpPolynomial:
    """Real-valued combination of ``t^k e^{a t} cos(b t)`` and ``t^k e^{a t} sin(b t)``."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        acc = {}
        for t in terms:
            power, rate, freq, cc, ss = t
            if freq < 0:
                freq, ss = -freq, -ss
            if freq == 0:
                ss = 0.0
            key = (int(power), float(rate), float(freq))
            a, b = acc.get(key, (0.0, 0.0))
            acc[key] = (a + cc, b + ss)
        self.terms = tuple(
            RealTerm(k, a, b, cc, ss)
            for (k, a, b), (cc, ss) in sorted(acc.items())
            if cc != 0 or ss != 0
        )

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros(t.shape)
        for k, a, b, cc, ss in self.terms:
            out = out + t**k * np.exp(a * t) * (cc * np.cos(b * t) + ss * np.sin(b * t))
        return out if out.ndim else float(out)

    def is_zero(self):
        return not self.terms

    def to_dict(self):
        return {"terms": [t._asdict() for t in self.terms]}

    def __repr__(self):
        return "RealExpPolynomial(%r)" % (list(self.terms),)


def realify(f):
    """Split ``f`` into real and imaginary parts over the cos/sin basis.

    Returns ``(re, im)`` with ``f(t) == re(t) + 1j * im(t)`` for real ``t``.
    """
    re_terms, im_terms = [], []
    for lam, p in f.terms:
        a, b = lam.real, lam.imag
        for k, c in enumerate(p.coeffs):
            c = complex(c)
            x, y = c.real, c.imag
            re_terms.append((k, a, b, x, -y))
            im_terms.append((k, a, b, y, x))
    return RealExpPolynomial(re_terms), RealExpPolynomial(im_terms)


