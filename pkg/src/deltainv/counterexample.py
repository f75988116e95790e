"""
Continuous functions killed by ``Delta_{p h}^m`` and ``Delta_{q h}^m`` that
are not exponential polynomials.

The seed is the ``h``-periodic sawtooth ``phi`` (``|x|`` near 0).  An
antidifference ``f`` of ``g`` (``Delta_h f = g``, ``f = 0`` on ``hZ``) is
evaluated at ``z = x + K h`` with ``x`` in ``[0, h)`` by the anchored sum

    f(z) = sum_{j=0}^{K-1} g(x + j h)     (K > 0)
    f(z) = 0                              (K = 0)
    f(z) = -sum_{j=K}^{-1} g(x + j h)     (K < 0)

Every level of an iterated antidifference lives on the same lattice
``x + jh``, so depth ``d`` costs ``O(d |K|)`` per point.
"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import DEFAULT_TOL
from .diffops import apply_sampled, delta, power
from .errors import InputError

MAX_DEPTH = 6


class Sawtooth:
    """``phi(x) = |x|`` for ``|x| <= h/2``, extended with period ``h``."""

    def __init__(self, h):
        if not h > 0:
            raise InputError("period must be positive")
        self.period = float(h)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = _kernels.sawtooth(x, self.period)
        return out if out.ndim else float(out)

    def __repr__(self):
        return "Sawtooth(h=%r)" % self.period


class AntidifferenceFn:
    """``depth``-fold antidifference of ``g`` with step ``h``.

    ``g`` must accept numpy arrays.  Depth 0 is ``g`` itself.
    """

    def __init__(self, g, h, depth=1, tol=DEFAULT_TOL, check=True):
        if not h > 0:
            raise InputError("step must be positive")
        if not 0 <= depth <= MAX_DEPTH:
            raise InputError("depth must be in 0..%d" % MAX_DEPTH)
        self.g = g
        self.h = float(h)
        self.depth = int(depth)
        if check and depth:
            ks = np.arange(-5, 6) * self.h
            vals = np.abs(np.asarray(g(ks), dtype=np.float64))
            if np.any(vals > tol):
                k = int(np.argmax(vals)) - 5
                raise InputError(
                    "g must vanish on hZ: |g(%d h)| = %.3e exceeds tol" % (k, vals.max())
                )

    def _lattice(self, z):
        q = z / self.h
        K = np.floor(q)
        near = np.round(q)
        snap = np.abs(q - near) <= 1e-12 * np.maximum(1.0, np.abs(q))
        K = np.where(snap, near, K).astype(np.int64)
        x = np.where(snap, 0.0, z - K * self.h)
        x = np.clip(x, 0.0, np.nextafter(self.h, 0.0))
        return K, x

    def __call__(self, z):
        z = np.asarray(z, dtype=np.float64)
        if self.depth == 0:
            return np.asarray(self.g(z), dtype=np.float64) if z.ndim else float(self.g(z))
        flat = z.ravel()
        K, x = self._lattice(flat)
        lo = np.minimum(K, 0)
        lengths = np.abs(K) + 1
        starts = np.zeros(len(flat), dtype=np.int64)
        if len(flat) > 1:
            starts[1:] = np.cumsum(lengths)[:-1]
        total = int(lengths.sum())
        owner = np.repeat(np.arange(len(flat)), lengths)
        j = np.arange(total) - np.repeat(starts, lengths) + np.repeat(lo, lengths)
        pts = x[owner] + j * self.h
        base = np.ascontiguousarray(np.asarray(self.g(pts), dtype=np.float64))
        zeros = (-lo).astype(np.int64)
        targets = (K - lo).astype(np.int64)
        out = _kernels.antidiff(base, starts, lengths.astype(np.int64), zeros, targets, self.depth)
        return out.reshape(z.shape) if z.ndim else float(out[0])

    def __repr__(self):
        return "AntidifferenceFn(%r, h=%r, depth=%d)" % (self.g, self.h, self.depth)


def antidifference(g, h, tol=DEFAULT_TOL):
    """An ``f`` with ``Delta_h f = g`` and ``f(hZ) = 0``; ``g`` must vanish on ``hZ``."""
    return AntidifferenceFn(g, h, 1, tol)


@dataclass
class Counterexample:
    f: AntidifferenceFn
    m: int
    p: int
    q: int
    h: float

    @property
    def h1(self):
        return self.p * self.h

    @property
    def h2(self):
        return self.q * self.h


def build_counterexample(m, p, q, h=1.0):
    """``f_m`` with ``Delta_h^{m-1} f_m = phi``; then ``Delta_{ph}^m f_m = Delta_{qh}^m f_m = 0``."""
    if m < 1 or p < 1 or q < 1:
        raise InputError("need m, p, q >= 1")
    if m - 1 > MAX_DEPTH:
        raise InputError("m is capped at %d" % (MAX_DEPTH + 1))
    f = AntidifferenceFn(Sawtooth(h), h, m - 1)
    return Counterexample(f, m, p, q, float(h))


def verify_period_multiple(f, h, m, p, grid):
    """``max |Delta_{p h}^m f|`` over ``grid``."""
    if int(p) != p:
        raise InputError("p must be an integer")
    vals = apply_sampled(power(delta(0, 1), m), f, [p * h], grid)
    return float(np.max(np.abs(vals))) if len(vals) else 0.0


Witness = namedtuple("Witness", ["point", "left_slope", "right_slope"])


def non_analytic_witness(f, points, delta_=1e-4, tol=DEFAULT_TOL):
    """A corner of ``f`` among ``points``, or ``None`` (inconclusive).

    A corner is reported where one-sided difference quotients with step
    ``delta_`` differ by more than ``10 tol`` and the gap does not shrink
    when the step is halved; a smooth function's gap halves with the step.
    """
    if not delta_ > 0:
        raise InputError("delta must be positive")
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return None

    def slopes(d):
        f0 = np.asarray(f(pts), dtype=np.float64)
        left = (f0 - np.asarray(f(pts - d), dtype=np.float64)) / d
        right = (np.asarray(f(pts + d), dtype=np.float64) - f0) / d
        return left, right

    l1, r1 = slopes(delta_)
    l2, r2 = slopes(delta_ / 2)
    gap1 = np.abs(r1 - l1)
    gap2 = np.abs(r2 - l2)
    ok = (gap1 > 10 * tol) & (gap2 >= 0.75 * gap1)
    if not ok.any():
        return None
    i = int(np.argmax(np.where(ok, gap1, -1.0)))
    return Witness(float(pts[i]), float(l1[i]), float(r1[i]))


def sample_csv(f, grid):
    """``t,value`` CSV text with 17 significant digits."""
    grid = np.asarray(grid, dtype=np.float64)
    vals = np.asarray(f(grid))
    lines = ["t,value"]
    for t, v in zip(grid, vals):
        lines.append("%.17g,%.17g" % (t, float(np.real(v))))
    return "\n".join(lines) + "\n"
