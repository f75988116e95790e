"""
Matrix picture of ``Delta_h`` on an ambient space.

On the block of frequency ``lambda`` with basis ``t^k e^{lambda t}``,
``k = 0..m-1``, translation by ``h`` sends ``t^j`` to
``e^{lambda h} sum_i C(j, i) h^{j-i} t^i``, so ``Delta_h`` is upper
triangular with diagonal ``e^{lambda h} - 1`` and entries
``C(j, i) h^{j-i} e^{lambda h}`` above it.  On the polynomial block the
diagonal vanishes.  With a rational ``h`` the polynomial block is built
from exact fractions.
"""

import cmath
import math
import threading
from collections import namedtuple
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import algebra
from .algebra import DEFAULT_TOL
from .errors import ChainPreconditionError, DegenerateStepError, InputError
from .exppoly import Polynomial

# ---------------------------------------------------------------------------
# Stirling numbers of the second kind
# ---------------------------------------------------------------------------

_stirling_rows = [[1]]
_stirling_lock = threading.Lock()


def stirling2(n, k):
    """Number of partitions of an ``n``-set into ``k`` nonempty blocks."""
    if n < 0 or k < 0:
        raise InputError("stirling2 needs n, k >= 0")
    if k > n:
        return 0
    with _stirling_lock:
        while len(_stirling_rows) <= n:
            prev = _stirling_rows[-1]
            m = len(prev)
            row = [0] * (m + 1)
            for j in range(1, m + 1):
                row[j] = j * (prev[j] if j < m else 0) + prev[j - 1]
            _stirling_rows.append(row)
        return _stirling_rows[n][k]


def _is_exact(h):
    return isinstance(h, (int, Fraction)) and not isinstance(h, bool)


def delta_power_monomial(s, m, h):
    """The polynomial ``Delta_h^m t^s``.

    Coefficient of ``t^j`` is ``C(s, j) S(s-j, m) m! h^(s-j)``; exact when
    ``h`` is an int or Fraction.
    """
    if s < 0 or m < 0:
        raise InputError("delta_power_monomial needs s, m >= 0")
    if _is_exact(h):
        h = Fraction(h)
    mf = factorial(m)
    coeffs = [comb(s, j) * stirling2(s - j, m) * mf * h ** (s - j) for j in range(s + 1)]
    return Polynomial(coeffs)


def delta_power_monomial_direct(s, m, h):
    """Same polynomial by expanding ``sum_k C(m,k)(-1)^(m-k) (t + k h)^s`` directly."""
    if _is_exact(h):
        h = Fraction(h)
    out = [0] * (s + 1)
    for k in range(m + 1):
        w = comb(m, k) * (-1) ** (m - k)
        for j in range(s + 1):
            out[j] += w * comb(s, j) * (k * h) ** (s - j)
    return Polynomial(out)


# ---------------------------------------------------------------------------
# block matrices of Delta_h
# ---------------------------------------------------------------------------


def expm1c(z):
    """``exp(z) - 1`` without cancellation for small complex ``z``."""
    z = complex(z)
    if z.imag == 0:
        return complex(math.expm1(z.real))
    if z == 0:
        return 0j
    return 2.0 * cmath.exp(z / 2) * cmath.sinh(z / 2)


def delta_block(lam, m, h):
    """Matrix of ``Delta_h`` on ``span{t^k e^{lam t}}_{k<m}`` (0-based powers)."""
    lam = complex(lam)
    if lam == 0 and _is_exact(h):
        h = Fraction(h)
        B = np.empty((m, m), dtype=object)
        for i in range(m):
            for j in range(m):
                B[i, j] = comb(j, i) * h ** (j - i) if i < j else Fraction(0)
        return B
    h = float(h)
    e = cmath.exp(lam * h) if lam != 0 else 1.0
    B = np.zeros((m, m), dtype=np.complex128)
    diag = expm1c(lam * h) if lam != 0 else 0.0
    for j in range(m):
        B[j, j] = diag
        for i in range(j):
            B[i, j] = comb(j, i) * h ** (j - i) * e
    return B


class BlockMatrix:
    """Block-diagonal matrix aligned with the blocks of an ambient space."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        self.blocks = tuple((complex(lam), B) for lam, B in blocks)

    @property
    def size(self):
        return sum(B.shape[0] for _, B in self.blocks)

    def block(self, i):
        return self.blocks[i][1]

    def dense(self):
        n = self.size
        D = np.zeros((n, n), dtype=np.complex128)
        k = 0
        for _, B in self.blocks:
            d = B.shape[0]
            D[k : k + d, k : k + d] = np.asarray(B, dtype=np.complex128)
            k += d
        return D

    def apply(self, coords):
        return self.dense() @ np.asarray(coords, dtype=np.complex128)

    def __repr__(self):
        return "BlockMatrix(%r)" % ([(lam, B.shape[0]) for lam, B in self.blocks],)


def matrix_delta(S, h):
    """Matrix of ``Delta_h`` on the ambient space ``S``."""
    return BlockMatrix((lam, delta_block(lam, m, h)) for lam, m in S.freqs)


def _block_power(B, m):
    if B.dtype == object:
        n = B.shape[0]
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                out[i, j] = Fraction(int(i == j))
        for _ in range(m):
            out = out.dot(B)
        return out
    return np.linalg.matrix_power(B, m)


def matrix_power(A, m):
    if m < 1:
        raise InputError("matrix_power needs m >= 1")
    return BlockMatrix((lam, _block_power(B, m)) for lam, B in A.blocks)


def block_rank(B, tol=DEFAULT_TOL):
    """Rank of one block; exact for rational (object) blocks."""
    if B.shape[0] == 0:
        return 0
    if B.dtype == object:
        return algebra.rank_kernel_exact(B.tolist())[0]
    return algebra.rank(B, tol)


# ---------------------------------------------------------------------------
# root subspaces of Delta_h^m
# ---------------------------------------------------------------------------

RootBlock = namedtuple("RootBlock", ["eigenvalue", "indices", "block"])


def root_decomposition(S, h, m, tol=DEFAULT_TOL):
    """Root subspaces of ``Delta_h^m`` on ``S``, read off block by block.

    Block 0 has eigenvalue 0; block ``i`` has ``(e^{lambda_i h} - 1)^m``.
    Raises :class:`DegenerateStepError` when two of these coincide.
    """
    out = []
    for i, (lam, mult) in enumerate(S.freqs):
        if mult == 0:
            continue
        if lam == 0:
            mu = 0j
        else:
            d = expm1c(lam * float(h))
            if abs(d) <= tol:
                raise DegenerateStepError(
                    "degenerate step h=%r: exp(%s h) = 1, pick another h" % (h, lam)
                )
            mu = d**m
        out.append(RootBlock(mu, S.block_range(i), i))
    for a in range(len(out)):
        for b in range(a):
            mu, nu = out[a].eigenvalue, out[b].eigenvalue
            if abs(mu - nu) <= tol * (1.0 + max(abs(mu), abs(nu))):
                raise DegenerateStepError(
                    "degenerate step h=%r: blocks %d and %d share eigenvalue %s, pick another h"
                    % (h, out[b].block, out[a].block, mu)
                )
    return out


# ---------------------------------------------------------------------------
# invariant subspaces of lambda I + (superdiagonal nilpotent)
# ---------------------------------------------------------------------------


def check_chain_block(T, tol=DEFAULT_TOL):
    """Validate that ``T = lam I + B`` with ``lam != 0`` and ``B`` strictly upper
    triangular with a nonzero first superdiagonal; returns ``lam``."""
    T = np.asarray(T, dtype=np.complex128)
    n = T.shape[0]
    if T.ndim != 2 or T.shape[1] != n or n == 0:
        raise ChainPreconditionError("chain classification needs a nonempty square block")
    thresh = algebra.zero_threshold(T, tol)
    lam = T[0, 0]
    if abs(lam) <= thresh:
        raise ChainPreconditionError("diagonal value is zero; the block is nilpotent")
    if np.any(np.abs(np.diag(T) - lam) > thresh):
        raise ChainPreconditionError("diagonal is not constant")
    if np.any(np.abs(np.tril(T, -1)) > thresh):
        raise ChainPreconditionError("block is not upper triangular")
    if n > 1 and np.any(np.abs(np.diag(T, 1)) <= thresh):
        raise ChainPreconditionError("first superdiagonal has a zero entry")
    return complex(lam)


def chain_subspaces(T, tol=DEFAULT_TOL):
    """All ``T``-invariant subspaces: the ``n + 1`` coordinate prefixes.

    Each entry is an ``(n, k)`` array whose columns are ``e_1..e_k``.
    """
    check_chain_block(T, tol)
    n = np.asarray(T).shape[0]
    eye = np.eye(n, dtype=np.complex128)
    return [eye[:, :k] for k in range(n + 1)]


def is_chain_prefix(V, n, tol=DEFAULT_TOL):
    """Length ``k`` if ``span V = span{e_1..e_k}`` in ``C^n``, else ``None``."""
    V = algebra.columns(V, n) if not isinstance(V, np.ndarray) else V
    if V.shape[1] == 0:
        return 0
    Q = algebra.column_basis(V, tol)
    k = Q.shape[1]
    tail = Q[k:, :]
    if tail.size and np.max(np.abs(tail)) > tol * 10:
        return None
    return k


# ---------------------------------------------------------------------------
# kernel of Delta_h^m, block by block
# ---------------------------------------------------------------------------


def kernel_delta_power(S, h, m, tol=DEFAULT_TOL):
    """Basis (columns) of ``ker (Delta_h^m)`` on ``S``.

    Exponential blocks are triangular with diagonal ``(e^{lambda h} - 1)^m``
    and contribute nothing unless that vanishes.  On the polynomial block
    ``A_0(h) = D A_0(1) D^{-1}`` with ``D = diag(h^k)``, so the kernel is
    ``D`` times the exact kernel of the integer matrix ``A_0(1)^m``.
    Columns are normalized to unit length.
    """
    if m < 1:
        raise InputError("kernel_delta_power needs m >= 1")
    if not float(h) != 0:
        raise InputError("step must be nonzero")
    n = S.size
    cols = []
    for i, (lam, mult) in enumerate(S.freqs):
        if mult == 0:
            continue
        start = S.block_range(i)[0]
        if lam != 0:
            if abs(expm1c(lam * float(h))) <= tol:
                raise DegenerateStepError(
                    "degenerate step h=%r: exp(%s h) = 1, pick another h" % (h, lam)
                )
            continue
        A1 = _block_power(delta_block(0, mult, 1), m)
        _, kernel = algebra.rank_kernel_exact(A1.tolist())
        hh = Fraction(h) if _is_exact(h) else float(h)
        for v in kernel:
            col = np.zeros(n, dtype=np.complex128)
            for k, x in enumerate(v):
                col[start + k] = complex(x * hh**k) if x else 0j
            cols.append(col / np.linalg.norm(col))
    if not cols:
        return np.zeros((n, 0), dtype=np.complex128)
    return np.stack(cols, axis=1)
