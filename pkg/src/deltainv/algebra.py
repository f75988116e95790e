"""
Small dense complex linear algebra.

Matrices are ``numpy`` complex arrays; a list of vectors is accepted
wherever a set of vectors is expected and is treated column-wise.
Zero tests are relative: an entry counts as zero when its modulus is at
most ``tol * (1 + ||M||_inf)``.

An exact path over :class:`fractions.Fraction` is provided by
:func:`rank_kernel_exact` for rational matrices.
"""

from collections import namedtuple
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import DimensionMismatchError, EigenvalueError, InputError

DEFAULT_TOL = 1e-9

SubspaceOps = namedtuple("SubspaceOps", ["sum", "intersection", "contains"])


def as_matrix(M):
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else np.zeros((0, 0), dtype=np.complex128)
    if A.ndim != 2:
        raise InputError("expected a 2-D matrix, got shape %s" % (A.shape,))
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def columns(vectors, n=None):
    """Stack a list of vectors (or pass through a 2-D array) as columns."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        A = vectors.astype(np.complex128)
    else:
        vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
        if not vecs:
            return np.zeros((0 if n is None else n, 0), dtype=np.complex128)
        lengths = {len(v) for v in vecs}
        if len(lengths) != 1:
            raise DimensionMismatchError("vectors of lengths %s" % sorted(lengths))
        A = np.stack(vecs, axis=1)
    if n is not None and A.shape[0] != n:
        raise DimensionMismatchError("expected vectors of length %d, got %d" % (n, A.shape[0]))
    return A


def inf_norm(M):
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


def zero_threshold(M, tol=DEFAULT_TOL):
    return tol * (1.0 + inf_norm(M))


def _orthonormalize(A):
    if A.shape[1] == 0:
        return A
    Q, _ = np.linalg.qr(A)
    return Q


def rank_kernel(M, tol=DEFAULT_TOL):
    """Numerical rank and an orthonormal kernel basis of ``M``.

    The kernel is returned as an ``(cols, cols - rank)`` array whose
    columns span ``ker M``.

    >>> r, K = rank_kernel([[0, 1], [0, 0]])
    >>> r, K.shape
    (1, (2, 1))
    """
    A = as_matrix(M)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return 0, np.eye(cols, dtype=np.complex128)
    R, perm, r = _kernels.eliminate(A, zero_threshold(A, tol))
    free = cols - r
    Y = np.zeros((cols, free), dtype=np.complex128)
    Y[:r, :] = -R[:r, r:]
    Y[r:, :] = np.eye(free)
    K = np.empty_like(Y)
    K[perm, :] = Y
    return int(r), _orthonormalize(K)


def rank(M, tol=DEFAULT_TOL):
    A = as_matrix(M)
    if A.size == 0:
        return 0
    return int(_kernels.eliminate(A, zero_threshold(A, tol))[2])


def column_basis(M, tol=DEFAULT_TOL):
    """Orthonormal basis (as columns) of the column space of ``M``."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.size == 0:
        n = A.shape[0] if A.ndim == 2 else 0
        return np.zeros((n, 0), dtype=np.complex128)
    _, perm, r = _kernels.eliminate(A, zero_threshold(A, tol))
    pivots = np.sort(perm[:r])
    return _orthonormalize(A[:, pivots])


def pivot_columns(M, tol=DEFAULT_TOL):
    """Indices of a maximal independent subset of the columns of ``M``."""
    A = np.asarray(M, dtype=np.complex128)
    if A.size == 0:
        return []
    _, perm, r = _kernels.eliminate(A, zero_threshold(A, tol))
    return sorted(int(p) for p in perm[:r])


def echelon_basis(M, tol=DEFAULT_TOL):
    """Basis of the column space in reduced column-echelon form.

    Each returned column has a 1 at its own pivot row and 0 at the pivot
    rows of the others, so coordinate-aligned spans come back as unit vectors.
    """
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[1] == 0:
        return np.zeros((A.shape[0] if A.ndim == 2 else 0, 0), dtype=np.complex128)
    At = A.T
    R, perm, r = _kernels.eliminate(At, zero_threshold(At, tol))
    rows = np.empty((r, At.shape[1]), dtype=np.complex128)
    rows[:, perm] = R[:r, :]
    order = np.argsort(perm[:r])
    return rows[order].T.copy()


def span_residual(v, Q):
    """Euclidean distance from ``v`` to the span of orthonormal columns ``Q``."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    if Q.shape[1] == 0:
        return float(np.linalg.norm(v))
    return float(np.linalg.norm(v - Q @ (Q.conj().T @ v)))


def in_span(v, Q, tol=DEFAULT_TOL):
    v = np.asarray(v, dtype=np.complex128).ravel()
    return span_residual(v, Q) <= tol * max(1.0, float(np.linalg.norm(v)))


def generalized_eigenspace(T, lam, tol=DEFAULT_TOL):
    """Basis (columns) of the root subspace ``ker (T - lam I)^n``.

    Returns an ``(n, 0)`` array when ``lam`` is not an eigenvalue of ``T``
    within ``tol``.
    """
    A = as_matrix(T)
    n, c = A.shape
    if n != c:
        raise InputError("generalized_eigenspace needs a square matrix, got %dx%d" % (n, c))
    shifted = A - lam * np.eye(n)
    if rank(shifted, tol) == n:
        return np.zeros((n, 0), dtype=np.complex128)
    P = np.linalg.matrix_power(shifted, n)
    thresh = tol * (1.0 + inf_norm(shifted) ** n)
    R, perm, r = _kernels.eliminate(P, thresh)
    free = n - r
    Y = np.zeros((n, free), dtype=np.complex128)
    Y[:r, :] = -R[:r, r:]
    Y[r:, :] = np.eye(free)
    K = np.empty_like(Y)
    K[perm, :] = Y
    return _orthonormalize(K)


def subspace_ops(A, B, tol=DEFAULT_TOL):
    """Sum, intersection and containment ``A <= B`` of two spans.

    ``A`` and ``B`` are lists of vectors (or column arrays) of equal length.
    Sum and intersection come back as orthonormal column bases.
    """
    CA = columns(A)
    CB = columns(B)
    if CA.shape[1] and CB.shape[1] and CA.shape[0] != CB.shape[0]:
        raise DimensionMismatchError(
            "vectors of length %d and %d" % (CA.shape[0], CB.shape[0])
        )
    n = CA.shape[0] if CA.shape[1] else CB.shape[0]
    if not CA.shape[1]:
        CA = np.zeros((n, 0), dtype=np.complex128)
    if not CB.shape[1]:
        CB = np.zeros((n, 0), dtype=np.complex128)
    QA = column_basis(CA, tol) if CA.shape[1] else CA
    QB = column_basis(CB, tol) if CB.shape[1] else CB
    total = column_basis(np.hstack([QA, QB]), tol) if (QA.shape[1] + QB.shape[1]) else QA
    if QA.shape[1] == 0 or QB.shape[1] == 0:
        inter = np.zeros((n, 0), dtype=np.complex128)
    else:
        _, K = rank_kernel(np.hstack([QA, -QB]), tol)
        if K.shape[1]:
            inter = column_basis(QA @ K[: QA.shape[1], :], tol)
        else:
            inter = np.zeros((n, 0), dtype=np.complex128)
    contains = all(in_span(QA[:, j], QB, tol) for j in range(QA.shape[1]))
    return SubspaceOps(total, inter, contains)


def _root_radius(c):
    n = len(c) - 1
    mags = [abs(c[k]) ** (1.0 / k) for k in range(1, n + 1) if c[k] != 0]
    return 2.0 * max(mags) if mags else 0.0


def eigenvalues_small(M, tol=DEFAULT_TOL, maxiter=500):
    """Eigenvalues of a small square matrix via its characteristic polynomial.

    The polynomial comes from the division-free Berkowitz recursion and its
    roots from Aberth-Ehrlich simultaneous iteration.  Each returned root
    ``mu`` satisfies ``|p(mu)| <= tol * max|c_k| * sum_k |mu|^(n-k)``
    (normwise backward error); exact zero roots are deflated first.
    """
    A = as_matrix(M)
    n, c = A.shape
    if n != c:
        raise InputError("eigenvalues_small needs a square matrix, got %dx%d" % (n, c))
    if n > 16:
        raise InputError("eigenvalues_small is limited to 16x16 (got %d)" % n)
    if n == 0:
        return []
    coeffs = _kernels.charpoly(np.ascontiguousarray(A))
    zeros = 0
    while zeros < n and coeffs[n - zeros] == 0:
        zeros += 1
    if zeros == n:
        return [0j] * n
    coeffs = np.ascontiguousarray(coeffs[: n + 1 - zeros])
    d = n - zeros
    radius = _root_radius(coeffs)
    angles = 2.0 * np.pi * np.arange(d) / d + 0.4
    z0 = (radius * np.exp(1j * angles)).astype(np.complex128)
    roots, _, _ = _kernels.aberth(coeffs, z0, maxiter, 1e-15)
    cnorm = float(np.max(np.abs(coeffs)))
    worst = 0.0
    for z in roots:
        scale = cnorm * float(np.sum(np.abs(z) ** np.arange(d, -1, -1)))
        worst = max(worst, abs(np.polyval(coeffs, z)) / scale)
    if not np.all(np.isfinite(roots)) or worst > tol:
        raise EigenvalueError(
            "root iteration did not converge (best relative residual %.3e)" % worst,
            residual=worst,
        )
    roots = list(roots) + [0j] * zeros
    return sorted((complex(z) for z in roots), key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def rank_kernel_exact(M):
    """Exact rank and kernel basis of a rational matrix (list of rows).

    Kernel vectors are the standard free-variable basis, not normalized.
    """
    rows = [[Fraction(x) for x in row] for row in M]
    if not rows or not rows[0]:
        cols = len(rows[0]) if rows else 0
        return 0, [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    nr, nc = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    kernel = []
    for free in (c for c in range(nc) if c not in pivots):
        v = [Fraction(0)] * nc
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        kernel.append(v)
    return len(pivots), kernel
