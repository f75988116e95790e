"""
Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba versions are used when numba imports cleanly and the
environment variable ``DELTAINV_DISABLE_NUMBA`` is unset (or ``0``).
Both variants are always importable under explicit names
(``*_jit`` / ``*_np``) so tests and benchmarks can compare them.
"""

import os

import numpy as np

_flag = os.environ.get("DELTAINV_DISABLE_NUMBA", "0").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by DELTAINV_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------------------
# full-pivoting Gauss-Jordan elimination
# ---------------------------------------------------------------------------


def eliminate_np(M, thresh):
    """Gauss-Jordan elimination with complete pivoting.

    Returns ``(R, perm, rank)`` where ``R`` is the reduced matrix in the
    column order ``perm``: ``R[:rank, :rank]`` is the identity and rows
    ``rank:`` are below ``thresh`` in absolute value.
    """
    A = np.array(M, dtype=np.complex128, copy=True)
    rows, cols = A.shape
    perm = np.arange(cols)
    r = 0
    while r < min(rows, cols):
        sub = np.abs(A[r:, r:])
        flat = int(np.argmax(sub))
        i, j = divmod(flat, cols - r)
        if sub[i, j] <= thresh:
            break
        i += r
        j += r
        if i != r:
            A[[r, i], :] = A[[i, r], :]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            perm[[r, j]] = perm[[j, r]]
        A[r, :] /= A[r, r]
        factors = A[:, r].copy()
        factors[r] = 0.0
        A -= np.outer(factors, A[r, :])
        r += 1
    return A, perm, r


@njit(cache=True)
def eliminate_jit(M, thresh):
    A = M.copy()
    rows, cols = A.shape
    perm = np.arange(cols)
    r = 0
    n = min(rows, cols)
    while r < n:
        best = -1.0
        bi = r
        bj = r
        for i in range(r, rows):
            for j in range(r, cols):
                a = abs(A[i, j])
                if a > best:
                    best = a
                    bi = i
                    bj = j
        if best <= thresh:
            break
        if bi != r:
            for j in range(cols):
                tmp = A[r, j]
                A[r, j] = A[bi, j]
                A[bi, j] = tmp
        if bj != r:
            for i in range(rows):
                tmp = A[i, r]
                A[i, r] = A[i, bj]
                A[i, bj] = tmp
            tp = perm[r]
            perm[r] = perm[bj]
            perm[bj] = tp
        piv = A[r, r]
        for j in range(cols):
            A[r, j] = A[r, j] / piv
        for i in range(rows):
            if i == r:
                continue
            f = A[i, r]
            if f != 0:
                for j in range(cols):
                    A[i, j] -= f * A[r, j]
        r += 1
    return A, perm, r


# ---------------------------------------------------------------------------
# characteristic polynomial (Berkowitz, division free)
# ---------------------------------------------------------------------------


def charpoly_np(M):
    """Coefficients of det(zI - M), highest degree first."""
    A = np.asarray(M, dtype=np.complex128)
    n = A.shape[0]
    if n == 0:
        return np.ones(1, dtype=np.complex128)
    v = np.array([1.0, -A[0, 0]], dtype=np.complex128)
    for r in range(1, n):
        sub = A[:r, :r]
        row = A[r, :r]
        col = A[:r, r]
        t = np.empty(r + 2, dtype=np.complex128)
        t[0] = 1.0
        t[1] = -A[r, r]
        w = col.copy()
        for k in range(2, r + 2):
            t[k] = -(row @ w)
            w = sub @ w
        T = np.zeros((r + 2, r + 1), dtype=np.complex128)
        for j in range(r + 1):
            T[j:, j] = t[: r + 2 - j]
        v = T @ v
    return v


@njit(cache=True)
def charpoly_jit(M):
    n = M.shape[0]
    if n == 0:
        return np.ones(1, dtype=np.complex128)
    v = np.zeros(2, dtype=np.complex128)
    v[0] = 1.0
    v[1] = -M[0, 0]
    for r in range(1, n):
        t = np.zeros(r + 2, dtype=np.complex128)
        t[0] = 1.0
        t[1] = -M[r, r]
        w = np.empty(r, dtype=np.complex128)
        for i in range(r):
            w[i] = M[i, r]
        for k in range(2, r + 2):
            acc = 0.0 + 0.0j
            for i in range(r):
                acc += M[r, i] * w[i]
            t[k] = -acc
            nw = np.zeros(r, dtype=np.complex128)
            for i in range(r):
                s = 0.0 + 0.0j
                for j in range(r):
                    s += M[i, j] * w[j]
                nw[i] = s
            w = nw
        nv = np.zeros(r + 2, dtype=np.complex128)
        for i in range(r + 2):
            s = 0.0 + 0.0j
            for j in range(min(i, r) + 1):
                s += t[i - j] * v[j]
            nv[i] = s
        v = nv
    return v


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous root iteration
# ---------------------------------------------------------------------------


def aberth_np(coeffs, z0, maxiter, step_tol):
    """Jacobi-style Aberth iteration; returns (roots, iterations, converged)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    dc = c[:-1] * np.arange(len(c) - 1, 0, -1)
    z = np.array(z0, dtype=np.complex128, copy=True)
    n = len(z)
    eye = np.eye(n, dtype=bool)
    for it in range(maxiter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        live = p != 0
        if not live.any():
            return z, it, True
        dp = np.where(dp == 0, 1e-300, dp)
        ratio = np.where(live, p / dp, 0.0)
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        inv = np.where(eye, 0.0, 1.0 / diff)
        s = inv.sum(axis=1)
        w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        if np.max(np.abs(w) / np.maximum(1.0, np.abs(z))) <= step_tol:
            return z, it + 1, True
    return z, maxiter, False


@njit(cache=True)
def aberth_jit(coeffs, z0, maxiter, step_tol):
    c = coeffs
    deg = c.shape[0] - 1
    z = z0.copy()
    n = z.shape[0]
    for it in range(maxiter):
        worst = 0.0
        for i in range(n):
            p = c[0]
            dp = 0.0 + 0.0j
            for k in range(1, deg + 1):
                dp = dp * z[i] + p
                p = p * z[i] + c[k]
            if p == 0:
                continue
            if dp == 0:
                dp = 1e-300 + 0.0j
            ratio = p / dp
            s = 0.0 + 0.0j
            for j in range(n):
                if j != i:
                    d = z[i] - z[j]
                    if d != 0:
                        s += 1.0 / d
            w = ratio / (1.0 - ratio * s)
            if not (np.isfinite(w.real) and np.isfinite(w.imag)):
                continue
            z[i] -= w
            rel = abs(w) / max(1.0, abs(z[i]))
            if rel > worst:
                worst = rel
        if worst <= step_tol:
            return z, it + 1, True
    return z, maxiter, False


# ---------------------------------------------------------------------------
# iterated antidifference on a translation lattice
# ---------------------------------------------------------------------------


def _anchored_prefix_np(g, zero):
    out = np.zeros_like(g)
    if zero + 1 < len(g):
        out[zero + 1 :] = np.cumsum(g[zero:-1])
    if zero > 0:
        out[:zero] = -np.cumsum(g[:zero][::-1])[::-1]
    return out


def antidiff_np(base, starts, lengths, zeros, targets, depth):
    """Iterate the anchored prefix sum ``depth`` times per query segment.

    ``base`` holds the seed function sampled on each query's lattice
    ``x + j*h``; segment ``q`` occupies ``base[starts[q]:starts[q]+lengths[q]]``
    with lattice index 0 at offset ``zeros[q]``.
    """
    out = np.empty(len(starts), dtype=base.dtype)
    for q in range(len(starts)):
        seg = base[starts[q] : starts[q] + lengths[q]]
        for _ in range(depth):
            seg = _anchored_prefix_np(seg, zeros[q])
        out[q] = seg[targets[q]]
    return out


@njit(cache=True)
def antidiff_jit(base, starts, lengths, zeros, targets, depth):
    nq = starts.shape[0]
    out = np.empty(nq, dtype=base.dtype)
    for q in range(nq):
        L = lengths[q]
        z = zeros[q]
        seg = base[starts[q] : starts[q] + L].copy()
        nxt = np.empty_like(seg)
        for _ in range(depth):
            nxt[z] = 0.0
            for i in range(z + 1, L):
                nxt[i] = nxt[i - 1] + seg[i - 1]
            for i in range(z - 1, -1, -1):
                nxt[i] = nxt[i + 1] - seg[i]
            seg, nxt = nxt, seg
        out[q] = seg[targets[q]]
    return out


# ---------------------------------------------------------------------------
# periodic sawtooth
# ---------------------------------------------------------------------------


def sawtooth_np(x, h):
    x = np.asarray(x, dtype=np.float64)
    return np.abs(x - h * np.floor(x / h + 0.5))


@njit(cache=True)
def sawtooth_jit(x, h):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = abs(x[i] - h * np.floor(x[i] / h + 0.5))
    return out


if HAS_NUMBA:
    eliminate = eliminate_jit
    charpoly = charpoly_jit
    aberth = aberth_jit
    antidiff = antidiff_jit

    def sawtooth(x, h):
        x = np.asarray(x, dtype=np.float64)
        return sawtooth_jit(x.ravel(), float(h)).reshape(x.shape)

else:
    eliminate_jit = eliminate_np
    charpoly_jit = charpoly_np
    aberth_jit = aberth_np
    antidiff_jit = antidiff_np
    sawtooth_jit = sawtooth_np
    eliminate = eliminate_np
    charpoly = charpoly_np
    aberth = aberth_np
    antidiff = antidiff_np
    sawtooth = sawtooth_np

BACKEND = "numba" if HAS_NUMBA else "numpy"
