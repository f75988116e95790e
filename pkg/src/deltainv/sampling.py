"""Random ambient spaces and subspaces for randomized checks and benchmarks."""

import numpy as np

from .exppoly import AmbientSpace, from_coordinates
from .invariance import Subspace


def random_frequency(rng, scale=1.5):
    """A nonzero frequency, real or complex, with modest real part."""
    re = rng.uniform(-scale, scale)
    im = rng.uniform(-scale, scale) if rng.random() < 0.5 else 0.0
    if abs(re) < 0.1 and abs(im) < 0.1:
        re += 0.5
    return complex(round(re, 3), round(im, 3))


def random_ambient(rng, max_blocks=3, max_mult=3, m0=None):
    """Zero block of multiplicity ``m0`` (random if ``None``) plus random exponential blocks."""
    m0 = int(rng.integers(0, max_mult + 1)) if m0 is None else m0
    freqs = [(0, m0)]
    for _ in range(int(rng.integers(0, max_blocks + 1))):
        lam = random_frequency(rng)
        if all(abs(lam - mu) > 0.2 for mu, _ in freqs):
            freqs.append((lam, int(rng.integers(1, max_mult + 1))))
    if sum(k for _, k in freqs) == 0:
        freqs[0] = (0, 1)
    return AmbientSpace(freqs)


def _mix(rng, C):
    k = C.shape[1]
    if k == 0:
        return C
    G = rng.standard_normal((k, k)) + np.eye(k) * 3.0
    return C @ G


def random_invariant_subspace(rng, m, max_degree=5, max_blocks=2, max_mult=3):
    """A ``Delta^m``-invariant subspace: ``Pi_{N-m} + random polynomials of degree <= N`` plus chain prefixes.

    Returns ``(V, N)`` where ``N`` is the top polynomial degree (or ``None``).
    """
    N = int(rng.integers(m, max_degree + 1))
    S = random_ambient(rng, max_blocks, max_mult, m0=N + 1)
    n = S.size
    cols = []
    eye = np.eye(n, dtype=np.complex128)
    low = N - m + 1
    cols.extend(eye[:, k] for k in range(low))
    top = np.zeros(n, dtype=np.complex128)
    top[low : N + 1] = rng.standard_normal(N + 1 - low)
    top[N] = 1.0 + abs(top[N])
    cols.append(top)
    for _ in range(int(rng.integers(0, m))):
        v = np.zeros(n, dtype=np.complex128)
        v[low : N + 1] = rng.standard_normal(N + 1 - low)
        cols.append(v)
    for i in range(1, len(S.freqs)):
        r = S.block_range(i)
        k = int(rng.integers(0, len(r) + 1))
        cols.extend(eye[:, r[j]] for j in range(k))
    C = _mix(rng, np.stack(cols, axis=1))
    gens = [from_coordinates(C[:, j], S) for j in range(C.shape[1])]
    return Subspace(gens, S), N


def random_subspace(rng, max_blocks=2, max_mult=3, max_dim=4):
    """Span of a few random generators; usually not invariant."""
    S = random_ambient(rng, max_blocks, max_mult)
    k = int(rng.integers(1, max(1, min(max_dim, S.size - 1)) + 1))
    C = rng.standard_normal((S.size, k)) + 1j * rng.standard_normal((S.size, k)) * (rng.random() < 0.3)
    gens = [from_coordinates(C[:, j], S) for j in range(k)]
    return Subspace(gens, S)
