"""
Recovering exponential-polynomial structure from sampled functions.

For a family ``F = (f_1..f_N)`` the matrix ``A(h)`` is fixed by requiring
``Delta_h^m F(t_i) = A(h) F(t_i)`` at ``N`` collocation points.  The
scaled matrices ``A(h)/h^m`` are extrapolated to ``h = 0``, giving ``B``
with ``F^(m) = B F`` whenever the family spans a translation-invariant
space.  Writing that ODE as a first-order system gives the companion
matrix, whose eigenvalues are the candidate frequencies.  Candidates are
then tested by a least-squares fit of the samples.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .algebra import DEFAULT_TOL
from .errors import ConvergenceError, InputError, SingularCollocationError
from .exppoly import ExpPolynomial, evaluate

DEFAULT_H_SEQUENCE = (1e-2, 5e-3, 2.5e-3)
COLLOCATION_RETRY_OFFSET = 0.37
CLUSTER_RADIUS = 1e-2
CONTRIBUTION_FLOOR = 1e-6


# ---------------------------------------------------------------------------
# mollification
# ---------------------------------------------------------------------------


def bump_weights(nodes=64):
    """Nodes in ``[-1, 1]`` and trapezoid weights of the bump ``exp(-1/(1-u^2))``, unit mass."""
    u = np.linspace(-1.0, 1.0, nodes)
    inner = np.abs(u) < 1.0
    psi = np.zeros_like(u)
    psi[inner] = np.exp(-1.0 / (1.0 - u[inner] ** 2))
    w = psi.copy()
    w[0] *= 0.5
    w[-1] *= 0.5
    return u, w / w.sum()


def mollify(f, width, nodes=64):
    """Convolution of ``f`` with the bump kernel scaled to support ``[-width, width]``."""
    if not width > 0:
        raise InputError("mollifier width must be positive")
    u, w = bump_weights(nodes)

    def smoothed(t):
        t = np.asarray(t, dtype=np.float64)
        pts = t[..., None] - width * u
        vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
        out = vals @ w
        return out if out.ndim else out.item()

    return smoothed


# ---------------------------------------------------------------------------
# sampled families
# ---------------------------------------------------------------------------


def _exp_callable(f):
    return lambda t: evaluate(f, np.asarray(t, dtype=np.float64))


def _interp_callable(ts, vs):
    ts = np.asarray(ts, dtype=np.float64)
    vs = np.asarray(vs, dtype=np.float64)
    order = np.argsort(ts)
    ts, vs = ts[order], vs[order]
    return lambda t: np.interp(np.asarray(t, dtype=np.float64), ts, vs)


def read_csv_samples(text):
    """``(t, value)`` arrays from CSV text with a ``t,value`` header."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["t", "value"]:
        raise InputError("CSV samples need the header 't,value'")
    ts, vs = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            t, v = (float(x) for x in row)
        except ValueError:
            raise InputError("bad CSV row at line %d: %r" % (lineno, row)) from None
        ts.append(t)
        vs.append(v)
    if len(ts) < 2:
        raise InputError("CSV samples need at least two rows")
    return np.array(ts), np.array(vs)


class SampledFamily:
    """``N`` functions on ``(0, inf)`` with collocation points and an order ``m``.

    Collocation defaults to ``t_i = i``; if the collocation matrix
    ``col[F(t_1)..F(t_N)]`` is singular the points move to ``i + 0.37``.
    """

    def __init__(self, funcs, m, colloc=None, tol=DEFAULT_TOL, labels=None):
        self.funcs = list(funcs)
        if not self.funcs:
            raise InputError("a sampled family needs at least one function")
        if m < 1:
            raise InputError("order m must be >= 1")
        self.m = int(m)
        self.tol = tol
        self.labels = labels
        N = len(self.funcs)
        tries = [np.asarray(colloc, dtype=np.float64)] if colloc is not None else [
            np.arange(1, N + 1, dtype=np.float64),
            np.arange(1, N + 1, dtype=np.float64) + COLLOCATION_RETRY_OFFSET,
        ]
        for pts in tries:
            if pts.shape != (N,) or np.any(pts <= 0) or np.any(np.diff(pts) <= 0):
                raise InputError("collocation needs %d increasing positive points" % N)
            C = self.values(pts)
            if algebra.rank(C, tol) == N:
                self.colloc, self.C = pts, C
                break
        else:
            raise SingularCollocationError(
                "collocation matrix is singular at %s; choose other points" % list(tries[-1])
            )

    @classmethod
    def from_exppolys(cls, fs, m, colloc=None, tol=DEFAULT_TOL):
        return cls([_exp_callable(f) for f in fs], m, colloc, tol)

    @classmethod
    def from_samples(cls, samples, m, colloc=None, tol=DEFAULT_TOL):
        """``samples`` is a list of ``(t, value)`` array pairs, one per function."""
        return cls([_interp_callable(ts, vs) for ts, vs in samples], m, colloc, tol)

    def __len__(self):
        return len(self.funcs)

    def values(self, t):
        """``N x len(t)`` matrix with columns ``F(t_j)``."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return np.stack([np.asarray(f(t), dtype=np.complex128).reshape(t.shape) for f in self.funcs])

    def differences(self, t, h):
        """``Delta_h^m F`` at the points ``t``, by the binomial formula."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = np.zeros((len(self), len(t)), dtype=np.complex128)
        w = 1.0
        m = self.m
        for k in range(m + 1):
            # w = C(m, k) (-1)^(m-k)
            coef = w * (-1) ** (m - k)
            out += coef * self.values(t + k * h)
            w = w * (m - k) / (k + 1)
        return out


def difference_matrix(fam, h):
    """``A(h) = col[Delta_h^m F(t_i)] col[F(t_i)]^{-1}``."""
    if not h > 0:
        raise InputError("step must be positive")
    D = fam.differences(fam.colloc, h)
    return np.linalg.solve(fam.C.T, D.T).T


def _neville_zero(hs, Qs):
    """Table of polynomial extrapolants to ``h = 0``; ``T[k][j]`` uses nodes ``k-j..k``."""
    T = [[Q] for Q in Qs]
    for k in range(1, len(hs)):
        for j in range(1, k + 1):
            h_lo, h_hi = hs[k - j], hs[k]
            T[k].append((h_lo * T[k][j - 1] - h_hi * T[k - 1][j - 1]) / (h_lo - h_hi))
    return T


def limit_B(fam, h_sequence=DEFAULT_H_SEQUENCE, report=None):
    """Extrapolated ``lim_{h->0} A(h)/h^m``.

    Richardson/Neville extrapolation over the whole sequence.  If ``report``
    is a dict, it receives the per-step table and the extrapolation residual.
    Raises :class:`ConvergenceError` when successive scaled matrices move
    apart instead of settling.
    """
    hs = [float(h) for h in h_sequence]
    if len(hs) < 3:
        raise InputError("limit_B needs at least three steps")
    if any(h <= 0 for h in hs) or any(b >= a for a, b in zip(hs, hs[1:])):
        raise InputError("h sequence must be strictly decreasing and positive")
    Qs = [difference_matrix(fam, h) / h**fam.m for h in hs]
    T = _neville_zero(hs, Qs)
    B = T[-1][-1]
    steps = [float(np.max(np.abs(b - a))) for a, b in zip(Qs, Qs[1:])]
    scale = 1.0 + max(algebra.inf_norm(Q) for Q in Qs)
    floor = 1e-6 * scale
    table = [{"h": h, "max_abs": float(np.max(np.abs(Q)))} for h, Q in zip(hs, Qs)]
    for row, d in zip(table[1:], steps):
        row["change"] = d
    growing = any(b > 1.5 * a and b > floor for a, b in zip(steps, steps[1:]))
    residual = float(np.max(np.abs(T[-1][-1] - T[-1][-2])))
    if growing:
        raise ConvergenceError("A(h)/h^m does not settle as h decreases", table=table)
    if report is not None:
        report["table"] = table
        report["extrapolation_residual"] = residual
    return B


def companion_system(B, m):
    """First-order form of ``E^(m) = B E``: identity blocks above the diagonal, ``B`` bottom-left."""
    B = algebra.as_matrix(B)
    N = B.shape[0]
    if B.shape[1] != N:
        raise InputError("B must be square")
    if m < 1:
        raise InputError("m must be >= 1")
    if m == 1:
        return B.copy()
    M = np.zeros((m * N, m * N), dtype=np.complex128)
    for k in range(m - 1):
        M[k * N : (k + 1) * N, (k + 1) * N : (k + 2) * N] = np.eye(N)
    M[(m - 1) * N :, :N] = B
    return M


# ---------------------------------------------------------------------------
# frequency recovery
# ---------------------------------------------------------------------------


@dataclass
class RecoveryReport:
    family: SampledFamily
    B: np.ndarray
    companion: np.ndarray
    residuals: dict = field(default_factory=dict)
    candidates: list = field(default_factory=list)
    mu: list = field(default_factory=list)
    misfit: float = float("nan")

    def to_dict(self):
        pair = lambda z: [float(np.real(z)), float(np.imag(z))]
        return {
            "B": [[pair(x) for x in row] for row in self.B],
            "companion_shape": list(self.companion.shape),
            "candidates": [{"mu": pair(c), "multiplicity": k} for c, k in self.candidates],
            "mu": [{"mu": pair(c), "multiplicity": k} for c, k in self.mu],
            "misfit": self.misfit,
            "residuals": self.residuals,
        }


def build_report(fam, h_sequence=DEFAULT_H_SEQUENCE):
    diag = {}
    B = limit_B(fam, h_sequence, report=diag)
    return RecoveryReport(fam, B, companion_system(B, fam.m), residuals=diag)


def _cluster(values, radius=CLUSTER_RADIUS):
    groups = []
    for z in values:
        for g in groups:
            if abs(np.mean(g) - z) <= radius:
                g.append(z)
                break
        else:
            groups.append([z])
    out = [(complex(np.mean(g)), len(g)) for g in groups]
    return sorted(out, key=lambda c: (round(c[0].real, 9), round(c[0].imag, 9)))


def _design(cands, t):
    cols = []
    for mu, k in cands:
        e = np.exp(mu * t)
        for j in range(k):
            cols.append(t**j * e)
    return np.stack(cols, axis=1) if cols else np.zeros((len(t), 0))


def _fit(cands, t, Y):
    X = _design(cands, t)
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    resid = Y - X @ coef
    misfit = float(np.linalg.norm(resid) / max(np.linalg.norm(Y), 1e-300))
    return X, coef, misfit


def default_fit_grid(fam, count=200):
    lo = 0.25
    hi = float(fam.colloc[-1]) + fam.m + 2.0
    return np.linspace(lo, hi, count)


def frequency_recovery(report, grid=None, tol=DEFAULT_TOL):
    """Candidate frequencies from the companion spectrum, filtered by a least-squares fit.

    Each candidate ``mu`` of multiplicity ``k`` contributes the columns
    ``t^j e^{mu t}``, ``j < k``.  Columns whose fitted contribution is
    negligible are dropped and the fit repeated; ``report.misfit`` is the
    relative residual of the final fit.  Returns ``report.mu``.
    """
    fam = report.family
    eig = algebra.eigenvalues_small(report.companion, tol=max(tol, 1e-8))
    cands = _cluster(eig)
    report.candidates = cands
    t = default_fit_grid(fam) if grid is None else np.asarray(grid, dtype=np.float64)
    Y = fam.values(t).T
    X, coef, _ = _fit(cands, t, Y)
    ynorm = max(float(np.linalg.norm(Y)), 1e-300)
    kept, c = [], 0
    for mu, k in cands:
        contrib = max(
            float(np.linalg.norm(np.outer(X[:, c + j], coef[c + j]))) for j in range(k)
        ) / ynorm
        used = [j for j in range(k) if np.linalg.norm(np.outer(X[:, c + j], coef[c + j])) / ynorm > CONTRIBUTION_FLOOR]
        if contrib > CONTRIBUTION_FLOOR:
            kept.append((mu, max(used) + 1))
        c += k
    if not kept:
        kept = cands
    _, _, misfit = _fit(kept, t, Y)
    report.mu = kept
    report.misfit = misfit
    report.residuals["misfit"] = misfit
    return kept


def equation_residual(fam, h, points):
    """``max |Delta_h^m F(t) - A(h) F(t)|`` relative to ``max |F|`` at off-collocation points."""
    A = difference_matrix(fam, h)
    lhs = fam.differences(points, h)
    F = fam.values(points)
    return float(np.max(np.abs(lhs - A @ F)) / max(np.max(np.abs(F)), 1e-300))


def run_recovery(fam, h_sequence=DEFAULT_H_SEQUENCE, grid=None, tol=DEFAULT_TOL):
    """Full pipeline: ``B``, companion matrix and filtered frequencies."""
    report = build_report(fam, h_sequence)
    frequency_recovery(report, grid, tol)
    return report


def family_from_json(data, m, tol=DEFAULT_TOL):
    """Family from a JSON list of exponential polynomials (or ``{"family": [...]}``)."""
    if isinstance(data, dict):
        data = data.get("family")
    if not isinstance(data, list):
        raise InputError("family JSON must be a list of exponential polynomials")
    return SampledFamily.from_exppolys([ExpPolynomial.from_dict(d, tol) for d in data], m, tol=tol)
