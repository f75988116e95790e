"""
Invariant subspaces of exponential-polynomial spaces under differences.

A :class:`Subspace` is carried by generators inside an ambient space and
tested in coordinates.  "For every h" statements are checked at random
steps: the residual of ``Delta_h^m v`` outside ``V`` is an exponential
polynomial in ``h`` that either vanishes identically or only on a null
set, so sampling decides it with probability one.
"""

import re
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import algebra, spectral
from .algebra import DEFAULT_TOL
from .diffops import apply, delta, mixed, power
from .errors import (
    DegenerateStepError,
    HypothesisError,
    InputError,
    TheoremViolation,
)
from .exppoly import AmbientSpace, ExpPolynomial, coordinates, from_coordinates, hull

SQRT2 = 2.0**0.5

# ---------------------------------------------------------------------------
# steps in Q(sqrt 2)
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"[+-]?[^+-]+")


class ExactStep:
    """A step ``a + b*sqrt(2)`` with rational ``a``, ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def parse(cls, text):
        """Read ``"a"``, ``"a+b*sqrt2"``, ``"b*sqrt2"``, ``"-sqrt2"``, ...

        >>> ExactStep.parse("1/2-3*sqrt2")
        ExactStep(1/2, -3)
        """
        if isinstance(text, ExactStep):
            return text
        s = str(text).replace(" ", "").replace("sqrt(2)", "sqrt2")
        tokens = _TOKEN_RE.findall(s)
        if not s or "".join(tokens) != s:
            raise InputError("cannot parse step %r (expected 'a+b*sqrt2')" % text)
        a = b = Fraction(0)
        try:
            for tok in tokens:
                if tok.endswith("sqrt2"):
                    coef = tok[: -len("sqrt2")].rstrip("*")
                    b += Fraction(coef + "1") if coef in ("", "+", "-") else Fraction(coef)
                else:
                    a += Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise InputError("cannot parse step %r (expected 'a+b*sqrt2')" % text) from None
        return cls(a, b)

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT2

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def ratio_is_rational(self, other):
        """Whether ``self / other`` lies in Q, decided exactly.

        ``(a1 + b1 r)(a2 - b2 r) = (a1 a2 - 2 b1 b2) + (a2 b1 - a1 b2) r`` with
        ``r = sqrt 2`` irrational, so the ratio is rational iff
        ``a2 b1 == a1 b2``.
        """
        if other.is_zero():
            raise InputError("zero step")
        return self.a * other.b == other.a * self.b

    def __eq__(self, other):
        return isinstance(other, ExactStep) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return "ExactStep(%s, %s)" % (self.a, self.b)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        tail = "%s*sqrt2" % self.b
        if not self.a:
            return tail
        return "%s%s%s" % (self.a, "" if self.b < 0 else "+", tail)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """Span of exponential polynomials inside an ambient space.

    Dependent generators are dropped once, at construction; all
    containment tests run against the orthonormal coordinate basis ``Q``.
    """

    __slots__ = ("ambient", "gens", "coords", "Q", "tol")

    def __init__(self, gens, ambient=None, tol=DEFAULT_TOL, min_zero_mult=0):
        gens = list(gens)
        if ambient is None:
            if not gens:
                raise InputError("an empty subspace needs an explicit ambient space")
            ambient = hull(gens, min_zero_mult=min_zero_mult, tol=tol)
        elif min_zero_mult:
            ambient = ambient.with_zero_multiplicity(min_zero_mult)
        C = algebra.columns([coordinates(g, ambient, tol) for g in gens], ambient.size)
        keep = algebra.pivot_columns(C, tol) if C.shape[1] else []
        self.ambient = ambient
        self.gens = tuple(gens[i] for i in keep)
        self.coords = C[:, keep]
        self.Q = algebra.column_basis(self.coords, tol) if keep else self.coords
        self.tol = tol

    @classmethod
    def from_coords(cls, C, ambient, tol=DEFAULT_TOL):
        C = algebra.columns(C, ambient.size)
        gens = [from_coordinates(C[:, j], ambient) for j in range(C.shape[1])]
        return cls(gens, ambient, tol)

    @property
    def dim(self):
        return self.coords.shape[1]

    def __len__(self):
        return self.dim

    def __repr__(self):
        return "Subspace(dim=%d, ambient=%r)" % (self.dim, self.ambient)

    def residual(self, f):
        """Relative distance of ``f`` (or a coordinate vector) from the span."""
        v = f if isinstance(f, np.ndarray) else coordinates(f, self.ambient, self.tol)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return 0.0
        return algebra.span_residual(v, self.Q) / nv

    def contains(self, f):
        return self.residual(f) <= self.tol

    def contains_subspace(self, other):
        other = other.recoordinate(self.ambient) if other.ambient != self.ambient else other
        return algebra.subspace_ops(other.Q, self.Q, self.tol).contains

    def equals(self, other):
        return self.contains_subspace(other) and other.contains_subspace(self)

    def recoordinate(self, ambient):
        return Subspace(self.gens, ambient, self.tol)

    def to_dict(self):
        return {
            "ambient": self.ambient.to_list(),
            "generators": [g.to_dict() for g in self.gens],
        }

    @classmethod
    def from_dict(cls, data, tol=DEFAULT_TOL):
        if not isinstance(data, dict) or "generators" not in data:
            raise InputError("subspace JSON needs a 'generators' list")
        gens = [ExpPolynomial.from_dict(g, tol) for g in data["generators"]]
        ambient = AmbientSpace.from_list(data["ambient"], tol) if data.get("ambient") else None
        return cls(gens, ambient, tol)


def operator_matrix(op, steps, ambient, tol=DEFAULT_TOL):
    """Matrix of a difference operator on ``ambient``, column per basis element."""
    cols = [coordinates(apply(op, b, steps), ambient, tol) for b in ambient.basis()]
    return np.stack(cols, axis=1)


InvarianceResult = namedtuple("InvarianceResult", ["invariant", "witness", "residual"])
InvarianceResult.__bool__ = lambda self: bool(self.invariant)


def _invariance_by_matrix(V, M):
    scale = 1.0 + algebra.inf_norm(M)
    worst, witness = 0.0, None
    for j in range(V.dim):
        g = V.coords[:, j]
        g = g / np.linalg.norm(g)
        r = algebra.span_residual(M @ g, V.Q) / scale
        if r > worst:
            worst, witness = r, j
    if worst > V.tol:
        return InvarianceResult(False, V.gens[witness], worst)
    return InvarianceResult(True, None, worst)


def is_invariant(V, op, steps):
    """Whether ``op(g)`` lies in ``V`` for every generator ``g``.

    The residual is measured relative to ``1 + ||op||``; on failure the
    violating generator is returned as the witness.
    """
    return _invariance_by_matrix(V, operator_matrix(op, steps, V.ambient, V.tol))


def _power_matrix(M, k):
    return np.linalg.matrix_power(M, k) if k else np.eye(M.shape[0], dtype=np.complex128)


def _box(V, M, m, what):
    Mm = _power_matrix(M, m)
    chk = _invariance_by_matrix(V, Mm)
    if not chk:
        raise HypothesisError(
            "%s^%d does not map V into V; witness generator %r (residual %.3e)"
            % (what, m, chk.witness, chk.residual),
            witness=chk.witness,
        )
    vecs = [V.coords]
    cur = V.coords
    for _ in range(m):
        cur = M @ cur
        vecs.append(cur)
    W = Subspace.from_coords(np.hstack(vecs), V.ambient, V.tol)
    return W


def box_closure(V, L, steps, m):
    """``V + L V + ... + L^m V``, the smallest ``L``-invariant space over ``V``.

    Requires ``L^m V <= V``.
    """
    M = operator_matrix(L, steps, V.ambient, V.tol)
    W = _box(V, M, m, "L")
    if not _invariance_by_matrix(W, M):
        raise TheoremViolation("box closure is not L-invariant")
    if W.dim > (m + 1) * V.dim:
        raise TheoremViolation("box closure has dimension %d > (m+1) dim V" % W.dim)
    return W


def diamond_closure(V, L, S, steps, m):
    """Box closure under ``L`` followed by box closure under ``S``.

    ``L`` and ``S`` are operators over the same symbolic steps, bound to
    ``steps``.  Requires ``L^m V`` and ``S^m V`` inside ``V``.
    """
    ML = operator_matrix(L, steps, V.ambient, V.tol)
    MS = operator_matrix(S, steps, V.ambient, V.tol)
    chk = _invariance_by_matrix(V, _power_matrix(MS, m))
    if not chk:
        raise HypothesisError(
            "S^%d does not map V into V; witness generator %r" % (m, chk.witness),
            witness=chk.witness,
        )
    W1 = _box(V, ML, m, "L")
    try:
        W = _box(W1, MS, m, "S")
    except HypothesisError as exc:
        raise TheoremViolation("S^m fails to preserve the L-box closure: %s" % exc) from None
    if not _invariance_by_matrix(W, ML) or not _invariance_by_matrix(W, MS):
        raise TheoremViolation("diamond closure is not invariant under both operators")
    if W.dim > (m + 1) ** 2 * V.dim:
        raise TheoremViolation("diamond closure has dimension %d > (m+1)^2 dim V" % W.dim)
    return W


# ---------------------------------------------------------------------------
# Montel check
# ---------------------------------------------------------------------------

POLYNOMIAL = "POLYNOMIAL"
DIFFERENCES_NONZERO = "DIFFERENCES_NONZERO"
HYPOTHESIS_VIOLATED = "HYPOTHESIS_VIOLATED"


@dataclass
class MontelVerdict:
    verdict: str
    coeffs: Optional[list] = None
    witness: Optional[dict] = None

    def to_dict(self):
        out = {"verdict": self.verdict}
        if self.coeffs is not None:
            out["coeffs"] = self.coeffs
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def montel_check(f, m, h1, h2, tol=DEFAULT_TOL):
    """Decide whether ``Delta_{h1}^m f = Delta_{h2}^m f = 0`` forces ``f`` into ``Pi_{m-1}``.

    Steps are :class:`ExactStep` values so that ``h1/h2 in Q`` is decided
    exactly.  The differences are computed symbolically.
    """
    h1, h2 = ExactStep.parse(h1), ExactStep.parse(h2)
    if m < 1:
        raise InputError("montel_check needs m >= 1")
    if h1.is_zero() or h2.is_zero():
        raise InputError("steps must be nonzero")
    if h1.ratio_is_rational(h2):
        return MontelVerdict(
            HYPOTHESIS_VIOLATED, witness={"h1": str(h1), "h2": str(h2), "ratio_rational": True}
        )
    op = power(delta(0, 1), m)
    for name, h in (("h1", h1), ("h2", h2)):
        d = apply(op, f, [float(h)], tol=tol)
        if not d.is_zero():
            return MontelVerdict(
                DIFFERENCES_NONZERO,
                witness={"step": name, "value": str(h), "max_coeff": float(d.max_abs_coeff())},
            )
    thresh = tol * (1.0 + f.max_abs_coeff())
    g = f.chop(thresh)
    if not g.is_polynomial() or (g.terms and g.terms[0][1].degree > m - 1):
        raise TheoremViolation(
            "both differences vanish with h1/h2 irrational but %r is not in Pi_%d" % (f, m - 1)
        )
    p = g.poly(0)
    coeffs = [complex(c) for c in p.coeffs] + [0j] * (m - len(p.coeffs))
    return MontelVerdict(POLYNOMIAL, coeffs=[[c.real, c.imag] for c in coeffs])


def montel_kernel_route(f, m, h1, h2, tol=DEFAULT_TOL):
    """Matrix route: is ``f`` in ``ker A(h1)^m`` and ``ker A(h2)^m``?"""
    S = hull([f], min_zero_mult=m, tol=tol)
    c = coordinates(f, S, tol)
    c = c / np.linalg.norm(c)
    for h in (h1, h2):
        A = spectral.matrix_power(spectral.matrix_delta(S, float(ExactStep.parse(h))), m).dense()
        if np.linalg.norm(A @ c) > tol * (1.0 + algebra.inf_norm(A)):
            return False
    return True


# ---------------------------------------------------------------------------
# P + E decomposition
# ---------------------------------------------------------------------------

IRRATIONAL_PROBE = ExactStep(Fraction(1, 2), Fraction(1, 3))


@dataclass
class DecompositionResult:
    P: Subspace
    E: Subspace
    certificate: list = field(default_factory=list)
    h: float = 0.0

    def to_dict(self):
        return {
            "P": self.P.to_dict(),
            "E": self.E.to_dict(),
            "dim_P": self.P.dim,
            "dim_E": self.E.dim,
            "certificate": [
                {"lambda": [c["lambda"].real, c["lambda"].imag], "prefix": c["prefix"], "block_dim": c["block_dim"]}
                for c in self.certificate
            ],
            "h": self.h,
        }


def _delta_power_dense(S, h, m):
    return spectral.matrix_power(spectral.matrix_delta(S, h), m).dense()


def check_power_invariance(V, m, hs):
    """First step in ``hs`` at which ``Delta_h^m V <= V`` fails, else ``None``."""
    for h in hs:
        if not _invariance_by_matrix(V, _delta_power_dense(V.ambient, float(h), m)):
            return float(h)
    return None


def decompose_PE(V, m, seed=0, max_retries=8):
    """Split a ``Delta^m``-invariant ``V`` as ``P (+) E``.

    ``P`` is the polynomial part and ``E`` the translation-invariant part;
    every block of ``E`` is certified as a coordinate prefix of its root
    subspace, hence translation invariant.
    """
    if m < 1:
        raise InputError("decompose_PE needs m >= 1")
    rng = np.random.default_rng(seed)
    S = V.ambient
    probes = list(rng.uniform(0.0, 2.0, size=S.size + 1)) + [float(IRRATIONAL_PROBE)]
    bad = check_power_invariance(V, m, [h for h in probes if h > 0])
    if bad is not None:
        raise HypothesisError("V is not Delta_h^%d-invariant at h=%r" % (m, bad), witness=bad)

    roots = None
    for _ in range(max_retries):
        h = float(rng.uniform(0.05, 2.0))
        try:
            roots = spectral.root_decomposition(S, h, m, V.tol)
            break
        except DegenerateStepError:
            continue
    if roots is None:
        raise DegenerateStepError("no usable step found after %d attempts" % max_retries)

    Am = spectral.matrix_power(spectral.matrix_delta(S, h), m)
    n = S.size
    p_cols, e_cols, cert = [], [], []
    for rb in roots:
        idx = list(rb.indices)
        R = np.eye(n, dtype=np.complex128)[:, idx]
        inter = algebra.subspace_ops(V.Q, R, V.tol).intersection
        if rb.block == 0:
            p_cols.append(inter)
            continue
        block = Am.block(rb.block)
        spectral.check_chain_block(block, V.tol)
        k = spectral.is_chain_prefix(inter[idx, :], len(idx), V.tol)
        if k is None:
            raise TheoremViolation("V meets the root subspace of %s in a non-prefix span" % S.freqs[rb.block][0])
        e_cols.append(inter)
        cert.append({"lambda": S.freqs[rb.block][0], "prefix": k, "block_dim": len(idx)})

    def assemble(parts):
        C = np.hstack(parts) if parts else np.zeros((n, 0), dtype=np.complex128)
        C = algebra.echelon_basis(C, V.tol) if C.shape[1] else C
        return Subspace.from_coords(C, S, V.tol)

    P, E = assemble(p_cols), assemble(e_cols)
    if P.dim + E.dim != V.dim:
        raise TheoremViolation(
            "dim P + dim E = %d + %d differs from dim V = %d" % (P.dim, E.dim, V.dim)
        )
    return DecompositionResult(P, E, cert, h)


# ---------------------------------------------------------------------------
# Delta_h^m invariance versus mixed-difference invariance
# ---------------------------------------------------------------------------


@dataclass
class Main2Report:
    m: int
    trials: int
    power_invariant: bool
    mixed_invariant: bool
    power_witness: Optional[float] = None
    mixed_witness: Optional[list] = None
    top_degree: Optional[int] = None
    low_degree_contained: Optional[bool] = None

    @property
    def agree(self):
        return self.power_invariant == self.mixed_invariant

    def to_dict(self):
        return {
            "m": self.m,
            "trials": self.trials,
            "power_invariant": self.power_invariant,
            "mixed_invariant": self.mixed_invariant,
            "agree": self.agree,
            "power_witness": self.power_witness,
            "mixed_witness": self.mixed_witness,
            "top_degree": self.top_degree,
            "low_degree_contained": self.low_degree_contained,
        }


def _random_steps(rng, size):
    mag = rng.uniform(0.1, 2.0, size=size)
    sign = rng.choice([-1.0, 1.0], size=size)
    return mag * sign


def polynomial_part(V):
    """``V`` intersected with the polynomial block, as a coordinate basis."""
    S = V.ambient
    idx = list(S.block_range(0))
    if not idx:
        return np.zeros((S.size, 0), dtype=np.complex128)
    R = np.eye(S.size, dtype=np.complex128)[:, idx]
    return algebra.subspace_ops(V.Q, R, V.tol).intersection


def main2_equivalence(V, m, trials=8, seed=0):
    """Sample ``Delta_h^m``-invariance and ``Delta_{h1..hm}``-invariance of ``V``.

    Also checks that the polynomial part of an invariant ``V`` with top
    degree ``N`` contains every polynomial of degree at most ``N - m``.
    Disagreement between the two invariance verdicts raises
    :class:`TheoremViolation`.
    """
    if m < 1:
        raise InputError("main2_equivalence needs m >= 1")
    rng = np.random.default_rng(seed)
    S = V.ambient

    power_ok, power_witness = True, None
    for h in _random_steps(rng, trials):
        if not _invariance_by_matrix(V, _delta_power_dense(S, float(h), m)):
            power_ok, power_witness = False, float(h)
            break

    op = mixed(range(m), m)
    mixed_ok, mixed_witness = True, None
    for _ in range(trials):
        steps = [float(x) for x in _random_steps(rng, m)]
        if not _invariance_by_matrix(V, operator_matrix(op, steps, S, V.tol)):
            mixed_ok, mixed_witness = False, steps
            break

    report = Main2Report(m, trials, power_ok, mixed_ok, power_witness, mixed_witness)
    if not report.agree:
        raise TheoremViolation(
            "Delta_h^%d invariance (%s) and mixed invariance (%s) disagree"
            % (m, power_ok, mixed_ok)
        )
    if power_ok:
        P = polynomial_part(V)
        if P.shape[1]:
            idx = list(S.block_range(0))
            mags = np.max(np.abs(P[idx, :]), axis=1)
            nz = np.nonzero(mags > V.tol)[0]
            N = int(nz.max())
            report.top_degree = N
            Q = algebra.column_basis(P, V.tol)
            report.low_degree_contained = all(
                algebra.in_span(np.eye(S.size)[:, idx[k]], Q, V.tol) for k in range(N - m + 1)
            )
            if not report.low_degree_contained:
                raise TheoremViolation("Pi_{N-m} is not contained in the polynomial part")
    return report
