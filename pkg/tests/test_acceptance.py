"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import math
import sys
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from deltainv import (
    AmbientSpace,
    ExpPolynomial,
    SampledFamily,
    Subspace,
    apply,
    box_closure,
    build_counterexample,
    coordinates,
    decompose_PE,
    delta,
    diamond_closure,
    djokovic_check,
    is_invariant,
    limit_B,
    main2_equivalence,
    matrix_delta,
    mixed,
    montel_check,
    non_analytic_witness,
    run_recovery,
)
from deltainv.algebra import in_span, column_basis
from deltainv.counterexample import verify_period_multiple
from deltainv.errors import DegenerateStepError, TheoremViolation
from deltainv.exppoly import from_coordinates
from deltainv.sampling import random_ambient, random_invariant_subspace, random_subspace
from deltainv.spectral import (
    block_rank,
    delta_power_monomial,
    delta_power_monomial_direct,
    kernel_delta_power,
    matrix_power,
    stirling2,
)

E = ExpPolynomial


def criterion_1():
    results = [djokovic_check(s)[0] for s in range(1, 6)]
    return all(results), "exact equality for s=1..5: %s" % results


def criterion_2():
    rng = np.random.default_rng(2)
    worst, fails = 0.0, []
    done = 0
    while done < 50:
        m = int(rng.integers(1, 6))
        S = random_ambient(rng, max_blocks=3, max_mult=3, m0=m + int(rng.integers(0, 4)))
        h = float(rng.uniform(0.0, 2.0))
        if h == 0.0:
            continue
        try:
            K = kernel_delta_power(S, h, m)
        except DegenerateStepError:
            continue
        done += 1
        Q = column_basis(K)
        outside = float(np.max(np.abs(Q[m:, :]))) if Q.shape[1] and S.size > m else 0.0
        spans = all(in_span(np.eye(S.size)[:, k], Q, 1e-8) for k in range(m))
        Am = matrix_power(matrix_delta(S, h), m).dense()
        annihilated = float(np.max(np.abs(Am @ K))) / (1 + np.abs(Am).sum(1).max())
        worst = max(worst, outside, annihilated)
        if Q.shape[1] != m or not spans or outside > 1e-8 or annihilated > 1e-8:
            fails.append((S.freqs, h, m, Q.shape[1]))
    return not fails, "50 ambients, dim ker = m everywhere, worst deviation %.1e, failures %d" % (worst, len(fails))


def criterion_3():
    bad = []
    for h in (1, Fraction(1, 3), math.sqrt(2)):
        for m0 in range(1, 11):
            A0 = matrix_delta(AmbientSpace([(0, m0)]), h)
            for m in range(1, m0 + 1):
                r = block_rank(matrix_power(A0, m).block(0))
                if r != m0 - m:
                    bad.append((h, m0, m, r))
    return not bad, "rank(A0^m) = m0 - m for m0<=10, h in {1, 1/3, sqrt2}; mismatches %d" % len(bad)


def criterion_4():
    rng = np.random.default_rng(4)
    fails = 0
    for i in range(200):
        m = int(rng.integers(1, 4))
        V, _ = random_invariant_subspace(rng, m, max_degree=4, max_blocks=2, max_mult=2)
        steps = [float(x) for x in rng.uniform(0.2, 1.8, size=2) * rng.choice([-1, 1], size=2)]
        L = delta(0, 2) if i % 3 else mixed([0, 1], 2)
        S = delta(1, 2)
        if i % 2 == 0:
            W = box_closure(V, L, steps, m)
            ok = bool(is_invariant(W, L, steps)) and W.dim <= (m + 1) * V.dim and W.contains_subspace(V)
        else:
            W = diamond_closure(V, L, S, steps, m)
            ok = (
                bool(is_invariant(W, L, steps))
                and bool(is_invariant(W, S, steps))
                and W.dim <= (m + 1) ** 2 * V.dim
                and W.contains_subspace(V)
            )
        fails += not ok
    return fails == 0, "200 box/diamond instances, failures %d" % fails


def criterion_5():
    rng = np.random.default_rng(5)
    ts = np.linspace(-2, 2, 20)
    worst, wrong = 0.0, 0
    for _ in range(100):
        m = int(rng.integers(1, 6))
        deg = int(rng.integers(0, m))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1) * (rng.random() < 0.5)
        f = E.polynomial(c)
        v = montel_check(f, m, "1", "0+1*sqrt2")
        if v.verdict != "POLYNOMIAL":
            wrong += 1
            continue
        got = np.array([complex(a, b) for a, b in v.coeffs])
        vals = np.polyval(got[::-1], ts)
        worst = max(worst, float(np.max(np.abs(vals - f(ts)))))
    neg = [montel_check(E.exponential(lam), m, "1", "sqrt2").verdict for lam in (1, -0.5, 2j) for m in (1, 3)]
    neg += [montel_check(E.monomial(m), m, "1", "sqrt2").verdict for m in (1, 2, 4)]
    viol = montel_check(E.polynomial([1, 1]), 2, "2", "3").verdict
    ok = (
        wrong == 0
        and worst <= 1e-9
        and all(v == "DIFFERENCES_NONZERO" for v in neg)
        and viol == "HYPOTHESIS_VIOLATED"
    )
    return ok, "100 polynomials: %d wrong verdicts, max pointwise error %.1e; negatives %s; h=2,3 -> %s" % (
        wrong,
        worst,
        sorted(set(neg)),
        viol,
    )


def criterion_6():
    ce = build_counterexample(2, 2, 3, 1.0)
    grid = np.linspace(-5, 5, 200)
    r2 = verify_period_multiple(ce.f, 1.0, 2, 2, grid)
    r3 = verify_period_multiple(ce.f, 1.0, 2, 3, grid)
    w = non_analytic_witness(ce.f, np.arange(-5, 5.01, 0.5))
    rep = run_recovery(SampledFamily([ce.f], 2))
    ok = r2 <= 1e-9 and r3 <= 1e-9 and w is not None and rep.misfit > 1e-2
    return ok, "residuals %.1e, %.1e; witness at %s; misfit %.3f" % (
        r2,
        r3,
        None if w is None else w.point,
        rep.misfit,
    )


def criterion_7():
    one, t2, et = E.polynomial([1]), E.monomial(2), E.exponential(1)
    res = decompose_PE(Subspace([one, t2, et]), 2)
    P_ok = res.P.dim == 2 and res.P.contains(one) and res.P.contains(t2)
    E_ok = res.E.dim == 1 and res.E.contains(et)
    inv = is_invariant(res.P, delta(0), [1.0])
    ok = P_ok and E_ok and not inv and inv.witness == t2
    return ok, "dim P=%d, dim E=%d, Delta_1-invariant(P)=%s, witness %r" % (
        res.P.dim,
        res.E.dim,
        bool(inv),
        inv.witness,
    )


def criterion_8():
    rng = np.random.default_rng(8)
    disagree = missing = invariant = 0
    for i in range(1000):
        m = int(rng.integers(1, 4))
        if i % 2:
            V, _ = random_invariant_subspace(rng, m)
        else:
            V = random_subspace(rng)
        try:
            r = main2_equivalence(V, m, trials=6, seed=i)
        except TheoremViolation as exc:
            if "disagree" in str(exc):
                disagree += 1
            else:
                missing += 1
            continue
        invariant += r.power_invariant
        if r.top_degree is not None and not r.low_degree_contained:
            missing += 1
    ok = disagree == 0 and missing == 0
    return ok, "1000 subspaces (%d invariant): disagreements %d, Pi_{N-m} not in P %d" % (
        invariant,
        disagree,
        missing,
    )


def criterion_9():
    bad = 0
    for r in range(11):
        for m in range(11):
            lhs = sum(comb(m, k) * (-1) ** k * k**r for k in range(m + 1))
            bad += lhs != (-1) ** m * stirling2(r, m) * factorial(m)
    for h in (Fraction(1), Fraction(3, 7), Fraction(-2, 5)):
        for s in range(9):
            for m in range(9):
                bad += delta_power_monomial(s, m, h) != delta_power_monomial_direct(s, m, h)
    return bad == 0, "alternating-sum identity r,m<=10 and monomial differences s,m<=8: mismatches %d" % bad


def criterion_10():
    hs = (1e-2, 5e-3, 2.5e-3)
    fam = SampledFamily.from_exppolys([E.exponential(1), E.exponential(2)], 2)
    B = limit_B(fam, hs)
    eig = np.sort(np.linalg.eigvals(B).real)
    rep = run_recovery(fam, hs)
    found = [min(abs(mu - target) for mu, _ in rep.mu) for target in (1, 2)]
    Bp = limit_B(SampledFamily.from_exppolys([E.polynomial([1]), E.monomial(1)], 2), hs)
    ok = np.allclose(eig, [1, 4], atol=1e-4) and max(found) <= 1e-3 and np.max(np.abs(Bp)) <= 1e-8
    return ok, "eig(B) = %s, recovered distance %.1e, |B| for {1,t} = %.1e" % (
        np.round(eig, 6).tolist(),
        max(found),
        np.max(np.abs(Bp)),
    )


def criterion_11():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        S = random_ambient(rng, max_blocks=3, max_mult=3)
        c = rng.standard_normal(S.size) + 1j * rng.standard_normal(S.size)
        h = float(rng.uniform(-2, 2))
        f = from_coordinates(c, S)
        got = matrix_delta(S, h).apply(c)
        want = coordinates(apply(delta(0), f, [h]), S)
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst <= 1e-10, "50 triples, max |matrix - symbolic| = %.1e" % worst


CRITERIA = [
    (1, "Djokovic identity", criterion_1),
    (2, "kernel of Delta_h^m", criterion_2),
    (3, "rank formula", criterion_3),
    (4, "closure bounds", criterion_4),
    (5, "Montel check", criterion_5),
    (6, "sharpness counterexample", criterion_6),
    (7, "P + E decomposition", criterion_7),
    (8, "power vs mixed invariance", criterion_8),
    (9, "Stirling cross-check", criterion_9),
    (10, "frequency recovery", criterion_10),
    (11, "matrix vs symbolic action", criterion_11),
]


def _line(num, name, ok, detail):
    return "%s criterion %d (%s): %s" % ("PASS" if ok else "FAIL", num, name, detail)


@pytest.mark.parametrize("num, name, check", CRITERIA, ids=["criterion_%d" % c[0] for c in CRITERIA])
def test_criterion(num, name, check, acceptance_log):
    ok, detail = check()
    line = _line(num, name, ok, detail)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for num, name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(num, name, ok, detail))
    sys.exit(1 if failed else 0)
