from fractions import Fraction

import numpy as np
import pytest

from deltainv import (
    ExactStep,
    ExpPolynomial,
    Subspace,
    box_closure,
    decompose_PE,
    delta,
    diamond_closure,
    is_invariant,
    main2_equivalence,
    montel_check,
)
from deltainv.errors import HypothesisError, InputError
from deltainv.invariance import montel_kernel_route, polynomial_part
from deltainv.sampling import random_invariant_subspace, random_subspace

ONE = ExpPolynomial.polynomial([1])
T = ExpPolynomial.monomial(1)
T2 = ExpPolynomial.monomial(2)
ET = ExpPolynomial.exponential(1)


@pytest.mark.parametrize(
    "text, a, b",
    [
        ("1", 1, 0),
        ("0+1*sqrt2", 0, 1),
        ("1/2-3*sqrt2", Fraction(1, 2), -3),
        ("-sqrt2", 0, -1),
        ("2+sqrt(2)", 2, 1),
    ],
)
def test_exact_step_parse(text, a, b):
    s = ExactStep.parse(text)
    assert (s.a, s.b) == (a, b)


@pytest.mark.parametrize("bad", ["x", "1+", "sqrt3", ""])
def test_exact_step_rejects(bad):
    with pytest.raises(InputError):
        ExactStep.parse(bad)


def test_exact_step_ratio():
    assert ExactStep.parse("2").ratio_is_rational(ExactStep.parse("3"))
    assert not ExactStep.parse("1").ratio_is_rational(ExactStep.parse("sqrt2"))
    assert ExactStep.parse("2*sqrt2").ratio_is_rational(ExactStep.parse("sqrt2"))
    assert str(ExactStep.parse("1/2-3*sqrt2")) == "1/2-3*sqrt2"


def test_subspace_drops_dependent_generators():
    V = Subspace([ONE, T, ONE * 2 + T])
    assert V.dim == 2


def test_subspace_json_roundtrip():
    V = Subspace([ONE, ET])
    W = Subspace.from_dict(V.to_dict())
    assert W.equals(V)


def test_is_invariant_witness():
    P = Subspace([ONE, T2])
    res = is_invariant(P, delta(0), [1.0])
    assert not res
    assert res.witness == T2
    assert is_invariant(Subspace([ONE, T, T2]), delta(0), [0.3])


def test_box_closure_example():
    W = box_closure(Subspace([ONE, T2]), delta(0), [1.0], 2)
    assert W.dim == 3
    assert W.contains(T)


def test_box_closure_hypothesis():
    with pytest.raises(HypothesisError):
        box_closure(Subspace([T2]), delta(0), [1.0], 1)


def test_diamond_closure_bound():
    V = Subspace([ONE, T2, ET])
    W = diamond_closure(V, delta(0, 2), delta(1, 2), [1.0, 0.4], 2)
    assert W.dim <= 9 * V.dim
    assert is_invariant(W, delta(0, 2), [1.0, 0.4]) and is_invariant(W, delta(1, 2), [1.0, 0.4])


def test_montel_verdicts():
    f = ExpPolynomial.polynomial([3, 2])
    v = montel_check(f, 2, "1", "0+1*sqrt2")
    assert v.verdict == "POLYNOMIAL"
    assert np.allclose(v.coeffs, [[3, 0], [2, 0]])
    assert montel_check(ET, 2, "1", "sqrt2").verdict == "DIFFERENCES_NONZERO"
    assert montel_check(T2, 2, "1", "sqrt2").verdict == "DIFFERENCES_NONZERO"
    assert montel_check(f, 2, "2", "3").verdict == "HYPOTHESIS_VIOLATED"


def test_montel_kernel_route_agrees():
    f = ExpPolynomial.polynomial([1, -2, 0.5])
    assert montel_kernel_route(f, 3, "1", "sqrt2")
    assert not montel_kernel_route(f, 2, "1", "sqrt2")


def test_decompose_example():
    res = decompose_PE(Subspace([ONE, T2, ET]), 2)
    assert res.P.dim == 2 and res.E.dim == 1
    assert res.P.equals(Subspace([ONE, T2], res.P.ambient))
    assert res.E.contains(ET)


def test_decompose_chain_prefix():
    te = ExpPolynomial.monomial(1, 1)
    res = decompose_PE(Subspace([ONE, ET, te]), 1)
    assert res.E.dim == 2
    assert res.certificate[0]["prefix"] == 2


def test_decompose_rejects_non_invariant():
    with pytest.raises(HypothesisError):
        decompose_PE(Subspace([ExpPolynomial.monomial(1, 1)]), 2)


def test_main2_example():
    r = main2_equivalence(Subspace([ONE, T2, ET]), 2)
    assert r.power_invariant and r.mixed_invariant
    assert r.top_degree == 2 and r.low_degree_contained


def test_polynomial_part():
    V = Subspace([ONE + ET, T])
    assert polynomial_part(V).shape[1] == 1


def test_random_invariant_subspaces_decompose():
    rng = np.random.default_rng(7)
    for i in range(40):
        m = int(rng.integers(1, 4))
        V, N = random_invariant_subspace(rng, m)
        res = decompose_PE(V, m, seed=i)
        assert res.P.dim + res.E.dim == V.dim
        r = main2_equivalence(V, m, seed=i)
        assert r.power_invariant and r.top_degree == N


def test_random_subspaces_agree():
    rng = np.random.default_rng(8)
    for i in range(60):
        V = random_subspace(rng)
        assert main2_equivalence(V, int(rng.integers(1, 4)), seed=i).agree


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_one_plus_top_monomial(m):
    top = ExpPolynomial.monomial(m)
    V = Subspace([ONE, top])
    res = decompose_PE(V, m)
    assert res.P.equals(V) and res.E.dim == 0
    inv = is_invariant(V, delta(0), [0.8])
    if m == 1:
        # Delta_h t = h already lies in span{1, t}
        assert inv
    else:
        assert not inv and inv.witness == top
    r = main2_equivalence(V, m)
    assert r.power_invariant and r.mixed_invariant and r.low_degree_contained


def test_closure_of_killed_function():
    # span{f} with Delta_{h1}^2 f = Delta_{h2}^2 f = 0: a linear polynomial
    f = ExpPolynomial.polynomial([1, 3])
    W = diamond_closure(Subspace([f]), delta(0, 2), delta(1, 2), [1.0, 2**0.5], 2)
    assert W.dim == 2
