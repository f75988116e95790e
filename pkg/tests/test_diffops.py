from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltainv import ExpPolynomial, apply, apply_sampled, compose, delta, djokovic_check, evaluate, mixed, power
from deltainv.diffops import DifferenceOp, djokovic_rhs, djokovic_terms, format_shift
from deltainv.errors import InputError

from strategies import exp_polys, operators


def test_delta_squared_terms():
    op = power(delta(0, 1), 2)
    assert op.terms == {(Fraction(2),): 1, (Fraction(1),): -2, (Fraction(0),): 1}


def test_mixed_two_steps():
    op = mixed([0, 1])
    assert op.describe() == {"0": "1", "h1": "-1", "h2": "-1", "h1+h2": "1"}


def test_format_shift():
    assert format_shift((Fraction(2), Fraction(-1, 2))) == "2*h1-1/2*h2"
    assert format_shift((0, 0)) == "0"


@given(operators(), operators())
@settings(max_examples=50, deadline=None)
def test_composition_commutes(a, b):
    assert compose(a, b) == compose(b, a)


@given(operators(), operators(), operators())
@settings(max_examples=30, deadline=None)
def test_composition_distributes(a, b, c):
    assert a @ (b + c) == a @ b + a @ c


@given(operators(), st.integers(min_value=0, max_value=5))
@settings(max_examples=30, deadline=None)
def test_power_is_repeated_composition(a, m):
    out = DifferenceOp.identity(a.s)
    for _ in range(m):
        out = out @ a
    assert power(a, m) == out


@pytest.mark.parametrize("s", range(1, 7))
def test_djokovic_exact(s):
    equal, count = djokovic_check(s)
    assert equal
    assert count == 2**s * (s + 1)


def test_djokovic_rhs_is_mixed():
    assert djokovic_rhs(3) == mixed(range(3), 3)


def test_djokovic_limits():
    with pytest.raises(InputError):
        djokovic_terms(0)
    with pytest.raises(InputError):
        djokovic_terms(9)


@given(exp_polys(), st.floats(min_value=0.1, max_value=1.5), st.floats(min_value=-1.5, max_value=-0.1))
@settings(max_examples=40, deadline=None)
def test_symbolic_apply_matches_sampled(f, h1, h2):
    op = mixed([0, 1]) @ delta(0, 2)
    ts = np.linspace(-1, 1, 11)
    sym = evaluate(apply(op, f, [h1, h2]), ts)
    num = apply_sampled(op, f, [h1, h2], ts)
    assert np.allclose(sym, num, atol=1e-8)


def test_apply_sampled_on_plain_callable():
    out = apply_sampled(power(delta(0), 2), lambda t: t**2, [0.5], np.array([0.0, 1.0]))
    assert np.allclose(out, 2 * 0.25)


def test_apply_kills_low_degree():
    f = ExpPolynomial.polynomial([1, 2, 3])
    assert apply(power(delta(0), 3), f, [0.7], tol=1e-12).is_zero()


def test_step_count_mismatch():
    with pytest.raises(InputError):
        apply(delta(0, 2), ExpPolynomial.polynomial([1]), [1.0])
    with pytest.raises(InputError):
        delta(0, 1) + delta(0, 2)
