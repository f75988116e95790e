import numpy as np
import pytest

from deltainv import apply_sampled, build_counterexample, delta, non_analytic_witness, power
from deltainv.counterexample import AntidifferenceFn, Sawtooth, antidifference, sample_csv, verify_period_multiple
from deltainv.errors import InputError


def test_sawtooth_values():
    phi = Sawtooth(1.0)
    assert phi(0.25) == pytest.approx(0.25)
    assert phi(0.75) == pytest.approx(0.25)
    assert phi(-3.0) == 0.0
    assert phi(2.5) == pytest.approx(0.5)


def test_antidifference_examples():
    f = antidifference(Sawtooth(1.0), 1.0)
    assert f(1.5) == pytest.approx(0.5)
    assert f(-0.5) == pytest.approx(-0.5)


def test_antidifference_inverts_delta(rng):
    phi = Sawtooth(0.7)
    f = antidifference(phi, 0.7)
    x = rng.uniform(-6, 6, size=300)
    assert np.allclose(f(x + 0.7) - f(x), phi(x), atol=1e-12)
    assert np.allclose(f(np.arange(-8, 9) * 0.7), 0, atol=1e-12)


def test_nested_antidifference(rng):
    phi = Sawtooth(1.0)
    f3 = AntidifferenceFn(phi, 1.0, 3)
    x = rng.uniform(-5, 5, size=200)
    d3 = apply_sampled(power(delta(0), 3), f3, [1.0], x)
    assert np.allclose(d3, phi(x), atol=1e-9)


def test_precondition():
    with pytest.raises(InputError):
        antidifference(lambda t: np.cos(t), 1.0)


@pytest.mark.parametrize("m, p, q", [(1, 1, 2), (2, 2, 3), (3, 1, 4), (4, 3, 5)])
def test_counterexample_residuals(m, p, q):
    ce = build_counterexample(m, p, q, 1.0)
    grid = np.linspace(-5, 5, 200)
    assert verify_period_multiple(ce.f, 1.0, m, p, grid) <= 1e-9
    assert verify_period_multiple(ce.f, 1.0, m, q, grid) <= 1e-9


def test_counterexample_not_killed_off_lattice():
    ce = build_counterexample(2, 1, 1, 1.0)
    assert verify_period_multiple(ce.f, np.sqrt(2), 2, 1, np.linspace(-5, 5, 50)) > 1e-3


def test_witness_on_sawtooth_and_smooth():
    pts = np.arange(-2, 2.01, 0.5)
    w = non_analytic_witness(Sawtooth(1.0), pts)
    assert w is not None and w.point * 2 == round(w.point * 2)
    assert non_analytic_witness(lambda t: np.exp(t) * t**2, pts) is None


def test_csv_dump():
    f = antidifference(Sawtooth(1.0), 1.0)
    text = sample_csv(f, [0.0, 1.5])
    assert text.splitlines() == ["t,value", "0,0", "1.5,0.5"]


def test_bad_parameters():
    with pytest.raises(InputError):
        build_counterexample(0, 1, 1)
    with pytest.raises(InputError):
        build_counterexample(9, 1, 1)


def test_first_member_is_sawtooth(rng):
    ce = build_counterexample(1, 2, 5, 0.5)
    x = rng.uniform(-4, 4, size=100)
    assert np.allclose(ce.f(x), Sawtooth(0.5)(x))
    assert verify_period_multiple(ce.f, 0.5, 1, 1, x) <= 1e-12
