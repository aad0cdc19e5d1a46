import math

import numpy as np
import pytest

from unihardy.jets import Jet, power_of_variable

X = np.linspace(0.3, 2.5, 9)


def central_diff(fn, x, h=1e-5):
    return (fn(x + h) - fn(x - h)) / (2 * h)


def test_variable_has_unit_slope():
    j = Jet.variable(X, 3)
    assert np.allclose(j.derivative(0), X)
    assert np.allclose(j.derivative(1), 1.0)
    assert np.allclose(j.derivative(2), 0.0)


@pytest.mark.parametrize("name, build, ref", [
    ("exp", lambda j: j.exp(), np.exp),
    ("log", lambda j: j.log(), np.log),
    ("power", lambda j: j.power(-1.7), lambda x: x ** -1.7),
    ("reciprocal", lambda j: j.reciprocal(), lambda x: 1 / x),
    ("product", lambda j: j * j.exp(), lambda x: x * np.exp(x)),
    ("quotient", lambda j: j.log() / (1 + j * j), lambda x: np.log(x) / (1 + x * x)),
    ("composite", lambda j: (j.log() * 2.5).exp() - 3 * j, lambda x: x ** 2.5 - 3 * x),
])
def test_derivatives_match_finite_differences(name, build, ref):
    d = build(Jet.variable(X, 3)).derivatives()
    assert np.allclose(d[0], ref(X), rtol=1e-13)
    d1 = central_diff(ref, X)
    assert np.allclose(d[1], d1, rtol=1e-6, atol=1e-8)
    d2 = (ref(X + 1e-4) - 2 * ref(X) + ref(X - 1e-4)) / 1e-8
    assert np.allclose(d[2], d2, rtol=1e-5, atol=1e-5)


def test_power_of_variable_is_exact():
    d = power_of_variable(X, 2.5, 3).derivatives()
    assert np.allclose(d[1], 2.5 * X ** 1.5, rtol=1e-14)
    assert np.allclose(d[2], 2.5 * 1.5 * X ** 0.5, rtol=1e-14)
    assert np.allclose(d[3], 2.5 * 1.5 * 0.5 * X ** -0.5, rtol=1e-14)


def test_high_order_taylor_coefficients_of_exp():
    j = Jet.variable(np.array([0.0]), 6).exp()
    for k in range(7):
        assert j.coeffs[k][0] == pytest.approx(1 / math.factorial(k), rel=1e-14)


def test_from_derivatives_roundtrip():
    derivs = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    assert np.allclose(Jet.from_derivatives(derivs).derivatives(), derivs)
