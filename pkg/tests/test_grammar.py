import numpy as np
import pytest

from unihardy import radial
from unihardy.cli.grammar import parse_function
from unihardy.errors import ConfigError

R = np.array([0.25, 0.5, 0.75])


def same(a, b):
    return np.allclose(radial.evaluate(a, R), radial.evaluate(b, R))


def test_infix_and_prefix_forms_agree():
    ref = radial.Product((radial.Bump(0.2, 0.8), radial.PowerR(2.0)))
    assert same(parse_function("mul(bump(0.2, 0.8), powr(2))"), ref)
    assert same(parse_function("bump(0.2,0.8) * r**2"), ref)
    assert same(parse_function("bump(0.2,0.8) * r * r"), ref)


def test_arithmetic():
    f = parse_function("2*r - r**2 + -1")
    assert np.allclose(radial.evaluate(f, R), 2 * R - R ** 2 - 1)
    assert np.allclose(radial.evaluate(parse_function("neg(const(3))"), R), -3)


def test_keyword_arguments_and_families():
    f = parse_function("bnd(c=2, k=1.5)")
    assert np.allclose(radial.evaluate(f, R), (1 - R ** 2) ** 1.5)
    g = parse_function("boundary_family(0.6, 0.05, c=1)")
    assert same(g, radial.make_boundary_family(0.6, 0.05, 1.0))
    h = parse_function("extremal(b=2, p=2) * bump(0.2, 0.8)")
    assert np.all(np.isfinite(radial.evaluate(h, R)))


@pytest.mark.parametrize("text", [
    "__import__('os')", "bump(0.2)", "x * 2", "r ** r", "r / 2", "open('f')", "bump(0.2,",
    "boundary_family(0.6, 0.7)",
])
def test_rejected_expressions(text):
    with pytest.raises(ConfigError):
        parse_function(text)
