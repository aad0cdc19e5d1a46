import numpy as np
import pytest

from unihardy import radial
from unihardy.errors import BadDelta, EvalOutsideDomain

R_GRID = np.linspace(0.1, 0.9, 33)


def _stencil(expr, r, j, h, R):
    s = {k: radial.derivatives(expr, r + k * h, j - 1, R=R)[j - 1] for k in (-2, -1, 1, 2)}
    return (-s[2] + 8 * s[1] - 8 * s[-1] + s[-2]) / (12 * h)


def fd_check(expr, r, order=2, R=1.0):
    """Fourth-order central differences, Richardson-extrapolated once."""
    d = radial.derivatives(expr, r, order, R=R)
    h = 5e-4
    for j in range(1, order + 1):
        approx = (16 * _stencil(expr, r, j, h / 2, R) - _stencil(expr, r, j, h, R)) / 15
        scale = np.maximum(1.0, np.abs(d[j]))
        assert np.max(np.abs(approx - d[j]) / scale) < 1e-6, j


@pytest.mark.parametrize("expr", [
    radial.PowerR(-1.3),
    radial.BoundaryPower(1.5, 0.7),
    radial.LogR(1.0),
    radial.Bump(0.2, 0.8),
    radial.Ramp(0.3, 0.6),
    radial.Ramp(0.3, 0.6, rising=False),
    radial.Product((radial.Bump(0.1, 0.9), radial.PowerR(2.0), radial.LogR(1.0))),
    radial.Sum((radial.PowerR(0.5), radial.Negate(radial.BoundaryPower(2.0, 1.5)))),
    radial.Scaled(radial.Bump(0.4, 1.6), 2.0),
])
def test_jets_agree_with_finite_differences(expr):
    r = R_GRID[(R_GRID > 0.02) & (R_GRID < 0.98)]
    fd_check(expr, r)


def test_bump_support_and_plateau():
    b = radial.Bump(0.2, 0.8)
    vals = radial.evaluate(b, np.array([0.1, 0.2, 0.5, 0.8, 0.9]))
    assert vals[0] == 0 and vals[-1] == 0 and vals[2] > 0
    assert radial.support(b) == (0.2, 0.8)
    assert radial.breakpoints(b) == [0.2, 0.8]


def test_ramp_plateaus():
    up = radial.Ramp(0.3, 0.6)
    v = radial.evaluate(up, np.array([0.1, 0.45, 0.7]))
    assert v[0] == 0 and v[2] == 1 and 0 < v[1] < 1
    assert v[1] == pytest.approx(0.5)


def test_boundary_power_uses_precise_gap():
    f = radial.BoundaryPower(1.0, 1.0)
    gap = np.array([1e-18])
    v = radial.derivatives(f, 1.0 - gap, 0, R=1.0, gap=gap)[0]
    assert v[0] == pytest.approx(1e-18, rel=1e-12)


def test_evaluation_outside_domain_raises():
    with pytest.raises(EvalOutsideDomain):
        radial.evaluate(radial.PowerR(1.0), np.array([0.0]))
    with pytest.raises(EvalOutsideDomain):
        radial.evaluate(radial.PowerR(1.0), np.array([1.5]), R=1.0)


def test_local_exponents_and_admissibility():
    f = radial.PowerR(-1.0)
    origin, _ = radial.local_exponents(f, 1)
    assert origin[0] == -1.0 and origin[1] == -2.0
    # |r^-1|^2 r^(Q-1) with Q=4 is integrable, with Q=2 it is not
    assert radial.admissible(f, (0.0, 0.0), Q=4.0, p=2.0) is None
    reason = radial.admissible(f, (0.0, 0.0), Q=2.0, p=2.0)
    assert reason is not None and reason.endpoint == 0.0


def test_families_have_expected_plateaus():
    fam = radial.make_boundary_family(0.6, 0.05, 1.0)
    assert radial.support(fam)[0] == pytest.approx(0.9)
    v = radial.evaluate(fam, np.array([0.5, 0.97]))
    assert v[0] == 0 and v[1] == pytest.approx(0.03 ** 0.6)
    org = radial.make_origin_family(-1.0, 0.1)
    assert radial.evaluate(org, np.array([0.05]))[0] == pytest.approx(20.0)
    assert radial.evaluate(org, np.array([0.3]))[0] == 0


@pytest.mark.parametrize("delta", [0.0, 0.5, -0.1])
def test_bad_delta(delta):
    with pytest.raises(BadDelta):
        radial.cutoff_near_boundary(delta)


def test_extremal_candidate_profile():
    v = radial.extremal_candidate(2.0, 2.0, 1.0)
    r = np.array([0.25, 0.5])
    assert np.allclose(radial.evaluate(v, r), (1 / r - 1) ** 0.5)


def test_scaled_expression_matches_dilation():
    f = radial.Bump(0.2, 0.8)
    g = radial.Scaled(f, 3.0)
    r = np.array([0.3, 0.5, 0.7])
    assert np.allclose(radial.evaluate(g, r), radial.evaluate(f, 3 * r))
    d = radial.derivatives(g, r, 1)
    assert np.allclose(d[1], 3 * radial.derivatives(f, 3 * r, 1)[1])
