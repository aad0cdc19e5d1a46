import math

import numpy as np
import pytest

from unihardy import radial
from unihardy.errors import Inadmissible, NonFiniteSample
from unihardy.quadrature import (SingularHints, beta_reference, integrate, ip_identity_check,
                                 ip_value, ip_values, ip_weighted, radial_integral)


@pytest.mark.parametrize("x, y", [(0.5, 0.5), (0.1, 2.0), (2.5, 0.05), (1.0, 1.0)])
def test_beta_integrals_with_endpoint_singularities(x, y):
    res = integrate(lambda t, gap: t ** (x - 1) * gap ** (y - 1), (0.0, 1.0),
                    SingularHints(x - 1, y - 1), 1e-12, gap_aware=True)
    assert res.value == pytest.approx(beta_reference(x, y), rel=1e-10)
    assert res.converged


def test_vector_integrand_shares_nodes():
    res = integrate(lambda t: np.stack([t, t * t, np.cos(t)]), (0.0, 1.0))
    assert np.allclose(res.value, [0.5, 1 / 3, math.sin(1.0)], rtol=1e-12)
    assert np.shape(res.err_est) == (3,)


def test_split_points_handle_kinks():
    res = integrate(lambda t: np.abs(t - 0.3), (0.0, 1.0), SingularHints(split_points=(0.3,)))
    assert res.value == pytest.approx(0.045 + 0.245, rel=1e-12)


def test_nonfinite_sample_is_reported():
    with pytest.raises(NonFiniteSample):
        integrate(lambda t: np.where(t > 0.5, np.nan, 1.0), (0.0, 1.0))


def test_radial_integral_power_weight_closed_form():
    # int_0^1 |r|^2 r^(Q-a-1) dr with Q=4, a=1 -> 1/5
    f = radial.PowerR(1.0)
    assert radial_integral(f, 4.0, a=1.0, p=2.0).value == pytest.approx(0.2, rel=1e-12)
    assert radial_integral(f, 4.0, a=1.0, p=2.0, substitute=True).value == pytest.approx(0.2, rel=1e-12)


def test_radial_integral_boundary_weight_is_beta_function():
    # int_0^1 r^(Q-1) (1-r)^(-b) dr = B(Q, 1-b)
    one = radial.Const(1.0)
    val = radial_integral(one, 3.0, b=0.6, p=1.0).value
    assert val == pytest.approx(beta_reference(3.0, 0.4), rel=1e-10)


def test_radial_integral_rejects_divergent_weight():
    with pytest.raises(Inadmissible):
        radial_integral(radial.Const(1.0), 3.0, b=1.2)


def test_radial_integral_scales_with_R():
    f = radial.Bump(0.2, 0.8)
    base = radial_integral(f, 4.0, a=1.0, b=2.0).value
    scaled = radial_integral(radial.Scaled(f, 0.5), 4.0, a=1.0, b=2.0, R=2.0).value
    assert scaled == pytest.approx(2.0 ** 3 * base, rel=1e-10)


def test_ip_identity_random_tuples():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        p = rng.uniform(1.1, 5.0)
        v, u = rng.normal(size=2) * np.exp(rng.uniform(-3, 3, 2))
        lhs_scale = abs(u) ** p + abs(v) ** p
        assert ip_identity_check(v, u, p) <= 1e-9 * lhs_scale + 1e-300


def test_ip_is_one_half_at_p_two():
    vals, _ = ip_values(np.array([1.0, -3.0, 0.0]), np.array([2.0, 5.0, 0.0]), 2.0)
    assert np.allclose(vals, 0.5)


def test_ip_closed_forms():
    # I_p(f, 0) = (p-1) |f|^(p-2) / p and I_p(0, u) = |u|^(p-2) / p
    assert ip_value(2.0, 0.0, 3.0) == pytest.approx(2 / 3 * 2.0)
    assert ip_value(0.0, 2.0, 3.0) == pytest.approx(2.0 / 3)


def test_ip_weighted_survives_tiny_arguments():
    # the squared difference underflows here; the kernel must not turn into 0/0
    f = np.array([1e-170, 3e-160])
    u = np.array([2e-170, -1e-160])
    out = ip_weighted(f, u, 1.5)
    assert np.all(np.isfinite(out)) and np.all(out > 0)
    assert np.allclose(ip_weighted(f, u, 2.0), 0.5 * (f - u) ** 2)


def test_ip_at_origin_warns_for_small_p():
    with pytest.warns(UserWarning):
        _, n = ip_values(np.array([0.0]), np.array([0.0]), 1.5)
    assert n == 1
