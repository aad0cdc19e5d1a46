"""Random checks of the pointwise inequalities behind the L^p remainder."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..quadrature import ip_values


@dataclass(frozen=True)
class FundamentalReport:
    p: float
    samples: int
    inf_ratio: float
    elementary_min_slack: float
    passed: bool


def fundamental_inequality_suite(p, samples=10**5, seed=0):
    """Empirical infimum of the normalized convexity gap over random pairs.

    For ``p >= 2`` the gap ``|a-b|^p - |a|^p + p|a|^(p-2) a b`` is divided by
    ``|b|^p``; for ``p < 2`` it is multiplied by ``(|a-b|+|a|)^(2-p) / |b|^2``.
    The gap is evaluated through its integral form, so ``p = 2`` gives
    exactly 1. Magnitudes are drawn log-uniformly so that both ``|a| >> |b|`` and
    ``|a| << |b|`` are represented.
    """
    if not p > 1:
        raise ValueError("p must exceed 1")
    rng = np.random.default_rng(seed)
    alpha = rng.standard_normal(samples) * np.exp(rng.uniform(-4, 4, samples))
    beta = rng.standard_normal(samples) * np.exp(rng.uniform(-4, 4, samples))
    keep = np.abs(beta) > 1e-8
    alpha, beta = alpha[keep], beta[keep]
    # Taylor's formula with integral remainder for t -> |alpha - t beta|^p gives
    # gap = p beta^2 I_p(alpha, alpha - beta); this form has no cancellation
    # when |alpha| >> |beta|, unlike the three-term difference.
    kernel, _ = ip_values(alpha, alpha - beta, p, warn=False)
    gap = p * beta * beta * kernel
    if p >= 2:
        ratio = gap / np.abs(beta) ** p
    else:
        ratio = gap * (np.abs(alpha - beta) + np.abs(alpha)) ** (2 - p) / beta ** 2
    inf_ratio = float(ratio.min())

    # (x - y)^p <= x^p - p (x - y)^(p-1) y for x >= y >= 0
    x = rng.uniform(0, 1, samples)
    y = x * rng.uniform(0, 1, samples)
    slack = x ** p - p * (x - y) ** (p - 1) * y - (x - y) ** p
    min_slack = float((slack + 1e-14 * x ** p).min())
    return FundamentalReport(float(p), int(keep.sum()), inf_ratio, min_slack,
                             inf_ratio > 0 and min_slack >= 0)
