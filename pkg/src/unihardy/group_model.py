"""Homogeneous groups described by dilation weights and a quasi-norm.

Only what the radial reduction needs is modelled: anisotropic dilations
``x_i -> lam**nu_i * x_i``, three homogeneous quasi-norms, and a Monte Carlo
estimator of ball moments ``int_{|x|<R} |x|**s dx`` that checks the polar
decomposition ``dx = r**(Q-1) dr dsigma`` numerically.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (DivergentMoment, EmptyWeights, IncompatibleNormKind,
                     NonpositiveLambda, WeightBelowOne)


class NormKind(str, Enum):
    EUCLIDEAN = "euclidean"
    ANISOTROPIC = "anisotropic"
    KORANYI = "koranyi"


def homogeneous_dimension(weights):
    """Sum of the dilation weights."""
    weights = [float(w) for w in weights]
    if not weights:
        raise EmptyWeights("at least one dilation weight is required")
    low = [w for w in weights if w < 1.0]
    if low:
        raise WeightBelowOne(f"dilation weights must be >= 1, got {low[0]!r}")
    return math.fsum(weights)


@dataclass(frozen=True)
class GroupModel:
    """A concrete homogeneous group in exponential coordinates.

    Parameters
    ----------
    weights : tuple of float
        Dilation exponents ``nu_i >= 1``.
    norm_kind : NormKind or str
    power : int
        The even integer ``2N`` used by the anisotropic power norm.
    """

    weights: tuple
    norm_kind: NormKind = NormKind.EUCLIDEAN
    power: int = 2

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        kind = NormKind(self.norm_kind)
        object.__setattr__(self, "norm_kind", kind)
        homogeneous_dimension(w)
        if kind is NormKind.EUCLIDEAN and any(x != 1.0 for x in w):
            raise IncompatibleNormKind("the Euclidean norm needs all weights equal to 1")
        if kind is NormKind.KORANYI and w != (1.0, 1.0, 2.0):
            raise IncompatibleNormKind("the Koranyi norm needs n=3 and weights (1, 1, 2)")
        if kind is NormKind.ANISOTROPIC:
            if self.power <= 0 or self.power % 2:
                raise IncompatibleNormKind("the anisotropic norm needs an even positive power")
            for x in w:
                q = self.power / x
                if abs(q - round(q)) > 1e-12:
                    raise IncompatibleNormKind(
                        f"power {self.power} is not divisible by weight {x:g}")

    @property
    def n(self):
        return len(self.weights)

    @property
    def Q(self):
        return homogeneous_dimension(self.weights)

    @classmethod
    def euclidean(cls, n):
        return cls((1.0,) * n, NormKind.EUCLIDEAN)

    @classmethod
    def heisenberg(cls):
        return cls((1.0, 1.0, 2.0), NormKind.KORANYI)


@dataclass(frozen=True)
class AbstractRadialModel:
    """Coordinate-free stand-in: only the homogeneous dimension is known."""

    Q: float

    def __post_init__(self):
        if not self.Q > 1:
            raise ValueError(f"homogeneous dimension must exceed 1, got {self.Q!r}")


def _as_points(model, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.n:
        raise ValueError(f"expected points of dimension {model.n}, got {x.shape[-1]}")
    return x


def dilate(model, lam, x):
    """Apply ``D_lam``: component ``i`` is multiplied by ``lam ** nu_i``."""
    if not lam > 0:
        raise NonpositiveLambda(f"dilation factor must be positive, got {lam!r}")
    x = _as_points(model, x)
    return x * np.power(float(lam), np.asarray(model.weights))


def quasi_norm(model, x):
    """Homogeneous quasi-norm of one point or of each row of an array."""
    x = _as_points(model, x)
    kind = model.norm_kind
    if kind is NormKind.EUCLIDEAN:
        return np.sqrt(np.sum(x * x, axis=-1))
    if kind is NormKind.KORANYI:
        h = x[..., 0] ** 2 + x[..., 1] ** 2
        return (h * h + x[..., 2] ** 2) ** 0.25
    expo = model.power / np.asarray(model.weights)
    return np.sum(np.abs(x) ** expo, axis=-1) ** (1.0 / model.power)


@dataclass(frozen=True)
class MomentEstimate:
    estimate: float
    stderr: float
    samples: int


def _shard_sums(model, s, R, count, seed_seq, chunk=200_000):
    rng = np.random.default_rng(seed_seq)
    half = np.power(float(R), np.asarray(model.weights))
    total = 0.0
    total_sq = 0.0
    left = count
    while left > 0:
        m = min(chunk, left)
        pts = rng.uniform(-1.0, 1.0, size=(m, model.n)) * half
        nrm = quasi_norm(model, pts)
        inside = nrm < R
        vals = np.zeros(m)
        vals[inside] = nrm[inside] ** s
        total += vals.sum()
        total_sq += np.dot(vals, vals)
        left -= m
    return total, total_sq


def mc_ball_moment(model, s, R, samples=10**6, seed=0, *, shards=None, workers=1):
    """Monte Carlo estimate of ``int_{|x|<R} |x|**s dx``.

    Points are drawn uniformly from the box ``prod [-R**nu_i, R**nu_i]``,
    which covers the quasi-ball for all supported norms. The sample budget
    is split into shards with seeds spawned from ``seed``; the result depends
    only on ``(seed, samples, shards)``, never on ``workers``.
    """
    if not s > -model.Q:
        raise DivergentMoment(f"moment order s={s!r} must exceed -Q={-model.Q!r}")
    if samples < 10_000:
        raise ValueError("mc_ball_moment needs at least 1e4 samples")
    if not R > 0:
        raise ValueError("radius must be positive")
    if shards is None:
        shards = max(1, samples // 250_000)
    counts = [samples // shards + (1 if i < samples % shards else 0) for i in range(shards)]
    seqs = np.random.SeedSequence(seed).spawn(shards)
    if workers > 1 and shards > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_shard_sums, [model] * shards, [s] * shards,
                                [R] * shards, counts, seqs))
    else:
        parts = [_shard_sums(model, s, R, c, q) for c, q in zip(counts, seqs)]
    tot = math.fsum(p[0] for p in parts)
    tot_sq = math.fsum(p[1] for p in parts)
    mean = tot / samples
    var = max(tot_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    volume = 2.0 ** model.n * float(R) ** model.Q
    return MomentEstimate(volume * mean, volume * math.sqrt(var / samples), samples)


def polar_moment(sphere, Q, s, R):
    """``|sphere| R**(Q+s) / (Q+s)``: the moment predicted by polar coordinates."""
    return sphere * R ** (Q + s) / (Q + s)


def sphere_measure_estimates(model, pairs=((0.0, 1.0), (1.0, 2.0)), samples=10**6, seed=0):
    """Per-pair fitted sphere measures ``(value, stderr)``."""
    out = []
    for i, (s, R) in enumerate(pairs):
        est = mc_ball_moment(model, s, R, samples, seed + i)
        scale = (model.Q + s) / R ** (model.Q + s)
        out.append((est.estimate * scale, est.stderr * scale))
    return out


def sphere_measure(model, mc_config=None):
    """Surface measure of the unit quasi-sphere.

    Closed form for the Euclidean norm; otherwise the average of the Monte
    Carlo fits over the configured ``(s, R)`` pairs.
    """
    if isinstance(model, GroupModel) and model.norm_kind is NormKind.EUCLIDEAN:
        n = model.n
        return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    cfg = dict(mc_config or {})
    fits = sphere_measure_estimates(model, tuple(cfg.get("pairs", ((0.0, 1.0), (1.0, 2.0)))),
                                    int(cfg.get("samples", 10**6)), int(cfg.get("seed", 0)))
    return math.fsum(v for v, _ in fits) / len(fits)
