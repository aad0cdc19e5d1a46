"""Shared machinery: evaluate f's jets once per node, integrate many terms.

Every verifier works on the unit radius. A function on ``(0, R)`` is pulled
back by ``r -> R r``; each verifier then multiplies its terms by the common
power of ``R`` that the statement carries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import radial
from ..errors import Inadmissible, NonFiniteSample
from ..quadrature import DEFAULT_RTOL, SingularHints, integrate, ip_weighted
from ..radial import DivergenceReason, RadialExpr, Scaled

# probing radii for the local power law at a touched endpoint
_PROBE = (1e-24, 1e-16)


@dataclass(frozen=True)
class Field:
    """A real function or a (real part, imaginary part) pair."""

    re: RadialExpr
    im: RadialExpr | None = None

    @property
    def is_real(self):
        return self.im is None

    def scaled(self, R):
        if R == 1.0:
            return self
        return Field(Scaled(self.re, R), None if self.im is None else Scaled(self.im, R))

    def support(self):
        parts = [radial.support(e, 1.0) for e in (self.re, self.im) if e is not None]
        parts = [s for s in parts if s is not None]
        if not parts:
            return None
        return min(s[0] for s in parts), max(s[1] for s in parts)

    def breaks(self):
        pts = set()
        for e in (self.re, self.im):
            if e is not None:
                pts.update(radial.breakpoints(e, 1.0))
        return sorted(pts)


def as_field(f, complex_parts=None):
    if complex_parts is not None:
        g, h = complex_parts
        return Field(g, h)
    if isinstance(f, Field):
        return f
    if isinstance(f, tuple) and len(f) == 2:
        return Field(f[0], f[1])
    if not isinstance(f, RadialExpr):
        raise TypeError(f"expected a RadialExpr, got {type(f).__name__}")
    return Field(f)


class Sample:
    """Jets of f at a batch of radii on the unit ball, plus weight helpers."""

    def __init__(self, field, r, gap, order, Q):
        self.r = r
        self.gap = gap
        self.Q = Q
        self.D = radial.derivatives(field.re, r, order, R=1.0, gap=gap)
        self.E = None if field.im is None else radial.derivatives(field.im, r, order, R=1.0, gap=gap)
        self._w = {}

    # ---- weights
    def w(self, c):
        """``1 - r**c`` from the exact gap."""
        if c not in self._w:
            with np.errstate(divide="ignore"):
                self._w[c] = -np.expm1(c * np.log1p(-self.gap))
        return self._w[c]

    def log_inv(self):
        with np.errstate(divide="ignore"):
            return -np.log1p(-self.gap)

    def weight(self, alpha, beta=0.0, c=1.0):
        """``r**alpha * (1 - r**c)**beta * r**(Q-1)``."""
        out = self.r ** (alpha + self.Q - 1.0)
        if beta != 0.0:
            out = out * self.w(c) ** beta
        return out

    # ---- pointwise magnitudes
    def parts(self, j):
        return self.D[j], (None if self.E is None else self.E[j])

    def mag2(self, j):
        m = self.D[j] ** 2
        if self.E is not None:
            m = m + self.E[j] ** 2
        return m

    def absp(self, j, p):
        if self.E is None:
            return np.abs(self.D[j]) ** p
        return self.mag2(j) ** (0.5 * p)

    def combo(self, coeffs):
        """Real and imaginary parts of ``sum_j coeffs[j] * f^(j)``."""
        re = sum(cj * self.D[j] for j, cj in coeffs.items())
        im = None if self.E is None else sum(cj * self.E[j] for j, cj in coeffs.items())
        return re, im

    def rellich(self):
        return self.combo({2: 1.0, 1: (self.Q - 1.0) / self.r})


def combo_absp(parts, p):
    re, im = parts
    if im is None:
        return np.abs(re) ** p
    return (re * re + im * im) ** (0.5 * p)


def _probe_exponents(fn, m, lo, hi, side):
    """Numerical local power of each integrand at a touched endpoint."""
    d1, d2 = _PROBE
    L = hi - lo
    if side == "lo":
        xs = np.array([lo + d1 * L, lo + d2 * L])
        gaps = np.array([hi - xs[0], hi - xs[1]])
    else:
        xs = np.array([hi - d1 * L, hi - d2 * L])
        gaps = np.array([d1 * L, d2 * L])
    with np.errstate(all="ignore"):
        vals = np.abs(np.asarray(fn(xs, gaps), dtype=float).reshape(m, 2))
    out = np.zeros(m)
    for i in range(m):
        v1, v2 = vals[i]
        if not (np.isfinite(v1) and np.isfinite(v2)):
            out[i] = -1.0
        elif v1 > 0 and v2 > 0:
            out[i] = math.log(v1 / v2) / math.log(d1 / d2)
        else:
            out[i] = 0.0
    return out


def integrate_terms(field, order, integrands, Q, rtol=DEFAULT_RTOL):
    """Integrate named integrands that depend on the jets of ``field``.

    ``integrands`` maps a term name to ``fn(sample) -> array``; the weight
    ``r**(Q-1)`` must be included by the caller (``sample.weight`` does it).
    Returns ``{name: (value, err_est)}`` on the unit ball.
    """
    names = list(integrands)
    if not names:
        return {}
    sup = field.support()
    if sup is None:
        return {k: (0.0, 0.0) for k in names}
    lo, hi = max(sup[0], 0.0), min(sup[1], 1.0)
    if not lo < hi:
        return {k: (0.0, 0.0) for k in names}
    fns = [integrands[k] for k in names]

    def vec(x, gap_hi):
        gap = (1.0 - hi) + gap_hi
        s = Sample(field, x, gap, order, Q)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            rows = [np.broadcast_to(np.asarray(fn(s), dtype=float), x.shape) for fn in fns]
        out = np.array(rows)
        # weights may be inf*0 where the function vanishes identically
        zero = np.all([np.all(np.abs(s.D) == 0, axis=0)] +
                      ([np.all(np.abs(s.E) == 0, axis=0)] if s.E is not None else []), axis=0)
        return np.where(zero, 0.0, out)

    m = len(names)
    a0 = _probe_exponents(vec, m, lo, hi, "lo") if lo <= 0.0 else np.zeros(m)
    a1 = _probe_exponents(vec, m, lo, hi, "hi") if hi >= 1.0 else np.zeros(m)
    for end, alphas in ((0.0, a0), (1.0, a1)):
        bad = np.flatnonzero(alphas <= -1.0 + 1e-9)
        if bad.size:
            i = int(bad[0])
            raise Inadmissible(f"term '{names[i]}' is not integrable: "
                               f"{DivergenceReason(end, float(alphas[i]))}")
    hints = SingularHints(a0 if lo <= 0.0 else 0.0, a1 if hi >= 1.0 else 0.0,
                          tuple(field.breaks()))
    res = integrate(vec, (lo, hi), hints, rtol, gap_aware=True)
    val = np.atleast_1d(res.value)
    err = np.atleast_1d(res.err_est)
    return {k: (float(val[i]), float(err[i])) for i, k in enumerate(names)}


class Terms:
    """Builder for coefficient-weighted terms with degenerate-coefficient pruning."""

    def __init__(self):
        self.integrands = {}
        self.coeffs = {}
        self.omitted = []

    def add(self, name, coeff, fn):
        coeff = float(coeff)
        if coeff == 0.0 or abs(coeff) < 1e-14:
            self.omitted.append(name)
            return
        self.integrands[name] = fn
        self.coeffs[name] = coeff

    def run(self, field, order, Q, scale=1.0, rtol=DEFAULT_RTOL):
        raw = integrate_terms(field, order, self.integrands, Q, rtol)
        out = {}
        for k, (v, e) in raw.items():
            c = self.coeffs[k] * scale
            out[k] = (c * v, abs(c) * e)
        for k in self.omitted:
            out[k] = (0.0, 0.0)
        return out

    def notes(self):
        return [f"term '{k}' omitted: coefficient is zero" for k in self.omitted]


def total(terms, names, signs=None):
    signs = signs or [1.0] * len(names)
    return math.fsum(s * terms[n][0] for n, s in zip(names, signs))
