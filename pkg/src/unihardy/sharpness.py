"""Rayleigh-quotient scans that approach the sharp constants from above.

Two test families are scanned: ``phi_delta (1 - (r/R)^c)^kappa`` with
``kappa`` decreasing to ``(b-1)/p`` (the boundary constant) and
``phi_delta r^kappa`` with ``kappa`` decreasing to ``-(Q-a)/p`` (the origin
constant). The quotient converges roughly linearly in the offset of
``kappa`` from its limit, so each scan also reports a two-point linear
extrapolation to offset zero.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import radial
from .errors import Inadmissible, ZeroDenominator
from .functionals._engine import Terms, as_field, combo_absp
from .quadrature import DEFAULT_RTOL, SingularHints, integrate

DEFAULT_OFFSETS = (0.32, 0.16, 0.08, 0.04, 0.02, 0.01)
SCAN_GAP_TOL = 0.05


class Kind(str, Enum):
    UNIFIED_HARDY = "UnifiedHardy"
    HARDY7 = "Hardy7"
    HARDY8 = "Hardy8"
    RELLICH24 = "Rellich24"
    RELLICH25 = "Rellich25"
    RELLICH35 = "Rellich35"


def sharp_constant(params, kind):
    Q, p, a, b, c = params.Q, params.p, params.a, params.b, params.c
    kind = Kind(kind)
    if kind in (Kind.UNIFIED_HARDY, Kind.HARDY8):
        return ((b - 1) * c / p) ** p
    if kind is Kind.HARDY7:
        return ((Q - a) / p) ** p
    if kind is Kind.RELLICH24:
        return ((Q + a - 4) * c / 4) ** 2
    if kind is Kind.RELLICH25:
        return (3 * c * c / 4) ** 2
    return abs((Q * (p - 1) + a - 2 * p) / p) ** p * ((p - 1) * c / p) ** p


def _quotient_terms(params, kind):
    Q, p, a, b, c = params.Q, params.p, params.a, params.b, params.c
    kind = Kind(kind)
    t = Terms()
    order = 1
    if kind is Kind.UNIFIED_HARDY:
        t.add("num", 1.0, lambda s: s.absp(1, p) * s.weight(p - a, p - b, c))
        t.add("den", 1.0, lambda s: s.absp(0, p) * s.weight(-a, -b, c))
    elif kind is Kind.HARDY7:
        t.add("num", 1.0, lambda s: s.absp(1, p) * s.weight(p - a, 1 - b, c))
        t.add("den", 1.0, lambda s: s.absp(0, p) * s.weight(-a, 1 - b, c))
    elif kind is Kind.HARDY8:
        t.add("num", 1.0, lambda s: s.absp(1, p) * s.weight(p - a - c * (p - 1), p - b, c))
        t.add("den", 1.0, lambda s: s.absp(0, p) * s.weight(c - a, -b, c))
    else:
        order = 2
        if kind is Kind.RELLICH35:
            pp, beta, top = p, -p, 2 * p - a
        else:
            pp, beta, top = 2.0, (-2.0 if kind is Kind.RELLICH24 else -4.0), 4 - a
        t.add("num", 1.0, lambda s: combo_absp(s.rellich(), pp) * s.weight(top))
        t.add("den", 1.0, lambda s: s.absp(0, pp) * s.weight(-a, beta, c))
    return t, order


def rayleigh_with_error(params, f, kind, rtol=DEFAULT_RTOL):
    """``(ratio, err_est)`` of the quotient for the inequality named by ``kind``."""
    t, order = _quotient_terms(params, kind)
    fld = as_field(f).scaled(params.R)
    terms = t.run(fld, order, params.Q, 1.0, rtol)
    num, num_err = terms["num"]
    den, den_err = terms["den"]
    if den == 0:
        raise ZeroDenominator("the denominator integral vanishes")
    ratio = num / den
    err = abs(ratio) * (num_err / abs(num) if num else 0.0) + abs(ratio) * den_err / abs(den)
    return ratio, err


def rayleigh(params, f, kind=Kind.UNIFIED_HARDY, rtol=DEFAULT_RTOL):
    """Right-hand integral over left-hand integral (sphere measure cancels)."""
    return rayleigh_with_error(params, f, kind, rtol)[0]


@dataclass
class SharpnessScan:
    rows: list
    target: float
    extrapolated: float
    relative_gap: float
    kind: str = Kind.UNIFIED_HARDY.value
    family: str = "boundary"
    failures: list = field(default_factory=list)

    @property
    def finest(self):
        return self.rows[0]

    @property
    def raw_gap(self):
        """Relative distance of the finest raw ratio from the target."""
        return abs(self.finest["ratio"] - self.target) / self.target

    def rows_above_target(self, safety=10.0):
        return all(r["ratio"] >= self.target - safety * r["err_est"] - 1e-12 * self.target
                   for r in self.rows if r.get("ratio") is not None)

    def monotone(self, safety=10.0):
        vals = [(r["ratio"], r["err_est"]) for r in self.rows]
        return all(v1 <= v2 + safety * (e1 + e2) for (v1, e1), (v2, e2) in zip(vals, vals[1:]))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kappa", "delta", "ratio", "err_est"])
        for r in self.rows:
            w.writerow([repr(r["kappa"]), repr(r["delta"]), repr(r["ratio"]), repr(r["err_est"])])
        return buf.getvalue()

    def summary(self):
        return {"family": self.family, "kind": self.kind, "target": self.target,
                "extrapolated": self.extrapolated, "relative_gap": self.relative_gap,
                "finest_ratio": self.finest["ratio"], "raw_gap": self.raw_gap}

    def to_json(self):
        return json.dumps(self.summary(), indent=2)


def _extrapolate(rows, limit):
    """Line through the two finest rows, evaluated at the limiting kappa."""
    (k1, r1), (k2, r2) = [(r["kappa"], r["ratio"]) for r in rows[:2]]
    o1, o2 = k1 - limit, k2 - limit
    return r1 - o1 * (r2 - r1) / (o2 - o1)


def _scan(params, kind, family, limit, offsets, deltas, build):
    offsets = [float(o) for o in offsets]
    if any(o <= 0 for o in offsets):
        raise Inadmissible("kappa grid must lie strictly above the critical value")
    if deltas is None:
        deltas = [o / 10.0 for o in offsets]
    if len(deltas) != len(offsets):
        raise ValueError("offsets and deltas must have the same length")
    rows, failures = [], []
    for o, d in zip(offsets, deltas):
        kappa = limit + o
        try:
            ratio, err = rayleigh_with_error(params, build(kappa, d), kind)
        except Inadmissible as exc:
            failures.append({"kappa": kappa, "delta": d, "reason": str(exc)})
            continue
        rows.append({"kappa": kappa, "delta": float(d), "ratio": ratio, "err_est": err})
    rows.sort(key=lambda r: (r["kappa"], r["delta"]))
    target = sharp_constant(params, kind)
    if len(rows) >= 2:
        ext = _extrapolate(rows, limit)
    else:
        ext = rows[0]["ratio"] if rows else math.nan
    gap = abs(ext - target) / target
    return SharpnessScan(rows, target, ext, gap, Kind(kind).value, family, failures)


def scan_boundary(params, offsets=DEFAULT_OFFSETS, deltas=None, kind=Kind.UNIFIED_HARDY):
    """Boundary-layer family with ``kappa = (b-1)/p + offset``, ``delta = offset/10`` by default."""
    limit = (params.b - 1.0) / params.p
    R, c = params.R, params.c
    return _scan(params, kind, "boundary", limit, offsets, deltas,
                 lambda k, d: radial.make_boundary_family(k, d, c, R))


def scan_origin(params, offsets=DEFAULT_OFFSETS, deltas=None, kind=Kind.HARDY7):
    """Origin family ``phi_delta r^kappa`` with ``kappa = -(Q-a)/p + offset``."""
    limit = -(params.Q - params.a) / params.p
    R = params.R
    return _scan(params, kind, "origin", limit, offsets, deltas,
                 lambda k, d: radial.make_origin_family(k, d, R))


# ------------------------------------------------------- non-attainment ---
DEFAULT_EPS = tuple(10.0 ** -e for e in np.arange(1.0, 4.01, 0.5))


@dataclass
class ProbeTable:
    eps: list
    values: list
    coefficient: float
    slope: float
    normalized_slope: float
    r_squared: float
    loglog_slope: float

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "truncated_integral"])
        for e, v in zip(self.eps, self.values):
            w.writerow([repr(e), repr(v)])
        return buf.getvalue()


def truncated_energy(params, eps, r0=0.5, profile=None, rtol=DEFAULT_RTOL):
    """``int_{r0}^{1-eps} |v'|^p r^(p-a) (1-r^c)^(p-b) r^(Q-1) dr`` for the extremal profile."""
    Q, p, a, b, c = params.Q, params.p, params.a, params.b, params.c
    v = profile if profile is not None else radial.extremal_candidate(b, p, c, 1.0)
    hi = 1.0 - eps

    def fn(r, gap_hi):
        gap = eps + gap_hi
        d = radial.derivatives(v, r, 1, R=1.0, gap=gap)
        w = -np.expm1(c * np.log1p(-gap))
        return np.abs(d[1]) ** p * r ** (p - a + Q - 1) * w ** (p - b)

    return integrate(fn, (r0, hi), SingularHints(), rtol, gap_aware=True).value


def doubling_increment(params, eps, r0=0.5):
    """``I(eps/2) - I(eps)``; tends to ``A log 2`` as ``eps -> 0``."""
    return truncated_energy(params, eps / 2, r0) - truncated_energy(params, eps, r0)


def nonattainment_probe(params, eps_grid=DEFAULT_EPS, r0=0.5):
    """Truncated energies of the extremal profile and their log-divergence fit.

    Near ``r = 1`` the integrand behaves like ``A / (1 - r)`` with
    ``A = ((b-1)c/p)^p / c``; the fitted slope against ``log(1/eps)`` divided
    by ``A`` should be close to 1.
    """
    params.require("unified")
    Q, p, b, c = params.Q, params.p, params.b, params.c
    eps = sorted((float(e) for e in eps_grid), reverse=True)
    vals = [truncated_energy(params, e, r0) for e in eps]
    x = np.log(1.0 / np.asarray(eps))
    y = np.asarray(vals)
    slope, icept = np.polyfit(x, y, 1)
    pred = slope * x + icept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    A = ((b - 1) * c / p) ** p / c
    inc = y[1:] - y[0]
    lx = np.log(x[1:] - x[0])
    ok = inc > 0
    loglog = float(np.polyfit(lx[ok], np.log(inc[ok]), 1)[0]) if ok.sum() >= 2 else math.nan
    return ProbeTable(eps, [float(v) for v in vals], A, float(slope), float(slope / A), r2, loglog)
