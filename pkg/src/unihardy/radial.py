"""Radial expression trees with exact derivatives via Taylor jets.

Expressions describe functions of the radius ``r`` only. Every node is an
immutable dataclass; evaluation at a vector of radii returns a
:class:`~unihardy.jets.Jet`, whose coefficients give the derivatives along
dilation rays.

Near the outer radius the quantity ``R - r`` is tracked separately (the
"gap") so that factors such as ``1 - (r/R)**c`` and ``log(R/r)`` keep full
relative precision even when ``r`` is within a few ulps of ``R``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import inf, isfinite

import numpy as np

from .errors import BadDelta, EvalOutsideDomain
from .jets import Jet, power_of_variable

# Beyond this, exp(-z) is below 1e-260 and its derivative jets are negligible.
_EXP_CUTOFF = 600.0


@dataclass(frozen=True)
class _Point:
    r: np.ndarray
    gap: np.ndarray | None = None  # Rref - r, carried at full precision
    Rref: float | None = None

    def gap_to(self, R):
        if self.gap is not None and self.Rref is not None:
            if R == self.Rref:
                return self.gap
            return (R - self.Rref) + self.gap
        return R - self.r

    def scaled(self, s):
        gap = None if self.gap is None else s * self.gap
        Rref = None if self.Rref is None else s * self.Rref
        return _Point(s * self.r, gap, Rref)


def _zeros(order, shape):
    return Jet(np.zeros((order + 1,) + shape))


def _blend(mask, on, off):
    """Pick jet coefficients from ``on`` where ``mask`` holds."""
    return Jet(np.where(mask, on.coeffs, off.coeffs))


class RadialExpr:
    """Base class. Subclasses implement ``_jet``, ``_support`` and friends."""

    # convenience algebra, so that expressions read naturally in code
    def __add__(self, other):
        return Sum((self, _wrap(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return Product((self, _wrap(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Negate(self)

    def __sub__(self, other):
        return Sum((self, Negate(_wrap(other))))

    def _jet(self, pt, order):  # pragma: no cover - abstract
        raise NotImplementedError

    def _support(self, R):
        return (0.0, R)

    def _breaks(self):
        return ()

    def _exponents(self, order, R):
        """Leading powers of ``f^(j)`` at the origin and at ``R``.

        Returns two lists of length ``order + 1``; ``inf`` means the
        derivative vanishes identically near that endpoint.
        """
        raise NotImplementedError


def _wrap(x):
    return x if isinstance(x, RadialExpr) else Const(float(x))


# ---------------------------------------------------------------- leaves ---
@dataclass(frozen=True)
class Const(RadialExpr):
    v: float

    def _jet(self, pt, order):
        return Jet.constant(self.v, order, np.shape(pt.r))

    def _support(self, R):
        return None if self.v == 0 else (0.0, R)

    def _exponents(self, order, R):
        e = [0.0 if self.v != 0 else inf] + [inf] * order
        return e, list(e)


@dataclass(frozen=True)
class PowerR(RadialExpr):
    """``r ** alpha``."""

    alpha: float

    def _jet(self, pt, order):
        return power_of_variable(pt.r, self.alpha, order)

    def _exponents(self, order, R):
        a = self.alpha
        poly = a >= 0 and float(a).is_integer()
        origin = [inf if poly and j > a else a - j for j in range(order + 1)]
        bnd = [inf if poly and j > a else 0.0 for j in range(order + 1)]
        return origin, bnd


@dataclass(frozen=True)
class BoundaryPower(RadialExpr):
    """``(1 - (r/R)**c) ** kappa``."""

    c: float
    kappa: float
    R: float = 1.0

    def _jet(self, pt, order):
        c, R = self.c, self.R
        inner = power_of_variable(pt.r, c, order) * (-(R ** -c))
        gap = pt.gap_to(R)
        with np.errstate(invalid="ignore", divide="ignore"):
            w0 = -np.expm1(c * np.log1p(-gap / R))
            w = inner.with_value(w0)
            out = w.power(self.kappa)
        return out

    def _exponents(self, order, R):
        c, k = self.c, self.kappa
        c_int = float(c).is_integer()
        origin = [0.0] + [max(c - j, 0.0) if c_int else c - j for j in range(1, order + 1)]
        if self.R != R:
            return origin, [0.0] * (order + 1)
        k_int = k >= 0 and float(k).is_integer()
        bnd = [0.0 if (k_int and j > k) else k - j for j in range(order + 1)]
        return origin, bnd


@dataclass(frozen=True)
class LogR(RadialExpr):
    """``log(R / r)``."""

    R: float = 1.0

    def _jet(self, pt, order):
        r = np.asarray(pt.r, dtype=float)
        c = np.empty((order + 1,) + r.shape)
        gap = pt.gap_to(self.R)
        c[0] = -np.log1p(-gap / self.R)
        for j in range(1, order + 1):
            c[j] = (-1.0) ** j / (j * r**j)
        return Jet(c)

    def _exponents(self, order, R):
        origin = [0.0] + [-float(j) for j in range(1, order + 1)]
        bnd = [1.0 if self.R == R else 0.0] + [0.0] * order
        return origin, bnd


@dataclass(frozen=True)
class Bump(RadialExpr):
    """Two-sided smooth bump ``exp(1 - 1/(1 - x^2))`` on ``(r0, r1)``."""

    r0: float
    r1: float

    def __post_init__(self):
        if not self.r0 < self.r1:
            raise ValueError("Bump needs r0 < r1")

    def _jet(self, pt, order):
        r = np.asarray(pt.r, dtype=float)
        half = 0.5 * (self.r1 - self.r0)
        x = Jet.variable((r - 0.5 * (self.r0 + self.r1)) / half, order)
        x = Jet(x.coeffs * (1.0 / half) ** np.arange(order + 1).reshape((-1,) + (1,) * r.ndim))
        one_minus = 1.0 - x * x
        live = one_minus.value > 1.0 / _EXP_CUTOFF
        safe = _blend(live, one_minus, Jet.constant(1.0, order, r.shape))
        jet = (1.0 - safe.reciprocal()).exp()
        return _blend(live, jet, _zeros(order, r.shape))

    def _support(self, R):
        lo, hi = max(self.r0, 0.0), min(self.r1, R)
        return (lo, hi) if lo < hi else None

    def _breaks(self):
        return (self.r0, self.r1)

    def _exponents(self, order, R):
        z = [inf] * (order + 1)
        origin = z if self.r0 > 0 else [0.0] * (order + 1)
        bnd = z if self.r1 < R else [0.0] * (order + 1)
        return origin, bnd


@dataclass(frozen=True)
class Ramp(RadialExpr):
    """Smooth step between ``r0`` and ``r1``.

    With ``t = (r - r0)/(r1 - r0)`` the rising ramp is
    ``1/(1 + exp(1/t - 1/(1-t)))``: exactly 0 for ``t <= 0``, exactly 1 for
    ``t >= 1``. The falling ramp is its mirror image ``1 - s(t) = s(1 - t)``.
    """

    r0: float
    r1: float
    rising: bool = True

    def __post_init__(self):
        if not self.r0 < self.r1:
            raise ValueError("Ramp needs r0 < r1")

    def _jet(self, pt, order):
        r = np.asarray(pt.r, dtype=float)
        width = self.r1 - self.r0
        t0 = (r - self.r0) / width
        if not self.rising:
            t0 = 1.0 - t0
        sign = 1.0 if self.rising else -1.0
        inside = (t0 > 0) & (t0 < 1)
        ts = np.where(inside, t0, 0.5)
        t = Jet.variable(ts, order)
        scale = (sign / width) ** np.arange(order + 1)
        t = Jet(t.coeffs * scale.reshape((-1,) + (1,) * r.ndim))
        z = t.reciprocal() - (1.0 - t).reciprocal()
        dead = inside & (z.value > _EXP_CUTOFF)
        full = inside & (z.value < -_EXP_CUTOFF)
        live = inside & ~dead & ~full
        zs = _blend(live, z, Jet.constant(0.0, order, r.shape))
        s = (1.0 + zs.exp()).reciprocal()
        one = Jet.constant(1.0, order, r.shape)
        zero = _zeros(order, r.shape)
        out = _blend(live, s, zero)
        out = _blend(full | (~inside & (t0 >= 1)), one, out)
        return out

    def _support(self, R):
        if self.rising:
            lo, hi = max(self.r0, 0.0), R
        else:
            lo, hi = 0.0, min(self.r1, R)
        return (lo, hi) if lo < hi else None

    def _breaks(self):
        return (self.r0, self.r1)

    def _exponents(self, order, R):
        flat = [0.0] + [inf] * order
        z = [inf] * (order + 1)
        if self.rising:
            origin = z if self.r0 > 0 else [0.0] * (order + 1)
            bnd = flat if self.r1 < R else [0.0] * (order + 1)
        else:
            origin = flat if self.r0 > 0 else [0.0] * (order + 1)
            bnd = z if self.r1 < R else [0.0] * (order + 1)
        return origin, bnd


# ------------------------------------------------------------- composites ---
@dataclass(frozen=True)
class Sum(RadialExpr):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(_wrap(c) for c in self.children))

    def _jet(self, pt, order):
        out = _zeros(order, np.shape(pt.r))
        for ch in self.children:
            out = out + ch._jet(pt, order)
        return out

    def _support(self, R):
        parts = [s for s in (ch._support(R) for ch in self.children) if s is not None]
        if not parts:
            return None
        return (min(p[0] for p in parts), max(p[1] for p in parts))

    def _breaks(self):
        return tuple(b for ch in self.children for b in ch._breaks())

    def _exponents(self, order, R):
        if not self.children:
            z = [inf] * (order + 1)
            return z, list(z)
        pairs = [ch._exponents(order, R) for ch in self.children]
        origin = [min(p[0][j] for p in pairs) for j in range(order + 1)]
        bnd = [min(p[1][j] for p in pairs) for j in range(order + 1)]
        return origin, bnd


@dataclass(frozen=True)
class Product(RadialExpr):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(_wrap(c) for c in self.children))

    def _jet(self, pt, order):
        out = Jet.constant(1.0, order, np.shape(pt.r))
        for ch in self.children:
            out = out * ch._jet(pt, order)
        return out

    def _support(self, R):
        lo, hi = 0.0, R
        for ch in self.children:
            s = ch._support(R)
            if s is None:
                return None
            lo, hi = max(lo, s[0]), min(hi, s[1])
        return (lo, hi) if lo < hi else None

    def _breaks(self):
        return tuple(b for ch in self.children for b in ch._breaks())

    def _exponents(self, order, R):
        origin = [0.0] + [inf] * order
        bnd = list(origin)
        for ch in self.children:
            eo, eb = ch._exponents(order, R)
            origin = _leibniz_min(origin, eo)
            bnd = _leibniz_min(bnd, eb)
        return origin, bnd


def _leibniz_min(e1, e2):
    n = len(e1)
    return [min(e1[i] + e2[j - i] for i in range(j + 1)) for j in range(n)]


@dataclass(frozen=True)
class Negate(RadialExpr):
    child: RadialExpr

    def _jet(self, pt, order):
        return -self.child._jet(pt, order)

    def _support(self, R):
        return self.child._support(R)

    def _breaks(self):
        return self.child._breaks()

    def _exponents(self, order, R):
        return self.child._exponents(order, R)


@dataclass(frozen=True)
class Scaled(RadialExpr):
    """``child(s * r)``; used to move any outer radius onto 1."""

    child: RadialExpr
    s: float

    def _jet(self, pt, order):
        inner = self.child._jet(pt.scaled(self.s), order)
        scale = self.s ** np.arange(order + 1)
        return Jet(inner.coeffs * scale.reshape((-1,) + (1,) * (inner.coeffs.ndim - 1)))

    def _support(self, R):
        s = self.child._support(R * self.s)
        return None if s is None else (s[0] / self.s, s[1] / self.s)

    def _breaks(self):
        return tuple(b / self.s for b in self.child._breaks())

    def _exponents(self, order, R):
        return self.child._exponents(order, R * self.s)


# ------------------------------------------------------------ public API ---
def eval_jet(expr, r, order=0, R=None, gap=None):
    """Evaluate ``expr`` and its first ``order`` derivatives at ``r``.

    Parameters
    ----------
    expr : RadialExpr
    r : float or ndarray
        Radii, all strictly positive (and below ``R`` when ``R`` is given).
    order : int
    R : float, optional
        Outer radius of the domain. Enables the domain check and, together
        with ``gap``, the precise boundary arithmetic.
    gap : ndarray, optional
        ``R - r`` computed at full precision by the caller.

    Returns
    -------
    Jet
        ``jet.derivative(j)`` is the j-th derivative at ``r``.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)) or (R is not None and np.any(r_arr >= R) and gap is None):
        bad = r_arr[~(r_arr > 0) | ((R is not None) & (r_arr >= (R if R is not None else inf)))]
        raise EvalOutsideDomain(f"radius {bad.ravel()[0]!r} outside (0, {R if R is not None else 'inf'})")
    if gap is not None:
        gap = np.asarray(gap, dtype=float)
    pt = _Point(r_arr, gap, R)
    return expr._jet(pt, order)


def derivatives(expr, r, order, R=None, gap=None):
    """Array ``[f, f', ..., f^(order)]`` of shape ``(order + 1,) + r.shape``."""
    return eval_jet(expr, r, order, R=R, gap=gap).derivatives()


def evaluate(expr, r, R=None):
    return eval_jet(expr, r, 0, R=R).value


def rellich_operand(expr, Q, r, R=None, gap=None):
    """``f'' + (Q - 1) f' / r``, the radial part of the Laplacian-type operator."""
    d = derivatives(expr, r, 2, R=R, gap=gap)
    return d[2] + (Q - 1.0) * d[1] / np.asarray(r, dtype=float)


def support(expr, R=1.0):
    """Conservative interval containing every radius where ``expr`` is nonzero.

    Returns ``None`` when the expression vanishes identically.
    """
    return expr._support(R)


def breakpoints(expr, R=1.0):
    """Sorted interior radii where some node stops being analytic."""
    pts = {b for b in expr._breaks() if 0.0 < b < R}
    return sorted(pts)


def local_exponents(expr, order=0, R=1.0):
    """Leading powers of ``f^(j)``, ``j <= order``, at ``r -> 0`` and ``r -> R``."""
    origin, bnd = expr._exponents(order, R)
    return list(origin), list(bnd)


@dataclass(frozen=True)
class DivergenceReason:
    endpoint: float
    exponent: float

    def __str__(self):
        return f"integrand behaves like a power {self.exponent:g} near r={self.endpoint:g}"


def admissible(expr, exponents, Q, p=2.0, deriv=0, R=1.0):
    """Check that ``|f^(deriv)|^p`` times a weight is integrable for ``r^(Q-1) dr``.

    ``exponents`` holds ``origin_power`` and ``boundary_power``; the weight is
    ``r**origin_power * (1 - (r/R)**c)**boundary_power``. Returns ``None``
    when both touched endpoints are integrable, otherwise a
    :class:`DivergenceReason` naming the first offending endpoint.
    """
    if isinstance(exponents, dict):
        e0 = exponents.get("origin_power", 0.0)
        e1 = exponents.get("boundary_power", 0.0)
    else:
        e0, e1 = exponents
    sup = support(expr, R)
    if sup is None:
        return None
    origin, bnd = local_exponents(expr, deriv, R)
    slack = 1e-9
    if sup[0] <= 0.0:
        lead = origin[deriv]
        if isfinite(lead):
            total = p * lead + e0 + Q - 1.0
            if not total > -1.0 + slack:
                return DivergenceReason(0.0, total)
    if sup[1] >= R:
        lead = bnd[deriv]
        if isfinite(lead):
            total = p * lead + e1
            if not total > -1.0 + slack:
                return DivergenceReason(R, total)
    return None


# -------------------------------------------------------------- families ---
def cutoff_near_boundary(delta, R=1.0):
    """0 on ``(0, R(1-2delta))``, 1 on ``(R(1-delta), R)``."""
    _check_delta(delta)
    return Ramp(R * (1.0 - 2.0 * delta), R * (1.0 - delta), rising=True)


def cutoff_near_origin(delta, R=1.0):
    """1 on ``(0, R delta)``, 0 on ``(2 R delta, R)``."""
    _check_delta(delta)
    return Ramp(R * delta, 2.0 * R * delta, rising=False)


def _check_delta(delta):
    if not 0.0 < delta < 0.5:
        raise BadDelta(f"delta must lie in (0, 1/2), got {delta!r}")


def make_boundary_family(kappa, delta, c, R=1.0):
    """``phi_delta * (1 - (r/R)^c)^kappa`` with the cutoff living near ``R``."""
    if not kappa > 0 or not c > 0:
        raise ValueError("boundary family needs kappa > 0 and c > 0")
    return Product((cutoff_near_boundary(delta, R), BoundaryPower(c, kappa, R)))


def make_origin_family(kappa, delta, R=1.0):
    """``phi_delta * r^kappa`` with the cutoff living near the origin."""
    return Product((cutoff_near_origin(delta, R), PowerR(kappa)))


def extremal_candidate(b, p, c, R=1.0):
    """``((r/R)^(-c) - 1)^((b-1)/p)``, the profile that saturates the bound."""
    kappa = (b - 1.0) / p
    return Product((Const(R ** (c * kappa)), PowerR(-c * kappa), BoundaryPower(c, kappa, R)))
