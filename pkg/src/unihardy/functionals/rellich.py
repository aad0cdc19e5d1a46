"""Second-order (Rellich-type) verifiers built on ``f'' + (Q-1) f'/r``."""
from __future__ import annotations

from ..errors import ConstraintViolation
from ..quadrature import DEFAULT_RTOL
from ._engine import Terms, combo_absp
from .hardy import IDENTITY_RTOL, _prepare, _snapshot
from .report import identity_report, inequality_report


def _lap_p(s, p):
    return combo_absp(s.rellich(), p)


def verify_rellich_l2(params, f, which="ineq24", complex_parts=None, *, rtol=DEFAULT_RTOL,
                      tol=IDENTITY_RTOL):
    """L2 Rellich bounds with a boundary weight, or the radial expansion identity."""
    if params.p != 2:
        raise ConstraintViolation(f"p=2 required (p={params.p:g})")
    Q, a, c = params.Q, params.a, params.c
    _, fld = _prepare(params, f, complex_parts)
    scale = params.R ** (Q - a)
    t = Terms()
    if which == "expansion":
        t.add("lap", 1.0, lambda s: _lap_p(s, 2) * s.weight(4 - a))
        t.add("second", 1.0, lambda s: s.mag2(2) * s.weight(4 - a))
        t.add("cross", (Q - 1) * (a - 3), lambda s: s.mag2(1) * s.weight(2 - a))
        terms = t.run(fld, 2, Q, scale, rtol)
        lhs = terms["lap"][0]
        rhs = terms["second"][0] + terms["cross"][0]
        return identity_report("rellich_expansion", _snapshot(params, which=which), terms,
                               lhs, rhs, tol, t.notes())
    if which == "ineq24":
        params.require("rellich24")
        K, beta = ((Q + a - 4) * c / 4) ** 2, -2.0
    elif which == "ineq25":
        params.require("rellich25")
        K, beta = (3 * c * c / 4) ** 2, -4.0
    else:
        raise ValueError(f"unknown variant {which!r}")
    t.add("lhs", K, lambda s: s.mag2(0) * s.weight(-a, beta, c))
    t.add("rhs", 1.0, lambda s: _lap_p(s, 2) * s.weight(4 - a))
    terms = t.run(fld, 2, Q, scale, rtol)
    return inequality_report("rellich24" if which == "ineq24" else "rellich25",
                             _snapshot(params, which=which), terms,
                             terms["lhs"][0], terms["rhs"][0], t.notes())


def verify_radial_lower_bound(params, f, complex_parts=None, *, rtol=DEFAULT_RTOL):
    """``|(Q(p-1)+a-p)/p|^p int |f'|^p r^-a <= int |f''+(Q-1)f'/r|^p r^(p-a)``."""
    params.require("radial_lb")
    Q, p, a = params.Q, params.p, params.a
    _, fld = _prepare(params, f, complex_parts)
    K = abs((Q * (p - 1) + a - p) / p) ** p
    t = Terms()
    t.add("lhs", K, lambda s: s.absp(1, p) * s.weight(-a))
    t.add("rhs", 1.0, lambda s: _lap_p(s, p) * s.weight(p - a))
    terms = t.run(fld, 2, Q, params.R ** (Q - a - p), rtol)
    return inequality_report("radial_lower_bound", _snapshot(params), terms,
                             terms["lhs"][0], terms["rhs"][0], t.notes())


def verify_rellich_lp(params, f, complex_parts=None, *, rtol=DEFAULT_RTOL):
    """L^p Rellich bound with remainder; the first-order step is taken at ``b = p``."""
    params.require("rellich_lp")
    Q, p, a, c = params.Q, params.p, params.a, params.c
    b = p
    _, fld = _prepare(params, f, complex_parts)
    K = abs((Q * (p - 1) + a - 2 * p) / p) ** p
    C = ((p - 1) * c / p) ** p
    critical = not (c < (Q - a) / (p - 1) * (1 - 1e-12))
    t = Terms()
    t.add("lhs_main", K * C, lambda s: s.absp(0, p) * s.weight(-a, -p, c))
    t.add("rhs", 1.0, lambda s: _lap_p(s, p) * s.weight(2 * p - a))
    if not critical:
        t.add("psi", K * (Q - a - (p - 1) * c) * ((p - 1) * c / p) ** (p - 1),
              lambda s: s.absp(0, p) * s.weight(-a, 1 - p, c))
    else:
        kappa = (b - 1.0) / p

        def g_int(s):
            base = s.combo({1: 1.0, 0: c * kappa / (s.r * s.w(c))})
            return combo_absp(base, p) * s.weight(p - Q + c * (b - 1), p - b, c)

        t.add("g_integral", 1.0, g_int)
    terms = t.run(fld, 2, Q, 1.0, rtol)
    scale = params.R ** (Q - a)
    out = {k: ((v * scale, e * scale) if k != "g_integral" else (v, e)) for k, (v, e) in terms.items()}
    diags = t.notes()
    lhs = out["lhs_main"][0] + (out["psi"][0] if "psi" in out else 0.0)
    if critical:
        G = terms["g_integral"][0]
        if G > 0 and K > 0:
            est = (terms["rhs"][0] - terms["lhs_main"][0]) / (K * G)
            diags.append(f"critical c: empirical constant for the g-integral term >= {est:.6g}")
    return inequality_report("rellich_lp", _snapshot(params, b=b), out, lhs, out["rhs"][0], diags)
