"""Logarithmic limits ``c -> 0`` and the Euclidean comparison chains."""
from __future__ import annotations

import math

from ..errors import ConstraintViolation, Inadmissible
from ..group_model import GroupModel, NormKind
from ..quadrature import DEFAULT_RTOL
from ._engine import Terms, as_field, combo_absp
from .hardy import _snapshot
from .report import SAFETY, VerificationReport, Status, inequality_report

DEFAULT_C_GRID = (0.2, 0.1, 0.05, 0.02, 0.01)
LOG_GAP_TOL = 0.01


def _link_ok(terms, lo, hi):
    lv, le = terms[lo]
    hv, he = terms[hi]
    budget = SAFETY * (le + he) + 1e-14 * (abs(lv) + abs(hv))
    return hv - lv, hv - lv >= -budget


def verify_log_limits(params, f, c_grid=DEFAULT_C_GRID, *, rtol=DEFAULT_RTOL, gap_tol=LOG_GAP_TOL):
    """Log-weight Hardy inequality, checked directly and as the ``c -> 0`` limit.

    ``1 - r^c = c log(1/r) + O(c^2)``, so ``c^(b-p)`` times the ``c``-family
    terms must approach the log-weight terms as ``c`` decreases.
    """
    params.require("log")
    Q, p, a, b = params.Q, params.p, params.a, params.b
    grid = sorted((float(x) for x in c_grid), reverse=True)
    if not grid or grid[-1] <= 0 or grid[0] > 0.2:
        raise ConstraintViolation("c_grid must lie in (0, 0.2]")
    fld = as_field(f).scaled(params.R)
    sup = fld.support()
    if sup is not None and (sup[0] <= 0.0 or sup[1] >= 1.0):
        raise Inadmissible("log-limit check needs f supported away from 0 and R")

    def logw(s, alpha, beta):
        return s.weight(alpha) * s.log_inv() ** beta

    t = Terms()
    K = ((b - 1) / p) ** p
    t.add("log_lhs", K, lambda s: s.absp(0, p) * logw(s, -a, -b))
    t.add("log_rhs", 1.0, lambda s: s.absp(1, p) * logw(s, p - a, p - b))
    t.add("log7_lhs", ((Q - a) / p) ** p, lambda s: s.absp(0, p) * logw(s, -a, -b))
    t.add("log7_rhs", 1.0, lambda s: s.absp(1, p) * logw(s, p - a, -b))
    extra = []
    if p == 2 and 4 - Q < a <= Q:
        t.add("log24_lhs", ((Q + a - 4) / 4) ** 2, lambda s: s.mag2(0) * logw(s, -a, -2))
        extra.append(("log24_lhs", "lap_rhs"))
    if p == 2 and 3 <= a <= Q:
        t.add("log25_lhs", (3 / 4) ** 2, lambda s: s.mag2(0) * logw(s, -a, -4))
        extra.append(("log25_lhs", "lap_rhs"))
    if extra:
        t.add("lap_rhs", 1.0, lambda s: combo_absp(s.rellich(), 2) * s.weight(4 - a))
    for c in grid:
        t.add(f"lhs_c={c:g}", c ** (b - p) * ((b - 1) * c / p) ** p,
              lambda s, c=c: s.absp(0, p) * s.weight(-a, -b, c))
        t.add(f"rhs_c={c:g}", c ** (b - p), lambda s, c=c: s.absp(1, p) * s.weight(p - a, p - b, c))
    terms = t.run(fld, 2 if extra else 1, Q, params.R ** (Q - a), rtol)

    diags = []
    ok = True
    for lo, hi in [("log7_lhs", "log7_rhs")] + extra:
        slack, good = _link_ok(terms, lo, hi)
        diags.append(f"{lo} <= {hi}: slack {slack:.6e}")
        ok = ok and good
    target = terms["log_lhs"][0]
    gaps = []
    for c in grid:
        v = terms[f"lhs_c={c:g}"][0]
        gaps.append(abs(v - target) / abs(target) if target else abs(v))
    for c, g in zip(grid, gaps):
        diags.append(f"c={c:g}: relative gap to log limit {g:.3e}")
    monotone = all(g2 <= g1 * (1 + 1e-9) + 1e-12 for g1, g2 in zip(gaps, gaps[1:]))
    if not monotone:
        ok = False
        diags.append("rescaled c-family does not approach the log limit monotonically")
    if gaps[-1] > gap_tol:
        ok = False
        diags.append(f"final gap {gaps[-1]:.3e} exceeds {gap_tol:g}")
    terms["final_gap"] = (gaps[-1], 0.0)
    budget_terms = {k: terms[k] for k in ("log_lhs", "log_rhs")}
    rep = inequality_report("log_limits", _snapshot(params, c_grid=list(grid)), budget_terms,
                            terms["log_lhs"][0], terms["log_rhs"][0], diags, ok)
    rep.terms = terms
    return rep


# ------------------------------------------------------------------ chains --
def verify_chains(model, f, *, p=2.0, a=0.0, b=2.0, R=1.0, rtol=DEFAULT_RTOL):
    """Every link of the Euclidean comparison chains, checked one by one.

    * classical: ``((n-a)/p)^p int|f|^p r^-a <= ((p-1)c/p)^p int|f|^p r^-a w^-p
      <= int|f'|^p r^(p-a)`` with ``c = (n-a)/(p-1)``;
    * geometric: ``int|f|^p (R-r)^-b`` against ``r^-p (1-r/R)^-b`` and the
      gradient term, ``c = 1`` and ``a = p``;
    * Rellich (``n >= 5``): ``int|f|^2 r^-4 <= int|f|^2 r^-4 w^-2 <= (n(n-4)/4)^-2 int|Lf|^2``
      with ``c = n - 4``;
    * geometric Rellich (``n >= 7``) with ``(R-r)^-4``.
    """
    if not (isinstance(model, GroupModel) and model.norm_kind is NormKind.EUCLIDEAN):
        raise ConstraintViolation("chains are stated for the Euclidean model")
    n = float(model.n)
    fld = as_field(f).scaled(R)
    if not fld.is_real:
        raise ConstraintViolation("chains take a real function")
    groups = []   # (label, dim, Terms, links)
    diags = []

    if a < n and p > 1:
        c0 = (n - a) / (p - 1)
        t = Terms()
        t.add("classical.low", ((n - a) / p) ** p, lambda s: s.absp(0, p) * s.weight(-a))
        t.add("classical.mid", ((p - 1) * c0 / p) ** p, lambda s: s.absp(0, p) * s.weight(-a, -p, c0))
        t.add("classical.top", 1.0, lambda s: s.absp(1, p) * s.weight(p - a))
        groups.append((n - a, t, [("classical.low", "classical.mid"), ("classical.mid", "classical.top")]))
    else:
        diags.append("classical chain skipped: needs a < n and p > 1")

    if b > 1 and p < n and 1.0 <= (n - p) / (b - 1) + 1e-12:
        K = ((b - 1) / p) ** p
        t = Terms()
        t.add("geometric.low", K, lambda s: s.absp(0, p) * s.weight(0.0, -b, 1.0))
        t.add("geometric.mid", K, lambda s: s.absp(0, p) * s.weight(-p, -b, 1.0))
        t.add("geometric.top", 1.0, lambda s: s.absp(1, p) * s.weight(0.0, p - b, 1.0))
        groups.append((n - b, t, [("geometric.low", "geometric.mid"), ("geometric.mid", "geometric.top")]))
    else:
        diags.append("geometric Hardy chain skipped: needs b > 1, p < n, 1 <= (n-p)/(b-1)")

    if n >= 5:
        c1 = n - 4
        t = Terms()
        t.add("rellich.low", 1.0, lambda s: s.mag2(0) * s.weight(-4.0))
        t.add("rellich.mid", 1.0, lambda s: s.mag2(0) * s.weight(-4.0, -2.0, c1))
        t.add("rellich.top", (n * (n - 4) / 4) ** -2,
              lambda s: combo_absp(s.rellich(), 2) * s.weight(0.0))
        groups.append((n - 4, t, [("rellich.low", "rellich.mid"), ("rellich.mid", "rellich.top")]))
    if n >= 7:
        t = Terms()
        t.add("geo_rellich.low", 1.0, lambda s: s.mag2(0) * s.weight(0.0, -4.0, 1.0))
        t.add("geo_rellich.mid", 1.0, lambda s: s.mag2(0) * s.weight(-4.0, -4.0, 1.0))
        t.add("geo_rellich.top", (3 / 4) ** -2, lambda s: combo_absp(s.rellich(), 2) * s.weight(0.0))
        groups.append((n - 4, t, [("geo_rellich.low", "geo_rellich.mid"),
                                  ("geo_rellich.mid", "geo_rellich.top")]))

    terms = {}
    links = []
    for dim, t, lk in groups:
        order = 2 if any(name.endswith(".top") and "rellich" in name for name in t.integrands) else 1
        terms.update(t.run(fld, order, n, R ** dim, rtol))
        links += lk
    ok = True
    min_slack = math.inf
    for lo, hi in links:
        slack, good = _link_ok(terms, lo, hi)
        diags.append(f"{lo} <= {hi}: slack {slack:.6e}{'' if good else '  VIOLATED'}")
        ok = ok and good
        min_slack = min(min_slack, slack)
    first, last = links[0][0], links[1][1]
    lhs, rhs = terms[first][0], terms[last][0]
    res = abs(rhs - lhs)
    return VerificationReport("chains", {"n": model.n, "p": p, "a": a, "b": b, "R": R}, terms,
                              lhs, rhs, res, res / max(abs(lhs), abs(rhs), 1e-300),
                              Status.INEQUALITY_PASS if ok else Status.FAIL, min_slack, diags)
