"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict; the lines are printed at the end of
the pytest run (see conftest.py) and also when this file is run directly.
"""
import math
import time

import numpy as np
import pytest

from unihardy import radial
from unihardy.functionals import (HardyParams, Status, fundamental_inequality_suite,
                                  resolve_ckn_params, verify_chains, verify_ckn, verify_high_l2,
                                  verify_high_lp, verify_l2_identity, verify_log_limits,
                                  verify_lp_identity, verify_radial_lower_bound,
                                  verify_rellich_l2, verify_rellich_lp, verify_unified_hardy)
from unihardy.group_model import GroupModel, mc_ball_moment, polar_moment, sphere_measure
from unihardy.jets import Jet
from unihardy.quadrature import ip_identity_check
from unihardy.sharpness import nonattainment_probe, scan_boundary, scan_origin

VERDICTS = {}

BUMP = radial.Bump(0.2, 0.8)
F = radial.Product((BUMP, radial.PowerR(1.0)))
CORPUS = {
    "bump*r": F,
    "bump": BUMP,
    "bump*r^2": radial.Product((radial.Bump(0.1, 0.9), radial.PowerR(2.0))),
    "bump*log": radial.Product((radial.Bump(0.3, 0.95), radial.LogR(1.0))),
    "two bumps": radial.Sum((radial.Bump(0.15, 0.4), radial.Negate(radial.Bump(0.5, 0.85)))),
}


def record(n, ok, detail):
    VERDICTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(VERDICTS[n])
    assert ok, detail


def test_criterion_01_l2_identity():
    t0 = time.perf_counter()
    rep = verify_l2_identity(HardyParams(4, 2, 1, 2, 1, 1), F)
    elapsed = time.perf_counter() - t0
    others = [verify_l2_identity(HardyParams(Q, 2, 1, 2, 1), F) for Q in (2.5, 4.0, 7.0)]
    worst = max(r.residual_rel for r in [rep] + others)
    ok = rep.residual_rel <= 1e-8 and elapsed < 1.0 and all(
        r.passed and r.residual_rel <= 1e-8 for r in others)
    record(1, ok, f"worst residual_rel {worst:.2e}, runtime {elapsed:.3f}s")


def test_criterion_02_lp_identity():
    P = HardyParams(4, 2, 1, 2, 1)
    reps = {p: verify_lp_identity(P.with_(p=p), F) for p in (1.5, 3.0)}
    l2, lp2 = verify_l2_identity(P, F), verify_lp_identity(P, F)
    dev = max(abs(lp2.terms[k][0] - v) for k, (v, _) in l2.terms.items())
    ok = all(r.passed and r.residual_rel <= 1e-6 for r in reps.values()) and dev <= 1e-9
    record(2, ok, f"residual_rel p=1.5 {reps[1.5].residual_rel:.2e}, p=3 {reps[3.0].residual_rel:.2e}; "
                  f"p=2 vs L2 max term deviation {dev:.1e}")


def test_criterion_03_higher_order_identities():
    h2 = verify_high_l2(HardyParams(8, 2, 1, 2, 0.5), F, 2)
    hp = verify_high_lp(HardyParams(8, 3, 1, 2, 0.5), F, 2)
    P = HardyParams(4, 2, 1, 2, 1)
    same_l2 = verify_high_l2(P, F, 1).terms == verify_l2_identity(P, F).terms
    same_lp = verify_high_lp(P.with_(p=3), F, 1).terms == verify_lp_identity(P.with_(p=3), F).terms
    ok = h2.residual_rel <= 1e-6 and hp.residual_rel <= 1e-6 and h2.passed and hp.passed \
        and same_l2 and same_lp
    record(3, ok, f"k=2 residual_rel L2 {h2.residual_rel:.2e}, Lp {hp.residual_rel:.2e}; "
                  f"k=1 identical: {same_l2 and same_lp}")


def test_criterion_04_unified_hardy_grid():
    bad, worst_consistency, count = [], 0.0, 0
    for p in (1.5, 2.0, 3.0):
        for a in (0.0, 1.0, 2.0):
            for b in (1.5, 2.0, 3.0):
                for frac in (0.3, 0.7, 1.0):
                    P = HardyParams(4.0, p, a, b, 1.0)
                    P = P.with_(c=frac * P.critical_c())
                    rep = verify_unified_hardy(P, F)
                    count += 1
                    if rep.status is not Status.INEQUALITY_PASS or rep.slack < 0:
                        bad.append((p, a, b, frac))
                    if frac < 1.0:
                        rem = rep.term("identity_remainder")
                        worst_consistency = max(worst_consistency,
                                                abs(rep.slack - rem) / max(abs(rem), 1e-300))
    ok = not bad and worst_consistency <= 1e-6
    record(4, ok, f"{count} tuples, {len(bad)} failures, slack vs remainder worst rel "
                  f"{worst_consistency:.1e}")


def test_criterion_05_boundary_sharpness():
    P = HardyParams(4, 2, 1, 2, 1)
    t0 = time.perf_counter()
    scan = scan_boundary(P)
    elapsed = time.perf_counter() - t0
    finest = scan.finest
    at_grid = math.isclose(finest["kappa"], 0.51) and math.isclose(finest["delta"], 1e-3)
    ok = at_grid and scan.raw_gap <= 0.05 and scan.rows_above_target() and elapsed < 30
    record(5, ok, f"ratio {finest['ratio']:.5f} at offset 0.01, delta 1e-3: raw gap "
                  f"{scan.raw_gap:.1%} (extrapolated {scan.extrapolated:.5f}, gap "
                  f"{scan.relative_gap:.2%}); rows above target {scan.rows_above_target()}; "
                  f"{elapsed:.2f}s")


def test_criterion_06_origin_sharpness():
    scan = scan_origin(HardyParams(4, 2, 1, 1, 1))
    ok = scan.raw_gap <= 0.05 and scan.rows_above_target()
    record(6, ok, f"finest ratio {scan.finest['ratio']:.5f} vs 2.25: gap {scan.raw_gap:.2%} "
                  f"(extrapolated {scan.extrapolated:.5f})")


def test_criterion_07_nonattainment_probe():
    table = nonattainment_probe(HardyParams(4, 2, 1, 2, 1))
    ok = abs(table.normalized_slope - 1.0) <= 0.1
    record(7, ok, f"slope/A {table.normalized_slope:.4f}, R^2 {table.r_squared:.6f}, "
                  f"log-log slope {table.loglog_slope:.3f}")


def test_criterion_08_ckn():
    P = HardyParams(4, 2, 1, 2, 1)
    reps = {d: verify_ckn(resolve_ckn_params(P, 2.0, 2.0, 0.0, d), F) for d in (0.0, 0.5, 1.0)}
    trivial = math.isclose(reps[0.0].lhs, reps[0.0].rhs, rel_tol=1e-10)
    hi = verify_high_lp(P, F, 1, mode="inequality")
    reduction = math.isclose(reps[1.0].lhs ** 2, hi.lhs, rel_tol=1e-8) and math.isclose(
        reps[1.0].rhs ** 2, hi.rhs - hi.term("dropped_terms"), rel_tol=1e-8)
    holder = []
    for f in CORPUS.values():
        for d in (0.0, 0.25, 0.5, 0.75, 1.0):
            rep = verify_ckn(resolve_ckn_params(P, 2.0, 2.0, 0.0, d), f)
            holder.append(rep.term("holder_rhs") - rep.term("norm_r"))
        rep = verify_ckn(resolve_ckn_params(P.with_(p=3.0), 2.0, 2.4, 0.3), f)
        holder.append(rep.term("holder_rhs") - rep.term("norm_r"))
    ok = all(r.passed for r in reps.values()) and trivial and reduction and min(holder) >= 0
    record(8, ok, f"delta=0,1/2,1 pass; delta=0 equality {trivial}; delta=1 reduction {reduction}; "
                  f"min Hoelder slack {min(holder):.2e} over {len(holder)} cases")


def test_criterion_09_rellich():
    r24 = verify_rellich_l2(HardyParams(5, 2, 4, 2, 1), F, "ineq24")
    r25 = verify_rellich_l2(HardyParams(8, 2, 4, 2, 1), F, "ineq25")
    exp = [verify_rellich_l2(HardyParams(5, 2, a, 2, 1), F, "expansion") for a in (1.0, 3.0, 4.0)]
    lb = [verify_radial_lower_bound(HardyParams(5, p, 1, 2, 1), F) for p in (1.5, 2.0, 3.0)]
    lp = [verify_rellich_lp(HardyParams(6, p, 1, p, 1), F) for p in (1.5, 2.0, 3.0)]
    r35 = verify_rellich_lp(HardyParams(5, 2, 4, 2, 1), F)
    cross = max(abs(r35.rhs - r24.rhs) / r24.rhs,
                abs(r35.term("lhs_main") - r24.term("lhs")) / r24.term("lhs"))
    ok = (r24.passed and r25.passed and all(e.residual_rel <= 1e-8 and e.passed for e in exp)
          and all(r.passed for r in lb + lp) and r35.passed and cross <= 1e-9)
    record(9, ok, f"rellich24 and rellich25 pass; expansion worst residual {max(e.residual_rel for e in exp):.1e}"
                  f" (a=3: {exp[1].residual_abs:.1e}); lower bound and Lp Rellich pass; "
                  f"p=2 cross-check {cross:.1e}")


def test_criterion_10_log_limits():
    P = HardyParams(4, 2, 1, 2, 1)
    reps = {name: verify_log_limits(P, f) for name, f in CORPUS.items()
            if name != "bump*log"}
    worst = max(r.term("final_gap") for r in reps.values())
    ok = all(r.passed for r in reps.values()) and worst <= 0.01
    record(10, ok, f"log inequality holds on {len(reps)} functions; worst gap at c=0.01 {worst:.2%}")


def test_criterion_11_chains():
    reps = {n: verify_chains(GroupModel.euclidean(n), F) for n in (3, 5)}
    links = sum(1 for r in reps.values() for d in r.diagnostics if "<=" in d)
    ok = all(r.status is Status.INEQUALITY_PASS for r in reps.values())
    record(11, ok, f"n=3 and n=5: {links} links checked, min slack "
                   f"{min(r.slack for r in reps.values()):.2e}")


def test_criterion_12_monte_carlo():
    t0 = time.perf_counter()
    e3 = GroupModel.euclidean(3)
    sphere = sphere_measure(e3)
    dev = []
    for s in (0.0, 1.0):
        est = mc_ball_moment(e3, s, 1.0, 10**6, seed=11 + int(s))
        dev.append(abs(est.estimate - polar_moment(sphere, 3, s, 1.0)) / est.stderr)
    h = GroupModel.heisenberg()
    scal = []
    for s in (0.0, 1.0):
        one = mc_ball_moment(h, s, 1.0, 10**6, seed=21 + int(s))
        two = mc_ball_moment(h, s, 2.0, 10**6, seed=31 + int(s))
        ratio = two.estimate / one.estimate
        err = ratio * math.hypot(one.stderr / one.estimate, two.stderr / two.estimate)
        scal.append(abs(ratio - 2.0 ** (4 + s)) / err)
    elapsed = time.perf_counter() - t0
    ok = max(dev) <= 3 and max(scal) <= 3 and elapsed < 60
    record(12, ok, f"Euclidean moments within {max(dev):.2f} sigma; Koranyi scaling within "
                   f"{max(scal):.2f} sigma; {elapsed:.1f}s")


def test_criterion_13_property_suites():
    x = np.linspace(0.3, 2.0, 25)
    j = Jet.variable(x, 2)
    f = (j.log() * j).exp() / (1 + j * j)   # x^x / (1 + x^2)
    ref = lambda t: t ** t / (1 + t * t)
    h = 1e-3
    fd = (-ref(x + 2 * h) + 8 * ref(x + h) - 8 * ref(x - h) + ref(x - 2 * h)) / (12 * h)
    fd2 = (-ref(x + h) + 16 * ref(x + h / 2) - 30 * ref(x) + 16 * ref(x - h / 2) - ref(x - h)) \
        / (12 * (h / 2) ** 2)
    jet_err = max(np.max(np.abs(fd - f.derivative(1)) / np.maximum(1, np.abs(fd))),
                  np.max(np.abs(fd2 - f.derivative(2)) / np.maximum(1, np.abs(fd2))))
    rng = np.random.default_rng(17)
    iio = 0.0
    for _ in range(1000):
        p = rng.uniform(1.05, 6.0)
        v, u = rng.normal(size=2) * np.exp(rng.uniform(-2, 2, 2))
        iio = max(iio, ip_identity_check(v, u, p) / (abs(u) ** p + abs(v) ** p))
    infs = {p: fundamental_inequality_suite(p, samples=10**5, seed=3) for p in (1.5, 2.0, 3.0, 4.7)}
    ok = jet_err <= 1e-6 and iio <= 1e-9 and all(r.passed for r in infs.values())
    record(13, ok, f"jet vs FD {jet_err:.1e}; convexity identity {iio:.1e}; infima "
                   + ", ".join(f"p={p:g}: {r.inf_ratio:.3f}" for p, r in infs.items()))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
