"""Execute validated jobs and write their reports atomically."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

from .. import functionals as fn
from .. import sharpness as sh
from ..errors import ConfigError, HardyError, Inadmissible
from ..functionals.hardy import IDENTITY_RTOL, LP_RTOL
from ..functionals.report import inadmissible_report
from ..group_model import NormKind, mc_ball_moment, polar_moment, sphere_measure
from .config import THEOREMS, validate_job

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# verifiers that accept an identity tolerance, with their default
_TOL_DEFAULTS = {
    "l2_identity": IDENTITY_RTOL, "lp_identity": LP_RTOL, "high_l2": LP_RTOL,
    "high_lp": LP_RTOL, "high_lp_ineq": LP_RTOL, "identity32": IDENTITY_RTOL,
    "identity33": IDENTITY_RTOL, "hardy7": IDENTITY_RTOL, "identity32_8": LP_RTOL,
    "identity33_8": LP_RTOL, "hardy8": LP_RTOL, "ibp_identity": IDENTITY_RTOL,
    "rellich24": IDENTITY_RTOL, "rellich25": IDENTITY_RTOL, "rellich_expansion": IDENTITY_RTOL,
}


def _verify(tid, model, params, f, imag, opts, tol, rtol):
    kw = {} if rtol is None else {"rtol": rtol}
    if tol is not None:
        kw["tol"] = tol
    cp = (f, imag) if imag is not None else None
    if tid == "unified_hardy":
        kw.pop("tol", None)
        return fn.verify_unified_hardy(params, f, complex_parts=cp, **kw)
    if tid == "l2_identity":
        return fn.verify_l2_identity(params, f, cp, **kw)
    if tid == "lp_identity":
        return fn.verify_lp_identity(params, cp or f, **kw)
    if tid == "high_l2":
        return fn.verify_high_l2(params, f, params.k, cp, **kw)
    if tid in ("high_lp", "high_lp_ineq"):
        mode = "inequality" if tid == "high_lp_ineq" else opts.get("mode", "identity")
        return fn.verify_high_lp(params, f, params.k, mode, cp, **kw)
    if tid in ("hardy7", "identity32", "identity33"):
        mode = {"hardy7": "ineq7"}.get(tid, tid)
        return fn.verify_hardy_b(params, f, mode, cp, **kw)
    if tid in ("hardy8", "identity32_8", "identity33_8"):
        mode = {"hardy8": "ineq8"}.get(tid, tid)
        return fn.verify_hardy_c(params, f, mode, cp, **kw)
    if tid == "ibp_identity":
        return fn.verify_ibp_identity(params, f, **kw)
    if tid in ("rellich24", "rellich25", "rellich_expansion"):
        which = {"rellich24": "ineq24", "rellich25": "ineq25"}.get(tid, "expansion")
        return fn.verify_rellich_l2(params, f, which, cp, **kw)
    kw.pop("tol", None)
    if tid == "radial_lower_bound":
        return fn.verify_radial_lower_bound(params, f, cp, **kw)
    if tid == "rellich_lp":
        return fn.verify_rellich_lp(params, f, cp, **kw)
    if tid == "ckn":
        ckn = fn.resolve_ckn_params(params, float(opts.get("q", params.p)),
                                    float(opts.get("r", params.p)), float(opts.get("beta", 0.0)),
                                    opts.get("delta"))
        return fn.verify_ckn(ckn, f, params.k, **kw)
    if tid == "log_limits":
        grid = opts.get("c_grid")
        return fn.verify_log_limits(params, f, **({"c_grid": grid} if grid else {}), **kw)
    if tid == "chains":
        return fn.verify_chains(model, f, p=float(opts.get("p", params.p)),
                                a=float(opts.get("a", params.a)), b=float(opts.get("b", params.b)),
                                R=float(opts.get("R", params.R)), **kw)
    raise ConfigError(f"unknown theorem_id {tid!r}")


def _tolerances(raw, tid, tol_scale):
    tols = raw.get("tolerances", {})
    tol = tols.get("rtol", _TOL_DEFAULTS.get(tid))
    if tol is not None:
        tol = float(tol) * tol_scale
    quad = tols.get("quad_rtol")
    return tol, (None if quad is None else float(quad))


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dat_text(header, rows):
    lines = ["# " + " ".join(header)]
    lines += [" ".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _dump(obj):
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


# --------------------------------------------------------------- job kinds --
def _run_verify(job, built, formats, tol_scale):
    raw = job["raw"]
    tid = raw["theorem_id"]
    tol, quad = _tolerances(raw, tid, tol_scale)
    rep = _verify(tid, built["model"], built["params"], built["f"], built["imag"],
                  raw.get("options", {}), tol, quad)
    files = {}
    if "json" in formats:
        files["json"] = rep.to_json() + "\n"
    if "csv" in formats:
        files["csv"] = fn.reports_to_csv([rep])
    if "dat" in formats:
        rows = [(name, v, e) for name, (v, e) in rep.terms.items()]
        files["dat"] = _dat_text(["term", "value", "err"], rows)
    line = rep.summary() if job["name"] == tid else f"{job['name']}: {rep.summary()}"
    return rep.passed, line, files


def _run_sweep(job, built, formats, tol_scale):
    raw = job["raw"]
    tid = raw["theorem_id"]
    tol, quad = _tolerances(raw, tid, tol_scale)
    base = built["params"]
    grid = raw["grid"]
    keys = list(grid)
    family = THEOREMS[tid]
    reports, rows = [], []
    n_fail = n_inad = 0
    for combo in itertools.product(*(grid[k] for k in keys)):
        upd = {k: (int(v) if k == "k" else float(v)) for k, v in zip(keys, combo)}
        try:
            params = base.with_(**upd)
            upd = params.as_dict()
            if family is not None:
                params.require(family)
            rep = _verify(tid, built["model"], params, built["f"], built["imag"],
                          raw.get("options", {}), tol, quad)
        except Inadmissible as exc:
            rep = inadmissible_report(tid, upd, exc)
            n_inad += 1
        except ValueError as exc:
            rep = inadmissible_report(tid, upd, exc)
            n_inad += 1
        else:
            n_fail += not rep.passed
        reports.append(rep)
        rows.append(list(combo) + [rep.status.value, rep.slack if rep.slack is not None else math.nan,
                                   rep.residual_rel])
    header = keys + ["status", "slack", "residual_rel"]
    files = {}
    if "csv" in formats or "json" in formats:
        files["csv"] = _csv_text(header, [[repr(v) if isinstance(v, float) else v for v in r]
                                          for r in rows])
    if "json" in formats:
        files["json"] = _dump({"theorem_id": tid, "grid": grid,
                               "cells": [r.to_dict() for r in reports]})
    if "dat" in formats:
        files["dat"] = _dat_text(header, rows)
    ok = n_fail == 0 and n_inad < len(rows)
    line = (f"sweep {tid}: {len(rows)} cells, {len(rows) - n_fail - n_inad} pass, "
            f"{n_fail} fail, {n_inad} inadmissible")
    return ok, line, files


def _run_sharpness(job, built, formats, tol_scale):
    raw = job["raw"]
    params = built["params"]
    grids = raw.get("grids", {})
    family = raw.get("family", "boundary")
    files = {}
    if family == "probe":
        eps = grids.get("eps", sh.DEFAULT_EPS)
        table = sh.nonattainment_probe(params, eps)
        ok = abs(table.normalized_slope - 1.0) <= 0.1 * tol_scale
        summary = {"family": "probe", "coefficient": table.coefficient, "slope": table.slope,
                   "normalized_slope": table.normalized_slope, "r_squared": table.r_squared,
                   "loglog_slope": table.loglog_slope, "passed": bool(ok)}
        csv_text = table.to_csv()
        line = (f"sharpness probe: {'Pass' if ok else 'Fail'} normalized_slope="
                f"{table.normalized_slope:.4f} r2={table.r_squared:.6f}")
    else:
        kw = {}
        if "offsets" in grids:
            kw["offsets"] = grids["offsets"]
        if "deltas" in grids:
            kw["deltas"] = grids["deltas"]
        if "kind" in grids:
            kw["kind"] = grids["kind"]
        scan = (sh.scan_boundary if family == "boundary" else sh.scan_origin)(params, **kw)
        ok = (bool(scan.rows) and scan.relative_gap <= sh.SCAN_GAP_TOL * tol_scale
              and scan.rows_above_target() and not scan.failures)
        summary = dict(scan.summary(), monotone=scan.monotone(),
                       rows_above_target=scan.rows_above_target(), failures=scan.failures,
                       passed=bool(ok))
        csv_text = scan.to_csv()
        line = (f"sharpness {family}: {'Pass' if ok else 'Fail'} target={scan.target:.6g} "
                f"extrapolated={scan.extrapolated:.6g} gap={scan.relative_gap:.3e} "
                f"finest={scan.finest['ratio']:.6g} raw_gap={scan.raw_gap:.3e}")
    if "json" in formats:
        files["json"] = _dump(summary)
    if "csv" in formats:
        files["csv"] = csv_text
    if "dat" in formats:
        files["dat"] = "# " + csv_text.replace(",", " ")
    return ok, line, files


def _run_mc(job, built, formats, tol_scale, seed):
    raw = job["raw"]
    model = built["model"]
    samples = int(raw.get("samples", 10**6))
    shards = raw.get("shards")
    moments = raw.get("moments", [[0.0, 1.0], [1.0, 2.0]])
    euclid = model.norm_kind is NormKind.EUCLIDEAN
    sphere = sphere_measure(model) if euclid else None
    rows, ok = [], True
    k = 3.0 * tol_scale
    for i, (s, R) in enumerate(moments):
        s, R = float(s), float(R)
        one = mc_ball_moment(model, s, R, samples, seed + 2 * i, shards=shards)
        two = mc_ball_moment(model, s, 2 * R, samples, seed + 2 * i + 1, shards=shards)
        ratio = two.estimate / one.estimate
        ratio_err = ratio * math.hypot(one.stderr / one.estimate, two.stderr / two.estimate)
        expect = 2.0 ** (model.Q + s)
        scale_ok = abs(ratio - expect) <= k * ratio_err
        row = {"s": s, "R": R, "estimate": one.estimate, "stderr": one.stderr,
               "scaling_ratio": ratio, "scaling_expected": expect, "scaling_stderr": ratio_err,
               "scaling_ok": bool(scale_ok)}
        ok = ok and scale_ok
        if euclid:
            closed = polar_moment(sphere, model.Q, s, R)
            closed_ok = abs(one.estimate - closed) <= k * one.stderr
            row.update(closed_form=closed, closed_ok=bool(closed_ok))
            ok = ok and closed_ok
        rows.append(row)
    files = {}
    if "json" in formats:
        files["json"] = _dump({"model": {"weights": list(model.weights),
                                         "norm": model.norm_kind.value, "Q": model.Q},
                               "samples": samples, "seed": seed, "moments": rows,
                               "passed": bool(ok)})
    header = list(rows[0])
    if "csv" in formats:
        files["csv"] = _csv_text(header, [[repr(r.get(h)) if isinstance(r.get(h), float)
                                           else r.get(h) for h in header] for r in rows])
    if "dat" in formats:
        files["dat"] = _dat_text(["s", "R", "estimate", "stderr"],
                                 [(r["s"], r["R"], r["estimate"], r["stderr"]) for r in rows])
    worst = max(abs(r["scaling_ratio"] - r["scaling_expected"]) / r["scaling_stderr"] for r in rows)
    line = f"mc-check Q={model.Q:g}: {'Pass' if ok else 'Fail'} worst scaling deviation {worst:.2f} sigma"
    return ok, line, files


def execute_job(job, formats, tol_scale=1.0, seed=0):
    """Run one job in isolation; returns ``(index, name, passed, line, files, error)``.

    ``job`` is a plain dict so that it crosses process boundaries cheaply.
    """
    from .config import Job
    j = Job(job["index"], job["kind"], job["name"], job["raw"], job["seed"])
    try:
        built = validate_job(j)
        if j.kind == "verify":
            ok, line, files = _run_verify(job, built, formats, tol_scale)
        elif j.kind == "sweep":
            ok, line, files = _run_sweep(job, built, formats, tol_scale)
        elif j.kind == "sharpness":
            ok, line, files = _run_sharpness(job, built, formats, tol_scale)
        else:
            ok, line, files = _run_mc(job, built, formats, tol_scale,
                                      seed if j.seed is None else j.seed)
    except (HardyError, ValueError) as exc:
        return j.index, j.name, False, f"{j.name}: error: {exc}", {}, str(exc)
    return j.index, j.name, bool(ok), line, files, None


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    folder = os.path.dirname(path) or "."
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _stem(index, name):
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name)
    return f"{index:03d}_{safe}"


def run_config(cfg, *, jobs=1, out_dir=None, seed=0, tol_scale=1.0, kinds=None, stdout=None):
    """Validate every job, run them, write reports and return the exit code."""
    stdout = stdout or sys.stdout
    selected = [j for j in cfg.jobs if kinds is None or j.kind in kinds]
    if not selected:
        print("error: no jobs to run", file=sys.stderr)
        return EXIT_CONFIG
    try:
        for j in selected:
            validate_job(j)
    except (HardyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = [{"index": j.index, "kind": j.kind, "name": j.name, "raw": j.raw, "seed": j.seed}
               for j in selected]
    args = (cfg.formats, float(tol_scale), int(seed))
    if jobs > 1 and len(payload) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(execute_job, payload, *[[a] * len(payload) for a in args]))
    else:
        results = [execute_job(p, *args) for p in payload]
    out = out_dir or cfg.out_dir
    code = EXIT_OK
    for index, name, ok, line, files, error in sorted(results, key=lambda r: r[0]):
        for ext, text in files.items():
            write_atomic(os.path.join(out, f"{_stem(index, name)}.{ext}"), text)
        print(line, file=stdout)
        if error is not None:
            code = EXIT_CONFIG
        elif not ok and code == EXIT_OK:
            code = EXIT_FAIL
    return code
