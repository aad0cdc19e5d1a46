"""Run configuration: strict JSON schema, validated before any computation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..group_model import AbstractRadialModel, GroupModel
from ..functionals.params import HardyParams, resolve_ckn_params
from .grammar import parse_function

SCHEMA_VERSION = 1
JOB_KINDS = ("verify", "sweep", "sharpness", "mc-check")
FORMATS = ("json", "csv", "dat")

# theorem id -> hypothesis family checked before running
THEOREMS = {
    "unified_hardy": "unified",
    "l2_identity": "unified",
    "lp_identity": "unified",
    "high_l2": "higher",
    "high_lp": "higher",
    "high_lp_ineq": "higher",
    "ckn": "higher",
    "hardy7": "hardy_b",
    "identity32": "hardy_b",
    "identity33": "hardy_b",
    "hardy8": "hardy_c",
    "identity32_8": "hardy_c",
    "identity33_8": "hardy_c",
    "ibp_identity": "ibp",
    "rellich24": "rellich24",
    "rellich25": "rellich25",
    "rellich_expansion": None,
    "radial_lower_bound": "radial_lb",
    "rellich_lp": "rellich_lp",
    "log_limits": "log",
    "chains": None,
}

_COMMON = {"kind", "name", "seed"}
_ALLOWED = {
    "verify": _COMMON | {"theorem_id", "model", "params", "function", "imag", "options", "tolerances"},
    "sweep": _COMMON | {"theorem_id", "model", "params", "function", "imag", "options",
                        "tolerances", "grid"},
    "sharpness": _COMMON | {"family", "model", "params", "grids"},
    "mc-check": _COMMON | {"model", "moments", "samples", "shards"},
}
_PARAM_KEYS = {"p", "a", "b", "c", "R", "k"}
_OPTION_KEYS = {"mode", "k", "q", "r", "beta", "delta", "c_grid", "p", "a", "b", "R"}
_TOL_KEYS = {"rtol", "quad_rtol"}
_GRID_KEYS = {"offsets", "deltas", "eps", "kind"}


@dataclass
class Job:
    index: int
    kind: str
    name: str
    raw: dict
    seed: int | None = None


@dataclass
class RunConfig:
    jobs: list
    out_dir: str = "out"
    formats: tuple = ("json",)
    source: dict = field(default_factory=dict)


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key(s) {extra} in {where}")


def build_model(spec, where):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}.model must be an object")
    _check_keys(spec, {"Q", "group", "n", "weights", "norm", "power"}, f"{where}.model")
    try:
        if "Q" in spec:
            if len(spec) != 1:
                raise ConfigError(f"{where}.model: 'Q' (abstract mode) excludes other keys")
            return AbstractRadialModel(float(spec["Q"]))
        group = spec.get("group")
        if group == "euclidean":
            return GroupModel.euclidean(int(spec["n"]))
        if group == "heisenberg":
            return GroupModel.heisenberg()
        if "weights" in spec:
            return GroupModel(tuple(spec["weights"]), spec.get("norm", "anisotropic"),
                              int(spec.get("power", 2)))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}.model: {exc}") from None
    raise ConfigError(f"{where}.model needs 'Q', a known 'group', or 'weights'")


def build_params(model, raw, where):
    _check_keys(raw, _PARAM_KEYS, f"{where}.params")
    try:
        vals = {k: float(v) for k, v in raw.items() if k != "k"}
        k = int(raw.get("k", 1))
        return HardyParams(Q=float(model.Q), p=vals.get("p", 2.0), a=vals.get("a", 0.0),
                           b=vals.get("b", 2.0), c=vals.get("c", 1.0), R=vals.get("R", 1.0), k=k)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}.params: {exc}") from None


def validate_job(job):
    """Build every object a job needs; raises before anything is computed."""
    raw, where = job.raw, f"jobs[{job.index}]"
    _check_keys(raw, _ALLOWED[job.kind], where)
    model = build_model(raw.get("model"), where)
    if job.kind == "mc-check":
        if not isinstance(model, GroupModel):
            raise ConfigError(f"{where}: mc-check needs a concrete group model")
        moments = raw.get("moments", [[0.0, 1.0], [1.0, 2.0]])
        if not moments or not all(isinstance(m, (list, tuple)) and len(m) == 2 for m in moments):
            raise ConfigError(f"{where}.moments must be a list of [s, R] pairs")
        return {"model": model}
    params = build_params(model, raw.get("params", {}), where)
    if job.kind == "sharpness":
        family = raw.get("family", "boundary")
        if family not in ("boundary", "origin", "probe"):
            raise ConfigError(f"{where}.family must be boundary, origin or probe")
        _check_keys(raw.get("grids", {}), _GRID_KEYS, f"{where}.grids")
        if family == "probe":
            params.require("unified")
        elif family == "boundary" and raw.get("grids", {}).get("kind", "UnifiedHardy") == "UnifiedHardy":
            params.require("unified")
        elif family == "origin":
            params.require("hardy_b")
        return {"model": model, "params": params}
    tid = raw.get("theorem_id")
    if tid not in THEOREMS:
        raise ConfigError(f"{where}.theorem_id {tid!r} unknown; known: {', '.join(THEOREMS)}")
    if "function" not in raw:
        raise ConfigError(f"{where}.function is required")
    f = parse_function(raw["function"])
    imag = parse_function(raw["imag"]) if raw.get("imag") else None
    opts = raw.get("options", {})
    _check_keys(opts, _OPTION_KEYS, f"{where}.options")
    _check_keys(raw.get("tolerances", {}), _TOL_KEYS, f"{where}.tolerances")
    if tid == "chains" and not (isinstance(model, GroupModel) and model.norm_kind.value == "euclidean"):
        raise ConfigError(f"{where}: chains need a Euclidean group model")
    family = THEOREMS[tid]
    if "k" in opts:
        params = params.with_(k=int(opts["k"]))
    if job.kind == "sweep":
        grid = raw.get("grid")
        if not isinstance(grid, dict) or not grid:
            raise ConfigError(f"{where}.grid must map parameter names to value lists")
        _check_keys(grid, _PARAM_KEYS, f"{where}.grid")
    elif family is not None:
        params.require(family)
    if tid == "ckn":
        resolve_ckn_params(params, float(opts.get("q", params.p)), float(opts.get("r", params.p)),
                           float(opts.get("beta", 0.0)), opts.get("delta"))
    return {"model": model, "params": params, "f": f, "imag": imag}


def parse_config(data):
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(data, {"schema", "jobs", "output"}, "config")
    if data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"config needs \"schema\": {SCHEMA_VERSION}")
    jobs_raw = data.get("jobs")
    if not isinstance(jobs_raw, list) or not jobs_raw:
        raise ConfigError("config has no jobs")
    out = data.get("output", {})
    _check_keys(out, {"dir", "formats"}, "output")
    formats = tuple(out.get("formats", ["json"]))
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown output format(s) {bad}; choose from {FORMATS}")
    jobs = []
    for i, raw in enumerate(jobs_raw):
        if not isinstance(raw, dict):
            raise ConfigError(f"jobs[{i}] must be an object")
        kind = raw.get("kind")
        if kind not in JOB_KINDS:
            raise ConfigError(f"jobs[{i}].kind must be one of {JOB_KINDS}")
        name = str(raw.get("name") or raw.get("theorem_id") or raw.get("family") or kind)
        seed = raw.get("seed")
        jobs.append(Job(i, kind, name, raw, None if seed is None else int(seed)))
    return RunConfig(jobs, str(out.get("dir", "out")), formats, data)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(data)
