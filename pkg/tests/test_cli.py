import json
import os
import subprocess
import sys

import pytest

from unihardy.cli.__main__ import main
from unihardy.cli.config import parse_config
from unihardy.errors import ConfigError

MODEL = {"Q": 4}
PARAMS = {"p": 2, "a": 1, "b": 2, "c": 1}
F = "bump(0.2, 0.8) * r"


def verify_job(theorem, **extra):
    job = {"kind": "verify", "theorem_id": theorem, "model": MODEL, "params": dict(PARAMS),
           "function": F}
    job.update(extra)
    return job


def write(tmp_path, jobs, formats=("json", "csv", "dat"), name="cfg.json"):
    cfg = {"schema": 1, "output": {"dir": str(tmp_path / "out"), "formats": list(formats)},
           "jobs": jobs}
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_passing_config_exits_zero(tmp_path, capsys):
    cfg = write(tmp_path, [verify_job("l2_identity"), verify_job("unified_hardy")])
    assert main(["run", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and "IdentityPass" in lines[0]
    files = sorted(os.listdir(tmp_path / "out"))
    assert files == ["000_l2_identity.csv", "000_l2_identity.dat", "000_l2_identity.json",
                     "001_unified_hardy.csv", "001_unified_hardy.dat", "001_unified_hardy.json"]
    rep = json.loads((tmp_path / "out" / "000_l2_identity.json").read_text())
    assert rep["status"] == "IdentityPass"


def test_hypothesis_violation_exits_two_before_running(tmp_path, capsys):
    bad = verify_job("unified_hardy", params={"p": 2, "a": 1, "b": 0.5, "c": 1})
    cfg = write(tmp_path, [verify_job("l2_identity"), bad])
    assert main(["verify", "--config", cfg]) == 2
    captured = capsys.readouterr()
    assert "b>1" in captured.err
    assert captured.out == ""
    assert not (tmp_path / "out").exists()


def test_empty_job_list_exits_two(tmp_path):
    assert main(["run", "--config", write(tmp_path, [])]) == 2


@pytest.mark.parametrize("mutate", [
    lambda c: c.update(extra=1),
    lambda c: c["jobs"][0].update(colour="red"),
    lambda c: c["jobs"][0]["params"].update(z=1),
    lambda c: c.update(schema=2),
    lambda c: c["jobs"][0].update(theorem_id="nope"),
    lambda c: c["jobs"][0].update(function="os.system('x')"),
    lambda c: c["output"].update(formats=["xml"]),
])
def test_config_rejections(mutate):
    cfg = {"schema": 1, "output": {"formats": ["json"]}, "jobs": [verify_job("l2_identity")]}
    mutate(cfg)
    with pytest.raises(ConfigError):
        from unihardy.cli.config import validate_job
        for job in parse_config(cfg).jobs:
            validate_job(job)


def test_unreadable_config_exits_two(tmp_path):
    (tmp_path / "broken.json").write_text("{not json")
    assert main(["run", "--config", str(tmp_path / "broken.json")]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2


def test_failing_job_exits_one(tmp_path):
    # a single coarse c leaves the log-limit gap far above 1%
    job = verify_job("log_limits", options={"c_grid": [0.2]})
    assert main(["run", "--config", write(tmp_path, [job])]) == 1


def test_sweep_marks_inadmissible_cells(tmp_path):
    job = {"kind": "sweep", "theorem_id": "unified_hardy", "model": MODEL, "params": PARAMS,
           "function": F, "grid": {"c": [0.5, 1.0, 3.5]}}
    assert main(["sweep", "--config", write(tmp_path, [job])]) == 0
    rows = (tmp_path / "out" / "000_unified_hardy.csv").read_text().splitlines()
    assert rows[0] == "c,status,slack,residual_rel"
    assert [r.split(",")[1] for r in rows[1:]] == ["InequalityPass", "InequalityPass", "Inadmissible"]
    assert (tmp_path / "out" / "000_unified_hardy.dat").read_text().startswith("# c status")


def test_sweep_slack_of_psi_term_vanishes_linearly(tmp_path):
    # psi carries the factor (Q - a - (b-1)c), linear in the distance to the critical c
    job = {"kind": "sweep", "theorem_id": "unified_hardy", "model": MODEL, "params": PARAMS,
           "function": F, "grid": {"c": [2.0, 2.5, 3.0]}}
    main(["sweep", "--config", write(tmp_path, [job])])
    cells = json.loads((tmp_path / "out" / "000_unified_hardy.json").read_text())["cells"]
    assert all(c["status"] == "InequalityPass" for c in cells)
    assert "psi" not in cells[2]["terms"]


def test_ckn_delta_sweep(tmp_path):
    jobs = [verify_job("ckn", options={"q": 2, "r": 2, "delta": d}) for d in (0, 0.25, 0.5, 1)]
    assert main(["run", "--config", write(tmp_path, jobs)]) == 0


def test_sharpness_and_mc_jobs(tmp_path, capsys):
    jobs = [
        {"kind": "sharpness", "family": "origin", "model": MODEL,
         "params": {"p": 2, "a": 1, "b": 1, "c": 1}},
        {"kind": "sharpness", "family": "probe", "model": MODEL, "params": PARAMS},
        {"kind": "mc-check", "model": {"group": "euclidean", "n": 3}, "samples": 100000, "seed": 5},
    ]
    assert main(["run", "--config", write(tmp_path, jobs)]) == 0
    out = tmp_path / "out"
    assert (out / "000_origin.csv").read_text().startswith("kappa,delta,ratio,err_est")
    summary = json.loads((out / "000_origin.json").read_text())
    assert summary["target"] == 2.25
    mc = json.loads((out / "002_mc-check.json").read_text())
    assert mc["passed"] and all(m["closed_ok"] for m in mc["moments"])


def test_subcommand_selects_job_kind(tmp_path, capsys):
    jobs = [verify_job("l2_identity"),
            {"kind": "mc-check", "model": {"group": "heisenberg"}, "samples": 50000}]
    assert main(["mc-check", "--config", write(tmp_path, jobs)]) == 0
    out = capsys.readouterr().out
    assert "mc-check" in out and "l2_identity" not in out


def test_output_is_deterministic_across_worker_counts(tmp_path):
    jobs = [verify_job("l2_identity"), verify_job("lp_identity", params={**PARAMS, "p": 3}),
            {"kind": "mc-check", "model": {"group": "heisenberg"}, "samples": 50000}]
    cfg = write(tmp_path, jobs)
    main(["--jobs", "1", "--out", str(tmp_path / "a"), "--seed", "9", "run", "--config", cfg])
    main(["--jobs", "3", "--out", str(tmp_path / "b"), "--seed", "9", "run", "--config", cfg])
    names = sorted(os.listdir(tmp_path / "a"))
    assert names == sorted(os.listdir(tmp_path / "b"))
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()
    assert not [n for n in names if n.startswith(".tmp")]


def test_tol_scale_loosens_identity_tolerance(tmp_path):
    # the p=3 residual is ~6e-14: above 1e-18, below 1e-18 * 1e6
    job = verify_job("lp_identity", params={**PARAMS, "p": 3}, tolerances={"rtol": 1e-18})
    cfg = write(tmp_path, [job])
    assert main(["run", "--config", cfg]) == 1
    assert main(["--tol-scale", "1e6", "run", "--config", cfg]) == 0


def test_console_script_entry_point(tmp_path):
    cfg = write(tmp_path, [verify_job("l2_identity")], formats=("json",))
    proc = subprocess.run([sys.executable, "-m", "unihardy.cli", "verify", "--config", cfg],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("l2_identity: IdentityPass")


def test_bundled_acceptance_config_passes(tmp_path, capsys):
    cfg = os.path.join(os.path.dirname(__file__), os.pardir, "demos", "acceptance_config.json")
    assert main(["--jobs", "4", "--out", str(tmp_path), "run", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 29
    assert lines[0].startswith("l2_identity_Q2.5: l2_identity: IdentityPass")
