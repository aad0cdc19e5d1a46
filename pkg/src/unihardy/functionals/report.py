"""Verification reports and their JSON / CSV forms."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SAFETY = 10.0
_ROUND = 128 * np.finfo(float).eps
TINY = 1e-300


class Status(str, Enum):
    IDENTITY_PASS = "IdentityPass"
    INEQUALITY_PASS = "InequalityPass"
    FAIL = "Fail"
    INADMISSIBLE = "Inadmissible"


@dataclass
class VerificationReport:
    theorem_id: str
    params: dict
    terms: dict = field(default_factory=dict)
    lhs: float = 0.0
    rhs: float = 0.0
    residual_abs: float = 0.0
    residual_rel: float = 0.0
    status: Status = Status.FAIL
    slack: float | None = None
    diagnostics: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status in (Status.IDENTITY_PASS, Status.INEQUALITY_PASS)

    def term(self, name):
        return self.terms[name][0]

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "terms": {k: {"value": _plain(v), "err": _plain(e)} for k, (v, e) in self.terms.items()},
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
            "residual_abs": _plain(self.residual_abs),
            "residual_rel": _plain(self.residual_rel),
            "status": self.status.value,
            "slack": _plain(self.slack),
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, allow_nan=True)

    CSV_FIELDS = ("theorem_id", "status", "lhs", "rhs", "residual_abs",
                  "residual_rel", "slack", "params", "terms")

    def csv_row(self):
        d = self.to_dict()
        return [d["theorem_id"], d["status"], repr(d["lhs"]), repr(d["rhs"]),
                repr(d["residual_abs"]), repr(d["residual_rel"]), repr(d["slack"]),
                json.dumps(d["params"], sort_keys=False),
                json.dumps({k: v["value"] for k, v in d["terms"].items()})]

    def summary(self):
        extra = f" slack={self.slack:.3e}" if self.slack is not None else ""
        return (f"{self.theorem_id}: {self.status.value} lhs={self.lhs:.10g} rhs={self.rhs:.10g} "
                f"res_rel={self.residual_rel:.2e}{extra}")


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VerificationReport.CSV_FIELDS)
    for rep in reports:
        w.writerow(rep.csv_row())
    return buf.getvalue()


def _plain(v):
    if v is None:
        return None
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, Enum):
        return v.value
    return v


def _budget(terms):
    err = math.fsum(float(e) for _, e in terms.values())
    mag = math.fsum(abs(float(v)) for v, _ in terms.values())
    return SAFETY * err + _ROUND * mag


def identity_report(theorem_id, params, terms, lhs, rhs, rtol, diagnostics=()):
    """Status is IdentityPass when the residual is small both relatively and
    against the quadrature error budget."""
    res = abs(lhs - rhs)
    rel = res / max(abs(lhs), abs(rhs), TINY)
    budget = _budget(terms)
    ok = (rel <= rtol or res <= _ROUND * max(abs(lhs), abs(rhs))) and res <= max(budget, rtol * max(abs(lhs), abs(rhs)))
    if lhs == 0 and rhs == 0:
        ok, rel = True, 0.0
    diags = list(diagnostics)
    if not ok:
        diags.append(f"identity residual {res:.3e} (relative {rel:.3e}) exceeds tolerance {rtol:g}"
                     f" / error budget {budget:.3e}")
    return VerificationReport(theorem_id, dict(params), dict(terms), float(lhs), float(rhs),
                              float(res), float(rel),
                              Status.IDENTITY_PASS if ok else Status.FAIL,
                              float(rhs - lhs), diags)


def inequality_report(theorem_id, params, terms, lhs, rhs, diagnostics=(), extra_ok=True):
    """InequalityPass when ``rhs - lhs`` is not negative beyond the error budget."""
    slack = rhs - lhs
    res = abs(slack)
    rel = res / max(abs(lhs), abs(rhs), TINY)
    budget = _budget(terms)
    ok = slack >= -budget and extra_ok
    diags = list(diagnostics)
    if slack < -budget:
        diags.append(f"negative slack {slack:.3e} beyond error budget {budget:.3e}")
    return VerificationReport(theorem_id, dict(params), dict(terms), float(lhs), float(rhs),
                              float(res), float(rel),
                              Status.INEQUALITY_PASS if ok else Status.FAIL,
                              float(slack), diags)


def inadmissible_report(theorem_id, params, reason):
    return VerificationReport(theorem_id, dict(params), {}, math.nan, math.nan, math.nan,
                              math.nan, Status.INADMISSIBLE, None, [str(reason)])
