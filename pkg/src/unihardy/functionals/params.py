"""Exponent tuples and the hypotheses each theorem places on them."""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace

from ..errors import ConstraintViolation, NoAdmissibleDelta, WindowViolation

_REL = 1e-12


def _le(x, y):
    return x <= y + _REL * max(1.0, abs(x), abs(y))


def _lt(x, y):
    return x < y - _REL * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class HardyParams:
    """``(Q, p, a, b, c, R, k)`` for the radial Hardy-type statements."""

    Q: float
    p: float
    a: float
    b: float
    c: float
    R: float = 1.0
    k: int = 1

    def with_(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)

    # shifted exponents used by the k-th order statements
    def a_i(self, i):
        return self.a + (i - 1) * self.p

    def b_i(self, i):
        return self.b + (i - 1) * self.p

    def critical_c(self, k=None):
        """Largest admissible ``c`` for the order-``k`` unified statements."""
        k = self.k if k is None else k
        return (self.Q - self.a - (k - 1) * self.p) / (self.b + (k - 1) * self.p - 1.0)

    def is_critical(self, k=None):
        crit = self.critical_c(k)
        return not _lt(self.c, crit)

    def violations(self, theorem):
        """Human-readable list of hypotheses that fail for ``theorem``."""
        Q, p, a, b, c, k = self.Q, self.p, self.a, self.b, self.c, self.k
        out = []

        def need(ok, text):
            if not ok:
                out.append(text)

        need(Q > 1, f"Q>1 (Q={Q:g})")
        need(self.R > 0, f"R>0 (R={self.R:g})")
        if theorem == "unified":
            need(p > 1, f"p>1 (p={p:g})")
            need(b > 1, f"b>1 (b={b:g})")
            need(a < Q, f"a<Q (a={a:g}, Q={Q:g})")
            need(c > 0, f"c>0 (c={c:g})")
            if b > 1 and c > 0:
                need(_le(c, (Q - a) / (b - 1)), f"c<=(Q-a)/(b-1) (c={c:g}, bound={(Q - a) / (b - 1):g})")
        elif theorem == "higher":
            ak, bk = a + (k - 1) * p, b + (k - 1) * p
            need(k >= 1, f"k>=1 (k={k})")
            need(p > 1, f"p>1 (p={p:g})")
            need(bk > 1, f"b+(k-1)p>1 (value {bk:g})")
            need(ak < Q, f"a+(k-1)p<Q (value {ak:g}, Q={Q:g})")
            need(c > 0, f"c>0 (c={c:g})")
            if bk > 1 and c > 0:
                bound = (Q - ak) / (bk - 1)
                need(_le(c, bound), f"c<=(Q-a-(k-1)p)/(b+(k-1)p-1) (c={c:g}, bound={bound:g})")
        elif theorem == "hardy_b":
            need(p > 1, f"p>1 (p={p:g})")
            need(a < Q, f"a<Q (a={a:g}, Q={Q:g})")
            need(b >= 1, f"b>=1 (b={b:g})")
            need(c > 0, f"c>0 (c={c:g})")
        elif theorem == "hardy_c":
            need(p > 1, f"p>1 (p={p:g})")
            need(a < Q, f"a<Q (a={a:g}, Q={Q:g})")
            need(b > 1, f"b>1 (b={b:g})")
            need(c > 0, f"c>0 (c={c:g})")
            if p > 1:
                need(_le(c, (Q - a) / (p - 1)), f"c<=(Q-a)/(p-1) (c={c:g}, bound={(Q - a) / (p - 1):g})")
        elif theorem == "rellich24":
            need(p == 2, f"p=2 (p={p:g})")
            need(c > 0, f"c>0 (c={c:g})")
            need(_lt(4 - Q, a), f"4-Q<a (a={a:g}, 4-Q={4 - Q:g})")
            need(_le(a, Q - c), f"a<=Q-c (a={a:g}, Q-c={Q - c:g})")
        elif theorem == "rellich25":
            need(p == 2, f"p=2 (p={p:g})")
            need(c > 0, f"c>0 (c={c:g})")
            need(_le(3.0, a), f"3<=a (a={a:g})")
            need(_le(a, Q - c + 2), f"a<=Q-c+2 (a={a:g}, Q-c+2={Q - c + 2:g})")
            need(_le(a, Q - 3 * c), f"a<=Q-3c (a={a:g}, Q-3c={Q - 3 * c:g})")
        elif theorem == "rellich_lp":
            need(p > 1, f"p>1 (p={p:g})")
            need(c > 0, f"c>0 (c={c:g})")
            need(a < Q, f"a<Q (a={a:g}, Q={Q:g})")
            need(_le(a, Q - (p - 1) * c), f"a<=Q-(p-1)c (a={a:g}, bound={Q - (p - 1) * c:g})")
        elif theorem == "radial_lb":
            need(p >= 1, f"p>=1 (p={p:g})")
        elif theorem == "ibp":
            need(p > 1, f"p>1 (p={p:g})")
            need(b >= 1, f"b>=1 (b={b:g})")
            need(c > 0, f"c>0 (c={c:g})")
        elif theorem == "log":
            need(p > 1, f"p>1 (p={p:g})")
            need(b > 1, f"b>1 (b={b:g})")
            need(a < Q, f"a<Q (a={a:g}, Q={Q:g})")
        else:
            raise ValueError(f"unknown theorem family {theorem!r}")
        return out

    def require(self, theorem):
        bad = self.violations(theorem)
        if bad:
            raise ConstraintViolation("violated hypothesis: " + "; ".join(bad))
        return self


@dataclass(frozen=True)
class CknParams:
    base: HardyParams
    q: float
    r: float
    delta: float
    beta: float
    gamma: float

    def check(self):
        p, q, r, d = self.base.p, self.q, self.r, self.delta
        if not (p > 1 and q > 1 and r > 0):
            raise ConstraintViolation("need p>1, q>1, r>0")
        if not _le(r, p + q):
            raise ConstraintViolation(f"p+q>=r (p+q={p + q:g}, r={r:g})")
        lo, hi = max(0.0, (r - q) / r), min(1.0, p / r)
        if not (_le(lo, d) and _le(d, hi)):
            raise WindowViolation(f"delta={d:g} outside [{lo:g}, {hi:g}]")
        if abs(d * r / p + (1 - d) * r / q - 1.0) > 1e-12:
            raise WindowViolation("delta r/p + (1-delta) r/q = 1 does not hold")
        if abs(self.gamma - (-d + self.beta * (1 - d))) > 1e-12:
            raise ConstraintViolation("gamma = -delta + beta(1-delta) does not hold")
        return self


def resolve_ckn_params(base, q, r, beta, delta=None):
    """Solve ``delta r/p + (1-delta) r/q = 1`` and fill in ``gamma``.

    When ``p == q`` the equation fixes ``r`` instead of ``delta``; an explicit
    ``delta`` must then be supplied.
    """
    p = base.p
    if not (p > 1 and q > 1 and r > 0):
        raise ConstraintViolation("need p>1, q>1, r>0")
    if not _le(r, p + q):
        raise ConstraintViolation(f"p+q>=r (p+q={p + q:g}, r={r:g})")
    slope = r / p - r / q
    if abs(slope) < 1e-14:
        if abs(r / q - 1.0) > 1e-12:
            raise NoAdmissibleDelta(f"p=q={p:g} requires r=p, got r={r:g}")
        if delta is None:
            raise NoAdmissibleDelta("p=q leaves delta free; pass delta explicitly")
        d = float(delta)
    else:
        solved = (1.0 - r / q) / slope
        if delta is not None and abs(float(delta) - solved) > 1e-12:
            raise WindowViolation(
                f"delta={delta:g} is inconsistent with delta r/p+(1-delta) r/q=1 (needs {solved:g})")
        d = solved
    lo, hi = max(0.0, (r - q) / r), min(1.0, p / r)
    if not (_le(lo, d) and _le(d, hi)):
        raise WindowViolation(f"delta={d:g} outside [{lo:g}, {hi:g}]")
    gamma = -d + beta * (1.0 - d)
    return CknParams(base, float(q), float(r), d, float(beta), gamma).check()
