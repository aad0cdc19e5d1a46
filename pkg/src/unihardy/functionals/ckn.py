"""Higher-order Caffarelli-Kohn-Nirenberg type interpolation inequality."""
from __future__ import annotations

import math

from ..errors import ConstraintViolation
from ..quadrature import DEFAULT_RTOL
from ._engine import Terms
from .hardy import _higher_order_terms, _prepare
from .report import inequality_report


def _norm(value, err, q):
    """``(value)^(1/q)`` and a first-order error estimate."""
    v = max(value, 0.0)
    n = v ** (1.0 / q)
    dn = n * err / (q * v) if v > 0 else 0.0
    return n, dn


def verify_ckn(ckn, f, k=None, *, rtol=DEFAULT_RTOL):
    """Check the CKN inequality and the Hölder step it rests on.

    ``omega = r^(a_k/p) (1-r^c)^(b_k/p)`` with ``a_k = a+(k-1)p``,
    ``b_k = b+(k-1)p``. The bracket ``RHS^p - remainders`` is assembled from
    the k-th order L^p identity and must be nonnegative.
    """
    base = ckn.base
    k = base.k if k is None else int(k)
    base = base.with_(k=k)
    base.require("higher")
    Q, p, a, b, c = base.Q, base.p, base.a, base.b, base.c
    q, r, delta, beta, gamma = ckn.q, ckn.r, ckn.delta, ckn.beta, ckn.gamma
    if isinstance(f, tuple):
        raise ConstraintViolation("the CKN verifier takes a real function")
    _, fld = _prepare(base, f)
    ak, bk = a + (k - 1) * p, b + (k - 1) * p
    R = base.R

    ident, rem, third, notes, P = _higher_order_terms(base, fld, k, p, True, rtol)
    t = Terms()
    t.add("I_r", 1.0, lambda s: s.absp(0, r) * s.weight(gamma * r * ak / p, gamma * r * bk / p, c))
    t.add("I_p", 1.0, lambda s: s.absp(0, p) * s.weight(-ak, -bk, c))
    t.add("I_q", 1.0, lambda s: s.absp(0, q) * s.weight(beta * q * ak / p, beta * q * bk / p, c))
    raw = t.run(fld, 0, Q, 1.0, rtol)
    dims = {"I_r": Q + gamma * r * ak / p, "I_p": Q - ak, "I_q": Q + beta * q * ak / p}
    ints = {k_: (v * R ** dims[k_], e * R ** dims[k_]) for k_, (v, e) in raw.items()}

    Nr = _norm(*ints["I_r"], r)
    Np = _norm(*ints["I_p"], p)
    Nq = _norm(*ints["I_q"], q)
    dropped = math.fsum(ident[n][0] for n in rem + third)
    dropped_err = math.fsum(ident[n][1] for n in rem + third)
    bracket = ident["rhs"][0] - dropped
    bracket_err = ident["rhs"][1] + dropped_err
    diags = list(notes)
    ok = True
    if bracket < -10 * bracket_err:
        ok = False
        diags.append(f"negative bracket RHS^p - remainders = {bracket:.3e}")
    coef = math.prod(((b + j * p - 1) * c / p) ** delta for j in range(k))
    lhs = coef * Nr[0]
    lhs_err = coef * Nr[1]
    bp = max(bracket, 0.0)
    Bpow = bp ** (delta / p) if delta > 0 else 1.0
    Bpow_err = Bpow * delta / p * bracket_err / bp if bp > 0 and delta > 0 else 0.0
    Nqpow = Nq[0] ** (1 - delta) if delta < 1 else 1.0
    Nqpow_err = Nqpow * (1 - delta) * Nq[1] / Nq[0] if Nq[0] > 0 and delta < 1 else 0.0
    rhs = Bpow * Nqpow
    rhs_err = Bpow_err * Nqpow + Bpow * Nqpow_err

    # the Hölder step alone
    hold_rhs = (Np[0] ** delta if delta > 0 else 1.0) * Nqpow
    hold_err = 10 * (Nr[1] + hold_rhs * (delta * (Np[1] / Np[0] if Np[0] > 0 else 0.0)
                                         + (Nqpow_err / Nqpow if Nqpow > 0 else 0.0)))
    hold_slack = hold_rhs - Nr[0]
    if hold_slack < -hold_err - 1e-14 * max(hold_rhs, Nr[0]):
        ok = False
        diags.append(f"Hölder step violated: slack {hold_slack:.3e}")
    terms = {
        "norm_r": Nr, "norm_p": Np, "norm_q": Nq,
        "bracket": (bracket, bracket_err),
        "lhs": (lhs, lhs_err), "rhs": (rhs, rhs_err),
        "holder_rhs": (hold_rhs, hold_err / 10),
    }
    params_d = base.as_dict()
    params_d.update(q=q, r=r, delta=delta, beta=beta, gamma=gamma)
    rep = inequality_report("ckn", params_d, {"lhs": terms["lhs"], "rhs": terms["rhs"]},
                            lhs, rhs, diags, ok)
    rep.terms = terms
    rep.diagnostics.append(f"Hölder step slack {hold_slack:.6e}")
    return rep
