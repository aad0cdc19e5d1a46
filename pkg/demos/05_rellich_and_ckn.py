"""
Second-order bounds and interpolation
=====================================

Rellich-type bounds control |f|^2 with boundary weights by the radial
Laplacian-type operator f'' + (Q-1) f'/r. The CKN-type inequality
interpolates between the higher-order Hardy bound and an L^q norm.
"""

from unihardy import radial
from unihardy.functionals import (HardyParams, resolve_ckn_params, verify_ckn,
                                  verify_radial_lower_bound, verify_rellich_l2,
                                  verify_rellich_lp)

f = radial.Product((radial.Bump(0.2, 0.8), radial.PowerR(1.0)))

print(verify_rellich_l2(HardyParams(5.0, 2.0, 4.0, 2.0, 1.0), f, "ineq24").summary())
print(verify_rellich_l2(HardyParams(8.0, 2.0, 4.0, 2.0, 1.0), f, "ineq25").summary())

# The expansion of the weighted square of the operator has a cross term
# proportional to (a - 3); at a = 3 it is omitted exactly.
for a in (1.0, 3.0):
    rep = verify_rellich_l2(HardyParams(5.0, 2.0, a, 2.0, 1.0), f, "expansion")
    print(rep.summary(), rep.diagnostics)

for p in (1.5, 2.0, 3.0):
    print(verify_radial_lower_bound(HardyParams(5.0, p, 1.0, 2.0, 1.0), f).summary())
    print(verify_rellich_lp(HardyParams(6.0, p, 1.0, p, 1.0), f).summary())

# delta solves delta r/p + (1 - delta) r/q = 1; when p = q it is free.
base = HardyParams(4.0, 2.0, 1.0, 2.0, 1.0)
for delta in (0.0, 0.5, 1.0):
    rep = verify_ckn(resolve_ckn_params(base, q=2.0, r=2.0, beta=0.0, delta=delta), f)
    print(f"delta={delta}: {rep.summary()}  Hoelder rhs {rep.term('holder_rhs'):.6f}")
ckn = resolve_ckn_params(base.with_(p=3.0), q=2.0, r=2.4, beta=0.3)
print(f"p=3, q=2, r=2.4 -> delta={ckn.delta:g}, gamma={ckn.gamma:g}:", verify_ckn(ckn, f).summary())
