"""
Exact remainder identities
==========================

The weighted Hardy inequality on the unit quasi-ball comes with an exact
identity: the gap between its two sides is a sum of explicit nonnegative
integrals. Here every term is integrated separately and the identity is
checked to rounding level.
"""

from unihardy import radial
from unihardy.functionals import (HardyParams, verify_high_l2, verify_high_lp,
                                  verify_l2_identity, verify_lp_identity)

# A smooth radial test function supported in [0.2, 0.8], written with the
# expression tree of ``unihardy.radial``.
f = radial.Product((radial.Bump(0.2, 0.8), radial.PowerR(1.0)))

# Parameters (Q, p, a, b, c): homogeneous dimension, integrability exponent,
# origin weight, boundary weight and the power inside 1 - r^c.
params = HardyParams(Q=4.0, p=2.0, a=1.0, b=2.0, c=1.0)

rep = verify_l2_identity(params, f)
print(rep.summary())
for name, (value, err) in rep.terms.items():
    print(f"  {name:>12s} = {value:.12f}   (quadrature error {err:.1e})")

# Only the homogeneous dimension enters the radial reduction, so it can be
# any real number above 1 (abstract mode).
for Q in (2.5, 7.0):
    print(verify_l2_identity(params.with_(Q=Q), f).summary())

# The L^p version replaces the square by the convexity kernel I_p. At p = 2
# it reduces to the L^2 identity term by term.
for p in (1.5, 2.0, 3.0):
    print(verify_lp_identity(params.with_(p=p), f).summary())

# Iterating the first-order identity gives the k-th order ones.
print(verify_high_l2(HardyParams(8.0, 2.0, 1.0, 2.0, 0.5), f, k=2).summary())
print(verify_high_lp(HardyParams(8.0, 3.0, 1.0, 2.0, 0.5), f, k=2).summary())
