"""
Logarithmic limits and Euclidean chains
=======================================

Since 1 - r^c = c log(1/r) + O(c^2), rescaling the c-family by c^(b-p)
recovers the log-weight inequality as c -> 0. On R^n the unified bounds
sit between classical Hardy and Rellich inequalities, link by link.
"""

from unihardy import radial
from unihardy.functionals import HardyParams, verify_chains, verify_log_limits
from unihardy.group_model import GroupModel

f = radial.Product((radial.Bump(0.2, 0.8), radial.PowerR(1.0)))

rep = verify_log_limits(HardyParams(4.0, 2.0, 1.0, 2.0, 1.0), f)
print(rep.summary())
for line in rep.diagnostics:
    print("  " + line)

for n in (3, 5, 7):
    rep = verify_chains(GroupModel.euclidean(n), f)
    print(f"n={n}: {rep.status.value}")
    for line in rep.diagnostics:
        print("  " + line)
