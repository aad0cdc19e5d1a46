"""
Approaching the sharp constants
===============================

Rayleigh quotients of two test families decrease toward the sharp
constants as the exponent kappa approaches its limit:

* phi_delta (1 - r^c)^kappa with kappa -> (b-1)/p (constant ((b-1)c/p)^p),
* phi_delta r^kappa with kappa -> -(Q-a)/p (constant ((Q-a)/p)^p).

The convergence is slow near the boundary: at offset 0.01 the raw quotient
is still about 20% above 1/4. The rows are close to linear in the offset,
so a two-point extrapolation lands within a fraction of a percent.
"""

from unihardy.functionals import HardyParams
from unihardy.sharpness import scan_boundary, scan_origin

for label, scan in [
    ("boundary family, target ((b-1)c/p)^p", scan_boundary(HardyParams(4.0, 2.0, 1.0, 2.0, 1.0))),
    ("origin family, target ((Q-a)/p)^p", scan_origin(HardyParams(4.0, 2.0, 1.0, 1.0, 1.0))),
]:
    print(label)
    print(scan.to_csv(), end="")
    print(f"target {scan.target:g}, finest ratio {scan.finest['ratio']:.5f} "
          f"(gap {scan.raw_gap:.2%}), extrapolated {scan.extrapolated:.5f} "
          f"(gap {scan.relative_gap:.2%})")
    print(f"every row above target: {scan.rows_above_target()}, monotone: {scan.monotone()}\n")
