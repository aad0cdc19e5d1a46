"""
Why the boundary constant is not attained
=========================================

The only candidate extremal is v = (r^-c - 1)^((b-1)/p). Its gradient
energy truncated at 1 - eps grows like A log(1/eps) with
A = ((b-1)c/p)^p / c, so v has infinite energy and is not admissible.
"""

import math

from unihardy.functionals import HardyParams
from unihardy.sharpness import doubling_increment, nonattainment_probe

params = HardyParams(4.0, 2.0, 1.0, 2.0, 1.0)
table = nonattainment_probe(params)
print(table.to_csv(), end="")
print(f"fitted slope {table.slope:.5f} against A = {table.coefficient:.5f}: "
      f"ratio {table.normalized_slope:.4f}, R^2 {table.r_squared:.6f}")

# Halving eps adds a fixed amount, A log 2, in the limit.
for eps in (1e-2, 1e-3, 1e-4):
    print(f"eps={eps:g}: I(eps/2) - I(eps) = {doubling_increment(params, eps):.6f}"
          f"   A log 2 = {table.coefficient * math.log(2):.6f}")
