"""
Concrete groups and the polar decomposition
===========================================

The radial reduction rests on dx = r^(Q-1) dr dsigma. Monte Carlo ball
moments check it: the moment of order s over the ball of radius R must
scale like R^(Q+s), and for the Euclidean norm match the closed form.
"""

import math

from unihardy.group_model import (GroupModel, NormKind, dilate, mc_ball_moment,
                                  polar_moment, quasi_norm, sphere_measure)
import numpy as np

e3 = GroupModel.euclidean(3)
heis = GroupModel.heisenberg()                     # weights (1, 1, 2), Koranyi gauge
aniso = GroupModel((1, 2, 3), NormKind.ANISOTROPIC, power=6)

x = np.array([[0.3, -0.2, 0.5]])
for m in (e3, heis, aniso):
    print(f"{m.norm_kind.value:12s} Q={m.Q:g}  |x|={quasi_norm(m, x)[0]:.6f}  "
          f"|D_2 x|/2={quasi_norm(m, dilate(m, 2.0, x))[0] / 2:.6f}")

sphere = sphere_measure(e3)
for s in (0.0, 1.0, 2.0):
    est = mc_ball_moment(e3, s, 1.0, 10**6, seed=1)
    exact = polar_moment(sphere, 3, s, 1.0)
    print(f"Euclidean s={s:g}: {est.estimate:.5f} +- {est.stderr:.5f}  exact {exact:.5f}")

for s in (0.0, 1.0):
    one = mc_ball_moment(heis, s, 1.0, 10**6, seed=2)
    two = mc_ball_moment(heis, s, 2.0, 10**6, seed=3)
    ratio = two.estimate / one.estimate
    err = ratio * math.hypot(one.stderr / one.estimate, two.stderr / two.estimate)
    print(f"Koranyi s={s:g}: ratio {ratio:.3f} +- {err:.3f}, expected 2^(Q+s) = {2 ** (4 + s):g}")
print(f"fitted Koranyi sphere measure: {sphere_measure(heis):.4f}")
