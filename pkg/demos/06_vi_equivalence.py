"""
Variational inequalities: the prox step is a projection
=======================================================

For f(x, y) = <A x, y - x> the prox subproblem is a projection of
x - lam A(anchor), so GRA1 and the projection form GRAAL-VI generate the same
iterates. Here GRA1 solves each subproblem iteratively, ignoring the closed
form, and still matches to rounding error.
"""

import numpy as np

from golden_ep import GoldenState, dist, gra1_step, graal_vi_step, linear_vi

problem = linear_vi()
rng = np.random.default_rng(0)
s1 = s2 = GoldenState.initial(problem.set.sample(rng), problem.set.sample(rng))
gaps = []
for _ in range(200):
    s1 = gra1_step(s1, problem, 0.3, method="gradient", inner_tol=1e-13)
    s2 = graal_vi_step(s2, problem.bifunction.operator, 0.3, problem.set.project)
    gaps.append(dist(s1.y, s2.y))
print(f"largest iterate difference over 200 steps: {max(gaps):.2e}")
print("final iterate:", np.round(s2.y.coords, 6))
