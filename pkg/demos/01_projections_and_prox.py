"""
Projections and proximal subproblems
====================================

Every solver step reduces to either a projection onto the feasible set or a
small strongly convex subproblem over it. This script shows both on the
five-dimensional polytope {-5 <= y_i <= 5, sum(y) >= -1}.
"""

import numpy as np

from golden_ep import ProxProblem, Vector, example61, project_polytope, solve_prox

problem = example61()
space = problem.space

# A point far outside the halfspace: the box clip alone is infeasible, so the
# projection falls back to Dykstra's alternating scheme.
x = Vector([-6.0, 0.0, 0.0, 0.0, 0.0], space)
p = problem.set.project(x)
print("P_C(x) =", np.round(p.coords, 12), " sum =", p.coords.sum())

# The same call through the generic routine, spelling out the two pieces.
ones = Vector(np.ones(5), space)
print("direct  =", project_polytope(x, box=(-5.0, 5.0), halfspace=(ones, -1.0)).coords)

# Prox step: argmin_C  lam f(anchor, y) + 0.5 ||y - center||^2
zero = space.zeros()
res = solve_prox(ProxProblem(zero, zero, 0.27, problem.bifunction, problem.set))
print("prox at 0 :", np.round(res.minimizer.coords, 8))
print("inner iterations", res.inner_iterations, "certificate", f"{res.certificate:.1e}")
