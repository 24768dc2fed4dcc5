"""
Diminishing steps on a pseudomonotone problem in L^2[0, 1]
==========================================================

The operator A x = (3/2 - ||x||) x on the unit ball is pseudomonotone but not
monotone. Functions are sampled on a uniform grid and the inner product uses
trapezoid weights. GRA2 is compared with two extragradient-type baselines
with lam_k = 40/(k+1) at tolerance 1e-3.
"""

from golden_ep import table2

coarse = table2(N=101, out_dir="results/table2")
print(coarse.to_markdown(timings=True))

# Iterates stay on the ray through x0, so the grid hardly matters.
fine = table2(N=501)
print("N=101:", coarse.matrix())
print("N=501:", fine.matrix())
