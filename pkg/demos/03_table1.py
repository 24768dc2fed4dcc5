"""
Constant-step comparison on the affine polytope problem
=======================================================

GRA1 (one prox per iteration) against the general extragradient method (two
prox evaluations per iteration) with lam = 0.27 and tolerance 1e-6, from
three starting points. Convergence traces go to results/table1/traces.
"""

from golden_ep import table1

table = table1(out_dir="results/table1")
print(table.to_markdown(timings=True))

for (solver, start), trace in sorted(table.traces.items()):
    r = trace.residuals
    print(f"{solver:5s} {start}: residual {r[0]:.2e} -> {r[-1]:.2e} in {trace.iterations} iterations")
