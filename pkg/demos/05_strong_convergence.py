"""
Strong convergence with diminishing and adaptive steps
======================================================

On strongly pseudomonotone problems GRA2 (lam_k = 40/(k+1)) and GRA3
(projected subgradient, lam_k = beta_k / max(1, ||g||) with beta_k = 4/(k+1))
drive the iterate to the unique solution 0.
"""

from golden_ep import SolverConfig, StepSchedule, example21, example62, norm, run

for problem in (example62(), example21()):
    x0 = problem.starting_points["paper-x0-2"]
    for solver, sched in (("gra2", StepSchedule.diminishing(40)),
                          ("gra3", StepSchedule.adaptive(4.0))):
        cfg = SolverConfig(sched, tol=1e-300, max_iter=400, x0=x0, record_iterates=True)
        trace = run(solver, problem, cfg)
        norms = [norm(x) for x, _ in trace.iterates]
        marks = ", ".join(f"k={k}: {norms[k]:.1e}" for k in (0, 10, 50, 399))
        print(f"{problem.name:10s} {solver}: ||x^k||  {marks}")
