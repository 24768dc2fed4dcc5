"""Golden-ratio algorithms for pseudomonotone equilibrium problems."""

from .bench import reference_solution, table1, table2
from .linalg import InnerProductSpace, Vector, combine, dist, dot, norm
from .problems import (
    BUILTINS,
    Ball,
    Bifunction,
    Box,
    BoxHalfspace,
    FeasibleSet,
    ProblemInstance,
    affine_bifunction,
    check_conditions,
    example21,
    example61,
    example62,
    linear_vi,
    load_problem,
    vi_bifunction,
)
from .prox import (
    ProxProblem,
    ProxResult,
    project_ball,
    project_box,
    project_halfspace,
    project_polytope,
    solve_prox,
)
from .solvers import (
    PHI,
    GoldenState,
    RunTrace,
    SolverConfig,
    StepSchedule,
    gra1_step,
    graal_vi_step,
    run,
)

__version__ = "0.1.0"
