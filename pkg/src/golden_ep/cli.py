"""Command-line front end: ``golden-ep {run,table1,table2,list,check}``.

Exit codes: 0 success, 2 usage or problem-file error, 3 iteration budget
exhausted, 4 solver failure, 5 condition check failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench
from .linalg import Vector
from .problems import ProblemDefinitionError, check_conditions, load_problem, shipped_problem_files
from .solvers import PHI, SOLVER_IDS, SolverConfig, SolverError, StepSchedule, run

EXIT_OK, EXIT_USAGE, EXIT_MAX_ITER, EXIT_SOLVER, EXIT_CHECK = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _vector(text: str, problem) -> Vector:
    if text in problem.starting_points:
        return problem.starting_points[text]
    try:
        return Vector([float(tok) for tok in text.split(",")], problem.space)
    except ValueError as exc:
        presets = ", ".join(problem.starting_points) or "none"
        raise UsageError(f"bad vector {text!r} ({exc}); presets: {presets}") from None


def default_schedule(solver: str, problem) -> StepSchedule:
    lip = problem.bifunction.lipschitz
    if solver in ("gra1", "gea", "graal-vi"):
        if lip is None:
            return StepSchedule.constant(0.1)
        c = max(lip)
        return StepSchedule.constant(PHI / (4 * c) if solver != "gea" else 0.25 / c)
    if solver == "gra3":
        return StepSchedule.adaptive(1.0)
    return StepSchedule.diminishing(1.0)


def cmd_run(args) -> int:
    try:
        problem = load_problem(args.problem, grid=args.grid)
        if args.schedule is not None and args.lam is not None:
            raise UsageError("give either --lambda or --schedule, not both")
        if args.lam is not None:
            schedule = StepSchedule.constant(args.lam)
        elif args.schedule is not None:
            schedule = StepSchedule.parse(args.schedule)
        else:
            schedule = default_schedule(args.solver, problem)
        if args.x0 is not None:
            x0 = _vector(args.x0, problem)
        elif problem.starting_points:
            x0 = next(iter(problem.starting_points.values()))
        else:
            x0 = None
        y1 = _vector(args.y1, problem) if args.y1 is not None else None
        alpha = StepSchedule.parse(args.alpha) if args.alpha is not None else None
        config = SolverConfig(schedule, tol=args.tol, max_iter=args.max_iter,
                              x0=x0, y1=y1, alpha=alpha)
    except (ProblemDefinitionError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        trace = run(args.solver, problem, config)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if args.out:
        trace.write_csv(args.out)
    last = trace.records[-1].residual if trace.records else float("nan")
    print(f"iterations={trace.iterations} residual={last:.6g} status={trace.status}")
    if trace.status == "error":
        print(f"solver error: {trace.message}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK if trace.status == "converged" else EXIT_MAX_ITER


def cmd_check(args) -> int:
    seed = int(os.environ.get("EQ_SEED", "42"))
    try:
        problem = load_problem(args.problem, grid=args.grid)
    except ProblemDefinitionError as exc:
        print(f"construction failed: {exc}")
        return EXIT_CHECK
    results = check_conditions(problem, n_samples=args.samples, seed=seed, margin=args.margin)
    for r in results:
        print(r)
    failed = [r for r in results if not r.passed]
    for r in failed:
        wit = "; ".join(v.to_row() for v in r.witness)
        print(f"violated {r.name}; witness: {wit}")
    return EXIT_CHECK if failed else EXIT_OK


def _cmd_table(which: str, args) -> int:
    if which == "table1":
        table = bench.table1(out_dir=args.out, timings=args.timings)
    else:
        table = bench.table2(N=args.grid, out_dir=args.out, timings=args.timings)
    sys.stdout.write(table.to_markdown(args.timings))
    return EXIT_SOLVER if any(r.status == "error" for r in table.rows) else EXIT_OK


def cmd_list(args) -> int:
    print("solvers: " + ", ".join(SOLVER_IDS))
    print("problems: " + ", ".join(sorted(shipped_problem_files())))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="golden-ep", description="Golden-ratio and extragradient solvers for equilibrium problems.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="{run,table1,table2,list,check}")

    p = sub.add_parser("run", help="run one solver on a problem file")
    p.add_argument("problem", help="problem file, or the name of a shipped problem")
    p.add_argument("--solver", choices=SOLVER_IDS, default="gra1")
    p.add_argument("--lambda", dest="lam", type=float, help="constant stepsize")
    p.add_argument("--schedule", help="'c', 'a/(k+1)' or 'beta:b/(k+1)'")
    p.add_argument("--alpha", help="schedule for the first GEA prox (defaults to --schedule)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--x0", help="comma-separated vector or preset name (e.g. paper-x0-1)")
    p.add_argument("--y1", help="second starting point; defaults to x0")
    p.add_argument("--grid", type=int, help="grid size for L2 problems")
    p.add_argument("--out", help="write the run trace CSV here")
    p.set_defaults(func=cmd_run)

    for name, default_out in (("table1", "results"), ("table2", "results")):
        p = sub.add_parser(name, help=f"reproduce {name} and write tables and traces")
        p.add_argument("--out", default=default_out, help="output directory")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock seconds (makes output non-reproducible)")
        if name == "table2":
            p.add_argument("--grid", type=int, default=101)
        p.set_defaults(func=lambda a, _n=name: _cmd_table(_n, a))

    p = sub.add_parser("list", help="list solvers and shipped problems")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("check", help="sample the structural conditions of a problem")
    p.add_argument("problem")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--margin", type=float, default=1e-10)
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_check)
    return parser


_VECTOR_FLAGS = ("--x0", "--y1")


def _glue_vector_flags(argv: list[str]) -> list[str]:
    # "--x0 -1,3,1,1,2" would otherwise be read as an unknown option.
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VECTOR_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_vector_flags(argv))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
