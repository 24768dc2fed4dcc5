"""Reproduce the two comparison experiments and export plot-ready traces."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .linalg import Vector
from .problems import ProblemInstance, example61, example62
from .solvers import RunTrace, SolverConfig, StepSchedule, run

TABLE1_STEP = 0.27
TABLE1_TOL = 1e-6
TABLE2_SCHEDULE = 40.0  # lam_k = 40/(k+1)
TABLE2_TOL = 1e-3


class ReferenceSolutionError(RuntimeError):
    pass


@dataclass
class Experiment:
    """Solvers x starting points on one problem."""

    problem: ProblemInstance
    solvers: list[tuple[str, SolverConfig]]
    starts: dict[str, Vector]
    out_dir: Optional[Path] = None

    def __post_init__(self):
        for key, x0 in self.starts.items():
            if not self.problem.set.contains(x0):
                raise ValueError(f"starting point {key} is not feasible")


@dataclass
class TableRow:
    solver: str
    start: str
    iterations: int
    seconds: float
    status: str


@dataclass
class ComparisonTable:
    title: str
    rows: list[TableRow] = field(default_factory=list)
    traces: dict[tuple[str, str], RunTrace] = field(default_factory=dict)

    @property
    def solvers(self) -> list[str]:
        return list(dict.fromkeys(r.solver for r in self.rows))

    @property
    def starts(self) -> list[str]:
        return list(dict.fromkeys(r.start for r in self.rows))

    def iterations(self, solver: str, start: str) -> int:
        return self.cell(solver, start).iterations

    def cell(self, solver: str, start: str) -> TableRow:
        for r in self.rows:
            if r.solver == solver and r.start == start:
                return r
        raise KeyError((solver, start))

    def matrix(self) -> list[list[int]]:
        return [[self.iterations(s, x) for x in self.starts] for s in self.solvers]

    def to_markdown(self, timings: bool = False) -> str:
        starts = self.starts
        head = ["solver"]
        for x in starts:
            head += [f"{x} iter"] + ([f"{x} sec"] if timings else [])
        lines = [f"# {self.title}", "", "| " + " | ".join(head) + " |",
                 "|" + "---|" * len(head)]
        for s in self.solvers:
            cells = [s]
            for x in starts:
                c = self.cell(s, x)
                cells.append(str(c.iterations) + ("" if c.status == "converged" else f" ({c.status})"))
                if timings:
                    cells.append(f"{c.seconds:.4f}")
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def to_csv(self, timings: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["solver", "x0", "iterations", "status"] + (["seconds"] if timings else []))
        for r in self.rows:
            w.writerow([r.solver, r.start, r.iterations, r.status]
                       + (["%.17g" % r.seconds] if timings else []))
        return buf.getvalue()

    def write(self, out_dir, stem: str, timings: bool = False) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        md, cs = out / f"{stem}.md", out / f"{stem}.csv"
        md.write_text(self.to_markdown(timings), encoding="utf-8")
        cs.write_text(self.to_csv(timings), encoding="utf-8")
        return [md, cs] + convergence_csv(self.traces, out / "traces")


def run_experiment(exp: Experiment, title: str) -> ComparisonTable:
    table = ComparisonTable(title)
    for solver, cfg in exp.solvers:
        for key, x0 in exp.starts.items():
            tr = run(solver, exp.problem, SolverConfig(**{**cfg.__dict__, "x0": x0, "y1": None}))
            table.rows.append(TableRow(solver, key, tr.iterations, tr.seconds, tr.status))
            table.traces[(solver, key)] = tr
    return table


def convergence_csv(traces: dict[tuple[str, str], RunTrace], out_dir) -> list[Path]:
    """Write ``<solver>_<x0-id>.csv`` files with columns ``k,residual``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for (solver, start), tr in traces.items():
        path = out / f"{solver}_{start}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "residual"])
            for r in tr.records:
                w.writerow([r.k, "%.17g" % r.residual])
        paths.append(path)
    return paths


def table1(out_dir=None, timings: bool = False) -> ComparisonTable:
    """GEA vs GRA1 on the affine 5-D problem, stepsize 0.27, tol 1e-6."""
    p = example61()
    cfg = SolverConfig(StepSchedule.constant(TABLE1_STEP), tol=TABLE1_TOL)
    exp = Experiment(p, [("gea", cfg), ("gra1", cfg)], p.starting_points, out_dir)
    table = run_experiment(exp, "GEA vs GRA1, affine problem in R^5")
    if out_dir is not None:
        table.write(out_dir, "table1", timings)
    return table


def table2(N: int = 101, out_dir=None, timings: bool = False) -> ComparisonTable:
    """Hieu, Popov and GRA2 on the radial L2 problem, ``lam_k = 40/(k+1)``, tol 1e-3."""
    p = example62(N)
    cfg = SolverConfig(StepSchedule.diminishing(TABLE2_SCHEDULE), tol=TABLE2_TOL)
    exp = Experiment(p, [("hieu", cfg), ("popov", cfg), ("gra2", cfg)], p.starting_points, out_dir)
    table = run_experiment(exp, f"Hieu vs Popov vs GRA2, radial problem on L2 (N={N})")
    if out_dir is not None:
        table.write(out_dir, "table2", timings)
    return table


def reference_solution(problem: ProblemInstance, budget: int = 100_000,
                       stepsize: Optional[float] = None, tol: float = 1e-12,
                       check_tol: float = 1e-8, n_samples: int = 500) -> Vector:
    """High-accuracy solution from a long extragradient run.

    The stepsize defaults to ``1/(4 max(c1, c2))`` when Lipschitz-type
    constants are declared. The result must satisfy ``min_y f(z, y) >= -check_tol``
    over sampled ``y``.
    """
    if stepsize is None:
        lip = problem.bifunction.lipschitz
        stepsize = 0.25 / max(lip) if lip else TABLE1_STEP
    x0 = problem.set.project(problem.space.zeros())
    cfg = SolverConfig(StepSchedule.constant(stepsize), tol=tol, max_iter=budget,
                       x0=x0, inner_tol=min(1e-13, tol / 10))
    tr = run("gea", problem, cfg)
    if tr.status != "converged":
        raise ReferenceSolutionError(f"reference run ended with status {tr.status} {tr.message}")
    z = tr.solution
    gap = problem.gap(z, n_samples)
    if gap < -check_tol:
        raise ReferenceSolutionError(f"reference point fails the gap check ({gap:.3e})")
    return z
