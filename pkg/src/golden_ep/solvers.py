"""Golden-ratio iterations and extragradient baselines for equilibrium problems.

All golden-ratio variants share the averaging step
``x^k = ((phi - 1) y^k + x^{k-1}) / phi`` and differ in how ``y^{k+1}`` is
produced from ``(y^k, x^k)``:

=========  =====================================================
gra1       prox step with a constant stepsize
gra2       prox step with a diminishing, non-summable stepsize
gra3       projected subgradient step, ``lam_k = beta_k / max(1, ||g||)``
graal-vi   projection step ``P_C(x^k - lam A y^k)`` for VI problems
=========  =====================================================

The baselines are the general extragradient method (``gea``, three prox
solves per iteration), Hieu's two-prox extragradient (``hieu``) and the
Popov-type scheme (``popov``).
"""

from __future__ import annotations

import csv
import io
import math
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .linalg import Vector, dist, dot
from .problems import ProblemInstance
from .prox import PROX_TOL, ProxError, ProxProblem, solve_prox

PHI = (1.0 + math.sqrt(5.0)) / 2.0

SOLVER_IDS = ("gra1", "gra2", "gra3", "graal-vi", "gea", "hieu", "popov")


class SolverError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# step schedules


@dataclass(frozen=True)
class StepSchedule:
    """Stepsize sequence indexed by the iteration count ``k = 0, 1, 2, ...``.

    ``constant``: ``lam_k = value``. ``diminishing``: ``lam_k = value/(k+1)``
    (tends to zero, not summable). ``adaptive``: ``beta_k = value/(k+1)``
    (not summable, square summable), turned into a stepsize by ``gra3``.
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("constant", "diminishing", "adaptive"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError(f"schedule parameter must be positive, got {self.value}")

    def __call__(self, k: int) -> float:
        if self.kind == "constant":
            return self.value
        return self.value / (k + 1)

    @classmethod
    def constant(cls, lam: float) -> "StepSchedule":
        return cls("constant", lam)

    @classmethod
    def diminishing(cls, a: float) -> "StepSchedule":
        return cls("diminishing", a)

    @classmethod
    def adaptive(cls, b: float) -> "StepSchedule":
        return cls("adaptive", b)

    @classmethod
    def parse(cls, text: str) -> "StepSchedule":
        """Parse ``"0.27"``, ``"40/(k+1)"`` or ``"beta:1/(k+1)"``."""
        s = text.replace(" ", "")
        adaptive = s.startswith("beta:")
        if adaptive:
            s = s[5:]
        m = re.fullmatch(r"([0-9.eE+-]+)/\(k\+1\)", s)
        try:
            if m:
                return cls("adaptive" if adaptive else "diminishing", float(m.group(1)))
            if not adaptive:
                return cls("constant", float(s))
        except ValueError:
            pass
        raise ValueError(f"cannot parse schedule {text!r}")

    def __str__(self):
        if self.kind == "constant":
            return f"{self.value:g}"
        return ("beta:" if self.kind == "adaptive" else "") + f"{self.value:g}/(k+1)"


# --------------------------------------------------------------------------
# state, config, trace


@dataclass(frozen=True)
class GoldenState:
    """Iterate triple ``(x^{k-1}, y^k, x^k)``; ``y_prev`` is ``y^{k-1}``."""

    x_prev: Vector
    y: Vector
    x: Vector
    k: int = 1
    y_prev: Optional[Vector] = None

    @classmethod
    def initial(cls, x0: Vector, y1: Vector) -> "GoldenState":
        return cls(x0, y1, average(y1, x0), 1, None)

    def advance(self, y_next: Vector) -> "GoldenState":
        return GoldenState(self.x, y_next, average(y_next, self.x), self.k + 1, self.y)


def average(y: Vector, x_prev: Vector) -> Vector:
    """``((phi - 1) y + x_prev) / phi``."""
    return Vector(((PHI - 1.0) * y.coords + x_prev.coords) / PHI, y.space)


@dataclass
class SolverConfig:
    schedule: StepSchedule
    tol: float = 1e-6
    max_iter: int = 10_000
    x0: Optional[Vector] = None
    y1: Optional[Vector] = None
    energy_reference: Optional[Vector] = None
    alpha: Optional[StepSchedule] = None  # gea only; defaults to ``schedule``
    inner_tol: float = PROX_TOL
    prox_method: str = "auto"
    record_iterates: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")


@dataclass
class IterRecord:
    k: int
    residual: float
    energy: Optional[float]
    wall_time: float


@dataclass
class RunTrace:
    solver: str
    records: list[IterRecord] = field(default_factory=list)
    status: str = "max_iter"
    solution: Optional[Vector] = None
    message: str = ""
    iterates: list[tuple[Vector, Vector]] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def residuals(self) -> list[float]:
        return [r.residual for r in self.records]

    @property
    def energies(self) -> list[Optional[float]]:
        return [r.energy for r in self.records]

    @property
    def seconds(self) -> float:
        return self.records[-1].wall_time if self.records else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "residual", "energy", "wall_ms"])
        for r in self.records:
            w.writerow([r.k, "%.17g" % r.residual,
                        "" if r.energy is None else "%.17g" % r.energy,
                        "%.17g" % (1e3 * r.wall_time)])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


# --------------------------------------------------------------------------
# single steps


def _prox(problem: ProblemInstance, anchor: Vector, center: Vector, lam: float,
          inner_tol: float = PROX_TOL, method: str = "auto") -> Vector:
    p = ProxProblem(anchor, center, lam, problem.bifunction, problem.set)
    return solve_prox(p, inner_tol, method=method).minimizer


def gra1_step(state: GoldenState, problem: ProblemInstance, lam: float,
              inner_tol: float = PROX_TOL, method: str = "auto") -> GoldenState:
    """``y^{k+1} = argmin_C lam f(y^k, .) + 0.5||. - x^k||^2``, then average."""
    return state.advance(_prox(problem, state.y, state.x, lam, inner_tol, method))


def gra2_step(state: GoldenState, problem: ProblemInstance, lam_k: float,
              inner_tol: float = PROX_TOL, method: str = "auto") -> GoldenState:
    return gra1_step(state, problem, lam_k, inner_tol, method)


def gra3_stepsize(g: Vector, beta_k: float) -> tuple[float, float]:
    """Return ``(eta_k, lam_k)`` with ``eta_k = max(1, ||g||)``."""
    eta = max(1.0, math.sqrt(dot(g, g)))
    return eta, beta_k / eta


def gra3_step(state: GoldenState, problem: ProblemInstance, beta_k: float) -> GoldenState:
    g = problem.bifunction.partial_subgrad(state.y, state.y)
    _, lam = gra3_stepsize(g, beta_k)
    return state.advance(problem.set.project(state.x - lam * g))


def graal_vi_step(state: GoldenState, A: Callable[[Vector], Vector], lam: float,
                  project: Callable[[Vector], Vector]) -> GoldenState:
    return state.advance(project(state.x - lam * A(state.y)))


def gea_step(x: Vector, problem: ProblemInstance, alpha_k: float, beta_k: float,
             inner_tol: float = PROX_TOL, method: str = "auto"):
    """One general extragradient iteration.

    Returns ``(x_next, x_bar, x_tilde)``. ``alpha_k = 0`` skips the first prox
    (``x_bar = x``) and leaves the classical two-prox extragradient step.
    The final prox is anchored at ``x_tilde`` and centred at ``x``.
    """
    if alpha_k < 0 or not beta_k > 0:
        raise ValueError("need alpha_k >= 0 and beta_k > 0")
    x_bar = x if alpha_k == 0 else _prox(problem, x, x, alpha_k, inner_tol, method)
    x_tilde = _prox(problem, x_bar, x_bar, beta_k, inner_tol, method)
    x_next = _prox(problem, x_tilde, x, beta_k, inner_tol, method)
    return x_next, x_bar, x_tilde


def hieu_step(x: Vector, problem: ProblemInstance, lam: float,
              inner_tol: float = PROX_TOL, method: str = "auto"):
    """Return ``(x_next, y)``; ``y`` is the trial point built from ``x`` alone."""
    y = _prox(problem, x, x, lam, inner_tol, method)
    return _prox(problem, y, x, lam, inner_tol, method), y


def popov_step(x: Vector, y: Vector, problem: ProblemInstance, lam: float,
               inner_tol: float = PROX_TOL, method: str = "auto"):
    """Both prox solves are anchored at the old ``y``."""
    x_next = _prox(problem, y, x, lam, inner_tol, method)
    y_next = _prox(problem, y, x_next, lam, inner_tol, method)
    return x_next, y_next


# --------------------------------------------------------------------------
# driver


def check_stepsize(solver: str, problem: ProblemInstance, schedule: StepSchedule) -> None:
    """Reject a constant stepsize above the admissible bound, when one is known."""
    if schedule.kind != "constant" or problem.bifunction.lipschitz is None:
        return
    c1, c2 = problem.bifunction.lipschitz
    lam = schedule.value
    if solver == "gra1":
        bound = min(PHI / (4 * c1), PHI / (4 * c2))
    elif solver == "graal-vi":
        bound = PHI / (2 * (c1 + c2))  # c1 = c2 = L/2
    else:
        return
    if lam > bound * (1 + 1e-12):
        raise SolverError(f"stepsize {lam:g} exceeds the admissible bound {bound:.6g} for {solver}")


def energy(x: Vector, y_prev: Vector, y: Vector, z: Vector) -> float:
    """``(1 + phi)||x - z||^2 + (phi/2)||y_prev - y||^2``."""
    dx, dy = x - z, y_prev - y
    return (1 + PHI) * dot(dx, dx) + 0.5 * PHI * dot(dy, dy)


def run(solver: str, problem: ProblemInstance, config: SolverConfig) -> RunTrace:
    """Iterate ``solver`` until its residual drops below ``config.tol``.

    Residuals:

    * ``gra1``, ``graal-vi``: ``||y^{k+1} - y^k|| + ||y^k - x^k||``
    * ``gra2``, ``gra3``, ``popov``: ``||y^{k+1} - x^k|| + ||y^k - x^k||``
    * ``gea``: ``||x_tilde^k - x_bar^k||``
    * ``hieu``: ``||x^k - y^k||``

    The schedule index for the ``j``-th iteration (``j = 0, 1, ...``) is ``j``.
    Golden-ratio solvers start from ``y^1 = config.y1`` (default ``x0``);
    Popov uses the same default for ``y^0``. A step that raises ends the run
    with status ``"error"``.
    """
    if solver not in SOLVER_IDS:
        raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVER_IDS)}")
    x0 = config.x0 if config.x0 is not None else problem.set.project(problem.space.zeros())
    y1 = config.y1 if config.y1 is not None else x0
    for name, v in (("x0", x0), ("y1", y1)):
        if not problem.set.contains(v):
            raise SolverError(f"{name} is not in the feasible set")
    check_stepsize(solver, problem, config.schedule)
    if solver == "graal-vi" and problem.bifunction.operator is None:
        raise SolverError("graal-vi needs a bifunction of the form <A x, y - x>")
    if solver == "gra3" and config.schedule.kind == "constant":
        raise SolverError("gra3 needs a beta schedule, e.g. 'beta:1/(k+1)'")

    trace = RunTrace(solver)
    z = config.energy_reference
    sched = config.schedule
    alpha = config.alpha or sched
    opts = dict(inner_tol=config.inner_tol, method=config.prox_method)
    golden = solver in ("gra1", "gra2", "gra3", "graal-vi")
    state = GoldenState.initial(x0, y1) if golden else None
    x, y = x0, y1
    t0 = time.perf_counter()

    for j in range(config.max_iter):
        try:
            if golden:
                if solver in ("gra1", "gra2"):
                    new = gra1_step(state, problem, sched(j), **opts)
                elif solver == "gra3":
                    new = gra3_step(state, problem, sched(j))
                else:
                    new = graal_vi_step(state, problem.bifunction.operator, sched(j),
                                        problem.set.project)
                if solver in ("gra1", "graal-vi"):
                    res = dist(new.y, state.y) + dist(state.y, state.x)
                else:
                    res = dist(new.y, state.x) + dist(state.y, state.x)
                en = None
                if z is not None:
                    y_prev = state.y_prev if state.y_prev is not None else state.y
                    en = energy(state.x, y_prev, state.y, z)
                iterate = (state.x, state.y)
                state = new
            elif solver == "gea":
                x_next, x_bar, x_tilde = gea_step(x, problem, alpha(j), sched(j), **opts)
                res = dist(x_tilde, x_bar)
                en = None if z is None else dist(x, z) ** 2
                iterate = (x, x_tilde)
                x = x_next
            elif solver == "hieu":
                y = _prox(problem, x, x, sched(j), **opts)
                res = dist(x, y)
                en = None if z is None else dist(x, z) ** 2
                iterate = (x, y)
                if res >= config.tol:
                    x = _prox(problem, y, x, sched(j), **opts)
            else:  # popov
                x_next, y_next = popov_step(x, y, problem, sched(j), **opts)
                res = dist(y_next, x) + dist(y, x)
                en = None if z is None else dist(x, z) ** 2
                iterate = (x, y)
                x, y = x_next, y_next
        except (ProxError, ValueError) as exc:
            trace.status = "error"
            trace.message = str(exc)
            return trace

        trace.records.append(IterRecord(j + 1, res, en, time.perf_counter() - t0))
        if config.record_iterates:
            trace.iterates.append(iterate)
        trace.solution = iterate[1]
        if res < config.tol:
            trace.status = "converged"
            break
    if trace.solution is None:
        trace.solution = y1 if golden else x0
    return trace
