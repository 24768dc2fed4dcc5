"""Bifunctions, feasible sets and the shipped equilibrium-problem instances.

An equilibrium problem asks for ``x in C`` with ``f(x, y) >= 0`` for every
``y in C``. Instances bundle the bifunction, the set and the ambient space,
plus sampling checks for the structural conditions the solvers rely on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .linalg import EUCLIDEAN, InnerProductSpace, Vector, dot, norm
from .prox import project_ball, project_box, project_polytope

EIG_TOL = 1e-9
MEMBERSHIP_TOL = 1e-9


class ProblemDefinitionError(ValueError):
    """Raised when a bifunction or problem file violates its preconditions."""


# --------------------------------------------------------------------------
# bifunctions


@dataclass(frozen=True)
class Bifunction:
    """Oracle pair for ``f(x, y)`` and a subgradient of ``f(x, .)`` at ``y``.

    ``operator`` is set when ``f(x, y) = <A x, y - x>``; the prox step then
    reduces to a projection. ``curvature`` bounds the Lipschitz constant of
    ``y -> grad_y f(x, y)`` and sizes the projected-gradient step.
    """

    eval: Callable[[Vector, Vector], float]
    partial_subgrad: Callable[[Vector, Vector], Vector]
    lipschitz: Optional[tuple[float, float]] = None
    strong_modulus: Optional[float] = None
    operator: Optional[Callable[[Vector], Vector]] = None
    curvature: Optional[float] = None

    def __call__(self, x: Vector, y: Vector) -> float:
        return self.eval(x, y)


def affine_bifunction(P, Q, q, space: InnerProductSpace | None = None) -> Bifunction:
    """``f(x, y) = <P x + Q y + q, y - x>`` on Euclidean space.

    ``Q`` must be symmetric positive semidefinite and ``Q - P`` negative
    semidefinite; both are checked by eigenvalues. The Lipschitz-type
    constants are ``c1 = c2 = ||P - Q||_2 / 2``.
    """
    P = np.array(P, dtype=float)
    Q = np.array(Q, dtype=float)
    q_arr = np.array(q.coords if isinstance(q, Vector) else q, dtype=float)
    n = q_arr.shape[0]
    if P.shape != (n, n) or Q.shape != (n, n):
        raise ProblemDefinitionError(f"P and Q must be {n}x{n}")
    if space is None:
        space = q.space if isinstance(q, Vector) else InnerProductSpace.euclidean(n)
    if space.kind != EUCLIDEAN or space.dim != n:
        raise ProblemDefinitionError("affine bifunctions live on Euclidean space of matching dimension")
    if not np.allclose(Q, Q.T, rtol=0, atol=EIG_TOL):
        raise ProblemDefinitionError("Q is not symmetric")
    if np.linalg.eigvalsh(Q).min() < -EIG_TOL:
        raise ProblemDefinitionError("Q is not positive semidefinite")
    QP = Q - P
    if np.linalg.eigvalsh(0.5 * (QP + QP.T)).max() > EIG_TOL:
        raise ProblemDefinitionError("Q - P is not negative semidefinite")

    def f(x: Vector, y: Vector) -> float:
        return float(np.dot(P @ x.coords + Q @ y.coords + q_arr, y.coords - x.coords))

    def grad(x: Vector, y: Vector) -> Vector:
        return Vector(P @ x.coords + q_arr + Q @ y.coords + Q @ (y.coords - x.coords), space)

    c = 0.5 * float(np.linalg.norm(P - Q, 2))
    return Bifunction(
        f, grad, lipschitz=(c, c), curvature=2.0 * float(np.linalg.norm(Q, 2))
    )


def vi_bifunction(A: Callable[[Vector], Vector], L: float | None = None,
                  gamma: float | None = None) -> Bifunction:
    """``f(x, y) = <A x, y - x>``; ``L`` is a Lipschitz constant of ``A``."""

    def f(x: Vector, y: Vector) -> float:
        return dot(A(x), y - x)

    def grad(x: Vector, y: Vector) -> Vector:
        return A(x)

    lip = None if L is None else (0.5 * L, 0.5 * L)
    return Bifunction(f, grad, lipschitz=lip, strong_modulus=gamma, operator=A, curvature=0.0)


def radial_operator(x: Vector) -> Vector:
    """``A(x) = (3/2 - ||x||) x``."""
    return (1.5 - norm(x)) * x


def damped_operator(x: Vector) -> Vector:
    """``A(x) = x / (1 + ||x||^2)``."""
    return x / (1.0 + dot(x, x))


def linear_operator(M, b) -> Callable[[Vector], Vector]:
    M = np.array(M, dtype=float)
    b = np.array(b, dtype=float)

    def A(x: Vector) -> Vector:
        return Vector(M @ x.coords + b, x.space)

    return A


# --------------------------------------------------------------------------
# feasible sets


class FeasibleSet:
    """Closed convex set with a projection, a membership test and a sampler."""

    space: InnerProductSpace

    def project(self, x: Vector) -> Vector:
        raise NotImplementedError

    def contains(self, x: Vector, tol: float = MEMBERSHIP_TOL) -> bool:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> Vector:
        raise NotImplementedError

    def samples(self, n: int, seed: int = 42) -> list[Vector]:
        rng = np.random.default_rng(seed)
        return [self.sample(rng) for _ in range(n)]


class Box(FeasibleSet):
    def __init__(self, lo: float, hi: float, space: InnerProductSpace):
        if lo > hi:
            raise ValueError("box bounds must satisfy lo <= hi")
        self.lo, self.hi, self.space = float(lo), float(hi), space

    def project(self, x):
        return project_box(x, self.lo, self.hi)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        c = x.coords
        return bool(np.all(c >= self.lo - tol) and np.all(c <= self.hi + tol))

    def sample(self, rng):
        return Vector(rng.uniform(self.lo, self.hi, self.space.dim), self.space)

    def __str__(self):
        return f"box({self.lo:g}, {self.hi:g})"


class Ball(FeasibleSet):
    """Closed ball ``||x|| <= radius`` about the origin."""

    def __init__(self, radius: float, space: InnerProductSpace):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius, self.space = float(radius), space

    def project(self, x):
        return project_ball(x, self.radius)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return norm(x) <= self.radius + tol

    def sample(self, rng):
        d = Vector(rng.standard_normal(self.space.dim), self.space)
        return (self.radius * rng.uniform() / norm(d)) * d

    def __str__(self):
        return f"ball({self.radius:g})"


class BoxHalfspace(FeasibleSet):
    """``{x : lo <= x_i <= hi, sum_i x_i >= level}``."""

    def __init__(self, lo: float, hi: float, level: float, space: InnerProductSpace):
        if lo > hi:
            raise ValueError("box bounds must satisfy lo <= hi")
        if space.dim * hi < level:
            raise ValueError("box and halfspace do not intersect")
        self.lo, self.hi, self.level, self.space = float(lo), float(hi), float(level), space
        self.normal = Vector(1.0 / space.weights, space)  # <normal, x> = sum x_i

    def project(self, x):
        return project_polytope(x, (self.lo, self.hi), (self.normal, self.level))

    def contains(self, x, tol=MEMBERSHIP_TOL):
        c = x.coords
        return bool(np.all(c >= self.lo - tol) and np.all(c <= self.hi + tol)
                    and c.sum() >= self.level - tol)

    def sample(self, rng):
        while True:
            c = rng.uniform(self.lo, self.hi, self.space.dim)
            if c.sum() >= self.level:
                return Vector(c, self.space)

    def __str__(self):
        return f"box_halfspace({self.lo:g}, {self.hi:g}, {self.level:g})"


# --------------------------------------------------------------------------
# instances


@dataclass
class ProblemInstance:
    name: str
    bifunction: Bifunction
    set: FeasibleSet
    space: InnerProductSpace
    known_solution: Optional[Vector] = None
    starting_points: dict[str, Vector] = field(default_factory=dict)

    def f(self, x: Vector, y: Vector) -> float:
        return self.bifunction(x, y)

    def gap(self, x: Vector, n_samples: int = 500, seed: int = 42) -> float:
        """``min_y f(x, y)`` over sampled ``y in C``; nonnegative at a solution."""
        return min(self.bifunction(x, y) for y in self.set.samples(n_samples, seed))


EX61_P = np.array([[3.1, 2, 0, 0, 0],
                   [2, 3.6, 0, 0, 0],
                   [0, 0, 3.5, 2, 0],
                   [0, 0, 2, 3.3, 0],
                   [0, 0, 0, 0, 3]])
EX61_Q = np.array([[1.6, 1, 0, 0, 0],
                   [1, 1.6, 0, 0, 0],
                   [0, 0, 1.5, 1, 0],
                   [0, 0, 1, 1.5, 0],
                   [0, 0, 0, 0, 2]])
EX61_q = np.array([1.0, -2, -1, 2, -1])
EX61_STARTS = {
    "paper-x0-1": (-1.0, 3, 1, 1, 2),
    "paper-x0-2": (1.0, 1, 1, 1, 1),
    "paper-x0-3": (-1.0, 0, 0, 0, 0),
}


def l2_starting_functions(space: InnerProductSpace) -> dict[str, Vector]:
    t = space.grid
    return {
        "paper-x0-1": Vector((np.sin(-3 * t) + np.cos(-10 * t)) / 200.0, space),
        "paper-x0-2": Vector((t**3 + 1) * np.exp(5 * t) / 85.0, space),
    }


def example61() -> ProblemInstance:
    space = InnerProductSpace.euclidean(5)
    f = affine_bifunction(EX61_P, EX61_Q, EX61_q, space)
    return ProblemInstance(
        "example61", f, BoxHalfspace(-5.0, 5.0, -1.0, space), space,
        starting_points={k: Vector(v, space) for k, v in EX61_STARTS.items()},
    )


def example62(N: int = 101) -> ProblemInstance:
    """Radial operator ``(3/2 - ||x||) x`` on the unit ball of L2([0, 1])."""
    space = InnerProductSpace.l2(N)
    f = vi_bifunction(radial_operator, L=3.5, gamma=0.5)
    return ProblemInstance("example62", f, Ball(1.0, space), space,
                           known_solution=space.zeros(),
                           starting_points=l2_starting_functions(space))


def example21(N: int = 101) -> ProblemInstance:
    """``f(x, y) = <x / (1 + ||x||^2), y - x>`` on the unit ball of L2([0, 1])."""
    space = InnerProductSpace.l2(N)
    f = vi_bifunction(damped_operator, L=1.0, gamma=0.5)
    return ProblemInstance("example21", f, Ball(1.0, space), space,
                           known_solution=space.zeros(),
                           starting_points=l2_starting_functions(space))


def linear_vi(n: int = 6, seed: int = 7) -> ProblemInstance:
    """Monotone affine VI ``A x = M x + b`` on ``[-1, 1]^n``.

    ``M`` is a random skew part plus ``0.1 I``, so ``A`` is strongly monotone
    with Lipschitz constant ``||M||_2``.
    """
    rng = np.random.default_rng(seed)
    S = rng.standard_normal((n, n))
    M = (S - S.T) / 2 + 0.1 * np.eye(n)
    b = rng.standard_normal(n)
    space = InnerProductSpace.euclidean(n)
    f = vi_bifunction(linear_operator(M, b), L=float(np.linalg.norm(M, 2)))
    return ProblemInstance("linear_vi", f, Box(-1.0, 1.0, space), space)


BUILTINS = {
    "example61": example61,
    "example62": example62,
    "example21": example21,
    "linear_vi": linear_vi,
}


# --------------------------------------------------------------------------
# condition sampling


@dataclass
class ConditionCheck:
    name: str
    passed: bool
    worst: float
    tested: int
    witness: tuple = ()

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return f"{self.name}: {status} (worst margin {self.worst:.3e}, {self.tested} samples)"


def _worst(values, points):
    i = int(np.argmin(values)) if values else -1
    return (float(values[i]), points[i]) if values else (math.inf, ())


def _ascent_partner(problem, x, z, rng):
    g = problem.bifunction.partial_subgrad(x, x)
    gn = norm(g)
    step = rng.uniform(0.0, 1.0)
    move = (step / gn) * g if gn > 0 else problem.space.zeros()
    return problem.set.project(x + move + rng.uniform(0.0, 0.5) * (z - x))


def _pairs(xs, ys, ascent):
    yield from zip(xs, ys)
    yield from zip(xs, ascent)


def check_conditions(problem: ProblemInstance, n_samples: int = 1000, seed: int = 42,
                     margin: float = 1e-10, reflexive_tol: float = 1e-12) -> list[ConditionCheck]:
    """Sample the structural conditions the solvers assume.

    Each check reports the smallest slack seen; negative slack beyond the
    margin is a violation. Checked: f(x, x) = 0 (A1), pseudomonotonicity (A2),
    the subgradient inequality (A4), the Lipschitz-type bound (A5) when
    constants are declared, strong pseudomonotonicity (A9) when a modulus is
    declared.
    """
    f = problem.bifunction
    rng = np.random.default_rng(seed)
    draw = lambda: problem.set.sample(rng)  # noqa: E731
    xs = [draw() for _ in range(n_samples)]
    ys = [draw() for _ in range(n_samples)]
    zs = [draw() for _ in range(n_samples)]
    # Independent pairs rarely satisfy f(x, y) >= 0 in high dimension, so the
    # implication checks also use pairs pushed along grad_y f(x, .) at x.
    ascent = [_ascent_partner(problem, x, z, rng) for x, z in zip(xs, zs)]
    out = []

    vals = [-abs(f(x, x)) for x in xs]
    w, pt = _worst(vals, [(x,) for x in xs])
    out.append(ConditionCheck("A1", w >= -reflexive_tol, w, n_samples, pt))

    vals, pts = [], []
    for x, y in _pairs(xs, ys, ascent):
        if f(x, y) >= 0:
            vals.append(-f(y, x))
            pts.append((x, y))
    w, pt = _worst(vals, pts)
    out.append(ConditionCheck("A2", w >= -margin, w, len(vals), pt))

    vals = []
    for x, y, y0 in zip(xs, ys, zs):
        g = f.partial_subgrad(x, y0)
        vals.append(f(x, y) - f(x, y0) - dot(g, y - y0))
    w, pt = _worst(vals, list(zip(xs, ys, zs)))
    out.append(ConditionCheck("A4", w >= -margin, w, n_samples, pt))

    if f.lipschitz is not None:
        c1, c2 = f.lipschitz
        vals = []
        for x, y, z in zip(xs, ys, zs):
            dxy, dyz = x - y, y - z
            vals.append(f(x, y) + f(y, z) - f(x, z) + c1 * dot(dxy, dxy) + c2 * dot(dyz, dyz))
        w, pt = _worst(vals, list(zip(xs, ys, zs)))
        out.append(ConditionCheck(f"A5(c1={c1:g},c2={c2:g})", w >= -margin, w, n_samples, pt))

    if f.strong_modulus is not None:
        gamma = f.strong_modulus
        vals, pts = [], []
        for x, y in _pairs(xs, ys, ascent):
            if f(x, y) >= 0:
                d = x - y
                vals.append(-(f(y, x) + gamma * dot(d, d)))
                pts.append((x, y))
        w, pt = _worst(vals, pts)
        out.append(ConditionCheck(f"A9(gamma={gamma:g})", w >= -margin, w, len(vals), pt))
    return out


# --------------------------------------------------------------------------
# problem files

_SET_RE = re.compile(r"^(box_halfspace|ball|box)\s*\((.*)\)$")
_DATA = "data"


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in re.split(r"[,\s;]+", text.strip()) if tok]


def parse_problem(text: str, grid: int | None = None) -> ProblemInstance:
    """Build a :class:`ProblemInstance` from the key-value problem format.

    Recognised keys: ``name``, ``dim``, ``space`` (``euclidean`` or ``l2``),
    ``matrix P``, ``matrix Q``, ``vector q``, ``operator`` (``radial``,
    ``damped`` or ``linear`` with ``matrix M`` / ``vector b``), ``lipschitz``
    (one ``L`` for operators, or ``c1, c2``), ``strong_modulus``, ``set``,
    ``known_solution`` (``zero``) and ``x0.<id>`` starting points.
    ``grid`` overrides ``dim`` for ``l2`` problems.
    """
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProblemDefinitionError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        kv[" ".join(key.split())] = value

    try:
        name = kv.get("name", "problem")
        kind = kv.get("space", "euclidean")
        if kind == "l2":
            dim = int(grid or kv.get("dim", 101))
            space = InnerProductSpace.l2(dim)
        elif kind == "euclidean":
            dim = int(kv["dim"])
            space = InnerProductSpace.euclidean(dim)
        else:
            raise ProblemDefinitionError(f"unknown space {kind!r}")

        def matrix(key):
            vals = _floats(kv[key])
            if len(vals) != dim * dim:
                raise ProblemDefinitionError(f"{key} needs {dim * dim} entries, got {len(vals)}")
            return np.array(vals).reshape(dim, dim)

        def vector(key):
            vals = _floats(kv[key])
            if len(vals) != dim:
                raise ProblemDefinitionError(f"{key} needs {dim} entries, got {len(vals)}")
            return np.array(vals)

        lip = _floats(kv["lipschitz"]) if "lipschitz" in kv else None
        gamma = float(kv["strong_modulus"]) if "strong_modulus" in kv else None
        if "matrix P" in kv:
            bif = affine_bifunction(matrix("matrix P"), matrix("matrix Q"), vector("vector q"), space)
            if lip is not None or gamma is not None:
                c = tuple(lip) * (2 // len(lip)) if lip else bif.lipschitz
                bif = Bifunction(bif.eval, bif.partial_subgrad, lipschitz=c,
                                 strong_modulus=gamma, curvature=bif.curvature)
        elif "operator" in kv:
            op_name = kv["operator"]
            if op_name == "radial":
                op = radial_operator
            elif op_name == "damped":
                op = damped_operator
            elif op_name == "linear":
                op = linear_operator(matrix("matrix M"), vector("vector b"))
            else:
                raise ProblemDefinitionError(f"unknown operator {op_name!r}")
            if lip is not None and len(lip) != 1:
                raise ProblemDefinitionError("operators take a single Lipschitz constant L")
            bif = vi_bifunction(op, L=lip[0] if lip else None, gamma=gamma)
        else:
            raise ProblemDefinitionError("need either matrices P, Q and vector q, or an operator")

        m = _SET_RE.match(kv["set"].strip())
        if not m:
            raise ProblemDefinitionError(f"cannot parse set {kv['set']!r}")
        args = _floats(m.group(2))
        set_kind = m.group(1)
        if set_kind == "box_halfspace" and len(args) == 3:
            C = BoxHalfspace(*args, space)
        elif set_kind == "ball" and len(args) == 1:
            C = Ball(args[0], space)
        elif set_kind == "box" and len(args) == 2:
            C = Box(*args, space)
        else:
            raise ProblemDefinitionError(f"wrong number of arguments for {set_kind}")

        known = None
        if "known_solution" in kv:
            if kv["known_solution"] != "zero":
                raise ProblemDefinitionError("known_solution supports only 'zero'")
            known = space.zeros()

        starts = l2_starting_functions(space) if kind == "l2" else {}
        for key, value in kv.items():
            if key.startswith("x0."):
                starts[key[3:]] = Vector(vector(key), space)
    except KeyError as exc:
        raise ProblemDefinitionError(f"missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, ProblemDefinitionError):
            raise
        raise ProblemDefinitionError(str(exc)) from None
    return ProblemInstance(name, bif, C, space, known_solution=known, starting_points=starts)


def shipped_problem_files() -> dict[str, Path]:
    root = resources.files("golden_ep") / _DATA
    return {Path(p.name).stem: Path(str(p)) for p in root.iterdir() if p.name.endswith(".txt")}


def load_problem(source: str | Path, grid: int | None = None) -> ProblemInstance:
    """Load a problem from a file path or the name of a shipped problem file."""
    path = Path(source)
    if not path.exists():
        shipped = shipped_problem_files()
        if str(source) not in shipped:
            raise ProblemDefinitionError(f"no problem file or shipped problem named {source!r}")
        path = shipped[str(source)]
    return parse_problem(path.read_text(encoding="utf-8"), grid=grid)
