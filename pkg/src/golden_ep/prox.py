"""Projections onto the shipped convex sets and the strongly convex prox step.

Every algorithm in :mod:`golden_ep.solvers` reduces to one or more calls of
:func:`solve_prox`, i.e. ``argmin_{y in C} lam*f(anchor, y) + 0.5*||y - center||^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from .linalg import Vector, dot, norm

if TYPE_CHECKING:
    from .problems import Bifunction, FeasibleSet

DYKSTRA_TOL = 1e-12
DYKSTRA_MAX_SWEEPS = 10_000
PROX_TOL = 1e-10
PROX_MAX_ITER = 100_000


class ProxError(RuntimeError):
    """An inner solver ran out of budget.

    ``certificate`` holds the last optimality (or change) measure seen.
    """

    def __init__(self, message: str, certificate: float):
        super().__init__(f"{message} (last certificate {certificate:.3e})")
        self.certificate = certificate


class ProjectionError(ProxError):
    pass


def _as_bounds(bound, x: Vector) -> np.ndarray:
    return np.broadcast_to(np.asarray(bound, dtype=float), x.coords.shape)


def project_box(x: Vector, lo, hi) -> Vector:
    lo_, hi_ = _as_bounds(lo, x), _as_bounds(hi, x)
    if np.any(lo_ > hi_):
        raise ValueError("box bounds must satisfy lo <= hi")
    return Vector(np.clip(x.coords, lo_, hi_), x.space)


def project_ball(x: Vector, radius: float, center: Vector | None = None) -> Vector:
    if radius <= 0:
        raise ValueError("radius must be positive")
    d = x if center is None else x - center
    n = norm(d)
    if n <= radius:
        return x
    d = (radius / n) * d
    return d if center is None else center + d


def project_halfspace(x: Vector, a: Vector, b: float) -> Vector:
    """Project onto ``{y : <a, y> >= b}``."""
    aa = dot(a, a)
    if aa == 0.0:
        raise ValueError("halfspace normal must be nonzero")
    gap = b - dot(a, x)
    if gap <= 0.0:
        return x
    return x + (gap / aa) * a


def _dykstra(x: np.ndarray, proj_a, proj_b, tol: float, max_sweeps: int):
    # Dykstra keeps one correction term per set; this is what makes the
    # limit the projection of x rather than just some point of A & B.
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    cur = x
    for sweep in range(1, max_sweeps + 1):
        y = proj_a(cur + p)
        p = cur + p - y
        nxt = proj_b(y + q)
        q = y + q - nxt
        change = float(np.max(np.abs(nxt - cur)))
        cur = nxt
        if change < tol and float(np.max(np.abs(nxt - y))) < tol:
            return cur, sweep
    raise ProjectionError(f"Dykstra did not converge in {max_sweeps} sweeps", change)


def project_polytope(
    x: Vector,
    box: tuple[Any, Any],
    halfspace: tuple[Vector, float],
    tol: float = DYKSTRA_TOL,
    max_sweeps: int = DYKSTRA_MAX_SWEEPS,
) -> Vector:
    """Project onto ``box & {y : <a, y> >= b}`` by Dykstra's algorithm.

    Parameters
    ----------
    x : Vector
        Point to project.
    box : (lo, hi)
        Scalar or per-coordinate bounds.
    halfspace : (a, b)
        Normal vector and level of the constraint ``<a, y> >= b``.
    """
    lo, hi = _as_bounds(box[0], x), _as_bounds(box[1], x)
    if np.any(lo > hi):
        raise ValueError("box bounds must satisfy lo <= hi")
    a, b = halfspace
    x._check(a)
    w = x.space.weights
    av = a.coords
    aa = float(np.dot(w * av, av))
    if aa == 0.0:
        raise ValueError("halfspace normal must be nonzero")

    # Fast exits keep the common cases exact: already feasible, or only one
    # of the two constraints binds.
    clipped = np.clip(x.coords, lo, hi)
    if float(np.dot(w * av, clipped)) >= b:
        return Vector(clipped, x.space)
    shifted = x.coords + ((b - float(np.dot(w * av, x.coords))) / aa) * av
    if np.all(shifted >= lo) and np.all(shifted <= hi):
        return Vector(shifted, x.space)

    def proj_b(z):
        gap = b - float(np.dot(w * av, z))
        return z if gap <= 0.0 else z + (gap / aa) * av

    out, _ = _dykstra(x.coords, lambda z: np.clip(z, lo, hi), proj_b, tol, max_sweeps)
    return Vector(out, x.space)


@dataclass(frozen=True)
class ProxProblem:
    """``argmin_{y in C} stepsize*f(anchor, y) + 0.5*||y - center||^2``."""

    anchor: Vector
    center: Vector
    stepsize: float
    bifunction: "Bifunction"
    set: "FeasibleSet"

    def __post_init__(self):
        if not self.stepsize > 0:
            raise ValueError(f"prox stepsize must be positive, got {self.stepsize}")

    def objective(self, y: Vector) -> float:
        d = y - self.center
        return self.stepsize * self.bifunction(self.anchor, y) + 0.5 * dot(d, d)

    def gradient(self, y: Vector) -> Vector:
        return self.stepsize * self.bifunction.partial_subgrad(self.anchor, y) + (y - self.center)

    def certificate(self, y: Vector) -> float:
        """Fixed-point residual ``||y - P_C(y - grad h(y))||``."""
        return norm(y - self.set.project(y - self.gradient(y)))


@dataclass(frozen=True)
class ProxResult:
    minimizer: Vector
    inner_iterations: int
    certificate: float


def solve_prox(
    p: ProxProblem,
    inner_tol: float = PROX_TOL,
    max_iter: int = PROX_MAX_ITER,
    method: str = "auto",
) -> ProxResult:
    """Solve the prox subproblem ``p``.

    With ``method="auto"`` a bifunction of the form ``<A x, y - x>`` is solved
    exactly as ``P_C(center - stepsize * A(anchor))``. Everything else goes
    through projected gradient with step ``1/(1 + stepsize*curvature)``,
    which contracts because the objective is 1-strongly convex.
    ``method="gradient"`` forces the iterative route.
    """
    if inner_tol <= 0:
        raise ValueError("inner_tol must be positive")
    if method not in ("auto", "gradient"):
        raise ValueError(f"unknown prox method {method!r}")
    f = p.bifunction
    if method == "auto" and f.operator is not None:
        y = p.set.project(p.center - p.stepsize * f.operator(p.anchor))
        return ProxResult(y, 1, p.certificate(y))

    curvature = f.curvature if f.curvature is not None else (0.0 if f.operator is not None else None)
    if curvature is None:
        raise ValueError("projected-gradient prox needs a curvature bound on the bifunction")
    step = 1.0 / (1.0 + p.stepsize * curvature)

    y = p.set.project(p.center)
    cert = np.inf
    for it in range(1, max_iter + 1):
        y_new = p.set.project(y - step * p.gradient(y))
        moved = norm(y_new - y)
        y = y_new
        # ||y - P(y - g)|| <= ||y - P(y - s g)|| / s for s <= 1
        if moved <= step * inner_tol:
            cert = p.certificate(y)
            if cert <= inner_tol:
                return ProxResult(y, it, cert)
        else:
            cert = moved / step
    raise ProxError(f"prox did not reach {inner_tol:g} in {max_iter} iterations", cert)
