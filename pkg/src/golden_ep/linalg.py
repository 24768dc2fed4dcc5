"""Dense vectors over Euclidean space or a trapezoid discretisation of L2([0, 1]).

A :class:`Vector` is an immutable coordinate array tied to an
:class:`InnerProductSpace`. The space fixes the quadrature weights used by
:func:`dot`, so the same solver code runs on R^n and on sampled functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

EUCLIDEAN = "euclidean"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class InnerProductSpace:
    """Coordinate space with a diagonal weighting ``<a, b> = sum w_i a_i b_i``.

    Parameters
    ----------
    dim : int
        Number of coordinates.
    kind : {"euclidean", "trapezoid"}
        ``"euclidean"`` uses unit weights. ``"trapezoid"`` samples [0, 1] on a
        uniform grid of ``dim`` points and uses composite trapezoid weights.
    """

    dim: int
    kind: str = EUCLIDEAN

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        if self.kind not in (EUCLIDEAN, TRAPEZOID):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == TRAPEZOID and self.dim < 2:
            raise ValueError("a trapezoid grid needs at least 2 points")

    @classmethod
    def euclidean(cls, dim: int) -> "InnerProductSpace":
        return cls(dim, EUCLIDEAN)

    @classmethod
    def l2(cls, n_points: int = 101) -> "InnerProductSpace":
        """Trapezoid discretisation of L2([0, 1]) on ``n_points`` nodes."""
        return cls(n_points, TRAPEZOID)

    @cached_property
    def weights(self) -> np.ndarray:
        if self.kind == EUCLIDEAN:
            w = np.ones(self.dim)
        else:
            h = 1.0 / (self.dim - 1)
            w = np.full(self.dim, h)
            w[0] = w[-1] = 0.5 * h
        w.setflags(write=False)
        return w

    @cached_property
    def grid(self) -> np.ndarray:
        """Sample nodes ``t_i``; only meaningful for the trapezoid space."""
        if self.kind == EUCLIDEAN:
            raise AttributeError("a Euclidean space has no grid")
        t = np.linspace(0.0, 1.0, self.dim)
        t.setflags(write=False)
        return t

    def vector(self, coords) -> "Vector":
        return Vector(coords, self)

    def zeros(self) -> "Vector":
        return Vector(np.zeros(self.dim), self)

    def sample(self, func) -> "Vector":
        """Evaluate ``func`` on the grid nodes (trapezoid space only)."""
        return Vector(func(self.grid), self)


class Vector:
    """Immutable element of an :class:`InnerProductSpace`.

    Arithmetic (``+``, ``-``, scalar ``*`` and ``/``) returns new vectors and
    refuses to mix spaces. Non-finite coordinates are rejected on construction.
    """

    __slots__ = ("coords", "space")

    def __init__(self, coords, space: InnerProductSpace):
        arr = np.array(coords, dtype=np.float64).reshape(-1)
        if arr.shape[0] != space.dim:
            raise ValueError(f"expected {space.dim} coordinates, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("vector has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    def _check(self, other: "Vector") -> None:
        if not isinstance(other, Vector):
            raise TypeError(f"expected a Vector, got {type(other).__name__}")
        if other.space != self.space:
            raise ValueError(f"space mismatch: {self.space} vs {other.space}")

    def __add__(self, other):
        self._check(other)
        return Vector(self.coords + other.coords, self.space)

    def __sub__(self, other):
        self._check(other)
        return Vector(self.coords - other.coords, self.space)

    def __mul__(self, scalar):
        if isinstance(scalar, Vector):
            return NotImplemented
        return Vector(float(scalar) * self.coords, self.space)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Vector(self.coords / float(scalar), self.space)

    def __neg__(self):
        return Vector(-self.coords, self.space)

    def __len__(self):
        return self.space.dim

    def __iter__(self):
        return iter(self.coords.tolist())

    def __repr__(self):
        return f"Vector({np.array2string(self.coords, precision=6)}, {self.space.kind})"

    def __eq__(self, other):
        return (
            isinstance(other, Vector)
            and other.space == self.space
            and np.array_equal(self.coords, other.coords)
        )

    __hash__ = None

    def to_row(self) -> str:
        return ",".join("%.17g" % c for c in self.coords)

    @classmethod
    def from_row(cls, row: str, space: InnerProductSpace) -> "Vector":
        return cls([float(tok) for tok in row.strip().split(",") if tok.strip()], space)


def dot(a: Vector, b: Vector) -> float:
    a._check(b)
    return float(np.dot(a.space.weights * a.coords, b.coords))


def norm(a: Vector) -> float:
    return float(np.sqrt(max(dot(a, a), 0.0)))


def dist(a: Vector, b: Vector) -> float:
    return norm(a - b)


def combine(t: float, a: Vector, b: Vector) -> Vector:
    """Return ``t*a + (1-t)*b``."""
    a._check(b)
    return Vector(t * a.coords + (1.0 - t) * b.coords, a.space)


def write_rows(path, vectors: Iterable[Vector]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in vectors:
            fh.write(v.to_row() + "\n")


def read_rows(path, space: InnerProductSpace) -> list[Vector]:
    with open(path, encoding="utf-8") as fh:
        return [Vector.from_row(line, space) for line in fh if line.strip()]
