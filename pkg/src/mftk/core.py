"""Shared domain types: grids, fields, direction sets, lambda grids, sinograms.

All types are immutable after construction (arrays are frozen with
``writeable=False``) so they can be shared freely across parallel workers.
Grid point coordinates are cell centers: ``x_i = origin + (i + 0.5) * spacing``.
Field values are stored flat in row-major order with the last axis fastest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, roots_jacobi, roots_legendre


class ConfigurationError(ValueError):
    """Invalid construction parameters (bad grid, counts, ranges)."""


class DomainError(ValueError):
    """A point lies outside the domain of a generating family."""


class DataFormatError(ValueError):
    """Malformed or truncated file content."""


class CoverageError(RuntimeError):
    """Lambda grid does not cover the needed theta range (numerical failure)."""


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n (2*pi for n=2, 4*pi for n=3)."""
    return 2.0 * math.pi ** (n / 2.0) / math.exp(gammaln(n / 2.0))


def _as_readonly(a, dtype=float) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid over a box domain.

    Parameters
    ----------
    dims : per-axis sample counts (each >= 2).
    origin : per-axis lower corner of the box.
    spacing : per-axis step (> 0).

    The dimension ``n`` is ``len(dims)``; 2 or 3 for reconstruction, up to 5
    accepted for diagnostics-only use.
    """

    dims: tuple[int, ...]
    origin: tuple[float, ...]
    spacing: tuple[float, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        origin = tuple(float(v) for v in self.origin)
        spacing = tuple(float(v) for v in self.spacing)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        n = len(dims)
        if n < 1 or n > 5:
            raise ConfigurationError(f"grid dimension {n} not in 1..5")
        if len(origin) != n or len(spacing) != n:
            raise ConfigurationError("dims/origin/spacing length mismatch")
        if any(d < 2 for d in dims):
            raise ConfigurationError(f"every axis needs >= 2 samples, got {dims}")
        if any(not (s > 0.0) for s in spacing):
            raise ConfigurationError(f"spacing must be positive, got {spacing}")

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis_coords(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        return self.origin[axis] + (np.arange(self.dims[axis]) + 0.5) * self.spacing[axis]

    def points(self) -> np.ndarray:
        """All cell centers, shape (size, n), row-major (last axis fastest)."""
        axes = [self.axis_coords(i) for i in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.asarray(self.origin)
        hi = lo + np.asarray(self.dims) * np.asarray(self.spacing)
        return lo, hi


@dataclass(frozen=True)
class ScalarField:
    """Sampled function on a GridSpec; values flat, row-major, last axis fastest."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = _as_readonly(self.values)
        if vals.ndim != 1 or vals.size != self.grid.size:
            raise ConfigurationError(
                f"values length {vals.size} != grid size {self.grid.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("field values must be finite")
        object.__setattr__(self, "values", vals)

    def as_array(self) -> np.ndarray:
        """Values reshaped to the grid dims (read-only view)."""
        return self.values.reshape(self.grid.dims)

    def with_values(self, values) -> "ScalarField":
        return ScalarField(self.grid, values)


def field_new(grid: GridSpec, fill: float = 0.0) -> ScalarField:
    """Constant field on a grid."""
    return ScalarField(grid, np.full(grid.size, float(fill)))


@dataclass(frozen=True)
class DirectionSet:
    """Quadrature nodes and weights on the unit sphere S^{n-1}.

    Weights carry solid-angle units and sum to the sphere surface measure.
    """

    n: int
    nodes: np.ndarray    # (count, n) unit vectors
    weights: np.ndarray  # (count,) positive

    def __post_init__(self):
        nodes = _as_readonly(self.nodes)
        weights = _as_readonly(self.weights)
        if nodes.ndim != 2 or nodes.shape[1] != self.n:
            raise ConfigurationError("nodes must have shape (count, n)")
        if weights.shape != (nodes.shape[0],):
            raise ConfigurationError("weights must match node count")
        norms = np.linalg.norm(nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ConfigurationError("direction nodes must be unit vectors (1e-12)")
        if np.any(weights <= 0.0):
            raise ConfigurationError("weights must be positive")
        area = sphere_area(self.n)
        if abs(float(weights.sum()) - area) > 1e-9 * area:
            raise ConfigurationError(
                f"weights sum {weights.sum():.15g} != |S^{self.n - 1}| = {area:.15g}"
            )
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def count(self) -> int:
        return self.nodes.shape[0]

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())


def direction_set_circle(count: int) -> DirectionSet:
    """Uniform rule on S^1: exact for trigonometric polynomials of degree < count."""
    if count < 4:
        raise ConfigurationError(f"circle rule needs count >= 4, got {count}")
    phi = 2.0 * np.pi * np.arange(count) / count
    nodes = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    weights = np.full(count, 2.0 * np.pi / count)
    return DirectionSet(2, nodes, weights)


def circle_angles(dirs: DirectionSet) -> np.ndarray:
    """Polar angles of a 2-D direction set."""
    if dirs.n != 2:
        raise ConfigurationError("circle_angles needs n = 2")
    return np.arctan2(dirs.nodes[:, 1], dirs.nodes[:, 0])


def direction_set_sphere(n: int, polar_count: int, azimuth_count: int) -> DirectionSet:
    """Product rule on S^{n-1} for n >= 3.

    Polar factor: Gauss-Legendre in cos(theta) for n = 3, Gauss-Jacobi with
    weight (1-t^2)^((n-3)/2) for n > 3. Recursion closes on the uniform circle
    rule, so the construction works for any n up to the diagnostics cap.
    """
    if n < 3 or n > 5:
        raise ConfigurationError(f"sphere rule supports n in 3..5, got {n}")
    if polar_count < 4 or azimuth_count < 4:
        raise ConfigurationError("polar and azimuth counts must be >= 4")
    if n == 3:
        sub = direction_set_circle(azimuth_count)
    else:
        sub = direction_set_sphere(n - 1, polar_count, azimuth_count)
    alpha = (n - 3) / 2.0
    if alpha == 0.0:
        t, wt = roots_legendre(polar_count)
    else:
        t, wt = roots_jacobi(polar_count, alpha, alpha)
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - t**2))
    # omega = (sin(theta) * omega', cos(theta)), weights multiply
    nodes = np.empty((polar_count * sub.count, n))
    weights = np.empty(polar_count * sub.count)
    for i in range(polar_count):
        block = slice(i * sub.count, (i + 1) * sub.count)
        nodes[block, : n - 1] = sin_t[i] * sub.nodes
        nodes[block, n - 1] = t[i]
        weights[block] = wt[i] * sub.weights
    # renormalize unit length against roundoff in the product
    nodes /= np.linalg.norm(nodes, axis=1, keepdims=True)
    return DirectionSet(n, nodes, weights)


@dataclass(frozen=True)
class LambdaGrid:
    """Uniform sample grid for the level parameter lambda."""

    lambda0: float
    dlambda: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "lambda0", float(self.lambda0))
        object.__setattr__(self, "dlambda", float(self.dlambda))
        object.__setattr__(self, "count", int(self.count))
        if not (self.dlambda > 0.0):
            raise ConfigurationError(f"dlambda must be > 0, got {self.dlambda}")
        if self.count < 8:
            raise ConfigurationError(f"lambda count must be >= 8, got {self.count}")

    @property
    def lambda_end(self) -> float:
        return self.lambda0 + (self.count - 1) * self.dlambda

    def values(self) -> np.ndarray:
        return self.lambda0 + self.dlambda * np.arange(self.count)

    @staticmethod
    def from_range(lo: float, hi: float, count: int) -> "LambdaGrid":
        if not (hi > lo):
            raise ConfigurationError("lambda range must have hi > lo")
        return LambdaGrid(lo, (hi - lo) / (count - 1), count)


@dataclass(frozen=True)
class Sinogram:
    """Sampled transform values over (direction, lambda).

    ``values`` has shape (ndirs, count): direction-major storage.
    """

    family_tag: str
    directions: DirectionSet
    lambdas: LambdaGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _as_readonly(self.values)
        shape = (self.directions.count, self.lambdas.count)
        if vals.shape != shape:
            raise ConfigurationError(f"sinogram values must have shape {shape}")
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("sinogram values must be finite")
        object.__setattr__(self, "values", vals)

    def with_values(self, values) -> "Sinogram":
        return Sinogram(self.family_tag, self.directions, self.lambdas, values)
