"""Sampled functions on (0, inf) and (0, inf)^2 with trapezoidal quadrature.

Grids carry their own quadrature weights so every integral in the package
is a plain weighted sum.  Trapezoidal weights are used throughout: the
singular-integral modules need local, positive weights, and second order
is enough at desk scale.
"""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_1D = (1e-3, 30.0, 2048)
DEFAULT_2D = (1e-3, 16.0, 256)


def trapezoid_weights(points):
    """Trapezoid weights for an increasing (possibly nonuniform) point set."""
    points = np.asarray(points, dtype=float)
    w = np.empty_like(points)
    w[1:-1] = 0.5 * (points[2:] - points[:-2])
    w[0] = 0.5 * (points[1] - points[0])
    w[-1] = 0.5 * (points[-1] - points[-2])
    return w


@dataclass(frozen=True)
class Grid1D:
    """Strictly increasing sample points with positive quadrature weights."""

    points: np.ndarray
    weights: np.ndarray
    kind: str = "uniform"

    def __post_init__(self):
        points = np.ascontiguousarray(self.points, dtype=float)
        weights = np.ascontiguousarray(self.weights, dtype=float)
        if points.ndim != 1 or points.shape != weights.shape:
            raise ValueError("points and weights must be matching 1-d arrays")
        if not np.all(np.diff(points) > 0.0):
            raise ValueError("grid points must be strictly increasing")
        if not np.all(weights > 0.0):
            raise ValueError("quadrature weights must be positive")
        if self.kind == "uniform":
            gaps = np.diff(points)
            if gaps.size and np.max(np.abs(gaps - gaps[0])) > 1e-12 * gaps[0]:
                raise ValueError("uniform grid has unequal spacing")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self):
        return self.points.size

    @property
    def spacing(self):
        """Mean spacing; exact cell size for uniform grids."""
        return float((self.points[-1] - self.points[0]) / (self.n - 1))

    def index_window(self, a, b):
        """Indices of points strictly inside (a, b)."""
        return np.nonzero((self.points > a) & (self.points < b))[0]


@dataclass(frozen=True)
class HalfLineGrid(Grid1D):
    """Grid on (0, inf): all points positive."""

    def __post_init__(self):
        super().__post_init__()
        if self.points[0] <= 0.0:
            raise ValueError("half-line grid points must be positive")


def uniform_grid(lo=DEFAULT_1D[0], hi=DEFAULT_1D[1], n=DEFAULT_1D[2]):
    points = np.linspace(lo, hi, n)
    return HalfLineGrid(points, trapezoid_weights(points), kind="uniform")


def log_grid(lo, hi, n):
    points = np.geomspace(lo, hi, n)
    return HalfLineGrid(points, trapezoid_weights(points), kind="log")


def mirror_grid(grid):
    """Full-line grid {-x_n..-x_1, x_1..x_n} for even/odd extensions."""
    points = np.concatenate([-grid.points[::-1], grid.points])
    return Grid1D(points, trapezoid_weights(points), kind="mirrored")


@dataclass(frozen=True)
class SampledFunction1D:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.shape != self.grid.points.shape:
            raise ValueError("values length must match the grid")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SampledFunction2D:
    grid1: Grid1D
    grid2: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.shape != (self.grid1.n, self.grid2.n):
            raise ValueError("values shape must be (len(grid1), len(grid2))")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", values)


def sample1d(grid, fn):
    return SampledFunction1D(grid, fn(grid.points))


def sample2d(grid1, grid2, fn):
    x1 = grid1.points[:, None]
    x2 = grid2.points[None, :]
    return SampledFunction2D(grid1, grid2, fn(x1, x2))


def quadrature(f):
    """Integral of a sampled function over its grid window."""
    if isinstance(f, SampledFunction1D):
        return float(f.grid.weights @ f.values)
    return float(f.grid1.weights @ f.values @ f.grid2.weights)


def lp_norm(f, p):
    """L^p norm over the grid window, p >= 1."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if isinstance(f, SampledFunction1D):
        return float((f.grid.weights @ np.abs(f.values) ** p) ** (1.0 / p))
    integral = f.grid1.weights @ np.abs(f.values) ** p @ f.grid2.weights
    return float(integral ** (1.0 / p))


def even_extension(f):
    """Even reflection of a half-line function onto the mirrored grid."""
    grid = mirror_grid(f.grid)
    values = np.concatenate([f.values[::-1], f.values])
    return SampledFunction1D(grid, values)


def odd_extension(f):
    """Product odd extension: sign pattern (+, -, +, -) over the quadrants.

    The value at (x1, x2) with x1, x2 > 0 is kept; reflecting one
    coordinate flips the sign, reflecting both keeps it.
    """
    g1 = mirror_grid(f.grid1)
    g2 = mirror_grid(f.grid2)
    v = f.values
    top = np.concatenate([v[::-1, ::-1], -v[::-1, :]], axis=1)   # x1 < 0
    bottom = np.concatenate([-v[:, ::-1], v], axis=1)            # x1 > 0
    return SampledFunction2D(g1, g2, np.concatenate([top, bottom], axis=0))


def _half_grid_for(points):
    gaps = np.diff(points)
    kind = "uniform" if np.max(np.abs(gaps - gaps[0])) <= 1e-12 * gaps[0] else "log"
    return HalfLineGrid(points, trapezoid_weights(points), kind=kind)


def restrict_to_quadrant(f):
    """Restriction of a mirrored-grid 2D function to the first quadrant."""
    n1 = f.grid1.n // 2
    n2 = f.grid2.n // 2
    g1 = _half_grid_for(f.grid1.points[n1:])
    g2 = _half_grid_for(f.grid2.points[n2:])
    return SampledFunction2D(g1, g2, f.values[n1:, n2:])
