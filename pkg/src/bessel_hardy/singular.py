"""Principal-value singular integrals: Hilbert, Telyakovskii, comparison ops.

The Hilbert transform here follows the convention WITHOUT the 1/pi factor:
``H f(x) = p.v. int f(t)/(x - t) dt``.  The Telyakovskii (local Hilbert)
transform is the same kernel restricted to the window (x/2, 3x/2), which is
symmetric about x, so its exact PV log term vanishes.

PV integrals are realized by singularity subtraction: the integrand
``(f(t) - f(x))/(x - t)`` is smooth (its value at t = x is -f'(x)), so the
trapezoid rule converges at O(h^2); the subtracted mass is restored through
the exact log term of the window.  All operators are also available as
dense matrices acting on grid value vectors, which is how the 2D product
functionals consume them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grids import SampledFunction1D
from .kernels import riesz_apply, riesz_kernel, riesz_kernel_regular


@dataclass(frozen=True)
class PVConfig:
    """Principal-value discretization controls.

    exclusion_radius (in cells) only matters with subtraction off, where the
    kernel sum simply skips |t - x| <= radius * h (diagnostic mode).
    """

    exclusion_radius: float = 1.0
    subtraction: bool = True

    def __post_init__(self):
        if self.exclusion_radius < 0.5:
            raise ValueError("exclusion radius must be at least half a cell")


DEFAULT_PV = PVConfig()

_MATRIX_CACHE = {}


def clear_caches():
    _MATRIX_CACHE.clear()


def _grid_key(grid):
    return (grid.n, float(grid.points[0]), float(grid.points[-1]), grid.kind)


def _interp_coeffs(points, a):
    """Nodes and weights expressing f(a) by linear interpolation."""
    k = int(np.searchsorted(points, a))
    if k == 0:
        return [(0, 1.0)]
    if k >= points.size:
        return [(points.size - 1, 1.0)]
    if points[k] == a:
        return [(k, 1.0)]
    theta = (a - points[k - 1]) / (points[k] - points[k - 1])
    return [(k - 1, 1.0 - theta), (k, theta)]


def _pv_row(grid, x, a, b):
    """Dense row r with  sum_j r_j f_j ~ p.v. int_a^b f(t)/(x - t) dt.

    x must lie strictly inside (a, b) and be a grid node (rows are built for
    on-grid evaluation; off-grid points go through the resampling path).
    """
    pts = grid.points
    n = pts.size
    row = np.zeros(n)
    i = int(np.argmin(np.abs(pts - x)))
    a = max(a, pts[0])
    b = min(b, pts[-1])
    inside = np.nonzero((pts > a) & (pts < b))[0]
    if inside.size < 2:
        return row
    # trapezoid coefficients of the subtracted integrand on interior nodes
    t_in = pts[inside]
    seg = np.diff(t_in)
    coeff = np.zeros(inside.size)
    coeff[:-1] += seg / 2.0
    coeff[1:] += seg / 2.0
    # partial end cells, with interpolated endpoint values
    d_left = t_in[0] - a
    d_right = b - t_in[-1]
    coeff[0] += d_left / 2.0
    coeff[-1] += d_right / 2.0

    def add_g(node, weight):
        # g(t_node) = (f_node - f_i)/(x - t_node); node == i handled by slope
        if node == i:
            il = max(i - 1, 0)
            ir = min(i + 1, n - 1)
            slope = 1.0 / (pts[ir] - pts[il])
            row[ir] -= weight * slope
            row[il] += weight * slope
        else:
            k = weight / (x - pts[node])
            row[node] += k
            row[i] -= k

    for node, weight in zip(inside, coeff):
        add_g(node, weight)
    # endpoint g(a), g(b) via interpolated f; an endpoint sitting on x takes
    # the slope limit g(x) = -f'(x) like the singular node
    for endpoint, dwidth in ((a, d_left), (b, d_right)):
        if dwidth <= 0.0:
            continue
        if abs(x - endpoint) < 1e-12 * max(abs(x), 1.0):
            add_g(i, dwidth / 2.0)
            continue
        kval = 1.0 / (x - endpoint)
        for node, cw in _interp_coeffs(pts, endpoint):
            row[node] += (dwidth / 2.0) * kval * cw
        row[i] -= (dwidth / 2.0) * kval
    # exact log term of the subtracted constant; half-cell regularized ends
    h = grid.spacing
    left_gap = max(x - a, h / 2.0)
    right_gap = max(b - x, h / 2.0)
    row[i] += math.log(left_gap / right_gap)
    return row


def _smooth_window_row(grid, a, b, kernel_fn):
    """Row for int_a^b K(t) f(t) dt with a smooth kernel on (a, b)."""
    pts = grid.points
    row = np.zeros(pts.size)
    a = max(a, pts[0])
    b = min(b, pts[-1])
    if b <= a:
        return row
    inside = np.nonzero((pts > a) & (pts < b))[0]
    if inside.size == 0:
        # window inside one cell: single trapezoid on interpolated ends
        for endpoint, other in ((a, b), (b, a)):
            for node, cw in _interp_coeffs(pts, endpoint):
                row[node] += (b - a) / 2.0 * kernel_fn(endpoint) * cw
        return row
    t_in = pts[inside]
    seg = np.diff(t_in)
    kv = kernel_fn(t_in)
    row[inside[:-1]] += seg / 2.0 * kv[:-1]
    row[inside[1:]] += seg / 2.0 * kv[1:]
    for endpoint, node_idx, dwidth in (
        (a, inside[0], t_in[0] - a),
        (b, inside[-1], b - t_in[-1]),
    ):
        if dwidth <= 0.0:
            continue
        row[node_idx] += dwidth / 2.0 * kernel_fn(pts[node_idx])
        for node, cw in _interp_coeffs(pts, endpoint):
            row[node] += dwidth / 2.0 * kernel_fn(endpoint) * cw
    return row


def _resampled_pv(f, x, a, b, npts=2001):
    """PV integral by resampling f onto a uniform local window (off-grid x)."""
    pts = f.grid.points
    a = max(a, pts[0])
    b = min(b, pts[-1])
    t = np.linspace(a, b, npts)
    h = t[1] - t[0]
    ft = np.interp(t, pts, f.values)
    fx = float(np.interp(x, pts, f.values))
    g = np.empty_like(t)
    mask = np.abs(x - t) > 1e-12 * (b - a)
    g[mask] = (ft[mask] - fx) / (x - t[mask])
    if np.any(~mask):
        slope = float(np.interp(x + h, pts, f.values) - np.interp(x - h, pts, f.values)) / (2 * h)
        g[~mask] = -slope
    left_gap = max(x - a, h / 2.0)
    right_gap = max(b - x, h / 2.0)
    return float(np.trapezoid(g, t) + fx * math.log(left_gap / right_gap))


def hilbert_transform(f, x, cfg=None):
    """H f(x) = p.v. int over the grid window of f(t)/(x - t) dt (no 1/pi)."""
    cfg = cfg or DEFAULT_PV
    pts = f.grid.points
    a, b = pts[0], pts[-1]
    if not (a < x < b):
        raise ValueError("evaluation point must be inside the grid window")
    if not cfg.subtraction:
        h = f.grid.spacing
        keep = np.abs(pts - x) > cfg.exclusion_radius * h
        return float(np.sum(f.grid.weights[keep] * f.values[keep] / (x - pts[keep])))
    i = int(np.argmin(np.abs(pts - x)))
    if abs(pts[i] - x) < 1e-12 * max(abs(x), 1.0):
        return float(_pv_row(f.grid, pts[i], a, b) @ f.values)
    return _resampled_pv(f, x, a, b)


def hilbert_matrix(grid):
    """Dense PV Hilbert matrix over the grid window.

    Boundary rows use the half-cell regularized log term; they are what the
    kernel-route Riesz needs so its two near-singular halves cancel there.
    """
    key = ("hilbert", _grid_key(grid))
    mat = _MATRIX_CACHE.get(key)
    if mat is None:
        pts = grid.points
        mat = np.zeros((grid.n, grid.n))
        for i in range(grid.n):
            mat[i] = _pv_row(grid, pts[i], pts[0], pts[-1])
        _MATRIX_CACHE[key] = mat
    return mat


def hilbert_window_pv(f):
    """PV window Hilbert transform of f at every grid node."""
    return hilbert_matrix(f.grid) @ f.values


def telyakovskii_window(x):
    return x / 2.0, 3.0 * x / 2.0


def telyakovskii_clipped(grid, x):
    """True when (x/2, 3x/2) is not contained in the grid window."""
    a, b = telyakovskii_window(x)
    return bool(a < grid.points[0] or b > grid.points[-1])


def telyakovskii(f, x, cfg=None):
    """Local Hilbert transform T f(x) = p.v. int_{x/2}^{3x/2} f(t)/(x-t) dt."""
    cfg = cfg or DEFAULT_PV
    a, b = telyakovskii_window(x)
    pts = f.grid.points
    if not cfg.subtraction:
        h = f.grid.spacing
        keep = (np.abs(pts - x) > cfg.exclusion_radius * h) & (pts > a) & (pts < b)
        return float(np.sum(f.grid.weights[keep] * f.values[keep] / (x - pts[keep])))
    i = int(np.argmin(np.abs(pts - x)))
    if abs(pts[i] - x) < 1e-12 * max(abs(x), 1.0):
        return float(_pv_row(f.grid, pts[i], a, b) @ f.values)
    return _resampled_pv(f, x, a, b)


def telyakovskii_matrix(grid):
    """Rows of T at every node, plus the window-clipped row mask."""
    key = ("tely", _grid_key(grid))
    entry = _MATRIX_CACHE.get(key)
    if entry is None:
        pts = grid.points
        mat = np.zeros((grid.n, grid.n))
        clipped = np.zeros(grid.n, dtype=bool)
        for i in range(grid.n):
            a, b = telyakovskii_window(pts[i])
            clipped[i] = telyakovskii_clipped(grid, pts[i])
            mat[i] = _pv_row(grid, pts[i], a, b)
        entry = (mat, clipped)
        _MATRIX_CACHE[key] = entry
    return entry


_COMPARISON_WINDOWS = {
    "I1": lambda x: (0.0, x / 2.0),
    "I2": lambda x: (3.0 * x / 2.0, np.inf),
    "I3": lambda x: (x / 2.0, 3.0 * x / 2.0),
}


def _comparison_kernel(which, x):
    if which in ("I1", "I2"):
        return lambda t: t / (x * x - t * t)
    return lambda t: 1.0 / (x + t)


def comparison_matrix(grid, which):
    """Dense matrix of I1, I2 or I3 (nonsingular comparison operators)."""
    if which not in _COMPARISON_WINDOWS:
        raise ValueError("which must be one of I1, I2, I3")
    key = ("cmp", which, _grid_key(grid))
    mat = _MATRIX_CACHE.get(key)
    if mat is None:
        pts = grid.points
        mat = np.zeros((grid.n, grid.n))
        for i, x in enumerate(pts):
            a, b = _COMPARISON_WINDOWS[which](x)
            mat[i] = _smooth_window_row(grid, a, b, _comparison_kernel(which, x))
        _MATRIX_CACHE[key] = mat
    return mat


def comparison_ops(f, which, x):
    """I1, I2, I3 of the half-line comparison family at a point.

    I1 = int_0^{x/2} f(t) t/(x^2-t^2) dt, I2 the same kernel on (3x/2, inf),
    I3 = int_{x/2}^{3x/2} f(t)/(x+t) dt.  The J variants are these operators
    in the second coordinate of a 2D function.
    """
    if which not in _COMPARISON_WINDOWS:
        raise ValueError("which must be one of I1, I2, I3")
    a, b = _COMPARISON_WINDOWS[which](x)
    row = _smooth_window_row(f.grid, a, b, _comparison_kernel(which, x))
    return float(row @ f.values)


def l1_ratio(grid, which, values):
    """||I_k f||_1 / ||f||_1 on the grid window for a sampled f >= 0."""
    out = np.abs(comparison_matrix(grid, which) @ values)
    num = float(grid.weights @ out)
    den = float(grid.weights @ np.abs(values))
    return num / den


def riesz_split(p, f, x):
    """Four-piece splitting of the kernel-route Riesz transform at a node.

    A1 and A3 integrate the kernel over (0, x/2] and [3x/2, inf) clipped to
    the window; A4 = (1/pi) T f(x) carries the principal value (the kernel
    diagonal is +(1/pi)/(x - y)); A2 is the regular near-diagonal
    remainder.  A1+A2+A3+A4 matches the kernel-route riesz_apply at the
    node.
    """
    pts = f.grid.points
    i = int(np.argmin(np.abs(pts - x)))
    if abs(pts[i] - x) > 1e-9 * max(abs(x), 1.0):
        raise ValueError("riesz_split evaluates at grid nodes")
    x = float(pts[i])
    a, b = telyakovskii_window(x)
    row1 = _smooth_window_row(f.grid, 0.0, a, lambda t: riesz_kernel(p, x, t))
    row3 = _smooth_window_row(f.grid, b, np.inf, lambda t: riesz_kernel(p, x, t))
    a1 = float(row1 @ f.values)
    a3 = float(row3 @ f.values)

    off = min(f.grid.spacing / (2.0 * math.e), 0.5 * x)

    def reg_kernel(t):
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(arr)
        near = np.abs(arr - x) < off
        out[~near] = riesz_kernel_regular(p, x, arr[~near])
        if np.any(near):
            out[near] = 0.5 * (
                riesz_kernel_regular(p, x, x + off) + riesz_kernel_regular(p, x, x - off)
            )
        return out if np.ndim(t) else float(out[0])

    row2 = _smooth_window_row(f.grid, a, b, reg_kernel)
    a2 = float(row2 @ f.values)
    a4 = telyakovskii(f, x) / math.pi
    return a1, a2, a3, a4


def riesz_split_consistency(p, f, x):
    """|A1+A2+A3+A4 - kernel-route R f(x)| at a node (diagnostic)."""
    parts = riesz_split(p, f, x)
    full = riesz_apply(p, f, route="kernel")
    i = int(np.argmin(np.abs(f.grid.points - x)))
    return abs(sum(parts) - full.values[i])
