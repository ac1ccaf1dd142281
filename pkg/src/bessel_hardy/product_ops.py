"""Two-parameter operators on (0,inf)^2: square functions, maximal functions,
conjugate quadruples, Cauchy-Riemann residuals and the H^1 functionals.

Everything is built from 1D operator matrices applied along each axis of a
SampledFunction2D (values V -> M1 @ V @ M2.T), with scale integrals and
suprema taken over a log-spaced lattice of (t1, t2) pairs.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d, uniform_filter1d

from .grids import SampledFunction1D, SampledFunction2D, lp_norm, mirror_grid, odd_extension
from .kernels import operator_matrix
from .singular import hilbert_matrix, telyakovskii_matrix


@dataclass(frozen=True)
class ConeParams:
    """Aperture and scale window of the discrete cones.

    aperture 1 matches the cones |x_i - y_i| < t_i of the area and maximal
    functions; the scale lattice is log-spaced with the given density.
    """

    aperture: float = 1.0
    t_min: float = 2.0 ** -6
    t_max: float = 2.0 ** 3
    scales_per_octave: int = 8

    def __post_init__(self):
        if self.aperture <= 0 or self.t_min <= 0 or self.t_max <= self.t_min:
            raise ValueError("need aperture > 0 and 0 < t_min < t_max")
        if self.scales_per_octave < 1:
            raise ValueError("scales_per_octave must be >= 1")


DEFAULT_CONE = ConeParams()


def scale_lattice(cone):
    """Log-spaced scales and trapezoid weights for integrals in d(log t)."""
    octaves = math.log2(cone.t_max / cone.t_min)
    n = max(int(round(octaves * cone.scales_per_octave)) + 1, 2)
    ts = np.geomspace(cone.t_min, cone.t_max, n)
    dv = math.log(ts[1] / ts[0])
    wv = np.full(n, dv)
    wv[0] *= 0.5
    wv[-1] *= 0.5
    return ts, wv


def _apply_pair(m1, values, m2):
    return m1 @ values @ m2.T


def tensor_semigroup(p, f, kind, t1, t2):
    """e^{-t1 S} (x) e^{-t2 S} f (or the Poisson pair), axis by axis."""
    if kind not in ("heat", "poisson"):
        raise ValueError("kind must be heat or poisson")
    m1 = operator_matrix(p, f.grid1, kind, t1)
    m2 = operator_matrix(p, f.grid2, kind, t2)
    return SampledFunction2D(f.grid1, f.grid2, _apply_pair(m1, f.values, m2))


def _tdt_kind(kind, time_scaling):
    if kind == "poisson":
        return "tdt-poisson"
    if kind == "heat":
        return "tdt-heat" if time_scaling == "linear" else "tdt-heat-sqrt"
    raise ValueError("kind must be heat or poisson")


def _box_integral(arr, axis, halfwidth, spacing):
    """Integral over the sliding window |y - x| <= halfwidth, zero outside."""
    cells = max(int(round(halfwidth / spacing)), 0)
    size = 2 * cells + 1
    return uniform_filter1d(arr, size=size, axis=axis, mode="constant") * size * spacing


def g_function(p, f, kind="poisson", cone=DEFAULT_CONE, time_scaling="linear"):
    """Littlewood-Paley square function g(f) on the 2D grid.

    g(f)^2 = sum over the scale lattice of |t1 dt1 T_t1  t2 dt2 T_t2 f|^2
    with the d(log t1) d(log t2) measure.  time_scaling='squared' switches
    the heat version to T_t = e^{-t^2 S}.
    """
    ts, wv = scale_lattice(cone)
    okind = _tdt_kind(kind, time_scaling)
    m1 = [operator_matrix(p, f.grid1, okind, t) for t in ts]
    m2 = [operator_matrix(p, f.grid2, okind, t) for t in ts]
    acc = np.zeros_like(f.values)
    for i, a in enumerate(m1):
        left = a @ f.values
        for j, b in enumerate(m2):
            frame = left @ b.T
            acc += (wv[i] * wv[j]) * frame * frame
    return SampledFunction2D(f.grid1, f.grid2, np.sqrt(acc))


def area_function_S(p, f, kind="poisson", cone=DEFAULT_CONE, time_scaling="linear"):
    """Area function S f: the cone-averaged version of the square function."""
    ts, wv = scale_lattice(cone)
    okind = _tdt_kind(kind, time_scaling)
    h1 = f.grid1.spacing
    h2 = f.grid2.spacing
    m1 = [operator_matrix(p, f.grid1, okind, t) for t in ts]
    m2 = [operator_matrix(p, f.grid2, okind, t) for t in ts]
    acc = np.zeros_like(f.values)
    for i, a in enumerate(m1):
        left = a @ f.values
        for j, b in enumerate(m2):
            frame = left @ b.T
            sq = frame * frame
            sq = _box_integral(sq, 0, cone.aperture * ts[i], h1)
            sq = _box_integral(sq, 1, cone.aperture * ts[j], h2)
            acc += (wv[i] / ts[i]) * (wv[j] / ts[j]) * sq
    return SampledFunction2D(f.grid1, f.grid2, np.sqrt(acc))


def _gradient1(arr, spacing):
    return np.gradient(arr, spacing, axis=0)


def _gradient2(arr, spacing):
    return np.gradient(arr, spacing, axis=1)


def area_function_Su(p, f, cone=DEFAULT_CONE):
    """Area function S_u built from full (t, y) gradients of u = P_t1 P_t2 f.

    Time derivatives are central differences across the scale lattice and
    space derivatives central differences on the grid, so the first and
    last scales only serve as difference neighbors.
    """
    ts, wv = scale_lattice(cone)
    h1, h2 = f.grid1.spacing, f.grid2.spacing
    p1 = [operator_matrix(p, f.grid1, "poisson", t) for t in ts]
    p2 = [operator_matrix(p, f.grid2, "poisson", t) for t in ts]
    dp1 = [
        (p1[i + 1] - p1[i - 1]) / (ts[i + 1] - ts[i - 1])
        for i in range(1, len(ts) - 1)
    ]
    dp2 = [
        (p2[j + 1] - p2[j - 1]) / (ts[j + 1] - ts[j - 1])
        for j in range(1, len(ts) - 1)
    ]
    acc = np.zeros_like(f.values)
    for i in range(1, len(ts) - 1):
        a = p1[i] @ f.values
        da = dp1[i - 1] @ f.values
        ga = _gradient1(a, h1)
        for j in range(1, len(ts) - 1):
            u_tt = da @ dp2[j - 1].T
            u_ty = _gradient2(da @ p2[j].T, h2)
            u_yt = ga @ dp2[j - 1].T
            u_yy = _gradient2(ga @ p2[j].T, h2)
            sq = u_tt * u_tt + u_ty * u_ty + u_yt * u_yt + u_yy * u_yy
            sq = _box_integral(sq, 0, cone.aperture * ts[i], h1)
            sq = _box_integral(sq, 1, cone.aperture * ts[j], h2)
            acc += (ts[i] * wv[i]) * (ts[j] * wv[j]) * sq
    return SampledFunction2D(f.grid1, f.grid2, np.sqrt(acc))


def maximal(p, f, which="NP", cone=DEFAULT_CONE):
    """Product maximal functions over the discrete scale lattice.

    'Rh'/'RP' are the radial suprema sup_t |T_t1 T_t2 f(x)|; 'Nh'/'NP' the
    non-tangential versions with sup over |y_i - x_i| < aperture * t_i.
    """
    if which not in ("Nh", "NP", "Rh", "RP"):
        raise ValueError("which must be one of Nh, NP, Rh, RP")
    kind = "heat" if which.endswith("h") else "poisson"
    nontangential = which.startswith("N")
    ts, _ = scale_lattice(cone)
    h1, h2 = f.grid1.spacing, f.grid2.spacing
    m1 = [operator_matrix(p, f.grid1, kind, t) for t in ts]
    m2 = [operator_matrix(p, f.grid2, kind, t) for t in ts]
    out = np.zeros_like(f.values)
    for i, a in enumerate(m1):
        left = a @ f.values
        for j, b in enumerate(m2):
            frame = np.abs(left @ b.T)
            if nontangential:
                c1 = max(int(cone.aperture * ts[i] / h1 + 0.5), 0)
                c2 = max(int(cone.aperture * ts[j] / h2 + 0.5), 0)
                if c1:
                    frame = maximum_filter1d(frame, 2 * c1 + 1, axis=0, mode="constant")
                if c2:
                    frame = maximum_filter1d(frame, 2 * c2 + 1, axis=1, mode="constant")
            np.maximum(out, frame, out=out)
    return SampledFunction2D(f.grid1, f.grid2, out)


@dataclass(frozen=True)
class ConjugateQuadruple:
    """Poisson and conjugate-Poisson frames u, v, w, z on a scale lattice.

    u = P P f, v = Q P f, w = P Q f, z = Q Q f with the first operator in
    the pair acting on axis 1; arrays are indexed (i_t1, j_t2, x1, x2).
    The two scale axes may carry different lattices.
    """

    scales: np.ndarray
    scales2: np.ndarray
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    grid1: object = None
    grid2: object = None

    @property
    def uniform_scales(self):
        ok = True
        for s in (self.scales, self.scales2):
            gaps = np.diff(s)
            ok &= bool(gaps.size == 0 or np.max(np.abs(gaps - gaps[0])) <= 1e-10 * gaps[0])
        return ok


def conjugate_quadruple(p, f, scales, scales2=None):
    """Build the conjugate quadruple for f on the given t-lattice(s)."""
    scales = np.asarray(scales, dtype=float)
    scales2 = scales if scales2 is None else np.asarray(scales2, dtype=float)
    k1, k2 = scales.size, scales2.size
    n1, n2 = f.values.shape
    if k1 * k2 * n1 * n2 > 2 ** 27:
        raise ValueError("quadruple lattice too large; reduce scales or grid")
    pm1 = [operator_matrix(p, f.grid1, "poisson", t) for t in scales]
    pm2 = [operator_matrix(p, f.grid2, "poisson", t) for t in scales2]
    qm1 = [operator_matrix(p, f.grid1, "conj", t) for t in scales]
    qm2 = [operator_matrix(p, f.grid2, "conj", t) for t in scales2]
    u = np.empty((k1, k2, n1, n2))
    v = np.empty_like(u)
    w = np.empty_like(u)
    z = np.empty_like(u)
    for i in range(k1):
        pv = pm1[i] @ f.values
        qv = qm1[i] @ f.values
        for j in range(k2):
            u[i, j] = pv @ pm2[j].T
            w[i, j] = pv @ qm2[j].T
            v[i, j] = qv @ pm2[j].T
            z[i, j] = qv @ qm2[j].T
    return ConjugateQuadruple(scales, scales2, u, v, w, z, f.grid1, f.grid2)


def cr_residual(q, p):
    """Max interior residual of the eight Cauchy-Riemann type equations.

    Axis-1 pairs (u, v) and (w, z) satisfy
    d_x1 a - d_t1 b = (lam/x1) a and d_t1 a + d_x1 b = -(lam/x1) b; axis-2
    pairs (u, w) and (v, z) the analogous system in (t2, x2).  Derivatives
    are central differences; the reported max runs over the interior of
    both lattices.
    """
    lam = p.lam
    ts1 = q.scales
    ts2 = q.scales2
    x1 = q.grid1.points
    x2 = q.grid2.points
    res = []

    def interior(arr):
        return arr[1:-1, 1:-1, 2:-2, 2:-2]

    for a, b in ((q.u, q.v), (q.w, q.z)):
        da_x1 = np.gradient(a, x1, axis=2)
        db_t1 = np.gradient(b, ts1, axis=0)
        da_t1 = np.gradient(a, ts1, axis=0)
        db_x1 = np.gradient(b, x1, axis=2)
        lam_over_x = lam / x1[None, None, :, None]
        res.append(interior(da_x1 - db_t1 - lam_over_x * a))
        res.append(interior(da_t1 + db_x1 + lam_over_x * b))
    for a, b in ((q.u, q.w), (q.v, q.z)):
        da_x2 = np.gradient(a, x2, axis=3)
        db_t2 = np.gradient(b, ts2, axis=1)
        da_t2 = np.gradient(a, ts2, axis=1)
        db_x2 = np.gradient(b, x2, axis=3)
        lam_over_x = lam / x2[None, None, None, :]
        res.append(interior(da_x2 - db_t2 - lam_over_x * a))
        res.append(interior(da_t2 + db_x2 + lam_over_x * b))
    return float(max(np.max(np.abs(r)) for r in res))


@dataclass(frozen=True)
class SubharmonicityResult:
    exponent: float
    floor: float
    min_laplacian: float
    tolerance: float
    passed: bool
    checked_points: int


def subharmonicity_check(q, p, exponent, floor=1e-6):
    """Discrete Laplacian check of |F|^p >= subharmonic for F = (u, v), (w, z).

    The 5-point Laplacian in (t1, x1) of |F|^exponent is evaluated at every
    interior lattice point with |F| >= floor; pass means the minimum stays
    above -tol where tol is 10x a Richardson estimate of the truncation.
    Requires a uniform scale lattice.
    """
    if exponent < p.lam / (2.0 * p.lam - 1.0) - 1e-12:
        raise ValueError("exponent below the subharmonicity threshold lam/(2lam-1)")
    if not q.uniform_scales:
        raise ValueError("subharmonicity check needs a uniform scale lattice")
    ht = float(q.scales[1] - q.scales[0])
    hx = q.grid1.spacing

    def lap_stats(a, b, stride=1):
        big_f = np.sqrt(a * a + b * b)
        g = big_f ** exponent
        s = stride
        lap = (
            (g[2 * s :, :, s:-s, :] - 2.0 * g[s:-s, :, s:-s, :] + g[: -2 * s, :, s:-s, :])
            / (s * ht) ** 2
            + (g[s:-s, :, 2 * s :, :] - 2.0 * g[s:-s, :, s:-s, :] + g[s:-s, :, : -2 * s, :])
            / (s * hx) ** 2
        )
        mask = big_f[s:-s, :, s:-s, :] >= floor
        return lap, mask

    worst = np.inf
    count = 0
    tol_est = 0.0
    for a, b in ((q.u, q.v), (q.w, q.z)):
        lap1, mask1 = lap_stats(a, b, stride=1)
        if np.any(mask1):
            worst = min(worst, float(np.min(lap1[mask1])))
            count += int(np.sum(mask1))
        lap2, mask2 = lap_stats(a, b, stride=2)
        # Richardson: lap_h = L + c h^2, lap_2h = L + 4 c h^2
        inner = lap1[1:-1, :, 1:-1, :]
        est = np.max(np.abs(inner - lap2)) / 3.0 if lap2.size else 0.0
        tol_est = max(tol_est, float(est))
    tol = 10.0 * tol_est
    return SubharmonicityResult(
        exponent=exponent,
        floor=floor,
        min_laplacian=worst if count else 0.0,
        tolerance=tol,
        passed=bool(count == 0 or worst >= -tol),
        checked_points=count,
    )


# ---------------------------------------------------------------------------
# Merryfield-type inequality (1D version)


def standard_bump(x):
    """Smooth even bump c exp(-1/(1-x^2)) on (-1,1) with unit integral."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out / 0.4439938161680794  # int_{-1}^{1} exp(-1/(1-x^2)) dx


def _bump_derivative(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - xi ** 2)) * (-2.0 * xi / (1.0 - xi ** 2) ** 2)
    return out / 0.4439938161680794


def _conv_matrix(grid, t, kernel):
    diff = (grid.points[:, None] - grid.points[None, :]) / t
    return kernel(diff) / t * grid.weights[None, :]


def merryfield_ratio(p, f, g_cut, cone=DEFAULT_CONE, bump=None, bump_deriv=None):
    """LHS/RHS of the one-parameter Merryfield-type inequality for u = P_t f.

    LHS = int |grad u|^2 |phi_t * g|^2 t dx dt; RHS = int f^2 g^2 dx plus
    int |u|^2 |Q_t(g)|^2 dx dt with the three-slot symbol
    Q_t(g) = (t d_t(phi_t*g), t d_x(phi_t*g), psi_t*g), psi(x) = x phi(x).
    Returns 0 when both sides vanish.
    """
    phi = bump or standard_bump
    dphi = bump_deriv or (_bump_derivative if bump is None else None)
    if dphi is None:
        raise ValueError("custom bumps need an explicit derivative")
    grid = f.grid
    ts, wv = scale_lattice(cone)
    w = grid.weights
    lhs = 0.0
    rhs = float(np.sum(w * f.values ** 2 * g_cut.values ** 2))
    for i, t in enumerate(ts):
        pm = operator_matrix(p, grid, "poisson", t)
        dm = operator_matrix(p, grid, "dt-poisson", t)
        u = pm @ f.values
        du_t = dm @ f.values
        du_x = np.gradient(u, grid.points)
        conv = _conv_matrix(grid, t, phi) @ g_cut.values
        # t d_t (phi_t * g): kernel -(1/t)(phi(s) + s phi'(s)) under x->s=(x-y)/t
        ker_dt = _conv_matrix(grid, t, lambda s: -(phi(s) + s * dphi(s))) @ g_cut.values
        ker_dx = _conv_matrix(grid, t, dphi) @ g_cut.values
        psi = _conv_matrix(grid, t, lambda s: s * phi(s)) @ g_cut.values
        grad2 = du_t ** 2 + du_x ** 2
        lhs += float(np.sum(w * grad2 * conv ** 2)) * t * (wv[i] * t)
        q2 = ker_dt ** 2 + ker_dx ** 2 + psi ** 2
        rhs += float(np.sum(w * u ** 2 * q2)) * (wv[i] * t)
    if lhs == 0.0 and rhs == 0.0:
        return 0.0
    return lhs / rhs


# ---------------------------------------------------------------------------
# H^1 functionals and the comparison dashboard

HARDY_KINDS = ("g", "S", "Su", "Nh", "NP", "Rh", "RP", "Riesz", "Tely", "Odd")


def _axis_l1(grid1, grid2, values):
    return float(grid1.weights @ np.abs(values) @ grid2.weights)


def _riesz_functional(p, f):
    r1 = operator_matrix(p, f.grid1, "riesz")
    r2 = operator_matrix(p, f.grid2, "riesz")
    v = f.values
    total = _axis_l1(f.grid1, f.grid2, v)
    total += _axis_l1(f.grid1, f.grid2, r1 @ v)
    total += _axis_l1(f.grid1, f.grid2, v @ r2.T)
    total += _axis_l1(f.grid1, f.grid2, r1 @ v @ r2.T)
    return total


def _tely_functional(p, f, return_flags=False):
    t1, clip1 = telyakovskii_matrix(f.grid1)
    t2, clip2 = telyakovskii_matrix(f.grid2)
    w1 = np.where(clip1, 0.0, f.grid1.weights)
    w2 = np.where(clip2, 0.0, f.grid2.weights)
    v = f.values
    total = _axis_l1(f.grid1, f.grid2, v)
    total += float(w1 @ np.abs(t1 @ v) @ f.grid2.weights)
    total += float(f.grid1.weights @ np.abs(v @ t2.T) @ w2)
    total += float(w1 @ np.abs(t1 @ v @ t2.T) @ w2)
    if return_flags:
        return total, bool(np.any(clip1) or np.any(clip2))
    return total


def _odd_functional(f):
    fo = odd_extension(f)
    h1 = hilbert_matrix(fo.grid1)
    h2 = hilbert_matrix(fo.grid2)
    v = fo.values
    total = _axis_l1(fo.grid1, fo.grid2, v)
    total += _axis_l1(fo.grid1, fo.grid2, h1 @ v)
    total += _axis_l1(fo.grid1, fo.grid2, v @ h2.T)
    total += _axis_l1(fo.grid1, fo.grid2, h1 @ v @ h2.T)
    return total


def odd_hilbert_norms(f):
    """The four L^1 norms (f_o, H1 f_o, H2 f_o, H1 H2 f_o) on the window."""
    fo = odd_extension(f)
    h1 = hilbert_matrix(fo.grid1)
    h2 = hilbert_matrix(fo.grid2)
    v = fo.values
    return (
        _axis_l1(fo.grid1, fo.grid2, v),
        _axis_l1(fo.grid1, fo.grid2, h1 @ v),
        _axis_l1(fo.grid1, fo.grid2, v @ h2.T),
        _axis_l1(fo.grid1, fo.grid2, h1 @ v @ h2.T),
    )


def hardy_functional(p, f, kind, cone=DEFAULT_CONE):
    """One of the ten H^1-type functionals of f on its grid window.

    g/S/Su and the four maximal kinds are L^1 norms of the corresponding
    field; Riesz and Tely sum the L^1 norms of f and its one- and
    two-parameter transforms; Odd uses the double Hilbert transforms of the
    product odd extension on the mirrored window.
    """
    if kind == "g":
        return lp_norm(g_function(p, f, "poisson", cone), 1)
    if kind == "S":
        return lp_norm(area_function_S(p, f, "poisson", cone), 1)
    if kind == "Su":
        return lp_norm(area_function_Su(p, f, cone), 1)
    if kind in ("Nh", "NP", "Rh", "RP"):
        return lp_norm(maximal(p, f, kind, cone), 1)
    if kind == "Riesz":
        return _riesz_functional(p, f)
    if kind == "Tely":
        return _tely_functional(p, f)
    if kind == "Odd":
        return _odd_functional(f)
    raise ValueError(f"unknown hardy functional kind: {kind}")


def hardy_dashboard(p, family, cone=DEFAULT_CONE, kinds=HARDY_KINDS):
    """Table of functional values: {function name: {kind: value}}."""
    return {
        name: {kind: hardy_functional(p, f, kind, cone) for kind in kinds}
        for name, f in family.items()
    }
