"""Dyadic product combinatorics: rectangles, strong maximal operator,
Journe quantities, the stopping-time atomic decomposition and the
Carleson-energy BMO estimator.

Dyadic intervals are the half-open (k/2^n, (k+1)/2^n], k >= 0.  Open sets
are rasterized onto the finest participating generation, so containment
and measure queries are exact bitmap operations.  The continuum suprema
(strong maximal operator, BMO candidate search) are discretized over
cell-cornered rectangles, which is exact for cellwise-constant data.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .grids import HalfLineGrid, SampledFunction2D, trapezoid_weights
from .kernels import operator_matrix

# Knuth MMIX linear congruential generator; fixed here so seeded dyadic
# samples are reproducible across implementations (see README).
_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_M = 2 ** 64


class Lcg:
    """64-bit LCG (Knuth MMIX constants); uniform() uses the top 53 bits."""

    def __init__(self, seed):
        self.state = seed % _LCG_M

    def next_raw(self):
        self.state = (_LCG_A * self.state + _LCG_C) % _LCG_M
        return self.state

    def uniform(self):
        return (self.next_raw() >> 11) / float(1 << 53)

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi]."""
        return lo + int(self.uniform() * (hi - lo + 1))


@dataclass(frozen=True)
class DyadicInterval:
    """The interval (k/2^n, (k+1)/2^n]; n may be negative (long intervals)."""

    n: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("dyadic intervals sit on the half-line: k >= 0")

    @property
    def length(self):
        return 2.0 ** -self.n

    @property
    def left(self):
        return self.k * self.length

    @property
    def right(self):
        return (self.k + 1) * self.length

    def parent(self):
        return DyadicInterval(self.n - 1, self.k // 2)

    def contains(self, other):
        return other.n >= self.n and (other.k >> (other.n - self.n)) == self.k


@dataclass(frozen=True)
class DyadicRectangle:
    i1: DyadicInterval
    i2: DyadicInterval

    @property
    def area(self):
        return self.i1.length * self.i2.length

    def contains(self, other):
        return self.i1.contains(other.i1) and self.i2.contains(other.i2)


class DyadicOpenSet:
    """Finite union of dyadic rectangles, rasterized at a common generation.

    The bitmap covers (0, extent1] x (0, extent2] with cells of side
    2^{-gen}; overlapping input rectangles are deduplicated by the raster.
    """

    def __init__(self, rectangles=(), gen=None, bitmap=None, extent=None):
        self.rectangles = tuple(rectangles)
        if bitmap is not None:
            self.gen = int(gen)
            self.bitmap = np.asarray(bitmap, dtype=bool)
            return
        if not self.rectangles:
            raise ValueError("need rectangles or an explicit bitmap")
        self.gen = max(max(r.i1.n, r.i2.n) for r in self.rectangles)
        if gen is not None:
            self.gen = max(self.gen, int(gen))
        if extent is None:
            e1 = max(r.i1.right for r in self.rectangles)
            e2 = max(r.i2.right for r in self.rectangles)
        else:
            e1, e2 = extent
        scale = 2 ** self.gen
        n1 = int(math.ceil(e1 * scale))
        n2 = int(math.ceil(e2 * scale))
        self.bitmap = np.zeros((n1, n2), dtype=bool)
        for r in self.rectangles:
            s1 = 2 ** (self.gen - r.i1.n)
            s2 = 2 ** (self.gen - r.i2.n)
            self.bitmap[r.i1.k * s1 : (r.i1.k + 1) * s1, r.i2.k * s2 : (r.i2.k + 1) * s2] = True

    @property
    def cell_side(self):
        return 2.0 ** -self.gen

    @property
    def measure(self):
        return float(np.sum(self.bitmap)) * self.cell_side ** 2

    def contains_rectangle(self, rect):
        """Exact containment of a dyadic rectangle with gens <= self.gen."""
        if rect.i1.n > self.gen or rect.i2.n > self.gen:
            raise ValueError("rectangle finer than the raster")
        s1 = 2 ** (self.gen - rect.i1.n)
        s2 = 2 ** (self.gen - rect.i2.n)
        a, b = rect.i1.k * s1, (rect.i1.k + 1) * s1
        c, d = rect.i2.k * s2, (rect.i2.k + 1) * s2
        if b > self.bitmap.shape[0] or d > self.bitmap.shape[1]:
            return False
        return bool(np.all(self.bitmap[a:b, c:d]))

    @cached_property
    def dilate(self):
        """The half-threshold dilate {M_s(chi_Omega) > 1/2} as a bitmap set."""
        return DyadicOpenSet(
            self.rectangles, gen=self.gen, bitmap=covered_set(self.bitmap, 0.5)
        )


def covered_set(bitmap, threshold):
    """Cells covered by some axis-parallel rectangle with mean > threshold.

    Exact over all rectangles with corners on the cell lattice: for every
    top row r0 the 1D problem over column windows reduces to prefix-min /
    suffix-max of the threshold-shifted prefix sums, and the OR over bottom
    rows is a reversed cumulative OR.
    """
    dens = bitmap.astype(float)
    n1, n2 = dens.shape
    out = np.zeros((n1, n2), dtype=bool)
    colpref = np.concatenate([np.zeros((1, n2)), np.cumsum(dens, axis=0)], axis=0)
    shift = threshold * np.arange(n2 + 1)
    for r0 in range(n1):
        heights = np.arange(r0 + 1, n1 + 1)
        means = (colpref[heights] - colpref[r0]) / (heights - r0)[:, None]
        q = np.concatenate(
            [np.zeros((heights.size, 1)), np.cumsum(means, axis=1)], axis=1
        ) - shift[None, :]
        prefmin = np.minimum.accumulate(q, axis=1)
        sufmax = np.flip(np.maximum.accumulate(np.flip(q, axis=1), axis=1), axis=1)
        cov = sufmax[:, 1:] > prefmin[:, :-1] + 1e-12
        reach = np.flip(np.logical_or.accumulate(np.flip(cov, axis=0), axis=0), axis=0)
        out[r0:n1] |= reach
    return out


def strong_maximal(f, x1, x2):
    """Discrete strong maximal function at a point.

    Supremum over all rectangles with corners on the grid-cell lattice that
    contain the point, of the cell average of |f|.  Cost grows like n^3 per
    point; meant for desk-scale grids.
    """
    vals = np.abs(f.values)
    i0 = int(np.argmin(np.abs(f.grid1.points - x1)))
    j0 = int(np.argmin(np.abs(f.grid2.points - x2)))
    n1, n2 = vals.shape
    pref = np.zeros((n1 + 1, n2))
    pref[1:] = np.cumsum(vals, axis=0)
    best = 0.0
    cols = np.arange(n2 + 1)
    for a in range(i0 + 1):
        bands = pref[i0 + 1 : n1 + 1] - pref[a]          # (b - a in rows)
        rows = np.arange(i0 + 1, n1 + 1) - a
        qp = np.concatenate([np.zeros((bands.shape[0], 1)), np.cumsum(bands, axis=1)], axis=1)
        # averages over column ranges [c, d) containing j0
        left = qp[:, : j0 + 1]                           # c = 0..j0
        right = qp[:, j0 + 1 :]                          # d = j0+1..n2
        sums = right[:, None, :] - left[:, :, None]      # (band, c, d)
        lens = cols[j0 + 1 :][None, :] - cols[: j0 + 1][:, None]
        avg = sums / (rows[:, None, None] * lens[None, :, :])
        best = max(best, float(np.max(avg)))
    return best


def _containment_tables(omega, n_lo1, n_lo2):
    """C[(n1, n2)][k1, k2] = True iff the dyadic rect at that gen is in omega."""
    g = omega.gen
    bm = omega.bitmap
    tables = {}
    for n1 in range(n_lo1, g + 1):
        s1 = 2 ** (g - n1)
        m1 = bm.shape[0] // s1
        rows = bm[: m1 * s1].reshape(m1, s1, bm.shape[1]).all(axis=1)
        for n2 in range(n_lo2, g + 1):
            s2 = 2 ** (g - n2)
            m2 = bm.shape[1] // s2
            tables[(n1, n2)] = rows[:, : m2 * s2].reshape(m1, m2, s2).all(axis=2)
    return tables


def _coarsest_gens(omega):
    # coarsest generation whose intervals still fit inside the raster window
    n_lo1 = int(math.ceil(-math.log2(omega.bitmap.shape[0] * omega.cell_side)))
    n_lo2 = int(math.ceil(-math.log2(omega.bitmap.shape[1] * omega.cell_side)))
    return n_lo1, n_lo2


def _table_true(tables, key, a, b):
    t = tables.get(key)
    return t is not None and a < t.shape[0] and b < t.shape[1] and bool(t[a, b])


def maximal_subrectangles(omega, mode="all"):
    """m(Omega), m1(Omega) or m2(Omega) of a dyadic open set.

    mode 'all': rectangles not extendable within Omega in either direction;
    'dir1'/'dir2': maximal in the x1/x2 direction only (the paper's m1/m2).
    """
    if mode not in ("all", "dir1", "dir2"):
        raise ValueError("mode must be all, dir1 or dir2")
    n_lo1, n_lo2 = _coarsest_gens(omega)
    tables = _containment_tables(omega, n_lo1, n_lo2)
    out = []
    for (n1, n2), table in tables.items():
        inside = np.argwhere(table)
        if inside.size == 0:
            continue
        for k1, k2 in inside:
            rect = DyadicRectangle(DyadicInterval(n1, int(k1)), DyadicInterval(n2, int(k2)))
            ext1 = _table_true(tables, (n1 - 1, n2), k1 // 2, k2)
            ext2 = _table_true(tables, (n1, n2 - 1), k1, k2 // 2)
            if mode == "dir1" and not ext1:
                out.append(rect)
            elif mode == "dir2" and not ext2:
                out.append(rect)
            elif mode == "all" and not ext1 and not ext2:
                out.append(rect)
    return out


def journe_gamma(omega, rect, axis):
    """gamma of a maximal subrectangle: how far it stretches inside the dilate.

    gamma_1 (axis=1) extends the first interval through its dyadic
    ancestors l with l x J still inside the dilate of Omega; the result is
    sup |l| / |I| >= 1.  axis=2 is symmetric.
    """
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    dil = omega.dilate
    side = rect.i1 if axis == 1 else rect.i2
    other = rect.i2 if axis == 1 else rect.i1
    best = 1.0
    interval = side
    while True:
        nxt = interval.parent()
        candidate = (
            DyadicRectangle(nxt, other) if axis == 1 else DyadicRectangle(other, nxt)
        )
        if nxt.n < -30 or not dil.contains_rectangle(candidate):
            break
        interval = nxt
        best = interval.length / side.length
    return best


def journe_ratio(omega, delta=1.0):
    """max over directions of sum |R| gamma^{-delta} / |Omega| (Journe)."""
    area = omega.measure
    best = 0.0
    for mode, axis in (("dir2", 1), ("dir1", 2)):
        total = 0.0
        for rect in maximal_subrectangles(omega, mode):
            total += rect.area * journe_gamma(omega, rect, axis) ** -delta
        best = max(best, total / area)
    return best


def random_dyadic_open_set(rng, depth, max_rects=8):
    """Seeded random union of dyadic rectangles inside the unit square."""
    count = rng.randint(2, max_rects)
    rects = []
    for _ in range(count):
        n1 = rng.randint(1, depth)
        n2 = rng.randint(1, depth)
        k1 = rng.randint(0, 2 ** n1 - 1)
        k2 = rng.randint(0, 2 ** n2 - 1)
        rects.append(DyadicRectangle(DyadicInterval(n1, k1), DyadicInterval(n2, k2)))
    return DyadicOpenSet(rects, gen=depth)


# ---------------------------------------------------------------------------
# stopping-time atomic decomposition and BMO energy


def dyadic_aligned_grid(extent, n):
    """Uniform cell-centered grid on (0, extent): points (j + 1/2) extent/n.

    Grid cells then tile dyadic intervals exactly whenever n / extent is a
    power of two multiple of the finest generation in play.
    """
    h = extent / n
    points = (np.arange(n) + 0.5) * h
    return HalfLineGrid(points, trapezoid_weights(points), kind="uniform")


@dataclass(frozen=True)
class AtomicDecomposition:
    coefficients: np.ndarray          # lambda_ell, one per retained level
    atoms: tuple                      # SampledFunction2D per level
    supports: tuple                   # DyadicOpenSet (dilated Omega_ell) per level
    levels: np.ndarray                # the ell values
    s_function: SampledFunction2D     # the discrete square function S(f)
    reconstruction: SampledFunction2D

    @property
    def coefficient_sum(self):
        return float(np.sum(np.abs(self.coefficients)))


def _generation_range(extent, n_cells, depth):
    n_fine = int(math.log2(n_cells / 2))  # finest gen with >= 2 cells per interval
    n_fine = min(n_fine + int(round(math.log2(1.0 / extent))), depth)
    n_coarse = -int(round(math.log2(extent)))
    return n_coarse, min(max(n_fine, n_coarse), depth)


def _octave_samples(length):
    """Two-point Gauss-Legendre nodes/weights for int_{L/2}^{L} dt/t."""
    half = math.log(2.0) / 2.0
    offs = half / math.sqrt(3.0)
    mid = math.log(length) - half
    ts = (math.exp(mid - offs), math.exp(mid + offs))
    return ts, (half, half)


def _qt_fields(p, f, gens):
    """(t sqrt(S) e^{-t sqrt(S)})-fields per generation pair and t-sample.

    Yields (n1, n2, wa, wb, field) for every generation pair of intervals
    (lengths 2^{-n1}, 2^{-n2}) and Gauss sample pair in the scale octaves.
    """
    for n1 in range(gens[0], gens[1] + 1):
        ts1, ws1 = _octave_samples(2.0 ** -n1)
        for n2 in range(gens[0], gens[1] + 1):
            ts2, ws2 = _octave_samples(2.0 ** -n2)
            for ta, wa in zip(ts1, ws1):
                m1 = operator_matrix(p, f.grid1, "qderiv", ta)
                left = m1 @ f.values
                for tb, wb in zip(ts2, ws2):
                    m2 = operator_matrix(p, f.grid2, "qderiv", tb)
                    yield n1, n2, ta, tb, wa, wb, left @ m2.T


def _pool_max(arr, c1, c2):
    m1 = arr.shape[0] // c1
    m2 = arr.shape[1] // c2
    return arr[: m1 * c1, : m2 * c2].reshape(m1, c1, m2, c2).max(axis=(1, 3))


def _pool_sum(arr, c1, c2):
    m1 = arr.shape[0] // c1
    m2 = arr.shape[1] // c2
    return arr[: m1 * c1, : m2 * c2].reshape(m1, c1, m2, c2).sum(axis=(1, 3))


def _pool_mean(arr, c1, c2):
    return _pool_sum(arr.astype(float), c1, c2) / (c1 * c2)


def _cells_per_interval(extent, n_cells, gen):
    return max(int(round(2.0 ** -gen / (extent / n_cells))), 1)


def atomic_decompose(p, f, m_order=1, depth=6, keep_levels=12):
    """Stopping-time atomic decomposition of f from its discrete frame.

    Per dyadic rectangle R the coefficient s_R is |R|^{1/2} times the
    maximum of the (t sqrt(S) e^{-t sqrt(S)} tensor) field over the
    Carleson box of R; the square function S(f) built from these drives the
    level sets Omega_ell, the stopping families B_ell and the atoms
    a_ell = (1/lambda_ell) sum_{R in B_ell} s_R W_R with lambda_ell =
    2^ell |dilate(Omega_ell)|.  The frame pieces W_R use the normalized
    spectral window psi(tz) = (tz)^2 e^{-(tz)^2} (m_order = 1).

    Raises on degenerate input (square function below machine floor).
    """
    if m_order != 1:
        raise ValueError("only M = 1 frames are implemented")
    n1c, n2c = f.values.shape
    if n1c != n2c or n1c & (n1c - 1):
        raise ValueError("atomic decomposition expects a square power-of-two grid")
    extent = float(f.grid1.points[-1] + f.grid1.points[0])
    h = extent / n1c
    gens = _generation_range(extent, n1c, depth)

    # square function from the pooled frame maxima
    s_sq = np.zeros_like(f.values)
    fields = {}
    for n1, n2, ta, tb, wa, wb, field in _qt_fields(p, f, gens):
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        pooled = _pool_max(np.abs(field), c1, c2)
        prev = fields.get((n1, n2))
        if prev is None:
            fields[(n1, n2)] = (pooled, [(ta, tb, wa, wb, field)])
        else:
            fields[(n1, n2)] = (
                np.maximum(prev[0], pooled),
                prev[1] + [(ta, tb, wa, wb, field)],
            )
    for (n1, n2), (pooled, _) in fields.items():
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        s_sq += np.repeat(np.repeat(pooled ** 2, c1, axis=0), c2, axis=1)[:n1c, :n2c]
    s_field = np.sqrt(s_sq)
    s_max = float(np.max(s_field))
    if s_max < 1e-300:
        raise ValueError("degenerate input: square function vanishes")

    ell_hi = int(math.ceil(math.log2(s_max)))
    ells = list(range(ell_hi - keep_levels, ell_hi + 1))
    omegas = {ell: s_field > 2.0 ** ell for ell in ells}

    # stopping level of each rectangle: the largest ell with |R cap Omega_ell| > |R|/2
    level_of = {}
    for (n1, n2) in fields:
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        lev = np.full((n1c // c1, n2c // c2), -(10 ** 9), dtype=int)
        for ell in ells:
            frac = _pool_mean(omegas[ell], c1, c2)
            lev = np.where(frac > 0.5, ell, lev)
        level_of[(n1, n2)] = lev

    dil_bitmaps = {}
    lambdas = {}
    for ell in ells:
        if not np.any(omegas[ell]):
            continue
        dil = covered_set(omegas[ell], 0.5)
        dil_bitmaps[ell] = dil
        lambdas[ell] = 2.0 ** ell * float(np.sum(dil)) * h * h

    atoms_acc = {ell: np.zeros_like(f.values) for ell in lambdas}
    recon = np.zeros_like(f.values)
    for (n1, n2), (_, samples) in fields.items():
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        lev = level_of[(n1, n2)]
        for ta, tb, wa, wb, field in samples:
            psi1 = operator_matrix(p, f.grid1, "psi", ta)
            psi2 = operator_matrix(p, f.grid2, "psi", tb)
            recon += wa * wb * (psi1 @ field @ psi2.T)
            for ell in lambdas:
                mask_cells = lev == ell
                if not np.any(mask_cells):
                    continue
                mask = np.repeat(np.repeat(mask_cells, c1, axis=0), c2, axis=1)[:n1c, :n2c]
                atoms_acc[ell] += wa * wb * (psi1 @ (field * mask) @ psi2.T)

    levels = sorted(lambdas, reverse=True)
    coefficients = np.array([lambdas[ell] for ell in levels])
    atoms = tuple(
        SampledFunction2D(f.grid1, f.grid2, atoms_acc[ell] / lambdas[ell])
        for ell in levels
    )
    gen_raster = int(round(math.log2(n1c / extent)))
    supports = tuple(
        DyadicOpenSet((), gen=gen_raster, bitmap=dil_bitmaps[ell]) for ell in levels
    )
    return AtomicDecomposition(
        coefficients=coefficients,
        atoms=atoms,
        supports=supports,
        levels=np.array(levels),
        s_function=SampledFunction2D(f.grid1, f.grid2, s_field),
        reconstruction=SampledFunction2D(f.grid1, f.grid2, recon),
    )


def carleson_energies(p, b, depth):
    """Per-rectangle Carleson energies S_R^2(b) for all generation pairs.

    S_R^2 integrates |Q_t1 Q_t2 b|^2 over the Carleson box T(R) with the
    dt/t measures; returns {(n1, n2): energy array over rectangles}.
    """
    n1c, n2c = b.values.shape
    extent = float(b.grid1.points[-1] + b.grid1.points[0])
    h = extent / n1c
    gens = _generation_range(extent, n1c, depth)
    energies = {}
    for n1, n2, ta, tb, wa, wb, field in _qt_fields(p, b, gens):
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        cell = _pool_sum(field * field, c1, c2) * h * h * wa * wb
        key = (n1, n2)
        energies[key] = energies.get(key, 0.0) + cell
    return energies


def bmo_norm(p, b, depth=5, union_size=8):
    """Lower bound for the Carleson-energy BMO norm by greedy candidate search.

    Candidates for the open set are single dyadic rectangles, whole rows
    and columns of each generation, and greedy unions of the best
    rectangles (up to union_size).  The returned value is the square root
    of the best energy/measure ratio; it is monotone in depth and in the
    candidate family, and a lower bound for the sup over all open sets.
    """
    energies = carleson_energies(p, b, depth)
    n1c, n2c = b.values.shape
    extent = float(b.grid1.points[-1] + b.grid1.points[0])
    h = extent / n1c

    def rect_area(n1, n2):
        return 2.0 ** -(n1 + n2)

    # energy of all dyadic rectangles inside a bitmap candidate
    def union_energy(mask):
        total = 0.0
        for (n1, n2), e in energies.items():
            c1 = _cells_per_interval(extent, n1c, n1)
            c2 = _cells_per_interval(extent, n2c, n2)
            inside = _pool_mean(mask, c1, c2) >= 1.0 - 1e-12
            total += float(np.sum(e[inside]))
        return total

    best = 0.0
    # single rectangles: ratio = (sum of energies of subrectangles)/|R|
    singles = []
    for (n1, n2), e in energies.items():
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        area = rect_area(n1, n2)
        for (k1, k2) in np.argwhere(e > 0):
            singles.append((float(e[k1, k2]) / area, (n1, n2, int(k1), int(k2))))
    singles.sort(reverse=True)
    for ratio, (n1, n2, k1, k2) in singles[:union_size]:
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        mask = np.zeros((n1c, n2c), dtype=bool)
        mask[k1 * c1 : (k1 + 1) * c1, k2 * c2 : (k2 + 1) * c2] = True
        best = max(best, union_energy(mask) / (float(np.sum(mask)) * h * h))
    # rows and columns of each generation
    for (n1, n2), e in energies.items():
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        for k1 in range(e.shape[0]):
            if not np.any(e[k1] > 0):
                continue
            mask = np.zeros((n1c, n2c), dtype=bool)
            mask[k1 * c1 : (k1 + 1) * c1, :] = True
            best = max(best, union_energy(mask) / (float(np.sum(mask)) * h * h))
        for k2 in range(e.shape[1]):
            if not np.any(e[:, k2] > 0):
                continue
            mask = np.zeros((n1c, n2c), dtype=bool)
            mask[:, k2 * c2 : (k2 + 1) * c2] = True
            best = max(best, union_energy(mask) / (float(np.sum(mask)) * h * h))
    # greedy unions of the top single rectangles
    mask = np.zeros((n1c, n2c), dtype=bool)
    for _, (n1, n2, k1, k2) in singles[:union_size]:
        c1 = _cells_per_interval(extent, n1c, n1)
        c2 = _cells_per_interval(extent, n2c, n2)
        trial = mask.copy()
        trial[k1 * c1 : (k1 + 1) * c1, k2 * c2 : (k2 + 1) * c2] = True
        ratio = union_energy(trial) / (float(np.sum(trial)) * h * h)
        if ratio >= best:
            best = ratio
            mask = trial
    return math.sqrt(best)
