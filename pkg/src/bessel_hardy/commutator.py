"""Iterated commutator [[b, R_1], R_2] of the two partial Riesz transforms.

R_1 acts along the first axis of a grid function (row index), R_2 along the
second; b acts by pointwise multiplication.  Since R_1 and R_2 act on
different axes they commute, and the commutator expands into the four-term
combination

    [[b, R_1], R_2] f = b R_1 R_2 f - R_1(b R_2 f) - R_2(b R_1 f) + R_1 R_2(b f).

Multiplication by a constant b therefore cancels exactly.
"""

from dataclasses import dataclass

import numpy as np

from .dyadic import bmo_norm
from .grids import SampledFunction2D, lp_norm
from .kernels import operator_matrix


@dataclass(frozen=True)
class CommutatorResult:
    output: SampledFunction2D
    operator_ratio: float    # ||out||_2 / (||b||_BMO ||f||_2), 0 for zero output


def apply_commutator(p, b, f):
    """The four-term iterated commutator field without the BMO bookkeeping."""
    if b.values.shape != f.values.shape:
        raise ValueError("b and f must live on the same grid")
    r1 = operator_matrix(p, f.grid1, "riesz")
    r2 = operator_matrix(p, f.grid2, "riesz")
    bv = b.values
    fv = f.values
    out = (
        bv * (r1 @ fv @ r2.T)
        - r1 @ (bv * (fv @ r2.T))
        - (bv * (r1 @ fv)) @ r2.T
        + r1 @ (bv * fv) @ r2.T
    )
    return SampledFunction2D(f.grid1, f.grid2, out)


def iterated_commutator(p, b, f, bmo_depth=5):
    """Commutator field together with the Theorem-style operator ratio.

    The ratio compares ||[[b, R_1], R_2] f||_2 against
    ||b||_BMO * ||f||_2 with the greedy Carleson-energy BMO lower bound;
    zero output (e.g. constant b) reports ratio 0.
    """
    out = apply_commutator(p, b, f)
    norm_out = lp_norm(out, 2)
    if norm_out == 0.0:
        return CommutatorResult(out, 0.0)
    denom = bmo_norm(p, b, depth=bmo_depth) * lp_norm(f, 2)
    ratio = norm_out / denom if denom > 0.0 else float("inf")
    return CommutatorResult(out, ratio)


def commutator_sweep(p, b_family, f_family, bmo_depth=5):
    """Max operator ratio over a family cross product.

    Returns (rows, max_ratio) where rows are (b_name, f_name, ratio); BMO
    norms are computed once per symbol.
    """
    rows = []
    max_ratio = 0.0
    bmo_cache = {}
    for b_name, b in b_family.items():
        if b_name not in bmo_cache:
            bmo_cache[b_name] = bmo_norm(p, b, depth=bmo_depth)
        for f_name, f in f_family.items():
            out = apply_commutator(p, b, f)
            norm_out = lp_norm(out, 2)
            if norm_out == 0.0:
                ratio = 0.0
            else:
                denom = bmo_cache[b_name] * lp_norm(f, 2)
                ratio = norm_out / denom if denom > 0.0 else float("inf")
            rows.append((b_name, f_name, ratio))
            max_ratio = max(max_ratio, ratio)
    return rows, max_ratio
