"""CSV exchange format for sampled functions.

1D files: header ``x,value`` and rows in strictly ascending x.
2D files: header ``x1,x2,value``, row-major with x1 as the outer loop.
Values are written with 17 significant digits so write/read round-trips
are bit exact.  Malformed headers, non-monotone coordinates and NaNs are
rejected with the offending line number.
"""

import numpy as np

from .grids import SampledFunction1D, SampledFunction2D, _half_grid_for


class CsvFormatError(ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def _parse_rows(path, expected_header, ncols):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != expected_header:
            raise CsvFormatError(path, 1, f"expected header '{expected_header}'")
        for lineno, raw in enumerate(fh, start=2):
            raw = raw.strip()
            if not raw:
                continue
            parts = raw.split(",")
            if len(parts) != ncols:
                raise CsvFormatError(path, lineno, f"expected {ncols} columns")
            try:
                vals = [float(v) for v in parts]
            except ValueError:
                raise CsvFormatError(path, lineno, "non-numeric entry") from None
            if any(np.isnan(v) for v in vals):
                raise CsvFormatError(path, lineno, "NaN rejected")
            rows.append((lineno, vals))
    if not rows:
        raise CsvFormatError(path, 2, "no data rows")
    return rows


def read_function_1d(path):
    rows = _parse_rows(path, "x,value", 2)
    xs = np.array([r[1][0] for r in rows])
    vals = np.array([r[1][1] for r in rows])
    bad = np.nonzero(np.diff(xs) <= 0)[0]
    if bad.size:
        raise CsvFormatError(path, rows[bad[0] + 1][0], "x not strictly increasing")
    return SampledFunction1D(_half_grid_for(xs), vals)


def write_function_1d(path, f):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,value\n")
        for x, v in zip(f.grid.points, f.values):
            fh.write(f"{x:.17g},{v:.17g}\n")


def read_function_2d(path):
    rows = _parse_rows(path, "x1,x2,value", 3)
    x1 = np.array([r[1][0] for r in rows])
    x2 = np.array([r[1][1] for r in rows])
    vals = np.array([r[1][2] for r in rows])
    uniq1 = np.unique(x1)
    uniq2 = np.unique(x2)
    n1, n2 = uniq1.size, uniq2.size
    if n1 * n2 != len(rows):
        raise CsvFormatError(path, rows[-1][0], "rows do not fill an n1 x n2 grid")
    # row-major, x1 outer: verify ordering and monotonicity as we reshape
    expected1 = np.repeat(uniq1, n2)
    expected2 = np.tile(uniq2, n1)
    if not (np.array_equal(x1, expected1) and np.array_equal(x2, expected2)):
        order = np.lexsort((x2, x1))
        if not (
            np.array_equal(x1[order], expected1) and np.array_equal(x2[order], expected2)
        ):
            raise CsvFormatError(path, rows[-1][0], "grid coordinates not consistent")
        raise CsvFormatError(path, rows[1][0], "rows not in row-major x1-outer order")
    return SampledFunction2D(
        _half_grid_for(uniq1), _half_grid_for(uniq2), vals.reshape(n1, n2)
    )


def write_function_2d(path, f):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x1,x2,value\n")
        for i, x1 in enumerate(f.grid1.points):
            for x2, v in zip(f.grid2.points, f.values[i]):
                fh.write(f"{x1:.17g},{x2:.17g},{v:.17g}\n")
