"""Small least-squares solver used by the fitting operations.

Solves min ||A x - b|| for a handful of unknowns (here always 1 or 2).
When every entry is an exact rational the normal equations are solved
in Fraction arithmetic, so exact fits come out exact. Otherwise numpy
does the floating-point solve.

Columns whose entries are all zero make the corresponding unknown
unidentifiable; they are dropped and reported back so callers can mark
the parameter as unconstrained instead of inventing a zero.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DegenerateSystem


class FitResult:
    def __init__(self, values, dropped, residual_max, exact):
        self.values = values          # per requested column: number or None when dropped
        self.dropped = dropped        # indices of unidentifiable columns
        self.residual_max = residual_max
        self.exact = exact            # True when solved in rational arithmetic

    def __repr__(self):
        return (f"FitResult(values={self.values}, dropped={self.dropped}, "
                f"residual_max={self.residual_max}, exact={self.exact})")


def _solve_rational(gram, rhs):
    # Gaussian elimination on the k x k normal system, exact.
    k = len(rhs)
    aug = [list(gram[i]) + [rhs[i]] for i in range(k)]
    for col in range(k):
        piv = None
        for r in range(col, k):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise DegenerateSystem("normal equations are singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][k] for i in range(k)]


def solve_least_squares(rows, rhs):
    """Fit x minimizing ||A x - b||.

    rows: list of coefficient tuples (one per equation), rhs: list of
    numbers. Entries may be Fraction/int (exact) or float. Returns a
    FitResult whose `values` has one entry per column; dropped columns
    get None.
    """
    if not rows:
        raise DegenerateSystem("no equations to fit")
    ncols = len(rows[0])
    exact = all(
        isinstance(x, (Fraction, int)) for row in rows for x in row
    ) and all(isinstance(x, (Fraction, int)) for x in rhs)

    keep = [j for j in range(ncols) if any(row[j] != 0 for row in rows)]
    dropped = [j for j in range(ncols) if j not in keep]
    if not keep:
        raise DegenerateSystem("all coefficient columns vanish")

    if exact:
        k = len(keep)
        gram = [[Fraction(0)] * k for _ in range(k)]
        rvec = [Fraction(0)] * k
        for row, b in zip(rows, rhs):
            for a, ja in enumerate(keep):
                ra = Fraction(row[ja])
                if ra == 0:
                    continue
                rvec[a] += ra * Fraction(b)
                for bcol in range(a, k):
                    gram[a][bcol] += ra * Fraction(row[keep[bcol]])
        for a in range(k):
            for bcol in range(a):
                gram[a][bcol] = gram[bcol][a]
        sol = _solve_rational(gram, rvec)
        values = [None] * ncols
        for a, j in enumerate(keep):
            values[j] = sol[a]
        resf = 0.0
        for row, b in zip(rows, rhs):
            r = sum(Fraction(row[j]) * values[j] for j in keep) - Fraction(b)
            resf = max(resf, abs(float(r)))
        return FitResult(values, dropped, resf, True)

    A = np.array([[float(row[j]) for j in keep] for row in rows], dtype=float)
    b = np.array([float(x) for x in rhs], dtype=float)
    sol, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < len(keep):
        raise DegenerateSystem("normal equations are singular")
    values = [None] * ncols
    for a, j in enumerate(keep):
        values[j] = float(sol[a])
    resid = A @ sol - b
    return FitResult(values, dropped, float(np.max(np.abs(resid))) if len(resid) else 0.0, False)
