"""Exact linear algebra: fraction-free determinants over polynomial rings,
Sylvester resultants, and Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pdisc.exactalg.mpoly import MPoly
from pdisc.exactalg.upoly import UPoly


def ffdet(rows: Sequence[Sequence[MPoly]]) -> MPoly:
    """Determinant of a square MPoly matrix by Bareiss one-step elimination.

    Every division the algorithm performs is exact in the polynomial
    ring; a failed division means the input was not a matrix over the
    ring and is reported as a programming error.
    """
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("ffdet requires a square matrix")
    if n == 0:
        return MPoly.one()
    a: List[List[MPoly]] = [list(row) for row in rows]
    sign = 1
    prev = MPoly.one()
    for k in range(n - 1):
        if a[k][k].is_zero:
            pivot_row = next((i for i in range(k + 1, n) if not a[i][k].is_zero), None)
            if pivot_row is None:
                return MPoly.zero()
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                q = num.exact_div(prev)
                if q is None:
                    raise ArithmeticError("Bareiss division not exact")
                a[i][j] = q
            a[i][k] = MPoly.zero()
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_resultant(fc: Sequence[MPoly], gc: Sequence[MPoly]) -> MPoly:
    """Resultant of two polynomials given by coefficient lists (ascending,
    entries in MPoly) with respect to their common main variable.

    Trailing zero coefficients are ignored.  Conventions for degenerate
    degrees: Res(0, g) = Res(f, 0) = 0; Res(c, g) = c^deg(g) for
    constant f, and symmetrically.
    """
    f = _trim(fc)
    g = _trim(gc)
    if not f or not g:
        return MPoly.zero()
    m = len(f) - 1
    n = len(g) - 1
    if m == 0 and n == 0:
        return MPoly.one()
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    zero = MPoly.zero()
    rows: List[List[MPoly]] = []
    fd = list(reversed(f))
    gd = list(reversed(g))
    for i in range(n):
        rows.append([zero] * i + fd + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gd + [zero] * (size - n - 1 - i))
    return ffdet(rows)


def resultant_wrt(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Resultant of two bivariate polynomials, eliminating var ('x' or 'y').

    The result is a polynomial in the other variable only.
    """
    fc = [MPoly.const(c) if isinstance(c, Fraction) else c for c in p.coeffs_in(var)]
    gc = [MPoly.const(c) if isinstance(c, Fraction) else c for c in q.coeffs_in(var)]
    return sylvester_resultant(fc, gc)


def _trim(cs: Sequence[MPoly]) -> List[MPoly]:
    out = list(cs)
    while out and out[-1].is_zero:
        out.pop()
    return out


def resultant_univariate(f: UPoly, g: UPoly) -> Fraction:
    """Resultant of two univariate rational polynomials."""
    fc = [MPoly.const(c) for c in f.coeffs]
    gc = [MPoly.const(c) for c in g.coeffs]
    r = sylvester_resultant(fc, gc)
    return r.constant_value()


def _pivot_choice(col: Sequence[Fraction]) -> Optional[int]:
    """Index of the nonzero entry with smallest |numerator|, breaking ties
    by denominator then position; None if the column is all zero."""
    best: Optional[int] = None
    best_key: Optional[Tuple[int, int]] = None
    for i, c in enumerate(col):
        if c == 0:
            continue
        key = (abs(c.numerator), c.denominator)
        if best_key is None or key < best_key:
            best, best_key = i, key
    return best


def _row_echelon(
    matrix: Sequence[Sequence[Fraction]],
) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form and the list of pivot column indices."""
    a = [[Fraction(c) for c in row] for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        sub = [a[i][c] for i in range(r, nrows)]
        p = _pivot_choice(sub)
        if p is None:
            continue
        p += r
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def solve_linear(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Tuple[Optional[List[Fraction]], int, int]:
    """Solve A x = b exactly.

    Returns (solution, rank(A), rank([A|b])).  solution is None when the
    system is inconsistent; when the solution set is a positive-dimensional
    affine space, the returned point sets every free variable to zero.
    """
    nrows = len(matrix)
    if nrows == 0:
        return [], 0, 0
    ncols = len(matrix[0])
    if len(rhs) != nrows:
        raise ValueError("rhs length does not match matrix")
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = _row_echelon(aug)
    rank_aug = len(pivots)
    if pivots and pivots[-1] == ncols:
        # a pivot in the rhs column certifies inconsistency
        rank_a = rank_aug - 1
        return None, rank_a, rank_aug
    rank_a = rank_aug
    sol = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        sol[c] = red[r][ncols]
    return sol, rank_a, rank_aug


def nullspace(matrix: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Basis of the right nullspace of a rational matrix.

    One basis vector per free column: the free variable is set to 1 and
    the pivot variables are read off the reduced echelon form.
    """
    nrows = len(matrix)
    if nrows == 0:
        return []
    ncols = len(matrix[0])
    red, pivots = _row_echelon(matrix)
    pivot_set = set(pivots)
    basis: List[List[Fraction]] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -red[r][free]
        basis.append(vec)
    return basis
