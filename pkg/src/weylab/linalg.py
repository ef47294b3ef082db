"""Exact linear algebra over the rationals.

Rows are scaled to primitive integer vectors and reduced by fraction-free
Gauss-Jordan elimination: a pivot step forms ``p*row - a*pivot_row`` and then
divides the result by the gcd of its entries, so no rational division happens
until the final read-off.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


class InconsistentSystem(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def _integer_row(row: Sequence) -> list[int]:
    den = 1
    for v in row:
        if isinstance(v, Fraction) and v.denominator != 1:
            den = _lcm(den, v.denominator)
    out = []
    for v in row:
        if isinstance(v, Fraction):
            out.append(v.numerator * (den // v.denominator))
        else:
            out.append(int(v) * den)
    return _primitive(out)


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced echelon form.

    Returns integer rows and the pivot column of each row.  Row ``r`` has
    its pivot entry at ``pivots[r]`` and zeros in every other pivot column.
    """
    work = [_integer_row(r) for r in rows]
    work = [r for r in work if any(r)]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        sel = None
        best = None
        for r in range(rank, len(work)):
            v = work[r][col]
            if v:
                # smallest pivot keeps intermediate integers short
                if best is None or abs(v) < best:
                    sel, best = r, abs(v)
                    if best == 1:
                        break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        prow = work[rank]
        p = prow[col]
        nz = [k for k in range(col, ncols) if prow[k]]
        for r in range(len(work)):
            if r == rank:
                continue
            row = work[r]
            a = row[col]
            if not a:
                continue
            g = gcd(p, a)
            pm, am = p // g, a // g
            if pm != 1:
                row = [pm * v for v in row]
            for k in nz:
                row[k] -= am * prow[k]
            work[r] = _primitive(row)
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : rows @ v = 0}``, one vector per free column (ascending).

    Vector ``k`` has a 1 in the ``k``-th free column and 0 in every other free
    column, which makes the basis canonical for a fixed column order.
    """
    red, pivots = rref(rows, ncols) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = Fraction(-row[f], row[pc])
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> tuple[list[Fraction], list[list[Fraction]]]:
    """One solution of ``rows @ v = rhs`` plus a nullspace basis.

    The particular solution sets every free variable to zero.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [-b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        raise InconsistentSystem("linear system has no solution")
    sol = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        sol[pc] = Fraction(-row[ncols], row[pc])
    basis = nullspace(rows, ncols)
    return sol, basis
