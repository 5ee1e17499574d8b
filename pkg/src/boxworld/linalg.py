"""Exact rational linear algebra helpers.

Everything here works over Python ints and fractions.Fraction; floats are
never introduced. Matrices are sequences of equal-length rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in rows)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(rows: Sequence[Sequence]) -> tuple:
    return tuple(zip(*rows))


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by forward elimination over the rationals."""
    work = [[Fraction(v) for v in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pv = work[r][c]
        for i in range(r + 1, len(work)):
            f = work[i][c]
            if f:
                fi = f / pv
                row_r = work[r]
                row_i = work[i]
                for j in range(c, ncols):
                    row_i[j] -= fi * row_r[j]
        r += 1
        if r == len(work):
            break
    return r


def invert(rows: Sequence[Sequence]) -> tuple:
    """Exact inverse of a square matrix via Gauss-Jordan; ValueError if singular."""
    n = len(rows)
    work = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError("matrix is not square")
        ext = [Fraction(v) for v in row] + [Fraction(0)] * n
        ext[n + i] = Fraction(1)
        work.append(ext)
    for c in range(n):
        piv = next((i for i in range(c, n) if work[i][c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        work[c], work[piv] = work[piv], work[c]
        pv = work[c][c]
        work[c] = [v / pv for v in work[c]]
        for i in range(n):
            if i != c and work[i][c]:
                f = work[i][c]
                row_c = work[c]
                row_i = work[i]
                for j in range(c, 2 * n):
                    row_i[j] -= f * row_c[j]
    return tuple(tuple(row[n:]) for row in work)


class IncrementalSpan:
    """Append-only echelon basis with dependency coefficients.

    Vectors are offered one at a time. A vector inside the current span is
    reported together with the exact coefficients expressing it over the
    previously *inserted* (independent) vectors; an independent vector is
    appended to the basis. Rows are never modified after insertion, so a
    snapshot is a pair of lengths and rollback is truncation. This is the
    backbone of the backtracking searches.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        self.coeffs: list[list[Fraction]] = []
        self.n_inserted = 0

    def reduce(self, vec: Sequence):
        """Return (residual, combo) with vec = combo . inserted + residual."""
        residual = [Fraction(v) for v in vec]
        combo = [Fraction(0)] * self.n_inserted
        for k, p in enumerate(self.pivots):
            c = residual[p]
            if c:
                row = self.rows[k]
                for j in range(p, self.dim):
                    residual[j] -= c * row[j]
                rc = self.coeffs[k]
                for t in range(len(rc)):
                    combo[t] += c * rc[t]
        return residual, combo

    def coefficients(self, vec: Sequence):
        """Coefficients of vec over the inserted vectors, or None if independent."""
        residual, combo = self.reduce(vec)
        if any(residual):
            return None
        return combo

    def try_insert(self, vec: Sequence):
        """Insert vec if independent (returns None); else return its combo."""
        residual, combo = self.reduce(vec)
        p = next((j for j in range(self.dim) if residual[j]), None)
        if p is None:
            return combo
        pv = residual[p]
        self.rows.append([v / pv for v in residual])
        self.pivots.append(p)
        crow = [-c / pv for c in combo]
        crow.append(Fraction(1) / pv)
        self.coeffs.append(crow)
        self.n_inserted += 1
        return None

    @property
    def rank(self) -> int:
        return len(self.rows)

    def snapshot(self):
        return len(self.rows), self.n_inserted

    def rollback(self, snap) -> None:
        nrows, nins = snap
        del self.rows[nrows:]
        del self.pivots[nrows:]
        del self.coeffs[nrows:]
        self.n_inserted = nins


def has_nonnegative_solution(columns: Sequence[Sequence], rhs: Sequence) -> bool:
    """Exact feasibility of { x >= 0 : sum_j x_j columns[j] = rhs }.

    Phase-1 simplex with Bland's rule, so termination is guaranteed and the
    answer is exact. Used as the independent V-representation membership
    oracle (rhs in the cone/hull spanned by the columns).
    """
    m = len(rhs)
    n = len(columns)
    # tableau rows: [structural vars | artificial vars | rhs], rhs kept >= 0
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(col[i]) for col in columns] + [Fraction(0)] * m + [Fraction(rhs[i])]
        if row[-1] < 0:
            row = [-v for v in row]
        row[n + i] = Fraction(1)
        tab.append(row)
    basis = list(range(n, n + m))
    # objective row: reduced costs for minimizing the sum of artificials
    obj = [Fraction(0)] * (n + m + 1)
    for row in tab:
        for j in range(n + m + 1):
            obj[j] += row[j]
    for j in range(n, n + m):
        obj[j] = Fraction(0)

    while True:
        enter = next((j for j in range(n) if obj[j] > 0), None)  # Bland: smallest index
        if enter is None:
            return obj[-1] == 0
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            # unbounded phase-1 objective cannot happen; defensive
            return False
        pv = tab[leave][enter]
        tab[leave] = [v / pv for v in tab[leave]]
        prow = tab[leave]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                row = tab[i]
                for j in range(n + m + 1):
                    row[j] -= f * prow[j]
        if obj[enter]:
            f = obj[enter]
            for j in range(n + m + 1):
                obj[j] -= f * prow[j]
        basis[leave] = enter
