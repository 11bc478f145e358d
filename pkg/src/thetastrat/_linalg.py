"""Small exact linear algebra over Q on sparse rows.

Rows are dicts ``column -> Fraction``.  Everything here is exact; sizes are
desk-scale (a few hundred rows), so a plain elimination is enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

Row = Dict[int, Fraction]


def _normalize(row: Row) -> Row:
    return {c: Fraction(v) for c, v in row.items() if v != 0}


def rank(rows: Iterable[Row]) -> int:
    """Rank of a sparse matrix given by its rows."""
    pivots: Dict[int, Row] = {}
    r = 0
    for row in rows:
        row = _normalize(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                pivots[col] = {c: v * inv for c, v in row.items()}
                r += 1
                break
            f = row[col]
            for c, v in piv.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return r


def rref(matrix: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a dense matrix; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m:
        return [], []
    ncols = len(m[0])
    pivcols: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivcols.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivcols


def nullspace(matrix: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : M v = 0} as a list of vectors of length ``ncols``."""
    rows, piv = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    rows, piv = rref(aug)
    if len(piv) != n or (piv and piv[-1] == n):
        raise ZeroDivisionError("singular system")
    return [rows[i][n] for i in range(n)]


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def project_onto_span(basis: List[List[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    """Orthogonal projection of ``v`` onto the span of ``basis`` (linearly independent)."""
    if not basis:
        return [Fraction(0)] * len(v)
    gram = [[dot(bi, bj) for bj in basis] for bi in basis]
    rhs = [dot(bi, v) for bi in basis]
    coeffs = solve(gram, rhs)
    out = [Fraction(0)] * len(v)
    for c, bi in zip(coeffs, basis):
        for k, x in enumerate(bi):
            out[k] += c * x
    return out
