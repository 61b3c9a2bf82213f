"""Exact linear algebra over the rational-function field ``K(params)``.

Matrices are plain lists of rows of :class:`RatFunc`.  Elimination is
Bareiss-style and fraction-free: each row is first scaled by the LCM of its
denominators, and every later update divides exactly by the previous pivot,
which is never zero.  Pivots are chosen leftmost column first, topmost
nonzero row second.
"""

from __future__ import annotations

from typing import Sequence

from gauss_grass.algebra.field import FieldElem
from gauss_grass.algebra.poly import RatFunc, Ring, cofactors
from gauss_grass.errors import DimensionError, InconsistentSystemError

Matrix = list[list[RatFunc]]


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Sequence[Sequence]) -> list[list]:
    rows, cols = shape(M)
    return [[M[i][j] for i in range(rows)] for j in range(cols)]


def matmul(A: Sequence[Sequence[RatFunc]], B: Sequence[Sequence[RatFunc]], ring: Ring) -> Matrix:
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise DimensionError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    out = []
    for i in range(ra):
        row = []
        for j in range(cb):
            acc = ring.rat(0)
            for k in range(ca):
                if not A[i][k].is_zero() and not B[k][j].is_zero():
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def is_zero_matrix(M: Sequence[Sequence[RatFunc]]) -> bool:
    return all(e.is_zero() for row in M for e in row)


def _clear_denominators(row: Sequence[RatFunc]) -> list:
    sp = row[0].ring.sp
    lcm = sp.one
    for e in row:
        if e.den != 1 and e.num:
            g, _, q = cofactors(lcm, e.den)
            if q != 1:
                lcm = lcm * q
    if lcm == 1:
        return [e.num for e in row]
    return [e.num * lcm.exquo(e.den) if e.num else e.num for e in row]


def fraction_free_echelon(P: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Row-echelon form of a matrix of raw polynomials, in place.

    Returns the transformed rows and the pivot columns.  Entry ``(i, j)``
    after step ``k`` is a ``(k+1)``-minor of the input, so each division by
    the previous pivot is exact.
    """
    nrows = len(P)
    if not nrows:
        return P, []
    prev = None
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if P[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            P[r], P[piv] = P[piv], P[r]
        row_r = P[r]
        p = row_r[c]
        for i in range(r + 1, nrows):
            row_i = P[i]
            a = row_i[c]
            for j in range(c + 1, ncols):
                if a:
                    v = p * row_i[j] - a * row_r[j]
                elif row_i[j]:
                    v = p * row_i[j]
                else:
                    continue
                row_i[j] = v.exquo(prev) if prev is not None and v else v
            row_i[c] = a.ring.zero if a else a
        prev = p
        pivots.append(c)
        r += 1
    return P, pivots


def _as_polys(M: Sequence[Sequence[RatFunc]]) -> list[list]:
    return [_clear_denominators(row) for row in M]


def mat_rank_pivots(M: Sequence[Sequence[RatFunc]]) -> tuple[int, list[int]]:
    """Generic rank of ``M`` and its leftmost pivot columns."""
    rows, cols = shape(M)
    if not rows or not cols:
        return 0, []
    _, pivots = fraction_free_echelon(_as_polys(M), cols)
    return len(pivots), pivots


def mat_rank(M: Sequence[Sequence[RatFunc]]) -> int:
    return mat_rank_pivots(M)[0]


def mat_solve(A: Sequence[Sequence[RatFunc]], B: Sequence[Sequence[RatFunc]], ring: Ring | None = None) -> Matrix:
    """One exact solution ``X`` of ``A X = B`` (unique when ``A`` has full column rank).

    Free unknowns are set to zero.  Raises :class:`InconsistentSystemError`
    when no solution exists.
    """
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ra != rb:
        raise DimensionError(f"A has {ra} rows but B has {rb}")
    if ring is None:
        if ra and ca:
            ring = A[0][0].ring
        elif rb and cb:
            ring = B[0][0].ring
        else:
            raise DimensionError("cannot infer the ring of an empty system")
    if not cb:
        return [[] for _ in range(ca)]
    if not ca:
        if not is_zero_matrix(B):
            raise InconsistentSystemError("no unknowns but a nonzero right-hand side")
        return []
    P = _as_polys([list(a) + list(b) for a, b in zip(A, B)])
    P, pivots = fraction_free_echelon(P, ca + cb)
    if any(c >= ca for c in pivots):
        raise InconsistentSystemError("the system A X = B is inconsistent")
    one = ring.sp.one
    X = [[ring.rat(0) for _ in range(cb)] for _ in range(ca)]
    for b in range(cb):
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = P[k]
            acc = RatFunc._make(ring, row[ca + b], one)
            for c2 in pivots[k + 1:]:
                if row[c2] and not X[c2][b].is_zero():
                    acc = acc - RatFunc._make(ring, row[c2], one) * X[c2][b]
            X[c][b] = acc / RatFunc._make(ring, row[c], one) if not acc.is_zero() else acc
    return X


def field_rref(rows: Sequence[Sequence[FieldElem]], domain) -> tuple[list[list[FieldElem]], list[int]]:
    """Reduced row-echelon form over a field; zero rows dropped."""
    M = [list(r) for r in rows]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = domain.one / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots
