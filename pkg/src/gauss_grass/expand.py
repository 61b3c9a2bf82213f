"""Expanding and shrinking maps, conormal hyperplanes and the Gauss map.

Everything is computed at the generic point, over the rational-function
field in the family's parameters.  Instead of moving a base point into a
standard position, the image chart is obtained by relabelling coordinates so
that the leftmost pivot columns of the derivative matrix come right after
the identity block.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from gauss_grass.algebra.linalg import mat_rank_pivots, mat_solve
from gauss_grass.algebra.poly import RatFunc
from gauss_grass.charts import (
    ChartFamily,
    HyperplaneParam,
    ProjParam,
    _hyperplane_coeffs,
    _to_labels,
    dual_family,
    invert_perm,
)
from gauss_grass.errors import ChartError, ConstantFamilyError, DimensionError


class Direction(enum.Enum):
    EXPAND = "expand"
    SHRINK = "shrink"


@dataclass(frozen=True)
class PhiMatrix:
    """Derivatives of the chart entries.

    Row ``e * (m+1) + i`` and column ``j - m - 1`` hold the derivative of
    ``f^j_i`` by the ``e``-th parameter.
    """

    family: ChartFamily
    entries: tuple[tuple[RatFunc, ...], ...]

    def rows(self) -> list[list[RatFunc]]:
        return [list(r) for r in self.entries]

    def row_label(self, r: int) -> tuple[str, int]:
        m1 = self.family.m + 1
        return self.family.params[r // m1], r % m1


@dataclass(frozen=True)
class ExpansionResult:
    """Output of :func:`expand` or :func:`shrink`.

    For an expansion, ``pivots`` are the input slots chosen as image basis
    and ``g[k][c]`` is the coefficient of pivot ``pivots[k]`` in the
    derivative column of the ``c``-th non-pivot slot.  ``perm[k]`` is the
    input slot that output slot ``k`` came from.  For a shrink, ``pivots``
    and ``g`` describe the underlying expansion of the dual family, with
    pivots translated back to input slots.
    """

    direction: Direction
    m_in: int
    m_out: int
    pivots: tuple[int, ...]
    g: tuple[tuple[RatFunc, ...], ...]
    family_in: ChartFamily
    family_out: ChartFamily
    perm: tuple[int, ...]

    @property
    def nonpivots(self) -> tuple[int, ...]:
        fam = self.family_in
        if self.direction is Direction.EXPAND:
            return tuple(j for j in range(fam.m + 1, fam.N + 1) if j not in self.pivots)
        return tuple(j for j in range(fam.m + 1) if j not in self.pivots)


@dataclass(frozen=True)
class ConormalParam(HyperplaneParam):
    """Hyperplanes containing the expanded planes; the last stored weight is 1."""

    unit_label: int = -1


def _require_params(fam: ChartFamily) -> None:
    if fam.n == 0:
        raise DimensionError("family has no parameters")


def phi_matrix(fam: ChartFamily) -> PhiMatrix:
    _require_params(fam)
    rows = []
    for name in fam.params:
        for i in range(fam.m + 1):
            rows.append(tuple(e.diff(name) for e in fam.f[i]))
    return PhiMatrix(fam, tuple(rows))


def _slot_perm_for(fam: ChartFamily, out: ChartFamily) -> tuple[int, ...]:
    inv = invert_perm(fam.coord_perm)
    return tuple(inv[label] for label in out.coord_perm)


def expand(fam: ChartFamily) -> ExpansionResult:
    """The expanding map: each plane goes to the span of itself and its first-order motion."""
    _require_params(fam)
    if fam.m >= fam.N:
        raise DimensionError(f"cannot expand: the planes already fill P^{fam.N}")
    m, N = fam.m, fam.N
    phi = phi_matrix(fam).rows()
    rank, cols = mat_rank_pivots(phi)
    if rank == 0:
        raise ConstantFamilyError()
    rest = [c for c in range(N - m) if c not in cols]
    A = [[row[c] for c in cols] for row in phi]
    B = [[row[c] for c in rest] for row in phi]
    g = mat_solve(A, B, fam.ring)

    f_out = []
    for i in range(m + 1):
        out_row = []
        for ci, c in enumerate(rest):
            acc = fam.f[i][c]
            for k, p in enumerate(cols):
                if not g[k][ci].is_zero() and not fam.f[i][p].is_zero():
                    acc = acc - g[k][ci] * fam.f[i][p]
            out_row.append(acc)
        f_out.append(out_row)
    for k in range(rank):
        f_out.append(list(g[k]))

    slots = list(range(m + 1)) + [m + 1 + c for c in cols] + [m + 1 + c for c in rest]
    perm_out = tuple(fam.coord_perm[s] for s in slots)
    out = ChartFamily(fam.field, N, m + rank, fam.params, f_out, perm_out)
    return ExpansionResult(
        Direction.EXPAND,
        m,
        m + rank,
        tuple(m + 1 + c for c in cols),
        tuple(tuple(r) for r in g),
        fam,
        out,
        tuple(slots),
    )


def shrink(fam: ChartFamily) -> ExpansionResult:
    """The shrinking map, computed as dual, expand, dual.

    ``m_out`` is -1 when the dual expansion fills the whole dual space; the
    output family then has no rows.
    """
    inner = expand(dual_family(fam))
    out = dual_family(inner.family_out)
    N = fam.N
    pivots = tuple(sorted(N - p for p in inner.pivots))
    return ExpansionResult(
        Direction.SHRINK,
        fam.m,
        out.m,
        pivots,
        inner.g,
        fam,
        out,
        _slot_perm_for(fam, out),
    )


def conormal_param(fam: ChartFamily, stem: str = "s") -> ConormalParam:
    """Hyperplanes containing the expanded plane, affine in the dual fibre.

    Fibre weights are ``s<k>`` for output slots ``k = m+ + 1 .. N-1``; the
    weight of slot ``N`` is fixed to 1, so the hyperplane coefficient of the
    coordinate carried by that slot is -1.
    """
    res = expand(fam)
    out = res.family_out
    if out.m >= out.N:
        raise DimensionError("expanded planes fill P^N; no hyperplane contains them")
    names = out.ring.fresh(stem, out.N - out.m - 1, start=out.m + 1)
    ring = out.ring.extend(names)
    weights = [ring.rat_gen(nm) for nm in names] + [ring.rat(1)]
    coeffs = _to_labels(_hyperplane_coeffs(out, weights), out.coord_perm)
    return ConormalParam(fam.field, fam.N, ring.params, tuple(coeffs), tuple(names), out.coord_perm[out.N])


def point_family(variety: ProjParam, coord_perm: tuple[int, ...] | None = None) -> ChartFamily:
    """The m = 0 family of a parametrized variety whose coordinate 0 is 1.

    With ``coord_perm`` given, ``variety.coords`` are read in stored-slot
    order and the chart carries that permutation.
    """
    if not variety.coords[0].is_one():
        raise ChartError("coordinate 0 is not identically 1; re-chart the variety first")
    return ChartFamily(
        variety.field, variety.N, 0, variety.params, [list(variety.coords[1:])], coord_perm or ()
    )


def gauss_map(variety: ProjParam) -> ExpansionResult:
    """Gauss map of a parametrized variety: the expansion of its point family."""
    if variety.fiber_params:
        raise DimensionError("gauss_map expects a variety without fibre parameters")
    return expand(point_family(variety))


def promote_fibers(proj: ProjParam) -> ProjParam:
    """Treat every parameter of ``proj`` (fibre ones included) as a base parameter."""
    return ProjParam(proj.field, proj.N, proj.params, proj.coords, ())
