"""Standard charts of the Grassmannian G(m, P^N) and the objects built on them.

A :class:`ChartFamily` stores an (m+1) x (N-m) matrix ``f`` of rational
functions; the m-plane at a parameter value is the row span of ``[I | f]``.
Columns of ``[I | f]`` are *stored slots* ``0..N``; ``coord_perm[k]`` names
the homogeneous coordinate that slot ``k`` carries.  Every coordinate vector
handed back to callers (planes, projections, hyperplanes) is in coordinate
label order, i.e. with ``coord_perm`` already applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence, Union

from gauss_grass.algebra.field import FieldElem, FieldSpec
from gauss_grass.algebra.linalg import field_rref, mat_rank, mat_rank_pivots, mat_solve
from gauss_grass.algebra.parse import ratfunc_parse
from gauss_grass.algebra.poly import RatFunc, Ring
from gauss_grass.errors import ChartError, DimensionError, RingMismatchError


def identity_perm(N: int) -> tuple[int, ...]:
    return tuple(range(N + 1))


def invert_perm(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for k, label in enumerate(perm):
        inv[label] = k
    return tuple(inv)


@dataclass(frozen=True)
class ChartFamily:
    """Family of m-planes in P^N given on a standard chart.

    ``f[i][j - m - 1]`` is the chart entry for row ``i`` (``0 <= i <= m``) and
    slot ``j`` (``m+1 <= j <= N``).  ``m`` may also be ``-1`` (the empty
    plane, no rows) or ``N`` (all of P^N, no columns); these are the two
    ends of the duality involution.
    """

    field: FieldSpec
    N: int
    m: int
    params: tuple[str, ...]
    f: tuple[tuple[RatFunc, ...], ...]
    coord_perm: tuple[int, ...] = dc_field(default=())

    def __post_init__(self) -> None:
        N, m = self.N, self.m
        if N < 1 or not -1 <= m <= N:
            raise DimensionError(f"need -1 <= m <= N and N >= 1, got m={m}, N={N}")
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "f", tuple(tuple(row) for row in self.f))
        perm = tuple(self.coord_perm) if self.coord_perm else identity_perm(N)
        if sorted(perm) != list(range(N + 1)):
            raise DimensionError(f"coord_perm {perm} is not a permutation of 0..{N}")
        object.__setattr__(self, "coord_perm", perm)
        if len(self.f) != m + 1 or any(len(row) != N - m for row in self.f):
            got = f"{len(self.f)}x{len(self.f[0]) if self.f else 0}"
            raise DimensionError(f"chart matrix must be {m + 1}x{N - m}, got {got}")
        ring = self.ring
        for row in self.f:
            for e in row:
                if not isinstance(e, RatFunc) or e.ring != ring:
                    raise RingMismatchError(f"chart entry {e!r} is not a rational function over {ring}")

    @classmethod
    def from_strings(
        cls,
        field: FieldSpec,
        N: int,
        m: int,
        params: Sequence[str],
        grid: Sequence[Sequence[str]],
        coord_perm: Sequence[int] | None = None,
    ) -> ChartFamily:
        ring = Ring(tuple(params), field)
        f = [[ratfunc_parse(s, ring) for s in row] for row in grid]
        return cls(field, N, m, ring.params, f, tuple(coord_perm or ()))

    @cached_property
    def ring(self) -> Ring:
        return Ring(self.params, self.field)

    @property
    def n(self) -> int:
        return len(self.params)

    def entry(self, i: int, slot: int) -> RatFunc:
        return self.f[i][slot - self.m - 1]

    def is_constant(self) -> bool:
        return all(e.is_constant() for row in self.f for e in row)

    def stored_rows(self) -> list[list[RatFunc]]:
        """Rows of ``[I | f]`` in stored-slot order."""
        ring = self.ring
        one, zero = ring.rat(1), ring.rat(0)
        return [[one if k == i else zero for k in range(self.m + 1)] + list(self.f[i]) for i in range(self.m + 1)]

    def symbolic_rows(self) -> list[list[RatFunc]]:
        """Rows of ``[I | f]`` with columns placed at their coordinate labels."""
        return [_to_labels(row, self.coord_perm) for row in self.stored_rows()]

    def lift(self, params: Sequence[str]) -> ChartFamily:
        ring = Ring(tuple(params), self.field)
        f = [[e.lift(ring) for e in row] for row in self.f]
        return ChartFamily(self.field, self.N, self.m, ring.params, f, self.coord_perm)

    def grid_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.f]


def _to_labels(stored: Sequence, perm: Sequence[int]) -> list:
    out = [None] * len(stored)
    for k, v in enumerate(stored):
        out[perm[k]] = v
    return out


@dataclass(frozen=True)
class PlanePoint:
    """A single plane; ``rows`` span it and are in coordinate label order."""

    field: FieldSpec
    rows: tuple[tuple[FieldElem, ...], ...]

    @property
    def N(self) -> int:
        return len(self.rows[0]) - 1

    @property
    def dim(self) -> int:
        return len(self.canonical()) - 1

    def canonical(self) -> tuple[tuple[FieldElem, ...], ...]:
        """Reduced row-echelon form: a unique representative of the span."""
        rref, _ = field_rref(self.rows, self.field.domain)
        return tuple(tuple(r) for r in rref)

    def as_python(self) -> list[list]:
        return [[self.field.to_python(x) for x in row] for row in self.rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlanePoint):
            return NotImplemented
        return self.field == other.field and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())


@dataclass(frozen=True)
class ProjParam:
    """Parametrized points of P^N; ``fiber_params`` are the affine fibre coordinates."""

    field: FieldSpec
    N: int
    params: tuple[str, ...]
    coords: tuple[RatFunc, ...]
    fiber_params: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != self.N + 1:
            raise DimensionError(f"expected {self.N + 1} coordinates, got {len(self.coords)}")
        if all(c.is_zero() for c in self.coords):
            raise DimensionError("all coordinates vanish identically")

    @cached_property
    def ring(self) -> Ring:
        return Ring(self.params, self.field)

    @classmethod
    def from_strings(cls, field: FieldSpec, params: Sequence[str], coords: Sequence[str]) -> ProjParam:
        ring = Ring(tuple(params), field)
        return cls(field, len(coords) - 1, ring.params, tuple(ratfunc_parse(c, ring) for c in coords))

    @property
    def base_params(self) -> tuple[str, ...]:
        return tuple(p for p in self.params if p not in self.fiber_params)


@dataclass(frozen=True)
class HyperplaneParam:
    """Parametrized hyperplanes: ``coeffs[k]`` multiplies coordinate ``Z^k``."""

    field: FieldSpec
    N: int
    params: tuple[str, ...]
    coeffs: tuple[RatFunc, ...]
    fiber_params: tuple[str, ...] = ()

    @cached_property
    def ring(self) -> Ring:
        return Ring(self.params, self.field)


PlaneLike = Union[PlanePoint, ChartFamily, Sequence[Sequence[RatFunc]]]


def plane_at(fam: ChartFamily, point: Sequence) -> PlanePoint:
    """The plane of ``fam`` at a parameter value (rows ``[I | f(point)]``)."""
    pt = fam.ring.point(point)
    dom = fam.field.domain
    rows = []
    for i in range(fam.m + 1):
        stored = [dom.one if k == i else dom.zero for k in range(fam.m + 1)]
        stored += [e.eval(pt) for e in fam.f[i]]
        rows.append(tuple(_to_labels(stored, fam.coord_perm)))
    return PlanePoint(fam.field, tuple(rows))


def plane_contains(inner: PlaneLike, outer: PlaneLike) -> bool:
    """True iff span(inner) is contained in span(outer)."""
    if isinstance(inner, PlanePoint) != isinstance(outer, PlanePoint):
        raise DimensionError("cannot compare a numeric plane with a symbolic one")
    if isinstance(inner, PlanePoint):
        if inner.N != outer.N or inner.field != outer.field:
            raise DimensionError("planes live in different projective spaces")
        dom = inner.field.domain
        r_out = len(field_rref(outer.rows, dom)[0])
        r_all = len(field_rref(list(outer.rows) + list(inner.rows), dom)[0])
        return r_all == r_out
    a = inner.symbolic_rows() if isinstance(inner, ChartFamily) else [list(r) for r in inner]
    b = outer.symbolic_rows() if isinstance(outer, ChartFamily) else [list(r) for r in outer]
    if not a:
        return True
    if not b:
        return False
    if len(a[0]) != len(b[0]):
        raise DimensionError("planes live in different projective spaces")
    if a[0][0].ring != b[0][0].ring:
        raise RingMismatchError("planes are parametrized over different rings")
    return mat_rank(b + a) == mat_rank(b)


def _stored_projection(fam: ChartFamily, eta: Sequence[RatFunc]) -> list[RatFunc]:
    """Point sum_i eta^i * row_i of ``[I | f]`` in stored-slot order (eta^0 = 1)."""
    ring = eta[0].ring
    coords = list(eta)
    for col in range(fam.N - fam.m):
        acc = ring.rat(0)
        for i in range(fam.m + 1):
            e = fam.f[i][col]
            if not e.is_zero():
                acc = acc + eta[i] * e.lift(ring)
        coords.append(acc)
    return coords


def universal_projection(fam: ChartFamily) -> ProjParam:
    """The swept variety: (1 : eta1 : ... : etam : sum eta^i f^j_i ...)."""
    if fam.m < 0:
        raise DimensionError("the empty plane sweeps nothing")
    names = fam.ring.fresh("eta", fam.m)
    ring = fam.ring.extend(names)
    eta = [ring.rat(1)] + [ring.rat_gen(nm) for nm in names]
    coords = _to_labels(_stored_projection(fam, eta), fam.coord_perm)
    return ProjParam(fam.field, fam.N, ring.params, tuple(coords), tuple(names))


def dual_family(fam: ChartFamily) -> ChartFamily:
    """The same family viewed as (N-m-1)-planes of the dual space.

    Transpose, negate, and reverse slot order: dual slot ``k`` is original
    slot ``N-k``.  Applying it twice returns the input unchanged.
    """
    N, m = fam.N, fam.m
    md = N - m - 1
    f = [[-fam.f[m - c][N - m - 1 - k] for c in range(m + 1)] for k in range(N - m)]
    perm = tuple(fam.coord_perm[N - k] for k in range(N + 1))
    return ChartFamily(fam.field, N, md, fam.params, f, perm)


def _hyperplane_coeffs(fam: ChartFamily, weights: Sequence[RatFunc]) -> list[RatFunc]:
    """Coefficients (stored order) of sum_j w_j * (sum_i f^j_i Z^i - Z^j)."""
    ring = weights[0].ring
    coeffs = []
    for i in range(fam.m + 1):
        acc = ring.rat(0)
        for col, w in enumerate(weights):
            e = fam.f[i][col]
            if not e.is_zero() and not w.is_zero():
                acc = acc + w * e.lift(ring)
        coeffs.append(acc)
    coeffs.extend(-w for w in weights)
    return coeffs


def hyperplane_family(fam: ChartFamily, stem: str = "zeta") -> HyperplaneParam:
    """Hyperplanes containing the planes of ``fam``, affine in the dual fibre.

    Fibre weights are ``zeta_{m+1} .. zeta_{N-1}`` with the last weight fixed
    to 1.
    """
    if fam.m >= fam.N:
        raise DimensionError("no hyperplane contains all of P^N")
    names = fam.ring.fresh(stem, fam.N - fam.m - 1, start=fam.m + 1)
    ring = fam.ring.extend(names)
    weights = [ring.rat_gen(nm) for nm in names] + [ring.rat(1)]
    coeffs = _to_labels(_hyperplane_coeffs(fam, weights), fam.coord_perm)
    return HyperplaneParam(fam.field, fam.N, ring.params, tuple(coeffs), tuple(names))


def incidence(point: Sequence[RatFunc], hyperplane: Sequence[RatFunc]) -> RatFunc:
    """Pairing sum_k Z_k * Z^k of two coordinate vectors over a common ring."""
    ring = point[0].ring
    acc = ring.rat(0)
    for a, b in zip(point, hyperplane):
        if not a.is_zero() and not b.is_zero():
            acc = acc + a * b
    return acc


def rechart(fam: ChartFamily, coord_perm: Sequence[int]) -> ChartFamily:
    """Express the same family on the chart whose slots carry ``coord_perm``.

    Raises :class:`ChartError` when the generic plane is not in that chart.
    """
    coord_perm = tuple(coord_perm)
    if coord_perm == fam.coord_perm:
        return fam
    if fam.m < 0 or fam.m == fam.N:
        return ChartFamily(fam.field, fam.N, fam.m, fam.params, fam.f, coord_perm)
    labels = fam.symbolic_rows()
    rows = [[row[label] for label in coord_perm] for row in labels]
    head = [r[: fam.m + 1] for r in rows]
    tail = [r[fam.m + 1:] for r in rows]
    if mat_rank(head) != fam.m + 1:
        raise ChartError(f"the generic plane does not lie in the chart {coord_perm}")
    f = mat_solve(head, tail, fam.ring)
    return ChartFamily(fam.field, fam.N, fam.m, fam.params, f, coord_perm)


def families_equal(a: ChartFamily, b: ChartFamily) -> bool:
    """Equal as maps: same planes at the generic point, after aligning charts."""
    if (a.field, a.N, a.m, a.params) != (b.field, b.N, b.m, b.params):
        return False
    if a.coord_perm == b.coord_perm:
        return a.f == b.f
    try:
        b2 = rechart(b, a.coord_perm)
    except ChartError:
        return False
    return a.f == b2.f


def transform_family(fam: ChartFamily, T: Sequence[Sequence[int]]) -> ChartFamily:
    """Apply the projective change of coordinates Z -> Z T and re-chart.

    ``T`` is an invertible (N+1)x(N+1) integer matrix acting on row vectors.
    The result lives on the chart chosen by the leftmost pivots of the new
    plane, so ``coord_perm`` may become non-trivial.
    """
    ring = fam.ring
    Tm = [[ring.rat(int(x)) for x in row] for row in T]
    rows = fam.symbolic_rows()
    new = []
    for r in rows:
        out = []
        for j in range(fam.N + 1):
            acc = ring.rat(0)
            for k in range(fam.N + 1):
                if not r[k].is_zero() and not Tm[k][j].is_zero():
                    acc = acc + r[k] * Tm[k][j]
            out.append(acc)
        new.append(out)
    _, piv = mat_rank_pivots(new)
    rest = [j for j in range(fam.N + 1) if j not in piv]
    perm = tuple(piv) + tuple(rest)
    head = [[r[j] for j in perm[: fam.m + 1]] for r in new]
    tail = [[r[j] for j in perm[fam.m + 1:]] for r in new]
    f = mat_solve(head, tail, ring)
    return ChartFamily(fam.field, fam.N, fam.m, fam.params, f, perm)
