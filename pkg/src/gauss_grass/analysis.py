"""Jacobian ranks, developability, composition checks and curve diagnostics.

Ranks are generic ranks over the rational-function field.  Where a
statement is conditional, the result distinguishes "does not hold" from
"hypotheses not met" (:class:`Verdict`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from gauss_grass.algebra.linalg import field_rref, is_zero_matrix, mat_rank
from gauss_grass.algebra.poly import MultiPoly, RatFunc, Ring, raw_eval
from gauss_grass.charts import (
    ChartFamily,
    PlanePoint,
    ProjParam,
    _stored_projection,
    families_equal,
    plane_contains,
)
from gauss_grass.errors import (
    ChartError,
    ConstantFamilyError,
    DimensionError,
    GaussGrassError,
    IterationError,
    SingularPointError,
)
from gauss_grass.expand import ExpansionResult, expand, point_family, shrink

Matrix = list[list[RatFunc]]


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not applicable"

    def __bool__(self) -> bool:
        return self is Verdict.HOLDS


# Jacobian matrices of the expanding map


def _g_derivatives(res: ExpansionResult) -> dict[tuple[int, int, int], RatFunc]:
    """(e, mu-column, nu-row) -> derivative of g by the e-th parameter."""
    fam = res.family_in
    out = {}
    for e, name in enumerate(fam.params):
        for k, row in enumerate(res.g):
            for c, entry in enumerate(row):
                out[e, c, k] = entry.diff(name)
    return out


def dgamma_matrix(res: ExpansionResult) -> Matrix:
    """Rows: parameters.  Columns: (mu, nu) pairs, mu-major."""
    d = _g_derivatives(res)
    fam = res.family_in
    nmu = fam.N - res.m_out
    nnu = res.m_out - res.m_in
    return [[d[e, c, k] for c in range(nmu) for k in range(nnu)] for e in range(fam.n)]


def psi_matrix(res: ExpansionResult) -> Matrix:
    """Rows: pivot indices nu.  Columns: (mu, parameter) pairs, mu-major."""
    d = _g_derivatives(res)
    fam = res.family_in
    nmu = fam.N - res.m_out
    nnu = res.m_out - res.m_in
    return [[d[e, c, k] for c in range(nmu) for e in range(fam.n)] for k in range(nnu)]


def dgamma_rank(fam: ChartFamily, res: ExpansionResult | None = None) -> tuple[Matrix, int]:
    res = res or expand(fam)
    M = dgamma_matrix(res)
    return M, mat_rank(M)


def psi_rank(fam: ChartFamily, res: ExpansionResult | None = None) -> tuple[Matrix, int]:
    res = res or expand(fam)
    M = psi_matrix(res)
    return M, mat_rank(M)


def projection_matrix(fam: ChartFamily) -> Matrix:
    """``F[e][j] = sum_i eta^i d f^j_i / d z^e`` over the ring extended by the fibre names."""
    names = fam.ring.fresh("eta", fam.m)
    ring = fam.ring.extend(names)
    eta = [ring.rat(1)] + [ring.rat_gen(nm) for nm in names]
    F = []
    for name in fam.params:
        row = []
        for col in range(fam.N - fam.m):
            acc = ring.rat(0)
            for i in range(fam.m + 1):
                d = fam.f[i][col].diff(name)
                if not d.is_zero():
                    acc = acc + eta[i] * d.lift(ring)
            row.append(acc)
        F.append(row)
    return F


def projection_rank(fam: ChartFamily) -> tuple[int, bool]:
    """Rank of the differential of the universal projection, and whether it is n + m."""
    rank = fam.m + mat_rank(projection_matrix(fam))
    return rank, rank == fam.n + fam.m


def conormal_matrix(fam: ChartFamily, res: ExpansionResult | None = None) -> Matrix:
    """``G[e][nu] = sum_mu s_mu d g^mu_nu / d z^e`` with the last weight fixed to 1."""
    res = res or expand(fam)
    N, mp = fam.N, res.m_out
    if mp >= N:
        raise DimensionError("expanded planes fill P^N; the conormal fibre is empty")
    names = fam.ring.fresh("s", N - mp - 1, start=mp + 1)
    ring = fam.ring.extend(names)
    weights = [ring.rat_gen(nm) for nm in names] + [ring.rat(1)]
    d = _g_derivatives(res)
    G = []
    for e in range(fam.n):
        row = []
        for k in range(mp - res.m_in):
            acc = ring.rat(0)
            for c, w in enumerate(weights):
                v = d[e, c, k]
                if not v.is_zero():
                    acc = acc + w * v.lift(ring)
            row.append(acc)
        G.append(row)
    return G


def conormal_rank(fam: ChartFamily, res: ExpansionResult | None = None) -> tuple[Matrix, int]:
    res = res or expand(fam)
    G = conormal_matrix(fam, res)
    return G, fam.N - res.m_out - 1 + mat_rank(G)


# Composition checks


def verify_identity(fam: ChartFamily) -> Verdict:
    """Does shrinking the expanded family give back the family?

    Only asserted when the regrouped Jacobian has full rank ``m+ - m`` and
    the expanding map has Jacobian rank ``n``; otherwise NOT_APPLICABLE.
    """
    res = expand(fam)
    if psi_rank(fam, res)[1] != res.m_out - fam.m or dgamma_rank(fam, res)[1] != fam.n:
        return Verdict.NOT_APPLICABLE
    back = shrink(res.family_out)
    return Verdict.HOLDS if families_equal(back.family_out, fam) else Verdict.FAILS


def verify_inclusion_chain(fam: ChartFamily) -> bool:
    """x lies in sigma(gamma(x)), which lies in gamma(x), at the generic point."""
    res = expand(fam)
    back = shrink(res.family_out)
    x, sg, g = fam.symbolic_rows(), back.family_out.symbolic_rows(), res.family_out.symbolic_rows()
    return plane_contains(x, sg) and plane_contains(sg, g)


# Developability


@dataclass(frozen=True)
class AnalysisReport:
    n: int
    m: int
    m_plus: int
    m_minus: int | None
    rank_dgamma: int
    rank_psi: int
    rank_proj: int
    rank_conormal: int | None
    gamma_separable_dimension: int
    proj_separable_genfinite: bool
    developable: bool
    identity_composition: Verdict
    inclusion_chain: bool | None
    diagram_commutes: bool | None

    def items(self) -> list[tuple[str, object]]:
        return [(k, getattr(self, k)) for k in self.__dataclass_fields__]


def diagram_commutes(fam: ChartFamily, res: ExpansionResult | None = None) -> bool:
    """Gauss map of the swept variety equals the expanding map pulled back to the fibres.

    The swept variety is parametrized by the family parameters and the
    fibre coordinates together, read in stored-slot order so its first
    coordinate is 1.
    """
    res = res or expand(fam)
    names = fam.ring.fresh("eta", fam.m)
    ring = fam.ring.extend(names)
    eta = [ring.rat(1)] + [ring.rat_gen(nm) for nm in names]
    stored = _stored_projection(fam, eta)
    variety = ProjParam(fam.field, fam.N, ring.params, tuple(stored))
    try:
        gauss = expand(point_family(variety, fam.coord_perm))
    except ConstantFamilyError:
        return False
    return families_equal(gauss.family_out, res.family_out.lift(ring.params))


def developability(fam: ChartFamily) -> AnalysisReport:
    res = expand(fam)
    n, m = fam.n, fam.m
    rank_dg = dgamma_rank(fam, res)[1]
    rank_ps = psi_rank(fam, res)[1]
    rank_proj, sep = projection_rank(fam)
    rank_con = conormal_rank(fam, res)[1] if res.m_out < fam.N else None
    try:
        m_minus: int | None = shrink(fam).m_out
    except ConstantFamilyError:
        m_minus = None
    developable = sep and n == res.m_out - m
    identity = verify_identity(fam)
    try:
        inclusion: bool | None = verify_inclusion_chain(fam)
    except ConstantFamilyError:
        inclusion = None
    diagram = diagram_commutes(fam, res) if developable else None
    return AnalysisReport(
        n=n,
        m=m,
        m_plus=res.m_out,
        m_minus=m_minus,
        rank_dgamma=rank_dg,
        rank_psi=rank_ps,
        rank_proj=rank_proj,
        rank_conormal=rank_con,
        gamma_separable_dimension=rank_dg,
        proj_separable_genfinite=sep,
        developable=developable,
        identity_composition=identity,
        inclusion_chain=inclusion,
        diagram_commutes=diagram,
    )


# Iteration


class IterDirection(enum.Enum):
    GAMMA = "gamma"
    SIGMA = "sigma"


def iterate(fam: ChartFamily, direction: IterDirection | str, k: int) -> list[ChartFamily]:
    """Apply the expanding (GAMMA) or shrinking (SIGMA) map ``k`` times."""
    direction = IterDirection(direction) if isinstance(direction, str) else direction
    if k < 1:
        raise ValueError("iteration count must be at least 1")
    out = []
    cur = fam
    for step in range(1, k + 1):
        try:
            res = expand(cur) if direction is IterDirection.GAMMA else shrink(cur)
        except GaussGrassError as exc:
            raise IterationError(step, exc) from exc
        if res.m_out < 0:
            raise IterationError(step, DimensionError("shrinking reached the empty plane"))
        cur = res.family_out
        out.append(cur)
    return out


def drop_unused_params(fam: ChartFamily) -> ChartFamily:
    """Restrict to the parameters some chart entry actually depends on."""
    used = [p for p in fam.params if any(not e.diff(p).is_zero() for row in fam.f for e in row)]
    if len(used) == fam.n:
        return fam

    ring = Ring(tuple(used), fam.field)
    f = [[_restrict(e, ring) for e in row] for row in fam.f]
    return ChartFamily(fam.field, fam.N, fam.m, ring.params, f, fam.coord_perm)


def _restrict(e: RatFunc, ring) -> RatFunc:
    num = e.num.set_ring(ring.sp)
    den = e.den.set_ring(ring.sp)
    return RatFunc(ring, num, den)


def maximal_developable(variety: ProjParam) -> ChartFamily:
    """Closure of the fibres of the Gauss map, as a family over the variety's parameters.

    Parameters the result does not depend on are dropped.
    """
    gauss = expand(point_family(variety))
    try:
        back = shrink(gauss.family_out)
    except ConstantFamilyError:
        raise ConstantFamilyError("Gauss image is a point (parameters do not move the plane)") from None
    return drop_unused_params(back.family_out)


# Substitution and tangent-space oracle


def substitute(variety: ProjParam, poly: MultiPoly) -> RatFunc:
    """``poly(Z0, ..., ZN)`` with the variety's coordinates plugged in."""
    if poly.ring.n != variety.N + 1:
        raise DimensionError(f"polynomial has {poly.ring.n} variables, expected {variety.N + 1}")
    if not poly.is_homogeneous():
        raise DimensionError(f"polynomial {poly} is not homogeneous")
    ring = variety.ring
    acc = ring.rat(0)
    for mon, c in poly.raw.items():
        term = ring.rat(c)
        for k, e in enumerate(mon):
            if e:
                term = term * variety.coords[k] ** e
        acc = acc + term
    return acc


def substitute_check(variety: ProjParam, poly: MultiPoly) -> bool:
    return substitute(variety, poly).is_zero()


def _tangent_stack(variety: ProjParam) -> Matrix:
    rows = [list(variety.coords)]
    for name in variety.params:
        rows.append([c.diff(name) for c in variety.coords])
    return rows


@lru_cache(maxsize=256)
def _generic_tangent_rank(variety: ProjParam) -> int:
    return mat_rank(_tangent_stack(variety))


def tangent_oracle(variety: ProjParam, point: Sequence) -> PlanePoint:
    """Span of the coordinate vector and its partial derivatives at ``point``."""
    if variety.fiber_params:
        raise DimensionError("tangent_oracle expects a variety without fibre parameters")
    ring = variety.ring
    pt = ring.point(point)
    rows = []
    for row in _tangent_stack(variety):
        vals = []
        for e in row:
            d = raw_eval(e.den, pt)
            if not d:
                raise ChartError(f"denominator {e.denominator} vanishes at {tuple(point)}")
            vals.append(raw_eval(e.num, pt) / d)
        rows.append(vals)
    rref, _ = field_rref(rows, variety.field.domain)
    if len(rref) != _generic_tangent_rank(variety):
        raise SingularPointError(f"Jacobian drops rank at {tuple(point)}")
    return PlanePoint(variety.field, tuple(tuple(r) for r in rref))


# Curves


@dataclass(frozen=True)
class CurveReport:
    m: int
    m_plus: int
    m_minus: int
    two_m_identity: bool
    developable: bool
    plus_is_next: bool
    minus_is_previous: bool
    conditions_agree: bool
    rank_proj: int
    char2_dgamma_zero: bool | None

    def items(self) -> list[tuple[str, object]]:
        return [(k, getattr(self, k)) for k in self.__dataclass_fields__]


def curve_report(fam: ChartFamily) -> CurveReport:
    """Expansion/shrinking facts for a one-parameter family.

    ``char2_dgamma_zero`` is None outside characteristic 2.  In
    characteristic 2 it records whether the Jacobian matrix of the expanding
    map of *this* family vanishes identically; it is an observation, not a
    check of any finiteness hypothesis.
    """
    if fam.n != 1:
        raise DimensionError(f"curve_report needs a one-parameter family, got {fam.n} parameters")
    res = expand(fam)
    m_minus = shrink(fam).m_out
    rank_proj, sep = projection_rank(fam)
    developable = sep and fam.n == res.m_out - fam.m
    plus = res.m_out == fam.m + 1
    minus = m_minus == fam.m - 1
    char2 = None
    if fam.field.characteristic == 2:
        char2 = is_zero_matrix(dgamma_matrix(res))
    return CurveReport(
        m=fam.m,
        m_plus=res.m_out,
        m_minus=m_minus,
        two_m_identity=res.m_out + m_minus == 2 * fam.m,
        developable=developable,
        plus_is_next=plus,
        minus_is_previous=minus,
        conditions_agree=developable == plus == minus,
        rank_proj=rank_proj,
        char2_dgamma_zero=char2,
    )
