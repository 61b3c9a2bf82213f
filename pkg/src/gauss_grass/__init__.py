"""Exact expanding, shrinking and Gauss maps of families of linear subspaces."""

from gauss_grass.algebra import FieldSpec, MultiPoly, RatFunc, Ring, poly_parse, ratfunc_parse
from gauss_grass.analysis import (
    AnalysisReport,
    CurveReport,
    Verdict,
    conormal_rank,
    curve_report,
    developability,
    dgamma_rank,
    iterate,
    maximal_developable,
    projection_rank,
    psi_rank,
    substitute_check,
    tangent_oracle,
    verify_identity,
    verify_inclusion_chain,
)
from gauss_grass.charts import (
    ChartFamily,
    HyperplaneParam,
    PlanePoint,
    ProjParam,
    dual_family,
    families_equal,
    hyperplane_family,
    plane_at,
    plane_contains,
    rechart,
    universal_projection,
)
from gauss_grass.expand import (
    ConormalParam,
    ExpansionResult,
    PhiMatrix,
    conormal_param,
    expand,
    gauss_map,
    phi_matrix,
    shrink,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "ChartFamily",
    "ConormalParam",
    "CurveReport",
    "ExpansionResult",
    "FieldSpec",
    "HyperplaneParam",
    "MultiPoly",
    "PhiMatrix",
    "PlanePoint",
    "ProjParam",
    "RatFunc",
    "Ring",
    "Verdict",
    "conormal_param",
    "conormal_rank",
    "curve_report",
    "developability",
    "dgamma_rank",
    "dual_family",
    "expand",
    "families_equal",
    "gauss_map",
    "hyperplane_family",
    "iterate",
    "maximal_developable",
    "phi_matrix",
    "plane_at",
    "plane_contains",
    "poly_parse",
    "projection_rank",
    "psi_rank",
    "ratfunc_parse",
    "rechart",
    "shrink",
    "substitute_check",
    "tangent_oracle",
    "universal_projection",
    "verify_identity",
    "verify_inclusion_chain",
]
