"""Moment maps, gradient flows, and left-invariant Ricci curvature for
structure-constant Lie algebras."""

from .checks import (
    PhiReport,
    SkewReport,
    SplitReport,
    compact_noncompact_split,
    normal_operator_check,
    phi_orthogonal_part,
    skew_at_minimal_check,
    symmetric_a_extraction,
)
from .errors import (
    InvariantError,
    MomentflowError,
    NotSemisimpleError,
    SchemaError,
    StagnationError,
)
from .kernels import backend_name
from .liealg import (
    CentralSeries,
    InnerProduct,
    JacobiReport,
    LieAlgebra,
    Subspace,
    adjoint_matrix,
    bracket,
    center,
    derivation_algebra,
    derived_subalgebra,
    g_adjoint,
    killing_form,
    lower_central_series,
    mean_curvature_vector,
    orthonormal_frame,
    restrict_to,
    validate_jacobi,
)
from .moment import (
    CompatReport,
    FlowConfig,
    FlowTrace,
    Representation,
    SelfAdjointReport,
    associated_inner_product,
    compatibility_split_check,
    gl_action,
    gradient,
    gradient_flow,
    infinitesimal_action,
    is_minimal,
    moment_map,
    moment_norm,
    self_adjointness_check,
    stabilizer_algebra,
    v_inner,
    v_norm,
)
from .ricci import (
    MetricLieAlgebra,
    MilnorFrame,
    MilnorGrid,
    NilsolitonFit,
    RicciReport,
    ScanReport,
    c_theta_operator,
    milnor_algebra,
    milnor_frame_ricci,
    milnor_min_direction_scan,
    nilsoliton_fit,
    ric_uk_model,
    ricci_left_invariant,
)

__version__ = "0.1.0"

__all__ = [
    "MomentflowError", "SchemaError", "InvariantError", "NotSemisimpleError",
    "StagnationError",
    "LieAlgebra", "InnerProduct", "Subspace", "JacobiReport", "CentralSeries",
    "validate_jacobi", "bracket", "adjoint_matrix", "killing_form", "center",
    "derivation_algebra", "derived_subalgebra", "lower_central_series",
    "g_adjoint", "mean_curvature_vector", "restrict_to", "orthonormal_frame",
    "MetricLieAlgebra", "RicciReport", "MilnorFrame", "MilnorGrid",
    "ScanReport", "NilsolitonFit", "ricci_left_invariant", "milnor_algebra",
    "milnor_frame_ricci", "milnor_min_direction_scan", "nilsoliton_fit",
    "c_theta_operator", "ric_uk_model",
    "Representation", "FlowConfig", "FlowTrace", "SelfAdjointReport",
    "CompatReport", "v_inner", "v_norm", "moment_map", "moment_norm",
    "is_minimal", "infinitesimal_action", "gl_action", "gradient",
    "gradient_flow",
    "stabilizer_algebra", "self_adjointness_check", "associated_inner_product",
    "compatibility_split_check",
    "PhiReport", "SplitReport", "SkewReport", "phi_orthogonal_part",
    "symmetric_a_extraction", "compact_noncompact_split",
    "skew_at_minimal_check", "normal_operator_check",
    "backend_name",
]
