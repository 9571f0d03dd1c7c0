"""Exact combinatorial toolkit for contracting curve configurations on log surfaces.

Everything is computed over exact rationals: curve configurations with
crossing points model the geometry, crepant pullback solves discrepancies,
classifiers grade the singularities, and two elementary contraction moves —
flop-type divisorial contractions and log blow-downs — drive the
decomposition and minimization pipelines, each emitting re-verifiable traces.
"""

from .crepant import (
    Base,
    Classification,
    ComponentImage,
    CrepantData,
    DivisorialCenter,
    LcCenter,
    NodeCenter,
    PointBase,
    SurfaceState,
    TargetBase,
    classify,
    correction_multiplicities,
    crepant_pullback,
    is_log_crepant,
    lc_centers,
    log_degree,
    pushforward_self_intersection,
)
from .decompose import (
    DecompositionTrace,
    MorphismSpec,
    VerifyResult,
    decompose_morphism,
    generate_crepant_pair,
    minimize,
    verify_trace,
)
from .errors import (
    BadCoefficientError,
    InvalidStateError,
    LogSurfaceError,
    NoAdmissibleTargetError,
    NotABlowdownError,
    NotCrepantError,
    NotFloppingError,
    NotLogTerminalError,
    NotNefError,
    NotNestedError,
    SingularMatrixError,
    StuckInPhase2Error,
    TheoremViolationError,
    UnknownIdError,
    UnknownTargetError,
)
from .moves import (
    BlowdownCheck,
    EpsilonChoice,
    FlopCheck,
    MoveKind,
    MoveRecord,
    NefReport,
    PicardRank,
    contract_blowdown,
    contract_flop,
    epsilon_bound,
    is_flop_minimal,
    is_log_blowdown,
    is_log_flopping,
    is_nef_on_marked,
    relative_picard_rank,
)
from .ratlin import SymMatrix, determinant, is_negative_definite, solve_symmetric
from .surface import (
    BlowdownSim,
    BlowUpTarget,
    CrossingPoint,
    Curve,
    CurveConfig,
    LocalBlowdownModel,
    Violation,
    at_point,
    blow_up,
    canonical_degree,
    connected_components,
    free_point_on,
    generic_point,
    gram,
    next_curve_id,
    next_point_id,
    pairing,
    smooth_point_blowdown,
    validate_config,
)

__version__ = "0.1.0"

__all__ = [
    "Base",
    "BadCoefficientError",
    "BlowdownCheck",
    "BlowdownSim",
    "BlowUpTarget",
    "Classification",
    "ComponentImage",
    "CrepantData",
    "CrossingPoint",
    "Curve",
    "CurveConfig",
    "DecompositionTrace",
    "DivisorialCenter",
    "EpsilonChoice",
    "FlopCheck",
    "InvalidStateError",
    "LcCenter",
    "LocalBlowdownModel",
    "LogSurfaceError",
    "MorphismSpec",
    "MoveKind",
    "MoveRecord",
    "NefReport",
    "NoAdmissibleTargetError",
    "NodeCenter",
    "NotABlowdownError",
    "NotCrepantError",
    "NotFloppingError",
    "NotLogTerminalError",
    "NotNefError",
    "NotNestedError",
    "PicardRank",
    "PointBase",
    "SingularMatrixError",
    "StuckInPhase2Error",
    "SurfaceState",
    "SymMatrix",
    "TargetBase",
    "TheoremViolationError",
    "UnknownIdError",
    "UnknownTargetError",
    "VerifyResult",
    "Violation",
    "at_point",
    "blow_up",
    "canonical_degree",
    "classify",
    "connected_components",
    "contract_blowdown",
    "contract_flop",
    "correction_multiplicities",
    "crepant_pullback",
    "decompose_morphism",
    "determinant",
    "epsilon_bound",
    "free_point_on",
    "generate_crepant_pair",
    "generic_point",
    "gram",
    "is_flop_minimal",
    "is_log_blowdown",
    "is_log_crepant",
    "is_log_flopping",
    "is_negative_definite",
    "is_nef_on_marked",
    "lc_centers",
    "log_degree",
    "minimize",
    "next_curve_id",
    "next_point_id",
    "pairing",
    "pushforward_self_intersection",
    "relative_picard_rank",
    "smooth_point_blowdown",
    "solve_symmetric",
    "validate_config",
    "verify_trace",
]
