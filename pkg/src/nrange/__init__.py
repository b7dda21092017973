"""Numerical ranges, states, and geometric moduli of finite-dimensional
normed spaces.

The library builds norm expression trees (p-norms, absolute sums under 2-d
gauges, pullbacks, maxima, sums), evaluates their duals and states with
certified brackets, estimates spatial and intrinsic numerical ranges of
operators on embedded pairs, repairs near-attaining pairs in the
Bishop-Phelps-Bollobas style, and sweeps truncated operator families whose
two ranges split.  The ``nrange`` CLI drives the same code from task files.
"""

from .errors import (
    DimensionMismatch,
    NormDefinitionError,
    NRangeError,
    PreconditionError,
    RepairError,
    SpecError,
    UnitVectorError,
)
from .gauges import (
    AbsoluteGauge,
    CapReport,
    LpGauge,
    PiecewiseGauge,
    cap_diameter,
    delta_for_cap_diameter,
    face_height,
    gauge_from_name,
)
from .spaces import (
    AbsoluteSum,
    AxiomReport,
    DualValue,
    Lp,
    MaxOf,
    NormExpr,
    Pullback,
    SumOf,
    attaining_direction,
    check_norm_axioms,
)
from .duality import (
    ALPHA_GRID,
    DerivativeBracket,
    StateSet,
    dual_ball_vertices,
    state_set,
    tau,
)
from .optimize import SearchConfig, SearchResult, hull_interval, sphere_maximize
from .pairs import (
    AttainingPair,
    NearestState,
    OperatorSpec,
    RepairResult,
    RestrictionReport,
    SubspacePair,
    bpb_repair_absolute,
    bpb_repair_classical,
    check_state_restriction,
    identity_pair,
    nearest_state,
    pair_distance,
    sample_near_attaining,
)
from .ranges import (
    GapReport,
    IntrinsicBracket,
    SpatialEstimate,
    gap_report,
    max_intrinsic,
    range_points,
    sup_spatial,
)
from .moduli import (
    ModulusCurve,
    bpb_modulus,
    distance_to_states,
    modulus_of_convexity,
    ssd_modulus,
    uniform_smoothness_profile,
)
from .families import (
    FAMILY_IDS,
    FamilyInstance,
    GapProfile,
    make_family,
    reference_quotient,
    structured_opnorm,
    sweep,
)
from .specfile import SpecFile, TaskRecord, parse_spec
from .report import write_csv, write_curves

__version__ = "0.1.0"
