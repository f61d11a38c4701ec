"""Invariant Hermitian geometry on complex Lie groups and the reduced
Strominger system: Maurer-Cartan coframes, the canonical connection family,
curvature traces, bundle curvature, and coupling-constant solvers."""

__version__ = "0.1.0"

from .core import (
    DEFAULT_TOL,
    PRUNE_TOL,
    ClassificationError,
    InputShapeError,
    LiestromError,
    MetricError,
    NotSemisimpleError,
    ParameterError,
    RepresentationError,
)
from .forms import FrameDifferential, InvForm, balanced_check, conjugate, d, ddbar_omega, generator, omega, trace_form, wedge
from .algebra import (
    ClassificationTag,
    HermitianMetricData,
    InvariantFrame,
    LieAlgebraData,
    ValidationReport,
    abelian,
    catalog,
    change_of_basis,
    classify3d,
    direct_sum,
    heisenberg,
    identity_frame,
    identity_metric,
    is_unimodular,
    killing_form,
    orthonormalize,
    sl2c,
    solvable_c,
    validate,
)
from .connection import (
    NAMED_T,
    ConnectionData,
    CurvatureData,
    PropositionReport,
    connection_form,
    curvature,
    curvature_at,
    first_chern,
    tr_r_wedge_r,
    tr_r_wedge_r_closed,
    verify_propositions,
)
from .strominger import (
    AlphaSolution,
    SolveReport,
    Verdict,
    case_c_check,
    flat_report,
    metric_search,
    semisimple_canonical_metric,
    solve_alpha_flat,
)
from .bundle import (
    RepresentationData,
    TwistData,
    curvature_F,
    heisenberg_standard_rep,
    hym_residual,
    make_twist,
    solve_full_system,
    sym_power_rep,
    tr_f_wedge_f,
    twist_search,
)
from .optim import SearchConfig, SearchResult
