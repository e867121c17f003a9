"""Dual pseudo-metric spaces of geodesic currents on hyperbolic surfaces."""

__version__ = "0.1.0"

from .errors import (
    BallTooLarge,
    CoincidentPoints,
    CurrentDualError,
    DegenerateSegment,
    Disconnected,
    InvalidMatrix,
    NonCompactBox,
    NonHyperbolicGenerator,
    NotConvexPosition,
    NotHyperbolic,
    RelatorViolation,
)
from .hyperbolic import (
    BoundaryInterval,
    BoundaryPoint,
    Box,
    Geodesic,
    Isometry,
    PlanePoint,
    Segment,
    apply,
    axis,
    cross_ratio_log,
    hyp_distance,
    opposite_box,
    trace_translation_length,
)
from .group import (
    GroupElement,
    SurfacePresentation,
    conjugacy_classes,
    cyclic_reduce,
    enumerate_ball,
    load_presentation,
)
from .currents import (
    AtomicCurrent,
    LiouvilleCurrent,
    SumCurrent,
    box_measure,
    has_atom,
    intersection_number,
    intersection_with_class,
    intersection_with_length,
    load_current,
    pencil_measure,
    point_transversal_measure,
    systole_estimate,
    transversal_measure,
)
from .dual_metric import (
    DeltaCertificate,
    delta_lower_bound_boxes,
    delta_via_double_transversals,
    distance_matrix,
    dual_distance,
    filling_ball_probe,
    four_point_defect,
    same_point,
    translation_length,
)
from .dual_graph import (
    Arrangement,
    DualGraph,
    build_arrangement,
    build_dual_graph,
    graph_distance,
    quotient_classes,
    render_svg,
)
from .checks import (
    DecompositionSpec,
    EpsilonRelationReport,
    coboundedness_probe,
    decomposition_current,
    fixed_point_probe,
    gh_epsilon_related,
    verify_chain_distance,
    verify_delta_decomposition,
    verify_piece_intersection,
    verify_special_curves,
)
