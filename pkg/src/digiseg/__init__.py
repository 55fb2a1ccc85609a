"""Consistent digital line segments derived from total orders on the integers."""

from __future__ import annotations

from .conformance import (
    InducedOrder,
    Violation,
    Window,
    check_alternation,
    check_axioms,
    check_consequences,
    check_no_cross,
    check_translation_invariance,
    extract_order,
    recover_global_order,
)
from .errors import (
    DomainError,
    InconclusiveError,
    OracleError,
    OrderConflictError,
    OrderExtractionError,
    PreconditionError,
)
from .hausdorff import check_bound, check_subsegment_inequality, hausdorff_distance, point_to_euclidean_segment, sweep
from .highdim import check_axioms_d, find_mixed_s3_violation, segment_d
from .lines import Slope, classify_intersection, contains_own_segments, line_window, parallels_through
from .order import (
    NATURAL,
    POW2,
    IntegerInterval,
    NaturalOrder,
    PermutationOrder,
    Pow2Order,
    TotalOrder,
    compare,
    is_among_k_greatest,
    parse_order,
    sort_interval,
    two_adic_valuation,
    vdc_index,
)
from .segments import (
    BoxSystem,
    ExternalSystem,
    MonotonePath,
    OrderSystem,
    SpecialLineSystem,
    WaterlineSystem,
    parse_system,
    prolong,
    segment,
)

__version__ = "0.1.0"
