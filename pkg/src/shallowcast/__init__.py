"""Planning, verification and simulation of all-to-all dissemination over shallow overlay trees.

Streams are split into sub-streams, each carried by a broadcast tree of
height at most two (direct fan-out, or one relay then fan-out), which is
enough to hit the optimal aggregate throughput whenever the rates are
sustainable at all. All arithmetic is exact rational.
"""

from .model import (
    ModelError,
    NetworkSpec,
    OverlayTree,
    Rate,
    SubstreamMatrix,
    as_rate,
    format_rate,
    parse_rate,
    validate_spec,
)
from .planner import (
    AlgorithmTrace,
    TransmissionPlan,
    UnsustainableError,
    assign_substream_rates,
    build_overlay_trees,
    plan,
)
from .simulator import (
    CapacityExceededError,
    SimConfig,
    SimMetrics,
    compare_aggregate_throughput,
    optimal_aggregate_rate,
    simulate,
)
from .specfile import SpecFileError, dump_spec_file, load_spec_file
from .sustainability import (
    SustainabilityReport,
    Violation,
    condition_summaries,
    is_sustainable,
    max_sustainable_scale,
)
from .verifier import (
    CheckFailure,
    CheckResult,
    VerificationReport,
    brute_force_feasibility,
    verify_plan,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmTrace",
    "CapacityExceededError",
    "CheckFailure",
    "CheckResult",
    "ModelError",
    "NetworkSpec",
    "OverlayTree",
    "Rate",
    "SimConfig",
    "SimMetrics",
    "SpecFileError",
    "SubstreamMatrix",
    "SustainabilityReport",
    "TransmissionPlan",
    "UnsustainableError",
    "VerificationReport",
    "Violation",
    "as_rate",
    "assign_substream_rates",
    "brute_force_feasibility",
    "build_overlay_trees",
    "compare_aggregate_throughput",
    "condition_summaries",
    "dump_spec_file",
    "format_rate",
    "is_sustainable",
    "load_spec_file",
    "max_sustainable_scale",
    "optimal_aggregate_rate",
    "parse_rate",
    "plan",
    "simulate",
    "validate_spec",
    "verify_plan",
]
