"""Dense expander extraction and small clique minors, with exact verifiers."""

from .expansion import (
    ExpanderCertificate,
    ExpansionProfile,
    ExpansionViolation,
    ProfileKind,
    ScaleRangeEmpty,
    check_expander_exact,
    find_violation_heuristic,
    required_ratio,
)
from .extraction import (
    Case,
    ExtractionTrace,
    Outcome,
    PipelineConfig,
    StaleViolation,
    extract_expander,
    split_on_violation,
    verify_extraction_trace,
)
from .generators import GenSpec, GraphModel, gen, girth
from .graph import (
    Graph,
    average_degree,
    ball,
    connected_components,
    induced_subgraph,
    neighborhood,
    read_edgelist,
    write_edgelist,
)
from .minors import (
    ExpandingBall,
    HubsOrBalls,
    MinorSearchParams,
    SearchFailed,
    assemble_minor_balls,
    assemble_minor_hubs,
    find_hubs_or_balls,
    find_small_minor,
    grow_ball_path,
)
from .model import MinorModel
from .oracle import brute_force_minor, hadwiger_number, verify_minor_model
from .sweep import SweepConfig, experiment_sweep

__version__ = "0.1.0"
