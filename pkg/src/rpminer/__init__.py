"""Discovery of automatable routines from unsegmented user-interaction logs."""

from .aggregation import aggregate, build_graph, equivalent
from .automatability import (
    ElementIdentifier,
    MisalignedInstances,
    RoutineSpecification,
    TransformationStep,
    assess_routine,
    check_edit_ui,
    classify_ui,
)
from .estimator import PipelineError, PipelineResult, RoutineDiscoverer, run_pipeline
from .log_model import ContextSchema, UiEvent, UiLog, UiType, normalize, parse_log, read_log, write_log
from .mining import CandidateRoutine, extract_candidates, mine_closed_patterns
from .preprocess import NoiseFilter, run_filter_fixpoint
from .segmentation import build_cfg, detect_back_edges, segment_log

__version__ = "0.1.0"

__all__ = [
    "CandidateRoutine",
    "ContextSchema",
    "ElementIdentifier",
    "MisalignedInstances",
    "NoiseFilter",
    "PipelineError",
    "PipelineResult",
    "RoutineDiscoverer",
    "RoutineSpecification",
    "TransformationStep",
    "UiEvent",
    "UiLog",
    "UiType",
    "aggregate",
    "assess_routine",
    "build_cfg",
    "build_graph",
    "check_edit_ui",
    "classify_ui",
    "detect_back_edges",
    "equivalent",
    "extract_candidates",
    "mine_closed_patterns",
    "normalize",
    "parse_log",
    "read_log",
    "run_filter_fixpoint",
    "run_pipeline",
    "segment_log",
    "write_log",
]
