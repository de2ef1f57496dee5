"""End-to-end routine discovery as a scikit-learn style estimator."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Sequence

from sklearn.base import BaseEstimator

from .aggregation import SELECTIONS, aggregate, equivalent
from .automatability import RoutineSpecification, assess_routine
from .log_model import ContextSchema, NormalizedEvent, UiEvent, UiLog, normalize
from .mining import CandidateRoutine, extract_candidates, is_subsequence, match_occurrences
from .preprocess import filter_overwritten_edits, run_filter_fixpoint
from .segmentation import ControlFlowGraph, LoopAnalysis, Segment, analyse_loops, build_cfg, segment_log
from .synthesis import DEFAULT_DEPTH
from .validation import check_criterion, check_fraction, check_log

__all__ = ["PipelineError", "PipelineResult", "RoutineDiscoverer", "run_pipeline"]

log = logging.getLogger(__name__)

STAGES = ("preprocessing", "segmentation", "candidates", "automatability", "aggregation", "total")


class PipelineError(RuntimeError):
    """An unexpected failure inside one pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage} stage failed: {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineResult:
    log: UiLog
    filtered: UiLog
    # position in ``log`` of every event of ``filtered``
    kept: tuple[int, ...]
    normalized: list[NormalizedEvent]
    cfg: ControlFlowGraph | None
    loops: LoopAnalysis | None
    segments: list[Segment]
    candidates: list[CandidateRoutine]
    specifications: list[RoutineSpecification]
    routines: list[RoutineSpecification]
    timings: dict[str, float] = field(default_factory=dict)

    def original_indices(self, filtered_indices: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.kept[i] for i in filtered_indices)

    @property
    def total_coverage(self) -> float:
        if not self.filtered:
            return 0.0
        covered = {i for c in self.candidates for inst in c.instances for i in inst.log_indices}
        return len(covered) / len(self.filtered)


def _kept_positions(original: Sequence[UiEvent], filtered: Sequence[UiEvent]) -> tuple[int, ...]:
    out = []
    j = 0
    for event in filtered:
        while original[j] is not event:
            j += 1
        out.append(j)
        j += 1
    return tuple(out)


def _drop_overwritten(segment: Segment) -> Segment:
    kept = filter_overwritten_edits(segment.events)
    if len(kept) == len(segment.events):
        return segment
    keep_ids = {id(e) for e in kept}
    picks = [i for i, e in enumerate(segment.events) if id(e) in keep_ids]
    return Segment(
        events=tuple(segment.events[i] for i in picks),
        indices=tuple(segment.indices[i] for i in picks),
        keys=tuple(segment.keys[i] for i in picks),
    )


def _preprocess(log_events: UiLog, schema: ContextSchema | None):
    filtered = run_filter_fixpoint(log_events, (1, 2))
    return filtered, _kept_positions(log_events, filtered), normalize(filtered, schema)


def _segment(filtered: UiLog, norm: list[NormalizedEvent]):
    if not norm:
        return None, None, []
    cfg = build_cfg(norm)
    loops = analyse_loops(cfg)
    segments = [_drop_overwritten(s) for s in segment_log(filtered, norm, loops.back_edges)]
    return cfg, loops, [s for s in segments if len(s)]


def run_pipeline(
    log_events,
    schema: ContextSchema | None = None,
    min_support: float = 0.1,
    min_coverage: float = 0.05,
    criterion: str = "cohesion",
    depth: int = DEFAULT_DEPTH,
    selection: str = "length",
) -> PipelineResult:
    check_fraction(min_support, "min_support")
    check_fraction(min_coverage, "min_coverage", allow_zero=True)
    check_criterion(criterion)
    if selection not in SELECTIONS:
        raise ValueError(f"selection must be one of {SELECTIONS}, got {selection!r}")
    log_events = check_log(log_events)
    timings: dict[str, float] = {}
    start = time.perf_counter()

    @contextmanager
    def stage(name: str):
        began = time.perf_counter()
        try:
            yield
        except Exception as exc:
            raise PipelineError(name, exc) from exc
        timings[name] = time.perf_counter() - began

    with stage("preprocessing"):
        filtered, kept, norm = _preprocess(log_events, schema)
    with stage("segmentation"):
        cfg, loops, segments = _segment(filtered, norm)
    with stage("candidates"):
        candidates = extract_candidates(segments, min_support, min_coverage, criterion, total_events=len(filtered))
    with stage("automatability"):
        specs = [assess_routine(c, depth=depth) for c in candidates]
    with stage("aggregation"):
        routines = aggregate(specs, selection)
    timings["total"] = time.perf_counter() - start
    log.info(
        "%d events, %d after filtering, %d segments, %d candidates, %d routines",
        len(log_events), len(filtered), len(segments), len(candidates), len(routines),
    )
    return PipelineResult(
        log_events, filtered, kept, norm, cfg, loops, segments, candidates, specs, routines, timings
    )


class RoutineDiscoverer(BaseEstimator):
    """Discover automatable routines in an unsegmented UI log.

    Parameters
    ----------
    min_support : float, default=0.1
        Minimum fraction of segments a pattern must occur in.
    min_coverage : float, default=0.05
        Extraction stops once the best pattern covers less of the log.
    criterion : {"frequency", "length", "coverage", "cohesion"}, default="cohesion"
        Pattern ranking criterion.
    schema : ContextSchema or dict, optional
        Context parameters per UI type; defaults to the bundled schema.
    depth_bound : int, default=4
        Maximum number of operations in a synthesized transformation.
    selection : {"length", "frequency", "duration"}, default="length"
        How equivalent routines are reduced to one.

    Attributes
    ----------
    result_ : PipelineResult
    routines_ : list of RoutineSpecification
    """

    def __init__(
        self,
        min_support=0.1,
        min_coverage=0.05,
        criterion="cohesion",
        schema=None,
        depth_bound=DEFAULT_DEPTH,
        selection="length",
    ):
        self.min_support = min_support
        self.min_coverage = min_coverage
        self.criterion = criterion
        self.schema = schema
        self.depth_bound = depth_bound
        self.selection = selection

    def _schema(self) -> ContextSchema | None:
        if self.schema is None or isinstance(self.schema, ContextSchema):
            return self.schema
        return ContextSchema(self.schema)

    def fit(self, X, y=None):
        if not isinstance(self.depth_bound, int) or self.depth_bound < 0:
            raise ValueError(f"depth_bound must be a non-negative int, got {self.depth_bound!r}")
        self.result_ = run_pipeline(
            X,
            schema=self._schema(),
            min_support=self.min_support,
            min_coverage=self.min_coverage,
            criterion=self.criterion,
            depth=self.depth_bound,
            selection=self.selection,
        )
        self.routines_ = self.result_.routines
        return self

    def discover(self, X) -> list[RoutineSpecification]:
        return self.fit(X).routines_

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise RuntimeError("RoutineDiscoverer is not fitted yet; call fit() first")

    def predict(self, X) -> list[int]:
        """Routine index (into ``routines_``) of every event of ``X``, or -1.

        ``X`` is segmented like the training log; within each segment the
        routines are matched greedily in order.
        """
        self._check_fitted()
        events = check_log(X)
        labels = [-1] * len(events)
        filtered, kept, norm = _preprocess(events, self._schema())
        _, _, segments = _segment(filtered, norm)
        patterns = [r.candidate.symbols for r in self.routines_]
        for seg in segments:
            remaining = list(range(len(seg)))
            for label, pattern in enumerate(patterns):
                keys = [seg.keys[i] for i in remaining]
                if not pattern or not is_subsequence(pattern, keys):
                    continue
                hit = match_occurrences(pattern, keys)
                for p in hit:
                    labels[kept[seg.indices[remaining[p]]]] = label
                taken = {remaining[p] for p in hit}
                remaining = [i for i in remaining if i not in taken]
        return labels

    def fit_predict(self, X, y=None) -> list[int]:
        return self.fit(X).predict(X)

    def routine_of(self, spec: RoutineSpecification) -> int:
        """Index of the kept routine equivalent to ``spec`` (or -1)."""
        self._check_fitted()
        return next((i for i, r in enumerate(self.routines_) if equivalent(r, spec)), -1)
