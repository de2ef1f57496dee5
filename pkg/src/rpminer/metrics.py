"""Evaluation measures: Jaccard similarity, coverage, precision/recall/F."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

__all__ = [
    "BothEmpty",
    "LengthMismatch",
    "RoutineQuality",
    "automatability_scores",
    "jaccard",
    "routine_quality",
    "total_coverage",
]


class BothEmpty(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


def jaccard(a: Iterable, b: Iterable) -> float:
    a, b = set(a), set(b)
    union = a | b
    if not union:
        raise BothEmpty("Jaccard similarity of two empty sets is undefined")
    return len(a & b) / len(union)


@dataclass(frozen=True)
class RoutineQuality:
    per_routine: tuple[float, ...]
    # index of the best-matching truth routine for each discovered routine
    matched: tuple[int, ...]
    average: float


def routine_quality(discovered: Sequence[Collection], truths: Sequence[Collection]) -> RoutineQuality:
    """Score each discovered routine by its best Jaccard match among the truths."""
    if not truths:
        raise ValueError("at least one ground-truth routine is required")
    if not discovered:
        warnings.warn("no discovered routines; quality defined as 0.0", RuntimeWarning, stacklevel=2)
        return RoutineQuality((), (), 0.0)
    scores, matched = [], []
    for routine in discovered:
        best = max(range(len(truths)), key=lambda j: (_safe_jaccard(routine, truths[j]), -j))
        scores.append(_safe_jaccard(routine, truths[best]))
        matched.append(best)
    return RoutineQuality(tuple(scores), tuple(matched), sum(scores) / len(scores))


def _safe_jaccard(a, b) -> float:
    try:
        return jaccard(a, b)
    except BothEmpty:
        return 1.0


def total_coverage(instance_indices: Iterable[Iterable[int]], log_length: int) -> float:
    """Share of the (filtered) log covered by routine instances.

    ``instance_indices`` holds, per instance, the log positions of its events.
    """
    covered = set()
    for indices in instance_indices:
        covered.update(indices)
    if log_length <= 0:
        return 0.0
    return len(covered) / log_length


def _ratio(num: int, den: int, name: str) -> float:
    if den == 0:
        warnings.warn(f"{name} undefined (zero denominator); reported as 0", RuntimeWarning, stacklevel=3)
        return 0.0
    return num / den


def automatability_scores(predicted: Sequence[bool], truth: Sequence[bool]) -> tuple[float, float, float]:
    """Precision, recall and F-score of per-UI automatable flags."""
    if len(predicted) != len(truth):
        raise LengthMismatch(f"{len(predicted)} predictions for {len(truth)} labels")
    tp = sum(1 for p, t in zip(predicted, truth) if p and t)
    fp = sum(1 for p, t in zip(predicted, truth) if p and not t)
    fn = sum(1 for p, t in zip(predicted, truth) if not p and t)
    precision = _ratio(tp, tp + fp, "precision")
    recall = _ratio(tp, tp + fn, "recall")
    if precision + recall == 0:
        warnings.warn("F-score undefined (precision and recall are 0); reported as 0", RuntimeWarning, stacklevel=2)
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)
