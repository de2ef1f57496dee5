"""Noise filters applied before and after segmentation.

Rule 1 drops selections, rule 2 drops copies whose content is never pasted,
rule 3 drops edits that are overwritten by a later edit of the same target
before any copy happens.  Rule 3 only makes sense inside one segment, so the
pipeline runs ``{1, 2}`` on the whole log and ``{3}`` per segment.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .log_model import COPY_TYPES, EDIT_TYPES, PASTE_TYPES, SELECT_TYPES, UiEvent, UiLog, UiType
from .validation import check_log

__all__ = [
    "NoiseFilter",
    "edit_target",
    "filter_dangling_copies",
    "filter_overwritten_edits",
    "filter_selections",
    "run_filter_fixpoint",
]


def filter_selections(log: Sequence[UiEvent]) -> UiLog:
    return UiLog(e for e in log if e.ui_type not in SELECT_TYPES)


def filter_dangling_copies(log: Sequence[UiEvent]) -> UiLog:
    keep = []
    pasted_since = False
    # walk backwards: a copy survives if a paste shows up before the next copy
    for event in reversed(log):
        if event.ui_type in COPY_TYPES:
            if pasted_since:
                keep.append(event)
            pasted_since = False
        else:
            if event.ui_type in PASTE_TYPES:
                pasted_since = True
            keep.append(event)
    keep.reverse()
    return UiLog(keep)


def edit_target(event: UiEvent) -> tuple:
    """Location an edit writes to: URL+ID on the web, the concrete cell
    (or range) in a spreadsheet."""
    p = event.params
    if event.ui_type is UiType.EDIT_FIELD:
        return ("web", p.get("url"), p.get("id"))
    if event.ui_type is UiType.EDIT_CELL:
        return ("cell", p.get("workbook"), p.get("worksheet"), p.get("column"), p.get("row"))
    return ("range", p.get("workbook"), p.get("worksheet"), p.get("columns"), p.get("rows"))


def filter_overwritten_edits(segment: Sequence[UiEvent]) -> list[UiEvent]:
    keep = []
    # targets edited later with no copy in between, by edit type
    overwritten: set[tuple] = set()
    for event in reversed(segment):
        if event.ui_type in COPY_TYPES:
            overwritten.clear()
        elif event.ui_type in EDIT_TYPES:
            target = (event.ui_type, edit_target(event))
            if target in overwritten:
                continue
            overwritten.add(target)
        keep.append(event)
    keep.reverse()
    return keep


RULES: dict[int, Callable[[Sequence[UiEvent]], Sequence[UiEvent]]] = {
    1: filter_selections,
    2: filter_dangling_copies,
    3: filter_overwritten_edits,
}


def run_filter_fixpoint(log: Sequence[UiEvent], rules: Iterable[int] = (1, 2)) -> UiLog:
    """Apply ``rules`` in the given order until a full pass removes nothing."""
    rules = tuple(rules)
    unknown = set(rules) - set(RULES)
    if unknown:
        raise ValueError(f"unknown filter rule(s) {sorted(unknown)}")
    if 3 in rules and set(rules) & {1, 2}:
        raise ValueError("rule 3 runs per segment, separately from rules 1 and 2")
    current = list(log)
    while True:
        before = len(current)
        for rule in rules:
            current = list(RULES[rule](current))
        if len(current) == before:
            return UiLog(current)


class NoiseFilter(TransformerMixin, BaseEstimator):
    """Transformer wrapper around :func:`run_filter_fixpoint`.

    Parameters
    ----------
    rules : tuple of int, default=(1, 2)
        Filtering rules to apply.  Use ``(3,)`` on individual segments.
    """

    def __init__(self, rules=(1, 2)):
        self.rules = rules

    def fit(self, X, y=None):
        check_log(X)
        return self

    def transform(self, X):
        return run_filter_fixpoint(check_log(X), self.rules)
