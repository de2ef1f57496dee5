"""Closed frequent sequential patterns and candidate routine extraction.

Patterns are gapped subsequences of segments; the support of a pattern is the
fraction of segments containing it.  The miner enumerates prefixes depth-first
and uses bidirectional closure checking with BackScan pruning, so identical
segments collapse to a single chain of prefixes instead of every subsequence.
"""

from __future__ import annotations

import bisect
import math
import statistics
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .log_model import UiEvent
from .validation import check_criterion, check_fraction

__all__ = [
    "CandidateRoutine",
    "NoMatch",
    "PatternScore",
    "RoutineInstance",
    "SequentialPattern",
    "extract_candidates",
    "is_subsequence",
    "match_occurrences",
    "mine_closed_patterns",
    "rank_patterns",
    "score_pattern",
]


class NoMatch(ValueError):
    pass


@dataclass(frozen=True)
class SequentialPattern:
    symbols: tuple
    support: float
    count: int
    # segment index -> greedy leftmost embedding
    occurrences: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class PatternScore:
    frequency: int
    length: int
    coverage: float
    cohesion: float

    def value(self, criterion: str) -> float:
        return getattr(self, criterion)


@dataclass(frozen=True)
class RoutineInstance:
    events: tuple[UiEvent, ...]
    # positions of the events in the filtered log
    log_indices: tuple[int, ...]


@dataclass(frozen=True)
class CandidateRoutine:
    pattern: SequentialPattern
    instances: tuple[RoutineInstance, ...]
    score: PatternScore

    @property
    def symbols(self) -> tuple:
        return self.pattern.symbols

    def __len__(self) -> int:
        return len(self.pattern.symbols)


def is_subsequence(pattern: Sequence, seq: Sequence) -> bool:
    it = iter(seq)
    return all(any(x == y for y in it) for x in pattern)


def match_occurrences(pattern: Sequence, segment: Sequence) -> tuple[int, ...]:
    """Greedy leftmost embedding of ``pattern`` in ``segment``."""
    out = []
    pos = 0
    for sym in pattern:
        while pos < len(segment) and segment[pos] != sym:
            pos += 1
        if pos == len(segment):
            raise NoMatch("pattern does not occur in segment")
        out.append(pos)
        pos += 1
    return tuple(out)


class _Seq:
    __slots__ = ("items", "where")

    def __init__(self, items: tuple):
        self.items = items
        self.where: dict = {}
        for i, x in enumerate(items):
            self.where.setdefault(x, []).append(i)

    def next_after(self, item, pos: int) -> int | None:
        plist = self.where.get(item)
        if not plist:
            return None
        j = bisect.bisect_right(plist, pos)
        return plist[j] if j < len(plist) else None

    def last_before(self, item, pos: int) -> int | None:
        plist = self.where.get(item)
        if not plist:
            return None
        j = bisect.bisect_left(plist, pos)
        return plist[j - 1] if j > 0 else None


def _periods(seq: _Seq, pattern: tuple, first: tuple, semi: bool) -> list[set]:
    """Item sets of the i-th (semi-)maximum periods of ``pattern`` in ``seq``."""
    n = len(pattern)
    bounds = [0] * n
    if semi:
        bounds[n - 1] = first[n - 1]
    else:
        bounds[n - 1] = seq.where[pattern[n - 1]][-1]
    for i in range(n - 2, -1, -1):
        bounds[i] = seq.last_before(pattern[i], bounds[i + 1])
    out = []
    for i in range(n):
        lo = first[i - 1] + 1 if i > 0 else 0
        out.append(set(seq.items[lo : bounds[i]]))
    return out


def _shared_period_item(seqs, pattern, embeddings, semi: bool) -> bool:
    common = None
    for sid, first in embeddings.items():
        periods = _periods(seqs[sid], pattern, first, semi)
        if common is None:
            common = periods
        else:
            common = [a & b for a, b in zip(common, periods)]
        if not any(common):
            return False
    return bool(common) and any(common)


def mine_closed_patterns(segments: Sequence[Sequence[Hashable]], min_support: float) -> list[SequentialPattern]:
    """All closed patterns whose support is at least ``min_support``.

    Results are sorted by symbols for reproducibility.
    """
    min_support = check_fraction(min_support, "min_support")
    n_seq = len(segments)
    if n_seq == 0:
        return []
    min_count = max(1, math.ceil(min_support * n_seq - 1e-9))
    seqs = [_Seq(tuple(s)) for s in segments]
    results: list[SequentialPattern] = []

    def grow(pattern: tuple, embeddings: dict):
        # embeddings: segment index -> greedy leftmost positions of ``pattern``
        count = len(embeddings)
        if _shared_period_item(seqs, pattern, embeddings, semi=True):
            return
        ext_counts: dict = {}
        for sid, first in embeddings.items():
            seq = seqs[sid]
            for item in set(seq.items[first[-1] + 1 :]):
                ext_counts[item] = ext_counts.get(item, 0) + 1
        forward_closed = all(c < count for c in ext_counts.values())
        if forward_closed and not _shared_period_item(seqs, pattern, embeddings, semi=False):
            results.append(SequentialPattern(pattern, count / n_seq, count, dict(embeddings)))
        for item in sorted(c for c, k in ext_counts.items() if k >= min_count):
            child = {}
            for sid, first in embeddings.items():
                pos = seqs[sid].next_after(item, first[-1])
                if pos is not None:
                    child[sid] = first + (pos,)
            grow(pattern + (item,), child)

    item_counts: dict = {}
    for seq in seqs:
        for item in seq.where:
            item_counts[item] = item_counts.get(item, 0) + 1
    for item in sorted(i for i, c in item_counts.items() if c >= min_count):
        grow((item,), {sid: (seq.where[item][0],) for sid, seq in enumerate(seqs) if item in seq.where})
    results.sort(key=lambda p: p.symbols)
    return results


def score_pattern(
    pattern: SequentialPattern,
    segments: Sequence[Sequence[Hashable]],
    total_events: int | None = None,
) -> PatternScore:
    """Frequency, length, coverage and cohesion of ``pattern``.

    Gaps of an occurrence are the non-pattern events strictly inside the
    matched span; cohesion is the length minus the median gap count.
    """
    occurrences = pattern.occurrences or {
        i: match_occurrences(pattern.symbols, s) for i, s in enumerate(segments) if is_subsequence(pattern.symbols, s)
    }
    length = len(pattern.symbols)
    if total_events is None:
        total_events = sum(len(s) for s in segments)
    gaps = [(occ[-1] - occ[0] + 1) - length for occ in occurrences.values()]
    cohesion = length - statistics.median(gaps) if gaps else 0.0
    coverage = (length * len(occurrences) / total_events) if total_events else 0.0
    return PatternScore(len(occurrences), length, coverage, cohesion)


def rank_patterns(
    patterns: Sequence[SequentialPattern],
    segments: Sequence[Sequence[Hashable]],
    criterion: str = "cohesion",
    total_events: int | None = None,
) -> list[tuple[SequentialPattern, PatternScore]]:
    """Best pattern first; ties go to longer, then more frequent, then
    lexicographically smaller patterns."""
    check_criterion(criterion)
    scored = [(p, score_pattern(p, segments, total_events)) for p in patterns]
    scored.sort(key=lambda ps: (-ps[1].value(criterion), -ps[1].length, -ps[1].frequency, ps[0].symbols))
    return scored


def _as_working(segments) -> list[list[tuple]]:
    working = []
    for seg in segments:
        if hasattr(seg, "keys") and hasattr(seg, "events"):
            working.append(list(zip(seg.keys, seg.events, seg.indices)))
        else:
            working.append([(k, None, None) for k in seg])
    return working


def extract_candidates(
    segments,
    min_support: float = 0.1,
    min_coverage: float = 0.05,
    criterion: str = "cohesion",
    total_events: int | None = None,
) -> list[CandidateRoutine]:
    """Repeatedly mine, take the best-ranked pattern and remove its instances.

    ``segments`` are :class:`~rpminer.segmentation.Segment` objects or plain
    symbol sequences.  Support is recomputed over the segments that still
    hold events; coverage is relative to ``total_events`` (default: the
    events in the initial segments).
    """
    check_fraction(min_support, "min_support")
    check_fraction(min_coverage, "min_coverage", allow_zero=True)
    check_criterion(criterion)
    working = _as_working(segments)
    if total_events is None:
        total_events = sum(len(w) for w in working)
    candidates = []
    while True:
        live = [w for w in working if w]
        if not live:
            break
        symbols = [tuple(k for k, _, _ in w) for w in live]
        patterns = mine_closed_patterns(symbols, min_support)
        if not patterns:
            break
        best, score = rank_patterns(patterns, symbols, criterion, total_events)[0]
        if score.coverage < min_coverage:
            break
        instances = []
        for sid in sorted(best.occurrences):
            positions = best.occurrences[sid]
            seg = live[sid]
            chosen = [seg[p] for p in positions]
            instances.append(
                RoutineInstance(
                    events=tuple(ev for _, ev, _ in chosen),
                    log_indices=tuple(ix for _, _, ix in chosen),
                )
            )
            drop = set(positions)
            seg[:] = [item for p, item in enumerate(seg) if p not in drop]
        candidates.append(CandidateRoutine(best, tuple(instances), score))
    return candidates
