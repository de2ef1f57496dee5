"""Merging of equivalent routine specifications.

Two specifications are equivalent when their data transformation graphs
coincide, they use the same actions (as a multiset) and their button clicks
happen in the same order.  One representative is kept per class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .automatability import RoutineSpecification, TransformationStep
from .log_model import UiType, describe_key
from .synthesis import FunctionalDependency, SyntacticTransformation

__all__ = [
    "SELECTIONS",
    "DataTransformationGraph",
    "aggregate",
    "build_graph",
    "canonical_step",
    "equivalent",
    "fingerprint",
    "select_representative",
]

SELECTIONS = ("length", "frequency", "duration")

# Renderings used to probe a program on its class: digit runs and letter runs
# are replaced by each of these in turn.
_PROBES = (("0", "a"), ("12", "bc"), ("345", "DeF"))


def _probe(pattern, digits: str, letters: str) -> str:
    return "".join({"d": digits, "a": letters}.get(kind, text) for kind, text in pattern.items)


def fingerprint(function) -> tuple:
    """Behavioural identity of a discovered function."""
    if isinstance(function, FunctionalDependency):
        return ("fd", tuple(function.sorted_items()))
    if isinstance(function, SyntacticTransformation):
        classes = []
        for key, program in function.sorted_items():
            outputs = []
            for digits, letters in _PROBES:
                inputs = [_probe(p, digits, letters) for p in key]
                outputs.append(program(inputs))
            classes.append((tuple(str(p) for p in key), tuple(outputs)))
        return ("syntactic", tuple(classes))
    return ("opaque", str(function))


def canonical_step(step: TransformationStep) -> tuple:
    return (tuple(sorted(step.sources)), step.target, fingerprint(step.function))


@dataclass(frozen=True)
class DataTransformationGraph:
    vertices: frozenset

    @property
    def edges(self) -> frozenset:
        # derived from the vertices: d_i feeds d_j when d_i's target is a source of d_j
        return frozenset((a, b) for a in self.vertices for b in self.vertices if a[1] in b[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, DataTransformationGraph) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)


def build_graph(spec: RoutineSpecification) -> DataTransformationGraph:
    return DataTransformationGraph(frozenset(canonical_step(s) for s in spec.steps))


def _clicks(spec: RoutineSpecification) -> tuple:
    return tuple(k for k in spec.candidate.symbols if describe_key(k)["type"] == UiType.CLICK_BUTTON.value)


def _signature(spec: RoutineSpecification, multiset: bool = True) -> tuple:
    graph = build_graph(spec)
    if multiset:
        actions = tuple(sorted(Counter(spec.candidate.symbols).items()))
    else:
        actions = tuple(sorted(set(spec.candidate.symbols)))
    return (graph.vertices, actions, _clicks(spec))


def equivalent(a: RoutineSpecification, b: RoutineSpecification, multiset: bool = True) -> bool:
    """Same transformation graph, same actions and same button-click order.

    Actions are compared as multisets unless ``multiset`` is false.
    """
    return _signature(a, multiset) == _signature(b, multiset)


def _duration(spec: RoutineSpecification) -> float:
    spans = [
        (inst.events[-1].timestamp - inst.events[0].timestamp).total_seconds()
        for inst in spec.candidate.instances
        if inst.events and inst.events[0] is not None
    ]
    return sum(spans) / len(spans) if spans else 0.0


def _rank(spec: RoutineSpecification, order: int, selection: str) -> tuple:
    length = len(spec.candidate)
    freq = len(spec.candidate.instances)
    if selection == "length":
        return (length, -freq, order)
    if selection == "frequency":
        return (-freq, length, order)
    return (_duration(spec), length, -freq, order)


def select_representative(specs: Sequence[RoutineSpecification], selection: str = "length") -> int:
    """Index of the spec to keep among ``specs``."""
    if selection not in SELECTIONS:
        raise ValueError(f"selection must be one of {SELECTIONS}, got {selection!r}")
    return min(range(len(specs)), key=lambda i: _rank(specs[i], i, selection))


def aggregate(
    specs: Sequence[RoutineSpecification],
    selection: str = "length",
    multiset: bool = True,
) -> list[RoutineSpecification]:
    """Keep one specification per equivalence class, in discovery order.

    ``selection`` picks the representative: ``"length"`` (shortest, then
    most frequent), ``"frequency"`` (most frequent, then shortest) or
    ``"duration"`` (shortest mean instance duration).  Remaining ties go to
    the earliest discovered.
    """
    if selection not in SELECTIONS:
        raise ValueError(f"selection must be one of {SELECTIONS}, got {selection!r}")
    classes: dict[tuple, list[int]] = {}
    for i, spec in enumerate(specs):
        classes.setdefault(_signature(spec, multiset), []).append(i)
    keep = sorted(members[select_representative([specs[i] for i in members], selection)] for members in classes.values())
    return [specs[i] for i in keep]
