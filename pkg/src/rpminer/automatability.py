"""Automatability assessment of candidate routines.

Navigation, read, click and paste UIs are always deterministic.  An edit is
deterministic when its value can be computed from data seen earlier in the
same routine instance: either through a syntactic transformation of copied
or previously edited values, or through a functional dependency on earlier
values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

from .log_model import COPY_TYPES, EDIT_TYPES, PASTE_TYPES, UiEvent, UiType, key_label
from .mining import CandidateRoutine, RoutineInstance
from .synthesis import (
    DEFAULT_DEPTH,
    DependencyTable,
    FunctionalDependency,
    SyntacticTransformation,
    TransformationExample,
    discover_fd,
    discover_transformation,
)

__all__ = [
    "Determinism",
    "ElementIdentifier",
    "MisalignedInstances",
    "RoutineSpecification",
    "TransformationStep",
    "assess_routine",
    "check_edit_ui",
    "classify_ui",
    "element_of",
]

Function = Union[SyntacticTransformation, FunctionalDependency]


class MisalignedInstances(RuntimeError):
    """A routine instance does not line up with its pattern."""


class Determinism(enum.Enum):
    DETERMINISTIC = "deterministic"
    NEEDS_EDIT_CHECK = "needs-edit-check"


@dataclass(frozen=True, order=True)
class ElementIdentifier:
    """Where a value lives: a web element or a spreadsheet cell/range.

    Web elements are located by ``(url, id)``; spreadsheet locations by
    ``(workbook, worksheet, column, row)`` where ``row`` is ``None`` once the
    identifier has been generalized across instances.
    """

    application: str
    locator: tuple
    label: str = field(default="", compare=False)

    def generalized(self) -> "ElementIdentifier":
        if self.application == "sheet" and self.locator[-1] is not None:
            return ElementIdentifier(self.application, self.locator[:-1] + (None,), self.label)
        return self

    def __str__(self) -> str:
        return self.label or "/".join(str(x) for x in self.locator if x is not None)

    def to_json(self) -> dict:
        names = ("url", "id") if self.application == "web" else ("workbook", "worksheet", "column", "row")
        out = {"application": self.application, "label": str(self)}
        out.update({n: v for n, v in zip(names, self.locator) if v is not None})
        return out


def element_of(event: UiEvent) -> ElementIdentifier | None:
    p = event.params
    names = event.ui_type.parameters
    if names[:2] == ("url", "name"):
        return ElementIdentifier("web", (p.get("url"), p.get("id")), p.get("name") or p.get("id") or "")
    if names[:2] == ("workbook", "worksheet"):
        if "column" in names:
            col, row, kind = p.get("column"), p.get("row"), "Cell"
        elif "columns" in names:
            col, row, kind = p.get("columns"), p.get("rows"), "Range"
        else:
            return None
        return ElementIdentifier("sheet", (p.get("workbook"), p.get("worksheet"), col, row), f"{kind} {col}")
    return None


@dataclass(frozen=True)
class TransformationStep:
    """How the value of ``target`` is computed from the values of ``sources``."""

    sources: tuple[ElementIdentifier, ...]
    target: ElementIdentifier
    function: Function
    # position of the edit in the routine pattern
    position: int = field(default=-1, compare=False)
    examples: tuple[TransformationExample, ...] = field(default=(), compare=False, repr=False)

    def replay(self, inputs: Sequence[str]) -> str:
        return self.function(list(inputs))

    def to_json(self) -> dict:
        return {
            "position": self.position,
            "sources": [s.to_json() for s in self.sources],
            "target": self.target.to_json(),
            "function": {"text": str(self.function), **self.function.to_json()},
        }


@dataclass(frozen=True)
class RoutineSpecification:
    candidate: CandidateRoutine
    steps: tuple[TransformationStep, ...]
    flags: tuple[bool, ...]

    @property
    def automatable(self) -> bool:
        return all(self.flags)

    @property
    def deterministic_positions(self) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.flags) if f)

    def __len__(self) -> int:
        return len(self.candidate)


def classify_ui(ui_type: UiType) -> Determinism:
    if hasattr(ui_type, "ui_type"):
        ui_type = ui_type.ui_type
    return Determinism.NEEDS_EDIT_CHECK if ui_type in EDIT_TYPES else Determinism.DETERMINISTIC


def _check_alignment(candidate: CandidateRoutine, instances: Sequence[RoutineInstance]) -> None:
    n = len(candidate.symbols)
    for k, inst in enumerate(instances):
        if len(inst.events) != n:
            raise MisalignedInstances(f"instance {k} has {len(inst.events)} events, pattern has {n}")


def _walk_back(events: Sequence[UiEvent], n: int) -> list[tuple[int, ElementIdentifier, str]]:
    """Sources feeding the edit at position ``n``, in reading order."""
    target = element_of(events[n])
    found = []
    for i in range(n - 1, -1, -1):
        u2 = events[i]
        if u2.ui_type in PASTE_TYPES and element_of(u2) == target:
            for j in range(i - 1, -1, -1):
                u3 = events[j]
                if u3.ui_type in COPY_TYPES:
                    found.append((j, element_of(u3), u3.data_value or ""))
                    break
        elif u2.ui_type in EDIT_TYPES and element_of(u2) == target:
            found.append((i, target, u2.data_value or ""))
            break
    found.sort(key=lambda item: item[0])
    return found


def _dependency_table(instances: Sequence[RoutineInstance], n: int, candidate: CandidateRoutine) -> DependencyTable:
    positions = [
        i for i in range(n) if all(inst.events[i].data_value is not None for inst in instances)
    ]
    columns = tuple(f"{i}:{key_label(candidate.symbols[i])}" for i in positions)
    provenance = tuple((i, element_of(instances[0].events[i]).generalized()) for i in positions)
    rows = [
        tuple(inst.events[i].data_value for i in positions) + (inst.events[n].data_value or "",)
        for inst in instances
    ]
    return DependencyTable(columns, rows, provenance)


def check_edit_ui(
    candidate: CandidateRoutine,
    position: int,
    instances: Sequence[RoutineInstance] | None = None,
    depth: int = DEFAULT_DEPTH,
) -> tuple[bool, TransformationStep | None]:
    """Decide whether the edit at ``position`` of ``candidate`` is deterministic."""
    instances = list(candidate.instances if instances is None else instances)
    _check_alignment(candidate, instances)
    if not instances:
        return False, None
    target = element_of(instances[0].events[position]).generalized()

    examples = []
    source_sets = set()
    for inst in instances:
        found = _walk_back(inst.events, position)
        source_sets.add(tuple(elem.generalized() for _, elem, _ in found))
        examples.append(TransformationExample(tuple(v for _, _, v in found), inst.events[position].data_value or ""))

    if len(source_sets) > 1:
        # instances disagree on where the data comes from
        return False, None
    (sources,) = source_sets
    if sources:
        transform = discover_transformation(examples, depth=depth)
        if transform is not None:
            return True, TransformationStep(sources, target, transform, position, tuple(examples))

    table = _dependency_table(instances, position, candidate)
    fds = discover_fd(table)
    if not fds:
        return False, None
    # prefer the smallest determinant, then the columns nearest to the edit
    best = min(fds, key=lambda fd: (len(fd.determinant), [-j for j in fd.determinant]))
    fd_sources = tuple(table.provenance[j][1] for j in best.determinant)
    fd_examples = tuple(
        TransformationExample(tuple(row[j] for j in best.determinant), row[-1]) for row in table.rows
    )
    return True, TransformationStep(fd_sources, target, best, position, fd_examples)


def assess_routine(
    candidate: CandidateRoutine,
    instances: Sequence[RoutineInstance] | None = None,
    depth: int = DEFAULT_DEPTH,
) -> RoutineSpecification:
    """Flag every UI of ``candidate`` and collect the transformation steps."""
    instances = list(candidate.instances if instances is None else instances)
    _check_alignment(candidate, instances)
    # canonical order so the outcome does not depend on how instances were listed
    instances.sort(key=lambda inst: inst.log_indices)
    flags = []
    steps = []
    for pos in range(len(candidate.symbols)):
        ui_type = instances[0].events[pos].ui_type if instances else None
        if ui_type is None or classify_ui(ui_type) is Determinism.DETERMINISTIC:
            flags.append(ui_type is not None)
            continue
        ok, step = check_edit_ui(candidate, pos, instances, depth)
        flags.append(ok)
        if step is not None:
            steps.append(step)
    return RoutineSpecification(candidate, tuple(steps), tuple(flags))
