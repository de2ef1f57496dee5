"""Functional-dependency discovery over small dependency tables.

Determinants of up to two columns are checked with stripped partitions:
``X -> target`` holds when refining the partition of ``X`` by the target
column does not split any class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Mapping, Sequence

__all__ = [
    "DependencyTable",
    "FunctionalDependency",
    "UnseenDeterminantValue",
    "discover_fd",
    "holds",
]

MAX_DETERMINANT = 2


class UnseenDeterminantValue(KeyError):
    """The determinant values were never observed, so the output is unknown."""


@dataclass(frozen=True)
class DependencyTable:
    """Rows of input values followed by the output value.

    ``columns`` names the input columns; ``provenance`` optionally records
    where each column's values came from (one entry per column).
    """

    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    provenance: tuple[Any, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        width = len(self.columns) + 1
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")
        if self.provenance and len(self.provenance) != len(self.columns):
            raise ValueError("provenance must have one entry per input column")

    @property
    def n_inputs(self) -> int:
        return len(self.columns)

    def column(self, j: int) -> tuple[str, ...]:
        return tuple(row[j] for row in self.rows)

    @property
    def target(self) -> tuple[str, ...]:
        return tuple(row[-1] for row in self.rows)


@dataclass(frozen=True)
class FunctionalDependency:
    determinant: tuple[int, ...]
    names: tuple[str, ...]
    mapping: Mapping[tuple, str] = field(compare=False)

    def __call__(self, values: Sequence[str]) -> str:
        key = tuple(values)
        if len(key) != len(self.determinant):
            raise ValueError(f"expected {len(self.determinant)} determinant value(s), got {len(key)}")
        try:
            return self.mapping[key]
        except KeyError:
            raise UnseenDeterminantValue(key) from None

    def sorted_items(self) -> list[tuple[tuple, str]]:
        return sorted(self.mapping.items())

    def __str__(self) -> str:
        lhs = ", ".join(self.names) or "{}"
        cases = "; ".join(f"{' & '.join(k) or '*'} -> {v}" for k, v in self.sorted_items())
        return f"{lhs} => {cases}"

    def to_json(self) -> dict:
        return {
            "kind": "dependency",
            "determinant": list(self.names),
            "mapping": [[list(k), v] for k, v in self.sorted_items()],
        }


def _partition(columns: Sequence[Sequence[Hashable]], n_rows: int) -> int:
    """Number of equivalence classes of rows under the given columns."""
    return len({tuple(col[i] for col in columns) for i in range(n_rows)})


def holds(table: DependencyTable, determinant: Sequence[int]) -> bool:
    cols = [table.column(j) for j in determinant]
    n = len(table.rows)
    return _partition(cols, n) == _partition(cols + [table.target], n)


def _admissible(table: DependencyTable, determinant: tuple[int, ...]) -> bool:
    n = len(table.rows)
    if not determinant:
        return len(set(table.target)) == 1
    classes = _partition([table.column(j) for j in determinant], n)
    # at least two distinct values, and some value seen twice: a key-like
    # column determines anything without explaining it
    return 2 <= classes < n


def discover_fd(table: DependencyTable, max_size: int = MAX_DETERMINANT) -> list[FunctionalDependency]:
    """All minimal admissible dependencies ``X -> target`` with ``|X| <= max_size``.

    A table with fewer than two rows yields nothing.  The empty determinant
    is reported when the target column is constant.  Other determinants
    must take at least two distinct values and must not be injective over
    the rows.  Results are ordered by size, then column positions.
    """
    if len(table.rows) < 2:
        return []
    found: list[tuple[int, ...]] = []
    for size in range(0, max_size + 1):
        for det in combinations(range(table.n_inputs), size):
            if any(set(f) <= set(det) for f in found):
                continue
            if _admissible(table, det) and holds(table, det):
                found.append(det)
    out = []
    for det in found:
        mapping = {tuple(row[j] for j in det): row[-1] for row in table.rows}
        out.append(FunctionalDependency(det, tuple(table.columns[j] for j in det), mapping))
    return out
