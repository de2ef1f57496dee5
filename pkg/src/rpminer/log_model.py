"""UI event taxonomy, CSV log parsing and normalization.

A log is a CSV file with the header ``timestamp,type,p1,p2,p3,p4,p5,p6``.
Payload columns are positional: the meaning of ``p1..p6`` depends on the
event type (see :data:`PARAMETERS`).  Trailing empty cells mean the
parameter was not recorded.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "ActionKey",
    "ContextSchema",
    "EventGroup",
    "LogFormatError",
    "MalformedTimestamp",
    "NormalizedEvent",
    "OrderViolation",
    "UiEvent",
    "UiLog",
    "UiType",
    "UnknownUiType",
    "action_key",
    "compose_key",
    "describe_key",
    "key_label",
    "normalize",
    "parse_log",
    "read_log",
    "write_log",
]

HEADER = ("timestamp", "type", "p1", "p2", "p3", "p4", "p5", "p6")
ABSENT = "--"

ActionKey = str


class LogFormatError(ValueError):
    """Base class for errors raised while reading a UI log."""


class UnknownUiType(LogFormatError):
    pass


class MalformedTimestamp(LogFormatError):
    pass


class OrderViolation(LogFormatError):
    pass


class EventGroup(enum.Enum):
    NAVIGATION = "Navigation"
    READ = "Read"
    WRITE = "Write"


class UiType(enum.Enum):
    CREATE_NEW_TAB = "createNewTab"
    SELECT_TAB = "selectTab"
    CLOSE_TAB = "closeTab"
    NAVIGATE_TO = "navigateTo"
    ADD_WORKSHEET = "addWorksheet"
    SELECT_WORKSHEET = "selectWorksheet"
    SELECT_CELL = "selectCell"
    SELECT_RANGE = "selectRange"
    SELECT_FIELD = "selectField"
    COPY = "copy"
    COPY_CELL = "copyCell"
    COPY_RANGE = "copyRange"
    PASTE_INTO_CELL = "pasteIntoCell"
    PASTE_INTO_RANGE = "pasteIntoRange"
    PASTE = "paste"
    CLICK_BUTTON = "clickButton"
    CLICK_LINK = "clickLink"
    EDIT_FIELD = "editField"
    EDIT_CELL = "editCell"
    EDIT_RANGE = "editRange"

    @property
    def group(self) -> EventGroup:
        return _GROUPS[self]

    @property
    def parameters(self) -> tuple[str, ...]:
        return PARAMETERS[self]

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def application(self) -> str:
        return "Excel" if self in _EXCEL else "Web"

    @classmethod
    def from_name(cls, name: str) -> "UiType":
        """Resolve a canonical name (``copyCell``) or a display label
        (``Copy cell (Excel)``), case-insensitively."""
        folded = _fold(name)
        try:
            return _BY_FOLDED[folded]
        except KeyError:
            raise UnknownUiType(f"unknown UI type {name!r}") from None


_WEB_FIELD = ("url", "name", "id")
_CELL = ("workbook", "worksheet", "column", "row")
_RANGE = ("workbook", "worksheet", "columns", "rows")

PARAMETERS: dict[UiType, tuple[str, ...]] = {
    UiType.CREATE_NEW_TAB: ("id",),
    UiType.SELECT_TAB: ("url", "id", "title"),
    UiType.CLOSE_TAB: ("url", "id", "title"),
    UiType.NAVIGATE_TO: ("url",),
    UiType.ADD_WORKSHEET: ("workbook", "worksheet"),
    UiType.SELECT_WORKSHEET: ("workbook", "worksheet"),
    UiType.SELECT_CELL: _CELL + ("value",),
    UiType.SELECT_RANGE: _RANGE + ("value",),
    UiType.SELECT_FIELD: _WEB_FIELD + ("value",),
    UiType.COPY: _WEB_FIELD + ("value", "copied"),
    UiType.COPY_CELL: _CELL + ("value", "copied"),
    UiType.COPY_RANGE: _RANGE + ("value", "copied"),
    UiType.PASTE_INTO_CELL: _CELL + ("value", "pasted"),
    UiType.PASTE_INTO_RANGE: _RANGE + ("value", "pasted"),
    UiType.PASTE: _WEB_FIELD + ("value", "pasted"),
    UiType.CLICK_BUTTON: _WEB_FIELD + ("type",),
    UiType.CLICK_LINK: ("url", "inner_text", "href"),
    UiType.EDIT_FIELD: _WEB_FIELD + ("type", "value"),
    UiType.EDIT_CELL: _CELL + ("value",),
    UiType.EDIT_RANGE: _RANGE + ("value",),
}

_GROUPS = {
    t: EventGroup.NAVIGATION
    for t in (
        UiType.CREATE_NEW_TAB,
        UiType.SELECT_TAB,
        UiType.CLOSE_TAB,
        UiType.NAVIGATE_TO,
        UiType.ADD_WORKSHEET,
        UiType.SELECT_WORKSHEET,
        UiType.SELECT_CELL,
        UiType.SELECT_RANGE,
        UiType.SELECT_FIELD,
    )
}
_GROUPS.update({t: EventGroup.READ for t in (UiType.COPY, UiType.COPY_CELL, UiType.COPY_RANGE)})
_GROUPS.update({t: EventGroup.WRITE for t in UiType if t not in _GROUPS})

_EXCEL = {t for t, params in PARAMETERS.items() if params[0] == "workbook"}

_LABELS = {
    UiType.CREATE_NEW_TAB: "Create new tab (Web)",
    UiType.SELECT_TAB: "Select tab (Web)",
    UiType.CLOSE_TAB: "Close tab (Web)",
    UiType.NAVIGATE_TO: "Navigate to (Web)",
    UiType.ADD_WORKSHEET: "Add worksheet (Excel)",
    UiType.SELECT_WORKSHEET: "Select worksheet (Excel)",
    UiType.SELECT_CELL: "Select cell (Excel)",
    UiType.SELECT_RANGE: "Select range (Excel)",
    UiType.SELECT_FIELD: "Select field (Web)",
    UiType.COPY: "Copy (Web)",
    UiType.COPY_CELL: "Copy cell (Excel)",
    UiType.COPY_RANGE: "Copy range (Excel)",
    UiType.PASTE_INTO_CELL: "Paste into cell (Excel)",
    UiType.PASTE_INTO_RANGE: "Paste into range (Excel)",
    UiType.PASTE: "Paste (Web)",
    UiType.CLICK_BUTTON: "Click button (Web)",
    UiType.CLICK_LINK: "Click link (Web)",
    UiType.EDIT_FIELD: "Edit field (Web)",
    UiType.EDIT_CELL: "Edit cell (Excel)",
    UiType.EDIT_RANGE: "Edit range (Excel)",
}

_APP_SUFFIX = re.compile(r"\((web|excel)\)\s*$", re.IGNORECASE)


def _fold(name: str) -> str:
    name = _APP_SUFFIX.sub("", name.strip())
    return re.sub(r"[\s_\-]", "", name).lower()


_BY_FOLDED = {_fold(t.value): t for t in UiType}

# Rule groups used by filtering and automatability assessment.
SELECT_TYPES = frozenset({UiType.SELECT_CELL, UiType.SELECT_RANGE, UiType.SELECT_FIELD})
COPY_TYPES = frozenset({UiType.COPY, UiType.COPY_CELL, UiType.COPY_RANGE})
PASTE_TYPES = frozenset({UiType.PASTE, UiType.PASTE_INTO_CELL, UiType.PASTE_INTO_RANGE})
EDIT_TYPES = frozenset({UiType.EDIT_FIELD, UiType.EDIT_CELL, UiType.EDIT_RANGE})
CLICK_TYPES = frozenset({UiType.CLICK_BUTTON, UiType.CLICK_LINK})


@dataclass(frozen=True, eq=True)
class UiEvent:
    """One recorded user interaction.

    ``params`` holds the recorded payload in the type's parameter order.
    Parameters that were not recorded are simply missing from the mapping.
    """

    timestamp: datetime
    ui_type: UiType
    params: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        allowed = self.ui_type.parameters
        unknown = [name for name in self.params if name not in allowed]
        if unknown:
            raise ValueError(f"{self.ui_type.value} has no parameter(s) {unknown}")
        ordered = {name: self.params[name] for name in allowed if name in self.params}
        object.__setattr__(self, "params", ordered)

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.params.get(name, default)

    @property
    def data_value(self) -> str | None:
        """Value carried by the event: copied/pasted content or the edited value."""
        if self.ui_type in COPY_TYPES:
            return self.params.get("copied", self.params.get("value"))
        if self.ui_type in PASTE_TYPES:
            return self.params.get("pasted", self.params.get("value"))
        if self.ui_type in EDIT_TYPES:
            return self.params.get("value")
        return None


class UiLog(Sequence[UiEvent]):
    """Immutable, timestamp-ordered sequence of :class:`UiEvent`."""

    def __init__(self, events: Iterable[UiEvent] = ()):
        self._events = tuple(events)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return UiLog(self._events[index])
        return self._events[index]

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[UiEvent]:
        return iter(self._events)

    def __eq__(self, other) -> bool:
        if isinstance(other, UiLog):
            return self._events == other._events
        return NotImplemented

    def __repr__(self) -> str:
        return f"UiLog({len(self._events)} events)"


def _parse_timestamp(text: str, line: int) -> datetime:
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(raw)
    except ValueError:
        raise MalformedTimestamp(f"line {line}: bad timestamp {text!r}") from None
    return stamp.replace(microsecond=stamp.microsecond // 1000 * 1000)


def _rows(source) -> Iterator[list[str]]:
    if isinstance(source, (bytes, bytearray)):
        source = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        source = io.StringIO(source)
    elif isinstance(source, io.BufferedIOBase) or "b" in getattr(source, "mode", ""):
        source = io.TextIOWrapper(source, encoding="utf-8", newline="")
    yield from csv.reader(source)


def parse_log(source: Union[str, bytes, IO]) -> UiLog:
    """Parse CSV text (str, bytes or an open file) into a :class:`UiLog`.

    Raises :class:`UnknownUiType`, :class:`MalformedTimestamp` or
    :class:`OrderViolation`.  Equal timestamps keep file order.
    """
    rows = _rows(source)
    header = next(rows, None)
    if header is None:
        return UiLog()
    if tuple(h.strip().lower() for h in header[:2]) != HEADER[:2]:
        raise LogFormatError(f"unexpected header {header!r}")
    events = []
    previous = None
    for line, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise LogFormatError(f"line {line}: expected at least timestamp and type")
        stamp = _parse_timestamp(row[0], line)
        ui_type = UiType.from_name(row[1])
        values = list(row[2:])
        while values and (values[-1] == "" or values[-1] == ABSENT):
            values.pop()
        names = ui_type.parameters
        if len(values) > len(names):
            raise LogFormatError(
                f"line {line}: {ui_type.value} takes {len(names)} parameters, got {len(values)}"
            )
        params = {name: value for name, value in zip(names, values) if value != ABSENT}
        if previous is not None and stamp < previous:
            raise OrderViolation(f"line {line}: timestamp {row[0]!r} precedes the previous row")
        previous = stamp
        events.append(UiEvent(stamp, ui_type, params))
    return UiLog(events)


def read_log(path: Union[str, Path]) -> UiLog:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_log(fh)


def _format_timestamp(stamp: datetime) -> str:
    return stamp.isoformat(timespec="milliseconds")


def write_log(log: Iterable[UiEvent], target: Union[str, Path, IO, None] = None) -> str:
    """Serialize events to CSV.  Returns the text; also writes it to
    ``target`` (a path or a text file) when given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(HEADER)
    for event in log:
        values = []
        for name in event.ui_type.parameters:
            values.append(event.params.get(name, ABSENT))
        while values and values[-1] == ABSENT:
            values.pop()
        values += [""] * (6 - len(values))
        try:
            writer.writerow([_format_timestamp(event.timestamp), event.ui_type.label, *values])
        except csv.Error as exc:
            # NUL characters cannot be represented in CSV
            raise ValueError(f"cannot serialize {event.ui_type.value} event: {exc}") from None
    text = buf.getvalue()
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    elif target is not None:
        target.write(text)
    return text


class ContextSchema(Mapping[UiType, tuple[str, ...]]):
    """Which parameters of each UI type are context parameters.

    The schema is total: types missing from a user file fall back to the
    defaults shipped with the package.
    """

    def __init__(self, context: Mapping[Union[UiType, str], Sequence[str]] | None = None):
        table = dict(_default_context()) if context is None else {}
        if context is not None:
            table.update(_default_context())
            for name, params in context.items():
                ui_type = name if isinstance(name, UiType) else UiType.from_name(name)
                params = tuple(params)
                bad = [p for p in params if p not in ui_type.parameters]
                if bad:
                    raise ValueError(f"{ui_type.value}: {bad} are not parameters of this type")
                # keep the type's parameter order so keys do not depend on file order
                table[ui_type] = tuple(p for p in ui_type.parameters if p in params)
        self._table = table

    def __getitem__(self, ui_type: UiType) -> tuple[str, ...]:
        return self._table[ui_type]

    def __iter__(self):
        return iter(UiType)

    def __len__(self) -> int:
        return len(self._table)

    @classmethod
    def default(cls) -> "ContextSchema":
        return cls()

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ContextSchema":
        """Load a JSON object mapping UI type names to lists of context
        parameter names."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("context schema must be a JSON object")
        return cls(data)

    def to_dict(self) -> dict[str, list[str]]:
        return {t.value: list(self._table[t]) for t in UiType}


_DEFAULT_CONTEXT: dict[UiType, tuple[str, ...]] | None = None


def _default_context() -> dict[UiType, tuple[str, ...]]:
    global _DEFAULT_CONTEXT
    if _DEFAULT_CONTEXT is None:
        text = resources.files("rpminer").joinpath("default_schema.json").read_text("utf-8")
        raw = json.loads(text)
        _DEFAULT_CONTEXT = {UiType.from_name(k): tuple(v) for k, v in raw.items()}
        missing = set(UiType) - set(_DEFAULT_CONTEXT)
        if missing:
            raise RuntimeError(f"default schema misses {sorted(t.value for t in missing)}")
    return _DEFAULT_CONTEXT


@dataclass(frozen=True)
class NormalizedEvent:
    """A UI event reduced to its context parameters."""

    timestamp: datetime
    ui_type: UiType
    context: tuple[tuple[str, str | None], ...]
    origin_index: int

    @property
    def key(self) -> ActionKey:
        return action_key(self)

    def context_dict(self) -> dict[str, str | None]:
        return dict(self.context)


def normalize(log: Iterable[UiEvent], schema: ContextSchema | None = None) -> list[NormalizedEvent]:
    schema = schema if schema is not None else ContextSchema.default()
    out = []
    for index, event in enumerate(log):
        names = schema[event.ui_type]
        context = tuple((name, event.params.get(name)) for name in names)
        out.append(NormalizedEvent(event.timestamp, event.ui_type, context, index))
    return out


def compose_key(ui_type: Union[UiType, str], context: Iterable[tuple[str, str | None]]) -> ActionKey:
    """Action key of a UI type and its (name, value) context pairs."""
    name = ui_type.value if isinstance(ui_type, UiType) else UiType(ui_type).value
    # JSON keeps the key injective whatever characters the values contain
    return json.dumps([name, [list(pair) for pair in context]], ensure_ascii=False, separators=(",", ":"))


def action_key(event: NormalizedEvent) -> ActionKey:
    return compose_key(event.ui_type, event.context)


def describe_key(key: ActionKey) -> dict:
    """Structured form of an action key: ``{"type": ..., "context": {...}}``."""
    ui_type, context = json.loads(key)
    return {"type": ui_type, "context": {name: value for name, value in context}}


def key_label(key: ActionKey) -> str:
    """Short human label such as ``Edit field [Phone]``."""
    desc = describe_key(key)
    ui_type = UiType(desc["type"])
    ctx = desc["context"]
    detail = ctx.get("name") or ctx.get("column") or ctx.get("columns") or ctx.get("url") or ""
    base = ui_type.label.rsplit(" (", 1)[0]
    return f"{base} [{detail}]" if detail else base
