"""Synthetic UI logs with planted routines and ground truth.

A :class:`RoutineModel` holds routine variants made of action templates.
Every instance draws a fresh record of field values; copies read from the
record, pastes repeat the last copied value, and edits follow a data policy.
Between instances, bursts of navigation noise can be injected.
"""

from __future__ import annotations

import csv
import io
import random
import string
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path
from typing import Callable, Mapping, Union

from .log_model import COPY_TYPES, EDIT_TYPES, PASTE_TYPES, UiEvent, UiLog, UiType

__all__ = [
    "Action",
    "Constant",
    "Copied",
    "FdOf",
    "GroundTruth",
    "RandomValue",
    "RoutineModel",
    "Variant",
    "automatability_model",
    "click",
    "copy_cell",
    "cpn1_model",
    "edit_field",
    "generate",
    "multi_variant_model",
    "paste_field",
    "read_truth",
    "write_truth",
]

START = datetime(2021, 3, 1, 9, 0, 0)
URL = "https://records.example.org/form"

FIRST_NAMES = ("Albert", "Audrey", "John", "Hilda", "Luca", "Olga", "Daniel", "Steven", "Maria", "Kenji", "Amara", "Pavel")
LAST_NAMES = ("Rauf", "Backer", "Doe", "Diggle", "Bianchi", "Brown", "Richards", "Stanley", "Silva", "Tanaka", "Okafor", "Novak")
COUNTRIES = ("Germany", "Australia", "Italy", "Ukraine", "New Zealand", "Japan")
RESIDENCY = {
    "Germany": "International",
    "Australia": "Domestic",
    "Italy": "International",
    "Ukraine": "International",
    "New Zealand": "International",
    "Japan": "International",
}
REGION = {
    "Germany": "EU",
    "Australia": "APAC",
    "Italy": "EU",
    "Ukraine": "EU",
    "New Zealand": "APAC",
    "Japan": "APAC",
}


def _name(rng: random.Random) -> str:
    return f"{rng.choice(FIRST_NAMES)} {rng.choice(LAST_NAMES)}"


def _date(rng: random.Random) -> str:
    return f"{rng.randint(1, 28):02d}/{rng.randint(1, 12):02d}/{rng.randint(1960, 2005)}"


def _phone(rng: random.Random) -> str:
    return f"+61 0{rng.randint(10, 99)} {rng.randint(100, 999)} {rng.randint(1000, 9999)}"


def _email(rng: random.Random) -> str:
    user = "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(4, 9)))
    return f"{user}@Example.COM"


def _code(rng: random.Random) -> str:
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(3)) + "-" + str(rng.randint(100, 999))


def _amount(rng: random.Random) -> str:
    return f"{rng.randint(1, 9999)}.{rng.randint(0, 99):02d}"


FIELD_GENERATORS: dict[str, Callable[[random.Random], str]] = {
    "name": _name,
    "date": _date,
    "phone": _phone,
    "country": lambda rng: rng.choice(COUNTRIES),
    "email": _email,
    "code": _code,
    "amount": _amount,
    "company": lambda rng: f"{rng.choice(LAST_NAMES)} {rng.choice(('Ltd', 'Pty', 'GmbH', 'Inc'))}",
    "city": lambda rng: rng.choice(("Melbourne", "Tartu", "Milan", "Kyiv", "Osaka", "Berlin")),
    "quantity": lambda rng: str(rng.randint(1, 500)),
}


# Edit data policies -------------------------------------------------------

@dataclass(frozen=True)
class Copied:
    """Edit value derived from a record field by ``transform``."""

    field: str
    transform: Callable[[str], str] = str


@dataclass(frozen=True)
class FdOf:
    """Edit value looked up from a record field through ``mapping``."""

    field: str
    mapping: Mapping[str, str]


@dataclass(frozen=True)
class RandomValue:
    """Fresh random text: no function of earlier data can reproduce it."""

    length: int = 8


@dataclass(frozen=True)
class Constant:
    value: str


Policy = Union[Copied, FdOf, RandomValue, Constant]


@dataclass(frozen=True)
class Action:
    """Template of one UI.  ``params`` hold fixed payload values; ``field``
    names the record field a copy reads; ``policy`` drives edit values."""

    ui_type: UiType
    params: Mapping[str, str] = field(default_factory=dict)
    field: str | None = None
    policy: Policy | None = None

    @property
    def automatable(self) -> bool:
        return not isinstance(self.policy, RandomValue)


def click(name: str, url: str = URL) -> Action:
    compact = name.replace(" ", "")
    return Action(UiType.CLICK_BUTTON, {"url": url, "name": name, "id": compact[:1].lower() + compact[1:], "type": "button"})


def copy_cell(column: str, record_field: str, workbook: str = "Records", worksheet: str = "Sheet1") -> Action:
    return Action(UiType.COPY_CELL, {"workbook": workbook, "worksheet": worksheet, "column": column}, field=record_field)


def paste_field(name: str, url: str = URL) -> Action:
    return Action(UiType.PASTE, {"url": url, "name": name, "id": _field_id(name)})


def edit_field(name: str, policy: Policy, url: str = URL, kind: str = "text") -> Action:
    return Action(UiType.EDIT_FIELD, {"url": url, "name": name, "id": _field_id(name), "type": kind}, policy=policy)


def _field_id(name: str) -> str:
    return name.lower().replace(" ", "_")


@dataclass(frozen=True)
class Variant:
    name: str
    actions: tuple[Action, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        if not self.actions:
            raise ValueError(f"variant {self.name!r} has no actions")


@dataclass(frozen=True)
class RoutineModel:
    variants: tuple[Variant, ...]
    weights: tuple[float, ...] | None = None
    # probability that a burst of navigation noise follows an instance
    noise_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        if not self.variants:
            raise ValueError("a routine model needs at least one variant")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))
            if len(self.weights) != len(self.variants) or any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative, one per variant")
        if not 0 <= self.noise_rate <= 1:
            raise ValueError("noise_rate must lie in [0, 1]")
        for v in self.variants:
            for a in v.actions:
                if isinstance(a.policy, FdOf) and not isinstance(a.policy.mapping, Mapping):
                    raise ValueError("fd mappings must be mappings")


@dataclass(frozen=True)
class GroundTruth:
    """Per-event annotations.  Noise events have ``segment_id`` ``None``."""

    segment_ids: tuple[int | None, ...]
    variant_ids: tuple[str | None, ...]
    automatable: tuple[bool | None, ...]

    def __len__(self) -> int:
        return len(self.segment_ids)

    def boundaries(self) -> list[tuple[int, int]]:
        """``(first, last)`` event index of every planted instance."""
        spans: dict[int, list[int]] = {}
        for i, sid in enumerate(self.segment_ids):
            if sid is not None:
                spans.setdefault(sid, []).append(i)
        return [(idx[0], idx[-1]) for _, idx in sorted(spans.items())]

    def variant_events(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for i, v in enumerate(self.variant_ids):
            if v is not None:
                out.setdefault(v, []).append(i)
        return out


def _random_text(rng: random.Random, length: int) -> str:
    return "".join(rng.choice(string.ascii_lowercase + string.digits) for _ in range(length))


def _edit_value(policy: Policy | None, record: dict, rng: random.Random) -> str:
    if isinstance(policy, Copied):
        return policy.transform(record[policy.field])
    if isinstance(policy, FdOf):
        return policy.mapping[record[policy.field]]
    if isinstance(policy, RandomValue):
        return _random_text(rng, policy.length)
    if isinstance(policy, Constant):
        return policy.value
    return ""


def _instantiate(variant: Variant, row: int, rng: random.Random) -> list[tuple[UiType, dict, bool]]:
    fields = {a.field for a in variant.actions if a.field} | {
        a.policy.field for a in variant.actions if isinstance(a.policy, (Copied, FdOf))
    }
    record = {f: FIELD_GENERATORS[f](rng) for f in sorted(fields)}
    clipboard = ""
    out = []
    for action in variant.actions:
        params = dict(action.params)
        if action.ui_type in COPY_TYPES:
            clipboard = record[action.field]
            if "column" in action.ui_type.parameters:
                params["row"] = str(row)
            params["value"] = clipboard
            params["copied"] = clipboard
        elif action.ui_type in PASTE_TYPES:
            if "column" in action.ui_type.parameters:
                params["row"] = str(row)
            params["pasted"] = clipboard
        elif action.ui_type in EDIT_TYPES:
            if "column" in action.ui_type.parameters:
                params["row"] = str(row)
            params["value"] = _edit_value(action.policy, record, rng)
        out.append((action.ui_type, params, action.automatable))
    return out


def generate(model: RoutineModel, n_instances: int) -> tuple[UiLog, GroundTruth]:
    """Concatenate ``n_instances`` sampled instances; deterministic in ``model.seed``."""
    if n_instances < 0:
        raise ValueError("n_instances must be non-negative")
    rng = random.Random(model.seed)
    stamp = START
    events: list[UiEvent] = []
    seg_ids: list[int | None] = []
    var_ids: list[str | None] = []
    auto: list[bool | None] = []
    noise_counter = 0

    def emit(ui_type, params, sid, vid, automatable):
        nonlocal stamp
        stamp += timedelta(milliseconds=rng.randint(800, 6000))
        events.append(UiEvent(stamp, ui_type, params))
        seg_ids.append(sid)
        var_ids.append(vid)
        auto.append(automatable)

    for k in range(n_instances):
        if k > 0 and model.noise_rate and rng.random() < model.noise_rate:
            for _ in range(rng.randint(1, 3)):
                noise_counter += 1
                emit(UiType.NAVIGATE_TO, {"url": f"https://noise.example.org/page/{noise_counter}"}, None, None, None)
        variant = rng.choices(model.variants, weights=model.weights)[0]
        for ui_type, params, automatable in _instantiate(variant, k + 2, rng):
            emit(ui_type, params, k, variant.name, automatable)
    return UiLog(events), GroundTruth(tuple(seg_ids), tuple(var_ids), tuple(auto))


TRUTH_HEADER = ("event_index", "segment_id", "variant_id", "automatable")


def write_truth(truth: GroundTruth, target: Union[str, Path, None] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRUTH_HEADER)
    for i, (sid, vid, auto) in enumerate(zip(truth.segment_ids, truth.variant_ids, truth.automatable)):
        writer.writerow([i, "" if sid is None else sid, vid or "", "" if auto is None else int(auto)])
    text = buf.getvalue()
    if target is not None:
        Path(target).write_text(text, encoding="utf-8")
    return text


def read_truth(source: Union[str, Path]) -> GroundTruth:
    with open(source, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRUTH_HEADER:
        raise ValueError(f"ground-truth file must start with header {','.join(TRUTH_HEADER)}")
    seg, var, auto = [], [], []
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != 4 or row[0] != str(n - 2):
            raise ValueError(f"line {n}: malformed ground-truth row {row!r}")
        seg.append(int(row[1]) if row[1] else None)
        var.append(row[2] or None)
        auto.append(bool(int(row[3])) if row[3] else None)
    return GroundTruth(tuple(seg), tuple(var), tuple(auto))


# Ready-made models -------------------------------------------------------------

def _transfer(column: str, record_field: str, form_field: str, transform: Callable[[str], str] = str) -> list[Action]:
    return [copy_cell(column, record_field), paste_field(form_field), edit_field(form_field, Copied(record_field, transform))]


def _to_dashes(date: str) -> str:
    return date.replace("/", "-")


def _local_phone(phone: str) -> str:
    return "-".join(phone.split(" ")[1:])


def cpn1_model(seed: int = 1, noise_rate: float = 0.0) -> RoutineModel:
    """One variant of 14 actions: four copy/paste/edit transfers between a
    new-record click and a submit."""
    actions = [
        click("New Record"),
        *_transfer("A", "name", "Full Name"),
        *_transfer("B", "date", "Date", _to_dashes),
        *_transfer("C", "phone", "Phone", _local_phone),
        *_transfer("D", "country", "Country"),
        click("Submit"),
    ]
    return RoutineModel((Variant("v1", actions),), noise_rate=noise_rate, seed=seed)


def multi_variant_model(seed: int = 2, weights=(0.5, 0.3, 0.2), noise_rate: float = 0.0) -> RoutineModel:
    """Three variants sharing the start and end clicks but transferring
    different fields, so no variant's actions contain another's."""
    v1 = [
        click("New Record"),
        *_transfer("A", "name", "Full Name"),
        *_transfer("B", "date", "Date", _to_dashes),
        *_transfer("C", "phone", "Phone", _local_phone),
        *_transfer("D", "country", "Country"),
        click("Submit"),
    ]
    v2 = [
        click("New Record"),
        *_transfer("A", "name", "Full Name"),
        *_transfer("E", "email", "Email", str.lower),
        *_transfer("F", "company", "Company"),
        click("Submit"),
    ]
    v3 = [
        click("New Record"),
        *_transfer("G", "code", "Product Code", str.upper),
        *_transfer("H", "quantity", "Quantity"),
        *_transfer("I", "amount", "Amount"),
        *_transfer("J", "city", "City"),
        click("Submit"),
    ]
    variants = (Variant("v1", v1), Variant("v2", v2), Variant("v3", v3))
    return RoutineModel(variants, weights=tuple(weights), noise_rate=noise_rate, seed=seed)


def automatability_model(seed: int = 3) -> RoutineModel:
    """Ten deterministic edits (eight copied, two looked up from the
    country) and four edits with random values."""
    actions = [
        click("New Record"),
        *_transfer("A", "name", "Full Name"),
        *_transfer("B", "date", "Date", _to_dashes),
        edit_field("Reference", RandomValue()),
        *_transfer("C", "phone", "Phone", _local_phone),
        *_transfer("D", "country", "Country"),
        edit_field("Student Status", FdOf("country", RESIDENCY), kind="select"),
        edit_field("Notes", RandomValue(12)),
        *_transfer("E", "email", "Email", str.lower),
        *_transfer("F", "company", "Employer"),
        edit_field("Region", FdOf("country", REGION), kind="select"),
        *_transfer("G", "code", "Course Code", str.upper),
        edit_field("Tracking", RandomValue(10)),
        *_transfer("H", "amount", "Fee"),
        edit_field("Comment", RandomValue(6)),
        click("Submit"),
    ]
    return RoutineModel((Variant("v1", actions),), seed=seed)
