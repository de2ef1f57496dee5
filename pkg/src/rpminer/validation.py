"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import os
from pathlib import Path

from .log_model import UiEvent, UiLog, parse_log, read_log

CRITERIA = ("frequency", "length", "coverage", "cohesion")


def check_log(X) -> UiLog:
    """Coerce ``X`` into a :class:`UiLog`.

    Accepts a ``UiLog``, an iterable of ``UiEvent``, a path to a CSV file,
    or CSV content as ``bytes``.
    """
    if isinstance(X, UiLog):
        return X
    if isinstance(X, (str, os.PathLike)):
        path = Path(X)
        if not path.is_file():
            raise FileNotFoundError(f"no such log file: {X}")
        return read_log(path)
    if isinstance(X, (bytes, bytearray)):
        return parse_log(X)
    events = list(X)
    for i, event in enumerate(events):
        if not isinstance(event, UiEvent):
            raise TypeError(f"element {i} is {type(event).__name__}, expected UiEvent")
    for i in range(1, len(events)):
        if events[i].timestamp < events[i - 1].timestamp:
            raise ValueError(f"events out of timestamp order at position {i}")
    return UiLog(events)


def check_fraction(value, name: str, *, allow_zero: bool = False) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise TypeError(f"{name} must be a number, got {value!r}") from None
    low_ok = value >= 0 if allow_zero else value > 0
    if not (low_ok and value <= 1):
        bound = "[0, 1]" if allow_zero else "(0, 1]"
        raise ValueError(f"{name} must lie in {bound}, got {value}")
    return value


def check_criterion(criterion: str) -> str:
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    return criterion
