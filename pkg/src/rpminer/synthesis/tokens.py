"""Tokenization of values into structural patterns."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

__all__ = ["Token", "TokenPattern", "split_tokens", "tokenize", "render", "partition_examples", "TransformationExample"]

_TOKEN_RE = re.compile(r"[0-9]+|[^\W\d_]+|.", re.DOTALL)

DIGITS = "d"
LETTERS = "a"
SYMBOL = "s"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str


def split_tokens(value: str) -> list[Token]:
    out = []
    for m in _TOKEN_RE.finditer(value):
        text = m.group()
        if text[0].isdigit() and text.isascii():
            out.append(Token(DIGITS, text))
        elif text[0].isalpha():
            out.append(Token(LETTERS, text))
        else:
            out.append(Token(SYMBOL, text))
    return out


@dataclass(frozen=True)
class TokenPattern:
    """Sequence of ``("d", None)``, ``("a", None)`` or ``("s", char)`` items."""

    items: tuple[tuple[str, str | None], ...]

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        parts = []
        for kind, text in self.items:
            parts.append({DIGITS: "<d>+", LETTERS: "<a>+"}.get(kind, text))
        return "".join(parts)


def tokenize(value: str) -> TokenPattern:
    return TokenPattern(tuple((t.kind, t.text if t.kind == SYMBOL else None) for t in split_tokens(value)))


def render(pattern: TokenPattern) -> str:
    """A representative string whose tokenization is ``pattern``."""
    return "".join({DIGITS: "0", LETTERS: "a"}.get(kind, text) for kind, text in pattern.items)


@dataclass(frozen=True)
class TransformationExample:
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def key(self) -> tuple[TokenPattern, ...]:
        return tuple(tokenize(v) for v in self.inputs)


def partition_examples(examples: Iterable[TransformationExample]) -> dict[tuple, list[TransformationExample]]:
    """Group examples by the token patterns of their inputs, keeping
    first-seen order both for classes and within each class."""
    classes: dict[tuple, list[TransformationExample]] = {}
    for ex in examples:
        classes.setdefault(ex.key, []).append(ex)
    return classes
