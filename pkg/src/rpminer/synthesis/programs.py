"""A small string-transformation DSL and a breadth-first program search.

A program is a sequence of operations over a token stream.  The initial
stream is the concatenation of the tokens of every input value; the output
of a program is the concatenation of its final stream.  The empty program
is the identity.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .tokens import SYMBOL, TransformationExample, partition_examples, split_tokens, tokenize

__all__ = [
    "DEFAULT_DEPTH",
    "Op",
    "PatternMismatch",
    "SyntacticTransformation",
    "TransformProgram",
    "discover_transformation",
    "synthesize",
]

DEFAULT_DEPTH = 4
DEFAULT_STATE_LIMIT = 50_000
# Class examples the search evaluates in lock-step; the rest are checked
# once a candidate is found.
_LOCKSTEP = 4

State = tuple  # tuple[str, ...]


class PatternMismatch(ValueError):
    """Inputs do not belong to any equivalence class the transformation knows."""


class _NotApplicable(Exception):
    pass


@dataclass(frozen=True)
class Op:
    """One DSL operation.  ``args`` must be JSON-serializable."""

    name: str
    args: tuple = ()

    def __call__(self, state: State) -> State:
        return _APPLY[self.name](state, *self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        parts = []
        for a in self.args:
            if isinstance(a, tuple):
                parts.append("[" + ", ".join(_fmt_item(x) for x in a) + "]")
            else:
                parts.append(_fmt_item(a))
        return f"{self.name}({', '.join(parts)})"

    def to_json(self) -> list:
        return [self.name, [list(a) if isinstance(a, tuple) else a for a in self.args]]

    @classmethod
    def from_json(cls, data) -> "Op":
        name, args = data
        if name not in _APPLY:
            raise ValueError(f"unknown operation {name!r}")
        return cls(name, tuple(_freeze(a) for a in args))


def _freeze(a):
    if isinstance(a, list):
        return tuple(_freeze(x) for x in a)
    return a


def _fmt_item(x) -> str:
    if isinstance(x, int):
        return f"#{x}"
    return json.dumps(x, ensure_ascii=False)


def _index(state: State, i: int) -> None:
    if not 0 <= i < len(state):
        raise _NotApplicable


def _replace(state, a, b):
    if a not in state:
        raise _NotApplicable
    return tuple(b if t == a else t for t in state)


def _drop(state, i):
    _index(state, i)
    return state[:i] + state[i + 1 :]


def _select(state, i):
    _index(state, i)
    return (state[i],)


def _concat(state, items):
    out = []
    for item in items:
        if isinstance(item, int):
            _index(state, item)
            out.append(state[item])
        else:
            out.append(item)
    return tuple(out)


def _reorder(state, perm):
    if sorted(perm) != list(range(len(state))):
        raise _NotApplicable
    return tuple(state[p] for p in perm)


def _trim(state):
    lo, hi = 0, len(state)
    while lo < hi and state[lo].isspace():
        lo += 1
    while hi > lo and state[hi - 1].isspace():
        hi -= 1
    return state[lo:hi]


def _substring(state, i, start, stop):
    _index(state, i)
    return state[:i] + (state[i][start:stop],) + state[i + 1 :]


_APPLY = {
    "constant": lambda state, s: (s,),
    "replace": _replace,
    "drop": _drop,
    "select": _select,
    "concat": _concat,
    "reorder": _reorder,
    "lowercase": lambda state: tuple(t.lower() for t in state),
    "uppercase": lambda state: tuple(t.upper() for t in state),
    "trim": _trim,
    "substring": _substring,
}


def initial_state(inputs: Sequence[str]) -> State:
    return tuple(t.text for value in inputs for t in split_tokens(value))


@dataclass(frozen=True)
class TransformProgram:
    ops: tuple[Op, ...] = ()

    def __len__(self) -> int:
        return len(self.ops)

    def __call__(self, inputs: Sequence[str]) -> str:
        state = initial_state(inputs)
        try:
            for op in self.ops:
                state = op(state)
        except _NotApplicable:
            raise PatternMismatch(f"{self} does not apply to {list(inputs)!r}") from None
        return "".join(state)

    def __str__(self) -> str:
        return " ; ".join(str(op) for op in self.ops) if self.ops else "identity"

    def to_json(self) -> list:
        return [op.to_json() for op in self.ops]

    @classmethod
    def from_json(cls, data) -> "TransformProgram":
        return cls(tuple(Op.from_json(d) for d in data))


def _symbol_runs(text: str) -> set[str]:
    runs = set()
    current = ""
    for ch in text:
        if ch.isalnum():
            if current:
                runs.add(current)
            current = ""
        else:
            current += ch
            runs.add(ch)
    if current:
        runs.add(current)
    return runs


def _is_symbol(token: str) -> bool:
    return len(token) == 1 and not token.isalnum()


def _guided_concats(state: State, output: str, limit: int = 16) -> list[Op]:
    """Concats that rebuild ``output`` from state tokens where possible.

    A token occurring several times in the state yields one candidate per
    choice of position, up to ``limit`` candidates.
    """
    slots: list[list] = []
    for tok in split_tokens(output):
        text = tok.text
        where = [i for i, t in enumerate(state) if t == text] if tok.kind != SYMBOL else []
        if where:
            slots.append(where)
        elif slots and isinstance(slots[-1][0], str):
            slots[-1] = [slots[-1][0] + text]
        else:
            slots.append([text])
    if not any(isinstance(s[0], int) for s in slots):
        return []
    return [Op("concat", (combo,)) for combo in itertools.islice(itertools.product(*slots), limit)]


def _candidates(state: State, output: str) -> Iterable[Op]:
    symbols = sorted({t for t in state if _is_symbol(t)})
    replacements = sorted(_symbol_runs(output) | {""})
    for a in symbols:
        for b in replacements:
            if a != b:
                yield Op("replace", (a, b))
    yield from _guided_concats(state, output)
    for i in range(len(state)):
        yield Op("drop", (i,))
    if len(state) > 1:
        for i in range(len(state)):
            yield Op("select", (i,))
    words = [i for i, t in enumerate(state) if not _is_symbol(t)]
    if 2 <= len(words) <= 4:
        for perm in itertools.permutations(words):
            if list(perm) == words:
                continue
            order = list(range(len(state)))
            for slot, src in zip(words, perm):
                order[slot] = src
            yield Op("reorder", (tuple(order),))
    yield Op("lowercase")
    yield Op("uppercase")
    yield Op("trim")
    for i, tok in enumerate(state):
        if len(tok) < 2 or _is_symbol(tok):
            continue
        for start in range(len(tok)):
            for stop in range(start + 1, len(tok) + 1):
                if (start, stop) != (0, len(tok)) and tok[start:stop] in output:
                    yield Op("substring", (i, start, stop))


def _replays(program: TransformProgram, examples: Sequence[TransformationExample]) -> bool:
    try:
        return all(program(ex.inputs) == ex.output for ex in examples)
    except PatternMismatch:
        return False


def synthesize(
    example: TransformationExample,
    validation: Sequence[TransformationExample] = (),
    depth: int = DEFAULT_DEPTH,
    state_limit: int = DEFAULT_STATE_LIMIT,
) -> TransformProgram | None:
    """Shortest program mapping ``example`` to its output that also replays
    every example in ``validation``.

    The search is breadth-first over operation sequences of length at most
    ``depth``; a constant program is only proposed when nothing else works
    and the validation set shows at least two examples.
    """
    everyone = [example, *[v for v in validation if v is not example]]
    lockstep = everyone[:_LOCKSTEP]
    goal = tuple(ex.output for ex in lockstep)
    start = tuple(initial_state(ex.inputs) for ex in lockstep)

    if tuple("".join(s) for s in start) == goal and _replays(TransformProgram(), everyone):
        return TransformProgram()

    seen = {start}
    frontier = deque([(start, ())])
    while frontier:
        states, ops = frontier.popleft()
        if len(ops) >= depth:
            continue
        for op in _candidates(states[0], example.output):
            try:
                nxt = tuple(op(s) for s in states)
            except _NotApplicable:
                continue
            if nxt in seen:
                continue
            program_ops = ops + (op,)
            if tuple("".join(s) for s in nxt) == goal:
                program = TransformProgram(program_ops)
                if _replays(program, everyone):
                    return program
                # goal states are not expanded further
                continue
            seen.add(nxt)
            if len(seen) >= state_limit:
                frontier.clear()
                break
            frontier.append((nxt, program_ops))

    if len(everyone) >= 2 and len({ex.output for ex in everyone}) == 1:
        return TransformProgram((Op("constant", (example.output,)),))
    return None


@dataclass(frozen=True)
class SyntacticTransformation:
    """Per-class programs: input patterns -> program."""

    programs: Mapping[tuple, TransformProgram] = field(default_factory=dict)

    def program_for(self, inputs: Sequence[str]) -> TransformProgram:
        key = tuple(tokenize(v) for v in inputs)
        try:
            return self.programs[key]
        except KeyError:
            shown = ", ".join(str(p) for p in key)
            raise PatternMismatch(f"no program for input pattern(s) ({shown})") from None

    def __call__(self, inputs: Sequence[str]) -> str:
        return self.program_for(inputs)(inputs)

    def __str__(self) -> str:
        return " | ".join(
            f"{' + '.join(str(p) for p in key) or '<empty>'} -> {prog}" for key, prog in self.sorted_items()
        )

    def sorted_items(self) -> list[tuple[tuple, TransformProgram]]:
        return sorted(self.programs.items(), key=lambda kv: [str(p) for p in kv[0]])

    def to_json(self) -> dict:
        return {
            "kind": "syntactic",
            "classes": [
                {"inputs": [str(p) for p in key], "program": prog.to_json(), "text": str(prog)}
                for key, prog in self.sorted_items()
            ],
        }


def discover_transformation(
    examples: Iterable[TransformationExample],
    depth: int = DEFAULT_DEPTH,
    state_limit: int = DEFAULT_STATE_LIMIT,
) -> SyntacticTransformation | None:
    """Synthesize one program per input-pattern class, or ``None`` if any
    class has no program."""
    classes = partition_examples(examples)
    if not classes:
        return None
    programs = {}
    for key, members in classes.items():
        program = synthesize(members[0], members, depth=depth, state_limit=state_limit)
        if program is None:
            return None
        programs[key] = program
    return SyntacticTransformation(programs)
