"""Transformation discovery: token classes, program synthesis, functional dependencies."""

from __future__ import annotations

from typing import Sequence, Union

from .dependencies import DependencyTable, FunctionalDependency, UnseenDeterminantValue, discover_fd
from .programs import (
    DEFAULT_DEPTH,
    Op,
    PatternMismatch,
    SyntacticTransformation,
    TransformProgram,
    discover_transformation,
    synthesize,
)
from .tokens import TokenPattern, TransformationExample, partition_examples, render, tokenize

__all__ = [
    "DEFAULT_DEPTH",
    "DependencyTable",
    "FunctionalDependency",
    "Op",
    "PatternMismatch",
    "SyntacticTransformation",
    "TokenPattern",
    "TransformProgram",
    "TransformationExample",
    "UnseenDeterminantValue",
    "apply",
    "discover_fd",
    "discover_transformation",
    "partition_examples",
    "render",
    "synthesize",
    "tokenize",
]

Function = Union[TransformProgram, SyntacticTransformation, FunctionalDependency]


def apply(function: Function, inputs: Sequence[str]) -> str:
    """Run a discovered function.

    Programs take the input values; dependencies take the determinant values.
    """
    if isinstance(inputs, str):
        inputs = [inputs]
    return function(list(inputs))
