"""Encode supervised classification problems as tasks.

The convention: feature programs appear in the inputs; each example's
output is its feature set plus exactly one label program. One label per
example; anything needing several labels at once is outside this encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import Program, StateSpace, Statement, Vocabulary, build_language, is_statement
from .errors import DomainError, EncodingError, MalformedInputError
from .search import canonicalize_task
from .tasks import Task, validate_task


@dataclass(frozen=True)
class ClassificationSpec:
    """A classification problem: named feature and label programs plus
    (feature set, label) examples. Stored normalized (name-sorted) so equal
    problems compare equal."""

    space: StateSpace
    features: tuple[tuple[str, Program], ...]
    labels: tuple[tuple[str, Program], ...]
    examples: tuple[tuple[tuple[str, ...], str], ...]

    @classmethod
    def build(
        cls,
        space: StateSpace,
        features: Mapping[str, Program],
        labels: Mapping[str, Program],
        examples: Iterable[tuple[Iterable[str], str]],
    ) -> "ClassificationSpec":
        overlap = set(features) & set(labels)
        if overlap:
            raise MalformedInputError(
                f"names declared as both feature and label: {sorted(overlap)}"
            )
        for name, program in list(features.items()) + list(labels.items()):
            if program.width != space.n_states:
                raise MalformedInputError(
                    f"program {name} has width {program.width}, expected "
                    f"{space.n_states}"
                )
        normalized = []
        for feature_names, label in examples:
            feature_names = tuple(sorted(feature_names))
            for f in feature_names:
                if f not in features:
                    raise MalformedInputError(f"example references unknown feature {f!r}")
            if label not in labels:
                raise MalformedInputError(f"example references unknown label {label!r}")
            normalized.append((feature_names, label))
        return cls(
            space=space,
            features=tuple(sorted(features.items())),
            labels=tuple(sorted(labels.items())),
            examples=tuple(sorted(normalized)),
        )


def _render_example(example: tuple[tuple[str, ...], str]) -> str:
    feature_names, label = example
    return f"{{{', '.join(feature_names)}}} -> {label}"


def encode_classification(spec: ClassificationSpec) -> Task:
    """Build the task whose inputs are the examples' feature sets and whose
    outputs append each example's label to its features.

    Raises an encoding error naming the offending example when a feature
    set or a labeled feature set is not a statement; task-invariant
    violations (from the assembled inputs/outputs) propagate unchanged.
    """
    programs = dict(spec.features)
    programs.update(spec.labels)
    vocab = Vocabulary.build(programs.values(), spec.space)
    lang = build_language(vocab)
    index = {name: vocab.index_of(program) for name, program in programs.items()}

    inputs = []
    outputs = []
    for example in spec.examples:
        feature_names, label = example
        feature_indices = [index[f] for f in feature_names]
        if not is_statement(feature_indices, vocab):
            raise EncodingError(
                f"example {_render_example(example)}: the feature set has an "
                "empty intersection and is not a statement"
            )
        output_indices = feature_indices + [index[label]]
        if not is_statement(output_indices, vocab):
            raise EncodingError(
                f"example {_render_example(example)}: appending the label "
                "empties the intersection, so the output is not a statement"
            )
        inputs.append(Statement.from_indices(feature_indices))
        outputs.append(Statement.from_indices(output_indices))
    return validate_task(inputs, outputs, lang)


def verify_isomorphism(a: Task, b: Task) -> bool:
    """True when the tasks are images of one another under some state
    permutation (equal canonical forms)."""
    space_a = a.language.vocabulary.space
    space_b = b.language.vocabulary.space
    if space_a != space_b:
        raise DomainError(
            f"cannot compare tasks over different state spaces "
            f"({space_a.n_states} vs {space_b.n_states} states)"
        )
    return canonicalize_task(a) == canonicalize_task(b)
