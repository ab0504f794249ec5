import random

import pytest
from hypothesis import given, settings, strategies as st

from vtask.core import Program, StateSpace, Statement, Vocabulary, build_language
from vtask.encoder import ClassificationSpec, encode_classification, verify_isomorphism
from vtask.errors import (
    DomainError,
    EncodingError,
    MalformedInputError,
    TaskValidationError,
)
from vtask.search import canonicalize_task
from vtask.tasks import find_correct_policies, validate_task
from vtask.verify import REFERENCE_N_STATES, REFERENCE_PROGRAMS

from conftest import statement_of


def reference_programs() -> dict[str, Program]:
    return {
        name: Program.from_included_states(states, REFERENCE_N_STATES)
        for name, states in REFERENCE_PROGRAMS.items()
    }


@pytest.fixture(scope="module")
def colored_box_spec() -> ClassificationSpec:
    programs = reference_programs()
    return ClassificationSpec.build(
        StateSpace(REFERENCE_N_STATES),
        features={"red_signal": programs["f1"], "human_red": programs["f2"]},
        labels={"blue_actual": programs["f3"], "human_blue": programs["f4"]},
        examples=[(["red_signal"], "blue_actual"), (["human_red"], "human_blue")],
    )


def test_encoded_colored_box_is_isomorphic_to_reference(colored_box_spec, ref_task):
    encoded = encode_classification(colored_box_spec)
    # same underlying programs, so the tasks are equal, not merely isomorphic
    assert encoded.inputs == ref_task.inputs
    assert encoded.outputs == ref_task.outputs
    assert canonicalize_task(encoded) == canonicalize_task(ref_task)
    assert verify_isomorphism(encoded, ref_task)


def test_encoding_round_trips_example_structure(colored_box_spec):
    encoded = encode_classification(colored_box_spec)
    vocab = encoded.language.vocabulary
    name_by_index = {}
    for name, program in colored_box_spec.features + colored_box_spec.labels:
        name_by_index[vocab.index_of(program)] = name
    seen = set()
    for features, label in colored_box_spec.examples:
        input_statement = next(
            s
            for s in encoded.inputs
            if sorted(name_by_index[i] for i in s.indices()) == sorted(features)
        )
        output_statement = next(
            s
            for s in encoded.outputs
            if set(s.indices()) > set(input_statement.indices())
        )
        extra = set(output_statement.indices()) - set(input_statement.indices())
        assert [name_by_index[i] for i in extra] == [label]
        seen.add((features, label))
    assert seen == set(colored_box_spec.examples)


def test_disjoint_feature_and_label_is_encoding_error():
    space = StateSpace(2)
    spec = ClassificationSpec.build(
        space,
        features={"f": Program(0b01, 2)},
        labels={"g": Program(0b10, 2)},
        examples=[(["f"], "g")],
    )
    with pytest.raises(EncodingError) as info:
        encode_classification(spec)
    assert "{f} -> g" in str(info.value)


def test_empty_feature_intersection_is_encoding_error():
    space = StateSpace(3)
    spec = ClassificationSpec.build(
        space,
        features={"a": Program(0b001, 3), "b": Program(0b010, 3)},
        labels={"g": Program(0b111, 3)},
        examples=[(["a", "b"], "g")],
    )
    with pytest.raises(EncodingError):
        encode_classification(spec)


def test_two_feature_example_encoding_and_solvability():
    programs = reference_programs()
    spec = ClassificationSpec.build(
        StateSpace(REFERENCE_N_STATES),
        features={"f1": programs["f1"], "f2": programs["f2"]},
        labels={"f3": programs["f3"], "f4": programs["f4"]},
        examples=[(["f1", "f2"], "f3")],
    )
    task = encode_classification(spec)
    assert len(task.inputs) == 1
    assert len(task.outputs) == 1
    (input_statement,) = task.inputs
    (output_statement,) = task.outputs
    assert len(input_statement) == 2
    assert len(output_statement) == 3
    # pinned by exhaustive search: this single-example task is unsolvable
    assert find_correct_policies(task).correct == ()


def test_task_invariant_violations_propagate():
    # a spec with no examples assembles an empty input set; the encoder
    # surfaces the task invariant rather than masking it
    space = StateSpace(1)
    spec = ClassificationSpec.build(
        space,
        features={"f": Program(0b1, 1)},
        labels={},
        examples=[],
    )
    with pytest.raises(TaskValidationError) as info:
        encode_classification(spec)
    assert info.value.code == "empty-inputs"


def test_classification_spec_validation():
    space = StateSpace(2)
    p = Program(0b01, 2)
    q = Program(0b11, 2)
    with pytest.raises(MalformedInputError):
        ClassificationSpec.build(
            space, features={"x": p}, labels={"x": q}, examples=[]
        )
    with pytest.raises(MalformedInputError):
        ClassificationSpec.build(
            space, features={"f": p}, labels={"g": q}, examples=[(["nope"], "g")]
        )
    with pytest.raises(MalformedInputError):
        ClassificationSpec.build(
            space, features={"f": p}, labels={"g": q}, examples=[(["f"], "nope")]
        )
    with pytest.raises(MalformedInputError):
        ClassificationSpec.build(
            space, features={"f": Program(0b1, 1)}, labels={"g": q}, examples=[]
        )


def test_same_features_two_labels_allowed():
    programs = reference_programs()
    spec = ClassificationSpec.build(
        StateSpace(REFERENCE_N_STATES),
        features={"f1": programs["f1"]},
        labels={"f3": programs["f3"], "f4": programs["f4"]},
        examples=[(["f1"], "f3"), (["f1"], "f4")],
    )
    task = encode_classification(spec)
    assert len(task.inputs) == 1
    assert len(task.outputs) == 2


def test_verify_isomorphism_reflexive_and_discriminating(ref_task, ref_index):
    assert verify_isomorphism(ref_task, ref_task)
    lang = ref_task.language
    bigger = validate_task(
        ref_task.inputs,
        set(ref_task.outputs) | {statement_of(ref_index, "f1", "f2")},
        lang,
    )
    assert not verify_isomorphism(ref_task, bigger)


def test_verify_isomorphism_requires_same_state_space(ref_task):
    space = StateSpace(2)
    small_vocab = Vocabulary.build([Program(0b11, 2)], space)
    small_lang = build_language(small_vocab)
    other = validate_task([Statement(0)], [Statement(0)], small_lang)
    with pytest.raises(DomainError):
        verify_isomorphism(ref_task, other)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_encoder_never_emits_invalid_tasks(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    space = StateSpace(n)
    pool = rng.sample(range(1 << n), min(4, 1 << n))
    half = max(1, len(pool) // 2)
    features = {f"f{i}": Program(v, n) for i, v in enumerate(pool[:half])}
    labels = {f"l{i}": Program(v, n) for i, v in enumerate(pool[half:])}
    if not labels:
        return
    examples = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(1, len(features))
        examples.append(
            (rng.sample(sorted(features), k), rng.choice(sorted(labels)))
        )
    spec = ClassificationSpec.build(space, features, labels, examples)
    try:
        task = encode_classification(spec)
    except (EncodingError, TaskValidationError):
        return
    # whatever came out satisfies every task invariant
    assert validate_task(task.inputs, task.outputs, task.language) == task
