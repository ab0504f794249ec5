"""Enumerate vocabularies and tasks over small state spaces and census
which tasks admit correct policies.

The task space is doubly exponential (subsets of a language of subsets),
so everything here is capped and the caps fail loudly. The census walks
every vocabulary of a given size, every nonempty proper subset of each
language as inputs, and every nonempty proper subset of the input
extension as outputs, in a fixed order:

    vocabulary ordinal asc, then input mask asc, then output mask asc,

where masks index the language's canonical statement order. "First"
always means first in this order; exemplar selection and the mask stream
both follow it.

The per-input work collapses: for fixed inputs, the solvable output sets
are exactly the distinct nonempty proper selections ``E_policy ∩ E_inputs``
over all policies, so counting never iterates output sets. Output sets are
only walked explicitly to collect exemplars or when a task filter needs to
inspect them.

Partitions are vocabulary residue classes, so census totals are
independent of worker count; merge is associative. Truncated runs (time
budget or task limit hit) stop at input-set granularity and their totals
may depend on the partitioning; only untruncated reports are byte-stable.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .core import (
    Language,
    Program,
    StateSpace,
    Statement,
    Vocabulary,
    build_language,
)
from .errors import CapacityError, DomainError
from .tasks import Task, validate_task

CENSUS_MAX_STATES = 10
CENSUS_MAX_VOCAB = 6
CENSUS_LANGUAGE_CAP = 16
CANON_MAX_STATES = 8


@dataclass(frozen=True)
class SearchSpec:
    """Parameters of a census run.

    Validity of enumerated tasks is always required;
    ``require_classification_shaped`` additionally restricts the census to
    tasks shaped like encoded classification problems. ``max_tasks`` and
    ``time_budget`` truncate the run (flagged in the report).
    """

    n_states: int
    vocab_size: int
    require_classification_shaped: bool = False
    dedup: bool = False
    max_tasks: int | None = None
    time_budget: float | None = None
    exemplar_limit: int = 3

    def __post_init__(self) -> None:
        if self.n_states < 1 or self.vocab_size < 0:
            raise ValueError("n_states must be >= 1 and vocab_size >= 0")
        if self.n_states > CENSUS_MAX_STATES:
            raise CapacityError(
                f"census over {self.n_states} states exceeds the "
                f"{CENSUS_MAX_STATES}-state census cap",
                cap_name="census_max_states",
                cap_value=CENSUS_MAX_STATES,
            )
        if self.vocab_size > CENSUS_MAX_VOCAB:
            raise CapacityError(
                f"census over {self.vocab_size}-program vocabularies exceeds "
                f"the {CENSUS_MAX_VOCAB}-program census cap",
                cap_name="census_max_vocab",
                cap_value=CENSUS_MAX_VOCAB,
            )
        if self.dedup and self.n_states > CANON_MAX_STATES:
            raise CapacityError(
                f"dedup canonicalizes under all {self.n_states}! state "
                f"permutations; capped at {CANON_MAX_STATES} states",
                cap_name="canon_max_states",
                cap_value=CANON_MAX_STATES,
            )
        if self.exemplar_limit < 0:
            raise ValueError("exemplar_limit must be >= 0")


@dataclass(frozen=True)
class CensusReport:
    """Aggregate outcome of a census. ``tasks_enumerated`` counts every
    definition-valid task seen; ``tasks_valid`` those passing the spec's
    task filter (equal when no filter is set). ``elapsed_seconds`` is
    informational and excluded from serialized output."""

    spec: SearchSpec
    vocabularies: int
    tasks_enumerated: int
    tasks_valid: int
    tasks_solvable: int
    tasks_unsolvable: int
    exemplars: tuple[Task, ...]
    truncated: bool
    elapsed_seconds: float

    def __post_init__(self) -> None:
        assert self.tasks_solvable + self.tasks_unsolvable == self.tasks_valid


def _permute_program_bits(bits: int, perm: tuple[int, ...]) -> int:
    out = 0
    for old, new in enumerate(perm):
        if bits >> old & 1:
            out |= 1 << new
    return out


def _canonical_program_tuple(
    program_bits: tuple[int, ...], n_states: int
) -> tuple[int, ...]:
    best: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(n_states)):
        mapped = tuple(sorted(_permute_program_bits(b, perm) for b in program_bits))
        if best is None or mapped < best:
            best = mapped
    assert best is not None
    return best


def enumerate_vocabularies(spec: SearchSpec) -> Iterator[Vocabulary]:
    """Every vocabulary of ``spec.vocab_size`` programs over the state
    space, in ascending program-tuple order. With ``dedup``, only the
    representative (least under state permutations) of each orbit."""
    space = StateSpace(spec.n_states)
    for combo in itertools.combinations(range(1 << spec.n_states), spec.vocab_size):
        if spec.dedup and _canonical_program_tuple(combo, spec.n_states) != combo:
            continue
        yield Vocabulary.build((Program(b, spec.n_states) for b in combo), space)


def _language_for_census(vocab: Vocabulary) -> Language:
    lang = build_language(vocab)
    if len(lang) > CENSUS_LANGUAGE_CAP:
        raise CapacityError(
            f"language of {len(lang)} statements exceeds the "
            f"{CENSUS_LANGUAGE_CAP}-statement census cap (input enumeration "
            "is 2^|language|); reduce n_states or vocab_size",
            cap_name="census_language_cap",
            cap_value=CENSUS_LANGUAGE_CAP,
        )
    return lang


def _ascending_submasks(mask: int) -> Iterator[int]:
    """Nonzero submasks of ``mask`` in ascending value order."""
    sub = 0
    while True:
        sub = (sub - mask) & mask
        if sub == 0:
            return
        yield sub


def enumerate_task_masks(lang: Language) -> Iterator[tuple[int, int, int]]:
    """Stream of (input mask, output mask, input-extension mask) triples
    over language indices, covering exactly the valid tasks of the
    language, in census order."""
    m = len(lang)
    if m > CENSUS_LANGUAGE_CAP:
        raise CapacityError(
            f"language of {m} statements exceeds the "
            f"{CENSUS_LANGUAGE_CAP}-statement census cap",
            cap_name="census_language_cap",
            cap_value=CENSUS_LANGUAGE_CAP,
        )
    ext = lang.extension_masks()
    full = (1 << m) - 1
    ei_table = [0] * (1 << m)
    for i_mask in range(1, full):
        low = i_mask & -i_mask
        ei = ei_table[i_mask ^ low] | ext[low.bit_length() - 1]
        ei_table[i_mask] = ei
        for o_mask in _ascending_submasks(ei):
            if o_mask != ei:
                yield i_mask, o_mask, ei


def _statements_of_mask(lang: Language, mask: int) -> frozenset[Statement]:
    return frozenset(
        lang.statements[i] for i in range(mask.bit_length()) if mask >> i & 1
    )


def _task_from_masks(lang: Language, i_mask: int, o_mask: int, ei_mask: int) -> Task:
    # construction-correct by the stream's definition; cross-checked
    # against validate_task in the test suite
    return Task(
        inputs=_statements_of_mask(lang, i_mask),
        outputs=_statements_of_mask(lang, o_mask),
        language=lang,
        input_extension=_statements_of_mask(lang, ei_mask),
    )


def is_classification_shaped(task: Task) -> bool:
    """True when the task looks like an encoded classification problem:
    every output is some input plus exactly one extra program, that extra
    program appears in no input, and every input has at least one output.
    """
    input_masks = [s.members for s in task.inputs]
    feature_union = 0
    for m in input_masks:
        feature_union |= m
    covered = set()
    for o in task.outputs:
        matched = None
        for m in input_masks:
            extra = o.members & ~m
            if o.members | m == o.members and extra.bit_count() == 1:
                if extra & feature_union:
                    continue
                matched = m
                break
        if matched is None:
            return False
        covered.add(matched)
    return covered == set(input_masks)


def _mask_classification_shaped(
    statement_members: tuple[int, ...], i_mask: int, o_mask: int
) -> bool:
    input_members = [
        statement_members[i] for i in range(i_mask.bit_length()) if i_mask >> i & 1
    ]
    feature_union = 0
    for m in input_members:
        feature_union |= m
    covered = set()
    for j in range(o_mask.bit_length()):
        if not o_mask >> j & 1:
            continue
        o = statement_members[j]
        matched = None
        for m in input_members:
            extra = o & ~m
            if o | m == o and extra.bit_count() == 1 and not extra & feature_union:
                matched = m
                break
        if matched is None:
            return False
        covered.add(matched)
    return covered == set(input_members)


def enumerate_tasks(vocab: Vocabulary, spec: SearchSpec | None = None) -> Iterator[Task]:
    """Every valid task over the vocabulary, in census order, as Task
    objects. Applies the spec's task filter when given."""
    lang = _language_for_census(vocab)
    members = tuple(s.members for s in lang.statements)
    want_classification = spec.require_classification_shaped if spec else False
    for i_mask, o_mask, ei_mask in enumerate_task_masks(lang):
        if want_classification and not _mask_classification_shaped(
            members, i_mask, o_mask
        ):
            continue
        yield _task_from_masks(lang, i_mask, o_mask, ei_mask)


@dataclass
class _Partial:
    vocabularies: int = 0
    enumerated: int = 0
    valid: int = 0
    solvable: int = 0
    truncated: bool = False

    def merge(self, other: "_Partial") -> None:
        self.vocabularies += other.vocabularies
        self.enumerated += other.enumerated
        self.valid += other.valid
        self.solvable += other.solvable
        self.truncated = self.truncated or other.truncated


def _census_partition(
    spec: SearchSpec, part: int, n_parts: int, deadline: float | None
) -> tuple[_Partial, list[tuple[tuple[int, int, int], Task]]]:
    totals = _Partial()
    exemplars: list[tuple[tuple[int, int, int], Task]] = []
    for ordinal, vocab in enumerate(enumerate_vocabularies(spec)):
        if ordinal % n_parts != part:
            continue
        if deadline is not None and time.time() >= deadline:
            totals.truncated = True
            break
        if spec.max_tasks is not None and totals.valid >= spec.max_tasks:
            totals.truncated = True
            break
        totals.vocabularies += 1
        lang = _language_for_census(vocab)
        _census_language(spec, lang, ordinal, deadline, totals, exemplars)
        if totals.truncated:
            break
    return totals, exemplars


def _census_language(
    spec: SearchSpec,
    lang: Language,
    ordinal: int,
    deadline: float | None,
    totals: _Partial,
    exemplars: list[tuple[tuple[int, int, int], Task]],
) -> None:
    m = len(lang)
    ext = lang.extension_masks()
    members = tuple(s.members for s in lang.statements)
    full = (1 << m) - 1
    ei_table = [0] * (1 << m)
    for i_mask in range(1, full):
        low = i_mask & -i_mask
        ei = ei_table[i_mask ^ low] | ext[low.bit_length() - 1]
        ei_table[i_mask] = ei
        if deadline is not None and time.time() >= deadline:
            totals.truncated = True
            return
        if spec.max_tasks is not None and totals.valid >= spec.max_tasks:
            totals.truncated = True
            return
        n_outputs = (1 << ei.bit_count()) - 2
        if n_outputs <= 0:
            continue
        selections = set()
        for p in range(m):
            sel = ext[p] & ei
            if sel and sel != ei:
                selections.add(sel)
        if not spec.require_classification_shaped:
            totals.enumerated += n_outputs
            totals.valid += n_outputs
            totals.solvable += len(selections)
            if len(exemplars) < spec.exemplar_limit:
                for o_mask in _ascending_submasks(ei):
                    if o_mask == ei or o_mask in selections:
                        continue
                    exemplars.append(
                        ((ordinal, i_mask, o_mask), _task_from_masks(lang, i_mask, o_mask, ei))
                    )
                    if len(exemplars) >= spec.exemplar_limit:
                        break
        else:
            for o_mask in _ascending_submasks(ei):
                if o_mask == ei:
                    continue
                totals.enumerated += 1
                if not _mask_classification_shaped(members, i_mask, o_mask):
                    continue
                totals.valid += 1
                if o_mask in selections:
                    totals.solvable += 1
                elif len(exemplars) < spec.exemplar_limit:
                    exemplars.append(
                        ((ordinal, i_mask, o_mask), _task_from_masks(lang, i_mask, o_mask, ei))
                    )


def census(spec: SearchSpec, workers: int = 1) -> CensusReport:
    """Run the census, optionally partitioned across worker processes.

    Totals and exemplars of an untruncated run are identical for any
    worker count.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    start = time.time()
    deadline = start + spec.time_budget if spec.time_budget is not None else None
    if workers == 1:
        parts = [_census_partition(spec, 0, 1, deadline)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    _census_partition,
                    itertools.repeat(spec, workers),
                    range(workers),
                    itertools.repeat(workers, workers),
                    itertools.repeat(deadline, workers),
                )
            )
    totals = _Partial()
    keyed_exemplars: list[tuple[tuple[int, int, int], Task]] = []
    for partial, exemplars in parts:
        totals.merge(partial)
        keyed_exemplars.extend(exemplars)
    keyed_exemplars.sort(key=lambda kv: kv[0])
    elapsed = time.time() - start
    return CensusReport(
        spec=spec,
        vocabularies=totals.vocabularies,
        tasks_enumerated=totals.enumerated,
        tasks_valid=totals.valid,
        tasks_solvable=totals.solvable,
        tasks_unsolvable=totals.valid - totals.solvable,
        exemplars=tuple(t for _, t in keyed_exemplars[: spec.exemplar_limit]),
        truncated=totals.truncated,
        elapsed_seconds=elapsed,
    )


@dataclass(frozen=True, order=True)
class CanonicalTask:
    """Relabeling-invariant form of a task: the least image, over all state
    permutations, of (program values, input masks, output masks)."""

    n_states: int
    programs: tuple[int, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


def _statement_mask_sort_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def canonicalize_task(task: Task) -> CanonicalTask:
    """Canonical form of a task under state permutation; two tasks are
    isomorphic exactly when their canonical forms are equal."""
    space = task.language.vocabulary.space
    n = space.n_states
    if n > CANON_MAX_STATES:
        raise CapacityError(
            f"canonicalization tries all {n}! state permutations; capped at "
            f"{CANON_MAX_STATES} states",
            cap_name="canon_max_states",
            cap_value=CANON_MAX_STATES,
        )
    program_bits = [p.bits for p in task.language.vocabulary.programs]
    k = len(program_bits)
    input_masks = sorted(s.members for s in task.inputs)
    output_masks = sorted(s.members for s in task.outputs)
    best: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None = None
    for perm in itertools.permutations(range(n)):
        mapped = [_permute_program_bits(b, perm) for b in program_bits]
        order = sorted(range(k), key=lambda i: mapped[i])
        new_index = [0] * k
        for new_pos, old_i in enumerate(order):
            new_index[old_i] = new_pos
        programs = tuple(mapped[i] for i in order)

        def remap(mask: int) -> int:
            out = 0
            for i in range(k):
                if mask >> i & 1:
                    out |= 1 << new_index[i]
            return out

        inputs = tuple(sorted((remap(x) for x in input_masks), key=_statement_mask_sort_key))
        outputs = tuple(sorted((remap(x) for x in output_masks), key=_statement_mask_sort_key))
        key = (programs, inputs, outputs)
        if best is None or key < best:
            best = key
    assert best is not None
    return CanonicalTask(n, *best)


def permute_task(task: Task, perm: tuple[int, ...]) -> Task:
    """Image of a task under a state permutation (``perm[i]`` is where
    0-based state ``i`` goes). Useful for isomorphism tests."""
    space = task.language.vocabulary.space
    if sorted(perm) != list(range(space.n_states)):
        raise DomainError(f"{perm} is not a permutation of 0..{space.n_states - 1}")
    old_programs = task.language.vocabulary.programs
    mapped = [_permute_program_bits(p.bits, perm) for p in old_programs]
    vocab = Vocabulary.build(
        (Program(b, space.n_states) for b in mapped), space
    )
    new_index = {i: vocab.index_of(Program(b, space.n_states)) for i, b in enumerate(mapped)}

    def remap(statement: Statement) -> Statement:
        return Statement.from_indices(new_index[i] for i in statement.indices())

    lang = build_language(vocab)
    return validate_task(
        [remap(s) for s in task.inputs], [remap(s) for s in task.outputs], lang
    )


def task_from_canonical(form: CanonicalTask) -> Task:
    """Materialize a task whose canonical form is ``form``."""
    space = StateSpace(form.n_states)
    vocab = Vocabulary.build(
        (Program(b, form.n_states) for b in form.programs), space
    )
    lang = build_language(vocab)
    return validate_task(
        [Statement(m) for m in form.inputs],
        [Statement(m) for m in form.outputs],
        lang,
    )
