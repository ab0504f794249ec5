"""Tasks, policies, correctness decisions, and exhaustive policy search.

A task pairs a set of input statements with a set of correct outputs drawn
strictly from the inputs' extension. A policy is a single statement; it is
correct when intersecting its extension with the inputs' extension yields
exactly the correct outputs. A set policy generalizes this to several
statements acting jointly through the union of their extensions.

Search results report counts and candidates only; they make no claim about
what the counts mean.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .core import (
    Language,
    Statement,
    extension_of_set,
    extension_of_statement,
    statement_key,
)
from .errors import CapacityError, DomainError, TaskValidationError

SET_POLICY_CANDIDATE_CAP = 1 << 20

SEARCH_MODES = ("exhaustive", "pruned")


@dataclass(frozen=True)
class Task:
    """A validated input/output pair over a language.

    Construct through :func:`validate_task`, which enforces the invariants
    and caches the input extension.
    """

    inputs: frozenset[Statement]
    outputs: frozenset[Statement]
    language: Language
    input_extension: frozenset[Statement]

    def sorted_inputs(self) -> tuple[Statement, ...]:
        return tuple(sorted(self.inputs, key=statement_key))

    def sorted_outputs(self) -> tuple[Statement, ...]:
        return tuple(sorted(self.outputs, key=statement_key))


@dataclass(frozen=True)
class Policy:
    """A single-statement policy."""

    statement: Statement


@dataclass(frozen=True)
class SetPolicy:
    """A policy made of several statements acting through the union of
    their extensions. May be empty, in which case its extension is empty."""

    statements: frozenset[Statement]

    def sorted_statements(self) -> tuple[Statement, ...]:
        return tuple(sorted(self.statements, key=statement_key))


AnyPolicy = Union[Policy, SetPolicy]


@dataclass(frozen=True)
class PolicySearchResult:
    """Outcome of a policy search: candidates examined, the correct ones in
    canonical order, and the selection size for each reported policy."""

    task: Task
    mode: str
    checked: int
    correct: tuple[AnyPolicy, ...]
    per_policy_selection_counts: Mapping[AnyPolicy, int] = field(default_factory=dict)


def validate_task(
    inputs: Iterable[Statement], outputs: Iterable[Statement], lang: Language
) -> Task:
    """Check the task invariants and return the task with its input
    extension cached.

    Checks run in a fixed order (emptiness, then input membership and
    properness, then output membership and properness), so a candidate
    violating several invariants reports the same code every time.
    """
    inputs = frozenset(inputs)
    outputs = frozenset(outputs)
    if not inputs:
        raise TaskValidationError("empty-inputs", "a task needs at least one input")
    if not outputs:
        raise TaskValidationError("empty-outputs", "a task needs at least one output")
    for x in sorted(inputs, key=statement_key):
        if x not in lang:
            raise TaskValidationError(
                "input-not-statement",
                f"input with member mask {x.members:#x} is not a statement "
                "of the language",
            )
    if len(inputs) == len(lang):
        raise TaskValidationError(
            "input-equals-language",
            "the inputs must be a proper subset of the language",
        )
    input_extension = extension_of_set(inputs, lang)
    for o in sorted(outputs, key=statement_key):
        if o not in input_extension:
            raise TaskValidationError(
                "output-outside-extension",
                f"output with member mask {o.members:#x} is not in the "
                "extension of the inputs",
            )
    if outputs == input_extension:
        raise TaskValidationError(
            "output-equals-extension",
            "the outputs must be a proper subset of the inputs' extension",
        )
    return Task(inputs, outputs, lang, input_extension)


def selection(pi: Statement, task: Task) -> frozenset[Statement]:
    """The statements a policy selects from the inputs' extension:
    E_inputs ∩ E_policy."""
    if pi not in task.language:
        raise DomainError(
            f"policy with member mask {pi.members:#x} is not in the task's language"
        )
    return frozenset(y for y in task.input_extension if pi.issubset(y))


def is_correct_policy(pi: Policy, task: Task) -> bool:
    """True when the policy selects exactly the correct outputs."""
    return selection(pi.statement, task) == task.outputs


def max_policy_length_bound(task: Task) -> int:
    """Largest member count a correct policy can have.

    Every output must complete the policy, so the policy is a subset of
    each output; the shortest output bounds the policy's size.
    """
    return min(len(o) for o in task.outputs)


def find_correct_policies(task: Task, mode: str = "exhaustive") -> PolicySearchResult:
    """Search every statement of the language for correct policies.

    ``exhaustive`` checks all statements including the empty one;
    ``pruned`` skips statements longer than :func:`max_policy_length_bound`.
    Both modes find the same correct set; ``checked`` counts the candidates
    actually examined.
    """
    if mode not in SEARCH_MODES:
        raise ValueError(f"unknown search mode {mode!r}; expected one of {SEARCH_MODES}")
    bound = max_policy_length_bound(task) if mode == "pruned" else None
    counts: dict[AnyPolicy, int] = {}
    correct: list[Policy] = []
    for candidate in task.language:
        if bound is not None and len(candidate) > bound:
            continue
        sel = selection(candidate, task)
        policy = Policy(candidate)
        counts[policy] = len(sel)
        if sel == task.outputs:
            correct.append(policy)
    return PolicySearchResult(
        task=task,
        mode=mode,
        checked=len(counts),
        correct=tuple(correct),
        per_policy_selection_counts=counts,
    )


def set_selection(policy: SetPolicy, task: Task) -> frozenset[Statement]:
    """E_inputs ∩ E_policy for a set policy (empty for the empty policy)."""
    return extension_of_set(policy.statements, task.language) & task.input_extension


def is_correct_set_policy(policy: SetPolicy, task: Task) -> bool:
    """True when the set policy's joint extension selects exactly the
    correct outputs."""
    return set_selection(policy, task) == task.outputs


def _set_policy_candidate_count(n_statements: int, cap: int | None) -> int:
    if cap is None:
        return 1 << n_statements
    return sum(math.comb(n_statements, k) for k in range(min(cap, n_statements) + 1))


def find_correct_set_policies(task: Task, cap: int | None = None) -> PolicySearchResult:
    """Enumerate subsets of the language as set policies.

    With ``cap=None`` every subset is checked (2^len(language) candidates);
    with a cap only subsets of at most ``cap`` statements are. The total
    candidate count must stay under ``SET_POLICY_CANDIDATE_CAP`` or a
    capacity error is raised before any work.

    Selection counts are reported for the correct policies only; a full
    per-candidate map would dwarf the result.
    """
    lang = task.language
    m = len(lang)
    n_candidates = _set_policy_candidate_count(m, cap)
    if n_candidates > SET_POLICY_CANDIDATE_CAP:
        raise CapacityError(
            f"set-policy search over {n_candidates} candidate subsets exceeds "
            f"the {SET_POLICY_CANDIDATE_CAP}-candidate cap; pass a smaller "
            "subset-size cap",
            cap_name="set_policy_candidates",
            cap_value=SET_POLICY_CANDIDATE_CAP,
        )
    ext = lang.extension_masks()
    ei_mask = 0
    for s in task.input_extension:
        ei_mask |= 1 << lang.index_of(s)
    o_mask = 0
    for s in task.outputs:
        o_mask |= 1 << lang.index_of(s)

    correct_masks: list[int] = []
    checked = 0
    if cap is None:
        # union-extension table over all subsets, one OR per subset
        joint = [0] * (1 << m)
        for subset in range(1 << m):
            if subset:
                low = subset & -subset
                joint[subset] = joint[subset ^ low] | ext[low.bit_length() - 1]
            checked += 1
            if joint[subset] & ei_mask == o_mask:
                correct_masks.append(subset)
    else:
        for size in range(min(cap, m) + 1):
            for combo in itertools.combinations(range(m), size):
                joint_mask = 0
                for i in combo:
                    joint_mask |= ext[i]
                checked += 1
                if joint_mask & ei_mask == o_mask:
                    subset = 0
                    for i in combo:
                        subset |= 1 << i
                    correct_masks.append(subset)

    correct_masks.sort(key=lambda s: (s.bit_count(), s))
    correct = tuple(
        SetPolicy(frozenset(lang.statements[i] for i in _bit_indices(mask)))
        for mask in correct_masks
    )
    counts = {p: len(set_selection(p, task)) for p in correct}
    mode = "set-full" if cap is None else f"set-cap-{cap}"
    return PolicySearchResult(
        task=task,
        mode=mode,
        checked=checked,
        correct=correct,
        per_policy_selection_counts=counts,
    )


def _bit_indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class BinaryDecomposition:
    """Binary subtasks of a task, one per input, plus the pairs that could
    not form a valid task and the invariant each one violated."""

    subtasks: tuple[Task, ...]
    failures: tuple[tuple[Statement, str], ...]


def decompose_binary(task: Task) -> BinaryDecomposition:
    """Split a task into one subtask per input statement.

    Each input is paired with the outputs that complete it. Pairs that fail
    validation (an input no output extends, or whose outputs exhaust its
    extension) are recorded rather than raised.
    """
    subtasks: list[Task] = []
    failures: list[tuple[Statement, str]] = []
    for i in sorted(task.inputs, key=statement_key):
        extending = frozenset(o for o in task.outputs if i.issubset(o))
        try:
            subtasks.append(validate_task([i], extending, task.language))
        except TaskValidationError as err:
            failures.append((i, err.code))
    return BinaryDecomposition(tuple(subtasks), tuple(failures))


def policy_weakness(policy: AnyPolicy, lang: Language) -> int:
    """Extension cardinality of a policy within the language.

    Weakness here is a borrowed measure, not something this package
    defines: the count of completions a policy admits.
    """
    if isinstance(policy, Policy):
        return len(extension_of_statement(policy.statement, lang))
    return len(extension_of_set(policy.statements, lang))
