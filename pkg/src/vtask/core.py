"""Bitset model of states, declarative programs, statements, and languages.

A declarative program over an environment of ``n`` states is a subset of
those states, stored as an ``n``-bit integer (bit ``i`` set means state
``i + 1`` is a member; the leftmost character of the ``"01111"`` literal
notation is state 1). A vocabulary is an ordered tuple of distinct
programs; a statement is a subset of the vocabulary, stored as a bitmask
over vocabulary indices, that is admitted only when its member programs
share at least one state. The intersection of zero programs is the whole
state space, so the empty statement belongs to every language.

All types here are immutable and hashable; languages may be shared freely
across threads or worker processes. Callers that want to parallelise
language construction can partition the subset range and merge, since
statement admission is independent per subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import CapacityError, DomainError, MalformedInputError

MAX_STATES = 64
MAX_VOCAB = 20


@dataclass(frozen=True)
class StateSpace:
    """The finite set of environment states, identified 1..n_states."""

    n_states: int

    def __post_init__(self) -> None:
        if self.n_states < 1:
            raise MalformedInputError("a state space needs at least one state")
        if self.n_states > MAX_STATES:
            raise CapacityError(
                f"state space of {self.n_states} states exceeds the "
                f"{MAX_STATES}-state cap (one machine word per program); "
                "this is an implementation limit, not a model constraint",
                cap_name="max_states",
                cap_value=MAX_STATES,
            )

    @property
    def full_mask(self) -> int:
        return (1 << self.n_states) - 1

    def full_program(self) -> "Program":
        """The program that holds in every state."""
        return Program(self.full_mask, self.n_states)


@dataclass(frozen=True, order=True)
class Program:
    """A declarative program: the set of states in which it returns true."""

    bits: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise MalformedInputError("program width must be positive")
        if self.bits < 0 or self.bits >> self.width:
            raise MalformedInputError(
                f"program bits {self.bits:#x} do not fit in width {self.width}"
            )

    @classmethod
    def from_included_states(cls, states: Iterable[int], width: int) -> "Program":
        """Build a program from 1-based state numbers."""
        bits = 0
        for s in states:
            if not 1 <= s <= width:
                raise MalformedInputError(f"state {s} outside 1..{width}")
            bits |= 1 << (s - 1)
        return cls(bits, width)

    def includes_state(self, state: int) -> bool:
        if not 1 <= state <= self.width:
            raise MalformedInputError(f"state {state} outside 1..{self.width}")
        return bool(self.bits >> (state - 1) & 1)

    def included_states(self) -> tuple[int, ...]:
        return tuple(s for s in range(1, self.width + 1) if self.bits >> (s - 1) & 1)

    def is_empty(self) -> bool:
        return self.bits == 0

    def to_bitstring(self) -> str:
        """Literal notation: leftmost character is state 1."""
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.width))

    def __and__(self, other: "Program") -> "Program":
        if self.width != other.width:
            raise MalformedInputError(
                f"program width mismatch: {self.width} vs {other.width}"
            )
        return Program(self.bits & other.bits, self.width)


@dataclass(frozen=True)
class Vocabulary:
    """An ordered set of distinct programs; the index of a program is its
    identity inside statements.

    Order is canonical (ascending by the underlying bit value) so that
    everything derived from a vocabulary is deterministic.
    """

    programs: tuple[Program, ...]
    space: StateSpace

    @classmethod
    def build(cls, programs: Iterable[Program], space: StateSpace) -> "Vocabulary":
        programs = tuple(sorted(programs))
        for p in programs:
            if p.width != space.n_states:
                raise MalformedInputError(
                    f"program width {p.width} does not match the "
                    f"{space.n_states}-state space"
                )
        for a, b in zip(programs, programs[1:]):
            if a == b:
                raise MalformedInputError(
                    f"duplicate program {a.to_bitstring()} in vocabulary"
                )
        if len(programs) > MAX_VOCAB:
            raise CapacityError(
                f"vocabulary of {len(programs)} programs exceeds the "
                f"{MAX_VOCAB}-program materialization cap "
                f"(2^{MAX_VOCAB} candidate statements); this is an "
                "implementation limit, not a model constraint",
                cap_name="max_vocab",
                cap_value=MAX_VOCAB,
            )
        return cls(programs, space)

    def __len__(self) -> int:
        return len(self.programs)

    def __iter__(self) -> Iterator[Program]:
        return iter(self.programs)

    def index_of(self, program: Program) -> int:
        try:
            return self.programs.index(program)
        except ValueError:
            raise DomainError(
                f"program {program.to_bitstring()} is not in the vocabulary"
            ) from None

    @property
    def member_mask(self) -> int:
        """Bitmask selecting every vocabulary index."""
        return (1 << len(self.programs)) - 1


@dataclass(frozen=True)
class Statement:
    """A subset of the vocabulary, as a bitmask over vocabulary indices.

    Instances are plain masks; admission (nonempty intersection of the
    member programs) is checked by :func:`is_statement` and guaranteed for
    statements handed out by a :class:`Language`.
    """

    members: int

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "Statement":
        mask = 0
        for i in indices:
            if i < 0:
                raise MalformedInputError(f"vocabulary index {i} is negative")
            mask |= 1 << i
        return cls(mask)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.members.bit_length()) if self.members >> i & 1)

    def __len__(self) -> int:
        return self.members.bit_count()

    def issubset(self, other: "Statement") -> bool:
        return self.members & other.members == self.members

    def union(self, other: "Statement") -> "Statement":
        return Statement(self.members | other.members)


EMPTY_STATEMENT = Statement(0)


def statement_key(statement: Statement) -> tuple[int, int]:
    """Canonical sort key: member count first, then mask value."""
    return (len(statement), statement.members)


@dataclass(frozen=True)
class Language:
    """All statements over a vocabulary, in canonical order.

    Build through :func:`build_language`; the statement tuple is sorted by
    (member count, mask value) and always starts with the empty statement.
    """

    vocabulary: Vocabulary
    statements: tuple[Statement, ...]

    def __len__(self) -> int:
        return len(self.statements)

    def __iter__(self) -> Iterator[Statement]:
        return iter(self.statements)

    def __contains__(self, statement: Statement) -> bool:
        return statement.members in self._positions

    @cached_property
    def _positions(self) -> dict[int, int]:
        return {s.members: i for i, s in enumerate(self.statements)}

    def index_of(self, statement: Statement) -> int:
        try:
            return self._positions[statement.members]
        except KeyError:
            raise DomainError(
                f"statement with member mask {statement.members:#x} is not "
                "in this language"
            ) from None

    def statement_set(self) -> frozenset[Statement]:
        return frozenset(self.statements)

    def extension_masks(self) -> tuple[int, ...]:
        """For each statement, the bitmask (over language indices) of its
        extension. O(len^2); intended for small languages in search code."""
        return self._extension_masks

    @cached_property
    def _extension_masks(self) -> tuple[int, ...]:
        masks = []
        for s in self.statements:
            mask = 0
            for j, t in enumerate(self.statements):
                if s.issubset(t):
                    mask |= 1 << j
            masks.append(mask)
        return tuple(masks)


def intersect_programs(programs: Iterable[Program], space: StateSpace) -> Program:
    """Intersection of a set of programs; the empty intersection is the
    whole state space."""
    acc = space.full_mask
    for p in programs:
        if p.width != space.n_states:
            raise MalformedInputError(
                f"program width {p.width} does not match the "
                f"{space.n_states}-state space"
            )
        acc &= p.bits
    return Program(acc, space.n_states)


def is_statement(members: Iterable[int], vocab: Vocabulary) -> bool:
    """True when the programs at the given vocabulary indices share at
    least one state. True for the empty selection."""
    acc = vocab.space.full_mask
    for i in members:
        if not 0 <= i < len(vocab):
            raise MalformedInputError(
                f"vocabulary index {i} outside 0..{len(vocab) - 1}"
            )
        acc &= vocab.programs[i].bits
    return acc != 0


def build_language(vocab: Vocabulary) -> Language:
    """Materialize every admissible subset of the vocabulary.

    Walks all 2^len(vocab) subsets with an incremental-intersection table,
    so each subset costs one AND. The vocabulary cap bounds the walk.
    """
    k = len(vocab)
    full = vocab.space.full_mask
    inter = [full] * (1 << k)
    kept: list[int] = [0]
    program_bits = [p.bits for p in vocab.programs]
    for mask in range(1, 1 << k):
        low = mask & -mask
        value = inter[mask ^ low] & program_bits[low.bit_length() - 1]
        inter[mask] = value
        if value:
            kept.append(mask)
    kept.sort(key=lambda m: (m.bit_count(), m))
    return Language(vocab, tuple(Statement(m) for m in kept))


def extension_of_statement(x: Statement, lang: Language) -> frozenset[Statement]:
    """All completions of ``x``: the statements of which ``x`` is a subset.
    Always contains ``x`` itself; the empty statement's extension is the
    whole language."""
    if x not in lang:
        raise DomainError(
            f"statement with member mask {x.members:#x} is not in this language"
        )
    complement = lang.vocabulary.member_mask & ~x.members
    positions = lang._positions
    out = []
    sub = 0
    while True:
        candidate = x.members | sub
        if candidate in positions:
            out.append(Statement(candidate))
        if sub == complement:
            break
        sub = (sub - complement) & complement
    return frozenset(out)


def extension_of_set(X: Iterable[Statement], lang: Language) -> frozenset[Statement]:
    """Union of the member extensions; empty for the empty set."""
    out: frozenset[Statement] = frozenset()
    for x in X:
        out |= extension_of_statement(x, lang)
    return out
