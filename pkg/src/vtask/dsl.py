"""Task-file parsing and deterministic serialization of reports.

Task files (extension ``.pvt``) are line oriented; ``#`` starts a comment
and blank lines are ignored. Directives:

    states <n>                      once, before everything else
    program <name> <bits>           declare a program ("01111" notation,
                                    leftmost character is state 1)
    label <name> <bits>             declare a label program
    input <name> [<name> ...]       one input statement per line
    output <name> [<name> ...]      one output statement per line
    example <feat>[,<feat>...] -> <label>
                                    one classification example per line

A file uses either input/output lines (explicit mode) or example lines
(classification mode); mixing them is an error. Names match
``[A-Za-z_][A-Za-z0-9_]*``. Parsing reports every problem it finds, each
with a line number, rather than stopping at the first.

Parsed documents are normalized (declarations and statement lines sorted,
duplicates removed), so serialization is a pure function of content and
parse-serialize round trips are byte stable. All report serializers are
deterministic: identical report content yields identical bytes, and
volatile fields (timings) are never serialized.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Language, Program, StateSpace, Statement, Vocabulary, build_language
from .encoder import ClassificationSpec, encode_classification
from .errors import ParseDiagnostic, ParseError, TaskFileError
from .search import CensusReport
from .tasks import Policy, PolicySearchResult, SetPolicy, Task, validate_task

NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_DIRECTIVES = ("states", "program", "label", "input", "output", "example")


def parse_program_literal(text: str, space: StateSpace) -> Program:
    """Parse "01111" notation; leftmost character is state 1.

    Raises a parse error carrying the 1-based column of the first bad
    character, or a width complaint when the length is off.
    """
    for col, ch in enumerate(text, start=1):
        if ch not in "01":
            raise ParseError(
                f"invalid character {ch!r} in program literal (expected 0 or 1)",
                column=col,
            )
    if len(text) != space.n_states:
        raise ParseError(
            f"program literal {text!r} has width {len(text)}, expected "
            f"{space.n_states}"
        )
    bits = 0
    for i, ch in enumerate(text):
        if ch == "1":
            bits |= 1 << i
    return Program(bits, space.n_states)


@dataclass(frozen=True)
class TaskDocument:
    """Normalized contents of a task file."""

    n_states: int
    programs: tuple[tuple[str, Program], ...]
    labels: tuple[tuple[str, Program], ...]
    inputs: tuple[tuple[str, ...], ...]
    outputs: tuple[tuple[str, ...], ...]
    examples: tuple[tuple[tuple[str, ...], str], ...]

    @classmethod
    def build(
        cls,
        n_states: int,
        programs: Iterable[tuple[str, Program]] = (),
        labels: Iterable[tuple[str, Program]] = (),
        inputs: Iterable[Iterable[str]] = (),
        outputs: Iterable[Iterable[str]] = (),
        examples: Iterable[tuple[Iterable[str], str]] = (),
    ) -> "TaskDocument":
        return cls(
            n_states=n_states,
            programs=tuple(sorted(programs)),
            labels=tuple(sorted(labels)),
            inputs=tuple(sorted({tuple(sorted(set(line))) for line in inputs})),
            outputs=tuple(sorted({tuple(sorted(set(line))) for line in outputs})),
            examples=tuple(
                sorted({(tuple(sorted(set(f))), lbl) for f, lbl in examples})
            ),
        )

    def declared(self) -> dict[str, Program]:
        table = dict(self.programs)
        table.update(self.labels)
        return table


@dataclass
class _LineParse:
    """Raw per-line records collected before semantic checks."""

    states: list[tuple[int, int]]
    programs: list[tuple[int, str, str, int]]  # line, name, literal, literal col
    labels: list[tuple[int, str, str, int]]
    inputs: list[tuple[int, list[tuple[str, int]]]]
    outputs: list[tuple[int, list[tuple[str, int]]]]
    examples: list[tuple[int, list[tuple[str, int]], tuple[str, int]]]
    first_directive_line: int | None


def _tokenize(body: str) -> list[tuple[str, int]]:
    """(token, 1-based column) pairs for a comment-stripped line."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", body)]


def _scan_lines(text: str, errors: list[ParseDiagnostic]) -> _LineParse:
    parsed = _LineParse([], [], [], [], [], [], None)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = _tokenize(body)
        if not tokens:
            continue
        keyword, key_col = tokens[0]
        rest = tokens[1:]
        if parsed.first_directive_line is None:
            parsed.first_directive_line = line_no
        if keyword == "states":
            if len(rest) != 1:
                errors.append(
                    ParseDiagnostic(line_no, key_col, "states takes exactly one number")
                )
                continue
            value, col = rest[0]
            if not value.isdigit() or int(value) < 1:
                errors.append(
                    ParseDiagnostic(line_no, col, f"invalid state count {value!r}")
                )
                continue
            parsed.states.append((line_no, int(value)))
        elif keyword in ("program", "label"):
            if len(rest) != 2:
                errors.append(
                    ParseDiagnostic(
                        line_no, key_col, f"{keyword} takes a name and a literal"
                    )
                )
                continue
            (name, name_col), (literal, lit_col) = rest
            if not NAME_RE.match(name):
                errors.append(
                    ParseDiagnostic(line_no, name_col, f"invalid name {name!r}")
                )
                continue
            record = (line_no, name, literal, lit_col)
            (parsed.programs if keyword == "program" else parsed.labels).append(record)
        elif keyword in ("input", "output"):
            if not rest:
                errors.append(
                    ParseDiagnostic(
                        line_no, key_col, f"{keyword} needs at least one name"
                    )
                )
                continue
            names = []
            ok = True
            for name, col in rest:
                if not NAME_RE.match(name):
                    errors.append(
                        ParseDiagnostic(line_no, col, f"invalid name {name!r}")
                    )
                    ok = False
                else:
                    names.append((name, col))
            if ok:
                (parsed.inputs if keyword == "input" else parsed.outputs).append(
                    (line_no, names)
                )
        elif keyword == "example":
            _scan_example(line_no, key_col, rest, parsed, errors)
        else:
            errors.append(
                ParseDiagnostic(
                    line_no,
                    key_col,
                    f"unknown directive {keyword!r} (expected one of "
                    f"{', '.join(_DIRECTIVES)})",
                )
            )
    return parsed


def _scan_example(
    line_no: int,
    key_col: int,
    rest: list[tuple[str, int]],
    parsed: _LineParse,
    errors: list[ParseDiagnostic],
) -> None:
    arrows = [i for i, (tok, _) in enumerate(rest) if tok == "->"]
    if len(arrows) != 1:
        errors.append(
            ParseDiagnostic(
                line_no, key_col, "example needs exactly one '->' separator"
            )
        )
        return
    arrow = arrows[0]
    feature_tokens, label_tokens = rest[:arrow], rest[arrow + 1 :]
    if not feature_tokens or len(label_tokens) != 1:
        errors.append(
            ParseDiagnostic(
                line_no,
                key_col,
                "example form is: example <feat>[,<feat>...] -> <label>",
            )
        )
        return
    features: list[tuple[str, int]] = []
    ok = True
    for chunk, col in feature_tokens:
        offset = 0
        for piece in chunk.split(","):
            piece = piece.strip()
            if piece:
                if NAME_RE.match(piece):
                    features.append((piece, col + offset))
                else:
                    errors.append(
                        ParseDiagnostic(
                            line_no, col + offset, f"invalid name {piece!r}"
                        )
                    )
                    ok = False
            offset += len(piece) + 1
    label, label_col = label_tokens[0]
    if not NAME_RE.match(label):
        errors.append(ParseDiagnostic(line_no, label_col, f"invalid name {label!r}"))
        ok = False
    if ok and features:
        parsed.examples.append((line_no, features, (label, label_col)))
    elif ok:
        errors.append(
            ParseDiagnostic(line_no, key_col, "example needs at least one feature")
        )


def parse_task_file(text: str) -> TaskDocument:
    """Parse a task file, collecting every diagnostic before failing."""
    errors: list[ParseDiagnostic] = []
    parsed = _scan_lines(text, errors)

    n_states: int | None = None
    if not parsed.states:
        errors.append(ParseDiagnostic(1, None, "missing states declaration"))
    else:
        states_line, n_states = parsed.states[0]
        for line_no, _ in parsed.states[1:]:
            errors.append(
                ParseDiagnostic(line_no, None, "duplicate states declaration")
            )
        if parsed.first_directive_line != states_line:
            errors.append(
                ParseDiagnostic(
                    parsed.first_directive_line or 1,
                    None,
                    "the states declaration must come before other directives",
                )
            )

    declared: dict[str, tuple[int, Program]] = {}
    literal_lines: dict[int, tuple[int, str]] = {}
    programs: list[tuple[str, Program]] = []
    labels: list[tuple[str, Program]] = []
    for is_label, records in ((False, parsed.programs), (True, parsed.labels)):
        for line_no, name, literal, lit_col in records:
            if name in declared:
                errors.append(
                    ParseDiagnostic(
                        line_no,
                        None,
                        f"duplicate declaration of {name!r} "
                        f"(first declared on line {declared[name][0]})",
                    )
                )
                continue
            program = None
            if n_states is not None:
                try:
                    program = parse_program_literal(literal, StateSpace(n_states))
                except ParseError as err:
                    column = (
                        lit_col + err.column - 1 if err.column is not None else lit_col
                    )
                    errors.append(ParseDiagnostic(line_no, column, str(err)))
            if program is None:
                declared[name] = (line_no, Program(0, 1))
                continue
            if program.bits in literal_lines:
                prev_line, prev_name = literal_lines[program.bits]
                errors.append(
                    ParseDiagnostic(
                        line_no,
                        lit_col,
                        f"program {name!r} duplicates the states of "
                        f"{prev_name!r} (line {prev_line})",
                    )
                )
                continue
            literal_lines[program.bits] = (line_no, name)
            declared[name] = (line_no, program)
            (labels if is_label else programs).append((name, program))

    label_names = {name for name, _ in labels}
    program_names = {name for name, _ in programs}

    def check_reference(line_no: int, name: str, col: int) -> bool:
        if name not in declared:
            errors.append(
                ParseDiagnostic(line_no, col, f"reference to undeclared name {name!r}")
            )
            return False
        return True

    inputs = []
    for line_no, names in parsed.inputs:
        if all(check_reference(line_no, n, c) for n, c in names):
            inputs.append([n for n, _ in names])
    outputs = []
    for line_no, names in parsed.outputs:
        if all(check_reference(line_no, n, c) for n, c in names):
            outputs.append([n for n, _ in names])
    examples = []
    for line_no, features, (label, label_col) in parsed.examples:
        ok = True
        for name, col in features:
            if not check_reference(line_no, name, col):
                ok = False
            elif name in label_names:
                errors.append(
                    ParseDiagnostic(
                        line_no, col, f"{name!r} is a label and cannot be a feature"
                    )
                )
                ok = False
        if not check_reference(line_no, label, label_col):
            ok = False
        elif label in program_names:
            errors.append(
                ParseDiagnostic(
                    line_no,
                    label_col,
                    f"{label!r} is a program; example labels must be declared "
                    "with 'label'",
                )
            )
            ok = False
        if ok:
            examples.append(([n for n, _ in features], label))

    io_lines = parsed.inputs + parsed.outputs
    if io_lines and parsed.examples:
        first_io = min(line for line, *_ in io_lines)
        first_example = min(line for line, *_ in parsed.examples)
        errors.append(
            ParseDiagnostic(
                max(first_io, first_example),
                None,
                "cannot mix input/output lines with example lines",
            )
        )
    elif parsed.inputs and not parsed.outputs:
        errors.append(
            ParseDiagnostic(
                parsed.inputs[0][0], None, "input lines present but no output lines"
            )
        )
    elif parsed.outputs and not parsed.inputs:
        errors.append(
            ParseDiagnostic(
                parsed.outputs[0][0], None, "output lines present but no input lines"
            )
        )

    if errors:
        raise TaskFileError(tuple(sorted(errors, key=lambda d: (d.line, d.column or 0))))
    assert n_states is not None
    return TaskDocument.build(
        n_states=n_states,
        programs=programs,
        labels=labels,
        inputs=inputs,
        outputs=outputs,
        examples=examples,
    )


def serialize_task_document(doc: TaskDocument) -> str:
    """Canonical text for a document; parsing it back yields an equal
    document."""
    lines = [f"states {doc.n_states}"]
    for name, program in doc.programs:
        lines.append(f"program {name} {program.to_bitstring()}")
    for name, program in doc.labels:
        lines.append(f"label {name} {program.to_bitstring()}")
    for names in doc.inputs:
        lines.append("input " + " ".join(names))
    for names in doc.outputs:
        lines.append("output " + " ".join(names))
    for features, label in doc.examples:
        lines.append(f"example {','.join(features)} -> {label}")
    return "\n".join(lines) + "\n"


def serialize_document_tree(doc: TaskDocument) -> bytes:
    """Key-sorted JSON rendering of a document."""
    tree = {
        "states": doc.n_states,
        "programs": {name: p.to_bitstring() for name, p in doc.programs},
        "labels": {name: p.to_bitstring() for name, p in doc.labels},
        "inputs": [list(line) for line in doc.inputs],
        "outputs": [list(line) for line in doc.outputs],
        "examples": [
            {"features": list(features), "label": label}
            for features, label in doc.examples
        ],
    }
    return _json_bytes(tree)


@dataclass(frozen=True)
class RealizedDocument:
    """Domain objects built from a document: the vocabulary and language,
    names aligned to vocabulary indices, and the task, when the document
    defines one."""

    document: TaskDocument
    space: StateSpace
    vocabulary: Vocabulary
    language: Language
    names: tuple[str, ...]
    task: Task | None
    classification: ClassificationSpec | None


def realize_document(doc: TaskDocument) -> RealizedDocument:
    """Build the vocabulary, language, and (if present) task described by
    a document. Capacity, encoding, and task-invariant errors propagate.
    """
    space = StateSpace(doc.n_states)
    declared = doc.declared()
    vocab = Vocabulary.build(declared.values(), space)
    by_value = {program.bits: name for name, program in declared.items()}
    names = tuple(by_value[p.bits] for p in vocab.programs)
    language = build_language(vocab)

    classification = None
    task = None
    if doc.examples:
        classification = ClassificationSpec.build(
            space,
            features=dict(doc.programs),
            labels=dict(doc.labels),
            examples=doc.examples,
        )
        task = encode_classification(classification)
        # re-anchor the task to this realization's language object
        task = validate_task(task.inputs, task.outputs, language)
    elif doc.inputs or doc.outputs:
        index = {name: vocab.index_of(program) for name, program in declared.items()}
        input_statements = [
            Statement.from_indices(index[n] for n in line) for line in doc.inputs
        ]
        output_statements = [
            Statement.from_indices(index[n] for n in line) for line in doc.outputs
        ]
        task = validate_task(input_statements, output_statements, language)
    return RealizedDocument(
        document=doc,
        space=space,
        vocabulary=vocab,
        language=language,
        names=names,
        task=task,
        classification=classification,
    )


# ---------------------------------------------------------------------------
# rendering and report serialization
# ---------------------------------------------------------------------------


def render_statement(
    statement: Statement, vocabulary: Vocabulary, names: Sequence[str] | None = None
) -> str:
    """"{f1 f3}" with names, "{01111 11011}" without; "{}" for the empty
    statement."""
    if names is not None:
        parts = sorted(names[i] for i in statement.indices())
    else:
        parts = [vocabulary.programs[i].to_bitstring() for i in statement.indices()]
    return "{" + " ".join(parts) + "}"


def _statement_names(
    statement: Statement, vocabulary: Vocabulary, names: Sequence[str] | None
) -> list[str]:
    if names is not None:
        return sorted(names[i] for i in statement.indices())
    return [vocabulary.programs[i].to_bitstring() for i in statement.indices()]


def _render_policy(
    policy: Policy | SetPolicy, vocabulary: Vocabulary, names: Sequence[str] | None
) -> str:
    if isinstance(policy, Policy):
        return render_statement(policy.statement, vocabulary, names)
    inner = " ".join(
        render_statement(s, vocabulary, names) for s in policy.sorted_statements()
    )
    return "[" + inner + "]"


def _policy_names(
    policy: Policy | SetPolicy, vocabulary: Vocabulary, names: Sequence[str] | None
):
    if isinstance(policy, Policy):
        return _statement_names(policy.statement, vocabulary, names)
    return [
        _statement_names(s, vocabulary, names) for s in policy.sorted_statements()
    ]


def _to_bytes(lines: list[str]) -> bytes:
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json_bytes(tree) -> bytes:
    return (json.dumps(tree, sort_keys=True, indent=2) + "\n").encode("utf-8")


def serialize_report(
    report: PolicySearchResult | CensusReport,
    mode: str = "text",
    names: Sequence[str] | None = None,
) -> bytes:
    """Deterministic bytes for a search or census report.

    ``text`` is the human-readable layout; ``structured`` is a key-sorted
    JSON tree. Identical report content always yields identical bytes.
    """
    if mode not in ("text", "structured"):
        raise ValueError(f"unknown serialization mode {mode!r}")
    if isinstance(report, PolicySearchResult):
        if mode == "text":
            return _search_text(report, names)
        return _search_structured(report, names)
    if isinstance(report, CensusReport):
        if mode == "text":
            return _census_text(report)
        return _census_structured(report)
    raise TypeError(f"cannot serialize {type(report).__name__}")


def _search_text(report: PolicySearchResult, names: Sequence[str] | None) -> bytes:
    task = report.task
    vocab = task.language.vocabulary
    lines = [
        "inputs: " + " ".join(render_statement(s, vocab, names) for s in task.sorted_inputs()),
        "outputs: " + " ".join(render_statement(s, vocab, names) for s in task.sorted_outputs()),
        f"language: {len(task.language)} statements",
        f"mode: {report.mode}",
        f"checked: {report.checked}",
        f"correct policies: {len(report.correct)}",
    ]
    for policy in report.correct:
        lines.append("  " + _render_policy(policy, vocab, names))
    if report.per_policy_selection_counts:
        lines.append("selection counts:")
        for policy, count in report.per_policy_selection_counts.items():
            lines.append(f"  {_render_policy(policy, vocab, names)}: {count}")
    return _to_bytes(lines)


def _search_structured(report: PolicySearchResult, names: Sequence[str] | None) -> bytes:
    task = report.task
    vocab = task.language.vocabulary
    tree = {
        "inputs": [_statement_names(s, vocab, names) for s in task.sorted_inputs()],
        "outputs": [_statement_names(s, vocab, names) for s in task.sorted_outputs()],
        "language_size": len(task.language),
        "mode": report.mode,
        "checked": report.checked,
        "correct_count": len(report.correct),
        "correct": [_policy_names(p, vocab, names) for p in report.correct],
        "selection_counts": [
            {"policy": _policy_names(p, vocab, names), "selected": count}
            for p, count in report.per_policy_selection_counts.items()
        ],
    }
    return _json_bytes(tree)


def _census_spec_fields(report: CensusReport) -> list[tuple[str, object]]:
    spec = report.spec
    return [
        ("n_states", spec.n_states),
        ("vocab_size", spec.vocab_size),
        ("require_classification_shaped", spec.require_classification_shaped),
        ("dedup", spec.dedup),
        ("max_tasks", spec.max_tasks),
        ("time_budget", spec.time_budget),
        ("exemplar_limit", spec.exemplar_limit),
    ]


def _census_text(report: CensusReport) -> bytes:
    lines = [
        "census:",
    ]
    for key, value in _census_spec_fields(report):
        rendered = "none" if value is None else str(value).lower() if isinstance(value, bool) else str(value)
        lines.append(f"  {key}: {rendered}")
    lines += [
        f"vocabularies: {report.vocabularies}",
        f"tasks enumerated: {report.tasks_enumerated}",
        f"tasks valid: {report.tasks_valid}",
        f"tasks solvable: {report.tasks_solvable}",
        f"tasks unsolvable: {report.tasks_unsolvable}",
        f"truncated: {str(report.truncated).lower()}",
        f"exemplars: {len(report.exemplars)}",
    ]
    for task in report.exemplars:
        vocab = task.language.vocabulary
        lines.append(
            "  vocabulary [" + " ".join(p.to_bitstring() for p in vocab.programs) + "]"
        )
        lines.append(
            "    inputs: "
            + " ".join(render_statement(s, vocab) for s in task.sorted_inputs())
        )
        lines.append(
            "    outputs: "
            + " ".join(render_statement(s, vocab) for s in task.sorted_outputs())
        )
    return _to_bytes(lines)


def _census_structured(report: CensusReport) -> bytes:
    exemplars = []
    for task in report.exemplars:
        vocab = task.language.vocabulary
        exemplars.append(
            {
                "programs": [p.to_bitstring() for p in vocab.programs],
                "inputs": [
                    _statement_names(s, vocab, None) for s in task.sorted_inputs()
                ],
                "outputs": [
                    _statement_names(s, vocab, None) for s in task.sorted_outputs()
                ],
            }
        )
    tree = dict(_census_spec_fields(report))
    tree.update(
        {
            "vocabularies": report.vocabularies,
            "tasks_enumerated": report.tasks_enumerated,
            "tasks_valid": report.tasks_valid,
            "tasks_solvable": report.tasks_solvable,
            "tasks_unsolvable": report.tasks_unsolvable,
            "truncated": report.truncated,
            "exemplars": exemplars,
        }
    )
    return _json_bytes(tree)


@dataclass(frozen=True)
class LanguageListing:
    """Language statements for display."""

    language: Language
    names: tuple[str, ...] | None


def serialize_language(listing: LanguageListing, mode: str = "text") -> bytes:
    lang = listing.language
    vocab = lang.vocabulary
    if mode == "text":
        lines = [f"language: {len(lang)} statements over {len(vocab)} programs"]
        lines += [render_statement(s, vocab, listing.names) for s in lang]
        return _to_bytes(lines)
    if mode == "structured":
        programs: dict[str, str] = {}
        for i, p in enumerate(vocab.programs):
            key = listing.names[i] if listing.names is not None else p.to_bitstring()
            programs[key] = p.to_bitstring()
        tree = {
            "count": len(lang),
            "programs": programs,
            "statements": [_statement_names(s, vocab, listing.names) for s in lang],
        }
        return _json_bytes(tree)
    raise ValueError(f"unknown serialization mode {mode!r}")


@dataclass(frozen=True)
class PolicyCheckReport:
    """Outcome of checking one policy against one task."""

    task: Task
    policy: Policy | SetPolicy
    selected: tuple[Statement, ...]
    correct: bool


def serialize_check(
    report: PolicyCheckReport, mode: str = "text", names: Sequence[str] | None = None
) -> bytes:
    task = report.task
    vocab = task.language.vocabulary
    if mode == "text":
        lines = [
            "policy: " + _render_policy(report.policy, vocab, names),
            f"selected {len(report.selected)} statements "
            "(the inputs' extension filtered by the policy):",
        ]
        lines += ["  " + render_statement(s, vocab, names) for s in report.selected]
        lines.append(f"outputs ({len(task.outputs)}):")
        lines += [
            "  " + render_statement(s, vocab, names) for s in task.sorted_outputs()
        ]
        lines.append("verdict: " + ("CORRECT" if report.correct else "INCORRECT"))
        return _to_bytes(lines)
    if mode == "structured":
        tree = {
            "policy": _policy_names(report.policy, vocab, names),
            "selected": [_statement_names(s, vocab, names) for s in report.selected],
            "outputs": [
                _statement_names(s, vocab, names) for s in task.sorted_outputs()
            ],
            "correct": report.correct,
        }
        return _json_bytes(tree)
    raise ValueError(f"unknown serialization mode {mode!r}")


@dataclass(frozen=True)
class CheckResult:
    """One named verification check."""

    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    """Result of the built-in reference verification suite."""

    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def serialize_verify(report: VerifyReport) -> bytes:
    total = len(report.checks)
    lines = []
    for i, check in enumerate(report.checks, start=1):
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"[{i:2d}/{total}] {check.name}: {status} ({check.detail})")
    passed = sum(1 for c in report.checks if c.passed)
    lines.append(f"result: {passed}/{total} checks passed")
    return _to_bytes(lines)
