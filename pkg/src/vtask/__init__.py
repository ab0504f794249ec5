"""Declarative programs as state sets, formal languages over them, tasks,
and exhaustive policy-correctness search."""

from .core import (
    EMPTY_STATEMENT,
    Language,
    Program,
    StateSpace,
    Statement,
    Vocabulary,
    build_language,
    extension_of_set,
    extension_of_statement,
    intersect_programs,
    is_statement,
    statement_key,
)
from .encoder import ClassificationSpec, encode_classification, verify_isomorphism
from .errors import (
    CapacityError,
    DomainError,
    EncodingError,
    MalformedInputError,
    ParseError,
    TaskFileError,
    TaskValidationError,
    VTaskError,
)
from .search import (
    CanonicalTask,
    CensusReport,
    SearchSpec,
    canonicalize_task,
    census,
    enumerate_task_masks,
    enumerate_tasks,
    enumerate_vocabularies,
    is_classification_shaped,
    permute_task,
    task_from_canonical,
)
from .tasks import (
    BinaryDecomposition,
    Policy,
    PolicySearchResult,
    SetPolicy,
    Task,
    decompose_binary,
    find_correct_policies,
    find_correct_set_policies,
    is_correct_policy,
    is_correct_set_policy,
    max_policy_length_bound,
    policy_weakness,
    selection,
    set_selection,
    validate_task,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryDecomposition",
    "CanonicalTask",
    "CapacityError",
    "CensusReport",
    "ClassificationSpec",
    "DomainError",
    "EMPTY_STATEMENT",
    "EncodingError",
    "Language",
    "MalformedInputError",
    "ParseError",
    "Policy",
    "PolicySearchResult",
    "Program",
    "SearchSpec",
    "SetPolicy",
    "StateSpace",
    "Statement",
    "Task",
    "TaskFileError",
    "TaskValidationError",
    "VTaskError",
    "Vocabulary",
    "build_language",
    "canonicalize_task",
    "census",
    "decompose_binary",
    "encode_classification",
    "enumerate_task_masks",
    "enumerate_tasks",
    "enumerate_vocabularies",
    "extension_of_set",
    "extension_of_statement",
    "find_correct_policies",
    "find_correct_set_policies",
    "intersect_programs",
    "is_classification_shaped",
    "is_correct_policy",
    "is_correct_set_policy",
    "is_statement",
    "max_policy_length_bound",
    "permute_task",
    "policy_weakness",
    "selection",
    "set_selection",
    "statement_key",
    "task_from_canonical",
    "validate_task",
    "verify_isomorphism",
]
