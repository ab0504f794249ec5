#!/usr/bin/env python3
"""Walk the built-in reference counterexample end to end.

Prints the language, the per-policy selections, the exhaustive search
verdict, and the two amendment probes (set policies over every subset of
the language; decomposition into one-input subtasks). Everything here is
recomputed live; nothing is hardcoded except the instance itself.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vtask.dsl import render_statement, serialize_verify
from vtask.tasks import (
    decompose_binary,
    find_correct_policies,
    find_correct_set_policies,
    policy_weakness,
)
from vtask.verify import reference_task, run_reference_checks


def main() -> int:
    task, _, names = reference_task()
    lang = task.language
    vocab = lang.vocabulary

    def show(statement) -> str:
        return render_statement(statement, vocab, names)

    print("programs:")
    for name, program in sorted(zip(names, vocab.programs)):
        print(f"  {name} = {program.to_bitstring()}  (states {program.included_states()})")
    print(f"\nlanguage ({len(lang)} statements):")
    print("  " + " ".join(show(s) for s in lang))
    print(f"\ninputs:  {' '.join(show(s) for s in task.sorted_inputs())}")
    print(f"outputs: {' '.join(show(s) for s in task.sorted_outputs())}")
    print(f"extension of inputs: {len(task.input_extension)} statements")

    print("\nper-policy selection sizes and weakness:")
    result = find_correct_policies(task)
    for policy, count in result.per_policy_selection_counts.items():
        weakness = policy_weakness(policy, lang)
        print(f"  {show(policy.statement):24s} selects {count:2d}   weakness {weakness:2d}")
    print(f"\ncorrect policies: {len(result.correct)} of {result.checked} checked")

    print("\namendment probe: set policies over every subset of the language")
    set_result = find_correct_set_policies(task, cap=None)
    print(f"  subsets checked: {set_result.checked}")
    print(f"  correct set policies: {len(set_result.correct)}")

    print("\namendment probe: one-input subtasks")
    decomposition = decompose_binary(task)
    for sub in decomposition.subtasks:
        verdict = len(find_correct_policies(sub).correct)
        print(
            f"  {' '.join(show(s) for s in sub.sorted_inputs())} -> "
            f"{' '.join(show(s) for s in sub.sorted_outputs())}: "
            f"{verdict} correct policies"
        )

    print("\nfull verification suite:")
    report = run_reference_checks()
    sys.stdout.write(serialize_verify(report).decode())
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
