#!/usr/bin/env python3
"""Sweep small censuses and tabulate how rare solvable tasks are.

Edit SWEEP to taste; every run is a full enumeration (no sampling), so
keep the dimensions desk-scale. With --classification the census is
restricted to tasks shaped like encoded classification problems.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vtask.search import SearchSpec, census


@dataclass(frozen=True)
class SweepPoint:
    n_states: int
    vocab_size: int


SWEEP = [
    SweepPoint(1, 1),
    SweepPoint(2, 1),
    SweepPoint(2, 2),
    SweepPoint(2, 3),
    SweepPoint(3, 1),
    SweepPoint(3, 2),
    SweepPoint(3, 3),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--classification", action="store_true")
    parser.add_argument("--dedup", action="store_true")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    header = f"{'states':>6} {'vocab':>5} {'valid':>9} {'solvable':>9} {'unsolvable':>10} {'share':>7} {'secs':>6}"
    print(header)
    print("-" * len(header))
    for point in SWEEP:
        spec = SearchSpec(
            n_states=point.n_states,
            vocab_size=point.vocab_size,
            require_classification_shaped=args.classification,
            dedup=args.dedup,
        )
        report = census(spec, workers=args.workers)
        share = (
            report.tasks_solvable / report.tasks_valid if report.tasks_valid else 0.0
        )
        print(
            f"{point.n_states:>6} {point.vocab_size:>5} {report.tasks_valid:>9} "
            f"{report.tasks_solvable:>9} {report.tasks_unsolvable:>10} "
            f"{share:>7.3f} {report.elapsed_seconds:>6.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
