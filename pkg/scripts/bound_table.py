#!/usr/bin/env python3
"""Tabulate multiplicity-bound certificates across a family range.

Enumerates every valid cover family with dimension in the requested range,
computes the main-case and ramified-case bound certificates where the chain
argument applies, and prints one row per family with the exact bound, the
4/degree threshold, and the verdict.  Families outside the reach of the
argument are listed with the refusal reason instead of a fake row.

Example:
    python3 scripts/bound_table.py --max-dimension 12
    python3 scripts/bound_table.py --max-dimension 40 --only-strict
"""

import argparse
from dataclasses import dataclass

from cycover.chain import UnsupportedCaseError, main_case_bound, ramified_case_bound
from cycover.family import enumerate_families


@dataclass(frozen=True)
class TableConfig:
    min_dimension: int = 5
    max_dimension: int = 12
    only_strict: bool = False
    show_refusals: bool = False


def build_rows(config: TableConfig):
    rows = []
    refusals = []
    for family in enumerate_families(config.max_dimension, config.min_dimension):
        label = (
            f"({family.dimension},{family.base_degree},"
            f"{family.branch_weight},{family.cover_degree})"
        )
        try:
            main = main_case_bound(family)
        except UnsupportedCaseError as exc:
            refusals.append((label, str(exc)))
            continue
        ramified = ramified_case_bound(family)
        if config.only_strict and main.verdict != "StrictlyBelow":
            continue
        rows.append((label, family.degree, main, ramified))
    return rows, refusals


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--min-dimension", type=int, default=5)
    parser.add_argument("--max-dimension", type=int, default=12)
    parser.add_argument(
        "--only-strict",
        action="store_true",
        help="keep only families whose main-case bound is strictly below",
    )
    parser.add_argument(
        "--show-refusals",
        action="store_true",
        help="also list families the chain argument does not cover",
    )
    args = parser.parse_args(argv)
    config = TableConfig(
        min_dimension=args.min_dimension,
        max_dimension=args.max_dimension,
        only_strict=args.only_strict,
        show_refusals=args.show_refusals,
    )
    rows, refusals = build_rows(config)
    header = f"{'family':>14} {'degree':>7} {'main bound':>12} {'threshold':>10} {'verdict':>14} {'ramified':>10}"
    print(header)
    print("-" * len(header))
    for label, degree, main, ramified in rows:
        print(
            f"{label:>14} {degree:>7} {str(main.bound_value):>12} "
            f"{str(main.threshold):>10} {main.verdict:>14} {ramified.verdict:>10}"
        )
    print(
        f"\n{len(rows)} families certified, {len(refusals)} outside the "
        "argument's range"
    )
    if config.show_refusals:
        for label, reason in refusals:
            print(f"  {label}: {reason}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
