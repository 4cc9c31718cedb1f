#!/usr/bin/env python3
"""Measure arc-order statistics for hypertangent members and truncations.

For a batch of random workhorse-family instances this samples one smooth
point off the branch divisor and one on it, draws certified arcs through
each chart origin, and tabulates the exact vanishing orders of (a) random
hypertangent members at every admissible level and (b) the branch
truncation functions at every level below the cover degree.  The expected
floor is level + 1 in both suites; the table shows how far above the floor
the measured orders actually land, and how often the truncation bound cuts
a measurement off before it resolves.

Example:
    python3 scripts/arc_order_study.py --instances 5 --arcs 8 --seed 3
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from cycover.cover import (
    CHECK_PASS,
    CHECK_UNRESOLVED,
    admissible_hypertangent_levels,
    arc_through_chart_origin,
    branch_truncation_check,
    default_arc_order,
    default_prime,
    hypertangent_member,
    hypertangent_multiplicity_check,
    localize,
    random_instance,
    sample_point_off_branch,
    sample_point_on_branch,
    smooth_at,
)
from cycover.family import CoverFamily
from cycover.poly import PrimeField
from cycover.seeds import (
    PURPOSE_ARC,
    PURPOSE_MEMBER,
    PURPOSE_POINT_OFF,
    PURPOSE_POINT_ON,
    derive_seed,
)

WORKHORSE = CoverFamily(dimension=5, base_degree=4, branch_weight=2, cover_degree=2)


@dataclass(frozen=True)
class StudyConfig:
    instances: int = 5
    arcs: int = 5
    seed: int = 0
    prime: int = default_prime(WORKHORSE)


def tally(report, orders: Counter) -> Counter:
    outcome = Counter()
    for record in report.records:
        if record.status == CHECK_UNRESOLVED:
            outcome["unresolved"] += 1
        elif record.status == CHECK_PASS:
            outcome["pass"] += 1
            key = "inf" if record.order.infinite else record.order.value
            orders[key] += 1
        else:
            outcome["fail"] += 1
    return outcome


def run_study(config: StudyConfig) -> int:
    field = PrimeField(config.prime)
    levels = admissible_hypertangent_levels(WORKHORSE)
    K = WORKHORSE.cover_degree
    off_orders = {level: Counter() for level in levels}
    on_orders = {k: Counter() for k in range(1, K)}
    totals = Counter()
    for t in range(config.instances):
        instance = random_instance(WORKHORSE, derive_seed(config.seed, trial=t), field)
        point = sample_point_off_branch(
            instance, derive_seed(config.seed, trial=t, purpose=PURPOSE_POINT_OFF)
        )
        chart = localize(instance, point)
        assert smooth_at(chart)
        arcs = [
            arc_through_chart_origin(
                chart,
                derive_seed(config.seed, trial=t, point=a, purpose=PURPOSE_ARC),
                default_arc_order(max(levels)),
            )
            for a in range(config.arcs)
        ]
        for level in levels:
            member = hypertangent_member(
                chart,
                level,
                derive_seed(config.seed, trial=t, point=level, purpose=PURPOSE_MEMBER),
            )
            totals += tally(hypertangent_multiplicity_check(member, arcs), off_orders[level])

        point_on = sample_point_on_branch(
            instance, derive_seed(config.seed, trial=t, purpose=PURPOSE_POINT_ON)
        )
        chart_on = localize(instance, point_on)
        assert smooth_at(chart_on)
        arcs_on = [
            arc_through_chart_origin(
                chart_on,
                derive_seed(config.seed, trial=t, point=100 + a, purpose=PURPOSE_ARC),
                2 * K + 2,
            )
            for a in range(config.arcs)
        ]
        for k in range(1, K):
            totals += tally(branch_truncation_check(chart_on, k, arcs_on), on_orders[k])

    print(f"{config.instances} instances, {config.arcs} arcs per chart, seed {config.seed}\n")
    print("off-branch hypertangent members (floor = level + 1):")
    for level in levels:
        spread = ", ".join(
            f"order {key}: {count}" for key, count in sorted(off_orders[level].items(), key=str)
        )
        print(f"  level {level}: {spread or 'no resolved measurements'}")
    print("on-branch truncations (floor = level + 1):")
    for k in range(1, K):
        spread = ", ".join(
            f"order {key}: {count}" for key, count in sorted(on_orders[k].items(), key=str)
        )
        print(f"  level {k}: {spread or 'no resolved measurements'}")
    print(
        f"\ntotals: {totals['pass']} pass, {totals['fail']} fail, "
        f"{totals['unresolved']} unresolved"
    )
    return 1 if totals["fail"] else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instances", type=int, default=5)
    parser.add_argument("--arcs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--prime", type=int, default=default_prime(WORKHORSE))
    args = parser.parse_args(argv)
    return run_study(
        StudyConfig(
            instances=args.instances,
            arcs=args.arcs,
            seed=args.seed,
            prime=args.prime,
        )
    )


if __name__ == "__main__":
    raise SystemExit(main())
