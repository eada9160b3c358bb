"""Sweep the adversary's copy count and tabulate attack performance.

For each t the table reports the exact attacked-round pass probability,
its reconstruction from the guessing probability, the 1 - 1/(8(t+1))
cap, and (optionally) an empirical rate from sampled rounds.

Usage:
    python scripts/attack_sweep.py --t-max 8
    python scripts/attack_sweep.py --t-max 6 --trials 50000 --seed 7 --out sweep.csv
"""

import argparse
import csv
import math
import sys

from phaseid.adversary import (
    eve_attack_round,
    fool_first_attempt_bound,
    helstrom_strategy,
    sample_attack_rounds,
)
from phaseid.rng import derive_seed, make_rng


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-max", type=int, default=8)
    ap.add_argument("--s", type=int, default=1, help="rounds per attempt for the fool column")
    ap.add_argument("--trials", type=int, default=0,
                    help="sampled rounds per t (0 disables sampling)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="also write the table as CSV")
    args = ap.parse_args(argv)
    if args.t_max < 1:
        ap.error("--t-max must be >= 1")

    names = ["t", "p_pass", "p_pass_bound", "fool_prob_s"]
    if args.trials:
        names += ["empirical", "sigma"]
    rows = []
    for t in range(1, args.t_max + 1):
        strategy = helstrom_strategy(t)
        report = eve_attack_round(t, strategy)
        row = {
            "t": t,
            "p_pass": report.p_pass_exact,
            "p_pass_bound": 1.0 - 1.0 / (8.0 * (t + 1)),
            "fool_prob_s": fool_first_attempt_bound(t, args.s),
        }
        if args.trials:
            rng = make_rng(derive_seed(args.seed, t))
            passes = sample_attack_rounds(strategy, args.trials, rng)
            row["empirical"] = float(passes.mean())
            row["sigma"] = math.sqrt(
                report.p_pass_exact * (1.0 - report.p_pass_exact) / args.trials
            )
        rows.append(row)

    widths = {name: max(len(name), 14) for name in names}
    print("  ".join(name.ljust(widths[name]) for name in names))
    for row in rows:
        cells = []
        for name in names:
            v = row[name]
            cells.append((f"{v:.9g}" if isinstance(v, float) else str(v)).ljust(widths[name]))
        print("  ".join(cells))

    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=names)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: f"{v:.9g}" if isinstance(v, float) else v
                                 for k, v in row.items()})
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
