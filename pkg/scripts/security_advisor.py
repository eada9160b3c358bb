"""Tabulate the repetition count s needed for a target break probability.

Prints min s with r (1 - 1/(c r))^s <= epsilon for a grid of r values,
one column per epsilon, for the standard (c = 8) and hardened (c = 16)
phase sets.

Usage:
    python scripts/security_advisor.py --r-max 8
    python scripts/security_advisor.py --r-max 6 --epsilons 0.1 0.01 0.001
"""

import argparse
import sys

from phaseid.bounds import min_security_parameter


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-max", type=int, default=8)
    ap.add_argument("--epsilons", type=float, nargs="+",
                    default=[0.1, 0.01, 0.001])
    args = ap.parse_args(argv)
    if args.r_max < 1:
        ap.error("--r-max must be >= 1")
    if any(eps <= 0 for eps in args.epsilons):
        ap.error("epsilons must be positive")

    for variant in ("standard", "hardened"):
        print(f"variant: {variant}")
        header = ["r"] + [f"eps={eps:g}" for eps in args.epsilons]
        print("  ".join(h.rjust(12) for h in header))
        for r in range(1, args.r_max + 1):
            cells = [str(r)]
            for eps in args.epsilons:
                cells.append(str(min_security_parameter(r, eps, variant)))
            print("  ".join(c.rjust(12) for c in cells))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
