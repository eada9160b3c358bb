"""Walk one key through its full usage budget, then hit the refusal.

Generates a key, runs r honest sampled sessions against it (printing
each transcript), and shows that session r + 1 is refused rather than
rejected.

Usage:
    python scripts/honest_demo.py --r 3 --s 4 --seed 11
"""

import argparse
import sys

from phaseid.errors import UsageExhaustedError
from phaseid.keys import ProtocolParams, generate_private_key
from phaseid.protocol import UsageCounter, run_session
from phaseid.rng import derive_seed


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--s", type=int, default=4)
    ap.add_argument("--variant", choices=("standard", "hardened"), default="standard")
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args(argv)

    params = ProtocolParams(args.r, args.s, args.variant)
    key = generate_private_key(params, derive_seed(args.seed, 0))
    usage = UsageCounter(params.r)
    print(f"key over p = {params.p}: {[x.k for x in key.xs]}  (budget: {params.r} uses)")

    for i in range(params.r + 1):
        try:
            transcript = run_session(
                params, key, "honest",
                mode="sampled",
                seed=derive_seed(args.seed, 1 + i),
                usage=usage,
                session_id=i,
            )
        except UsageExhaustedError as exc:
            print(f"session {i}: refused ({exc})")
            return 0
        print("\n".join(transcript.to_json_lines()))
    raise AssertionError("the budget should have run out")


if __name__ == "__main__":
    sys.exit(main())
