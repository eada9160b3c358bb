"""Command-line harness: key generation, sessions, attack tables, bounds.

One binary with subcommands. Every command is deterministic given its
flags and seed; numeric output carries 12 significant digits in JSON
and 9 in CSV. Exit codes: 0 success or accept, 2 verifier reject,
3 refusal (usage budget exhausted), 4 invalid configuration,
5 internal numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import adversary, bounds, keys, protocol
from .errors import ConfigError, NumericalError, UsageExhaustedError
from .qsim import PureState, overlap
from .rng import derive_seed, make_rng

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_REJECT = 2
EXIT_REFUSAL = 3
EXIT_CONFIG = 4
EXIT_NUMERICAL = 5

JSON_SIG_DIGITS = 12
CSV_SIG_DIGITS = 9

# Stream indices for seed derivation: key material, then sessions.
_KEY_STREAM = 0
_SESSION_STREAM_BASE = 1


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the config code."""

    def error(self, message):
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _sig(value, digits: int):
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    return value


def _fmt_csv(value) -> str:
    if isinstance(value, float):
        return f"{value:.{CSV_SIG_DIGITS}g}"
    return str(value)


def _write_text(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _rows_as_json(rows: list[dict]) -> str:
    shaped = [{k: _sig(v, JSON_SIG_DIGITS) for k, v in row.items()} for row in rows]
    return json.dumps({"rows": shaped}, indent=2) + "\n"


def _rows_as_csv(rows: list[dict]) -> str:
    if not rows:
        return "\n"
    buf = io.StringIO()
    names = list(rows[0].keys())
    buf.write(",".join(names) + "\n")
    for row in rows:
        buf.write(",".join(_fmt_csv(row[name]) for name in names) + "\n")
    return buf.getvalue()


def _emit_rows(rows: list[dict], fmt: str, out: str | None) -> None:
    if fmt == "json":
        _write_text(out, _rows_as_json(rows))
    elif fmt == "csv":
        _write_text(out, _rows_as_csv(rows))
    else:
        raise ConfigError(f"unknown format {fmt!r}")


def _params_from(args) -> keys.ProtocolParams:
    if args.r is None:
        raise ConfigError("--r is required")
    if args.s is None:
        raise ConfigError("--s is required")
    return keys.ProtocolParams(args.r, args.s, args.variant)


# ---------------------------------------------------------------------------
# keygen


def cmd_keygen(args) -> int:
    params = _params_from(args)
    if args.seed is None:
        raise ConfigError("keygen requires --seed")
    key = keys.generate_private_key(params, args.seed)
    if args.public:
        payload = keys.public_key_descriptor(params, key, expose_phases=args.expose_phases)
    else:
        if args.expose_phases:
            raise ConfigError("--expose-phases only applies to --public exports")
        payload = keys.private_key_payload(params, args.seed, key)
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# run-honest


def cmd_run_honest(args) -> int:
    params = _params_from(args)
    if args.trials < 1:
        raise ConfigError(f"--trials must be >= 1, got {args.trials}")
    if args.mode == "sampled" and args.seed is None:
        raise ConfigError("sampled mode requires --seed")
    master = args.seed if args.seed is not None else 0
    key = keys.generate_private_key(params, derive_seed(master, _KEY_STREAM))
    usage = protocol.UsageCounter(params.r)

    transcripts = []
    refused = False
    for i in range(args.trials):
        session_seed = None
        if args.mode == "sampled":
            session_seed = derive_seed(master, _SESSION_STREAM_BASE + i)
        try:
            transcripts.append(
                protocol.run_session(
                    params,
                    key,
                    "honest",
                    mode=args.mode,
                    seed=session_seed,
                    usage=usage,
                    session_id=i,
                )
            )
        except UsageExhaustedError as exc:
            sys.stderr.write(f"refusal at session {i}: {exc}\n")
            refused = True
            break

    lines = [line for tr in transcripts for line in tr.to_json_lines()]
    _write_text(args.out, "\n".join(lines) + ("\n" if lines else ""))
    if refused:
        return EXIT_REFUSAL
    return _verdict_exit(transcripts)


def _verdict_exit(transcripts) -> int:
    if any(tr.verdict != "accept" for tr in transcripts):
        return EXIT_REJECT
    return EXIT_OK


# ---------------------------------------------------------------------------
# run-attack


def _attack_t_values(args) -> list[int]:
    if args.t is not None and args.t_max is not None:
        raise ConfigError("give --t or --t-max, not both")
    if args.t is not None:
        if args.t < 1:
            raise ConfigError(f"--t must be >= 1, got {args.t}")
        return [args.t]
    t_max = args.t_max if args.t_max is not None else 8
    if t_max < 1:
        raise ConfigError(f"--t-max must be >= 1, got {t_max}")
    return list(range(1, t_max + 1))


def cmd_run_attack(args) -> int:
    t_values = _attack_t_values(args)
    s = args.s if args.s is not None else 1
    if s < 1:
        raise ConfigError(f"--s must be >= 1, got {s}")
    if args.mode == "sampled":
        if args.seed is None:
            raise ConfigError("sampled mode requires --seed")
        if args.trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {args.trials}")

    rows = []
    for t in t_values:
        strategy = adversary.helstrom_strategy(t)
        report = adversary.eve_attack_round(t, strategy)
        row = {
            "t": t,
            "p_pass": report.p_pass_exact,
            "p_pass_from_psucc": 0.5 * (1.0 + adversary.psucc_formula(t)),
            "p_pass_bound": 1.0 - 1.0 / (8.0 * (t + 1)),
            "fool_prob_s": adversary.fool_first_attempt_bound(t, s),
        }
        if args.mode == "sampled":
            rng = make_rng(derive_seed(args.seed, t))
            passes = adversary.sample_attack_rounds(strategy, args.trials, rng)
            row["empirical_pass_rate"] = float(np.mean(passes))
            row["trials"] = args.trials
        rows.append(row)
    _emit_rows(rows, args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# psucc-table


def cmd_psucc_table(args) -> int:
    t_max = args.t_max if args.t_max is not None else 8
    if t_max < 1:
        raise ConfigError(f"--t-max must be >= 1, got {t_max}")
    rows = [
        {
            "t": t,
            "psucc_formula": adversary.psucc_formula(t),
            "psucc_oracle": adversary.helstrom_psucc_oracle(t),
            "cheung_bound": adversary.cheung_bound(t),
        }
        for t in range(1, t_max + 1)
    ]
    _emit_rows(rows, args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds


def cmd_bounds(args) -> int:
    if args.r is None:
        raise ConfigError("--r is required")
    have_eps = args.epsilon is not None
    have_s = args.s is not None
    if have_eps == have_s:
        raise ConfigError("give exactly one of --epsilon (advisor) or --s (bound)")
    if have_eps:
        s_min = bounds.min_security_parameter(args.r, args.epsilon, args.variant)
        rows = [{"r": args.r, "epsilon": args.epsilon, "variant": args.variant, "s_min": s_min}]
    else:
        value = bounds.p_break_bound(args.r, args.s, args.variant)
        rows = [{"r": args.r, "s": args.s, "variant": args.variant, "bound": value}]
    _emit_rows(rows, args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-identities


def _check_challenge_decomposition() -> float:
    worst = 0.0
    bell = protocol.bob_prepare_challenge().joint_state
    for p in range(2, 8):
        for k in range(1, p + 1):
            plus, minus = protocol.phase_basis(keys.PhaseFraction(k, p).angle())
            vec = (np.kron(plus, plus) - np.kron(minus, minus)) / math.sqrt(2.0)
            ov = overlap(bell, PureState((2, 2), vec))
            worst = max(worst, abs(abs(ov) - 1.0))
    return worst


def _check_phase_average() -> float:
    worst = 0.0
    for p in range(2, 10):
        for a in range(-12, 13):
            want = 1.0 if a % p == 0 else 0.0
            worst = max(worst, abs(keys.phase_average_exponential(a, p) - want))
    return worst


def _check_averaging_equivalence() -> float:
    worst = 0.0
    for n in range(1, 7):
        target = keys.symmetric_mixture(n).matrix
        for p in (n + 1, n + 2, 2 * n + 3):
            got = keys.averaged_key_operator_discrete(p, n).matrix
            worst = max(worst, float(np.max(np.abs(got - target))))
    return worst


def _check_honest_round_certainty() -> float:
    worst = 0.0
    for variant, r_top in (("standard", 5), ("hardened", 3)):
        for r in range(1, r_top + 1):
            params = keys.ProtocolParams(r, 1, variant)
            for k in range(1, params.p + 1):
                key = keys.PrivateKey((keys.PhaseFraction(k, params.p),))
                tr = protocol.run_session(params, key, "honest", mode="exact")
                worst = max(worst, abs(1.0 - tr.records[0].pass_probability))
    return worst


def _check_response_uniformity() -> float:
    worst = 0.0
    challenge = protocol.bob_prepare_challenge()
    for p in range(2, 8):
        for k in range(1, p + 1):
            branches = protocol.alice_respond(challenge, keys.PhaseFraction(k, p), mode="exact")
            for branch in branches:
                worst = max(worst, abs(branch.probability - 0.5))
    return worst


_IDENTITY_CHECKS = (
    ("challenge-decomposition", _check_challenge_decomposition),
    ("phase-average-vanishing", _check_phase_average),
    ("averaging-equivalence", _check_averaging_equivalence),
    ("honest-round-certainty", _check_honest_round_certainty),
    ("response-uniformity", _check_response_uniformity),
)

_IDENTITY_TOL = 1e-12


def cmd_verify_identities(args) -> int:
    results = []
    for name, check in _IDENTITY_CHECKS:
        deviation = float(check())
        passed = deviation < _IDENTITY_TOL
        results.append({"check": name, "passed": passed, "max_deviation": deviation})
        print(f"{name}: {'pass' if passed else 'FAIL'} (max deviation {deviation:.3e})")
    if args.out:
        shaped = [
            {k: _sig(v, JSON_SIG_DIGITS) for k, v in row.items()} for row in results
        ]
        _write_text(args.out, json.dumps({"checks": shaped}, indent=2) + "\n")
    if all(row["passed"] for row in results):
        return EXIT_OK
    return EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="phaseid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, want_r=False, want_s=False, mode=False, fmt=False):
        if want_r:
            p.add_argument("--r", type=int, default=None, help="reusability parameter")
        if want_s:
            p.add_argument("--s", type=int, default=None, help="kernel repetitions")
        p.add_argument("--variant", choices=keys.VARIANTS, default="standard")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if mode:
            p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("keygen", help="draw a private key")
    common(p, want_r=True, want_s=True)
    p.add_argument("--public", action="store_true", help="emit the public descriptor")
    p.add_argument("--expose-phases", action="store_true",
                   help="debug: include phases in the public descriptor")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("run-honest", help="run honest sessions under one key")
    common(p, want_r=True, want_s=True, mode=True)
    p.add_argument("--trials", type=int, default=1, help="sessions to run")
    p.set_defaults(func=cmd_run_honest)

    p = sub.add_parser("run-attack", help="evaluate the optimal attacked round")
    common(p, want_s=True, mode=True, fmt=True)
    p.add_argument("--t", type=int, default=None, help="adversary copy count")
    p.add_argument("--t-max", dest="t_max", type=int, default=None,
                   help="sweep t = 1..t_max (default 8)")
    p.add_argument("--trials", type=int, default=100_000,
                   help="sampled rounds per t (sampled mode)")
    p.set_defaults(func=cmd_run_attack)

    p = sub.add_parser("psucc-table", help="guessing probability: formula vs oracle")
    common(p, fmt=True)
    p.add_argument("--t-max", dest="t_max", type=int, default=None)
    p.set_defaults(func=cmd_psucc_table)

    p = sub.add_parser("bounds", help="break-probability bound or advisor")
    common(p, want_r=True, want_s=True, fmt=True)
    p.add_argument("--epsilon", type=float, default=None,
                   help="advisor mode: find minimal s with bound <= epsilon")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify-identities", help="check the scheme's exact identities")
    common(p)
    p.set_defaults(func=cmd_verify_identities)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"phaseid: invalid config: {exc}\n")
        return EXIT_CONFIG
    except ValueError as exc:
        sys.stderr.write(f"phaseid: invalid config: {exc}\n")
        return EXIT_CONFIG
    except UsageExhaustedError as exc:
        sys.stderr.write(f"phaseid: refusal: {exc}\n")
        return EXIT_REFUSAL
    except (NumericalError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"phaseid: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
