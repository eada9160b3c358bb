"""The identification kernel and full session runner.

One kernel round: the verifier prepares (|01> + |10>)/sqrt(2), keeps
one register and sends the other; the prover measures
the received register in her phase basis {(|0> +- e^{i theta}|1>)} and
answers with one classical bit; the verifier applies Z to his kept
register when the bit is 1 and SWAP-tests it against an authentic copy
of the round's public-key element. A session repeats the kernel once
per key entry and accepts only if every round passes.

Honest provers pass each round with certainty because the challenge
decomposes as (|x+ x+> - |x- x->)/sqrt(2) in any phase basis: the
prover's outcome steers the kept register onto |x+> or |x->, and the
conditional Z folds the second case onto the first.

Exact mode propagates every measurement branch with its weight and
reports exact pass probabilities (no randomness involved; response
bits are recorded as null). Sampled mode draws one branch per
measurement from a seeded generator and routes messages through the
FIFO transport with consume-once register handles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageExhaustedError
from .keys import PhaseFraction, PrivateKey, ProtocolParams, PublicKeyElement, public_key_state
from .qsim import (
    PAULI_Z,
    DensityOperator,
    PureState,
    apply_gate,
    equal_up_to_global_phase,
    measure_in_basis,
    partial_trace,
    swap_test_pass_probability,
    swap_test_pass_probability_mixed,
)
from .rng import make_rng
from .tolerances import CONSTRUCT_ATOL, ZERO_BRANCH_PROB
from .transport import RegisterHandle, Transport

__all__ = [
    "KernelChallenge",
    "ResponseBranch",
    "KernelOutcome",
    "RoundRecord",
    "SessionTranscript",
    "UsageCounter",
    "bob_prepare_challenge",
    "phase_basis",
    "alice_respond",
    "bob_verify_step",
    "run_session",
]

_BELL = np.array([0.0, 1.0, 1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)


@dataclass(frozen=True)
class KernelChallenge:
    """The verifier's entangled challenge; register 0 stays home."""

    joint_state: PureState
    kept_register: int = 0
    sent_register: int = 1

    def __post_init__(self):
        if self.joint_state.dims != (2, 2):
            raise ValueError("challenge must live on two qubits")
        if {self.kept_register, self.sent_register} != {0, 1}:
            raise ValueError("challenge registers must be 0 and 1")
        reference = PureState((2, 2), _BELL)
        if not equal_up_to_global_phase(self.joint_state, reference):
            raise ValueError("challenge must equal (|01>+|10>)/sqrt(2) up to phase")


@dataclass(frozen=True)
class ResponseBranch:
    """One branch of the prover's measurement: bit, weight, post state."""

    bit: int
    probability: float
    post_state: PureState | None


@dataclass(frozen=True)
class KernelOutcome:
    """Verifier-side result of one round."""

    response: int
    pass_probability: float | None = None
    passed: bool | None = None


@dataclass(frozen=True)
class RoundRecord:
    j: int
    response_bit: int | None
    pass_probability: float | None
    passed: bool | None


@dataclass
class UsageCounter:
    """Serialized budget of honest protocol uses under one key."""

    uses_remaining: int

    def __post_init__(self):
        if self.uses_remaining < 0:
            raise ValueError("uses_remaining must be nonnegative")

    def consume(self) -> None:
        if self.uses_remaining == 0:
            raise UsageExhaustedError(
                "no protocol uses left under this key; refusing (not a reject)"
            )
        self.uses_remaining -= 1


@dataclass(frozen=True)
class SessionTranscript:
    session_id: int
    params: ProtocolParams
    mode: str
    seed: int | None
    prover_tag: str
    records: tuple[RoundRecord, ...]
    verdict: str

    def to_json_lines(self) -> list[str]:
        """Transcript as JSON lines: header, one line per round, verdict."""
        head = {
            "session_id": self.session_id,
            "r": self.params.r,
            "s": self.params.s,
            "p": self.params.p,
            "variant": self.params.variant,
            "mode": self.mode,
            "seed": self.seed,
            "prover_tag": self.prover_tag,
        }
        lines = [json.dumps(head)]
        for rec in self.records:
            if self.mode == "exact":
                row = {
                    "j": rec.j,
                    "response_bit": rec.response_bit,
                    "pass_probability": _sig12(rec.pass_probability),
                }
            else:
                row = {"j": rec.j, "response_bit": rec.response_bit, "pass": rec.passed}
            lines.append(json.dumps(row))
        lines.append(json.dumps({"verdict": self.verdict}))
        return lines


def _sig12(x: float | None) -> float | None:
    if x is None:
        return None
    return float(f"{x:.12g}")


def bob_prepare_challenge() -> KernelChallenge:
    """Fresh entangled challenge (|01> + |10>)/sqrt(2)."""
    return KernelChallenge(PureState((2, 2), _BELL))


def phase_basis(angle: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis {(|0> + e^{i angle}|1>)/sqrt(2), (|0> - ...)}."""
    inv = 1.0 / math.sqrt(2.0)
    ph = np.exp(1j * angle)
    return (
        np.array([inv, inv * ph], dtype=np.complex128),
        np.array([inv, -inv * ph], dtype=np.complex128),
    )


def alice_respond(challenge: KernelChallenge, x: PhaseFraction, mode: str = "exact", rng=None):
    """Measure the received register in the key's phase basis.

    Outcome "+" answers bit 0, outcome "-" answers bit 1. Exact mode
    returns both branches (each has probability exactly 1/2 for this
    challenge); sampled mode returns the drawn one.
    """
    basis = phase_basis(x.angle())
    result = measure_in_basis(challenge.joint_state, challenge.sent_register, basis, mode, rng)
    if mode == "exact":
        return tuple(ResponseBranch(res.outcome, res.probability, res.post_state) for res in result)
    return ResponseBranch(result.outcome, result.probability, result.post_state)


def bob_verify_step(kept, response_bit: int, pk: PublicKeyElement,
                    mode: str = "exact", rng=None) -> KernelOutcome:
    """Conditional Z on the kept register, then SWAP-test against ``pk``.

    ``kept`` may be a single-qubit PureState or DensityOperator. Exact
    mode reports the pass probability; sampled mode draws the SWAP-test
    outcome from ``rng``.
    """
    if response_bit not in (0, 1):
        raise ValueError(f"response bit must be 0 or 1, got {response_bit}")
    if isinstance(kept, PureState):
        corrected = apply_gate(kept, PAULI_Z, (0,)) if response_bit else kept
        prob = swap_test_pass_probability(corrected, pk.state)
    elif isinstance(kept, DensityOperator):
        mat = PAULI_Z @ kept.matrix @ PAULI_Z if response_bit else kept.matrix
        corrected = DensityOperator(kept.dims, mat)
        prob = swap_test_pass_probability_mixed(corrected, DensityOperator.from_pure(pk.state))
    else:
        raise TypeError(f"kept register must be a state, got {type(kept).__name__}")
    if mode == "exact":
        return KernelOutcome(response_bit, pass_probability=prob)
    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode requires an explicit rng")
        return KernelOutcome(response_bit, passed=bool(rng.random() < prob))
    raise ValueError(f"unknown mode {mode!r}")


def _exact_honest_round(x: PhaseFraction, pk: PublicKeyElement) -> float:
    challenge = bob_prepare_challenge()
    marginal = 0.0
    for branch in alice_respond(challenge, x, mode="exact"):
        if branch.probability < ZERO_BRANCH_PROB or branch.post_state is None:
            continue
        kept = partial_trace(branch.post_state, (challenge.kept_register,))
        outcome = bob_verify_step(kept, branch.bit, pk, mode="exact")
        marginal += branch.probability * outcome.pass_probability
    return marginal


def _sampled_honest_round(x: PhaseFraction, pk: PublicKeyElement, rng,
                          transport: Transport) -> tuple[int, bool]:
    challenge = bob_prepare_challenge()
    transport.send(RegisterHandle(challenge, challenge.sent_register))

    handle = transport.recv()
    received, _register = handle.consume()
    branch = alice_respond(received, x, mode="sampled", rng=rng)
    transport.send(branch.bit)

    bit = transport.recv()
    kept = partial_trace(branch.post_state, (challenge.kept_register,))
    outcome = bob_verify_step(kept, bit, pk, mode="sampled", rng=rng)
    return bit, bool(outcome.passed)


def _sampled_adversary_round(prover, x: PhaseFraction, rng,
                             transport: Transport) -> tuple[int, bool]:
    challenge = bob_prepare_challenge()
    transport.send(RegisterHandle(challenge, challenge.sent_register))

    handle = transport.recv()
    handle.consume()
    low, high = prover.round_branches(x.angle())
    branch = low if rng.random() < low.probability else high
    transport.send(branch.bit)

    bit = transport.recv()
    passed = bool(rng.random() < branch.pass_probability)
    return bit, passed


def run_session(params: ProtocolParams, private_key: PrivateKey, prover="honest", *,
                mode: str = "exact", seed: int | None = None,
                usage: UsageCounter | None = None, session_id: int = 0) -> SessionTranscript:
    """Run one full s-round session and return its transcript.

    ``prover`` is "honest" or an adversary object exposing
    ``round_branches(angle)``. Honest sessions draw on a UsageCounter
    (a fresh single-use one when none is given) and refuse, rather than
    reject, once it is exhausted. All s rounds always run; the verdict
    is decided at the end.

    In exact mode the verdict is "accept" only when every round passes
    with certainty, which is the honest-prover case.
    """
    if private_key.s != params.s or private_key.p != params.p:
        raise ValueError("private key does not match params")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = None
    if mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode requires a seed")
        rng = make_rng(seed)

    honest = isinstance(prover, str)
    if honest and prover != "honest":
        raise ValueError(f"unknown prover tag {prover!r}")
    if honest:
        if usage is None:
            usage = UsageCounter(1)
        usage.consume()
        prover_tag = "honest"
    else:
        prover_tag = getattr(prover, "tag", "adversary")

    transport = Transport()
    records: list[RoundRecord] = []
    for j, x in enumerate(private_key.xs, start=1):
        pk = public_key_state(x)
        if mode == "exact":
            if honest:
                prob = _exact_honest_round(x, pk)
            else:
                branches = prover.round_branches(x.angle())
                prob = sum(b.probability * b.pass_probability for b in branches)
            records.append(RoundRecord(j, None, float(prob), None))
        else:
            if honest:
                bit, passed = _sampled_honest_round(x, pk, rng, transport)
            else:
                bit, passed = _sampled_adversary_round(prover, x, rng, transport)
            records.append(RoundRecord(j, bit, None, passed))

    if mode == "exact":
        ok = all(rec.pass_probability >= 1.0 - CONSTRUCT_ATOL for rec in records)
    else:
        ok = all(rec.passed for rec in records)
    return SessionTranscript(
        session_id=session_id,
        params=params,
        mode=mode,
        seed=seed,
        prover_tag=prover_tag,
        records=tuple(records),
        verdict="accept" if ok else "reject",
    )
