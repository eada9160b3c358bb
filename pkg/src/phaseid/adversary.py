"""Optimal impersonation analysis for a bounded-copy adversary.

An adversary holding t public-key copies but not the private phase
faces a binary discrimination problem each round: the received half of
the challenge is one of two phase-conjugate states, with the phase
reference itself unknown. Averaging over that relative phase, t copies
collapse (by symmetry) to a single (t+1)-level register in the Hamming
weight basis with binomial amplitudes, and the round reduces to
discriminating two explicit mixed states at equal priors.

Everything here is evaluated two independent ways. The closed form

    psucc(t) = 1/2 + (1/2) (1/2^t) sum_m sqrt(C(t,m) C(t,m+1))

comes from pure combinatorics; the oracle builds the two averaged
states outright and applies the Helstrom value 1/2 + ||rho+ - rho-||_1/4.
The exact attack round drives the verifier's own machinery (entangled
challenge, conditional Z, SWAP test) against the Helstrom measurement
and reproduces p_pass = (1 + psucc)/2.

Continuous phase averages are replaced throughout by uniform discrete
grids whose size strictly exceeds the trigonometric degree of every
averaged entry, which makes the grid averages exact, not approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NumericalError
from .keys import PublicKeyElement, qubit_phase_state
from .protocol import bob_prepare_challenge, bob_verify_step
from .qsim import DensityOperator, PureState, partial_trace, tensor, trace_norm
from .tolerances import COMPARE_ATOL, CONSTRUCT_ATOL, ZERO_BRANCH_PROB

__all__ = [
    "EveFrame",
    "DiscriminationPair",
    "HelstromStrategy",
    "AttackBranch",
    "CheatGuessReport",
    "EveProver",
    "binomial_frame",
    "frame_vector",
    "overlap_sum",
    "psucc_formula",
    "cheung_sum_bound",
    "cheung_bound",
    "fool_first_attempt_bound",
    "build_discrimination_pair",
    "helstrom_strategy",
    "helstrom_psucc_oracle",
    "attack_round_branches",
    "eve_attack_round",
    "sample_attack_rounds",
]

# Exact integer binomials stay safe in floats well past this; beyond it
# the log-gamma route avoids giant intermediates.
LOG_SPACE_THRESHOLD = 50

# Largest t the explicit density-operator constructions will attempt.
_MAX_ORACLE_T = 256

_LN2 = math.log(2.0)


def _check_t(t: int, minimum: int = 0) -> int:
    t = int(t)
    if t < minimum:
        raise ValueError(f"t must be >= {minimum}, got {t}")
    return t


def log_binomial(n: int, k: int) -> float:
    """log C(n, k) via log-gamma."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _overlap_sum_exact(t: int) -> float:
    total = 0.0
    for m in range(t):
        total += math.sqrt(float(math.comb(t, m) * math.comb(t, m + 1)))
    return total / float(2**t)


def _overlap_sum_log(t: int) -> float:
    total = 0.0
    for m in range(t):
        total += math.exp(0.5 * (log_binomial(t, m) + log_binomial(t, m + 1)) - t * _LN2)
    return total


def overlap_sum(t: int) -> float:
    """(1/2^t) sum_{m=0}^{t-1} sqrt(C(t,m) C(t,m+1)); 0 when t = 0."""
    t = _check_t(t)
    if t <= LOG_SPACE_THRESHOLD:
        return _overlap_sum_exact(t)
    return _overlap_sum_log(t)


def psucc_formula(t: int) -> float:
    """Closed-form optimal guessing probability with t key copies."""
    return 0.5 + 0.5 * overlap_sum(t)


def cheung_sum_bound(t: int) -> float:
    """Combinatorial upper bound on overlap_sum: 1 - 1/(2(t+1)) - 1/2^{t+1}.

    Tight at t = 1, where both sides equal 1/2.
    """
    t = _check_t(t, minimum=1)
    return 1.0 - 1.0 / (2.0 * (t + 1)) - 0.5 ** (t + 1)


def cheung_bound(t: int) -> float:
    """Resulting bound on psucc_formula(t): 1 - 1/(4(t+1))."""
    t = _check_t(t, minimum=1)
    return 1.0 - 1.0 / (4.0 * (t + 1))


def fool_first_attempt_bound(t: int, s: int) -> float:
    """Bound (1 - 1/(8(t+1)))^s on fooling all s rounds with t copies."""
    t = _check_t(t)
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return (1.0 - 1.0 / (8.0 * (t + 1))) ** s


def frame_vector(t: int, angle: float) -> np.ndarray:
    """Weight-basis amplitudes of t phase-state copies at a given angle.

    Entry w is sqrt(C(t,w)/2^t) e^{i w angle}; the t-qubit product state
    lives entirely in the symmetric subspace, so this (t+1)-vector is
    the whole story.
    """
    t = _check_t(t)
    if t <= LOG_SPACE_THRESHOLD:
        mags = np.array([math.sqrt(math.comb(t, w) / 2**t) for w in range(t + 1)])
    else:
        mags = np.array(
            [math.exp(0.5 * (log_binomial(t, w) - t * _LN2)) for w in range(t + 1)]
        )
    return mags * np.exp(1j * angle * np.arange(t + 1))


@dataclass(frozen=True)
class EveFrame:
    """The adversary's bounded phase reference: t copies, weight basis."""

    t: int
    state: PureState

    def __post_init__(self):
        expected = frame_vector(self.t, 0.0)
        if self.state.dims != (self.t + 1,):
            raise ValueError("frame state must live on a (t+1)-level register")
        if np.max(np.abs(self.state.amplitudes - expected)) > CONSTRUCT_ATOL:
            raise ValueError("frame amplitudes must be sqrt(C(t,w)/2^t)")


def binomial_frame(t: int) -> EveFrame:
    t = _check_t(t)
    return EveFrame(t, PureState((t + 1,), frame_vector(t, 0.0)))


def _pair_grid(t: int) -> int:
    # Entries of the averaged pair have trig degree <= t+1.
    return 2 * t + 5


def _attack_grid(t: int) -> int:
    # Worst-case degree through the full round algebra is <= 2t+4.
    return 4 * (t + 3)


def _challenge_and_frame(pair_angle: float, t: int, sign: int) -> np.ndarray:
    """Flat vector of (|0> + sign e^{i angle}|1>)/sqrt(2) (x) frame(angle)."""
    qubit = np.array([1.0, sign * np.exp(1j * pair_angle)]) / math.sqrt(2.0)
    return np.kron(qubit, frame_vector(t, pair_angle))


@dataclass(frozen=True)
class DiscriminationPair:
    """The two phase-averaged states the adversary must tell apart."""

    t: int
    rho_plus: DensityOperator
    rho_minus: DensityOperator

    def __post_init__(self):
        want = (2, self.t + 1)
        if self.rho_plus.dims != want or self.rho_minus.dims != want:
            raise ValueError(f"pair must live on dims {want}")


def build_discrimination_pair(t: int, grid_points: int | None = None) -> DiscriminationPair:
    """Average challenge (x) frame over the relative phase, both signs.

    The received qubit and the frame are both defined relative to the
    honest phase convention, which is uniformly unknown to the
    adversary, so one shared angle rotates the whole product. A uniform
    grid of at least t+2 points reproduces the continuous average
    exactly (every matrix entry is a trig polynomial of degree <= t+1);
    the default keeps a safety margin.
    """
    t = _check_t(t)
    if t > _MAX_ORACLE_T:
        raise ValueError(f"t={t} exceeds the explicit-construction cap {_MAX_ORACLE_T}")
    grid = _pair_grid(t) if grid_points is None else int(grid_points)
    if grid < t + 2:
        raise ValueError(f"grid of {grid} points cannot average degree t+1 exactly")
    dim = 2 * (t + 1)
    acc = {+1: np.zeros((dim, dim), dtype=np.complex128),
           -1: np.zeros((dim, dim), dtype=np.complex128)}
    for k in range(1, grid + 1):
        angle = 2.0 * math.pi * k / grid
        for sign in (+1, -1):
            vec = _challenge_and_frame(angle, t, sign)
            acc[sign] += np.outer(vec, vec.conj())
    return DiscriminationPair(
        t,
        DensityOperator((2, t + 1), acc[+1] / grid),
        DensityOperator((2, t + 1), acc[-1] / grid),
    )


@dataclass(frozen=True)
class HelstromStrategy:
    """Optimal binary measurement: project onto the positive part of the gap."""

    t: int
    projector_plus: np.ndarray
    psucc: float

    def __post_init__(self):
        proj = np.asarray(self.projector_plus)
        if np.max(np.abs(proj @ proj - proj)) > COMPARE_ATOL:
            raise ValueError("projector_plus is not idempotent within tolerance")
        if not 0.5 - CONSTRUCT_ATOL <= self.psucc <= 1.0 + CONSTRUCT_ATOL:
            raise ValueError(f"psucc {self.psucc!r} outside [1/2, 1]")


def helstrom_strategy(t: int) -> HelstromStrategy:
    """Build the optimal discrimination measurement for t copies.

    Eigenvectors of rho+ - rho- with nonnegative eigenvalue form the
    "+" projector (zero modes are assigned to "+"; they carry no
    success weight either way).
    """
    pair = build_discrimination_pair(t)
    gap = pair.rho_plus.matrix - pair.rho_minus.matrix
    eigvals, eigvecs = np.linalg.eigh(gap)
    chosen = eigvecs[:, eigvals >= 0.0]
    projector = chosen @ chosen.conj().T
    psucc = 0.5 + 0.25 * trace_norm(gap)
    return HelstromStrategy(t, projector, float(psucc))


def helstrom_psucc_oracle(t: int) -> float:
    """Independent oracle: 1/2 + ||rho+ - rho-||_1 / 4 from explicit states."""
    pair = build_discrimination_pair(t)
    return 0.5 + 0.25 * trace_norm(pair.rho_plus.matrix - pair.rho_minus.matrix)


@dataclass(frozen=True)
class AttackBranch:
    """One response branch of an attacked round at a fixed relative phase."""

    bit: int
    probability: float
    pass_probability: float


def attack_round_branches(strategy: HelstromStrategy,
                          angle: float) -> tuple[AttackBranch, AttackBranch]:
    """Exact branch analysis of one attacked kernel round.

    The verifier prepares the entangled challenge; the adversary
    measures {P+, 1-P+} on the received register joined with her frame;
    the verifier applies the conditional Z and SWAP-tests his kept
    register against a fresh authentic copy. ``angle`` is the honest
    phase relative to the adversary's reference.
    """
    t = strategy.t
    challenge = bob_prepare_challenge()
    frame = PureState((t + 1,), frame_vector(t, angle))
    joint = tensor(challenge.joint_state, frame)  # registers: kept, sent, frame
    pk = PublicKeyElement(qubit_phase_state(angle))

    dim_af = 2 * (t + 1)
    psi = joint.amplitudes.reshape(2, dim_af)
    branches = []
    for bit, proj in ((0, strategy.projector_plus),
                      (1, np.eye(dim_af) - strategy.projector_plus)):
        collapsed = psi @ proj.T
        prob = float(np.sum(np.abs(collapsed) ** 2))
        if prob < ZERO_BRANCH_PROB:
            branches.append(AttackBranch(bit, prob, 0.0))
            continue
        post = PureState((2, 2, t + 1), collapsed.reshape(-1) / math.sqrt(prob))
        kept = partial_trace(post, (0,))
        outcome = bob_verify_step(kept, bit, pk, mode="exact")
        branches.append(AttackBranch(bit, prob, float(outcome.pass_probability)))
    total = branches[0].probability + branches[1].probability
    if abs(total - 1.0) > CONSTRUCT_ATOL:
        raise NumericalError(f"attack branch probabilities sum to {total!r}")
    return branches[0], branches[1]


@dataclass(frozen=True)
class CheatGuessReport:
    """Exact attack-round pass probability next to the guessing probability.

    Construction enforces the identity p_pass = (1 + psucc)/2.
    """

    t: int
    p_pass_exact: float
    psucc_strategy: float

    def __post_init__(self):
        if abs(self.p_pass_exact - 0.5 * (1.0 + self.psucc_strategy)) > COMPARE_ATOL:
            raise NumericalError(
                f"cheat/guess identity violated: p_pass={self.p_pass_exact!r}, "
                f"psucc={self.psucc_strategy!r}"
            )


def eve_attack_round(t: int, strategy: HelstromStrategy | None = None) -> CheatGuessReport:
    """Exact attacked-round evaluation, averaged over the relative phase.

    Uses a grid of 4(t+3) angles, strictly above the worst-case trig
    degree 2t+4 of any intermediate, so the average is exact.
    """
    t = _check_t(t)
    if strategy is None:
        strategy = helstrom_strategy(t)
    if strategy.t != t:
        raise DimensionMismatchError(
            f"strategy was built for t={strategy.t}, round has t={t}"
        )
    grid = _attack_grid(t)
    p_pass = 0.0
    psucc = 0.0
    proj_plus = strategy.projector_plus
    proj_minus = np.eye(2 * (t + 1)) - proj_plus
    for k in range(1, grid + 1):
        angle = 2.0 * math.pi * k / grid
        low, high = attack_round_branches(strategy, angle)
        p_pass += low.probability * low.pass_probability
        p_pass += high.probability * high.pass_probability
        u_plus = _challenge_and_frame(angle, t, +1)
        u_minus = _challenge_and_frame(angle, t, -1)
        psucc += 0.5 * (
            float(np.vdot(u_plus, proj_plus @ u_plus).real)
            + float(np.vdot(u_minus, proj_minus @ u_minus).real)
        )
    return CheatGuessReport(t, p_pass / grid, psucc / grid)


@dataclass(frozen=True)
class EveProver:
    """Adapter giving run_session an adversarial prover."""

    strategy: HelstromStrategy
    tag: str = "helstrom-eve"

    @property
    def t(self) -> int:
        return self.strategy.t

    def round_branches(self, angle: float) -> tuple[AttackBranch, AttackBranch]:
        return attack_round_branches(self.strategy, angle)


def sample_attack_rounds(strategy: HelstromStrategy, trials: int, rng) -> np.ndarray:
    """Sample independent attacked rounds; returns the boolean pass array.

    Each trial draws a fresh relative phase uniformly from the exact
    averaging grid (equivalent to a fresh key), then the adversary's
    measurement outcome, then the SWAP-test verdict.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    t = strategy.t
    grid = _attack_grid(t)
    q_low = np.empty(grid)
    pass_low = np.empty(grid)
    pass_high = np.empty(grid)
    for k in range(1, grid + 1):
        low, high = attack_round_branches(strategy, 2.0 * math.pi * k / grid)
        q_low[k - 1] = low.probability
        pass_low[k - 1] = low.pass_probability
        pass_high[k - 1] = high.pass_probability
    ks = rng.integers(0, grid, size=trials)
    u_branch = rng.random(trials)
    u_swap = rng.random(trials)
    took_low = u_branch < q_low[ks]
    return np.where(took_low, u_swap < pass_low[ks], u_swap < pass_high[ks])
