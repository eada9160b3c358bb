"""Key material over discrete phases, and the phase-averaging identities.

A private key is a tuple of exact phase fractions k/p; the matching
public-key element is the qubit (|0> + e^{2 pi i k/p}|1>)/sqrt(2).
Phases live as integer pairs so nothing drifts: the only floats appear
when a state vector is actually built.

The module also carries the two averaging facts the security analysis
rests on: the discrete uniform average of e^{2 pi i a k / p} vanishes
unless p divides a, and a uniform phase mixture of n-fold product keys
equals the binomially weighted mixture of Hamming-weight states
whenever p >= n + 1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, StateValidationError
from .qsim import DensityOperator, PureState
from .rng import make_rng
from .tolerances import CONSTRUCT_ATOL

__all__ = [
    "VARIANTS",
    "ProtocolParams",
    "PhaseFraction",
    "PrivateKey",
    "PublicKeyElement",
    "SymmetricBasisState",
    "generate_private_key",
    "qubit_phase_state",
    "public_key_state",
    "averaged_key_operator_discrete",
    "symmetric_mixture",
    "symmetric_basis_state",
    "phase_average_exponential",
    "private_key_payload",
    "write_private_key_file",
    "read_private_key_file",
    "public_key_descriptor",
]

VARIANTS = ("standard", "hardened")

# Explicit bitstring enumeration caps (memory, not correctness).
_MAX_SYMMETRIC_N = 20
_MAX_AVERAGED_N = 10


@dataclass(frozen=True)
class ProtocolParams:
    """Reusability r, repetition count s, and phase-set variant."""

    r: int
    s: int
    variant: str = "standard"

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.s < 1:
            raise ValueError(f"s must be >= 1, got {self.s}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @property
    def p(self) -> int:
        """Phase modulus: r+1 normally, 2r+1 for the hardened variant."""
        return self.r + 1 if self.variant == "standard" else 2 * self.r + 1


@dataclass(frozen=True)
class PhaseFraction:
    """Exact phase k/p of a full turn, with 1 <= k <= p."""

    k: int
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not 1 <= self.k <= self.p:
            raise ValueError(f"k must lie in 1..{self.p}, got {self.k}")

    def angle(self) -> float:
        """Angle 2*pi*k/p, reduced so k = p maps to exactly 0.0."""
        return 2.0 * math.pi * (self.k % self.p) / self.p

    def phase(self) -> complex:
        a = self.angle()
        return complex(math.cos(a), math.sin(a))


@dataclass(frozen=True)
class PrivateKey:
    """Tuple of phase fractions, one per kernel round."""

    xs: tuple[PhaseFraction, ...]

    def __post_init__(self):
        if not self.xs:
            raise ValueError("private key needs at least one entry")
        p = self.xs[0].p
        if any(x.p != p for x in self.xs):
            raise ValueError("all key entries must share one modulus")

    @property
    def s(self) -> int:
        return len(self.xs)

    @property
    def p(self) -> int:
        return self.xs[0].p


@dataclass(frozen=True)
class PublicKeyElement:
    """Single-qubit public-key state for one kernel round."""

    state: PureState


def generate_private_key(params: ProtocolParams, seed: int) -> PrivateKey:
    """Draw s phases uniformly from {1..p}, deterministically in ``seed``."""
    rng = make_rng(seed)
    ks = rng.integers(1, params.p + 1, size=params.s)
    return PrivateKey(tuple(PhaseFraction(int(k), params.p) for k in ks))


def qubit_phase_state(angle: float) -> PureState:
    """The equatorial qubit (|0> + e^{i angle}|1>)/sqrt(2)."""
    inv = 1.0 / math.sqrt(2.0)
    return PureState((2,), np.array([inv, inv * np.exp(1j * angle)]))


def public_key_state(x: PhaseFraction) -> PublicKeyElement:
    return PublicKeyElement(qubit_phase_state(x.angle()))


def _weights(n: int) -> np.ndarray:
    """Hamming weight of every n-bit index, big-endian irrelevant here."""
    idx = np.arange(2**n, dtype=np.uint32)
    w = np.zeros(2**n, dtype=np.int64)
    for b in range(n):
        w += (idx >> b) & 1
    return w


def averaged_key_operator_discrete(p: int, n: int) -> DensityOperator:
    """Uniform average of (|psi_x><psi_x|)^(x n) over x in {1..p}.

    Built directly from the product amplitudes e^{i theta w}/2^{n/2},
    where w is the Hamming weight of the basis label.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if not 1 <= n <= _MAX_AVERAGED_N:
        raise ValueError(f"n must lie in 1..{_MAX_AVERAGED_N}, got {n}")
    w = _weights(n)
    scale = 2.0 ** (-n / 2.0)
    acc = np.zeros((2**n, 2**n), dtype=np.complex128)
    for k in range(1, p + 1):
        theta = PhaseFraction(k, p).angle()
        vec = scale * np.exp(1j * theta * w)
        acc += np.outer(vec, vec.conj())
    return DensityOperator((2,) * n, acc / p)


def symmetric_basis_state(n: int, w: int) -> "SymmetricBasisState":
    """Uniform superposition of all weight-w bitstrings of length n."""
    if not 1 <= n <= _MAX_SYMMETRIC_N:
        raise ValueError(f"n must lie in 1..{_MAX_SYMMETRIC_N}, got {n}")
    if not 0 <= w <= n:
        raise ValueError(f"weight must lie in 0..{n}, got {w}")
    count = math.comb(n, w)
    amps = np.zeros(2**n, dtype=np.complex128)
    amp = 1.0 / math.sqrt(count)
    for ones in itertools.combinations(range(n), w):
        index = sum(1 << (n - 1 - pos) for pos in ones)
        amps[index] = amp
    return SymmetricBasisState(n, w, PureState((2,) * n, amps))


@dataclass(frozen=True)
class SymmetricBasisState:
    n: int
    w: int
    state: PureState


def symmetric_mixture(n: int) -> DensityOperator:
    """Mixture sum_w C(n,w)/2^n |S_w><S_w| over weight states."""
    if not 1 <= n <= _MAX_SYMMETRIC_N:
        raise ValueError(f"n must lie in 1..{_MAX_SYMMETRIC_N}, got {n}")
    acc = np.zeros((2**n, 2**n), dtype=np.complex128)
    for w in range(n + 1):
        v = symmetric_basis_state(n, w).state.amplitudes
        acc += (math.comb(n, w) / 2**n) * np.outer(v, v.conj())
    return DensityOperator((2,) * n, acc)


def phase_average_exponential(a: int, p: int) -> float:
    """Numerical value of (1/p) sum_{k=1..p} e^{2 pi i a k / p}.

    Equals 1 when p divides a and 0 otherwise; the sum is evaluated
    explicitly and its imaginary part is required to vanish.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    ks = np.arange(1, p + 1)
    val = complex(np.mean(np.exp(2j * np.pi * a * ks / p)))
    if abs(val.imag) > CONSTRUCT_ATOL:
        raise NumericalError(f"phase average has imaginary part {val.imag!r}")
    return val.real


def private_key_payload(params: ProtocolParams, seed: int, key: PrivateKey) -> dict:
    """Serializable form of a private key. Contains the raw phases."""
    return {
        "r": params.r,
        "s": params.s,
        "variant": params.variant,
        "seed": seed,
        "xs": [x.k for x in key.xs],
        "p": params.p,
    }


def write_private_key_file(path, params: ProtocolParams, seed: int, key: PrivateKey) -> None:
    """Serialize a private key to ``path``. Keep the file private."""
    payload = private_key_payload(params, seed, key)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_private_key_file(path) -> tuple[ProtocolParams, int, PrivateKey]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    params = ProtocolParams(int(payload["r"]), int(payload["s"]), str(payload["variant"]))
    if int(payload["p"]) != params.p:
        raise StateValidationError(
            f"key file modulus {payload['p']} does not match params (expected {params.p})"
        )
    xs = tuple(PhaseFraction(int(k), params.p) for k in payload["xs"])
    key = PrivateKey(xs)
    if key.s != params.s:
        raise StateValidationError("key length does not match s")
    return params, int(payload["seed"]), key


def public_key_descriptor(params: ProtocolParams, key: PrivateKey | None = None,
                          expose_phases: bool = False) -> dict:
    """Public description of a key: modulus and element count only.

    Cleartext phases stay out of public exports; ``expose_phases`` is a
    deliberate debug override and requires the key.
    """
    out: dict = {"p": params.p, "xs_redacted": not expose_phases, "elements": params.s}
    if expose_phases:
        if key is None:
            raise ValueError("expose_phases requires the private key")
        out["xs"] = [x.k for x in key.xs]
    return out
