"""Security bookkeeping: union-bound chain and break-probability caps.

An adversary who has watched t honest uses can try to fool the
verifier repeatedly, gaining one further public-key copy per attempt
while copies remain in circulation. Attempt l therefore runs with
t + l - 1 copies, and the chance of surviving all s rounds of that
attempt is bounded by fool_first_attempt_bound(t + l - 1, s). Summing
attempts l = 1 .. r - t and bounding every term by the worst one gives

    P_break <= r (1 - 1/(c r))^s

with c = 8. The hardened variant concedes r extra copies to an
adversary who also runs verification sessions against the real key
holder; shifting every attempt by r copies doubles the constant to
c = 16 and nothing else changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .adversary import fool_first_attempt_bound
from .keys import VARIANTS
from .tolerances import CONSTRUCT_ATOL

__all__ = [
    "SecurityEstimate",
    "chain_constant",
    "union_bound_chain",
    "p_break_bound",
    "min_security_parameter",
]

_CHAIN_CONSTANT = {"standard": 8, "hardened": 16}

# Iteration cap for the advisor; generous next to c * r * ln(r / eps).
_MAX_ADVISOR_S = 50_000_000


def chain_constant(variant: str) -> int:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return _CHAIN_CONSTANT[variant]


@dataclass(frozen=True)
class SecurityEstimate:
    """Per-attempt fooling bounds and both closed-form caps."""

    r: int
    s: int
    t: int
    variant: str
    per_attempt: tuple[float, ...]
    chain_sum: float
    chain_cap: float
    p_break_cap: float

    def __post_init__(self):
        if self.chain_sum > self.chain_cap * (1.0 + CONSTRUCT_ATOL):
            raise ValueError(
                f"chain sum {self.chain_sum!r} exceeds its cap {self.chain_cap!r}"
            )


def union_bound_chain(t: int, r: int, s: int, variant: str = "standard") -> SecurityEstimate:
    """Sum the per-attempt fooling bounds for attempts l = 1 .. r - t.

    Requires 0 <= t < r. Attempt l reuses fool_first_attempt_bound with
    t + l - 1 copies (plus r more under the hardened accounting).
    """
    c = chain_constant(variant)
    if not 0 <= t < r:
        raise ValueError(f"need 0 <= t < r, got t={t}, r={r}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    extra = r if variant == "hardened" else 0
    per = tuple(fool_first_attempt_bound(t + extra + l - 1, s) for l in range(1, r - t + 1))
    chain_cap = (r - t) * (1.0 - 1.0 / (c * r)) ** s
    return SecurityEstimate(
        r=r,
        s=s,
        t=t,
        variant=variant,
        per_attempt=per,
        chain_sum=math.fsum(per),
        chain_cap=chain_cap,
        p_break_cap=p_break_bound(r, s, variant),
    )


def p_break_bound(r: int, s: int, variant: str = "standard") -> float:
    """Overall break-probability cap r (1 - 1/(c r))^s.

    s = 0 is rejected: a session with no rounds verifies nothing, and
    the empty-product reading would report a vacuous bound of r.
    """
    c = chain_constant(variant)
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return r * (1.0 - 1.0 / (c * r)) ** s


def min_security_parameter(r: int, epsilon: float, variant: str = "standard") -> int:
    """Smallest s with p_break_bound(r, s, variant) <= epsilon.

    Found by direct iteration from s = 1, so the defining property
    bound(s*) <= epsilon < bound(s* - 1) holds by construction (the
    right inequality is vacuous at s* = 1). Any positive epsilon is
    accepted; epsilon >= the s = 1 bound simply returns 1.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    s = 1
    while p_break_bound(r, s, variant) > epsilon:
        s += 1
        if s > _MAX_ADVISOR_S:
            raise ValueError(
                f"epsilon={epsilon} needs s beyond the advisor cap {_MAX_ADVISOR_S}"
            )
    return s
