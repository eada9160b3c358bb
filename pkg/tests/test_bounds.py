"""Union-bound chain and security-parameter advisor."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaseid.adversary import fool_first_attempt_bound
from phaseid.bounds import (
    chain_constant,
    min_security_parameter,
    p_break_bound,
    union_bound_chain,
)


def _p_break_fraction(r: int, s: int, c: int) -> Fraction:
    """Exact rational oracle for r (1 - 1/(c r))^s."""
    return Fraction(r) * (1 - Fraction(1, c * r)) ** s


class TestChainConstant:
    def test_values(self):
        assert chain_constant("standard") == 8
        assert chain_constant("hardened") == 16

    def test_rejects_unknown(self):
        with pytest.raises(ValueError):
            chain_constant("plain")


class TestPBreakBound:
    def test_matches_rational_oracle(self):
        want = float(_p_break_fraction(2, 83, 8))  # 2 * (15/16)^83
        assert p_break_bound(2, 83) == pytest.approx(want, abs=1e-15)

    def test_reference_point_is_under_one_percent(self):
        assert p_break_bound(2, 83) <= 0.01
        assert p_break_bound(2, 82) > 0.01

    @pytest.mark.parametrize(
        "r,s,variant,c",
        [(1, 10, "standard", 8), (3, 40, "standard", 8), (5, 7, "hardened", 16)],
    )
    def test_oracle_grid(self, r, s, variant, c):
        want = float(_p_break_fraction(r, s, c))
        assert p_break_bound(r, s, variant) == pytest.approx(want, rel=1e-14)

    def test_rejects_zero_rounds(self):
        # an s = 0 session checks nothing; the formula would report the
        # vacuous value r, so it is an error instead
        with pytest.raises(ValueError):
            p_break_bound(2, 0)

    def test_rejects_zero_reuse(self):
        with pytest.raises(ValueError):
            p_break_bound(0, 5)

    def test_halving_scale(self):
        # a ceil(8 r ln 2) increase of s halves the standard bound
        r = 4
        step = math.ceil(8 * r * math.log(2.0))
        for s in (10, 50, 200):
            assert p_break_bound(r, s + step) <= 0.5 * p_break_bound(r, s) + 1e-15


@given(
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=400),
    st.sampled_from(["standard", "hardened"]),
)
@settings(max_examples=80, deadline=None)
def test_p_break_monotone_and_hardened_weaker(r, s, variant):
    val = p_break_bound(r, s, variant)
    assert 0.0 < val
    assert p_break_bound(r, s + 1, variant) < val
    # the hardened variant concedes more copies, so its cap is larger
    assert p_break_bound(r, s, "hardened") >= p_break_bound(r, s, "standard")


class TestUnionBoundChain:
    def test_per_attempt_matches_fool_bound(self):
        est = union_bound_chain(t=1, r=4, s=6)
        assert len(est.per_attempt) == 3
        for l, val in enumerate(est.per_attempt, start=1):
            assert val == pytest.approx(fool_first_attempt_bound(1 + l - 1, 6),
                                        abs=1e-15)

    def test_hardened_shifts_every_attempt(self):
        est = union_bound_chain(t=0, r=3, s=5, variant="hardened")
        for l, val in enumerate(est.per_attempt, start=1):
            assert val == pytest.approx(fool_first_attempt_bound(3 + l - 1, 5),
                                        abs=1e-15)

    def test_chain_sum_below_caps(self):
        for variant in ("standard", "hardened"):
            for r in range(1, 7):
                for t in range(0, r):
                    est = union_bound_chain(t=t, r=r, s=9, variant=variant)
                    assert est.chain_sum <= est.chain_cap + 1e-12
                    assert est.chain_cap <= est.p_break_cap + 1e-12

    def test_full_exposure_is_single_attempt(self):
        est = union_bound_chain(t=3, r=4, s=2)
        assert len(est.per_attempt) == 1

    def test_rejects_t_at_r(self):
        with pytest.raises(ValueError):
            union_bound_chain(t=4, r=4, s=2)

    def test_rejects_zero_rounds(self):
        with pytest.raises(ValueError):
            union_bound_chain(t=0, r=2, s=0)


class TestAdvisor:
    def test_reference_answer(self):
        assert min_security_parameter(2, 0.01) == 83

    def test_boundary_property(self):
        s_star = min_security_parameter(2, 0.01)
        assert p_break_bound(2, s_star) <= 0.01
        assert p_break_bound(2, s_star - 1) > 0.01

    def test_generous_epsilon_returns_one(self):
        # epsilon at or above the s = 1 bound needs no repetition
        assert min_security_parameter(3, 100.0) == 1

    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(ValueError):
            min_security_parameter(2, 0.0)

    def test_grows_with_reuse(self):
        answers = [min_security_parameter(r, 0.01) for r in range(1, 8)]
        assert all(b > a for a, b in zip(answers, answers[1:]))

    @pytest.mark.parametrize("variant", ["standard", "hardened"])
    def test_hardened_needs_more_rounds(self, variant):
        s_std = min_security_parameter(3, 0.02, "standard")
        s_hard = min_security_parameter(3, 0.02, "hardened")
        assert s_hard > s_std


@given(
    st.integers(min_value=1, max_value=8),
    st.floats(min_value=1e-6, max_value=0.5, allow_nan=False),
    st.sampled_from(["standard", "hardened"]),
)
@settings(max_examples=60, deadline=None)
def test_advisor_defining_property(r, epsilon, variant):
    s_star = min_security_parameter(r, epsilon, variant)
    assert p_break_bound(r, s_star, variant) <= epsilon
    if s_star > 1:
        assert p_break_bound(r, s_star - 1, variant) > epsilon
