"""Adversary side: frames, discrimination, attack rounds, combinatorial bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaseid.adversary import (
    AttackBranch,
    EveFrame,
    EveProver,
    attack_round_branches,
    binomial_frame,
    build_discrimination_pair,
    cheung_bound,
    cheung_sum_bound,
    eve_attack_round,
    fool_first_attempt_bound,
    frame_vector,
    helstrom_psucc_oracle,
    helstrom_strategy,
    log_binomial,
    overlap_sum,
    psucc_formula,
    sample_attack_rounds,
)
from phaseid.adversary import _overlap_sum_exact, _overlap_sum_log
from phaseid.errors import DimensionMismatchError
from phaseid.keys import PhaseFraction, PrivateKey, ProtocolParams
from phaseid.protocol import run_session
from phaseid.qsim import PureState
from phaseid.rng import make_rng

# Closed-form guessing probabilities for small copy counts:
# t = 2: 1/2 + sqrt(2)/4, t = 3: 1/2 + (3 + 2 sqrt(3))/16.
PSUCC_T2 = 0.5 + math.sqrt(2.0) / 4.0
PSUCC_T3 = 0.5 + (3.0 + 2.0 * math.sqrt(3.0)) / 16.0


class TestCombinatorics:
    def test_log_binomial_matches_exact(self):
        for n in range(0, 40):
            for k in range(0, n + 1):
                assert log_binomial(n, k) == pytest.approx(
                    math.log(math.comb(n, k)), abs=1e-10
                )

    def test_log_binomial_rejects_bad_k(self):
        with pytest.raises(ValueError):
            log_binomial(3, 4)

    def test_overlap_sum_zero_copies(self):
        assert overlap_sum(0) == 0.0

    def test_overlap_sum_routes_agree(self):
        # exact integer route vs log-gamma route across the handoff point
        for t in range(1, 61):
            assert _overlap_sum_log(t) == pytest.approx(
                _overlap_sum_exact(t), abs=1e-12
            )

    def test_overlap_sum_rejects_negative(self):
        with pytest.raises(ValueError):
            overlap_sum(-1)


class TestPsuccFormula:
    def test_frozen_values(self):
        assert psucc_formula(0) == pytest.approx(0.5, abs=1e-15)
        assert psucc_formula(1) == pytest.approx(0.75, abs=1e-15)
        assert psucc_formula(2) == pytest.approx(PSUCC_T2, abs=1e-15)
        assert psucc_formula(3) == pytest.approx(PSUCC_T3, abs=1e-15)

    def test_monotone_in_copies(self):
        vals = [psucc_formula(t) for t in range(81)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_approaches_one_from_below(self):
        # squeezed between 1 - 1/(2t) (roughly) and the 1 - 1/(4(t+1)) cap
        assert psucc_formula(200) < 1.0
        assert psucc_formula(200) > 0.998


class TestCheungBounds:
    def test_equality_at_one_copy(self):
        assert cheung_sum_bound(1) == pytest.approx(overlap_sum(1), abs=1e-15)
        assert overlap_sum(1) == pytest.approx(0.5, abs=1e-15)

    def test_dominates_overlap_sum(self):
        for t in range(1, 65):
            assert overlap_sum(t) <= cheung_sum_bound(t) + 1e-12

    def test_dominates_psucc(self):
        for t in range(1, 65):
            assert psucc_formula(t) <= cheung_bound(t) + 1e-12
            assert cheung_bound(t) < 1.0

    def test_induced_pass_cap(self):
        # (1 + psucc)/2 inherits the 1 - 1/(8(t+1)) ceiling
        for t in range(1, 65):
            induced = 0.5 * (1.0 + psucc_formula(t))
            assert induced <= 1.0 - 1.0 / (8.0 * (t + 1)) + 1e-12

    def test_rejects_zero_copies(self):
        with pytest.raises(ValueError):
            cheung_bound(0)
        with pytest.raises(ValueError):
            cheung_sum_bound(0)

    def test_fool_bound_values(self):
        assert fool_first_attempt_bound(1, 1) == pytest.approx(0.9375, abs=1e-15)
        assert fool_first_attempt_bound(1, 16) == pytest.approx(
            0.3560741304517928, abs=1e-15
        )

    def test_fool_bound_rejects_bad_s(self):
        with pytest.raises(ValueError):
            fool_first_attempt_bound(1, 0)


class TestFrames:
    def test_zero_copy_frame_is_scalar(self):
        np.testing.assert_allclose(frame_vector(0, 1.3), [1.0], atol=1e-15)

    def test_one_copy_amplitudes(self):
        inv = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(frame_vector(1, 0.0), [inv, inv], atol=1e-15)

    def test_two_copy_amplitudes(self):
        inv = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(frame_vector(2, 0.0), [0.5, inv, 0.5], atol=1e-15)

    def test_phase_winds_with_weight(self):
        angle = 0.7
        vec = frame_vector(3, angle)
        ref = frame_vector(3, 0.0)
        np.testing.assert_allclose(
            vec, ref * np.exp(1j * angle * np.arange(4)), atol=1e-12
        )

    def test_normalized_for_large_t(self):
        for t in (10, 51, 120):
            assert np.linalg.norm(frame_vector(t, 0.4)) == pytest.approx(
                1.0, abs=1e-12
            )

    def test_binomial_frame_roundtrip(self):
        fr = binomial_frame(2)
        assert fr.t == 2
        assert fr.state.dims == (3,)

    def test_frame_validation_rejects_wrong_amplitudes(self):
        with pytest.raises(ValueError):
            EveFrame(1, PureState((2,), np.array([1.0, 0.0])))


class TestDiscriminationPair:
    def test_zero_copies_pair_is_identical(self):
        # with no reference copies the averaged challenge qubit is
        # maximally mixed for either response, so nothing distinguishes
        pair = build_discrimination_pair(0)
        want = np.eye(2) / 2.0
        np.testing.assert_allclose(pair.rho_plus.matrix, want, atol=1e-12)
        np.testing.assert_allclose(pair.rho_minus.matrix, want, atol=1e-12)

    def test_grid_too_small_rejected(self):
        with pytest.raises(ValueError):
            build_discrimination_pair(3, grid_points=4)

    @pytest.mark.parametrize("t", range(0, 6))
    def test_grid_refinement_is_stable(self, t):
        # default grid already integrates the trig polynomials exactly;
        # doubling it must not move any entry
        a = build_discrimination_pair(t)
        b = build_discrimination_pair(t, grid_points=4 * t + 9)
        assert np.max(np.abs(a.rho_plus.matrix - b.rho_plus.matrix)) < 1e-12
        assert np.max(np.abs(a.rho_minus.matrix - b.rho_minus.matrix)) < 1e-12

    def test_pair_states_differ_with_copies(self):
        pair = build_discrimination_pair(2)
        assert np.max(np.abs(pair.rho_plus.matrix - pair.rho_minus.matrix)) > 0.1


class TestHelstrom:
    @pytest.mark.parametrize("t", range(0, 9))
    def test_strategy_matches_formula(self, t):
        strat = helstrom_strategy(t)
        assert strat.psucc == pytest.approx(psucc_formula(t), abs=1e-9)

    @pytest.mark.parametrize("t", range(0, 9))
    def test_oracle_matches_formula(self, t):
        # trace-norm route vs closed-form route, built independently
        assert helstrom_psucc_oracle(t) == pytest.approx(psucc_formula(t), abs=1e-9)

    def test_projector_rank(self):
        strat = helstrom_strategy(2)
        rank = int(round(float(np.trace(strat.projector_plus).real)))
        dim = strat.projector_plus.shape[0]
        assert 0 < rank < dim

    def test_projector_hermitian(self):
        strat = helstrom_strategy(3)
        proj = strat.projector_plus
        assert np.max(np.abs(proj - proj.conj().T)) < 1e-10


class TestAttackRounds:
    def test_branch_probabilities_sum_to_one(self):
        strat = helstrom_strategy(2)
        low, high = attack_round_branches(strat, 1.1)
        assert low.probability + high.probability == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= low.pass_probability <= 1.0
        assert 0.0 <= high.pass_probability <= 1.0

    def test_one_copy_round_value(self):
        report = eve_attack_round(1)
        assert report.p_pass_exact == pytest.approx(0.875, abs=1e-9)

    def test_two_copy_round_value(self):
        report = eve_attack_round(2)
        assert report.p_pass_exact == pytest.approx(0.9267766952966369, abs=1e-12)

    @pytest.mark.parametrize("t", range(1, 7))
    def test_cheat_equals_guess(self, t):
        report = eve_attack_round(t)
        assert report.p_pass_exact == pytest.approx(
            0.5 * (1.0 + psucc_formula(t)), abs=1e-9
        )
        assert report.psucc_strategy == pytest.approx(psucc_formula(t), abs=1e-9)

    @pytest.mark.parametrize("t", range(1, 7))
    def test_round_bound_holds(self, t):
        report = eve_attack_round(t)
        assert report.p_pass_exact <= 1.0 - 1.0 / (8.0 * (t + 1)) + 1e-12

    def test_strategy_copy_count_mismatch(self):
        strat = helstrom_strategy(1)
        with pytest.raises(DimensionMismatchError):
            eve_attack_round(2, strategy=strat)

    def test_zero_copy_round_is_blind(self):
        report = eve_attack_round(0)
        assert report.psucc_strategy == pytest.approx(0.5, abs=1e-9)
        assert report.p_pass_exact == pytest.approx(0.75, abs=1e-9)


class TestEveProver:
    def _session(self, ks, t=1):
        params = ProtocolParams(r=2, s=len(ks))
        key = PrivateKey(tuple(PhaseFraction(k, params.p) for k in ks))
        prover = EveProver(helstrom_strategy(t))
        return run_session(params, key, prover=prover, mode="exact")

    def test_exact_session_rejects(self):
        transcript = self._session((1, 2, 3))
        assert transcript.verdict == "reject"
        assert transcript.prover_tag == "helstrom-eve"
        for rec in transcript.records:
            assert 0.5 <= rec.pass_probability < 1.0 - 1e-9

    def test_round_value_depends_only_on_phase(self):
        a = self._session((1, 2, 3))
        b = self._session((3, 1, 2))
        got_a = sorted(rec.pass_probability for rec in a.records)
        got_b = sorted(rec.pass_probability for rec in b.records)
        assert got_a == pytest.approx(got_b, abs=1e-12)

    def test_sampled_session_runs(self):
        params = ProtocolParams(r=2, s=4)
        key = PrivateKey(tuple(PhaseFraction(k, 3) for k in (1, 2, 3, 1)))
        prover = EveProver(helstrom_strategy(1))
        t1 = run_session(params, key, prover=prover, mode="sampled", seed=21)
        t2 = run_session(params, key, prover=prover, mode="sampled", seed=21)
        assert t1.to_json_lines() == t2.to_json_lines()
        assert all(rec.response_bit in (0, 1) for rec in t1.records)
        accept = all(rec.passed for rec in t1.records)
        assert (t1.verdict == "accept") == accept


class TestSampledAttack:
    def test_deterministic_in_seed(self):
        strat = helstrom_strategy(1)
        a = sample_attack_rounds(strat, 500, make_rng(3))
        b = sample_attack_rounds(strat, 500, make_rng(3))
        np.testing.assert_array_equal(a, b)

    def test_empirical_rate_near_exact(self):
        strat = helstrom_strategy(2)
        exact = eve_attack_round(2).p_pass_exact
        n = 100_000
        passes = sample_attack_rounds(strat, n, make_rng(424242))
        sigma = math.sqrt(exact * (1.0 - exact) / n)
        assert abs(passes.mean() - exact) < 3.0 * sigma

    def test_rejects_no_trials(self):
        with pytest.raises(ValueError):
            sample_attack_rounds(helstrom_strategy(1), 0, make_rng(0))


@given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=40))
@settings(max_examples=80, deadline=None)
def test_fool_bound_monotone(t, s):
    base = fool_first_attempt_bound(t, s)
    assert fool_first_attempt_bound(t + 1, s) >= base  # more copies help
    assert fool_first_attempt_bound(t, s + 1) <= base  # more rounds hurt
    assert 0.0 < base < 1.0
