import math
from collections import Counter

import numpy as np
import pytest

from qchan import (
    PairState,
    RepeaterConfig,
    config_from_json,
    config_to_json,
    expected_rounds,
    generation_rate,
    link_success_probability,
    purify_pair,
    simulate_schedule,
    swap_level_stats,
    swap_pair,
    trace_events_jsonl,
    trace_to_json,
)
from qchan.errors import (
    DegenerateLoss,
    DegeneratePair,
    Divergent,
    InvalidLevel,
    InvalidParameter,
    InvalidProbability,
)

# iterates frozen from exact rational reference computations
SYMMETRIC_LADDER = [
    0.7564636267673689,
    0.9060878322044748,
    0.9893717287256045,
    0.9998846131933753,
    0.999999986682812,
]
PUMPING_LADDER = [
    0.8448275862068966,
    0.927027027027027,
    0.967365028203062,
    0.9857478005865102,
    0.9938417611380493,
]
EXPECTED_ROUNDS = {
    (0, 0.5): 2.0,
    (1, 0.5): 2.6666666666666665,
    (2, 0.5): 3.5047619047619047,
    (3, 0.5): 4.421077725815582,
    (1, 0.1): 14.736842105263158,
    (2, 0.3): 6.34094488520179,
    (3, 0.1): 26.295784368397804,
}

CFG = RepeaterConfig(L=20000.0, segments=1, P0=0.5, eta=0.5, F0=0.638)


def replay(trace, f0):
    """Rebuild pair states from the event stream; asserts stream consistency."""
    alive = {}
    next_id = 0
    for ev in trace.events:
        if ev.action == "generate":
            (pid,) = ev.inputs
            assert pid == next_id, "generated ids must be sequential"
            next_id += 1
            alive[pid] = f0
        elif ev.action == "purify":
            a, b = ev.inputs
            assert a in alive and b in alive, "purify must consume live pairs"
            del alive[a], alive[b]
            if ev.success:
                alive[next_id] = ev.output
                next_id += 1
        elif ev.action == "discard":
            (pid,) = ev.inputs
            assert pid in alive
            del alive[pid]
        else:
            raise AssertionError(f"unknown action {ev.action}")
    return alive


class TestLinkSuccess:
    def test_bare_pair_always_succeeds(self):
        assert link_success_probability(0.5, 0.5) == 1.0

    def test_perfect_pair_never_succeeds(self):
        assert link_success_probability(1.0, 0.3) == 0.0

    def test_half_loss_is_linear_in_fidelity(self):
        assert np.isclose(link_success_probability(0.75, 0.5), 0.5, atol=1e-12)
        assert np.isclose(link_success_probability(0.9, 0.5), 0.2, atol=1e-12)

    def test_zero_loss_gives_zero(self):
        assert link_success_probability(0.7, 0.0) == 0.0

    def test_total_loss_rejected(self):
        with pytest.raises(DegenerateLoss):
            link_success_probability(0.7, 1.0)

    def test_fidelity_below_half_rejected(self):
        with pytest.raises(InvalidParameter):
            link_success_probability(0.4, 0.5)

    def test_negative_loss_rejected(self):
        with pytest.raises(InvalidParameter):
            link_success_probability(0.7, -0.1)

    def test_always_a_probability(self):
        for F in np.linspace(0.5, 1.0, 21):
            for eta in np.linspace(0.0, 0.99, 12):
                v = link_success_probability(float(F), float(eta))
                assert 0.0 <= v <= 1.0


class TestPurify:
    def test_reference_point(self):
        p, f = purify_pair(0.9, 0.9)
        assert np.isclose(p, 0.82, atol=1e-15)
        assert np.isclose(f, 81.0 / 82.0, atol=1e-15)

    def test_improves_above_one_half(self):
        for F in (0.55, 0.7, 0.9, 0.99):
            _, out = purify_pair(F, F)
            assert out > F

    def test_opposite_certainties_cannot_merge(self):
        with pytest.raises(DegeneratePair):
            purify_pair(1.0, 0.0)

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidProbability):
            purify_pair(1.2, 0.9)

    def test_symmetric_ladder_matches_reference(self):
        f = 0.638
        for expected in SYMMETRIC_LADDER:
            _, f = purify_pair(f, f)
            assert np.isclose(f, expected, rtol=1e-14)

    def test_pumping_ladder_matches_reference(self):
        f = 0.7
        for expected in PUMPING_LADDER:
            _, f = purify_pair(f, 0.7)
            assert np.isclose(f, expected, rtol=1e-14)


class TestSwap:
    def test_perfect_pairs_stay_perfect(self):
        assert swap_pair(1.0) == 1.0

    def test_werner_midpoint_is_fixed(self):
        assert swap_pair(0.5) == 0.5

    def test_swapping_degrades(self):
        assert np.isclose(swap_pair(0.9), 0.82, atol=1e-15)
        for F in (0.6, 0.75, 0.95):
            assert swap_pair(F) < F

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidProbability):
            swap_pair(1.1)


class TestSwapLevelStats:
    def test_ground_level_counts(self):
        assert swap_level_stats(3, 0) == {"spanned": 1, "shared_pairs": 8, "freed": 0}

    def test_intermediate_level_counts(self):
        assert swap_level_stats(3, 2) == {"spanned": 4, "shared_pairs": 2, "freed": 12}

    def test_top_level_counts(self):
        assert swap_level_stats(3, 3) == {"spanned": 8, "shared_pairs": 1, "freed": 14}

    def test_rejects_level_out_of_range(self):
        with pytest.raises(InvalidLevel):
            swap_level_stats(3, 4)
        with pytest.raises(InvalidLevel):
            swap_level_stats(-1, 0)


class TestExpectedRounds:
    @pytest.mark.parametrize("key,expected", sorted(EXPECTED_ROUNDS.items()))
    def test_matches_exact_rationals(self, key, expected):
        n, p0 = key
        assert np.isclose(expected_rounds(n, p0), expected, rtol=1e-12)

    def test_certain_success_takes_one_round(self):
        for n in (0, 1, 3, 5):
            assert expected_rounds(n, 1.0) == 1.0

    def test_survival_series_matches_tail_sum(self):
        # independent form: E[max] = sum_k P(max > k)
        for n, p0 in [(5, 0.2), (6, 0.5)]:
            m, q = 2**n, 1.0 - p0
            reference = sum(1.0 - (1.0 - q**k) ** m for k in range(0, 5000))
            assert np.isclose(expected_rounds(n, p0), reference, rtol=1e-12)

    def test_monotone_in_levels(self):
        vals = [expected_rounds(n, 0.3) for n in range(7)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_bracketed_by_single_and_total_attempts(self):
        for n in (0, 2, 5):
            z = expected_rounds(n, 0.25)
            assert 1.0 / 0.25 <= z <= 2**n / 0.25

    def test_zero_probability_diverges(self):
        with pytest.raises(Divergent):
            expected_rounds(2, 0.0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidLevel):
            expected_rounds(-1, 0.5)
        with pytest.raises(InvalidProbability):
            expected_rounds(2, 1.5)


class TestGenerationRate:
    def test_single_segment_round_trip_time(self):
        rep = generation_rate(RepeaterConfig(L=20000.0, segments=1, P0=0.1, eta=0.5, F0=0.9))
        assert rep.T0 == 2e-4
        assert np.isclose(rep.Z_n, 10.0, rtol=1e-12)
        assert np.isclose(rep.R_n, 1.0 / (2e-4 * 10.0), rtol=1e-12)
        assert np.isclose(rep.R_n_approx, 0.1 / 2e-4, rtol=1e-12)

    def test_three_level_chain(self):
        rep = generation_rate(RepeaterConfig(L=160000.0, segments=8, P0=0.1, eta=0.5, F0=0.9))
        assert rep.T0 == 2e-4
        assert np.isclose(rep.Z_n, 26.295784368397804, rtol=1e-12)
        assert np.isclose(rep.R_n_approx, (0.1 / 2e-4) * (2.0 / 3.0) ** 3, rtol=1e-12)

    def test_rate_bounded_by_attempt_rate(self):
        rep = generation_rate(RepeaterConfig(L=80000.0, segments=4, P0=0.3, eta=0.5, F0=0.9))
        assert rep.Z_n >= 1.0 / 0.3
        assert rep.R_n <= 0.3 / rep.T0

    def test_zero_probability_diverges(self):
        with pytest.raises(Divergent):
            generation_rate(RepeaterConfig(L=20000.0, segments=2, P0=0.0, eta=0.5, F0=0.9))


class TestConfig:
    def test_geometry_properties(self):
        cfg = RepeaterConfig(L=160000.0, segments=8, P0=0.1, eta=0.5, F0=0.9)
        assert cfg.L0 == 20000.0
        assert cfg.levels == 3

    def test_rejects_non_power_of_two_segments(self):
        with pytest.raises(InvalidParameter):
            RepeaterConfig(L=1000.0, segments=3, P0=0.1, eta=0.5, F0=0.9)

    def test_rejects_non_positive_distance(self):
        with pytest.raises(InvalidParameter):
            RepeaterConfig(L=0.0, segments=2, P0=0.1, eta=0.5, F0=0.9)

    def test_json_round_trip(self):
        cfg = RepeaterConfig(L=160000.0, segments=8, P0=0.1, eta=0.5, F0=0.9)
        assert config_from_json(config_to_json(cfg)) == cfg

    def test_json_missing_field_rejected(self):
        with pytest.raises(InvalidParameter):
            config_from_json({"L": 1000.0, "segments": 2})

    def test_pair_state_validation(self):
        with pytest.raises(InvalidProbability):
            PairState(fidelity=1.2)
        with pytest.raises(InvalidLevel):
            PairState(fidelity=0.9, level=-1)


class TestSimulate:
    def test_symmetric_tournament_consumes_a_power_of_two(self):
        trace = simulate_schedule("symmetric", 0.9999, CFG, force_success=True)
        assert trace.outcome == "reached"
        assert trace.raw_pairs_consumed == 32
        assert trace.rounds == 63
        assert np.isclose(trace.final_fidelity, SYMMETRIC_LADDER[-1], rtol=1e-14)

    def test_symmetric_outputs_follow_the_ladder(self):
        trace = simulate_schedule("symmetric", 0.9999, CFG, force_success=True)
        outputs = [ev.output for ev in trace.events if ev.action == "purify"]
        counts = Counter(round(f, 12) for f in outputs)
        expected = {
            round(f, 12): c for f, c in zip(SYMMETRIC_LADDER, (16, 8, 4, 2, 1))
        }
        assert counts == expected

    def test_pumping_recycles_one_held_pair(self):
        trace = simulate_schedule("pumping", 0.99, RepeaterConfig(
            L=20000.0, segments=1, P0=0.5, eta=0.5, F0=0.7
        ), force_success=True)
        assert trace.outcome == "reached"
        assert trace.raw_pairs_consumed == 6
        assert trace.rounds == 11
        outputs = [ev.output for ev in trace.events if ev.action == "purify"]
        assert np.allclose(outputs, PUMPING_LADDER, rtol=1e-14)

    def test_event_stream_replays_consistently(self):
        for policy in ("symmetric", "pumping", "greedy", "banded"):
            trace = simulate_schedule(policy, 0.95, CFG, seed=3, max_rounds=500)
            alive = replay(trace, CFG.F0)
            if trace.outcome == "reached":
                assert any(
                    np.isclose(f, trace.final_fidelity, rtol=1e-12)
                    for f in alive.values()
                )

    def test_same_seed_reproduces_bytes(self):
        a = simulate_schedule("greedy", 0.95, CFG, seed=7, max_rounds=400)
        b = simulate_schedule("greedy", 0.95, CFG, seed=7, max_rounds=400)
        assert trace_events_jsonl(a) == trace_events_jsonl(b)

    def test_different_seeds_diverge(self):
        a = simulate_schedule("greedy", 0.95, CFG, seed=0, max_rounds=400)
        b = simulate_schedule("greedy", 0.95, CFG, seed=1, max_rounds=400)
        assert trace_events_jsonl(a) != trace_events_jsonl(b)

    def test_banded_only_purifies_within_a_band(self):
        cfg = RepeaterConfig(L=20000.0, segments=1, P0=0.5, eta=0.5, F0=0.638)
        bands = 8
        width = (1.0 - cfg.F0) / bands

        def band_of(f):
            return min(int((f - cfg.F0) / width), bands - 1)

        trace = simulate_schedule(
            "banded", 0.9999, cfg, force_success=True, bands=bands
        )
        fid = {}
        next_id = 0
        for ev in trace.events:
            if ev.action == "generate":
                fid[next_id] = cfg.F0
                next_id += 1
            elif ev.action == "purify":
                a, b = ev.inputs
                assert band_of(fid[a]) == band_of(fid[b])
                if ev.success:
                    fid[next_id] = ev.output
                    next_id += 1

    def test_banded_discards_stale_pairs(self):
        cfg = RepeaterConfig(L=20000.0, segments=1, P0=0.05, eta=0.5, F0=0.638)
        trace = simulate_schedule(
            "banded", 0.99, cfg, seed=5, max_rounds=2000, band_wait_cap=10
        )
        discards = [ev for ev in trace.events if ev.action == "discard"]
        assert discards
        assert all(len(ev.inputs) == 1 and ev.success for ev in discards)

    def test_raw_pair_budget_halts_the_run(self):
        trace = simulate_schedule(
            "symmetric", 0.9999, CFG, force_success=True, max_raw_pairs=4
        )
        assert trace.outcome == "exhausted"
        assert trace.raw_pairs_consumed == 4
        assert np.isclose(trace.final_fidelity, SYMMETRIC_LADDER[1], rtol=1e-14)

    def test_dead_source_exhausts_with_nothing(self):
        cfg = RepeaterConfig(L=20000.0, segments=1, P0=0.0, eta=0.5, F0=0.638)
        trace = simulate_schedule("symmetric", 0.9, cfg, max_rounds=50)
        assert trace.outcome == "exhausted"
        assert trace.rounds == 50
        assert trace.raw_pairs_consumed == 0
        assert trace.final_fidelity == 0.0
        assert trace_events_jsonl(trace) == ""

    def test_rejects_unknown_policy(self):
        with pytest.raises(InvalidParameter):
            simulate_schedule("eager", 0.9, CFG)

    def test_rejects_unreachable_target(self):
        with pytest.raises(InvalidParameter):
            simulate_schedule("symmetric", 0.5, CFG)
        with pytest.raises(InvalidParameter):
            simulate_schedule("symmetric", 1.0, CFG)

    def test_rejects_empty_banding(self):
        with pytest.raises(InvalidParameter):
            simulate_schedule("banded", 0.9, CFG, bands=0)

    def test_trace_json_shape(self):
        trace = simulate_schedule("symmetric", 0.9, CFG, seed=2, max_rounds=100)
        data = trace_to_json(trace)
        assert data["policy"] == "symmetric"
        assert data["seed"] == 2
        assert len(data["events"]) == len(trace.events)
        assert {"round", "action", "inputs", "success", "output"} == set(
            data["events"][0]
        )

    def test_jsonl_lines_parse_and_sort_keys(self):
        import json

        trace = simulate_schedule("pumping", 0.9, CFG, seed=4, max_rounds=200)
        text = trace_events_jsonl(trace)
        lines = text.splitlines()
        assert len(lines) == len(trace.events)
        for line in lines:
            keys = list(json.loads(line))
            assert keys == sorted(keys)
