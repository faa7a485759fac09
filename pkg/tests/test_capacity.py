import numpy as np
import pytest

from qchan import (
    Ensemble,
    OptimizerConfig,
    analytic_capacity,
    apply,
    entanglement_assisted,
    full_report,
    holevo_quantity,
    hsw_geometric,
    hsw_numeric,
    make_channel,
    private_information,
    quantum_capacity_single_use,
)
from qchan.errors import InvalidChannel, InvalidParameter, Unsupported

# spot values frozen from plain-float reference computations
DEPOLARIZING_CHI = {
    0.0: 1.0,
    0.2: 0.5310044064107188,
    0.5: 0.18872187554086717,
    0.8: 0.02904940554533142,
    1.0: 0.0,
}
DAMPING_Q = {
    0.10: 0.7094182634736721,
    0.30: 0.327954761913956,
    0.45: 0.08044484812323793,
}

FAST = OptimizerConfig(restarts=16)


class TestHswNumeric:
    def test_identity_sends_one_bit(self):
        rep = hsw_numeric(make_channel("identity"), FAST)
        assert np.isclose(rep.C_hsw, 1.0, atol=1e-7)

    @pytest.mark.parametrize("p,expected", sorted(DEPOLARIZING_CHI.items()))
    def test_depolarizing_grid(self, p, expected):
        rep = hsw_numeric(make_channel("depolarizing", p=p), FAST)
        assert np.isclose(rep.C_hsw, expected, atol=1e-6)

    def test_dephasing_keeps_full_classical_rate(self):
        rep = hsw_numeric(make_channel("dephasing", p=0.3), FAST)
        assert np.isclose(rep.C_hsw, 1.0, atol=1e-7)

    def test_reported_ensemble_achieves_the_value(self):
        ch = make_channel("amplitude_damping", gamma=0.3)
        rep = hsw_numeric(ch, FAST)
        outs = [apply(ch, s) for s in rep.optimal_ensemble.states]
        achieved = holevo_quantity(Ensemble(rep.optimal_ensemble.weights, outs))
        assert np.isclose(achieved, rep.C_hsw, atol=1e-7)

    def test_non_qubit_input_handled(self):
        rep = hsw_numeric(make_channel("erasure", p=0.5), FAST)
        assert np.isclose(rep.C_hsw, 0.5, atol=1e-5)

    def test_optimizer_stats_recorded(self):
        rep = hsw_numeric(make_channel("depolarizing", p=0.5), FAST)
        assert rep.optimizer.restarts >= 8
        assert rep.optimizer.achieved_tolerance <= 1e-6

    def test_affine_only_channel_rejected(self):
        with pytest.raises(InvalidChannel):
            hsw_numeric(make_channel("pancake"))

    def test_dimension_limit_enforced(self):
        with pytest.raises(Unsupported):
            hsw_numeric(make_channel("identity", d=9))


class TestHswGeometric:
    def test_identity_radius_is_one_bit(self):
        rep = hsw_geometric(make_channel("identity"), FAST)
        assert np.isclose(rep.r_star, 1.0, atol=1e-6)

    def test_constant_output_channel_has_zero_radius(self):
        rep = hsw_geometric(make_channel("depolarizing", p=1.0), FAST)
        assert np.isclose(rep.r_star, 0.0, atol=1e-9)

    @pytest.mark.parametrize("kind,params", [
        ("depolarizing", {"p": 0.3}),
        ("amplitude_damping", {"gamma": 0.3}),
        ("bit_flip", {"p": 0.25}),
    ])
    def test_agrees_with_ensemble_search(self, kind, params):
        ch = make_channel(kind, **params)
        geo = hsw_geometric(ch, FAST)
        num = hsw_numeric(ch, FAST)
        assert abs(geo.r_star - num.C_hsw) <= 1e-6

    def test_non_qubit_rejected(self):
        with pytest.raises(Unsupported):
            hsw_geometric(make_channel("erasure", p=0.5))


class TestQuantumCapacity:
    @pytest.mark.parametrize("gamma,expected", sorted(DAMPING_Q.items()))
    def test_damping_grid(self, gamma, expected):
        rep = quantum_capacity_single_use(
            make_channel("amplitude_damping", gamma=gamma), FAST
        )
        assert np.isclose(rep.Q1, expected, atol=1e-6)

    def test_dephasing_hashing_value(self):
        rep = quantum_capacity_single_use(make_channel("dephasing", p=0.1), FAST)
        assert np.isclose(rep.Q1, 0.5310044064107188, atol=1e-6)

    def test_heavy_damping_has_no_rate(self):
        # the raw optimum sits at 0, reached on the pure decay fixed point
        rep = quantum_capacity_single_use(
            make_channel("amplitude_damping", gamma=0.8), FAST
        )
        assert rep.Q1 <= 1e-9
        assert abs(rep.Q1_raw) <= 1e-9

    def test_identity_sends_one_qubit(self):
        rep = quantum_capacity_single_use(make_channel("identity"), FAST)
        assert np.isclose(rep.Q1, 1.0, atol=1e-7)


class TestEntanglementAssisted:
    def test_identity_doubles_the_rate(self):
        rep = entanglement_assisted(make_channel("identity"), FAST)
        assert np.isclose(rep.C_E, 2.0, atol=1e-6)

    def test_useless_channel_assists_nothing(self):
        rep = entanglement_assisted(make_channel("depolarizing", p=1.0), FAST)
        assert rep.C_E <= 1e-6

    def test_dominates_unassisted_rate(self):
        ch = make_channel("depolarizing", p=0.3)
        ea = entanglement_assisted(ch, FAST)
        un = hsw_numeric(ch, FAST)
        assert ea.C_E >= un.C_hsw - 1e-6

    def test_large_input_rejected(self):
        with pytest.raises(Unsupported):
            entanglement_assisted(make_channel("identity", d=5))


class TestPrivateInformation:
    def test_identity_is_fully_private(self):
        rep = private_information(make_channel("identity"), FAST)
        assert np.isclose(rep.P1, 1.0, atol=1e-5)

    def test_broadcast_channel_leaks_everything(self):
        rep = private_information(make_channel("measure_prepare"), FAST)
        assert rep.P1 <= 1e-6

    def test_dephasing_matches_quantum_value(self):
        rep = private_information(make_channel("dephasing", p=0.1), FAST)
        assert np.isclose(rep.P1, 0.5310044064107188, atol=1e-4)


class TestAnalytic:
    @pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.8, 1.0])
    def test_erasure_forms(self, p):
        rep = analytic_capacity("erasure", p=p)
        assert np.isclose(rep.C_hsw, 1.0 - p, atol=1e-12)
        assert np.isclose(rep.Q1, max(1.0 - 2.0 * p, 0.0), atol=1e-12)
        assert np.isclose(rep.Q1_raw, 1.0 - 2.0 * p, atol=1e-12)

    def test_erasure_scales_with_dimension(self):
        rep = analytic_capacity("erasure", p=0.25, d=4)
        assert np.isclose(rep.C_hsw, 1.5, atol=1e-12)
        assert np.isclose(rep.Q1, 1.0, atol=1e-12)

    def test_phase_erasure_keeps_classical_rate(self):
        rep = analytic_capacity("phase_erasure", q=0.4)
        assert np.isclose(rep.C_hsw, 1.0, atol=1e-12)
        assert np.isclose(rep.Q1, 0.6, atol=1e-12)

    def test_mixed_erasure_combines_both_losses(self):
        rep = analytic_capacity("mixed_erasure", p=0.2, q=0.3)
        assert np.isclose(rep.C_hsw, 0.8, atol=1e-12)
        assert np.isclose(rep.Q1_raw, 1.0 - 0.3 - 0.4, atol=1e-12)

    def test_mixed_erasure_rejects_excess_total(self):
        with pytest.raises(InvalidParameter):
            analytic_capacity("mixed_erasure", p=0.7, q=0.7)

    @pytest.mark.parametrize("gamma,expected", sorted(DAMPING_Q.items()))
    def test_damping_matches_reference(self, gamma, expected):
        rep = analytic_capacity("amplitude_damping", gamma=gamma)
        assert np.isclose(rep.Q1, expected, atol=1e-9)

    def test_damping_above_half_is_dead(self):
        for gamma in (0.5, 0.7, 1.0):
            rep = analytic_capacity("amplitude_damping", gamma=gamma)
            assert rep.Q1 == 0.0
            assert rep.Q1_raw <= 0.0

    @pytest.mark.parametrize("p,expected", sorted(DEPOLARIZING_CHI.items()))
    def test_depolarizing_matches_reference(self, p, expected):
        rep = analytic_capacity("depolarizing", p=p)
        assert np.isclose(rep.C_hsw, expected, atol=1e-12)

    def test_binary_symmetric_channel(self):
        rep = analytic_capacity("bsc", p=0.25)
        assert np.isclose(rep.C_hsw, 0.18872187554086717, atol=1e-12)

    def test_unknown_kind_rejected(self):
        with pytest.raises(Unsupported):
            analytic_capacity("dephasing", p=0.3)

    def test_out_of_range_parameter_rejected(self):
        with pytest.raises(InvalidParameter):
            analytic_capacity("erasure", p=1.5)


class TestFullReport:
    def test_merges_requested_measures(self):
        rep = full_report(
            make_channel("amplitude_damping", gamma=0.3),
            FAST,
            measures=("hsw", "qcap", "minent"),
        )
        assert rep.C_hsw is not None
        assert rep.Q1 is not None
        assert rep.S_min is not None
        assert rep.C_E is None

    def test_all_measures_fill_every_field(self):
        rep = full_report(make_channel("dephasing", p=0.2), FAST, measures="all")
        for name in ("chi", "C_hsw", "Q1", "Q1_raw", "C_E", "P1", "r_star", "S_min"):
            assert getattr(rep, name) is not None, name

    def test_quantum_never_beats_classical(self):
        rep = full_report(
            make_channel("amplitude_damping", gamma=0.2),
            FAST,
            measures=("hsw", "qcap"),
        )
        assert rep.Q1 <= rep.C_hsw + 1e-6

    def test_unknown_measure_rejected(self):
        with pytest.raises(InvalidParameter):
            full_report(make_channel("identity"), FAST, measures=("hsw", "bogus"))

    def test_optimizer_stats_accumulate(self):
        rep = full_report(
            make_channel("bit_flip", p=0.2), FAST, measures=("hsw", "qcap")
        )
        solo = hsw_numeric(make_channel("bit_flip", p=0.2), FAST)
        assert rep.optimizer.restarts > solo.optimizer.restarts
