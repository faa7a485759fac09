import math

import numpy as np
import pytest

from qchan import (
    ConfusabilityGraph,
    confusability_graph,
    from_bloch,
    graph_from_json,
    graph_to_json,
    make_channel,
    max_independent_set,
    non_adjacent,
    pauli_eigenstates,
    pentagon_graph,
    strong_product,
    zero_error_lower_bound,
)
from qchan.errors import InvalidParameter, TooLarge


def empty_graph(m):
    return ConfusabilityGraph([f"u{k}" for k in range(m)], np.zeros((m, m), dtype=bool))


def complete_graph(m):
    adj = ~np.eye(m, dtype=bool)
    return ConfusabilityGraph([f"u{k}" for k in range(m)], adj)


class TestGraphType:
    def test_rejects_asymmetric_adjacency(self):
        adj = np.zeros((2, 2), dtype=bool)
        adj[0, 1] = True
        with pytest.raises(InvalidParameter):
            ConfusabilityGraph(["a", "b"], adj)

    def test_rejects_self_loops(self):
        with pytest.raises(InvalidParameter):
            ConfusabilityGraph(["a"], [[True]])

    def test_rejects_label_count_mismatch(self):
        with pytest.raises(InvalidParameter):
            ConfusabilityGraph(["a", "b", "c"], np.zeros((2, 2), dtype=bool))

    def test_pentagon_shape(self):
        g = pentagon_graph()
        assert g.vertex_count == 5
        assert g.edge_count == 5
        assert all(g.degree(v) == 2 for v in range(5))
        assert g.is_edge(0, 1) and g.is_edge(4, 0) and not g.is_edge(0, 2)


class TestNonAdjacent:
    def test_bit_flip_keeps_x_basis_apart(self):
        ch = make_channel("bit_flip", p=0.3)
        assert non_adjacent(ch, from_bloch([1, 0, 0]), from_bloch([-1, 0, 0]))

    def test_bit_flip_confuses_z_basis(self):
        ch = make_channel("bit_flip", p=0.3)
        assert not non_adjacent(ch, from_bloch([0, 0, 1]), from_bloch([0, 0, -1]))

    def test_identity_separates_any_orthogonal_pair(self):
        ch = make_channel("identity")
        assert non_adjacent(ch, from_bloch([0, 1, 0]), from_bloch([0, -1, 0]))


class TestConfusabilityGraph:
    def test_default_alphabet_is_pauli_eigenstates(self):
        g = confusability_graph(make_channel("identity"))
        assert g.labels == ("+z", "-z", "+x", "-x", "+y", "-y")

    def test_identity_connects_only_non_orthogonal_pairs(self):
        g = confusability_graph(make_channel("identity"))
        assert g.edge_count == 12
        assert all(g.degree(v) == 4 for v in range(6))
        assert not g.is_edge(0, 1)

    def test_full_depolarizing_confuses_everything(self):
        g = confusability_graph(make_channel("depolarizing", p=1.0))
        assert g.edge_count == 15

    def test_dephasing_spares_the_z_pair_only(self):
        g = confusability_graph(make_channel("dephasing", p=0.3))
        assert not g.is_edge(0, 1)
        assert g.edge_count == 14

    def test_custom_states_get_default_labels(self):
        states = [from_bloch([0, 0, 1]), from_bloch([0, 0, -1])]
        g = confusability_graph(make_channel("identity"), states=states)
        assert g.labels == ("s0", "s1")
        assert g.edge_count == 0

    def test_six_pauli_eigenstates_come_back(self):
        named = pauli_eigenstates()
        assert len(named) == 6
        assert all(np.isclose(np.trace(rho.matrix).real, 1.0) for _, rho in named)


class TestStrongProduct:
    def test_square_of_pentagon(self):
        g2 = strong_product(pentagon_graph(), 2)
        assert g2.vertex_count == 25
        assert g2.edge_count == 100
        assert "(v0,v1)" in g2.labels

    def test_tuples_adjacent_iff_confusable_everywhere(self):
        g = pentagon_graph()
        g2 = strong_product(g, 2)
        idx = {lab: k for k, lab in enumerate(g2.labels)}
        # differs in one coordinate by an edge, other coordinate equal
        assert g2.is_edge(idx["(v0,v0)"], idx["(v0,v1)"])
        # both coordinates move along edges
        assert g2.is_edge(idx["(v0,v0)"], idx["(v1,v1)"])
        # second coordinate jumps a non-edge, so the pair is distinguishable
        assert not g2.is_edge(idx["(v0,v0)"], idx["(v0,v2)"])

    def test_rejects_non_positive_power(self):
        with pytest.raises(InvalidParameter):
            strong_product(pentagon_graph(), 0)

    def test_vertex_budget_enforced(self):
        with pytest.raises(TooLarge):
            strong_product(pentagon_graph(), 8)


class TestMaxIndependentSet:
    def test_empty_graph_takes_all_vertices(self):
        size, witness = max_independent_set(empty_graph(4))
        assert size == 4
        assert sorted(witness) == [0, 1, 2, 3]

    def test_complete_graph_takes_one(self):
        size, _ = max_independent_set(complete_graph(5))
        assert size == 1

    def test_pentagon_packs_two(self):
        size, witness = max_independent_set(pentagon_graph())
        assert size == 2
        i, j = witness
        assert not pentagon_graph().is_edge(i, j)

    def test_pentagon_square_packs_five(self):
        g2 = strong_product(pentagon_graph(), 2)
        size, witness = max_independent_set(g2)
        assert size == 5
        for a in witness:
            for b in witness:
                if a != b:
                    assert not g2.is_edge(a, b)

    def test_vertex_limit_enforced(self):
        with pytest.raises(TooLarge):
            max_independent_set(empty_graph(131))

    def test_at_least_product_of_factors(self, rng):
        # packing never loses by blocking codewords coordinatewise
        for _ in range(5):
            adj = rng.random((6, 6)) < 0.4
            adj = np.triu(adj, 1)
            adj = adj | adj.T
            g = ConfusabilityGraph([f"u{k}" for k in range(6)], adj)
            a1, _ = max_independent_set(g)
            a2, _ = max_independent_set(strong_product(g, 2))
            assert a2 >= a1 * a1


class TestLowerBound:
    def test_pentagon_single_use(self):
        rep = zero_error_lower_bound(pentagon_graph(), 1)
        assert (rep.n, rep.K) == (1, 2)
        assert np.isclose(rep.rate, 1.0)
        assert len(rep.witness) == 2

    def test_pentagon_two_uses_beats_single_use(self):
        rep = zero_error_lower_bound(pentagon_graph(), 2)
        assert rep.K == 5
        assert np.isclose(rep.rate, 1.160964047443681, atol=1e-12)

    def test_pentagon_three_uses(self):
        rep = zero_error_lower_bound(pentagon_graph(), 3)
        assert rep.K == 10
        assert np.isclose(rep.rate, math.log2(10) / 3, atol=1e-12)

    def test_edgeless_alphabet_rate_is_log_size(self):
        rep = zero_error_lower_bound(empty_graph(3), 2)
        assert rep.K == 9
        assert np.isclose(rep.rate, math.log2(3), atol=1e-12)

    def test_bit_flip_keeps_one_noiseless_bit(self):
        g = confusability_graph(make_channel("bit_flip", p=0.3))
        rep = zero_error_lower_bound(g, 1)
        assert rep.K == 2
        assert set(rep.witness) == {"+x", "-x"}

    def test_complete_confusability_sends_nothing(self):
        g = confusability_graph(make_channel("depolarizing", p=1.0))
        rep = zero_error_lower_bound(g, 1)
        assert rep.K == 1
        assert rep.rate == 0.0

    def test_capacity_ordering_recorded(self):
        held = zero_error_lower_bound(pentagon_graph(), 2, hsw_upper=1.2)
        assert any("holds" in note for note in held.notes)
        broken = zero_error_lower_bound(pentagon_graph(), 2, hsw_upper=1.0)
        assert any("violated" in note for note in broken.notes)

    def test_rejects_non_positive_uses(self):
        with pytest.raises(InvalidParameter):
            zero_error_lower_bound(pentagon_graph(), 0)


class TestGraphJson:
    def test_round_trip(self):
        g = pentagon_graph()
        back = graph_from_json(graph_to_json(g))
        assert back.labels == g.labels
        assert np.array_equal(back.adjacency, g.adjacency)

    def test_rejects_missing_labels(self):
        with pytest.raises(InvalidParameter):
            graph_from_json({"edges": []})

    def test_rejects_out_of_range_edge(self):
        with pytest.raises(InvalidParameter):
            graph_from_json({"labels": ["a", "b"], "edges": [[0, 2]]})

    def test_rejects_self_loop_edge(self):
        with pytest.raises(InvalidParameter):
            graph_from_json({"labels": ["a", "b"], "edges": [[1, 1]]})
