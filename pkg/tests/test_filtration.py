import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toponet import (DataError, MorseSignal, WeightedNetwork, betti_curve,
                     default_death_level, graph_barcode, maximal_filtration,
                     morse_pairs_1d, node_filtration, tree_betti_coordinates)

from oracles import (betti_at_threshold, random_connected_network,
                     random_network, replay_betti_curve)


def net_from_edges(p, edges, convention="similarity"):
    w = np.zeros((p, p))
    for i, j, v in edges:
        w[i, j] = w[j, i] = v
    return WeightedNetwork(w, convention)


def k3(w12=0.2, w13=0.3, w23=0.4):
    return net_from_edges(3, [(0, 1, w12), (0, 2, w13), (1, 2, w23)])


class TestMaximalFiltration:
    def test_k3(self):
        levels = maximal_filtration(k3())
        assert np.allclose(levels.values, [0.2, 0.3, 0.4])
        assert np.array_equal(levels.multiplicities, [1, 1, 1])

    def test_duplicates_reported(self):
        net = net_from_edges(3, [(0, 1, 0.2), (0, 2, 0.2), (1, 2, 0.4)])
        levels = maximal_filtration(net)
        assert np.allclose(levels.values, [0.2, 0.4])
        assert np.array_equal(levels.multiplicities, [2, 1])

    def test_empty_graph(self):
        net = WeightedNetwork(np.zeros((4, 4)))
        assert maximal_filtration(net).values.size == 0


class TestBettiCurve:
    def test_k3_dim0(self):
        curve = betti_curve(k3(), 0)
        # 1 on [0, 0.3), 2 on [0.3, 0.4), 3 on [0.4, inf)
        assert np.allclose(curve.breakpoints, [0.3, 0.4])
        assert np.array_equal(curve.values, [1, 2, 3])
        assert curve.value_at(0.0) == 1
        assert curve.value_at(0.3) == 2
        assert curve.value_at(0.4) == 3

    def test_k3_dim1(self):
        curve = betti_curve(k3(), 1)
        assert np.allclose(curve.breakpoints, [0.2])
        assert np.array_equal(curve.values, [1, 0])

    def test_edgeless(self):
        net = WeightedNetwork(np.zeros((5, 5)))
        c0 = betti_curve(net, 0)
        c1 = betti_curve(net, 1)
        assert np.array_equal(c0.values, [5])
        assert np.array_equal(c1.values, [0])

    def test_tree_unit_steps(self):
        net = net_from_edges(4, [(0, 1, 0.5), (1, 2, 0.2), (2, 3, 0.9)])
        c0 = betti_curve(net, 0)
        assert np.array_equal(c0.values, [1, 2, 3, 4])
        c1 = betti_curve(net, 1)
        assert np.array_equal(c1.values, [0])

    def test_matches_bfs_replay(self):
        for seed in range(20):
            net = random_network(7, seed, density=0.7)
            for dim in (0, 1):
                curve = betti_curve(net, dim)
                probes, expected = replay_betti_curve(net, dim)
                got = [curve.value_at(eps) for eps in probes]
                assert got == expected, f"seed={seed} dim={dim}"

    def test_below_convention_mirrors(self):
        net = k3()
        c0 = betti_curve(net, 0, convention="below")
        # no edges before 0.2, then merges at 0.2 and 0.3; 0.4 closes a cycle
        assert c0.value_at(0.1) == 3
        assert c0.value_at(0.2) == 3  # strict w < eps: edge enters just past 0.2
        assert c0.value_at(0.21) == 2
        assert c0.value_at(0.31) == 1
        c1 = betti_curve(net, 1, convention="below")
        assert c1.value_at(0.39) == 0
        assert c1.value_at(0.41) == 1

    def test_rejects_bad_dim(self):
        with pytest.raises(DataError):
            betti_curve(k3(), 2)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_monotonicity_property(self, seed):
        net = random_network(8, seed, density=0.6)
        c0 = betti_curve(net, 0)
        c1 = betti_curve(net, 1)
        assert np.all(np.diff(c0.values) >= 0)
        assert np.all(np.diff(c1.values) <= 0)


class TestGraphBarcode:
    def test_k3_decomposition(self):
        bc = graph_barcode(k3())
        assert np.allclose(bc.births0, [0.3, 0.4])
        assert np.allclose(bc.deaths1, [0.2])

    def test_tree_all_births(self):
        net = net_from_edges(4, [(0, 1, 0.5), (1, 2, 0.2), (2, 3, 0.9)])
        bc = graph_barcode(net)
        assert np.allclose(bc.births0, [0.2, 0.5, 0.9])
        assert bc.deaths1.size == 0

    def test_partition_invariant(self):
        for seed in range(25):
            net = random_network(8, seed, density=0.6)
            bc = graph_barcode(net)
            merged = np.sort(np.concatenate([bc.births0, bc.deaths1]))
            assert np.array_equal(merged, np.sort(net.edge_weights()))
            assert bc.births0.size == net.p - bc.n_components

    def test_death_level_auto(self):
        bc = graph_barcode(k3())
        assert bc.death_level == pytest.approx(0.4 + 0.01 * 0.2)
        flat = net_from_edges(2, [(0, 1, 0.5)])
        assert graph_barcode(flat).death_level == pytest.approx(1.5)

    def test_death_level_validation(self):
        with pytest.raises(DataError, match="death_level"):
            graph_barcode(k3(), death_level=0.3)

    def test_paper_tree_diagram_on_death_line(self):
        # binary tree with max edge weight 0.3034; all 0-d points must sit on
        # the chosen horizontal line y = 0.31
        rng = np.random.default_rng(5)
        edges = []
        weights = list(rng.uniform(0.01, 0.30, 14)) + [0.3034]
        rng.shuffle(weights)
        for child in range(1, 16):
            parent = (child - 1) // 2
            edges.append((parent, child, weights[child - 1]))
        tree = net_from_edges(16, edges)
        pd0 = graph_barcode(tree, death_level=0.31).to_diagram(0)
        assert len(pd0) == 15
        assert np.all(pd0.deaths == 0.31)
        assert pd0.births.max() == pytest.approx(0.3034)

    def test_birth_death_event_replay(self):
        # crossing a birth value raises beta0 by one; crossing a death value
        # lowers beta1 by one (distinct weights)
        for seed in range(10):
            net = random_connected_network(7, seed)
            bc = graph_barcode(net)
            for b in bc.births0:
                assert (betti_at_threshold(net, b + 1e-12, 0)
                        == betti_at_threshold(net, b - 1e-12, 0) + 1)
            for d in bc.deaths1:
                assert (betti_at_threshold(net, d + 1e-12, 1)
                        == betti_at_threshold(net, d - 1e-12, 1) - 1)


class TestTreeCoordinates:
    def test_two_node_tree(self):
        net = net_from_edges(2, [(0, 1, 0.7)])
        assert tree_betti_coordinates(net) == [(0.0, 1), (0.7, 2)]

    def test_star(self):
        net = net_from_edges(4, [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)])
        assert tree_betti_coordinates(net) == [(0.0, 1), (1.0, 2), (2.0, 3), (3.0, 4)]

    def test_matches_betti_curve(self):
        net = net_from_edges(5, [(0, 1, 0.4), (1, 2, 0.1), (1, 3, 0.8), (3, 4, 0.6)])
        coords = tree_betti_coordinates(net)
        curve = betti_curve(net, 0)
        for eps, beta in coords:
            assert curve.value_at(eps) == beta

    def test_rejects_cycle(self):
        with pytest.raises(DataError, match="cycle"):
            tree_betti_coordinates(k3())

    def test_rejects_tied_weights(self):
        net = net_from_edges(3, [(0, 1, 0.5), (1, 2, 0.5)])
        with pytest.raises(DataError, match="distinct"):
            tree_betti_coordinates(net)


class TestNodeFiltration:
    def test_single_node(self):
        res = node_filtration(np.zeros((1, 1)), [2.0])
        assert res.curve.value_at(1.9) == 0
        assert res.curve.value_at(2.0) == 1

    def test_two_nodes_one_edge(self):
        adj = np.array([[0, 1], [1, 0]])
        res = node_filtration(adj, [1.0, 2.0])
        assert res.curve.value_at(1.0) == 1
        assert res.curve.value_at(1.5) == 1
        assert res.curve.value_at(2.0) == 1

    def test_path_three_nodes(self):
        adj = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
        res = node_filtration(adj, [1.0, 3.0, 2.0])
        assert res.curve.value_at(1.0) == 1
        assert res.curve.value_at(2.0) == 2
        assert res.curve.value_at(2.5) == 2
        assert res.curve.value_at(3.0) == 1
        last = res.levels[-1]
        assert last.n_nodes == 3 and last.n_edges == 2


class TestMorsePairs:
    def test_spec_example(self):
        pd = morse_pairs_1d(MorseSignal([1, 0, 2, -1, 3]))
        pts = set(map(tuple, pd.points))
        assert (0.0, 2.0) in pts
        assert (-1.0, 3.0) in pts
        assert len(pts) == 2

    def test_paper_figure_pairs(self):
        # minima a<b<d<f = 0,1,2,3 and maxima c<e = 4,5 among the criticals
        signal = MorseSignal([6.5, 0, 4, 1, 5, 2, 6, 3, 6.5])
        pts = set(map(tuple, morse_pairs_1d(signal).points))
        assert (1.0, 4.0) in pts  # (b, c)
        assert (2.0, 5.0) in pts  # (d, e)

    def test_monotone_signal(self):
        pd = morse_pairs_1d(MorseSignal([1, 2, 5]))
        assert pd.points.tolist() == [[1.0, 5.0]]

    def test_constant_signal(self):
        pd = morse_pairs_1d(MorseSignal([3.0, 3.0, 3.0]))
        assert pd.points.tolist() == [[3.0, 3.0]]

    def test_plateaus_collapse(self):
        with_plateaus = morse_pairs_1d(MorseSignal([1, 0, 0, 2, 2, -1, 3]))
        plain = morse_pairs_1d(MorseSignal([1, 0, 2, -1, 3]))
        assert with_plateaus.points.tolist() == plain.points.tolist()

    def test_too_short(self):
        with pytest.raises(DataError):
            MorseSignal([1.0])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-50, 50), min_size=2, max_size=40))
    def test_pair_count_matches_interior_maxima(self, values):
        signal = MorseSignal(np.asarray(values, dtype=float))
        minima, interior_maxima = signal.critical_points()
        pd = morse_pairs_1d(signal)
        # global-min class occupies one slot; the rest pair with interior maxima
        assert len(pd) == len(minima)
        assert len(pd) - 1 == len(interior_maxima)
        for b, d in pd.points:
            assert b <= d
