"""Reweighting tests: clustering contract, recursion invariants, and both
directions of the cut/leverage correspondence."""

import math
from fractions import Fraction

import pytest

from edgewise.graph import Graph
from edgewise.reweight import (
    auto_delta,
    cluster_low_rdiam,
    reweight_min_cut,
    verify_converse,
)
from edgewise.spectral import leverage_scores, resistance_diameter


def cycle_graph(L):
    return Graph(L, [(i, (i + 1) % L) for i in range(L)])


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def dumbbell():
    edges = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    edges += [(u + 5, v + 5) for u in range(5) for v in range(u + 1, 5)]
    edges += [(0, 5)]
    return Graph(10, edges)


def check_partition_contract(g, cp):
    covered = sorted(v for p in cp.parts for v in p)
    assert covered == list(range(g.n))
    w_total = g.total_weight()
    assert cp.crossing_weight <= w_total / 2
    rho = cp.alpha_used * g.n / float(w_total)
    for part in cp.parts:
        sub, _ = g.induced_subgraph(part)
        assert sub.is_connected()
        assert resistance_diameter(g, part) <= rho + 1e-9
    assert abs(cp.max_part_rdiam * float(w_total) / g.n - cp.alpha_eff) < 1e-12


def test_cluster_single_edge():
    g = Graph(2, [(0, 1)])
    cp = cluster_low_rdiam(g)
    assert cp.parts == ((0, 1),)
    assert cp.crossing_weight == 0
    check_partition_contract(g, cp)


def test_cluster_complete_graph_single_part():
    g = complete_graph(8)
    cp = cluster_low_rdiam(g)
    assert cp.h == 1
    assert cp.alpha_used == 1.0
    check_partition_contract(g, cp)


def test_cluster_dumbbell_splits_at_bridge():
    g = dumbbell()
    cp = cluster_low_rdiam(g)
    assert sorted(len(p) for p in cp.parts) == [5, 5]
    assert cp.crossing_weight == 1
    check_partition_contract(g, cp)


@pytest.mark.parametrize("n", [12, 30, 61])
def test_cluster_cycle(n):
    g = cycle_graph(n)
    cp = cluster_low_rdiam(g)
    check_partition_contract(g, cp)
    assert cp.h > 1  # big cycles cannot be one low-diameter part


def test_cluster_deterministic():
    g = dumbbell()
    assert cluster_low_rdiam(g) == cluster_low_rdiam(g)


def test_cluster_rejects_disconnected():
    with pytest.raises(ValueError):
        cluster_low_rdiam(Graph(4, [(0, 1), (2, 3)]))


def test_auto_delta():
    assert auto_delta(10, 1) == 2
    assert auto_delta(60, 90) == 2 * 60 * math.ceil(math.log(90))
    assert auto_delta(2, 2) == 2 * 2 * 1


def test_reweight_c3_all_unit_weights():
    res = reweight_min_cut(cycle_graph(3))
    assert res.level_count == 1
    assert all(w == 1 for w in res.weights.values())
    assert abs(res.max_leverage - 2.0 / 3.0) < 1e-9
    assert res.max_leverage <= 4 * res.alpha_eff / 2 + 1e-9


def test_reweight_k4_half():
    res = reweight_min_cut(complete_graph(4))
    assert abs(res.max_leverage - 0.5) < 1e-9
    assert res.max_leverage <= 4 * res.alpha_eff / 3 + 1e-9


def test_reweight_rejects_bad_input():
    with pytest.raises(ValueError, match="unit"):
        reweight_min_cut(Graph(2, [(0, 1, 2)]))
    with pytest.raises(ValueError, match="connected"):
        reweight_min_cut(Graph(4, [(0, 1), (2, 3)]))
    with pytest.raises(ValueError, match="delta"):
        reweight_min_cut(cycle_graph(3), delta_param=1)


@pytest.mark.parametrize(
    "g,c",
    [
        (cycle_graph(20), 2),
        (cycle_graph(9).duplicate_edges(2), 4),
        (complete_graph(7), 6),
        (dumbbell(), 1),
        (cycle_graph(30).duplicate_edges(3), 6),
    ],
)
def test_reweight_end_to_end_bound(g, c):
    assert g.min_cut().value == c
    res = reweight_min_cut(g)
    assert res.max_leverage <= 4 * res.alpha_eff / c + 1e-9
    # halving and monotonicity across levels
    counts = res.level_edge_counts
    assert all(counts[i + 1] <= counts[i] // 2 for i in range(len(counts) - 1))
    cuts = res.level_min_cuts
    assert all(cuts[i + 1] >= cuts[i] for i in range(len(cuts) - 1))
    assert res.level_count <= math.ceil(math.log2(g.m)) + 1
    # every edge got a weight 1/delta^level
    assert set(res.weights) == set(g.edge_ids())
    for eid, w in res.weights.items():
        assert w == Fraction(1, res.delta_param ** res.levels[eid])
    expected_ratio = Fraction(res.delta_param) ** (res.level_count - 1)
    assert res.weight_ratio == expected_ratio


def test_reweight_inductive_diameter_bound():
    # clusters formed at level i, read back in original vertices, have
    # weighted resistance diameter <= 2 * alpha_eff * delta^i * (1+n/delta)^i / c
    for g, c in [(cycle_graph(12), 2), (cycle_graph(8).duplicate_edges(2), 4)]:
        res = reweight_min_cut(g)
        gw = g.with_weights(res.weights)
        n, d = g.n, res.delta_param
        for i, parts in enumerate(res.level_partitions_original):
            bound = 2 * res.alpha_eff * d**i * (1 + n / d) ** i / c
            for part in parts:
                if len(part) > 1:
                    assert resistance_diameter(gw, part) <= bound + 1e-9


def test_reweight_csv_and_summary():
    res = reweight_min_cut(cycle_graph(5))
    lines = res.to_csv().splitlines()
    assert lines[0] == "edge,level,weight_num,weight_den,leverage"
    assert len(lines) == 6
    summary = res.summary_json()
    assert '"delta"' in summary and '"alpha_eff"' in summary


def test_verify_converse_tree():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    rep = verify_converse(g, {e: Fraction(1) for e in g.edge_ids()})
    assert rep.ok
    assert abs(rep.c - 1.0) < 1e-9
    assert rep.min_cut_value == 1


def test_verify_converse_c5():
    g = cycle_graph(5)
    rep = verify_converse(g, {e: Fraction(1) for e in g.edge_ids()})
    # uniform C5 leverage 4/5 certifies min cut >= 5/4; true cut is 2
    assert rep.ok
    assert abs(rep.c - 1.25) < 1e-9
    assert rep.min_cut_value == 2


def test_verify_converse_k4_with_explicit_c():
    g = complete_graph(4)
    weights = {e: Fraction(1) for e in g.edge_ids()}
    rep = verify_converse(g, weights, c=2.0)
    assert rep.ok and rep.min_cut_value == 3
    with pytest.raises(ValueError, match="precondition"):
        verify_converse(g, weights, c=4.0)  # leverage 1/2 > 1/4


def test_verify_converse_after_reweight():
    for g in [cycle_graph(10), complete_graph(6), dumbbell()]:
        res = reweight_min_cut(g)
        rep = verify_converse(g, res.weights)
        assert rep.ok, f"certified {rep.c} but cut is {rep.min_cut_value}"
