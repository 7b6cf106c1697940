import json

import pytest

from strobust.construct import butterfly, single_node
from strobust.graph import GraphError, IoDag, PathRec, RemovalSet, chain, complete_dag
from strobust.search import SearchMode
from strobust.suites import check_irrepairable_bound, check_path_lift, genesis_paths, min_io_distance
from strobust.transform import (
    ReduceMap,
    butterfly_family,
    irrepairable_edges,
    lift_path,
    metanode_states,
    reduce,
)
from strobust.verify import check_depth_robust

from conftest import random_dag

EX = SearchMode.exhaustive()


class TestReduce:
    def test_single_edge(self):
        g = chain(2)
        r, m = reduce(g)
        assert r.n_nodes == 2 and r.edges == ((0, 1),)
        assert m.metanode_size == (1, 1)

    def test_k3_node_count(self):
        r, m = reduce(complete_dag(3))
        # the middle node has one in- and one out-neighbour
        assert m.delta == (2, 1, 2)
        assert r.n_nodes == 2 * butterfly(1).n_nodes + 1

    def test_k4_theorem_instance(self, k4):
        r, _ = reduce(k4)
        assert check_depth_robust(r, 0, 2, EX).holds

    def test_node_count_formula_and_indegree(self):
        g = random_dag(8, 0.4, 2)
        r, m = reduce(g)
        assert r.n_nodes == sum(butterfly_family(s).n_nodes for s in m.metanode_size)
        assert r.max_indegree <= 2

    def test_isolated_node_gets_single(self):
        g = IoDag(3, ((0, 1),))
        _, m = reduce(g)
        assert m.delta == (1, 1, 0) and m.metanode(2) == single_node()

    def test_port_maps_injective_and_external_degree(self):
        g = random_dag(9, 0.45, 5)
        r, m = reduce(g)
        for v in range(g.n_nodes):
            assert len(set(m.pi_in[v].values())) == len(m.pi_in[v]) == g.indegree(v)
            assert len(set(m.pi_out[v].values())) == len(m.pi_out[v]) == g.outdegree(v)
        ext = list(m.external_edges.values())
        assert len({a for a, _ in ext}) == len(ext) and len({b for _, b in ext}) == len(ext)
        assert all(r.has_edge(*e) for e in ext)

    def test_sorted_neighbours_on_sorted_ports(self, k4):
        _, m = reduce(k4)
        ports = butterfly_family(3)
        assert m.pi_out[0] == {1: ports.outputs[0], 2: ports.outputs[1], 3: ports.outputs[2]}
        assert m.pi_in[3] == {0: ports.inputs[0], 1: ports.inputs[1], 2: ports.inputs[2]}

    def test_owner(self, k4):
        _, m = reduce(k4)
        for v, (lo, hi) in enumerate(m.ranges):
            assert m.owner(lo) == v and m.owner(hi - 1) == v

    def test_uniform(self):
        g = complete_dag(3)
        r, m = reduce(g, uniform=4)
        assert set(m.metanode_size) == {4} and r.n_nodes == 3 * butterfly(2).n_nodes
        with pytest.raises(ValueError):
            reduce(g, uniform=1)

    def test_family_size_mismatch(self):
        with pytest.raises(GraphError):
            reduce(complete_dag(3), family=lambda s: butterfly(1))

    def test_json_round_trip(self):
        g = random_dag(7, 0.4, 1)
        _, m = reduce(g)
        back = ReduceMap.from_json(m.to_json())
        assert back == m
        assert json.loads(m.to_json())["delta"] == list(m.delta)


class TestIrrepairable:
    def test_empty(self, k4):
        _, m = reduce(k4)
        assert irrepairable_edges(k4, m, RemovalSet.nodes()) == frozenset()

    def test_whole_metanode(self, k4):
        _, m = reduce(k4)
        lo, hi = m.ranges[1]
        got = irrepairable_edges(k4, m, RemovalSet.nodes(range(lo, hi)))
        assert got == {e for e in k4.edges if 1 in e}

    def test_ports_deleted_makes_node_irrepairable(self, k4):
        _, m = reduce(k4)
        # delete every input port of node 3's metanode
        s = RemovalSet.nodes(m.glob(3, x) for x in m.metanode(3).inputs)
        states = metanode_states(m, s)
        assert not states[3].repairable
        assert {(u, 3) for u in range(3)} <= irrepairable_edges(k4, m, s)

    def test_random_size3_on_k4(self, k4):
        _, m = reduce(k4)
        r = check_irrepairable_bound(k4, m, 3, SearchMode.sampled(300, seed=3))
        assert r.holds and r.stats["max_irrepairable"] <= 6

    def test_exhaustive_small(self):
        g = complete_dag(3)
        _, m = reduce(g)
        for size in (1, 2):
            assert check_irrepairable_bound(g, m, size, EX).verdict == "holds"

    def test_graph_mismatch(self, k4):
        _, m = reduce(k4)
        with pytest.raises(GraphError):
            irrepairable_edges(complete_dag(3), m, RemovalSet.nodes())

    def test_edge_kind_rejected(self, k4):
        _, m = reduce(k4)
        with pytest.raises(GraphError):
            irrepairable_edges(k4, m, RemovalSet.edges([0]))


class TestLift:
    def test_single_edge_single_nodes(self):
        g = chain(2)
        _, m = reduce(g)
        q = lift_path(m, PathRec((0, 1)), RemovalSet.nodes())
        assert q.nodes == (0, 1)

    def test_through_repairable_middle(self):
        g = chain(3)
        r, m = reduce(g)
        q = lift_path(m, PathRec((0, 1, 2)), RemovalSet.nodes())
        assert q.nodes == (0, 1, 2) and q.is_valid_in(r)

    def test_k4_full_path(self, k4):
        r, m = reduce(k4)
        q = lift_path(m, PathRec((0, 1, 2, 3)), RemovalSet.nodes())
        assert q.is_valid_in(r) and q.length >= 3
        # enters and leaves each metanode in order
        assert [m.owner(x) for x in q.nodes] == sorted(m.owner(x) for x in q.nodes)

    def test_uniform_b1_product_bound(self):
        g = complete_dag(3)
        r, m = reduce(g, uniform=2)
        d_delta = min_io_distance(butterfly(1))
        assert d_delta == 2
        q = lift_path(m, PathRec((0, 1, 2)), RemovalSet.nodes())
        assert q.length >= 2 * d_delta

    def test_rejects_irrepairable(self, k4):
        _, m = reduce(k4)
        lo, hi = m.ranges[1]
        s = RemovalSet.nodes(range(lo, hi))
        with pytest.raises(GraphError, match="irrepairable"):
            lift_path(m, PathRec((0, 1, 2)), s)

    def test_rejects_non_edge(self):
        g = IoDag(3, ((0, 1),))
        _, m = reduce(g)
        with pytest.raises(GraphError):
            lift_path(m, PathRec((1, 2)), RemovalSet.nodes())

    def test_exhaustive_single_deletions(self):
        _, m = reduce(complete_dag(3))
        r = check_path_lift(m, 1, EX)
        assert r.verdict == "holds" and r.stats["paths_lifted"] > 0

    def test_genesis_paths_counts(self, k4):
        # 4 single nodes + 6 one-edge + 4 two-edge + 1 three-edge
        assert len(genesis_paths(k4)) == 15
        # the four paths using (0, 1) disappear
        assert len(genesis_paths(k4, frozenset({(0, 1)}))) == 11
