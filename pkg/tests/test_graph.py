import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strobust.graph import (
    GraphError,
    IoDag,
    PathRec,
    RemovalSet,
    chain,
    delete,
    depth,
    longest_path,
    node_depth_profile,
    pairwise_longest,
    reach_matrix,
)
from strobust.construct import butterfly

from conftest import dags, random_dag


def to_nx(g):
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n_nodes))
    h.add_edges_from(g.edges)
    return h


class TestIoDag:
    def test_rejects_backward_edge(self):
        with pytest.raises(GraphError, match="topological"):
            IoDag(3, ((2, 1),))

    def test_rejects_self_loop_and_duplicates(self):
        with pytest.raises(GraphError):
            IoDag(2, ((1, 1),))
        with pytest.raises(GraphError, match="duplicate"):
            IoDag(2, ((0, 1), (0, 1)))

    def test_rejects_duplicate_inputs(self):
        with pytest.raises(GraphError, match="inputs"):
            IoDag(2, (), (0, 0), ())

    def test_node_may_be_input_and_output(self):
        g = IoDag(1, (), (0,), (0,))
        assert g.inputs == g.outputs == (0,)

    def test_edges_are_sorted(self):
        g = IoDag(3, ((1, 2), (0, 2), (0, 1)))
        assert g.edges == ((0, 1), (0, 2), (1, 2))

    def test_from_edges_relabels_topologically(self):
        g, idx = IoDag.from_edges(3, [(2, 0), (0, 1)], inputs=[2], outputs=[1])
        assert idx == [1, 2, 0]
        assert g.edges == ((0, 1), (1, 2))
        assert g.inputs == (0,) and g.outputs == (2,)

    def test_from_edges_rejects_cycle(self):
        with pytest.raises(GraphError, match="cycle"):
            IoDag.from_edges(2, [(0, 1), (1, 0)])

    def test_degrees(self):
        b = butterfly(2)
        assert b.max_indegree == 2
        assert b.sources == b.inputs and b.sinks == b.outputs


class TestDelete:
    def test_chain_middle(self, chain5):
        h, remap = delete(chain5, RemovalSet.nodes([2]))
        assert h.n_nodes == 4 and h.n_edges == 2
        assert remap == [0, 1, None, 2, 3]

    def test_empty_is_identity(self, k4):
        h, remap = delete(k4, RemovalSet.nodes())
        assert h == k4 and remap == list(range(4))

    def test_k4_edge(self, k4):
        s = RemovalSet.of_edges(k4, [(1, 2)])
        h, _ = delete(k4, s)
        assert h.n_edges == 5 and not h.has_edge(1, 2)

    def test_invalid_id_named(self, chain5):
        with pytest.raises(GraphError, match="7"):
            delete(chain5, RemovalSet.nodes([7]))

    def test_io_filtered(self):
        g = butterfly(1)
        h, remap = delete(g, RemovalSet.nodes([0]))
        assert len(h.inputs) == 1 and h.inputs == (remap[1],)

    @settings(max_examples=60, deadline=None)
    @given(dags(max_nodes=12), st.data())
    def test_depth_monotone(self, g, data):
        members = data.draw(st.sets(st.integers(0, g.n_nodes - 1), max_size=g.n_nodes))
        h, _ = delete(g, RemovalSet.nodes(members))
        assert depth(h) <= depth(g)
        assert all(u < v for u, v in h.edges)


class TestDepth:
    def test_examples(self, chain5, k4):
        assert depth(chain5) == 4
        assert depth(IoDag(1, ())) == 0
        assert depth(k4) == 3

    def test_profiles(self, chain5, k4):
        assert node_depth_profile(chain5) == [0, 1, 2, 3, 4]
        assert node_depth_profile(k4) == [0, 1, 2, 3]
        star = IoDag(4, ((0, 3), (1, 3), (2, 3)))
        assert node_depth_profile(star) == [0, 0, 0, 1]

    def test_pairwise(self, chain5, k4):
        assert pairwise_longest(chain5, 0, 4) == 4
        assert pairwise_longest(k4, 0, 3) == 3
        assert pairwise_longest(IoDag(2, ()), 0, 1) is None
        assert longest_path(k4, 0, 3).nodes == (0, 1, 2, 3)

    @settings(max_examples=60, deadline=None)
    @given(dags(max_nodes=14))
    def test_depth_matches_networkx(self, g):
        assert depth(g) == nx.dag_longest_path_length(to_nx(g))


class TestReach:
    def test_b2_all_true(self):
        m = reach_matrix(butterfly(2))
        assert m.shape == (4, 4) and m.all()

    def test_isolated_false(self):
        assert not reach_matrix(IoDag(2, (), (0,), (1,))).any()

    def test_chain_cut(self):
        h, _ = delete(chain(3), RemovalSet.nodes([1]))
        assert not reach_matrix(h).any()

    def test_self_reach(self):
        assert reach_matrix(IoDag(1, (), (0,), (0,)))[0, 0]

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_networkx_up_to_64_nodes(self, seed):
        n = 8 + 3 * seed
        g = random_dag(n, 3.0 / n, seed, n_io=4)
        m = reach_matrix(g)
        h = to_nx(g)
        want = np.array([[o == i or nx.has_path(h, i, o) for o in g.outputs] for i in g.inputs])
        assert (m == want).all()


class TestPathRec:
    def test_length_and_validity(self, k4):
        p = PathRec((0, 2, 3))
        assert p.length == 2 and p.edges == [(0, 2), (2, 3)]
        assert p.is_valid_in(k4) and not p.is_valid_in(k4, dead=[2])
        assert not PathRec((0, 3, 2)).is_valid_in(k4)

    def test_repeat_rejected(self):
        with pytest.raises(GraphError):
            PathRec((0, 1, 0))
