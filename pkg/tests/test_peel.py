import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strobust.construct import base_depth_robust, single_node, three_grates
from strobust.graph import RemovalSet, chain
from strobust.transform import ab_witness, greedy_peel, halves

from conftest import dags
import oracles


class TestGreedyPeel:
    def test_chain6(self):
        got = greedy_peel(chain(6), RemovalSet.nodes(), 3)
        assert [p.nodes for p in got] == [(0, 1, 2), (3, 4, 5)]

    def test_too_long(self):
        assert greedy_peel(chain(6), None, 7) == []

    def test_certified_base_survives_single_deletion(self):
        c = base_depth_robust(8, 1, e=1)
        assert c.d + 1 == 4
        for v in range(8):
            assert len(greedy_peel(c.graph, RemovalSet.nodes([v]), 4)) >= 1

    def test_ell_positive(self):
        with pytest.raises(ValueError):
            greedy_peel(chain(2), None, 0)

    @settings(max_examples=80, deadline=None)
    @given(dags(max_nodes=12), st.data())
    def test_disjoint_exact_and_alive(self, g, data):
        dead = data.draw(st.sets(st.integers(0, g.n_nodes - 1), max_size=3))
        ell = data.draw(st.integers(1, 4))
        paths = greedy_peel(g, RemovalSet.nodes(dead), ell)
        seen = set()
        for p in paths:
            assert len(p.nodes) == ell and p.is_valid_in(g, dead)
            assert not seen & set(p.nodes)
            seen |= set(p.nodes)
        # maximality: nothing of ell nodes is left afterwards
        assert oracles.depth_after(g, dead | seen) < ell - 1 or g.n_nodes == len(dead | seen)


def test_halves():
    from strobust.graph import PathRec

    assert halves(PathRec((1, 2, 3, 4))) == ((1, 2), (3, 4))
    assert halves(PathRec((1, 2, 3))) == ((1, 2), (2, 3))


class TestAbWitness:
    def test_single_node_layers(self):
        h = single_node()
        g = three_grates(h, h, h, 1, 0)
        out = ab_witness(g, RemovalSet.nodes(), 1)
        assert out.ok and out.witness.inputs == (0,) and out.witness.outputs == (2,)

    def test_layer_deleted(self):
        h = chain(3)
        g = three_grates(h, h, h, 2, 1)
        out = ab_witness(g, RemovalSet.nodes(range(3, 6)), 2)
        assert not out.ok and "layer 2" in out.diagnostic

    def test_witness_all_pairs_connected(self):
        c = base_depth_robust(8, 1, e=2)
        h = c.graph
        g = three_grates(h, h, h, 4, 7)
        s = RemovalSet.nodes([3, 12])
        out = ab_witness(g, s, c.d + 1)
        assert out.ok
        nxg = oracles.nx_graph(g, s.members)
        assert all(oracles.connected(nxg, a, b) for a in out.witness.inputs for b in out.witness.outputs)
        assert set(out.witness.inputs) <= set(range(8)) and set(out.witness.outputs) <= set(range(16, 24))
        assert out.stats["slack_threshold"] == out.stats["paths_per_layer"][1] / 10
