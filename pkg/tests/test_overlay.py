import pytest

from strobust.construct import butterfly, superconcentrator
from strobust.graph import IoDag, chain, complete_dag
from strobust.transform import overlay


def test_single_node():
    h, vc = overlay(IoDag(1, ()))
    assert h.n_nodes == 1 and h.edges == () and set(vc) <= set(h.outputs)


def test_chain3_edges_on_inputs():
    h, vc = overlay(chain(3))
    x = h.inputs
    assert h.has_edge(x[0], x[1]) and h.has_edge(x[1], x[2])
    assert h.n_edges == superconcentrator(3).n_edges + 2
    assert vc == list(h.outputs)


def test_k4_shape():
    h, vc = overlay(complete_dag(4))
    b = butterfly(2)
    assert h.n_nodes == b.n_nodes and h.n_edges == b.n_edges + 6
    assert vc == [16, 17, 18, 19]


def test_challenge_size():
    h, vc = overlay(complete_dag(4), challenge_size=2)
    assert vc == list(h.outputs[:2])
    with pytest.raises(ValueError):
        overlay(complete_dag(4), challenge_size=5)
