import pytest

from strobust.construct import butterfly
from strobust.flow import all_simple_paths, brute_force_disjoint_paths, max_disjoint_paths
from strobust.graph import IoDag

from conftest import hub_graph, matching, random_dag


def test_matching():
    g = matching(3)
    assert max_disjoint_paths(g, [0, 1, 2], [3, 4, 5]) == 3
    assert max_disjoint_paths(g, [0], [4]) == 0


def test_shared_node_counts_once():
    g = IoDag(3, ((0, 1),), (0,), (1,))
    assert max_disjoint_paths(g, [0], [0]) == 1


def test_dead_nodes_block():
    g = hub_graph()
    assert max_disjoint_paths(g, [0, 1], [3, 4]) == 2
    assert max_disjoint_paths(g, [0, 1], [3, 4], dead=[0]) == 1


def test_butterfly_full():
    b = butterfly(3)
    assert max_disjoint_paths(b, b.inputs, b.outputs) == 8


def test_all_simple_paths():
    g = IoDag(4, ((0, 1), (0, 2), (1, 3), (2, 3)))
    assert sorted(all_simple_paths(g, [0], [3])) == [(0, 1, 3), (0, 2, 3)]


@pytest.mark.parametrize("seed", range(40))
def test_flow_matches_enumeration(seed):
    g = random_dag(4 + seed % 9, 0.35, seed, n_io=min(3, (4 + seed % 9) // 2))
    assert max_disjoint_paths(g, g.inputs, g.outputs) == brute_force_disjoint_paths(g, g.inputs, g.outputs)
