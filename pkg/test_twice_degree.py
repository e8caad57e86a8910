"""Tests for the centralized twice-degree scheduler"""
import pytest

from pseudosched.errors import GraphError
from pseudosched.generators import generate, grid_graph, path_graph, random_gnp, star_graph
from pseudosched.models import Graph, build_bfs_tree
from pseudosched.schedule import is_T_pseudo_schedule
from pseudosched.twice_degree import twice_degree, verify_twice_degree_bound


def test_triangle():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    result = twice_degree(g, 0)
    assert result.coloring.colors == (1, 2, 3)
    assert result.tree.parent == (0, 0, 0)


def test_star_center_root():
    result = twice_degree(star_graph(5), 0)
    assert result.coloring.colors == (1, 2, 3, 4, 5, 6)
    assert verify_twice_degree_bound(star_graph(5), result)


def test_path():
    result = twice_degree(path_graph(3), 0)
    assert result.coloring.colors == (1, 2, 3)


def test_single_vertex():
    result = twice_degree(Graph.from_edges(1, []), 0)
    assert result.coloring.colors == (1,)
    assert verify_twice_degree_bound(Graph.from_edges(1, []), result)


def test_tree_is_the_bfs_tree():
    g = grid_graph(4, 5)
    for root in (0, 9, 19):
        assert twice_degree(g, root).tree == build_bfs_tree(g, root)


def test_bound_on_grid_for_every_root():
    g = grid_graph(4, 4)
    for root in g.vertices:
        result = twice_degree(g, root)
        assert result.coloring.max_color <= 2 * g.max_degree
        assert verify_twice_degree_bound(g, result)


@pytest.mark.parametrize('seed', range(10))
def test_bound_on_random_graphs(seed):
    g = random_gnp(16, 0.25, seed)
    for root in (0, 5, 15):
        result = twice_degree(g, root)
        assert verify_twice_degree_bound(g, result)
        assert is_T_pseudo_schedule(g, result.tree, result.coloring)


@pytest.mark.parametrize('cycle_type', ['I', 'II', 'mixed'])
def test_gadgets(cycle_type):
    g = generate('cycle-gadget', k=4, cycle_type=cycle_type).graph
    assert verify_twice_degree_bound(g, twice_degree(g, 0))


def test_forbidden_trace():
    g = grid_graph(3, 3)
    result = twice_degree(g, 4, trace=True)
    steps = result.forbidden_trace
    assert [s.vertex for s in steps][0] == 4
    assert len(steps) == g.n
    levels = [s.level for s in steps]
    assert levels == sorted(levels)
    assert all(s.color not in s.forbidden for s in steps)
    assert steps[0].to_dict() == {'vertex': 4, 'level': 0, 'K': [], 'color': 1}
    assert twice_degree(g, 4).forbidden_trace is None


def test_deterministic():
    g = random_gnp(20, 0.2, 7)
    assert twice_degree(g, 3) == twice_degree(g, 3)


def test_errors():
    with pytest.raises(GraphError):
        twice_degree(path_graph(3), 3)
    with pytest.raises(GraphError):
        twice_degree(Graph.from_edges(4, [(0, 1), (2, 3)]), 0)
