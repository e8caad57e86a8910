"""Tests for the d-band protocol handlers, the simulated runtime and the dependency analysis"""
import pytest

from pseudosched.dband import POLICIES, RunConfig, check_color_bounds, find_dependency_cycles, palette, run_dband
from pseudosched.dband.agents import (
    Event,
    VertexContext,
    handle_acquire,
    handle_assign,
    handle_report,
    start_acquire,
    start_assign,
    start_report,
)
from pseudosched.dband.messages import MessageKind, dep_put, dep_req, put_col, req_col, rpt_col, rpt_par
from pseudosched.errors import BudgetExhaustedError, ParameterError
from pseudosched.generators import CYCLE_TYPES, generate, grid_graph, path_graph, random_gnp, random_geometric, star_graph
from pseudosched.models import Graph, RootedTree, build_bfs_tree, build_dfs_tree, min_valid_d, random_spanning_tree
from pseudosched.schedule import is_T_pseudo_schedule


def context(vertex, parent, children=(), stepparents=(), stepchildren=(), level=1, d=3, i_max=4):
    return VertexContext(
        vertex=vertex,
        parent=parent,
        children=tuple(children),
        stepparents=tuple(stepparents),
        stepchildren=tuple(stepchildren),
        level=level,
        d=d,
        i_max=i_max,
    )


def test_palette():
    assert palette(2, 3, 3) == (2, 5, 8, 11)
    assert palette(0, 4, 2) == (0, 4, 8)
    assert palette(3, 3, 2) == palette(0, 3, 2)
    with pytest.raises(ParameterError):
        palette(1, 0, 2)


def test_message_shapes():
    with pytest.raises(ValueError):
        req_col(1, 1, set())
    assert put_col(0, 2, 2, None).payload() == {'x': 2, 'k': None}
    assert str(rpt_col(1, 3, None, 1)) == 'RPT-COL(?, 1) 1->3'
    assert req_col(3, 1, {5, 2}).payload() == {'L': [2, 5]}


# Acquire

def test_acquire_without_stepchildren_requests_immediately():
    state, out = start_acquire(context(3, 1, level=2))
    assert out == [req_col(3, 1, set())]
    assert state.phase == 'await'


def test_acquire_collects_stepchild_color():
    state, out = start_acquire(context(2, 0, children=(7,), stepchildren=(9,)))
    assert out == []
    assert state.phase == 'collect'

    after, out = handle_acquire(state, rpt_par(9, 2, 5, 4))
    assert out == [req_col(2, 0, {5})]
    assert after.phase == 'await'
    assert after.excluded == {5}
    # Handlers never touch their input
    assert state.phase == 'collect' and state.excluded == set()


def test_acquire_breaks_type_one_cycle_on_own_id():
    state, _ = start_acquire(context(2, 0, stepchildren=(9,)))
    same, out = handle_acquire(state, rpt_par(9, 2, None, 7))
    assert out == [] and same.events == []

    after, out = handle_acquire(state, rpt_par(9, 2, None, 2))
    assert after.events == [Event('cycle-break', 2, cycle_type='I', at=2)]
    assert out == [req_col(2, 0, set())]


def test_acquire_holds_reverse_dependence_while_collecting():
    state, _ = start_acquire(context(2, 0, children=(7,), stepchildren=(9,)))
    state, out = handle_acquire(state, dep_req(7, 2, 1))
    assert out == [dep_req(2, 7, 1)]
    assert state.awaited == {1, 2}

    state, out = handle_acquire(state, rpt_par(9, 2, 5, 4))
    assert out == [] and state.phase == 'collect'

    state, out = handle_acquire(state, rpt_par(7, 2, 3, 1))
    assert out == [req_col(2, 0, {3, 5})]
    assert state.settled == {1, 9}


def test_acquire_hands_reverse_dependence_to_parent_once_requested():
    state, out = start_acquire(context(2, 0, children=(7,)))
    assert out == [req_col(2, 0, set())]

    state, out = handle_acquire(state, dep_req(7, 2, 1))
    assert out == [dep_put(2, 0, 1)]
    state, out = handle_acquire(state, rpt_par(7, 2, 3, 1))
    assert out == [rpt_col(2, 0, 3, 1), rpt_col(2, 0, None, 1)]
    _, out = handle_acquire(state, rpt_par(7, 2, None, 1))
    assert out == []


def test_acquire_announces_color():
    state, _ = start_acquire(context(2, 0, children=(7,), stepparents=(3,), stepchildren=(9,)))
    state, _ = handle_acquire(state, rpt_par(9, 2, 5, 4))

    ignored, out = handle_acquire(state, put_col(0, 2, 5, 4))
    assert out == [] and ignored.phase == 'await'

    done, out = handle_acquire(state, put_col(0, 2, 2, 4))
    assert done.color == 4
    assert out == [rpt_col(2, 7, 4, 2), rpt_col(2, 9, 4, 2), rpt_col(2, 3, 4, 2)]
    assert done.events == [Event('colored', 2, color=4)]

    _, out = handle_acquire(done, dep_req(7, 2, 1))
    assert out == []


# Assign

def test_assign_hands_out_palette_colors_in_request_order():
    state, out = start_assign(context(0, None, children=(1, 2, 3), level=0, d=2, i_max=8))
    assert out == []
    state, out = handle_assign(state, req_col(2, 0, set()))
    assert out == [put_col(0, 2, 2, 1)]
    state, out = handle_assign(state, req_col(1, 0, set()))
    assert out == [put_col(0, 1, 1, 3)]
    state, out = handle_assign(state, req_col(3, 0, {5}))
    assert out == [put_col(0, 3, 3, 7)]
    assert state.done


def test_assign_waits_for_stepchildren():
    state, out = start_assign(context(4, 0, children=(6,), stepchildren=(8,)))
    assert out == [dep_put(4, 8, 4)]
    state, out = handle_assign(state, req_col(6, 4, set()))
    assert out == []
    state, out = handle_assign(state, rpt_col(8, 4, 7, 8))
    assert out == [put_col(4, 6, 6, 2), put_col(4, 8, 6, 2), put_col(4, 8, 4, None)]
    assert state.forbidden == {2, 7}
    assert state.done


def test_assign_offers_no_reversal_to_smaller_stepchild():
    _, out = start_assign(context(4, 0, children=(9,), stepchildren=(8,)))
    assert out == []


def test_assign_honours_reverse_dependence():
    state, _ = start_assign(context(4, 0, children=(6,), stepchildren=(8,)))
    state, out = handle_assign(state, dep_put(6, 4, 5))
    assert out == [dep_put(4, 6, 5)]
    assert state.reverse == {6: {5}}
    state, _ = handle_assign(state, req_col(6, 4, set()))
    state, out = handle_assign(state, rpt_col(8, 4, 7, 8))
    assert out == [] and not state.done

    state, out = handle_assign(state, rpt_col(6, 4, 2, 5))
    assert out == []
    state, out = handle_assign(state, rpt_col(6, 4, None, 5))
    assert out == [put_col(4, 6, 6, 5), put_col(4, 8, 6, 5), put_col(4, 8, 4, None)]


def test_assign_breaks_type_two_cycle_on_acknowledgement():
    state, _ = start_assign(context(4, 0, children=(6, 9), stepchildren=(8,)))
    state, out = handle_assign(state, dep_put(8, 4, 4))
    assert out == []
    assert state.deferring == {8}
    assert state.events == [Event('cycle-break', 6, cycle_type='II', at=4)]

    # 9 still waits for the color of 8
    state, out = handle_assign(state, req_col(9, 4, set()))
    assert out == []
    state, out = handle_assign(state, req_col(6, 4, set()))
    assert out == [put_col(4, 6, 6, 2), put_col(4, 8, 6, 2), put_col(4, 8, 4, None)]
    assert not state.done

    state, out = handle_assign(state, rpt_col(8, 4, 5, 8))
    assert out == [put_col(4, 9, 9, 8), put_col(4, 8, 9, 8)]
    assert state.done


# Report

def test_report_registers_smaller_stepparents():
    state, out = start_report(context(5, 2, stepparents=(1, 3), level=2))
    assert out == [dep_req(5, 2, 1)]
    assert state.type_one == set()


def test_report_breaks_type_one_cycle_on_acknowledgement():
    state, _ = start_report(context(5, 2, stepparents=(1, 3), level=2))
    _, out = handle_report(state, dep_req(2, 5, 7))
    assert out == []

    state, out = handle_report(state, dep_req(2, 5, 1))
    assert out == [rpt_par(5, 1, None, 1)]
    assert state.type_one == {1}
    _, out = handle_report(state, dep_req(2, 5, 1))
    assert out == []

    state, out = handle_report(state, rpt_col(1, 5, 4, 1))
    assert out == [rpt_par(5, 2, 4, 1)]
    assert state.type_one == set()


def test_report_answers_late_acknowledgement_with_known_color():
    state, _ = start_report(context(5, 2, stepparents=(1,), level=2))
    state, out = handle_report(state, rpt_col(1, 5, 4, 1))
    assert out == []
    assert state.stepparent_colors == {1: 4}

    state, out = handle_report(state, dep_req(2, 5, 1))
    assert out == [rpt_par(5, 2, 4, 1)]
    assert state.type_one == set()


def test_report_relays_parent_color_to_stepparents():
    state, _ = start_report(context(5, 2, stepparents=(1, 3), level=2))
    _, out = handle_report(state, rpt_col(2, 5, 4, 2))
    assert out == [rpt_par(5, 1, 4, 2), rpt_par(5, 3, 4, 2)]


def test_report_reverse_put_dependence():
    state, _ = start_report(context(5, 2, stepparents=(3,), level=2))
    state, out = handle_report(state, dep_put(3, 5, 3))
    assert out == [dep_put(5, 2, 3)]
    state, out = handle_report(state, dep_put(2, 5, 3))
    assert out == [dep_put(5, 3, 3)]
    assert state.type_two == {3}

    state, out = handle_report(state, put_col(3, 5, 9, 6))
    assert out == [rpt_col(5, 2, 6, 3)]
    state, out = handle_report(state, put_col(3, 5, 3, None))
    assert out == [rpt_col(5, 2, None, 3)]
    assert state.type_two == set()
    _, out = handle_report(state, put_col(3, 5, 4, 7))
    assert out == []


def test_report_passes_parent_reversal_to_children():
    state, _ = start_report(context(5, 2, children=(7, 8), level=2))
    _, out = handle_report(state, dep_put(2, 5, 1))
    assert out == [dep_req(5, 7, 1), dep_req(5, 8, 1)]


# Runtime

def test_path_colors_follow_levels():
    g = path_graph(3)
    run = run_dband(g, build_bfs_tree(g, 0), 3)
    assert run.terminated
    assert run.coloring.colors == (0, 1, 2)
    assert 'DEP-REQ' not in run.messages and 'DEP-PUT' not in run.messages


@pytest.mark.parametrize('seed', range(5))
def test_star_uses_every_other_color(seed):
    g = star_graph(5)
    run = run_dband(g, build_bfs_tree(g, 0), 2, seed=seed)
    assert sorted(run.coloring.colors[1:]) == [1, 3, 5, 7, 9]
    assert run.coloring.h_max == 10


def test_cycle_break_is_traced():
    instance = generate('cycle-gadget', k=2, cycle_type='I')
    g, t = instance.graph, instance.tree
    run = run_dband(g, t, min_valid_d(g, t))
    assert run.terminated
    breaks = [e for e in run.trace if e.get('event') == 'cycle-break' and e['type'] == 'I']
    assert breaks and breaks[0]['vertex'] == 1
    own_id = [e for e in run.trace if e.get('kind') == 'RPT-PAR' and e['dst'] == 1 and e['payload'] == {'k': None, 'w': 1}]
    assert own_id and own_id[0]['step'] <= breaks[0]['step']


@pytest.mark.parametrize('cycle_type', CYCLE_TYPES)
@pytest.mark.parametrize('k', [2, 3, 4, 5])
@pytest.mark.parametrize('seed', range(5))
def test_gadgets_terminate(cycle_type, k, seed):
    instance = generate('cycle-gadget', k=k, cycle_type=cycle_type)
    g, t = instance.graph, instance.tree
    d = min_valid_d(g, t)
    run = run_dband(g, t, d, seed=seed).raise_for_status()
    assert is_T_pseudo_schedule(g, t, run.coloring)
    assert all(run.coloring[v] % d == t.level[v] % d for v in g.vertices)
    assert sum(run.cycle_breaks.values()) >= 1
    cycle_minima = {min(c.vertices) for c in find_dependency_cycles(g, t)}
    assert set(run.break_vertices) <= cycle_minima


@pytest.mark.parametrize('seed', range(4))
def test_grid_trees_terminate(seed):
    g = grid_graph(4, 4)
    for t in (build_bfs_tree(g, 0), build_bfs_tree(g, 5)):
        d = min_valid_d(g, t)
        run = run_dband(g, t, d, seed=seed).raise_for_status()
        assert is_T_pseudo_schedule(g, t, run.coloring)
        assert all(run.coloring[v] % d == t.level[v] % d for v in g.vertices)


def _rooted(n, edges, parents):
    g = Graph.from_edges(n, edges)
    return g, RootedTree.from_parents(g, 0, parents)


CROSSED_REQUESTS = _rooted(
    8,
    [(0, 3), (0, 4), (0, 6), (0, 7), (1, 3), (1, 5), (1, 6), (2, 3), (2, 4), (2, 6), (2, 7), (3, 5), (3, 7),
     (4, 5), (5, 7)],
    (0, 6, 7, 0, 2, 3, 0, 0),
)

CHAINED_REVERSALS = _rooted(
    7,
    [(0, 3), (0, 6), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 6), (3, 5), (3, 6), (4, 6), (5, 6)],
    (0, 5, 6, 0, 6, 3, 0),
)


@pytest.mark.parametrize('instance', [CROSSED_REQUESTS, CHAINED_REVERSALS], ids=['crossed', 'chained'])
@pytest.mark.parametrize('policy', POLICIES)
@pytest.mark.parametrize('seed', range(6))
def test_ascending_dependences_terminate(instance, policy, seed):
    """Test instances whose dependences point up the vertex order in several places"""
    g, t = instance
    d = min_valid_d(g, t)
    assert d == 4
    run = run_dband(g, t, d, config=RunConfig(seed=seed, policy=policy)).raise_for_status()
    assert is_T_pseudo_schedule(g, t, run.coloring)
    assert all(run.coloring[v] % d == t.level[v] % d for v in g.vertices)


def _graphs():
    gadget = generate('cycle-gadget', k=4, cycle_type='mixed').graph
    return {
        'grid': grid_graph(4, 4),
        'gnp': random_gnp(12, 0.3, seed=7),
        'geometric': random_geometric(16, 0.4, seed=3),
        'gadget': gadget,
    }


GRAPHS = _graphs()
TREES = {
    'bfs': lambda g, seed: build_bfs_tree(g, 0),
    'dfs': lambda g, seed: build_dfs_tree(g, 0),
    'random': lambda g, seed: random_spanning_tree(g, 0, seed),
}


@pytest.mark.parametrize('graph', sorted(GRAPHS))
@pytest.mark.parametrize('tree', sorted(TREES))
@pytest.mark.parametrize('policy', POLICIES)
@pytest.mark.parametrize('seed', range(3))
def test_any_rooted_tree_terminates(graph, tree, policy, seed):
    g = GRAPHS[graph]
    t = TREES[tree](g, seed)
    d = min_valid_d(g, t)
    run = run_dband(g, t, d, config=RunConfig(seed=seed, policy=policy)).raise_for_status()
    assert is_T_pseudo_schedule(g, t, run.coloring)
    assert all(run.coloring[v] % d == t.level[v] % d for v in g.vertices)


@pytest.mark.parametrize('policy', POLICIES)
def test_policies_terminate_on_star(policy):
    g = star_graph(6)
    config = RunConfig(seed=3, policy=policy)
    run = run_dband(g, build_bfs_tree(g, 0), 2, config=config)
    assert run.terminated
    assert is_T_pseudo_schedule(g, build_bfs_tree(g, 0), run.coloring)


def test_runs_are_deterministic():
    instance = generate('cycle-gadget', k=3, cycle_type='mixed')
    g, t = instance.graph, instance.tree
    first = run_dband(g, t, 3, seed=42)
    second = run_dband(g, t, 3, seed=42)
    assert first.trace == second.trace
    assert first.statistics() == second.statistics()


def test_budget_exhaustion():
    g = star_graph(3)
    run = run_dband(g, build_bfs_tree(g, 0), 2, budget=1)
    assert run.status == 'budget-exhausted'
    with pytest.raises(BudgetExhaustedError) as excinfo:
        run.raise_for_status()
    assert excinfo.value.uncolored


def test_invalid_parameters():
    g = path_graph(3)
    with pytest.raises(ParameterError):
        run_dband(g, build_bfs_tree(g, 0), 0)
    with pytest.raises(ParameterError):
        RunConfig(policy='lifo')
    with pytest.raises(ParameterError):
        RunConfig(budget=0)


def test_trace_entries():
    g = path_graph(3)
    run = run_dband(g, build_bfs_tree(g, 0), 3)
    deliveries = [e for e in run.trace if 'kind' in e]
    assert len(deliveries) == run.message_count
    assert {e['kind'] for e in deliveries} <= {kind.value for kind in MessageKind}
    colored = [e for e in run.trace if e.get('event') == 'colored']
    assert sorted(e['vertex'] for e in colored) == [0, 1, 2]
    assert run_dband(g, build_bfs_tree(g, 0), 3, config=RunConfig(trace=False)).trace is None


# Analysis

@pytest.mark.parametrize('k', [2, 3, 5])
def test_dependency_cycles_of_gadgets(k):
    for cycle_type in ('I', 'II'):
        cycles = find_dependency_cycles(*_gadget(k, cycle_type))
        assert [(c.type, c.level, len(c.vertices)) for c in cycles] == [('I', 1, k), ('II', 2, k)]
    mixed = find_dependency_cycles(*_gadget(k, 'mixed'))
    assert [(c.type, c.level) for c in mixed] == [('mixed', 2)]


def _gadget(k, cycle_type):
    instance = generate('cycle-gadget', k=k, cycle_type=cycle_type)
    return instance.graph, instance.tree


def test_no_dependency_cycles_on_a_path():
    g = path_graph(6)
    assert find_dependency_cycles(g, build_bfs_tree(g, 0)) == []


def test_dependency_cycles_stay_on_one_level():
    g = grid_graph(4, 4)
    for t in (build_dfs_tree(g, 0), random_spanning_tree(g, 0, 1)):
        for cycle in find_dependency_cycles(g, t, max_length=6):
            assert len({t.level[v] for v in cycle.vertices}) == 1


def test_bounds_on_star():
    g = star_graph(10)
    t = build_bfs_tree(g, 0)
    run = run_dband(g, t, 2)
    bounds = check_color_bounds(g, t, 2, run.coloring)
    assert (bounds.h, bounds.lower, bounds.upper) == (20, 19, 36)
    assert bounds.applicable and bounds.passed


def test_bounds_on_path():
    g = path_graph(6)
    t = build_bfs_tree(g, 0)
    run = run_dband(g, t, 3)
    assert run.coloring.colors == (0, 1, 2, 0, 1, 2)
    bounds = check_color_bounds(g, t, 3, run.coloring)
    assert (bounds.lower, bounds.upper) == (3, 6)
    assert bounds.passed
