from flask import Blueprint, request, jsonify
import logging

from pseudosched import __version__
from pseudosched.baselines import greedy_strict
from pseudosched.config import derive_seed
from pseudosched.dband.runtime import RunConfig, run_dband
from pseudosched.errors import GraphError, PseudoschedError, TerminationFailure
from pseudosched.generators import generate
from pseudosched.graph_io import coloring_from_dict, graph_from_dict, graph_to_dict
from pseudosched.models.tree import build_bfs_tree, build_dfs_tree, min_valid_d, random_spanning_tree
from pseudosched.schedule import verdict
from pseudosched.twice_degree import twice_degree

schedule_bp = Blueprint('schedule', __name__)
logger = logging.getLogger(__name__)


def _body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise GraphError("request body must be a JSON object")
    return data


def _failure(e):
    client_error = isinstance(e, (PseudoschedError, ValueError, TypeError)) and not isinstance(e, TerminationFailure)
    status = 400 if client_error else 500
    return jsonify({'success': False, 'error': str(e)}), status


@schedule_bp.route('/health', methods=['GET'])
def health():
    return jsonify({'success': True, 'status': 'ok', 'version': __version__}), 200


@schedule_bp.route('/generate', methods=['POST'])
def generate_graph():
    """Generate a graph document"""
    try:
        data = _body()
        params = dict(data.get('params') or {})
        instance = generate(data.get('kind'), seed=int(data.get('seed', 0)), **params)
        return jsonify({
            'success': True,
            'graph': graph_to_dict(instance.graph, instance.tree)
        }), 200

    except Exception as e:
        logger.error(f"Error generating graph: {e}")
        return _failure(e)


@schedule_bp.route('/solve', methods=['POST'])
def solve():
    """Build and verify a schedule for the posted graph"""
    try:
        data = _body()
        g, file_tree = graph_from_dict(data.get('graph') or {})
        g.require_connected()
        algo = data.get('algo', 'twice-degree')
        root = int(data.get('root', 0))
        response = {'success': True, 'algorithm': algo}

        if algo == 'twice-degree':
            result = twice_degree(g, root)
            tree, coloring = result.tree, result.coloring
        elif algo == 'greedy-strict':
            tree, coloring = None, greedy_strict(g, data.get('order')).coloring
        elif algo == 'dband':
            tree_kind = data.get('tree', 'file' if file_tree is not None else 'bfs')
            if tree_kind == 'file' and file_tree is None:
                raise GraphError("tree 'file' needs root and tree_parent in the graph document")
            seed = int(data.get('seed', 0))
            builders = {
                'file': lambda: file_tree,
                'bfs': lambda: build_bfs_tree(g, root),
                'dfs': lambda: build_dfs_tree(g, root),
                'random': lambda: random_spanning_tree(g, root, derive_seed(seed, 'tree')),
            }
            if tree_kind not in builders:
                raise GraphError(f"unknown tree {tree_kind!r}; expected one of {sorted(builders)}")
            tree = builders[tree_kind]()
            d = data.get('d', 'auto')
            d = min_valid_d(g, tree) if d == 'auto' else int(d)
            config = RunConfig(seed=seed, policy=data.get('policy', 'synchronous'), trace=False)
            run = run_dband(g, tree, d, config=config).raise_for_status()
            coloring = run.coloring
            response.update(d=d, statistics=run.statistics())
        else:
            raise GraphError(f"unknown algorithm {algo!r}")

        response['schedule'] = coloring.to_dict()
        if tree is not None:
            response['schedule'].update(root=tree.root, tree_parent=list(tree.parent))
        response['verdict'] = verdict(g, coloring, tree)
        return jsonify(response), 200

    except Exception as e:
        logger.error(f"Error solving schedule: {e}")
        return _failure(e)


@schedule_bp.route('/verify', methods=['POST'])
def verify():
    """Verify a posted coloring against a posted graph"""
    try:
        data = _body()
        g, tree = graph_from_dict(data.get('graph') or {})
        coloring = coloring_from_dict(data.get('schedule') or {}).require_total(g.n)
        return jsonify({
            'success': True,
            'verdict': verdict(g, coloring, tree)
        }), 200

    except Exception as e:
        logger.error(f"Error verifying schedule: {e}")
        return _failure(e)
