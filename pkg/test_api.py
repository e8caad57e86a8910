"""Tests for the JSON HTTP service"""
import pytest

from pseudosched import __version__
from pseudosched.main import create_app


@pytest.fixture
def client():
    app = create_app()
    app.config['TESTING'] = True
    return app.test_client()


def test_root_and_health(client):
    """Test the root endpoint and the health check"""
    response = client.get('/')
    assert response.status_code == 200
    assert response.get_json()['version'] == __version__

    response = client.get('/api/health')
    assert response.status_code == 200
    assert response.get_json() == {'success': True, 'status': 'ok', 'version': __version__}


def test_generate(client):
    response = client.post('/api/generate', json={'kind': 'path', 'params': {'n': 3}})
    assert response.status_code == 200
    graph = response.get_json()['graph']
    assert graph['n'] == 3
    assert graph['edges'] == [[0, 1], [1, 2]]
    assert graph['tree_parent'] is None


def test_generate_gadget_includes_tree(client):
    response = client.post('/api/generate', json={'kind': 'cycle-gadget', 'params': {'k': 2, 'cycle_type': 'II'}})
    graph = response.get_json()['graph']
    assert graph['root'] == 0
    assert len(graph['tree_parent']) == graph['n']


def test_solve_twice_degree(client):
    graph = client.post('/api/generate', json={'kind': 'grid', 'params': {'rows': 3, 'cols': 3}}).get_json()['graph']
    response = client.post('/api/solve', json={'graph': graph, 'algo': 'twice-degree', 'root': 4})
    assert response.status_code == 200
    data = response.get_json()
    assert data['verdict']['t_pseudo'] is True
    assert data['schedule']['root'] == 4
    assert max(data['schedule']['colors']) <= 8


def test_solve_dband_on_star(client):
    graph = {'n': 4, 'edges': [[0, 1], [0, 2], [0, 3]]}
    response = client.post('/api/solve', json={'graph': graph, 'algo': 'dband', 'seed': 1})
    assert response.status_code == 200
    data = response.get_json()
    assert data['d'] == 2
    assert sorted(data['schedule']['colors']) == [0, 1, 3, 5]
    assert data['statistics']['status'] == 'terminated'
    assert data['verdict']['pseudo'] is True


def test_solve_greedy(client):
    graph = {'n': 3, 'edges': [[0, 1], [1, 2], [0, 2]]}
    data = client.post('/api/solve', json={'graph': graph, 'algo': 'greedy-strict'}).get_json()
    assert data['schedule']['colors'] == [1, 2, 3]
    assert data['verdict']['strict'] is True
    assert data['verdict']['t_pseudo'] is None


def test_verify(client):
    graph = {'n': 3, 'edges': [[0, 1], [1, 2]]}
    response = client.post('/api/verify', json={'graph': graph, 'schedule': {'colors': [1, 2, 1]}})
    assert response.status_code == 200
    assert response.get_json()['verdict']['pseudo'] is False


def test_client_errors(client):
    """Test malformed requests come back as 400"""
    response = client.post('/api/solve', data='not json', content_type='text/plain')
    assert response.status_code == 400
    assert response.get_json()['success'] is False

    response = client.post('/api/solve', json={'graph': {'n': 2, 'edges': [[0, 0]]}})
    assert response.status_code == 400

    response = client.post('/api/solve', json={'graph': {'n': 2, 'edges': [[0, 1]]}, 'algo': 'simulated-annealing'})
    assert response.status_code == 400

    response = client.post('/api/verify', json={'graph': {'n': 3, 'edges': [[0, 1], [1, 2]]},
                                                 'schedule': {'colors': [1, None, 2]}})
    assert response.status_code == 400

    response = client.post('/api/generate', json={'kind': 'hypercube', 'params': {'n': 4}})
    assert response.status_code == 400


@pytest.mark.parametrize('tree', ['bfs', 'dfs', 'random'])
def test_solve_dband_tree_kinds(client, tree):
    graph = client.post('/api/generate', json={'kind': 'grid', 'params': {'rows': 3, 'cols': 3}}).get_json()['graph']
    response = client.post('/api/solve', json={'graph': graph, 'algo': 'dband', 'tree': tree, 'seed': 2})
    assert response.status_code == 200
    data = response.get_json()
    assert data['verdict']['t_pseudo'] is True
    assert len(data['schedule']['tree_parent']) == 9


def test_solve_rejects_unknown_tree(client):
    graph = {'n': 3, 'edges': [[0, 1], [1, 2]]}
    response = client.post('/api/solve', json={'graph': graph, 'algo': 'dband', 'tree': 'bsf'})
    assert response.status_code == 400
    assert 'bsf' in response.get_json()['error']

    response = client.post('/api/solve', json={'graph': graph, 'algo': 'greedy-strict', 'order': {'a': 1}})
    assert response.status_code == 400
