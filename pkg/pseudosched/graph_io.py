"""JSON graph and schedule documents, JSON Lines traces, and DOT export."""
import json
from typing import IO, Iterable, Iterator, List, Optional, Tuple, Union

from pseudosched.errors import ColoringError, GraphError
from pseudosched.models.coloring import Coloring
from pseudosched.models.graph import Graph
from pseudosched.models.tree import RootedTree

Document = Union[bytes, str]


def _dumps(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, separators=(',', ': ')) + '\n').encode('utf-8')


def _loads(data: Document, what: str, error=GraphError) -> dict:
    if isinstance(data, bytes):
        data = data.decode('utf-8')
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise error(f"malformed {what} document: {e}") from e
    if not isinstance(doc, dict):
        raise error(f"{what} document must be a JSON object")
    return doc


def _int(value, what) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphError(f"{what} must be an integer, got {value!r}")
    return value


def graph_from_dict(doc: dict) -> Tuple[Graph, Optional[RootedTree]]:
    n = _int(doc.get('n'), 'n')
    edges = doc.get('edges')
    if not isinstance(edges, list):
        raise GraphError("edges must be a list of [u, v] pairs")
    pairs = []
    for edge in edges:
        if not isinstance(edge, list) or len(edge) != 2:
            raise GraphError(f"malformed edge {edge!r}")
        pairs.append((_int(edge[0], 'edge endpoint'), _int(edge[1], 'edge endpoint')))
    g = Graph.from_edges(n, pairs)

    root, tree_parent = doc.get('root'), doc.get('tree_parent')
    if root is None and tree_parent is None:
        return g, None
    if root is None or not isinstance(tree_parent, list):
        raise GraphError("root and tree_parent must be given together")
    t = RootedTree.from_parents(g, _int(root, 'root'), [_int(p, 'tree_parent entry') for p in tree_parent])
    return g, t


def parse_graph(data: Document) -> Tuple[Graph, Optional[RootedTree]]:
    return graph_from_dict(_loads(data, 'graph'))


def graph_to_dict(g: Graph, t: Optional[RootedTree] = None) -> dict:
    doc = g.to_dict()
    doc['root'] = None if t is None else t.root
    doc['tree_parent'] = None if t is None else list(t.parent)
    return doc


def serialize_graph(g: Graph, t: Optional[RootedTree] = None) -> bytes:
    return _dumps(graph_to_dict(g, t))


def coloring_from_dict(doc: dict) -> Coloring:
    colors = doc.get('colors')
    if not isinstance(colors, list):
        raise ColoringError("colors must be a list indexed by vertex ID")
    for k in colors:
        if k is not None and (isinstance(k, bool) or not isinstance(k, int)):
            raise ColoringError(f"color entries must be integers or null, got {k!r}")
    return Coloring.from_list(colors)


def parse_coloring(data: Document) -> Coloring:
    return coloring_from_dict(_loads(data, 'coloring', ColoringError))


def parse_schedule(data: Document, g: Graph) -> Tuple[Coloring, Optional[RootedTree], dict]:
    """Coloring plus the tree the schedule was built on, when the document records one."""
    doc = _loads(data, 'schedule', ColoringError)
    c = coloring_from_dict(doc)
    t = None
    if doc.get('root') is not None and isinstance(doc.get('tree_parent'), list):
        t = RootedTree.from_parents(g, _int(doc['root'], 'root'), doc['tree_parent'])
    return c, t, doc


def serialize_coloring(c: Coloring, t: Optional[RootedTree] = None, **meta) -> bytes:
    doc = dict(meta)
    doc.update(c.to_dict())
    if t is not None:
        doc['root'] = t.root
        doc['tree_parent'] = list(t.parent)
    return _dumps(doc)


def export_dot(g: Graph, t: Optional[RootedTree] = None, c: Optional[Coloring] = None) -> str:
    """Undirected DOT; tree edges solid, non-tree edges dashed, labels "id:color"."""
    lines = ['graph G {']
    for v in g.vertices:
        label = str(v)
        if c is not None:
            k = c[v]
            label = f"{v}:{'?' if k is None else k}"
        shape = ' shape=doublecircle' if t is not None and v == t.root else ''
        lines.append(f'  "{v}" [label="{label}"{shape}];')
    for u, v in g.edges():
        style = 'solid' if t is None or t.is_tree_edge(u, v) else 'dashed'
        lines.append(f'  "{u}" -- "{v}" [style={style}];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


# Traces

def write_trace(entries: Iterable[dict], fh: IO[str]) -> int:
    count = 0
    for entry in entries:
        fh.write(json.dumps(entry, sort_keys=True) + '\n')
        count += 1
    return count


def iter_trace(lines: Iterable[str]) -> Iterator[dict]:
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as e:
            raise GraphError(f"malformed trace line {number}: {e}") from e


def read_trace(fh: IO[str]) -> List[dict]:
    return list(iter_trace(fh))
