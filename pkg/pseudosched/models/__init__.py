from pseudosched.models.coloring import UNKNOWN, Coloring
from pseudosched.models.graph import Graph
from pseudosched.models.tree import (
    KinshipView,
    RootedTree,
    build_bfs_tree,
    build_dfs_tree,
    kinship,
    min_valid_d,
    random_spanning_tree,
)

__all__ = [
    'UNKNOWN', 'Coloring', 'Graph', 'KinshipView', 'RootedTree', 'build_bfs_tree',
    'build_dfs_tree', 'kinship', 'min_valid_d', 'random_spanning_tree',
]
