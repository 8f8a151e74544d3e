from agentplay.nav.graph import (
    NavGraph,
    SearchResult,
    UnknownNode,
    add_observed_geometry,
    astar,
    distances,
    find_path,
    from_grid,
    frontier,
    next_exploration_target,
    path_cost,
    set_blocked,
)
from agentplay.nav.mesh import MeshError, TriangleMesh, dump_mesh, from_mesh, load_mesh, parse_mesh

__all__ = [
    "NavGraph",
    "SearchResult",
    "UnknownNode",
    "add_observed_geometry",
    "astar",
    "distances",
    "find_path",
    "from_grid",
    "frontier",
    "next_exploration_target",
    "path_cost",
    "set_blocked",
    "MeshError",
    "TriangleMesh",
    "dump_mesh",
    "from_mesh",
    "load_mesh",
    "parse_mesh",
]
