"""Navigation graphs over walkable space, with A* and frontier exploration.

Grid graphs use the cell coordinate ``(x, y)`` as node id, where ``x`` is the
column and ``y`` the row (``y`` grows downwards). Mesh graphs use triangle
indices.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

NodeId = Hashable

NEIGHBOURS_4 = ((0, -1), (-1, 0), (0, 1), (1, 0))


class UnknownNode(KeyError):
    pass


class NavGraph:
    """Undirected weighted graph with dynamic ``blocked`` and ``explored`` flags.

    ``walls`` is only tracked for graphs grown from observations. There, a cell
    that is neither a node nor a known wall is unknown territory, which is what
    makes an explored node a frontier.
    """

    def __init__(self, unit_grid: bool = False, open_world: bool = False) -> None:
        self.nodes: dict[NodeId, tuple[float, float]] = {}
        self.adj: dict[NodeId, dict[NodeId, float]] = {}
        self.blocked: set[NodeId] = set()
        self.explored: set[NodeId] = set()
        self.unit_grid = unit_grid
        self.walls: set[tuple[int, int]] | None = set() if open_world else None

    def __contains__(self, node: NodeId) -> bool:
        return node in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.adj.values()) // 2

    def add_node(self, node: NodeId, pos: Sequence[float]) -> bool:
        if node in self.nodes:
            return False
        self.nodes[node] = tuple(pos)  # type: ignore[assignment]
        self.adj[node] = {}
        return True

    def add_edge(self, a: NodeId, b: NodeId, weight: float | None = None) -> None:
        self._require(a)
        self._require(b)
        if weight is None:
            weight = math.dist(self.nodes[a], self.nodes[b])
        if weight < 0:
            raise ValueError("edge weights must be non-negative")
        self.adj[a][b] = weight
        self.adj[b][a] = weight

    def neighbours(self, node: NodeId) -> dict[NodeId, float]:
        self._require(node)
        return self.adj[node]

    def edges(self) -> set[frozenset]:
        return {frozenset((a, b)) for a, nbrs in self.adj.items() for b in nbrs}

    def structure(self) -> tuple[dict[NodeId, tuple[float, float]], set[frozenset]]:
        """Nodes and edges only, for structural comparison of two graphs."""
        return dict(self.nodes), self.edges()

    def copy(self) -> "NavGraph":
        g = NavGraph(self.unit_grid)
        g.nodes = dict(self.nodes)
        g.adj = {k: dict(v) for k, v in self.adj.items()}
        g.blocked = set(self.blocked)
        g.explored = set(self.explored)
        g.walls = None if self.walls is None else set(self.walls)
        return g

    def _require(self, node: NodeId) -> None:
        if node not in self.nodes:
            raise UnknownNode(node)

    def __repr__(self) -> str:
        return f"NavGraph(nodes={len(self.nodes)}, edges={self.edge_count}, blocked={len(self.blocked)})"


def from_grid(walkable: Any) -> NavGraph:
    """One node per walkable cell, unit edges between 4-adjacent ones.

    ``walkable`` is any row-major 2D array of truthy values (nested lists or a
    numpy array).
    """
    rows = [list(map(bool, row)) for row in walkable]
    if not rows or not rows[0]:
        raise ValueError("grid must be non-empty")
    g = NavGraph(unit_grid=True)
    for y, row in enumerate(rows):
        for x, ok in enumerate(row):
            if ok:
                g.add_node((x, y), (x, y))
    for (x, y) in g.nodes:
        for nb in ((x + 1, y), (x, y + 1)):
            if nb in g.nodes:
                g.add_edge((x, y), nb, 1.0)
    return g


def set_blocked(graph: NavGraph, node: NodeId, flag: bool) -> NavGraph:
    graph._require(node)
    if flag:
        graph.blocked.add(node)
    else:
        graph.blocked.discard(node)
    return graph


# -- geometry grown from observations ---------------------------------------

# Objects that make their own cell impassable until their state changes.
def _blocks(entity: Any) -> bool:
    if entity.type == "door":
        return not entity.properties.get("isOpen", False)
    if entity.type == "shrine":
        return not entity.properties.get("cleansed", False)
    return False


def add_observed_geometry(graph: NavGraph, obs: Any) -> NavGraph:
    """Grow ``graph`` in place with the cells revealed by an observation.

    Every non-wall entity stands on a walkable cell; ``wall`` entities mark
    cells as known-impassable. Doors and shrines are nodes whose blocked flag
    follows their observed state. Nodes are never removed.
    """
    if graph.walls is None:
        graph.walls = set()
    level = obs.agent_properties.get("currentLevel")
    nodes = graph.nodes
    fresh: list[tuple[int, int]] = []
    cells = [(obs.agent_position, None)]
    for e in obs.entities.values():
        if level is not None and e.properties.get("level", level) != level:
            continue
        if e.type == "wall":
            graph.walls.add(e.position)
            continue
        cells.append((e.position, e))
    for pos, e in cells:
        pos = (int(pos[0]), int(pos[1]))
        if pos not in nodes:
            graph.add_node(pos, pos)
            fresh.append(pos)
        if e is not None and e.type in ("door", "shrine"):
            if _blocks(e):
                graph.blocked.add(pos)
            else:
                graph.blocked.discard(pos)
    for (x, y) in fresh:
        for dx, dy in NEIGHBOURS_4:
            nb = (x + dx, y + dy)
            if nb in nodes:
                graph.add_edge((x, y), nb, 1.0)
        graph.explored.add((x, y))
    return graph


# -- search ------------------------------------------------------------------

@dataclass
class SearchResult:
    path: list[NodeId] | None
    cost: float
    expanded: int


def _heuristic(graph: NavGraph, goal: NodeId):
    gx, gy = graph.nodes[goal]
    if graph.unit_grid:
        return lambda p: abs(p[0] - gx) + abs(p[1] - gy)
    return lambda p: math.hypot(p[0] - gx, p[1] - gy)


def astar(graph: NavGraph, src: NodeId, dst: NodeId, *, use_heuristic: bool = True) -> SearchResult:
    """A* from ``src`` to ``dst``; with ``use_heuristic=False`` this is Dijkstra.

    Blocked nodes are never entered, except that ``src`` itself may be
    blocked. Among equal f-scores the lower node id is popped first.
    """
    graph._require(src)
    graph._require(dst)
    if dst in graph.blocked and dst != src:
        return SearchResult(None, math.inf, 0)
    h = _heuristic(graph, dst) if use_heuristic else (lambda p: 0.0)
    nodes, adj, blocked = graph.nodes, graph.adj, graph.blocked
    g_score = {src: 0.0}
    came: dict[NodeId, NodeId] = {}
    closed: set[NodeId] = set()
    heap = [(h(nodes[src]), src)]
    expanded = 0
    while heap:
        f, cur = heapq.heappop(heap)
        if cur in closed:
            continue
        closed.add(cur)
        expanded += 1
        if cur == dst:
            path = [cur]
            while cur in came:
                cur = came[cur]
                path.append(cur)
            path.reverse()
            return SearchResult(path, g_score[dst], expanded)
        g = g_score[cur]
        for nb, w in adj[cur].items():
            if nb in closed or nb in blocked:
                continue
            ng = g + w
            if ng < g_score.get(nb, math.inf):
                g_score[nb] = ng
                came[nb] = cur
                heapq.heappush(heap, (ng + h(nodes[nb]), nb))
    return SearchResult(None, math.inf, expanded)


def find_path(graph: NavGraph, src: NodeId, dst: NodeId) -> list[NodeId] | None:
    return astar(graph, src, dst).path


def path_cost(graph: NavGraph, path: Sequence[NodeId]) -> float:
    return sum(graph.adj[a][b] for a, b in zip(path, path[1:]))


def distances(graph: NavGraph, src: NodeId) -> tuple[dict[NodeId, float], dict[NodeId, NodeId]]:
    """Dijkstra shortest-path costs and predecessors from ``src``."""
    graph._require(src)
    dist = {src: 0.0}
    prev: dict[NodeId, NodeId] = {}
    heap = [(0.0, src)]
    done: set[NodeId] = set()
    adj, blocked = graph.adj, graph.blocked
    while heap:
        d, cur = heapq.heappop(heap)
        if cur in done:
            continue
        done.add(cur)
        for nb, w in adj[cur].items():
            if nb in blocked or nb in done:
                continue
            nd = d + w
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                prev[nb] = cur
                heapq.heappush(heap, (nd, nb))
    return dist, prev


def unwind(prev: dict[NodeId, NodeId], src: NodeId, dst: NodeId) -> list[NodeId]:
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def is_frontier(graph: NavGraph, node: NodeId) -> bool:
    if node not in graph.explored:
        return False
    if any(nb not in graph.explored for nb in graph.adj[node]):
        return True
    if graph.walls is not None:
        x, y = node  # type: ignore[misc]
        for dx, dy in NEIGHBOURS_4:
            cell = (x + dx, y + dy)
            if cell not in graph.nodes and cell not in graph.walls:
                return True
    return False


def frontier(graph: NavGraph) -> list[NodeId]:
    return [n for n in graph.explored if n not in graph.blocked and is_frontier(graph, n)]


def exploration_path(graph: NavGraph, pos: NodeId) -> list[NodeId] | None:
    """Path from ``pos`` to the reachable frontier node closest to it.

    Ties on path cost go to the smallest node id.
    """
    graph._require(pos)
    dist, prev = distances(graph, pos)
    best: tuple[float, Any] | None = None
    for node, d in dist.items():
        if node in graph.blocked and node != pos:
            continue
        if not is_frontier(graph, node):
            continue
        if best is None or (d, node) < best:
            best = (d, node)
    if best is None:
        return None
    return unwind(prev, pos, best[1])


def next_exploration_target(graph: NavGraph, pos: NodeId) -> NodeId | None:
    path = exploration_path(graph, pos)
    return None if path is None else path[-1]


def neighbours_of_cell(cell: tuple[int, int]) -> Iterable[tuple[int, int]]:
    x, y = cell
    return [(x + dx, y + dy) for dx, dy in NEIGHBOURS_4]
