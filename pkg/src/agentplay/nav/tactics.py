"""navigateTo / explore tactics that turn graph search into movement keys.

Both work on the agent's on-the-fly graph for its current level
(``BeliefState.graph``) and recompute at most once per cycle.
"""

from __future__ import annotations

from typing import Any, Callable

from agentplay.core.tactics import Action
from agentplay.nav.graph import NEIGHBOURS_4, astar, distances, exploration_path, unwind

Pos = tuple[int, int]

MOVE_KEYS = {(0, -1): "w", (-1, 0): "a", (0, 1): "s", (1, 0): "d"}
KEY_DELTAS = {k: d for d, k in MOVE_KEYS.items()}


def step_key(src: Pos, dst: Pos) -> str:
    return MOVE_KEYS[(dst[0] - src[0], dst[1] - src[1])]


def adjacent(a: Pos, b: Pos) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def plan_path(bs: Any, target: Pos, *, next_to: bool = False) -> list[Pos] | None:
    """Shortest known path onto ``target``, or onto a free cell beside it."""

    def compute() -> list[Pos] | None:
        g = bs.graph
        src = bs.pos
        if src not in g:
            return None
        if not next_to:
            if target not in g:
                return None
            return astar(g, src, target).path
        goals = {(target[0] + dx, target[1] + dy) for dx, dy in NEIGHBOURS_4}
        if src in goals:
            return [src]
        goals = {c for c in goals if c in g and c not in g.blocked}
        if not goals:
            return None
        dist, prev = distances(g, src)
        reached = [(dist[c], c) for c in goals if c in dist]
        if not reached:
            return None
        return unwind(prev, src, min(reached)[1])

    return bs.cached(("plan", target, next_to), compute)


def navigate_to(
    target: Callable[[Any], Pos | None],
    *,
    next_to: bool = False,
    name: str = "navigateTo",
) -> Action:
    """Move one step along a known path to wherever ``target(belief)`` points.

    Enabled only when the target position is believed and a path to it is
    known; otherwise a surrounding FIRSTof falls through to exploration.
    """

    def path_of(bs: Any) -> list[Pos] | None:
        pos = target(bs)
        if pos is None:
            return None
        return plan_path(bs, tuple(pos), next_to=next_to)

    def guard(bs: Any) -> bool:
        path = path_of(bs)
        return path is not None and len(path) > 1

    def effect(bs: Any) -> str:
        path = path_of(bs)
        return step_key(path[0], path[1])

    return Action(name, effect, guard)


def entity_position(entity_id: str, *, same_level: bool = True) -> Callable[[Any], Pos | None]:
    def locate(bs: Any) -> Pos | None:
        e = bs.entity(entity_id)
        if e is None:
            return None
        if same_level and e.properties.get("level", bs.level) != bs.level:
            return None
        return e.position

    return locate


def _explore_path(bs: Any) -> list[Pos] | None:
    def compute() -> list[Pos] | None:
        g = bs.graph
        if bs.pos not in g:
            return None
        return exploration_path(g, bs.pos)

    return bs.cached("explore", compute)


def explore(name: str = "explore") -> Action:
    """Head for the closest frontier of the known map."""

    def guard(bs: Any) -> bool:
        return _explore_path(bs) is not None

    def effect(bs: Any) -> str:
        path = _explore_path(bs)
        if len(path) > 1:
            return step_key(path[0], path[1])
        # standing on the frontier: probe an unknown neighbouring cell
        g = bs.graph
        x, y = bs.pos
        for dx, dy in NEIGHBOURS_4:
            cell = (x + dx, y + dy)
            if cell not in g.nodes and (g.walls is None or cell not in g.walls):
                return MOVE_KEYS[(dx, dy)]
            if cell in g.nodes and cell not in g.explored:
                return MOVE_KEYS[(dx, dy)]
        return "w"

    return Action(name, effect, guard)
