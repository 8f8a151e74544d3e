"""Actions an exploratory agent derives from what it currently believes.

Basic commands are single key presses. A compound action walks to one
interactable entity and interacts with it, as a small goal structure run by
the ordinary deliberation cycle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from agentplay.core.goals import GoalStructure, PrimitiveGoal
from agentplay.core.tactics import ABORT, Action, FirstOf
from agentplay.nav.graph import NEIGHBOURS_4, NavGraph, find_path
from agentplay.nav.tactics import adjacent, entity_position, navigate_to, step_key

BASIC = "basicCommand"
COMPOUND = "compoundTactic"
COMPOUND_BUDGET = 200

# how an entity type is interacted with once reached
PRESS = "press"  # stand on it and press the interact key
BUMP = "bump"  # walk into it from a neighbouring square
STEP = "step"  # walk onto it


@dataclass(frozen=True)
class GameProfile:
    """What the explorer needs to know about one game."""

    agent_id: str
    interactables: dict[str, str]
    move_keys: tuple[str, ...] = ("w", "a", "s", "d")
    interact_key: str = "e"
    # item-use keys that would do something in the current belief
    use_keys: Callable[[Any], list[str]] = field(default=lambda bs: [])
    # true once the game cannot take further commands (won, lost)
    finished: Callable[[Any], bool] = field(default=lambda env: False)


@dataclass(frozen=True)
class DerivedAction:
    kind: str
    target: str | None = None
    key: str | None = None
    mode: str | None = None

    def __post_init__(self) -> None:
        if self.kind == COMPOUND and self.target is None:
            raise ValueError("a compound action needs a target")
        if self.kind == BASIC and self.key is None:
            raise ValueError("a basic action needs a command key")

    @property
    def label(self) -> str:
        return f"{self.mode}({self.target})" if self.kind == COMPOUND else self.key

    def goal(self, profile: GameProfile, budget: int = COMPOUND_BUDGET) -> GoalStructure:
        if self.kind != COMPOUND:
            raise ValueError("only compound actions carry a goal")
        return reach_and_interact(self.target, self.mode, profile.interact_key, budget)


def reach_and_interact(target: str, mode: str, key: str = "e", budget: int = COMPOUND_BUDGET) -> PrimitiveGoal:
    """Walk to ``target`` and interact with it once.

    The interacting action leaves a mark in agent memory; the goal is solved
    on the next cycle. Stepping onto a target counts as soon as the agent
    stands on it.
    """
    locate = entity_position(target)
    slot = f"interacted:{target}"

    def here(bs: Any) -> bool:
        return locate(bs) == tuple(bs.pos)

    def next_to(bs: Any) -> bool:
        pos = locate(bs)
        return pos is not None and adjacent(bs.pos, pos)

    def mark(cmd: Callable[[Any], str]) -> Callable[[Any], str]:
        def effect(bs: Any) -> str:
            bs.memory[slot] = True
            return cmd(bs)
        return effect

    def done(bs: Any) -> bool:
        return bool(bs.memory.pop(slot, False)) or (mode == STEP and here(bs))

    if mode == PRESS:
        act = Action(f"press({target})", mark(lambda bs: key), here)
        nav = navigate_to(locate, name=f"navigateTo({target})")
    elif mode == BUMP:
        act = Action(f"bump({target})", mark(lambda bs: step_key(bs.pos, locate(bs))), next_to)
        nav = navigate_to(locate, next_to=True, name=f"navigateTo({target})")
    elif mode == STEP:
        act = Action(f"stepOnto({target})", mark(lambda bs: step_key(bs.pos, locate(bs))), next_to)
        nav = navigate_to(locate, name=f"navigateTo({target})")
    else:
        raise ValueError(f"unknown interaction mode {mode!r}")
    return PrimitiveGoal(f"{mode}({target})", done, FirstOf(act, nav, ABORT), budget)


def _reachable(graph: NavGraph, src: Any, pos: Any, mode: str) -> bool:
    if src not in graph:
        return False
    if mode == BUMP:
        if adjacent(src, pos):
            return True
        cells = [(pos[0] + dx, pos[1] + dy) for dx, dy in NEIGHBOURS_4]
        return any(c in graph and c not in graph.blocked and find_path(graph, src, c) for c in cells)
    return pos in graph and find_path(graph, src, pos) is not None


def derive_actions(bs: Any, graph: NavGraph, profile: GameProfile) -> list[DerivedAction]:
    """Movement keys, meaningful item-use keys, and one reach-and-interact per
    reachable interactable entity (ordered by entity id)."""
    out = [DerivedAction(BASIC, key=k) for k in profile.move_keys]
    out += [DerivedAction(BASIC, key=k) for k in profile.use_keys(bs)]
    src = tuple(bs.pos)
    for eid in sorted(bs.objects):
        e = bs.objects[eid]
        mode = profile.interactables.get(e.type)
        if mode is None or not e.alive or e.properties.get("inBag", False):
            continue
        if e.properties.get("level", bs.level) != bs.level:
            continue
        if _reachable(graph, src, tuple(e.position), mode):
            out.append(DerivedAction(COMPOUND, target=eid, mode=mode))
    return out


def select_action_asm(
    actions: Sequence[DerivedAction],
    tried: set[str] | frozenset[str],
    rng: random.Random,
) -> DerivedAction:
    """Uniform over compound actions on untried targets; if none, uniform over all."""
    if not actions:
        raise ValueError("no actions to choose from")
    fresh = [a for a in actions if a.kind == COMPOUND and a.target not in tried]
    pool = fresh or list(actions)
    return pool[rng.randrange(len(pool))]


# -- profiles of the built-in games -------------------------------------------

def buttonmaze_profile() -> GameProfile:
    from agentplay.games.buttonmaze import AGENT_ID

    return GameProfile(AGENT_ID, {"button": PRESS})


def _potion_keys(bs: Any) -> list[str]:
    kinds = bs.props.get("bagKinds", ())
    return [k for k, kind in (("e", "healpot"), ("r", "ragepot")) if kind in kinds]


def minidungeon_profile(player: str = "player1") -> GameProfile:
    return GameProfile(
        player,
        {"scroll": STEP, "healpot": STEP, "ragepot": STEP, "shrine": BUMP, "monster": BUMP},
        use_keys=_potion_keys,
        finished=lambda env: env.status != "running",
    )
