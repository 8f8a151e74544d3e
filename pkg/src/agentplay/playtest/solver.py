"""The online object-search solver and the shrine playtest built from it.

``solver(spec)`` keeps fetching untried resources of one type and using
them on a target until a predicate over the target holds. Which resources
have been seen and held lives in agent memory under a per-solver key, so
each resource instance is tried at most once and in the order it was first
discovered.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from agentplay.core.goals import GoalStructure, FirstOfGoal, PrimitiveGoal, Repeat, Seq
from agentplay.core.tactics import ABORT, Action, FirstOf
from agentplay.core.world import WorldEntity
from agentplay.nav.tactics import adjacent, entity_position, explore, navigate_to, step_key
from agentplay.playtest.tactics import combat_actions, entity_in_close_range, holding

SOLVER_BUDGET = 600
SOLVER_RETRIES = 12

EntityPredicate = Callable[[WorldEntity | None], bool]


def cleansed(e: WorldEntity | None) -> bool:
    return e is not None and bool(e.properties.get("cleansed", False))


@dataclass(frozen=True)
class SolverSpec:
    agent_id: str
    resource_type: str
    target_id: str
    predicate: EntityPredicate = cleansed

    def __post_init__(self) -> None:
        if not self.target_id:
            raise ValueError("solver target id must be non-empty")

    @property
    def key(self) -> str:
        return f"solver:{self.resource_type}:{self.target_id}"


# -- resource bookkeeping ------------------------------------------------------

def _book(bs: Any, spec: SolverSpec) -> dict[str, list[str]]:
    book = bs.memory.get(spec.key)
    if book is None:
        book = bs.memory[spec.key] = {"seen": [], "held": []}
    return book


def _bag(bs: Any, kind: str) -> list[str]:
    ids = bs.props.get("bagContents", ())
    kinds = bs.props.get("bagKinds", ())
    return [i for i, k in zip(ids, kinds) if k == kind]


def note_resources(bs: Any, spec: SolverSpec) -> None:
    """Record newly discovered and newly held resources of the solver's type."""
    book = _book(bs, spec)
    seen = set(book["seen"])
    for e in sorted(bs.objects_of(spec.resource_type, alive_only=False), key=lambda e: e.id):
        if e.id not in seen:
            book["seen"].append(e.id)
            seen.add(e.id)
    for i in _bag(bs, spec.resource_type):
        if i not in book["held"]:
            book["held"].append(i)


def tried(bs: Any, spec: SolverSpec) -> list[str]:
    """Resources that were in the bag and are gone: used on the target."""
    bag = set(_bag(bs, spec.resource_type))
    return [i for i in _book(bs, spec)["held"] if i not in bag]


def next_untried(bs: Any, spec: SolverSpec) -> WorldEntity | None:
    """First-discovered resource on this level that was never held."""
    book = _book(bs, spec)
    held = set(book["held"])
    for i in book["seen"]:
        e = bs.entity(i)
        if e is None or i in held or not e.alive or e.properties.get("inBag", False):
            continue
        if e.properties.get("level", bs.level) != bs.level:
            continue
        return e
    return None


# -- actions -------------------------------------------------------------------

def _make_room_guard(spec: SolverSpec):
    def guard(bs: Any) -> bool:
        bag = bs.props.get("bagContents", ())
        full = len(bag) >= bs.props.get("bagCapacity", 1)
        return full and not holding(bs, spec.resource_type) and (
            holding(bs, "healpot") or holding(bs, "ragepot")
        )
    return guard


def _make_room_key(bs: Any) -> str:
    if holding(bs, "healpot") and (bs.props.get("hp", 0) < bs.props.get("hpMax", 0) or not holding(bs, "ragepot")):
        return "e"
    return "r"


def make_room_action(spec: SolverSpec) -> Action:
    """Quaff a potion when the bag is full and holds no resource to try."""
    return Action("makeRoom", _make_room_key, _make_room_guard(spec))


def bump_action(o: str) -> Action:
    """Step into ``o`` from a neighbouring square."""
    locate = entity_position(o)

    def guard(bs: Any) -> bool:
        pos = locate(bs)
        return pos is not None and adjacent(bs.pos, pos)

    return Action(f"interact({o})", lambda bs: step_key(bs.pos, locate(bs)), guard)


def _untried_position(spec: SolverSpec):
    def where(bs: Any):
        e = next_untried(bs, spec)
        return None if e is None else e.position
    return where


# -- goals -----------------------------------------------------------------------

def _tracked(spec: SolverSpec, pred: Callable[[Any], bool]) -> Callable[[Any], bool]:
    def check(bs: Any) -> bool:
        note_resources(bs, spec)
        return pred(bs)
    return check


def _phi(spec: SolverSpec) -> Callable[[Any], bool]:
    return lambda bs: spec.predicate(bs.entity(spec.target_id))


def solver(spec: SolverSpec, budget: int = SOLVER_BUDGET, retries: int = SOLVER_RETRIES) -> GoalStructure:
    """REPEAT( FIRSTof( φ(o), SEQ(fetch T, close to o, use T on o, φ(o)) ) )."""
    T, o = spec.resource_type, spec.target_id
    phi = _tracked(spec, _phi(spec))
    done = PrimitiveGoal(f"holds({o})", phi, ABORT, 1)

    fetch = PrimitiveGoal(
        f"fetch({T})",
        _tracked(spec, lambda bs: holding(bs, T)),
        FirstOf(
            *combat_actions(),
            make_room_action(spec),
            navigate_to(_untried_position(spec), name=f"navigateTo(untried {T})"),
            explore(),
            ABORT,
        ),
        budget,
    )

    approach = entity_in_close_range(o, budget)
    approach.predicate = _tracked(spec, approach.predicate)

    slot = f"{spec.key}:bagAtUse"

    def start_use(bs: Any) -> None:
        bs.memory[slot] = _bag(bs, T)

    def used(bs: Any) -> bool:
        if phi(bs):
            return True
        bag = set(_bag(bs, T))
        return any(i not in bag for i in bs.memory.get(slot, ()))

    use = PrimitiveGoal(
        f"use({T},{o})",
        used,
        FirstOf(
            *combat_actions(),
            bump_action(o),
            navigate_to(entity_position(o), next_to=True, name=f"navigateTo({o})"),
            explore(),
            ABORT,
        ),
        budget,
        on_start=start_use,
    )
    recheck = PrimitiveGoal(f"holds({o})", phi, ABORT, 1)
    return Repeat(FirstOfGoal(done, Seq(fetch, approach, use, recheck)), retries)


def _passed(o: str) -> Callable[[Any], bool]:
    def check(bs: Any) -> bool:
        e = bs.entity(o)
        return e is not None and bs.level > e.properties.get("level", bs.level)
    return check


def interacted(o: str, budget: int = SOLVER_BUDGET) -> PrimitiveGoal:
    """Use a cleansed shrine as a portal: solved once the agent is on a later level."""
    return PrimitiveGoal(
        f"interacted({o})",
        _passed(o),
        FirstOf(
            *combat_actions(),
            bump_action(o),
            navigate_to(entity_position(o), next_to=True, name=f"navigateTo({o})"),
            explore(),
            ABORT,
        ),
        budget,
    )


def shrine_playtest(agent_id: str, level_count: int = 2, budget: int = SOLVER_BUDGET) -> GoalStructure:
    """SEQ(solver(shrine1), interacted(shrine1), ..., solver(shrineN))."""
    if level_count < 1:
        raise ValueError("need at least one level")
    goals: list[GoalStructure] = []
    for n in range(1, level_count + 1):
        o = f"shrine{n}"
        goals.append(solver(SolverSpec(agent_id, "scroll", o), budget))
        if n < level_count:
            goals.append(interacted(o, budget))
    return Seq(*goals)
