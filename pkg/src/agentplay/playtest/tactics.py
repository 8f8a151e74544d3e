"""Combat-aware tactics and reachability goals for MiniDungeon agents."""

from __future__ import annotations

from typing import Any

from agentplay.core.goals import PrimitiveGoal
from agentplay.core.tactics import ABORT, Action, FirstOf, Tactic
from agentplay.nav.tactics import adjacent, entity_position, explore, navigate_to, step_key

Pos = tuple[int, int]

CRITICAL_HP = 3
HEAL_FRACTION = 0.5
CLOSE_RANGE_BUDGET = 600


def holding(bs: Any, kind: str) -> bool:
    return kind in bs.props.get("bagKinds", ())


def adjacent_monsters(bs: Any) -> list[Any]:
    """Live monsters seen this cycle on a square next to the agent, by id."""
    out = [
        m for m in bs.objects_of("monster")
        if bs.visible(m) and adjacent(bs.pos, m.position)
    ]
    return sorted(out, key=lambda m: m.id)


def _needs_heal(bs: Any) -> bool:
    p = bs.props
    return holding(bs, "healpot") and p.get("hp", 0) < HEAL_FRACTION * p.get("hpMax", 0)


def _wants_rage(bs: Any) -> bool:
    return (
        holding(bs, "ragepot")
        and bs.props.get("rageTurnsLeft", 0) == 0
        and bool(adjacent_monsters(bs))
    )


def _can_attack(bs: Any) -> bool:
    return bs.props.get("hp", 0) > CRITICAL_HP and bool(adjacent_monsters(bs))


def _attack_key(bs: Any) -> str:
    return step_key(bs.pos, adjacent_monsters(bs)[0].position)


def heal_action() -> Action:
    return Action("useHealingPot", lambda bs: "e", _needs_heal)


def rage_action() -> Action:
    return Action("useRagePot", lambda bs: "r", _wants_rage)


def attack_action() -> Action:
    return Action("attackMonster", _attack_key, _can_attack)


def combat_actions() -> list[Action]:
    """Heal, rage and attack, in the priority order the survival tactic uses."""
    return [heal_action(), rage_action(), attack_action()]


def survival_tactic(o: str, *, next_to: bool = True) -> Tactic:
    """Stay alive while heading for entity ``o``.

    Heal when low, rage and attack adjacent monsters, otherwise walk
    towards ``o`` if its position is believed, else explore, else abort.
    """
    return FirstOf(
        *combat_actions(),
        navigate_to(entity_position(o), next_to=next_to, name=f"navigateTo({o})"),
        explore(),
        ABORT,
    )


def close_to(bs: Any, o: str) -> bool:
    pos = entity_position(o)(bs)
    return pos is not None and adjacent(bs.pos, pos)


def entity_in_close_range(o: str, budget: int = CLOSE_RANGE_BUDGET) -> PrimitiveGoal:
    """Solved when the agent stands on a square 4-adjacent to ``o``."""
    return PrimitiveGoal(f"closeTo({o})", lambda bs: close_to(bs, o), survival_tactic(o), budget)
