"""Turning abstract EFSM test cases into goal structures an agent can run."""

from __future__ import annotations

import itertools
from typing import Any, Sequence

from agentplay.core.goals import DEFAULT_BUDGET, GoalStructure, PrimitiveGoal, Seq
from agentplay.core.tactics import ABORT, Action, FirstOf
from agentplay.mbt.efsm import EFSM, check_chained
from agentplay.nav.tactics import explore, navigate_to


_slots = itertools.count()


def _at(pos: tuple[int, int]):
    return lambda bs: tuple(bs.pos) == pos


def _presses(bs: Any, button: str) -> int:
    e = bs.entity(button)
    return 0 if e is None else int(e.properties.get("pressed", 0))


def reach_goal(name: str, pos: tuple[int, int], budget: int = DEFAULT_BUDGET) -> PrimitiveGoal:
    tactic = FirstOf(navigate_to(lambda bs: pos), explore(), ABORT)
    return PrimitiveGoal(name, _at(pos), tactic, budget)


def toggle_goal(button: str, pos: tuple[int, int], budget: int = DEFAULT_BUDGET, key: str = "e") -> PrimitiveGoal:
    """Solved once the button's observed press count exceeds its count at the
    moment the goal started."""
    slot = f"pressesAtStart:{button}:{next(_slots)}"  # unique per goal instance

    def start(bs: Any) -> None:
        bs.memory[slot] = _presses(bs, button)

    def pressed(bs: Any) -> bool:
        return slot in bs.memory and _presses(bs, button) > bs.memory[slot]

    press = Action(f"press {button}", lambda bs: key, _at(pos))
    tactic = FirstOf(press, navigate_to(lambda bs: pos), explore(), ABORT)
    return PrimitiveGoal(f"toggle {button}", pressed, tactic, budget, on_start=start)


def translate(test: Sequence[int], efsm: EFSM, budget: int = DEFAULT_BUDGET) -> GoalStructure:
    """One goal per transition, in order, under a SEQ.

    Travel and door crossings become "stand on the destination node's cell";
    toggles become "the button's press count went up". An empty test gives a
    goal that holds immediately.
    """
    check_chained(efsm, test)
    if not test:
        return PrimitiveGoal("empty test", lambda bs: True)
    goals: list[GoalStructure] = []
    for i in test:
        t = efsm.transitions[i]
        pos = tuple(efsm.positions[t.dst])
        if t.kind == "toggle":
            goals.append(toggle_goal(t.src, pos, budget))
        else:
            goals.append(reach_goal(f"{t.kind} {t.src}->{t.dst}", pos, budget))
    return Seq(*goals)
