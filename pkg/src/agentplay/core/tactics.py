"""Guarded actions and the ANYof / FIRSTof selectors that combine them."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Union

Guard = Callable[[Any], bool]
Effect = Callable[[Any], Union[str, None]]


def _always(_: Any) -> bool:
    return True


def _no_command(_: Any) -> None:
    return None


@dataclass(frozen=True, eq=False)
class Action:
    """A primitive action: enabled when ``guard(belief)`` holds.

    ``effect(belief)`` returns the command key sent to the environment, or
    ``None`` when the action only does internal bookkeeping.
    """

    name: str
    effect: Effect = _no_command
    guard: Guard = _always

    def on(self, guard: Guard) -> "Action":
        return Action(self.name, self.effect, guard)

    def __repr__(self) -> str:
        return f"Action({self.name!r})"


@dataclass(frozen=True, eq=False)
class AnyOf:
    children: tuple["Tactic", ...]

    def __init__(self, *children: "Tactic") -> None:
        if not children:
            raise ValueError("ANYof needs at least one child")
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True, eq=False)
class FirstOf:
    children: tuple["Tactic", ...]

    def __init__(self, *children: "Tactic") -> None:
        if not children:
            raise ValueError("FIRSTof needs at least one child")
        object.__setattr__(self, "children", tuple(children))


# Always enabled; selecting it fails the goal being worked on.
ABORT = Action("ABORT")

Tactic = Union[Action, AnyOf, FirstOf]


def enabled_actions(tactic: Tactic, belief: Any) -> list[Action]:
    """Candidate actions a selector would choose from, in tree order.

    ANYof pools the candidates of all children; FIRSTof yields the candidates
    of its first child that has any.
    """
    if isinstance(tactic, Action):
        return [tactic] if tactic.guard(belief) else []
    if isinstance(tactic, FirstOf):
        for child in tactic.children:
            found = enabled_actions(child, belief)
            if found:
                return found
        return []
    if isinstance(tactic, AnyOf):
        pooled: list[Action] = []
        for child in tactic.children:
            pooled.extend(enabled_actions(child, belief))
        return pooled
    raise TypeError(f"not a tactic: {tactic!r}")


def select_action(tactic: Tactic, belief: Any, rng: random.Random) -> Action | None:
    candidates = enabled_actions(tactic, belief)
    if not candidates:
        return None
    if len(candidates) == 1:
        # no draw, so priority-only trees never touch the random stream
        return candidates[0]
    return candidates[rng.randrange(len(candidates))]
