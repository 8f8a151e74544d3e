"""Goal structures: predicate goals at the leaves, SEQ / FIRSTof / REPEAT above."""

from __future__ import annotations

import enum
from typing import Any, Callable, Iterator

from agentplay.core.tactics import ABORT, Tactic

DEFAULT_BUDGET = 150


class Status(enum.Enum):
    PENDING = "pending"
    IN_PROGRESS = "in-progress"
    SUCCESS = "success"
    FAIL = "fail"

    @property
    def terminal(self) -> bool:
        return self in (Status.SUCCESS, Status.FAIL)


class GoalStructure:
    status: Status = Status.PENDING

    def reset(self) -> None:
        raise NotImplementedError

    def leaves(self) -> Iterator["PrimitiveGoal"]:
        raise NotImplementedError


class PrimitiveGoal(GoalStructure):
    """A goal solved when ``predicate(belief)`` holds.

    The agent works on it with ``tactic`` for at most ``budget`` deliberation
    cycles. ``on_start`` runs once when the goal becomes the current one;
    goals whose predicate compares against a starting value use it to
    snapshot that value.
    """

    def __init__(
        self,
        name: str,
        predicate: Callable[[Any], bool],
        tactic: Tactic = ABORT,
        budget: int = DEFAULT_BUDGET,
        on_start: Callable[[Any], None] | None = None,
    ) -> None:
        if budget < 1:
            raise ValueError("budget must be at least 1")
        self.name = name
        self.predicate = predicate
        self.tactic = tactic
        self.budget = budget
        self.on_start = on_start
        self.reset()

    def reset(self) -> None:
        self.status = Status.PENDING
        self.remaining = self.budget
        self.fail_reason: str | None = None
        self.cycles_used = 0

    def leaves(self) -> Iterator["PrimitiveGoal"]:
        yield self

    def fail(self, reason: str) -> None:
        self.status = Status.FAIL
        self.fail_reason = reason

    def __repr__(self) -> str:
        return f"PrimitiveGoal({self.name!r}, {self.status.value})"


class _Composite(GoalStructure):
    def __init__(self, *children: GoalStructure) -> None:
        if not children:
            raise ValueError(f"{type(self).__name__} needs at least one subgoal")
        self.children = list(children)
        self.status = Status.PENDING

    def reset(self) -> None:
        self.status = Status.PENDING
        for c in self.children:
            c.reset()

    def leaves(self) -> Iterator[PrimitiveGoal]:
        for c in self.children:
            yield from c.leaves()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(map(repr, self.children))})"


class Seq(_Composite):
    """Solve the subgoals in the given order; any failure fails the whole."""


class FirstOfGoal(_Composite):
    """Try the subgoals in order until one succeeds."""


class Repeat(GoalStructure):
    """Re-attempt a failing subgoal up to ``max_retries`` more times."""

    def __init__(self, child: GoalStructure, max_retries: int) -> None:
        if max_retries < 0:
            raise ValueError("max_retries must be non-negative")
        self.child = child
        self.max_retries = max_retries
        self.reset()

    def reset(self) -> None:
        self.status = Status.PENDING
        self.attempts = 1
        self.child.reset()

    def leaves(self) -> Iterator[PrimitiveGoal]:
        yield from self.child.leaves()

    def __repr__(self) -> str:
        return f"Repeat({self.child!r}, max_retries={self.max_retries})"


def evaluate_goal(root: GoalStructure) -> tuple[Status, PrimitiveGoal | None]:
    """Propagate leaf statuses upwards and find the goal to work on next.

    Returns the status of ``root`` and the leftmost unfinished primitive goal,
    or ``None`` when ``root`` is finished. A REPEAT node whose child has failed
    with retries left resets that child here, which starts the next attempt.
    """
    if isinstance(root, PrimitiveGoal):
        current = None if root.status.terminal else root
        return root.status, current

    if isinstance(root, Seq):
        for child in root.children:
            st, cur = evaluate_goal(child)
            if st is Status.FAIL:
                root.status = Status.FAIL
                return root.status, None
            if st is not Status.SUCCESS:
                return _open(root, st), cur
        root.status = Status.SUCCESS
        return root.status, None

    if isinstance(root, FirstOfGoal):
        for child in root.children:
            st, cur = evaluate_goal(child)
            if st is Status.SUCCESS:
                root.status = Status.SUCCESS
                return root.status, None
            if st is not Status.FAIL:
                return _open(root, st), cur
        root.status = Status.FAIL
        return root.status, None

    if isinstance(root, Repeat):
        while True:
            st, cur = evaluate_goal(root.child)
            if st is Status.SUCCESS:
                root.status = Status.SUCCESS
                return root.status, None
            if st is Status.FAIL:
                if root.attempts > root.max_retries:
                    root.status = Status.FAIL
                    return root.status, None
                root.attempts += 1
                root.child.reset()
                continue
            return _open(root, st), cur

    raise TypeError(f"not a goal structure: {root!r}")


def _open(node: GoalStructure, child_status: Status) -> Status:
    if child_status is Status.IN_PROGRESS or node.status is Status.IN_PROGRESS:
        node.status = Status.IN_PROGRESS
    return node.status
