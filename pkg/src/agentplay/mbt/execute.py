"""Running generated suites on ButtonMaze and checking the game against the model."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

from agentplay.core.agent import AgentStatus, TestAgent, TransportError, deliberate
from agentplay.core.goals import DEFAULT_BUDGET, PrimitiveGoal, Status
from agentplay.games.buttonmaze import AGENT_ID, ButtonMaze
from agentplay.mbt.efsm import EFSM, efsm_from_level, simulate
from agentplay.mbt.translate import translate


class LevelModelMismatch(ValueError):
    pass


@dataclass
class TestResult:
    index: int
    length: int
    passed: bool
    cycles: int
    failing_goal: int | None = None
    reason: str | None = None
    # goal indices after which the game's doors differed from the model's
    mismatches: list[int] = field(default_factory=list)

    __test__ = False

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        return {
            "index": d["index"],
            "length": d["length"],
            "passed": d["passed"],
            "cycles": d["cycles"],
            "failingGoal": d["failing_goal"],
            "reason": d["reason"],
            "conformanceMismatches": d["mismatches"],
        }


@dataclass
class ExecutionReport:
    results: list[TestResult]
    seconds: float

    @property
    def n_tests(self) -> int:
        return len(self.results)

    @property
    def n_fails(self) -> int:
        return sum(not r.passed for r in self.results)

    @property
    def total_cycles(self) -> int:
        return sum(r.cycles for r in self.results)

    @property
    def conformant(self) -> bool:
        return all(not r.mismatches for r in self.results)

    def to_dict(self) -> dict[str, Any]:
        return {
            "time": round(self.seconds, 3),
            "nTests": self.n_tests,
            "nFails": self.n_fails,
            "totalCycles": self.total_cycles,
            "conformanceViolations": sum(len(r.mismatches) for r in self.results),
            "tests": [r.to_dict() for r in self.results],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def check_level_matches(maze: ButtonMaze, efsm: EFSM) -> None:
    derived = efsm_from_level(maze).to_dict()
    given = efsm.to_dict()
    for key in ("states", "initialState", "variables", "transitions"):
        if derived[key] != given[key]:
            raise LevelModelMismatch(f"level and model disagree on {key}")


def run_test(
    make_game: Callable[[], ButtonMaze],
    efsm: EFSM,
    test: Sequence[int],
    index: int = 0,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> TestResult:
    """Execute one abstract test on a fresh game.

    After each goal is achieved the game's door vector is compared with the
    model's door vector after the same number of transitions.
    """
    game = make_game()
    expected = simulate(efsm, test).door_trace
    goal = translate(test, efsm, budget)
    leaves: list[PrimitiveGoal] = list(goal.leaves())
    agent = TestAgent(AGENT_ID, goal, seed)
    done = 0
    mismatches: list[int] = []
    # every cycle spends budget on the current goal, so this bound is never hit
    limit = budget * max(1, len(leaves)) + len(leaves) + 1
    status = agent.status
    reason = None
    cycles = 0
    while status is AgentStatus.RUNNING and cycles < limit:
        try:
            status = deliberate(agent, game)
        except TransportError as exc:
            status = AgentStatus.FAILED
            reason = f"transport: {exc}"
            break
        cycles += 1
        while done < len(leaves) and leaves[done].status is Status.SUCCESS:
            done += 1
            if game.door_vector() != expected[min(done, len(test))]:
                mismatches.append(done - 1)
    failing = None
    if status is not AgentStatus.SUCCEEDED:
        failing = done
        if reason is None:
            leaf = leaves[done] if done < len(leaves) else None
            reason = leaf.fail_reason if leaf is not None and leaf.fail_reason else "cycle limit"
    return TestResult(index, len(test), status is AgentStatus.SUCCEEDED, cycles, failing, reason, mismatches)


def execute_suite(
    make_game: Callable[[], ButtonMaze],
    suite: Sequence[Sequence[int]],
    efsm: EFSM,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> ExecutionReport:
    """Run every test on its own fresh game; a test passes iff its SEQ succeeds."""
    check_level_matches(make_game(), efsm)
    start = time.perf_counter()
    results = [run_test(make_game, efsm, t, i, budget, seed) for i, t in enumerate(suite)]
    return ExecutionReport(results, time.perf_counter() - start)
