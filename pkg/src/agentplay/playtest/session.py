"""Running the shrine playtest on a MiniDungeon and collecting its verdicts."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Iterable

from agentplay.core.agent import AgentStatus, TestAgent, TransportError, deliberate
from agentplay.core.goals import PrimitiveGoal
from agentplay.core.tactics import Action, AnyOf, FirstOf
from agentplay.games.minidungeon import GameConfig, MiniDungeon, Violation
from agentplay.playtest.oracles import BUILTIN_ORACLES, OracleViolation, TraceOracle, check_trace_oracles
from agentplay.playtest.solver import SOLVER_BUDGET, shrine_playtest
from agentplay.playtest.tactics import combat_actions

MAX_CYCLES = 4000
SETTLE_CYCLES = 3


def wander_goal(budget: int = MAX_CYCLES) -> PrimitiveGoal:
    """A never-solved goal: fight when threatened, otherwise step at random."""
    moves = AnyOf(*(Action(f"move {k}", lambda bs, k=k: k) for k in "wasd"))
    return PrimitiveGoal("wander", lambda bs: False, FirstOf(*combat_actions(), moves), budget)


@dataclass
class PlaytestReport:
    seed: int
    game_status: str
    goal_status: str
    cycles: int
    turns: int
    oracle_violations: list[OracleViolation]
    game_violations: list[Violation]
    transport_errors: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def won(self) -> bool:
        return self.game_status == "won"

    @property
    def ok(self) -> bool:
        return self.won and not self.oracle_violations and not self.game_violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "time": round(self.seconds, 3),
            "seed": self.seed,
            "gameStatus": self.game_status,
            "goalStatus": self.goal_status,
            "won": self.won,
            "cycles": self.cycles,
            "turns": self.turns,
            "violations": [v.to_dict() for v in self.oracle_violations],
            "gameViolations": [v.to_dict() for v in self.game_violations],
            "transportErrors": list(self.transport_errors),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def run_playtest(
    config: GameConfig,
    *,
    max_cycles: int = MAX_CYCLES,
    mutants: Iterable[str] = (),
    oracles: Iterable[TraceOracle] = BUILTIN_ORACLES,
    budget: int = SOLVER_BUDGET,
) -> PlaytestReport:
    """Play every shrine in turn with the first player's agent.

    A second player, if configured, wanders and fights on its own; the two
    agents deliberate alternately. The run ends when the game does, when
    the playtest agent has finished, or after ``max_cycles`` cycles in total. Trace
    oracles are checked on the first player's trace.
    """
    start = time.perf_counter()
    game = MiniDungeon(config, mutants=mutants)
    ids = sorted(game.players)
    agents = [TestAgent(ids[0], shrine_playtest(ids[0], config.level_count, budget), config.seed)]
    agents += [TestAgent(pid, wander_goal(), config.seed + k) for k, pid in enumerate(ids[1:], 1)]
    errors: list[str] = []
    cycles = 0
    lead = agents[0]
    live = list(agents)
    while lead in live and cycles < max_cycles and game.status == "running":
        for a in list(live):
            if cycles >= max_cycles or game.status != "running":
                break
            cycles += 1
            try:
                status = deliberate(a, game)
            except TransportError as exc:
                errors.append(f"{a.id}: {exc}")
                live.remove(a)
                continue
            if status is not AgentStatus.RUNNING or not game.players[a.id].alive:
                live.remove(a)
    if game.status == "won" and lead in live:
        # a few command-free cycles let the playtest observe the end state and settle
        for _ in range(SETTLE_CYCLES):
            try:
                if deliberate(lead, game) is not AgentStatus.RUNNING:
                    break
            except TransportError as exc:
                errors.append(f"{lead.id}: {exc}")
                break
    trace_violations = check_trace_oracles(lead.trace, list(oracles))
    return PlaytestReport(
        seed=config.seed,
        game_status=game.status,
        goal_status=lead.status.value,
        cycles=cycles,
        turns=game.turn,
        oracle_violations=trace_violations,
        game_violations=list(game.violations),
        transport_errors=errors,
        seconds=time.perf_counter() - start,
    )


def playtest_config(seed: int, **overrides: Any) -> GameConfig:
    """The two-level evaluation setup: 20x20 grid, 4 monsters and 3 scrolls per level."""
    base = dict(level_count=2, grid_size=20, monsters_per_level=4, scrolls_per_level=3, seed=seed)
    base.update(overrides)
    return GameConfig(**base)
