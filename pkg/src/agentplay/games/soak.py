"""Long random-key sessions on MiniDungeon with the implanted assertions on."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Any, Iterable

from agentplay.games.minidungeon import GameConfig, MiniDungeon, Violation

SOAK_KEYS = "wasder"


@dataclass
class SoakReport:
    seed: int
    turns: int
    games: int
    violations: list[Violation] = field(default_factory=list)
    first_violation_turn: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "turns": self.turns,
            "games": self.games,
            "firstViolationTurn": self.first_violation_turn,
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def soak(config: GameConfig, turns: int, mutants: Iterable[str] = (), stop_at_first: bool = False) -> SoakReport:
    """Press ``turns`` random keys, cycling through the players.

    When a game ends (won or lost) play continues on a new game whose seed
    is derived from the run seed. Violation turns count across games.
    """
    if turns < 0:
        raise ValueError("turns must be non-negative")
    mutants = tuple(mutants)
    rng = random.Random(config.seed)
    games = 1
    game = MiniDungeon(config, mutants=mutants)
    out: list[Violation] = []
    base = 0
    first = None
    for t in range(turns):
        if game.status != "running":
            base = t
            game = MiniDungeon(replace(config, seed=config.seed * 1000 + games), mutants=mutants)
            games += 1
        alive = [p for p in sorted(game.players) if game.players[p].alive]
        before = len(game.violations)
        game.command(alive[t % len(alive)], rng.choice(SOAK_KEYS))
        for v in game.violations[before:]:
            out.append(replace(v, turn=base + v.turn))
        if out and first is None:
            first = t + 1
            if stop_at_first:
                return SoakReport(config.seed, t + 1, games, out, first)
    return SoakReport(config.seed, turns, games, out, first)
