"""The exploratory test loop: observe, derive, select, execute, check oracles."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from agentplay.core.agent import BeliefState, TestAgent, TransportError
from agentplay.core.world import WorldModel, digest
from agentplay.explorer.actions import (
    BASIC,
    COMPOUND_BUDGET,
    DerivedAction,
    GameProfile,
    derive_actions,
    select_action_asm,
)

STUCK_WINDOW = 50

# custom oracle: inspects the game after an action, returns violation details
GameOracle = Callable[[Any], list[str]]


@dataclass(frozen=True)
class ExplorationViolation:
    oracle: str
    action_index: int
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {"oracle": self.oracle, "actionIndex": self.action_index, "detail": self.detail}


@dataclass
class ExplorationHistory:
    tried_interactions: set[str] = field(default_factory=set)
    visited_states: set[str] = field(default_factory=set)
    oracle_violations: list[ExplorationViolation] = field(default_factory=list)


@dataclass
class ExplorationReport:
    seed: int
    actions: int
    history: ExplorationHistory
    commands: int = 0
    restarts: int = 0

    @property
    def unique_interactions(self) -> int:
        return len(self.history.tried_interactions)

    @property
    def violations(self) -> list[ExplorationViolation]:
        return self.history.oracle_violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "actions": self.actions,
            "uniqueInteractions": self.unique_interactions,
            "triedInteractions": sorted(self.history.tried_interactions),
            "visitedStates": len(self.history.visited_states),
            "commands": self.commands,
            "restarts": self.restarts,
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def implanted_assertion_oracle() -> GameOracle:
    """Report MiniDungeon's implanted-assertion violations as they appear."""
    state: dict[str, Any] = {"env": None, "done": 0}

    def check(env: Any) -> list[str]:
        if env is not state["env"]:
            state["env"], state["done"] = env, 0
        new = env.violations[state["done"]:]
        state["done"] = len(env.violations)
        return [f"{v.check}: {v.detail}" for v in new]

    return check


def state_digest(bs: Any) -> str:
    """Hash of the agent state and believed entities; clocks are left out."""
    props = {k: v for k, v in bs.props.items() if k != "turn"}
    return digest(WorldModel(bs.agent_id, 0, {}, tuple(bs.pos), props), entities=bs.objects)


class _Session:
    def __init__(self, make_env: Callable[[], Any], profile: GameProfile, seed: int) -> None:
        self.make_env = make_env
        self.profile = profile
        self.seed = seed
        self.restarts = 0
        self.commands = 0
        self.fresh()

    def fresh(self) -> None:
        self.env = self.make_env()
        self.belief = BeliefState(self.profile.agent_id)

    def observe(self) -> None:
        self.belief.absorb(self.env.observe(self.profile.agent_id))

    def basic(self, key: str) -> None:
        self.env.command(self.profile.agent_id, key)
        self.commands += 1

    def compound(self, action: DerivedAction, budget: int) -> bool:
        agent = TestAgent(self.profile.agent_id, action.goal(self.profile, budget), self.seed)
        agent.belief = self.belief
        try:
            status = agent.run(self.env, budget + 2)
        finally:
            self.commands += agent.commands_sent
        return status.value == "succeeded"


def run_exploratory(
    make_env: Callable[[], Any],
    profile: GameProfile,
    budget: int,
    *,
    oracles: Sequence[tuple[str, GameOracle]] = (),
    seed: int = 0,
    restart_on_crash: bool = True,
    stuck_window: int = STUCK_WINDOW,
    compound_budget: int = COMPOUND_BUDGET,
) -> ExplorationReport:
    """Explore a game for ``budget`` derived actions.

    Oracles: any exception escaping the game is a ``crash``; a state digest
    unchanged for ``stuck_window`` consecutive actions is ``stuck``; each
    custom oracle is asked after every action. After a crash the run goes on
    with a fresh game if ``restart_on_crash``, else it stops. A game that has
    finished normally is also replaced by a fresh one.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = random.Random(seed)
    hist = ExplorationHistory()
    s = _Session(make_env, profile, seed)
    still = 0
    last = None
    actions = 0

    def flag(name: str, detail: str) -> None:
        hist.oracle_violations.append(ExplorationViolation(name, actions - 1, detail))

    while actions < budget:
        if profile.finished(s.env):
            s.fresh()
            s.restarts += 1
        try:
            s.observe()
        except Exception as exc:  # the game failed to answer at all
            actions += 1
            flag("crash", f"observe: {type(exc).__name__}: {exc}")
            if not restart_on_crash:
                break
            s.fresh()
            s.restarts += 1
            continue
        hist.visited_states.add(state_digest(s.belief))
        choices = derive_actions(s.belief, s.belief.graph, profile)
        action = select_action_asm(choices, hist.tried_interactions, rng)
        actions += 1
        crashed = None
        try:
            if action.kind == BASIC:
                s.basic(action.key)
            elif s.compound(action, compound_budget):
                hist.tried_interactions.add(action.target)
        except TransportError as exc:
            crashed = str(exc.__cause__ or exc)
            cause = type(exc.__cause__).__name__ if exc.__cause__ else "TransportError"
            crashed = f"{action.label}: {cause}: {crashed}"
        except Exception as exc:
            crashed = f"{action.label}: {type(exc).__name__}: {exc}"
        if crashed is not None:
            if action.target is not None:
                hist.tried_interactions.add(action.target)
            flag("crash", crashed)
            if not restart_on_crash:
                break
            s.fresh()
            s.restarts += 1
            still, last = 0, None
            continue
        for name, oracle in oracles:
            for detail in oracle(s.env):
                flag(name, detail)
        try:
            s.observe()
        except Exception:
            continue  # picked up by the next cycle's observe
        now = state_digest(s.belief)
        hist.visited_states.add(now)
        still = still + 1 if now == last else 0
        last = now
        if still >= stuck_window:
            flag("stuck", f"state unchanged for {stuck_window} actions")
            still = 0
    return ExplorationReport(seed, actions, hist, s.commands, s.restarts)
