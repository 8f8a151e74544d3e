"""Test agents and their deliberation cycle."""

from __future__ import annotations

import copy
import enum
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Protocol

from agentplay.core.goals import GoalStructure, PrimitiveGoal, Status, evaluate_goal
from agentplay.core.tactics import ABORT, select_action
from agentplay.core.world import TILE_TYPES, Pos, WorldEntity, WorldModel, digest, merge_observation
from agentplay.nav.graph import NavGraph, add_observed_geometry


class Environment(Protocol):
    """What a game under test must offer an agent."""

    def observe(self, agent_id: str) -> WorldModel: ...

    def command(self, agent_id: str, cmd: str) -> WorldModel: ...


class TransportError(RuntimeError):
    """The environment failed to answer an observe or command call."""


class AgentStatus(enum.Enum):
    RUNNING = "running"
    SUCCEEDED = "succeeded"
    FAILED = "failed"


class BeliefState:
    """Everything guards, effects and goal predicates get to look at.

    Holds the accumulated :class:`WorldModel`, one on-the-fly navigation graph
    per game level, and a free-form ``memory`` dict for tactics that need to
    remember things across cycles.
    """

    def __init__(self, agent_id: str) -> None:
        self.agent_id = agent_id
        self.wom = WorldModel(agent_id)
        self.objects: dict[str, WorldEntity] = {}
        self.memory: dict[str, Any] = {}
        self.nav: dict[Any, NavGraph] = {}
        self.seen_types: set[str] = set()
        self.cycle = 0
        self.cache: dict[Any, Any] = {}

    @property
    def pos(self) -> Pos:
        return self.wom.agent_position

    @property
    def props(self) -> dict[str, Any]:
        return self.wom.agent_properties

    @property
    def level(self) -> Any:
        return self.wom.agent_properties.get("currentLevel", 1)

    @property
    def graph(self) -> NavGraph:
        g = self.nav.get(self.level)
        if g is None:
            g = self.nav[self.level] = NavGraph(unit_grid=True, open_world=True)
        return g

    def entity(self, entity_id: str) -> WorldEntity | None:
        return self.wom.entities.get(entity_id)

    def objects_of(self, entity_type: str, *, alive_only: bool = True, here: bool = True) -> list[WorldEntity]:
        """Believed non-tile entities of a type, by default only on the current level."""
        out = []
        for e in self.objects.values():
            if e.type != entity_type or (alive_only and not e.alive):
                continue
            if here and e.properties.get("level", self.level) != self.level:
                continue
            out.append(e)
        return out

    def visible(self, e: WorldEntity) -> bool:
        """True when ``e`` was part of the latest observation."""
        return e.timestamp == self.wom.timestamp

    def absorb(self, obs: WorldModel) -> None:
        self.wom = merge_observation(self.wom, obs)
        for e in obs.entities.values():
            self.seen_types.add(e.type)
            if e.type not in TILE_TYPES:
                self.objects[e.id] = self.wom.entities[e.id]
        add_observed_geometry(self.graph, obs)
        self.cache.clear()

    def cached(self, key: Any, compute: Callable[[], Any]) -> Any:
        """Memoise a computation for the rest of this cycle."""
        if key not in self.cache:
            self.cache[key] = compute()
        return self.cache[key]

    def digest(self) -> str:
        return digest(self.wom, entities=self.objects)


@dataclass
class TraceStep:
    turn: int
    command: str | None
    digest: str
    position: Pos
    properties: dict[str, Any]
    on_wall: bool
    seen_types: frozenset[str]
    goal: str | None = None


@dataclass
class TestAgent:
    id: str
    goal: GoalStructure
    seed: int = 0
    belief: BeliefState = field(init=False)
    rng: random.Random = field(init=False)
    trace: list[TraceStep] = field(default_factory=list, init=False)
    commands_sent: int = field(default=0, init=False)

    __test__ = False  # not a pytest test class

    def __post_init__(self) -> None:
        self.belief = BeliefState(self.id)
        self.rng = random.Random(self.seed)

    @property
    def status(self) -> AgentStatus:
        st, _ = evaluate_goal(self.goal)
        return _agent_status(st)

    def run(self, env: Environment, max_cycles: int, stop: Callable[[], bool] | None = None) -> AgentStatus:
        """Deliberate until the goal is decided, ``stop()`` holds, or cycles run out."""
        status = self.status
        for _ in range(max_cycles):
            if status is not AgentStatus.RUNNING or (stop is not None and stop()):
                break
            status = deliberate(self, env)
        return status


def _agent_status(st: Status) -> AgentStatus:
    if st is Status.SUCCESS:
        return AgentStatus.SUCCEEDED
    if st is Status.FAIL:
        return AgentStatus.FAILED
    return AgentStatus.RUNNING


def deliberate(agent: TestAgent, env: Environment) -> AgentStatus:
    """Run one observe-decide-act cycle.

    If the environment raises, the belief, goal bookkeeping, memory and trace
    are restored to what they were before the cycle and a
    :class:`TransportError` is raised. Navigation geometry learnt from the
    observation is kept; it only ever grows.
    """
    st, current = evaluate_goal(agent.goal)
    if current is None:
        return _agent_status(st)

    bs = agent.belief
    saved = (bs.wom, dict(bs.objects), copy.deepcopy(bs.memory), current.status, bs.cycle)
    try:
        obs = env.observe(agent.id)
    except Exception as exc:
        raise TransportError(f"observe failed: {exc}") from exc
    bs.absorb(obs)
    bs.cycle += 1

    if current.status is Status.PENDING:
        current.status = Status.IN_PROGRESS
        if current.on_start is not None:
            current.on_start(bs)

    cmd: str | None = None
    if current.predicate(bs):
        current.status = Status.SUCCESS
    elif current.remaining <= 0:
        current.fail("budget")
    else:
        action = select_action(current.tactic, bs, agent.rng)
        if action is ABORT:
            current.fail("abort")
        else:
            cmd = action.effect(bs) if action is not None else None
            if cmd is not None:
                try:
                    env.command(agent.id, cmd)
                except Exception as exc:
                    bs.wom, bs.objects, bs.memory, current.status, bs.cycle = saved
                    bs.cache.clear()
                    raise TransportError(f"command {cmd!r} failed: {exc}") from exc
                agent.commands_sent += 1
            current.remaining -= 1
            current.cycles_used += 1

    agent.trace.append(_trace_step(bs, cmd, current))
    st, _ = evaluate_goal(agent.goal)
    return _agent_status(st)


def _trace_step(bs: BeliefState, cmd: str | None, goal: PrimitiveGoal) -> TraceStep:
    walls = bs.graph.walls or ()
    return TraceStep(
        turn=bs.cycle,
        command=cmd,
        digest=bs.digest(),
        position=bs.pos,
        properties=dict(bs.props),
        on_wall=bs.pos in walls,
        seen_types=frozenset(bs.seen_types),
        goal=goal.name,
    )
