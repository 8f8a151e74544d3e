"""Assertions checked over an agent's recorded trace.

A step oracle looks at one :class:`TraceStep` at a time; a trace oracle
looks at the whole run and reports at most one violation.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

from agentplay.core.agent import TraceStep

# step predicate: returns None when the step is fine, else a detail message
StepCheck = Callable[[TraceStep], "str | None"]
TraceCheck = Callable[[Sequence[TraceStep]], "tuple[int, str] | None"]


@dataclass(frozen=True)
class TraceOracle:
    name: str
    step: StepCheck | None = None
    trace: TraceCheck | None = None
    severity: str = "error"

    def __post_init__(self) -> None:
        if (self.step is None) == (self.trace is None):
            raise ValueError("an oracle checks either single steps or the whole trace")


@dataclass(frozen=True)
class OracleViolation:
    oracle: str
    step_index: int
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {"oracle": self.oracle, "stepIndex": self.step_index, "detail": self.detail}


def _hp_positive(s: TraceStep) -> str | None:
    p = s.properties
    if p.get("status", "running") == "running" and p.get("hp", 1) <= 0:
        return f"hp {p.get('hp')} while the game is running"
    return None


def _bag_within_capacity(s: TraceStep) -> str | None:
    p = s.properties
    n, cap = len(p.get("bagContents", ())), p.get("bagCapacity")
    if cap is not None and n > cap:
        return f"bag holds {n} items, capacity {cap}"
    return None


def _not_in_wall(s: TraceStep) -> str | None:
    return f"agent stands on wall cell {tuple(s.position)}" if s.on_wall else None


def _eventually_hurt(trace: Sequence[TraceStep]) -> tuple[int, str] | None:
    met = next((i for i, s in enumerate(trace) if "monster" in s.seen_types), None)
    if met is None:
        return None
    if any(s.properties.get("hp", 0) < s.properties.get("hpMax", 0) for s in trace[met:]):
        return None
    return len(trace) - 1, "monsters were seen but hp never dropped below its maximum"


HP_POSITIVE = TraceOracle("hpPositive", step=_hp_positive)
BAG_CAPACITY = TraceOracle("bagCapacity", step=_bag_within_capacity)
NO_WALL_WALK = TraceOracle("noWallWalk", step=_not_in_wall)
EVENTUALLY_HURT = TraceOracle("eventuallyHurt", trace=_eventually_hurt, severity="warning")

BUILTIN_ORACLES = (HP_POSITIVE, BAG_CAPACITY, NO_WALL_WALK, EVENTUALLY_HURT)


def check_trace_oracles(
    trace: Sequence[TraceStep],
    oracles: Sequence[TraceOracle] = BUILTIN_ORACLES,
) -> list[OracleViolation]:
    """Every violation, ordered by step index then oracle order."""
    out: list[tuple[int, int, OracleViolation]] = []
    for k, o in enumerate(oracles):
        if o.step is not None:
            for i, s in enumerate(trace):
                detail = o.step(s)
                if detail is not None:
                    out.append((i, k, OracleViolation(o.name, i, detail)))
        else:
            hit = o.trace(trace)
            if hit is not None:
                out.append((hit[0], k, OracleViolation(o.name, hit[0], hit[1])))
    out.sort(key=lambda t: t[:2])
    return [v for _, _, v in out]


def violations_json(violations: Sequence[OracleViolation]) -> str:
    return json.dumps([v.to_dict() for v in violations], indent=1)


def step_from_dict(d: dict[str, Any]) -> TraceStep:
    """Build a trace step from plain data, for hand-written traces."""
    return TraceStep(
        turn=d.get("turn", 0),
        command=d.get("command"),
        digest=d.get("digest", ""),
        position=tuple(d.get("position", (0, 0))),
        properties=dict(d.get("properties", {})),
        on_wall=bool(d.get("onWall", False)),
        seen_types=frozenset(d.get("seenTypes", ())),
        goal=d.get("goal"),
    )


def step_to_dict(s: TraceStep) -> dict[str, Any]:
    d = asdict(s)
    return {
        "turn": d["turn"],
        "command": d["command"],
        "digest": d["digest"],
        "position": list(d["position"]),
        "properties": d["properties"],
        "onWall": d["on_wall"],
        "seenTypes": sorted(d["seen_types"]),
        "goal": d["goal"],
    }
