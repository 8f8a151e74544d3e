from agentplay.core.agent import (
    AgentStatus,
    BeliefState,
    Environment,
    TestAgent,
    TraceStep,
    TransportError,
    deliberate,
)
from agentplay.core.goals import (
    DEFAULT_BUDGET,
    FirstOfGoal,
    GoalStructure,
    PrimitiveGoal,
    Repeat,
    Seq,
    Status,
    evaluate_goal,
)
from agentplay.core.tactics import ABORT, Action, AnyOf, FirstOf, Tactic, enabled_actions, select_action
from agentplay.core.world import (
    OutOfOrderObservation,
    WorldEntity,
    WorldModel,
    digest,
    merge_observation,
)

__all__ = [
    "ABORT",
    "Action",
    "AgentStatus",
    "AnyOf",
    "BeliefState",
    "DEFAULT_BUDGET",
    "Environment",
    "FirstOf",
    "FirstOfGoal",
    "GoalStructure",
    "OutOfOrderObservation",
    "PrimitiveGoal",
    "Repeat",
    "Seq",
    "Status",
    "Tactic",
    "TestAgent",
    "TraceStep",
    "TransportError",
    "WorldEntity",
    "WorldModel",
    "deliberate",
    "digest",
    "enabled_actions",
    "evaluate_goal",
    "merge_observation",
    "select_action",
]
