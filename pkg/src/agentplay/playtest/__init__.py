from agentplay.playtest.oracles import (
    BAG_CAPACITY,
    BUILTIN_ORACLES,
    EVENTUALLY_HURT,
    HP_POSITIVE,
    NO_WALL_WALK,
    OracleViolation,
    TraceOracle,
    check_trace_oracles,
    step_from_dict,
)
from agentplay.playtest.session import PlaytestReport, playtest_config, run_playtest
from agentplay.playtest.solver import SolverSpec, cleansed, interacted, shrine_playtest, solver
from agentplay.playtest.tactics import entity_in_close_range, survival_tactic

__all__ = [
    "BAG_CAPACITY",
    "BUILTIN_ORACLES",
    "EVENTUALLY_HURT",
    "HP_POSITIVE",
    "NO_WALL_WALK",
    "OracleViolation",
    "PlaytestReport",
    "SolverSpec",
    "TraceOracle",
    "check_trace_oracles",
    "cleansed",
    "entity_in_close_range",
    "interacted",
    "playtest_config",
    "run_playtest",
    "shrine_playtest",
    "solver",
    "step_from_dict",
    "survival_tactic",
]
