from agentplay.mbt.efsm import (
    EFSM,
    MalformedTest,
    SimResult,
    Transition,
    coverage,
    covered,
    efsm_from_level,
    feasible_prefix,
    random_feasible_test,
    reachable_transitions,
    simulate,
)
from agentplay.mbt.execute import ExecutionReport, LevelModelMismatch, TestResult, execute_suite, run_test
from agentplay.mbt.generation import (
    STRATEGIES,
    TestSuite,
    generate,
    generate_mosa,
    generate_mu_plus_lambda,
    generate_random,
    generate_timed,
    mosa_fitness,
)
from agentplay.mbt.translate import translate

__all__ = [
    "EFSM",
    "ExecutionReport",
    "LevelModelMismatch",
    "MalformedTest",
    "STRATEGIES",
    "SimResult",
    "TestResult",
    "TestSuite",
    "Transition",
    "coverage",
    "covered",
    "efsm_from_level",
    "execute_suite",
    "feasible_prefix",
    "generate",
    "generate_mosa",
    "generate_mu_plus_lambda",
    "generate_random",
    "generate_timed",
    "mosa_fitness",
    "random_feasible_test",
    "reachable_transitions",
    "run_test",
    "simulate",
    "translate",
]
