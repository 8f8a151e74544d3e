from agentplay.explorer.actions import (
    BASIC,
    BUMP,
    COMPOUND,
    PRESS,
    STEP,
    DerivedAction,
    GameProfile,
    buttonmaze_profile,
    derive_actions,
    minidungeon_profile,
    reach_and_interact,
    select_action_asm,
)
from agentplay.explorer.session import (
    STUCK_WINDOW,
    ExplorationHistory,
    ExplorationReport,
    ExplorationViolation,
    implanted_assertion_oracle,
    run_exploratory,
    state_digest,
)

__all__ = [
    "BASIC",
    "BUMP",
    "COMPOUND",
    "PRESS",
    "STEP",
    "STUCK_WINDOW",
    "DerivedAction",
    "ExplorationHistory",
    "ExplorationReport",
    "ExplorationViolation",
    "GameProfile",
    "buttonmaze_profile",
    "derive_actions",
    "implanted_assertion_oracle",
    "minidungeon_profile",
    "reach_and_interact",
    "run_exploratory",
    "select_action_asm",
    "state_digest",
]
