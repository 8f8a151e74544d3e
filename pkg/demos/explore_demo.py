"""Explore an open button room with one faulty button, then a dungeon."""

from agentplay.explorer import buttonmaze_profile, implanted_assertion_oracle, minidungeon_profile, run_exploratory
from agentplay.games import GameConfig, MiniDungeon
from agentplay.games.buttonmaze import load_level_csv, open_level

text = open_level(12, seed=0)
r = run_exploratory(lambda: load_level_csv(text, crash_button="b5"), buttonmaze_profile(), 300, seed=0)
print(f"button room: {r.unique_interactions}/12 buttons tried, {r.restarts} restarts")
for v in r.violations:
    print(f"  {v.oracle} after action {v.action_index}: {v.detail}")

cfg = GameConfig(seed=7)
r = run_exploratory(lambda: MiniDungeon(cfg, mutants=["buggyMonsterMove"]), minidungeon_profile(), 300, seed=7,
                    oracles=[("implanted", implanted_assertion_oracle())])
print(f"dungeon: {r.unique_interactions} entities interacted with, {len(r.violations)} violations")
for v in r.violations[:5]:
    print(f"  {v.oracle} after action {v.action_index}: {v.detail}")
