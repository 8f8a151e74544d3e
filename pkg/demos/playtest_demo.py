"""Play the two-shrine dungeon on a few seeds and print the verdicts."""

import sys

from agentplay.playtest import playtest_config, run_playtest

seeds = [int(s) for s in sys.argv[1:]] or [0, 1, 2]
for seed in seeds:
    r = run_playtest(playtest_config(seed))
    oracles = sorted({v.oracle for v in r.oracle_violations}) or "none"
    print(f"seed {seed}: {r.game_status} after {r.cycles} cycles / {r.turns} turns, oracle hits: {oracles}")
