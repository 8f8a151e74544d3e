import json
import random
from collections import Counter

import pytest

from agentplay.core import BeliefState
from agentplay.explorer import (
    BASIC,
    COMPOUND,
    DerivedAction,
    buttonmaze_profile,
    derive_actions,
    implanted_assertion_oracle,
    minidungeon_profile,
    run_exploratory,
    select_action_asm,
)
from agentplay.games import GameConfig, MiniDungeon
from agentplay.games.buttonmaze import AGENT_ID, load_level_csv, open_level, three_room_level


def belief(maze):
    bs = BeliefState(AGENT_ID)
    bs.absorb(maze.observe(AGENT_ID))
    return bs


def compound_targets(actions):
    return sorted(a.target for a in actions if a.kind == COMPOUND)


def test_no_interactables_gives_moves_only():
    text = "w,w,w,w,w\nw,f,f,f,w\nw,w,w,w,w\n\n"
    bs = belief(load_level_csv(text))
    actions = derive_actions(bs, bs.graph, buttonmaze_profile())
    assert [a.label for a in actions] == ["w", "a", "s", "d"]


def test_three_reachable_buttons_give_three_compounds():
    text = "w,w,w,w,w,w\nw,b0,f,b1,b2,w\nw,w,w,w,w,w\n\n"
    bs = belief(load_level_csv(text))
    actions = derive_actions(bs, bs.graph, buttonmaze_profile())
    assert compound_targets(actions) == ["b0", "b1", "b2"]


def test_button_behind_closed_door_excluded_until_open():
    maze = load_level_csv(three_room_level(), view_distance=20)
    bs = belief(maze)
    assert compound_targets(derive_actions(bs, bs.graph, buttonmaze_profile())) == ["b0"]
    maze.door_open["d0"] = True
    bs.absorb(maze.observe(AGENT_ID))
    assert compound_targets(derive_actions(bs, bs.graph, buttonmaze_profile())) == ["b0", "b1"]


def test_derived_action_shape():
    with pytest.raises(ValueError):
        DerivedAction(COMPOUND)
    with pytest.raises(ValueError):
        DerivedAction(BASIC)


def test_untried_target_always_preferred():
    actions = [DerivedAction(COMPOUND, target=f"b{i}", mode="press") for i in range(6)]
    actions += [DerivedAction(BASIC, key=k) for k in "wasd"]
    rng = random.Random(0)
    tried = {f"b{i}" for i in range(5)}
    assert all(select_action_asm(actions, tried, rng).target == "b5" for _ in range(200))


def test_all_tried_is_uniform():
    actions = [DerivedAction(COMPOUND, target="b0", mode="press")] + [DerivedAction(BASIC, key=k) for k in "wasd"]
    rng = random.Random(1)
    n = 10_000
    counts = Counter(select_action_asm(actions, {"b0"}, rng).label for _ in range(n))
    assert len(counts) == 5
    assert all(abs(c / n - 0.2) < 0.02 for c in counts.values())


def test_asm_is_seeded_and_rejects_empty():
    actions = [DerivedAction(BASIC, key=k) for k in "wasd"]
    a = [select_action_asm(actions, set(), random.Random(4)).key for _ in range(20)]
    b = [select_action_asm(actions, set(), random.Random(4)).key for _ in range(20)]
    assert a == b
    with pytest.raises(ValueError):
        select_action_asm([], set(), random.Random(0))


def open_maze(seed, crash=None):
    text = open_level(12, seed=seed)
    return lambda: load_level_csv(text, crash_button=crash)


def test_open_level_gets_most_buttons_tried():
    report = run_exploratory(open_maze(0), buttonmaze_profile(), 300, seed=0)
    assert report.unique_interactions >= 11
    assert report.actions == 300
    assert report.violations == []


def test_budget_one_is_one_action():
    report = run_exploratory(open_maze(1), buttonmaze_profile(), 1, seed=1)
    assert report.actions == 1
    with pytest.raises(ValueError):
        run_exploratory(open_maze(1), buttonmaze_profile(), 0)


def test_crashing_button_is_reported_and_run_continues():
    report = run_exploratory(open_maze(2, crash="b3"), buttonmaze_profile(), 200, seed=2)
    crashes = [v for v in report.violations if v.oracle == "crash"]
    assert crashes and "b3" in crashes[0].detail and "GameCrash" in crashes[0].detail
    assert report.restarts >= 1
    assert report.actions == 200


def test_crash_can_stop_the_run():
    report = run_exploratory(open_maze(2, crash="b3"), buttonmaze_profile(), 500, seed=2, restart_on_crash=False)
    assert report.violations[-1].oracle == "crash"
    assert report.actions < 500


def test_stuck_oracle():
    text = "w,w,w\nw,f,w\nw,w,w\n\n"
    report = run_exploratory(lambda: load_level_csv(text), buttonmaze_profile(), 120, seed=0, stuck_window=50)
    stuck = [v for v in report.violations if v.oracle == "stuck"]
    assert len(stuck) == 2


def test_report_json_fields():
    doc = json.loads(run_exploratory(open_maze(3), buttonmaze_profile(), 30, seed=3).to_json())
    assert {"actions", "uniqueInteractions", "violations", "seed"} <= set(doc)


def test_same_seed_same_report():
    a = run_exploratory(open_maze(4), buttonmaze_profile(), 80, seed=5).to_dict()
    b = run_exploratory(open_maze(4), buttonmaze_profile(), 80, seed=5).to_dict()
    assert a == b


def test_minidungeon_exploration_with_game_oracle():
    cfg = GameConfig(seed=7)
    clean = run_exploratory(lambda: MiniDungeon(cfg), minidungeon_profile(), 150, seed=7,
                            oracles=[("implanted", implanted_assertion_oracle())])
    assert not [v for v in clean.violations if v.oracle == "implanted"]
    buggy = run_exploratory(lambda: MiniDungeon(cfg, mutants=["buggyMonsterMove"]), minidungeon_profile(), 300,
                            seed=7, oracles=[("implanted", implanted_assertion_oracle())])
    assert [v for v in buggy.violations if v.oracle == "implanted"]


def test_tried_interactions_only_grow():
    seen = []
    make = open_maze(5)
    for budget in (10, 40, 120):
        seen.append(set(run_exploratory(make, buttonmaze_profile(), budget, seed=9).history.tried_interactions))
    assert seen[0] <= seen[1] <= seen[2]
