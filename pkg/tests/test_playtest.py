import json
import random

import pytest

from agentplay.core import ABORT, Action, AgentStatus, BeliefState, PrimitiveGoal, TestAgent
from agentplay.core.tactics import select_action
from agentplay.games import GameConfig, MiniDungeon
from agentplay.games.minidungeon import Item, Monster
from agentplay.playtest import (
    BAG_CAPACITY,
    BUILTIN_ORACLES,
    NO_WALL_WALK,
    SolverSpec,
    TraceOracle,
    check_trace_oracles,
    entity_in_close_range,
    playtest_config,
    run_playtest,
    solver,
    step_from_dict,
    survival_tactic,
)
from agentplay.playtest.oracles import EVENTUALLY_HURT, step_to_dict, violations_json
from agentplay.playtest.solver import tried


def bare(**kw):
    cfg = dict(level_count=1, grid_size=8, monsters_per_level=0, scrolls_per_level=1,
               heal_potions=0, rage_potions=0, wall_density=0.0, view_distance=10, seed=0)
    cfg.update(kw)
    return MiniDungeon(GameConfig(**cfg))


def put_player(game, pos):
    pl = game.players["player1"]
    del game.occupancy[pl.level][pl.pos]
    pl.pos = pos
    game.occupancy[pl.level][pos] = "player1"


def put_monster(game, mid, pos):
    game.monsters[mid] = Monster(mid, 1, pos)
    game.occupancy[1][pos] = mid


def give(game, kind):
    pl = game.players["player1"]
    iid = f"X{len(game.items)}"
    game.items[iid] = Item(iid, kind, 1, pl.pos, holder="player1")
    pl.bag.append(iid)


def clear_items(game):
    for it in list(game.items.values()):
        it.pos = (-5, -5)


def belief_of(game):
    bs = BeliefState("player1")
    bs.absorb(game.observe("player1"))
    return bs


def choose(tactic, bs):
    return select_action(tactic, bs, random.Random(0)).name


# -- survival tactic --------------------------------------------------------------

def test_low_hp_with_heal_potion_heals_first():
    g = bare()
    clear_items(g)
    put_player(g, (3, 3))
    put_monster(g, "M", (3, 2))
    give(g, "healpot")
    give(g, "ragepot")
    g.players["player1"].hp = 4
    assert choose(survival_tactic("shrine1"), belief_of(g)) == "useHealingPot"


def test_rage_before_attack():
    g = bare()
    clear_items(g)
    put_player(g, (3, 3))
    put_monster(g, "M", (3, 2))
    give(g, "ragepot")
    assert choose(survival_tactic("shrine1"), belief_of(g)) == "useRagePot"
    g.players["player1"].rage_turns_left = 5
    assert choose(survival_tactic("shrine1"), belief_of(g)) == "attackMonster"


def test_critical_hp_does_not_attack():
    g = bare()
    clear_items(g)
    put_player(g, (3, 3))
    put_monster(g, "M", (3, 2))
    g.players["player1"].hp = 3
    assert choose(survival_tactic("shrine1"), belief_of(g)) != "attackMonster"


def test_no_monster_and_known_target_navigates():
    g = bare()
    clear_items(g)
    put_player(g, (1, 1))
    g.shrines[1].pos = (5, 5)
    assert choose(survival_tactic("shrine1"), belief_of(g)) == "navigateTo(shrine1)"


def test_unknown_target_and_no_frontier_aborts():
    g = bare()
    clear_items(g)
    assert choose(survival_tactic("nowhere"), belief_of(g)) == ABORT.name


def test_unknown_target_with_frontier_explores():
    g = bare(grid_size=20, view_distance=3)
    assert choose(survival_tactic("nowhere"), belief_of(g)) == "explore"


def test_survival_guards_are_pure():
    g = MiniDungeon(GameConfig(seed=2))
    bs = belief_of(g)
    from agentplay.core.tactics import enabled_actions

    tactic = survival_tactic("shrine1")
    first = [a.name for a in enabled_actions(tactic, bs)]
    assert [a.name for a in enabled_actions(tactic, bs)] == first


# -- close range ---------------------------------------------------------------------

def test_already_next_to_target_succeeds_without_commands():
    g = bare()
    put_player(g, (3, 3))
    g.shrines[1].pos = (3, 4)
    agent = TestAgent("player1", entity_in_close_range("shrine1"))
    assert agent.run(g, 5) is AgentStatus.SUCCEEDED
    assert agent.commands_sent == 0


def test_target_out_of_sight_is_explored_for():
    g = bare(grid_size=20, view_distance=3)
    clear_items(g)
    g.shrines[1].pos = (17, 17)
    agent = TestAgent("player1", entity_in_close_range("shrine1"))
    assert agent.run(g, 600) is AgentStatus.SUCCEEDED
    goals = [s.command for s in agent.trace]
    assert agent.trace[0].goal == "closeTo(shrine1)" and goals[0] is not None


def test_walled_off_target_aborts():
    g = bare()
    clear_items(g)
    put_player(g, (1, 1))
    g.shrines[1].pos = (5, 5)
    lv = g.levels[0]
    rows = [list(r) for r in lv.rows]
    for x, y in ((4, 5), (6, 5), (5, 4), (5, 6)):
        rows[y][x] = "#"
    lv.rows = ["".join(r) for r in rows]
    goal = entity_in_close_range("shrine1")
    agent = TestAgent("player1", goal)
    assert agent.run(g, 50) is AgentStatus.FAILED
    assert goal.fail_reason == "abort"


# -- solver -------------------------------------------------------------------------

def test_solver_spec_needs_target():
    with pytest.raises(ValueError):
        SolverSpec("player1", "scroll", "")
    assert SolverSpec("player1", "scroll", "shrine1").key == "solver:scroll:shrine1"


def test_solver_done_when_predicate_holds():
    g = bare()
    put_player(g, (3, 3))
    g.shrines[1].pos = (3, 4)
    g.shrines[1].cleansed = True
    agent = TestAgent("player1", solver(SolverSpec("player1", "scroll", "shrine1")))
    assert agent.run(g, 5) is AgentStatus.SUCCEEDED
    assert agent.commands_sent == 0


@pytest.mark.parametrize("seed", range(6))
def test_solver_tries_each_scroll_at_most_once(seed):
    g = MiniDungeon(GameConfig(level_count=1, grid_size=14, monsters_per_level=0, scrolls_per_level=3, seed=seed))
    spec = SolverSpec("player1", "scroll", "shrine1")
    agent = TestAgent("player1", solver(spec), seed)
    assert agent.run(g, 3000) is AgentStatus.SUCCEEDED
    assert g.shrines[1].cleansed and g.status == "won"
    used = tried(agent.belief, spec)
    assert len(used) == len(set(used)) <= 3
    assert sum(i.used for i in g.items.values() if i.kind == "scroll") == len(used)


def test_two_level_playtest_wins():
    report = run_playtest(playtest_config(0))
    assert report.won and report.goal_status == "succeeded"
    assert report.game_violations == []


def test_two_player_playtest_runs():
    report = run_playtest(playtest_config(1, player_count=2))
    assert report.won
    assert report.transport_errors == []


def test_playtest_report_json():
    doc = json.loads(run_playtest(playtest_config(0)).to_json())
    assert {"time", "seed", "gameStatus", "won", "cycles", "violations"} <= set(doc)


def test_playtest_is_deterministic():
    a = run_playtest(playtest_config(3)).to_dict()
    b = run_playtest(playtest_config(3)).to_dict()
    a.pop("time")
    b.pop("time")
    assert a == b


# -- oracles ----------------------------------------------------------------------

def step(**props):
    return step_from_dict({"properties": {"status": "running", "hp": 20, "hpMax": 20, **props}})


def test_hand_written_overfull_bag():
    trace = [step(bagContents=["a"], bagCapacity=2), step(bagContents=["a", "b", "c"], bagCapacity=2)]
    out = check_trace_oracles(trace, [BAG_CAPACITY])
    assert [(v.oracle, v.step_index) for v in out] == [("bagCapacity", 1)]
    assert json.loads(violations_json(out)) == [
        {"oracle": "bagCapacity", "stepIndex": 1, "detail": "bag holds 3 items, capacity 2"}]


def test_hp_zero_while_running_flagged():
    trace = [step(hp=0), step(hp=0, status="lost")]
    out = check_trace_oracles(trace, BUILTIN_ORACLES)
    assert [(v.oracle, v.step_index) for v in out] == [("hpPositive", 0)]


def test_eventually_hurt():
    calm = step_from_dict({"properties": {"hp": 20, "hpMax": 20}, "seenTypes": ["monster"]})
    hurt = step_from_dict({"properties": {"hp": 19, "hpMax": 20}, "seenTypes": ["monster"]})
    assert check_trace_oracles([calm, calm], [EVENTUALLY_HURT])[0].step_index == 1
    assert check_trace_oracles([calm, hurt], [EVENTUALLY_HURT]) == []
    # no monsters seen: nothing expected
    assert check_trace_oracles([step(), step()], [EVENTUALLY_HURT]) == []


def test_oracle_kind_is_exclusive():
    with pytest.raises(ValueError):
        TraceOracle("both", step=lambda s: None, trace=lambda t: None)
    with pytest.raises(ValueError):
        TraceOracle("neither")


def test_step_dict_round_trip():
    s = step_from_dict({"turn": 4, "command": "w", "position": [2, 3], "onWall": True, "seenTypes": ["wall"]})
    assert step_from_dict(step_to_dict(s)) == s


def walk_into_wall(mutants):
    g = MiniDungeon(GameConfig(level_count=1, grid_size=8, monsters_per_level=0, wall_density=0.0), mutants=mutants)
    put_player(g, (1, 1))
    goal = PrimitiveGoal("westward", lambda bs: False, Action("west", lambda bs: "a"), budget=3)
    agent = TestAgent("player1", goal)
    agent.run(g, 5)
    return check_trace_oracles(agent.trace, [NO_WALL_WALK])


def test_wall_oracle_fires_on_wall_walk_mutant():
    out = walk_into_wall(["wallWalk"])
    assert out and out[0].oracle == "noWallWalk"


def test_wall_oracle_quiet_on_correct_game():
    assert walk_into_wall([]) == []


def test_mutant_playtest_reports_game_violations():
    report = run_playtest(playtest_config(42), mutants=["buggyMonsterMove"])
    assert report.game_violations and not report.ok
