from collections import deque

import pytest

from agentplay.games import GameConfig, MiniDungeon
from agentplay.games.minidungeon import (
    HEAL_AMOUNT,
    GameOver,
    InfeasibleConfig,
    InvalidKey,
    Item,
    Monster,
    implanted_assertions,
)
from agentplay.games.soak import soak


def bare(seed=0, **kw):
    """A small game with nothing on it but the shrine and the player."""
    cfg = dict(level_count=2, grid_size=12, monsters_per_level=0, scrolls_per_level=1,
               heal_potions=0, rage_potions=0, wall_density=0.0, seed=seed)
    cfg.update(kw)
    return MiniDungeon(GameConfig(**cfg))


def put_player(game, pos, pid="player1"):
    pl = game.players[pid]
    occ = game.occupancy[pl.level]
    del occ[pl.pos]
    pl.pos = pos
    occ[pos] = pid


def put_monster(game, mid, pos, level=1):
    game.monsters[mid] = Monster(mid, level, pos)
    game.occupancy[level][pos] = mid


def put_shrine(game, pos, level=1):
    game.shrines[level].pos = pos


def give(game, kind, holy=False, pid="player1"):
    pl = game.players[pid]
    iid = f"X{len(game.items)}"
    game.items[iid] = Item(iid, kind, pl.level, pl.pos, holy=holy, holder=pid)
    pl.bag.append(iid)
    return iid


# -- generation -------------------------------------------------------------------

def test_same_config_gives_same_game():
    a, b = MiniDungeon(GameConfig(seed=5)), MiniDungeon(GameConfig(seed=5))
    assert a.state_digest() == b.state_digest()
    assert MiniDungeon(GameConfig(seed=6)).state_digest() != a.state_digest()


@pytest.mark.parametrize("seed", range(10))
def test_exactly_one_holy_scroll_per_level(seed):
    g = MiniDungeon(GameConfig(seed=seed, scrolls_per_level=3))
    for n in (1, 2):
        scrolls = [i for i in g.items.values() if i.kind == "scroll" and i.level == n]
        assert len(scrolls) == 3
        assert sum(i.holy for i in scrolls) == 1
    assert len(g.shrines) == 2


def reachable(rows, start):
    seen, todo = {start}, deque([start])
    while todo:
        x, y = todo.popleft()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb not in seen and rows[nb[1]][nb[0]] == ".":
                seen.add(nb)
                todo.append(nb)
    return seen


@pytest.mark.parametrize("seed", range(20))
def test_every_floor_cell_is_reachable(seed):
    g = MiniDungeon(GameConfig(seed=seed, wall_density=0.3))
    for lv in g.levels:
        assert reachable(lv.rows, lv.start) == set(lv.floor_cells())
        # the shrine does not split the level
        shrine = g.shrines[lv.index].pos
        rows = [r[:shrine[0]] + "#" + r[shrine[0] + 1:] if y == shrine[1] else r for y, r in enumerate(lv.rows)]
        assert len(reachable(rows, lv.start)) == len(lv.floor_cells()) - 1


def test_objects_on_distinct_floor_cells():
    g = MiniDungeon(GameConfig(seed=3, player_count=2))
    for lv in g.levels:
        n = lv.index
        cells = [m.pos for m in g.monsters.values() if m.level == n]
        cells += [i.pos for i in g.items.values() if i.level == n]
        cells += [g.shrines[n].pos] + [p.pos for p in g.players.values() if p.level == n]
        assert len(cells) == len(set(cells))
        assert all(not lv.is_wall(c) for c in cells)


def test_infeasible_configs_rejected():
    with pytest.raises(InfeasibleConfig):
        MiniDungeon(GameConfig(grid_size=4, monsters_per_level=20))
    with pytest.raises(InfeasibleConfig):
        MiniDungeon(GameConfig(bag_capacity=3))
    with pytest.raises(InfeasibleConfig):
        MiniDungeon(GameConfig(view_distance=0))
    with pytest.raises(InfeasibleConfig):
        MiniDungeon(GameConfig(heal_potions=-1))


# -- commands -------------------------------------------------------------------------

def test_quit_ends_the_game():
    g = bare()
    g.command("player1", "q")
    assert g.status == "quit"
    with pytest.raises(GameOver):
        g.command("player1", "w")


def test_invalid_key_changes_nothing():
    g = bare()
    before = g.state_digest()
    with pytest.raises(InvalidKey):
        g.command("player1", "x")
    assert g.state_digest() == before and g.turn == 0


def test_moves_follow_keys():
    g = bare()
    put_player(g, (5, 5))
    for key, pos in (("w", (5, 4)), ("a", (4, 4)), ("s", (4, 5)), ("d", (5, 5))):
        g.command("player1", key)
        assert g.players["player1"].pos == pos


def test_walking_into_a_wall_still_takes_a_turn():
    g = bare(monsters_per_level=1)
    put_player(g, (1, 1))
    m = next(iter(g.monsters.values()))
    before = m.pos
    g.command("player1", "w")
    assert g.players["player1"].pos == (1, 1)
    assert g.turn == 1
    assert m.pos != before


def test_holy_scroll_cleanses_shrine_then_portal_teleports():
    g = bare()
    put_player(g, (5, 5))
    put_shrine(g, (5, 4))
    give(g, "scroll", holy=True)
    g.command("player1", "w")
    assert g.shrines[1].cleansed and g.players["player1"].bag == []
    assert g.players["player1"].level == 1
    g.command("player1", "w")
    assert g.players["player1"].level == 2
    assert g.status == "running"


def test_unholy_scroll_is_used_up():
    g = bare()
    put_player(g, (5, 5))
    put_shrine(g, (5, 4))
    give(g, "scroll", holy=False)
    g.command("player1", "w")
    assert not g.shrines[1].cleansed
    assert g.players["player1"].bag == []


def test_bumping_shrine_without_scroll_does_nothing():
    g = bare()
    put_player(g, (5, 5))
    put_shrine(g, (5, 4))
    g.command("player1", "w")
    assert not g.shrines[1].cleansed and g.players["player1"].pos == (5, 5)


def test_cleansing_last_shrine_wins():
    g = bare(level_count=1)
    put_player(g, (5, 5))
    put_shrine(g, (6, 5))
    give(g, "scroll", holy=True)
    g.command("player1", "d")
    assert g.status == "won"


def test_pickup_respects_bag_capacity():
    g = bare(bag_capacity=1)
    put_player(g, (5, 5))
    held = give(g, "healpot")
    g.items["loose"] = Item("loose", "ragepot", 1, (5, 6))
    g.command("player1", "s")
    assert g.players["player1"].bag == [held]
    assert g.items["loose"].holder is None


def test_heal_potion_caps_at_max():
    g = bare()
    pl = g.players["player1"]
    pl.hp = pl.hp_max - 2
    give(g, "healpot")
    g.command("player1", "e")
    assert pl.hp == pl.hp_max and pl.bag == []
    pl.hp = 3
    give(g, "healpot")
    g.command("player1", "e")
    assert pl.hp == 3 + HEAL_AMOUNT


def test_rage_doubles_damage():
    g = bare()
    put_player(g, (5, 5))
    put_monster(g, "M", (5, 4))
    give(g, "ragepot")
    g.command("player1", "r")
    assert g.players["player1"].rage_turns_left > 0
    g.command("player1", "w")
    assert g.monsters["M"].hp == 1


def test_adjacent_monster_attacks():
    g = bare()
    put_player(g, (1, 1))
    put_monster(g, "M", (2, 1))
    hp = g.players["player1"].hp
    g.command("player1", "w")
    assert g.players["player1"].hp == hp - 1


def test_killed_player_loses():
    g = bare(level_count=1)
    put_player(g, (1, 1))
    put_monster(g, "M", (1, 2))
    g.players["player1"].hp = 1
    g.command("player1", "a")
    assert g.status == "lost"


# -- observation ------------------------------------------------------------------------

def test_view_radius_boundary():
    g = bare()
    put_player(g, (2, 2))
    put_monster(g, "near", (5, 2))
    put_monster(g, "far", (6, 2))
    obs = g.observe("player1")
    assert "near" in obs.entities and "far" not in obs.entities
    assert "player1" in obs.entities


def test_players_on_different_levels_do_not_see_each_other():
    g = bare(player_count=2)
    assert "player2" in g.observe("player1").entities
    g._teleport(g.players["player2"], 2)
    assert "player2" not in g.observe("player1").entities
    assert "player1" not in g.observe("player2").entities


def test_observation_timestamp_is_turn():
    g = bare()
    g.command("player1", "w")
    obs = g.observe("player1")
    assert obs.timestamp == g.turn == 1


# -- implanted assertions ---------------------------------------------------------------

def test_empty_level_has_no_violations():
    g = bare()
    for _ in range(50):
        g.command("player1", "wasd"[g.turn % 4])
    assert g.violations == [] and implanted_assertions(g) == []


def test_occupancy_corruption_detected():
    g = bare()
    put_monster(g, "M", (7, 7))
    g.occupancy[1][(8, 8)] = "ghost"
    checks = {v.check for v in implanted_assertions(g)}
    assert "occupancyMap" in checks


def test_clean_engine_soak_has_no_violations():
    r = soak(GameConfig(seed=1), 1000)
    assert r.violations == []


def test_buggy_monster_move_is_caught():
    r = soak(GameConfig(seed=1), 500, mutants=["buggyMonsterMove"], stop_at_first=True)
    assert r.first_violation_turn is not None
    assert r.violations[0].check in {"monsterMoveEmpty", "singleOccupant", "occupancyMap"}


def test_unknown_mutant_rejected():
    with pytest.raises(ValueError):
        MiniDungeon(GameConfig(), mutants=["nope"])


def test_same_commands_same_final_state():
    def play():
        g = MiniDungeon(GameConfig(seed=4))
        for i in range(200):
            if g.status != "running":
                break
            g.command("player1", "wasder"[(i * 7) % 6])
        return g.state_digest()

    assert play() == play()
