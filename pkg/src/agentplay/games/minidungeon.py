"""MiniDungeon: a small turn-based, Nethack-like dungeon crawler.

Players walk a stack of grid levels, fight wandering monsters, pick up
potions and scrolls, and try scrolls on each level's shrine. Only the level's
holy scroll cleanses the shrine, which then acts as a portal to the next
level; cleansing the last shrine wins the game.

The game loop carries implanted assertions (occupancy and hp bounds). With
``debug`` on, violations are recorded in :attr:`MiniDungeon.violations`
instead of being raised, so a play session can collect them all.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable

from agentplay.core.world import WorldEntity, WorldModel

Pos = tuple[int, int]

PLAYER_HP_MAX = 20
PLAYER_DAMAGE = 1
RAGE_DAMAGE = 2
RAGE_TURNS = 9
MONSTER_HP = 3
MONSTER_DAMAGE = 1
HEAL_AMOUNT = 5

MOVES = {"w": (0, -1), "a": (-1, 0), "s": (0, 1), "d": (1, 0)}
VALID_KEYS = frozenset("wasderq")

# Mutation switches used as test fixtures.
MUTANTS = frozenset({"buggyMonsterMove", "wallWalk"})


class GameError(Exception):
    pass


class InvalidKey(GameError):
    pass


class GameOver(GameError):
    pass


class InfeasibleConfig(ValueError):
    pass


@dataclass
class GameConfig:
    level_count: int = 2
    grid_size: int = 20
    monsters_per_level: int = 4
    scrolls_per_level: int = 3
    heal_potions: int = 2
    rage_potions: int = 1
    player_count: int = 1
    bag_capacity: int = 2
    view_distance: int = 3
    seed: int = 0
    wall_density: float = 0.15

    def validate(self) -> None:
        counts = (
            self.level_count, self.monsters_per_level, self.scrolls_per_level,
            self.heal_potions, self.rage_potions,
        )
        if any(c < 0 for c in counts):
            raise InfeasibleConfig("counts must be non-negative")
        if self.level_count < 1:
            raise InfeasibleConfig("need at least one level")
        if self.player_count not in (1, 2):
            raise InfeasibleConfig("player_count must be 1 or 2")
        if self.bag_capacity not in (1, 2):
            raise InfeasibleConfig("bag_capacity must be 1 or 2")
        if self.view_distance < 1:
            raise InfeasibleConfig("view_distance must be at least 1")
        if self.grid_size < 3:
            raise InfeasibleConfig("grid_size must be at least 3")
        if not 0.0 <= self.wall_density < 1.0:
            raise InfeasibleConfig("wall_density must lie in [0, 1)")


@dataclass
class Player:
    id: str
    level: int
    pos: Pos
    hp: int = PLAYER_HP_MAX
    hp_max: int = PLAYER_HP_MAX
    bag: list[str] = field(default_factory=list)
    bag_capacity: int = 2
    score: int = 0
    rage_turns_left: int = 0
    alive: bool = True


@dataclass
class Monster:
    id: str
    level: int
    pos: Pos
    hp: int = MONSTER_HP
    alive: bool = True


@dataclass
class Item:
    id: str
    kind: str  # "scroll" | "healpot" | "ragepot"
    level: int
    pos: Pos
    holy: bool = False
    holder: str | None = None
    used: bool = False


@dataclass
class Shrine:
    id: str
    level: int
    pos: Pos
    cleansed: bool = False


@dataclass
class Level:
    index: int
    rows: list[str]  # '#' wall, '.' floor
    start: Pos

    def is_wall(self, p: Pos) -> bool:
        x, y = p
        return not (0 <= y < len(self.rows) and 0 <= x < len(self.rows[y])) or self.rows[y][x] == "#"

    def floor_cells(self) -> list[Pos]:
        return [(x, y) for y, row in enumerate(self.rows) for x, c in enumerate(row) if c == "."]

    def walkable(self) -> list[list[bool]]:
        return [[c == "." for c in row] for row in self.rows]


@dataclass
class Violation:
    turn: int
    check: str
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _reachable(level_rows: list[list[str]], start: Pos, blocked: Pos | None = None) -> set[Pos]:
    seen = {start}
    todo = deque([start])
    while todo:
        x, y = todo.popleft()
        for dx, dy in MOVES.values():
            nb = (x + dx, y + dy)
            if nb in seen or nb == blocked:
                continue
            if level_rows[nb[1]][nb[0]] == ".":
                seen.add(nb)
                todo.append(nb)
    return seen


class MiniDungeon:
    """A running MiniDungeon game; also its own agent Environment."""

    def __init__(
        self,
        config: GameConfig,
        *,
        debug: bool = True,
        mutants: Iterable[str] = (),
    ) -> None:
        config.validate()
        self.config = config
        self.debug = debug
        self.mutants = frozenset(mutants)
        unknown = self.mutants - MUTANTS
        if unknown:
            raise ValueError(f"unknown mutants: {sorted(unknown)}")
        self.rng = random.Random(config.seed)
        self.turn = 0
        self.status = "running"
        self.violations: list[Violation] = []
        self.levels: list[Level] = []
        self.players: dict[str, Player] = {}
        self.monsters: dict[str, Monster] = {}
        self.items: dict[str, Item] = {}
        self.shrines: dict[int, Shrine] = {}
        self.occupancy: dict[int, dict[Pos, str]] = {}
        for n in range(1, config.level_count + 1):
            self._generate_level(n)
        self._place_players()

    # -- generation ----------------------------------------------------------

    def _generate_level(self, n: int) -> None:
        cfg, rng = self.config, self.rng
        size = cfg.grid_size
        start = (1, 1)
        interior = (size - 2) ** 2
        # redraw until the start is not boxed into a small pocket
        for _ in range(100):
            rows = [["#"] * size for _ in range(size)]
            for y in range(1, size - 1):
                for x in range(1, size - 1):
                    rows[y][x] = "#" if rng.random() < cfg.wall_density else "."
            rows[1][1] = "."
            keep = _reachable(rows, start)
            if len(keep) >= 0.5 * interior * (1.0 - cfg.wall_density):
                break
        for y in range(size):
            for x in range(size):
                if rows[y][x] == "." and (x, y) not in keep:
                    rows[y][x] = "#"
        floor = sorted(keep)
        needed = (
            1 + cfg.monsters_per_level + cfg.scrolls_per_level
            + cfg.heal_potions + cfg.rage_potions + cfg.player_count
        )
        if len(floor) < needed:
            raise InfeasibleConfig(f"level {n} has {len(floor)} floor cells, needs {needed}")

        # the shrine must not cut the level in two
        free = [p for p in floor if p != start]
        rng.shuffle(free)
        shrine_pos = None
        for p in free:
            if len(_reachable(rows, start, blocked=p)) == len(floor) - 1:
                shrine_pos = p
                break
        if shrine_pos is None:
            raise InfeasibleConfig(f"level {n}: no shrine spot keeps the level connected")
        free.remove(shrine_pos)
        self.shrines[n] = Shrine(f"shrine{n}", n, shrine_pos)

        far = [p for p in free if abs(p[0] - start[0]) + abs(p[1] - start[1]) > 3]
        near = [p for p in free if abs(p[0] - start[0]) + abs(p[1] - start[1]) <= 3]
        if len(far) < cfg.monsters_per_level:
            far, near = free, []
        mon_cells = far[: cfg.monsters_per_level]
        rest = far[cfg.monsters_per_level:] + near
        rng.shuffle(rest)
        self.occupancy[n] = {}
        for i, p in enumerate(mon_cells):
            m = Monster(f"M{n}.{i}", n, p)
            self.monsters[m.id] = m
            self.occupancy[n][p] = m.id
        cursor = 0
        for kind, prefix, count in (
            ("scroll", "S", cfg.scrolls_per_level),
            ("healpot", "H", cfg.heal_potions),
            ("ragepot", "R", cfg.rage_potions),
        ):
            for i in range(count):
                item = Item(f"{prefix}{n}.{i}", kind, n, rest[cursor])
                cursor += 1
                self.items[item.id] = item
        if cfg.scrolls_per_level:
            holy = rng.randrange(cfg.scrolls_per_level)
            self.items[f"S{n}.{holy}"].holy = True
        self.levels.append(Level(n, ["".join(r) for r in rows], start))

    def _free_cell_near(self, level: int, origin: Pos) -> Pos:
        lv = self.level(level)
        occ = self.occupancy[level]
        shrine = self.shrines[level].pos
        seen = {origin}
        todo = deque([origin])
        while todo:
            p = todo.popleft()
            if p not in occ and p != shrine and not lv.is_wall(p):
                return p
            for dx, dy in MOVES.values():
                nb = (p[0] + dx, p[1] + dy)
                if nb not in seen and not lv.is_wall(nb):
                    seen.add(nb)
                    todo.append(nb)
        raise InfeasibleConfig(f"no free cell on level {level}")

    def _place_players(self) -> None:
        lv = self.levels[0]
        for i in range(1, self.config.player_count + 1):
            pos = self._free_cell_near(1, lv.start)
            p = Player(f"player{i}", 1, pos, bag_capacity=self.config.bag_capacity)
            self.players[p.id] = p
            self.occupancy[1][pos] = p.id

    # -- queries ---------------------------------------------------------------

    def level(self, n: int) -> Level:
        return self.levels[n - 1]

    def player(self, player_id: str) -> Player:
        try:
            return self.players[player_id]
        except KeyError:
            raise GameError(f"no such player: {player_id}") from None

    def items_at(self, level: int, pos: Pos) -> list[Item]:
        return [
            it for it in self.items.values()
            if it.level == level and it.pos == pos and it.holder is None and not it.used
        ]

    # -- turn logic --------------------------------------------------------------

    def command(self, player_id: str, key: str) -> WorldModel:
        """Apply one key press by ``player_id`` and run the rest of the turn."""
        if self.status != "running":
            raise GameOver(f"game is {self.status}")
        if key not in VALID_KEYS:
            raise InvalidKey(f"invalid key {key!r}")
        pl = self.player(player_id)
        if not pl.alive:
            raise GameOver(f"{player_id} is dead")
        if key == "q":
            self.status = "quit"
            self.turn += 1
            return self.observe(player_id)

        level_before = pl.level
        if key in MOVES:
            self._player_move(pl, MOVES[key])
        elif key == "e":
            self._quaff(pl, "healpot")
        elif key == "r":
            self._quaff(pl, "ragepot")
        if key != "r" and pl.rage_turns_left > 0:
            pl.rage_turns_left -= 1

        if self.status == "running":
            self._monsters_turn(level_before)
        self.turn += 1
        if self.status == "running" and not any(p.alive for p in self.players.values()):
            self.status = "lost"
        if self.debug:
            self.violations.extend(implanted_assertions(self))
        return self.observe(player_id)

    def _quaff(self, pl: Player, kind: str) -> None:
        for iid in pl.bag:
            it = self.items[iid]
            if it.kind == kind:
                pl.bag.remove(iid)
                it.holder = None
                it.used = True
                it.level, it.pos = pl.level, pl.pos
                if kind == "healpot":
                    pl.hp = min(pl.hp_max, pl.hp + HEAL_AMOUNT)
                else:
                    pl.rage_turns_left = RAGE_TURNS
                return

    def _player_move(self, pl: Player, delta: Pos) -> None:
        lv = self.level(pl.level)
        dst = (pl.pos[0] + delta[0], pl.pos[1] + delta[1])
        occ = self.occupancy[pl.level]
        shrine = self.shrines[pl.level]
        if lv.is_wall(dst) and "wallWalk" not in self.mutants:
            return
        if not (0 <= dst[1] < len(lv.rows) and 0 <= dst[0] < len(lv.rows[0])):
            return
        who = occ.get(dst)
        if who is not None:
            if who in self.monsters:
                self._attack(pl, self.monsters[who])
            return
        if dst == shrine.pos:
            if not shrine.cleansed:
                self._use_scroll(pl, shrine)
            elif pl.level < len(self.levels):
                self._teleport(pl, pl.level + 1)
            return
        del occ[pl.pos]
        pl.pos = dst
        occ[dst] = pl.id
        for it in self.items_at(pl.level, dst):
            if len(pl.bag) >= pl.bag_capacity:
                break
            it.holder = pl.id
            pl.bag.append(it.id)

    def _attack(self, pl: Player, m: Monster) -> None:
        m.hp -= RAGE_DAMAGE if pl.rage_turns_left > 0 else PLAYER_DAMAGE
        if m.hp <= 0:
            m.hp = 0
            m.alive = False
            del self.occupancy[m.level][m.pos]
            pl.score += 10

    def _use_scroll(self, pl: Player, shrine: Shrine) -> None:
        scroll = next((self.items[i] for i in pl.bag if self.items[i].kind == "scroll"), None)
        if scroll is None:
            return
        pl.bag.remove(scroll.id)
        scroll.holder = None
        scroll.used = True
        scroll.level, scroll.pos = pl.level, pl.pos
        if scroll.holy and scroll.level == shrine.level:
            shrine.cleansed = True
            pl.score += 100
            if shrine.level == len(self.levels):
                self.status = "won"

    def _teleport(self, pl: Player, level: int) -> None:
        del self.occupancy[pl.level][pl.pos]
        pl.level = level
        pl.pos = self._free_cell_near(level, self.level(level).start)
        self.occupancy[level][pl.pos] = pl.id

    def _monsters_turn(self, level: int) -> None:
        lv = self.level(level)
        occ = self.occupancy[level]
        shrine = self.shrines[level].pos
        buggy = "buggyMonsterMove" in self.mutants
        victims = {p.pos: p for p in self.players.values() if p.alive and p.level == level}
        for m in sorted(self.monsters.values(), key=lambda m: m.id):
            if not m.alive or m.level != level:
                continue
            target = None
            for dx, dy in MOVES.values():
                p = victims.get((m.pos[0] + dx, m.pos[1] + dy))
                if p is not None and p.alive:
                    target = p
                    break
            if target is not None:
                target.hp = max(0, target.hp - MONSTER_DAMAGE)
                if target.hp == 0:
                    target.alive = False
                    del occ[target.pos]
                    victims.pop(target.pos, None)
                continue
            options = []
            for dx, dy in MOVES.values():
                sq = (m.pos[0] + dx, m.pos[1] + dy)
                if lv.is_wall(sq) or sq == shrine:
                    continue
                if not buggy and sq in occ:
                    continue
                options.append(sq)
            if not options:
                continue
            sq = options[self.rng.randrange(len(options))]
            # implanted assertion: the destination square must be empty
            if self.debug and occ.get(sq) is not None:
                self.violations.append(
                    Violation(self.turn, "monsterMoveEmpty", f"{m.id} moved onto {sq} held by {occ[sq]}")
                )
            if occ.get(m.pos) == m.id:
                del occ[m.pos]
            m.pos = sq
            occ[sq] = m.id

    # -- observation ------------------------------------------------------------

    def observe(self, player_id: str) -> WorldModel:
        pl = self.player(player_id)
        t = self.turn
        r = self.config.view_distance
        n = pl.level
        lv = self.level(n)
        px, py = pl.pos

        def near(p: Pos) -> bool:
            return max(abs(p[0] - px), abs(p[1] - py)) <= r

        ents: dict[str, WorldEntity] = {}

        def add(e: WorldEntity) -> None:
            ents[e.id] = e

        for y in range(max(0, py - r), min(len(lv.rows), py + r + 1)):
            row = lv.rows[y]
            for x in range(max(0, px - r), min(len(row), px + r + 1)):
                kind = "wall" if row[x] == "#" else "floor"
                add(WorldEntity(f"{kind}:{n}:{x},{y}", kind, (x, y), t, {"level": n}))

        add(self._player_entity(pl, t))
        for other in self.players.values():
            if other.id != pl.id and other.level == n and near(other.pos):
                add(self._player_entity(other, t))
        for m in self.monsters.values():
            if m.level == n and near(m.pos):
                add(WorldEntity(m.id, "monster", m.pos, t, {"level": n, "hp": m.hp}, alive=m.alive))
        shrine = self.shrines[n]
        if near(shrine.pos):
            add(WorldEntity(shrine.id, "shrine", shrine.pos, t, {"level": n, "cleansed": shrine.cleansed}))
        for it in self.items.values():
            if it.holder is not None:
                holder = self.players[it.holder]
                if holder.level == n and near(holder.pos):
                    add(WorldEntity(it.id, it.kind, holder.pos, t,
                                    {"level": n, "holder": holder.id, "inBag": True}))
            elif it.level == n and near(it.pos):
                add(WorldEntity(it.id, it.kind, it.pos, t, {"level": n, "inBag": False}, alive=not it.used))

        props = {
            "hp": pl.hp,
            "hpMax": pl.hp_max,
            "bagContents": list(pl.bag),
            "bagKinds": [self.items[i].kind for i in pl.bag],
            "bagCapacity": pl.bag_capacity,
            "score": pl.score,
            "currentLevel": n,
            "rageTurnsLeft": pl.rage_turns_left,
            "alive": pl.alive,
            "status": self.status,
        }
        return WorldModel(player_id, t, ents, pl.pos, props)

    def _player_entity(self, pl: Player, t: int) -> WorldEntity:
        return WorldEntity(
            pl.id, "player", pl.pos, t,
            {"level": pl.level, "hp": pl.hp, "hpMax": pl.hp_max},
            alive=pl.alive,
        )

    # -- debugging ------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "turn": self.turn,
            "status": self.status,
            "levels": [{"index": lv.index, "rows": lv.rows, "start": list(lv.start)} for lv in self.levels],
            "players": [asdict(p) for p in self.players.values()],
            "monsters": [asdict(m) for m in self.monsters.values()],
            "items": [asdict(i) for i in self.items.values()],
            "shrines": [asdict(s) for s in self.shrines.values()],
        }

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def state_digest(self) -> str:
        return hashlib.sha256(self.dump_json().encode()).hexdigest()


def implanted_assertions(game: MiniDungeon) -> list[Violation]:
    """Invariant checks the game loop runs after every turn in debug mode.

    The check that a moving monster lands on an empty square sits inside the
    monster move itself; see :meth:`MiniDungeon._monsters_turn`.
    """
    out: list[Violation] = []
    t = game.turn
    for n, occ in game.occupancy.items():
        live: dict[Pos, list[str]] = {}
        for m in game.monsters.values():
            if m.alive and m.level == n:
                live.setdefault(m.pos, []).append(m.id)
        for p in game.players.values():
            if p.alive and p.level == n:
                live.setdefault(p.pos, []).append(p.id)
        for pos, ids in live.items():
            if len(ids) > 1:
                out.append(Violation(t, "singleOccupant", f"level {n} square {pos} holds {sorted(ids)}"))
            if occ.get(pos) not in ids:
                out.append(Violation(t, "occupancyMap", f"level {n} square {pos}: map says {occ.get(pos)}, actual {sorted(ids)}"))
        for pos, who in occ.items():
            if pos not in live or who not in live[pos]:
                out.append(Violation(t, "occupancyMap", f"level {n} square {pos}: stale entry {who}"))
    for p in game.players.values():
        if not 0 <= p.hp <= p.hp_max:
            out.append(Violation(t, "hpBounds", f"{p.id} hp {p.hp} outside [0, {p.hp_max}]"))
        if len(p.bag) > p.bag_capacity:
            out.append(Violation(t, "bagCapacity", f"{p.id} carries {len(p.bag)} > {p.bag_capacity}"))
    for m in game.monsters.values():
        if not 0 <= m.hp <= MONSTER_HP:
            out.append(Violation(t, "hpBounds", f"{m.id} hp {m.hp} outside [0, {MONSTER_HP}]"))
    return out


def new_minidungeon(config: GameConfig, **kwargs: Any) -> MiniDungeon:
    return MiniDungeon(config, **kwargs)
