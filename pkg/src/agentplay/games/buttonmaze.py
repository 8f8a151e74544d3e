"""ButtonMaze: a grid of rooms separated by doors that buttons open and close.

Levels are CSV text. The first section has one grid row per line with cells
``w`` (wall), ``f`` (floor), ``b<i>`` (button i, walkable) and ``d<i>``
(door i, walkable only while open). After a blank line comes the wiring, one
``b<i>,d<j>`` pair per line. Pressing a button flips every door wired to it.
All doors start closed and the agent starts on ``b0``.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from agentplay.core.world import WorldEntity, WorldModel
from agentplay.games.minidungeon import GameError, InvalidKey

if TYPE_CHECKING:
    from agentplay.mbt.efsm import EFSM

Pos = tuple[int, int]

AGENT_ID = "agent"
MOVES = {"w": (0, -1), "a": (-1, 0), "s": (0, 1), "d": (1, 0)}
DEFAULT_VIEW = 4

_CELL = re.compile(r"^(w|f|b\d+|d\d+)$")
_WIRE = re.compile(r"^(b\d+),(d\d+)$")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DanglingReference(ValueError):
    pass


class InfeasibleLevel(ValueError):
    pass


class GameCrash(RuntimeError):
    """Raised by the fault-injection fixture when the crash button is pressed."""


def _index(ident: str) -> int:
    return int(ident[1:])


@dataclass
class ButtonMaze:
    walls: list[list[bool]]
    buttons: dict[str, Pos]
    doors: dict[str, Pos]
    wiring: set[tuple[str, str]]
    view_distance: int = DEFAULT_VIEW
    crash_button: str | None = None
    door_open: dict[str, bool] = field(default_factory=dict)
    presses: dict[str, int] = field(default_factory=dict)
    agent_pos: Pos | None = None
    turn: int = 0

    # every command sent to any ButtonMaze; lets tests prove work was offline
    total_commands = 0

    def __post_init__(self) -> None:
        for b, d in self.wiring:
            if b not in self.buttons:
                raise DanglingReference(f"wiring names unknown button {b}")
            if d not in self.doors:
                raise DanglingReference(f"wiring names unknown door {d}")
        if self.crash_button is not None and self.crash_button not in self.buttons:
            raise DanglingReference(f"unknown crash button {self.crash_button}")
        self.buttons = dict(sorted(self.buttons.items(), key=lambda kv: _index(kv[0])))
        self.doors = dict(sorted(self.doors.items(), key=lambda kv: _index(kv[0])))
        self.door_open = {d: self.door_open.get(d, False) for d in self.doors}
        self.presses = {b: self.presses.get(b, 0) for b in self.buttons}
        self._door_at = {p: d for d, p in self.doors.items()}
        self._button_at = {p: b for b, p in self.buttons.items()}
        self._wired: dict[str, list[str]] = {b: [] for b in self.buttons}
        for b, d in sorted(self.wiring, key=lambda w: (_index(w[0]), _index(w[1]))):
            self._wired[b].append(d)
        if self.agent_pos is None:
            self.agent_pos = self.start_position()

    @property
    def width(self) -> int:
        return len(self.walls[0])

    @property
    def height(self) -> int:
        return len(self.walls)

    def start_position(self) -> Pos:
        if "b0" in self.buttons:
            return self.buttons["b0"]
        for y, row in enumerate(self.walls):
            for x, wall in enumerate(row):
                if not wall and (x, y) not in self._door_at:
                    return (x, y)
        raise InfeasibleLevel("level has no floor")

    def is_wall(self, p: Pos) -> bool:
        x, y = p
        return not (0 <= x < self.width and 0 <= y < self.height) or self.walls[y][x]

    def passable(self, p: Pos) -> bool:
        if self.is_wall(p):
            return False
        d = self._door_at.get(p)
        return d is None or self.door_open[d]

    def wired(self, button: str) -> list[str]:
        return list(self._wired[button])

    def door_vector(self) -> dict[str, bool]:
        return dict(self.door_open)

    # -- Environment -------------------------------------------------------------

    def command(self, agent_id: str, key: str) -> WorldModel:
        self._check_agent(agent_id)
        if key not in MOVES and key != "e":
            raise InvalidKey(key)
        ButtonMaze.total_commands += 1
        if key == "e":
            b = self._button_at.get(self.agent_pos)
            if b is not None:
                if b == self.crash_button:
                    raise GameCrash(f"pressing {b} crashed the game")
                self.presses[b] += 1
                for d in self._wired[b]:
                    self.door_open[d] = not self.door_open[d]
        else:
            dx, dy = MOVES[key]
            nxt = (self.agent_pos[0] + dx, self.agent_pos[1] + dy)
            if self.passable(nxt):
                self.agent_pos = nxt
        self.turn += 1
        return self.observe(agent_id)

    def observe(self, agent_id: str) -> WorldModel:
        self._check_agent(agent_id)
        ax, ay = self.agent_pos
        r = self.view_distance
        t = self.turn
        ents: dict[str, WorldEntity] = {}
        for y in range(max(0, ay - r), min(self.height, ay + r + 1)):
            for x in range(max(0, ax - r), min(self.width, ax + r + 1)):
                kind = "wall" if self.walls[y][x] else "floor"
                eid = f"{kind}:1:{x},{y}"
                ents[eid] = WorldEntity(eid, kind, (x, y), t, {"level": 1})
                d = self._door_at.get((x, y))
                if d is not None:
                    ents[d] = WorldEntity(d, "door", (x, y), t, {"level": 1, "isOpen": self.door_open[d]})
                b = self._button_at.get((x, y))
                if b is not None:
                    ents[b] = WorldEntity(b, "button", (x, y), t, {"level": 1, "pressed": self.presses[b]})
        props = {"currentLevel": 1, "turn": t}
        ents[agent_id] = WorldEntity(agent_id, "agent", self.agent_pos, t, {"level": 1})
        return WorldModel(agent_id, t, ents, self.agent_pos, props)

    def _check_agent(self, agent_id: str) -> None:
        if agent_id != AGENT_ID:
            raise GameError(f"unknown agent {agent_id!r}")

    def structure(self) -> tuple:
        """Static level content, for round-trip comparison."""
        return (
            tuple(tuple(r) for r in self.walls),
            tuple(self.buttons.items()),
            tuple(self.doors.items()),
            frozenset(self.wiring),
        )


# -- CSV ----------------------------------------------------------------------

def load_level_csv(text: str, **kwargs) -> ButtonMaze:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    try:
        split = lines.index("")
    except ValueError:
        split = len(lines)
    grid_lines, wire_lines = lines[:split], lines[split + 1:]
    if not grid_lines:
        raise ParseError(1, 1, "empty grid")
    walls: list[list[bool]] = []
    buttons: dict[str, Pos] = {}
    doors: dict[str, Pos] = {}
    width = None
    for y, line in enumerate(grid_lines):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(y + 1, min(len(cells), width) + 1, f"row has {len(cells)} cells, expected {width}")
        row = []
        for x, cell in enumerate(cells):
            if not _CELL.match(cell):
                raise ParseError(y + 1, x + 1, f"bad cell {cell!r}")
            row.append(cell == "w")
            if cell[0] in "bd":
                table = buttons if cell[0] == "b" else doors
                if cell in table:
                    raise ParseError(y + 1, x + 1, f"duplicate {cell}")
                table[cell] = (x, y)
        walls.append(row)
    wiring: set[tuple[str, str]] = set()
    for k, line in enumerate(wire_lines):
        ln = split + 2 + k
        m = _WIRE.match(line)
        if not m:
            raise ParseError(ln, 1, f"bad wiring row {line!r}")
        b, d = m.groups()
        if b not in buttons:
            raise DanglingReference(f"line {ln}: unknown button {b}")
        if d not in doors:
            raise DanglingReference(f"line {ln}: unknown door {d}")
        if (b, d) in wiring:
            raise ParseError(ln, 1, f"duplicate wiring {line!r}")
        wiring.add((b, d))
    return ButtonMaze(walls, buttons, doors, wiring, **kwargs)


def save_level_csv(maze: ButtonMaze) -> str:
    at = {p: b for b, p in maze.buttons.items()}
    at.update({p: d for d, p in maze.doors.items()})
    rows = []
    for y, row in enumerate(maze.walls):
        rows.append(",".join(at.get((x, y), "w" if wall else "f") for x, wall in enumerate(row)))
    wires = [f"{b},{d}" for b, d in sorted(maze.wiring, key=lambda w: (_index(w[0]), _index(w[1])))]
    return "\n".join(rows) + "\n\n" + "".join(w + "\n" for w in wires)


# -- generation ---------------------------------------------------------------

def generate_level(
    rooms: int,
    buttons: int,
    doors: int,
    wiring_density: float = 0.0,
    seed: int = 0,
    room_size: int = 5,
) -> tuple[str, "EFSM"]:
    """Build a random level and the EFSM describing its logic.

    Rooms are ``room_size`` square and laid out row by row on a near-square
    grid. A random spanning tree of doors connects them, extra doors go
    between other adjacent rooms. Every tree door is wired to a button that
    can be reached before it, so every room is reachable. Each further
    (button, door) pair is wired with probability ``wiring_density``.
    """
    from agentplay.mbt.efsm import efsm_from_level

    if rooms < 1:
        raise InfeasibleLevel("need at least one room")
    if buttons < 1:
        raise InfeasibleLevel("need at least one button; the agent starts on b0")
    if doors < 0 or not 0.0 <= wiring_density <= 1.0:
        raise InfeasibleLevel("doors must be >= 0 and wiring density within [0, 1]")
    if room_size < 3:
        raise InfeasibleLevel("rooms must be at least 3 cells wide")
    if doors < rooms - 1:
        raise InfeasibleLevel(f"{rooms} rooms need at least {rooms - 1} doors to be connected")
    rng = random.Random(seed)
    s = room_size
    cols = math.ceil(math.sqrt(rooms))
    nrows = math.ceil(rooms / cols)
    slot = {r: divmod(r, cols) for r in range(rooms)}  # room -> (row, col)
    pairs = [
        (a, b) for a in range(rooms) for b in range(a + 1, rooms)
        if abs(slot[a][0] - slot[b][0]) + abs(slot[a][1] - slot[b][1]) == 1
    ]
    if doors > len(pairs):
        raise InfeasibleLevel(f"at most {len(pairs)} doors fit between {rooms} rooms")

    # spanning tree grown outwards from room 0 so tree doors have a natural order
    tree: list[tuple[int, int]] = []
    reached = {0}
    while len(reached) < rooms:
        edges = [(a, b) for a, b in pairs if (a in reached) != (b in reached)]
        a, b = rng.choice(edges)
        tree.append((a, b) if a in reached else (b, a))
        reached.add(b if a in reached else a)
    tree_set = {frozenset(e) for e in tree}
    extra = [p for p in pairs if frozenset(p) not in tree_set]
    rng.shuffle(extra)
    door_pairs = tree + extra[: doors - len(tree)]

    width = cols * (s + 1) + 1
    height = nrows * (s + 1) + 1
    cells = [["w"] * width for _ in range(height)]

    def origin(r: int) -> Pos:
        row, col = slot[r]
        return 1 + col * (s + 1), 1 + row * (s + 1)

    for r in range(rooms):
        ox, oy = origin(r)
        for y in range(oy, oy + s):
            for x in range(ox, ox + s):
                cells[y][x] = "f"

    reserved: set[Pos] = set()  # door cells and the floor cells beside them
    door_room: list[tuple[int, int]] = []
    for i, (a, b) in enumerate(door_pairs):
        lo, hi = min(a, b), max(a, b)
        ox, oy = origin(lo)
        off = rng.randint(1, s - 2)
        if slot[lo][0] == slot[hi][0]:  # side by side
            p = (ox + s, oy + off)
            sides = [(p[0] - 1, p[1]), (p[0] + 1, p[1])]
        else:
            p = (ox + off, oy + s)
            sides = [(p[0], p[1] - 1), (p[0], p[1] + 1)]
        cells[p[1]][p[0]] = f"d{i}"
        reserved.add(p)
        reserved.update(sides)
        door_room.append((a, b))

    # buttons: b0 in room 0, the rest in random rooms
    room_of_button = [0] + [rng.randrange(rooms) for _ in range(buttons - 1)]
    free = {}
    for r in range(rooms):
        ox, oy = origin(r)
        free[r] = [(x, y) for y in range(oy, oy + s) for x in range(ox, ox + s) if (x, y) not in reserved]
        rng.shuffle(free[r])
    for i, r in enumerate(room_of_button):
        if not free[r]:
            raise InfeasibleLevel(f"room {r} has no space left for another button")
        x, y = free[r].pop()
        cells[y][x] = f"b{i}"

    # wiring: tree doors need an opener on the near side
    wiring: set[tuple[int, int]] = set()
    opened = {0}
    for i, (a, b) in enumerate(door_pairs[: len(tree)]):
        near = [k for k, r in enumerate(room_of_button) if r in opened]
        wiring.add((rng.choice(near), i))
        opened.add(b)
    for i in range(len(tree), len(door_pairs)):
        wiring.add((rng.randrange(buttons), i))
    for k in range(buttons):
        for i in range(len(door_pairs)):
            if (k, i) not in wiring and rng.random() < wiring_density:
                wiring.add((k, i))

    text = "\n".join(",".join(row) for row in cells) + "\n\n"
    text += "".join(f"b{k},d{i}\n" for k, i in sorted(wiring))
    return text, efsm_from_level(load_level_csv(text))


L1_PARAMS = dict(rooms=41, buttons=64, doors=40, wiring_density=0.0)


def tiny_level() -> str:
    """Two rooms, two buttons, one door; only ``b0`` is wired to the door."""
    rows = [
        "w,w,w,w,w,w,w",
        "w,b0,f,w,f,f,w",
        "w,f,f,d0,f,b1,w",
        "w,f,f,w,f,f,w",
        "w,w,w,w,w,w,w",
    ]
    return "\n".join(rows) + "\n\nb0,d0\n"


def three_room_level() -> str:
    """A hall with three rooms below it, each behind its own door."""
    rows = [
        "w,w,w,w,w,w,w,w,w,w,w,w,w",
        "w,b0,f,f,f,f,f,f,f,f,f,f,w",
        "w,f,f,f,f,f,f,f,f,f,f,f,w",
        "w,w,d0,w,w,w,d1,w,w,w,d2,w,w",
        "w,f,f,f,w,f,f,f,w,f,f,f,w",
        "w,b1,f,f,w,f,b2,f,w,f,f,b3,w",
        "w,w,w,w,w,w,w,w,w,w,w,w,w",
    ]
    wires = ["b0,d0", "b1,d1", "b2,d2", "b3,d0"]
    return "\n".join(rows) + "\n\n" + "".join(w + "\n" for w in wires)


def open_level(buttons: int = 12, seed: int = 0, size: int = 11) -> str:
    """One big doorless room with buttons scattered on it."""
    rng = random.Random(seed)
    cells = [["w"] * (size + 2) for _ in range(size + 2)]
    spots = [(x, y) for y in range(1, size + 1) for x in range(1, size + 1)]
    for x, y in spots:
        cells[y][x] = "f"
    if buttons > len(spots):
        raise InfeasibleLevel("too many buttons for the room")
    for i, (x, y) in enumerate(rng.sample(spots, buttons)):
        cells[y][x] = f"b{i}"
    return "\n".join(",".join(r) for r in cells) + "\n\n"
