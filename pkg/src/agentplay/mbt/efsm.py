"""Extended finite state machines for buttons-and-doors levels.

States are entity nodes: one per button, two per door (one for each side).
The extended state is a boolean per door, all closed at the start. Three
transition kinds exist:

* ``travel``     move between two nodes of the same room,
* ``doorCross``  move between the two sides of a door; needs the door open,
* ``toggle``     press a button (self-loop) and flip every door wired to it.

A test case is a list of transition indices into :attr:`EFSM.transitions`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

TestCase = list[int]

KINDS = ("travel", "doorCross", "toggle")


class MalformedTest(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    kind: str
    guard: str | None = None
    update: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        arrow = {"travel": "->", "doorCross": "=>", "toggle": "*"}[self.kind]
        return f"{self.src}{arrow}{self.dst}" if self.kind != "toggle" else f"toggle({self.src})"

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"src": self.src, "dst": self.dst, "kind": self.kind}
        if self.guard is not None:
            d["guard"] = self.guard
        if self.update:
            d["update"] = list(self.update)
        return d


@dataclass
class EFSM:
    states: list[str]
    initial_state: str
    variables: dict[str, bool]
    transitions: list[Transition]
    # maze cell of every state; lets a test executor find the node in the game
    positions: dict[str, tuple[int, int]] = field(default_factory=dict)

    __test__ = False

    def __post_init__(self) -> None:
        self.validate()
        self.door_index = {d: i for i, d in enumerate(self.variables)}
        self.outgoing: dict[str, list[int]] = {s: [] for s in self.states}
        for i, t in enumerate(self.transitions):
            self.outgoing[t.src].append(i)
        self._guard_bits = [
            (1 << self.door_index[t.guard]) if t.guard is not None else 0 for t in self.transitions
        ]
        self._update_bits = [
            sum(1 << self.door_index[d] for d in t.update) for t in self.transitions
        ]

    def validate(self) -> None:
        states = set(self.states)
        if len(states) != len(self.states):
            raise ValueError("duplicate state names")
        if self.initial_state not in states:
            raise ValueError(f"initial state {self.initial_state!r} is not a state")
        for i, t in enumerate(self.transitions):
            if t.kind not in KINDS:
                raise ValueError(f"transition {i}: unknown kind {t.kind!r}")
            if t.src not in states or t.dst not in states:
                raise ValueError(f"transition {i}: unknown endpoint")
            if t.kind == "doorCross":
                if t.guard not in self.variables:
                    raise ValueError(f"transition {i}: guard names unknown door {t.guard!r}")
            elif t.guard is not None:
                raise ValueError(f"transition {i}: only doorCross transitions carry guards")
            if t.kind == "toggle" and t.src != t.dst:
                raise ValueError(f"transition {i}: toggle must be a self-loop")
            if t.kind != "toggle" and t.update:
                raise ValueError(f"transition {i}: only toggles update doors")
            for d in t.update:
                if d not in self.variables:
                    raise ValueError(f"transition {i}: update names unknown door {d!r}")

    @property
    def doors(self) -> list[str]:
        return list(self.variables)

    def initial_doors(self) -> int:
        return sum(1 << self.door_index[d] for d, v in self.variables.items() if v)

    def door_vector(self, bits: int) -> dict[str, bool]:
        return {d: bool(bits >> i & 1) for d, i in self.door_index.items()}

    def enabled(self, state: str, doors: int) -> list[int]:
        return [i for i in self.outgoing[state] if doors & self._guard_bits[i] == self._guard_bits[i]]

    def step(self, index: int, doors: int) -> int | None:
        """Door bits after firing transition ``index``, or ``None`` if its guard fails."""
        g = self._guard_bits[index]
        if doors & g != g:
            return None
        return doors ^ self._update_bits[index]

    def shortest_distances(self) -> dict[str, dict[str, int]]:
        """Hop distances between states, guards ignored."""
        nbrs: dict[str, set[str]] = {s: set() for s in self.states}
        for t in self.transitions:
            if t.src != t.dst:
                nbrs[t.src].add(t.dst)
        out = {}
        for s in self.states:
            dist = {s: 0}
            todo = deque([s])
            while todo:
                u = todo.popleft()
                for v in nbrs[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        todo.append(v)
            out[s] = dist
        return out

    # -- serialisation -----------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "states": list(self.states),
            "initialState": self.initial_state,
            "variables": dict(self.variables),
            "transitions": [dict(id=i, **t.to_dict()) for i, t in enumerate(self.transitions)],
            "positions": {s: list(p) for s, p in self.positions.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EFSM":
        transitions = [
            Transition(t["src"], t["dst"], t["kind"], t.get("guard"), tuple(t.get("update", ())))
            for t in sorted(d["transitions"], key=lambda t: t["id"])
        ]
        return cls(
            states=list(d["states"]),
            initial_state=d["initialState"],
            variables={k: bool(v) for k, v in d["variables"].items()},
            transitions=transitions,
            positions={s: tuple(p) for s, p in d.get("positions", {}).items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "EFSM":
        return cls.from_dict(json.loads(text))


@dataclass
class SimResult:
    feasible: bool
    prefix_length: int
    door_trace: list[dict[str, bool]]


def check_chained(efsm: EFSM, test: Sequence[int]) -> None:
    state = efsm.initial_state
    for k, i in enumerate(test):
        if not 0 <= i < len(efsm.transitions):
            raise MalformedTest(f"step {k}: no transition {i}")
        t = efsm.transitions[i]
        if t.src != state:
            raise MalformedTest(f"step {k}: {t.label} does not start at {state}")
        state = t.dst


def simulate(efsm: EFSM, test: Sequence[int]) -> SimResult:
    """Run a test on the model from the initial state with all doors closed.

    ``door_trace[k]`` is the door vector after ``k`` steps, so it holds
    ``prefix_length + 1`` entries.
    """
    check_chained(efsm, test)
    doors = efsm.initial_doors()
    trace = [efsm.door_vector(doors)]
    for i in test:
        nxt = efsm.step(i, doors)
        if nxt is None:
            return SimResult(False, len(trace) - 1, trace)
        doors = nxt
        trace.append(efsm.door_vector(doors))
    return SimResult(True, len(test), trace)


def feasible_prefix(efsm: EFSM, test: Sequence[int]) -> int:
    """Length of the longest chained and guard-respecting prefix; never raises."""
    state = efsm.initial_state
    doors = efsm.initial_doors()
    trans = efsm.transitions
    for k, i in enumerate(test):
        t = trans[i]
        if t.src != state:
            return k
        nxt = efsm.step(i, doors)
        if nxt is None:
            return k
        doors = nxt
        state = t.dst
    return len(test)


def covered(efsm: EFSM, suite: Iterable[Sequence[int]]) -> set[int]:
    out: set[int] = set()
    for test in suite:
        out.update(test[: feasible_prefix(efsm, test)])
    return out


def coverage(efsm: EFSM, suite: Iterable[Sequence[int]]) -> float:
    if not efsm.transitions:
        return 0.0
    return len(covered(efsm, suite)) / len(efsm.transitions)


def reachable_transitions(efsm: EFSM) -> set[int]:
    """Transitions some feasible test can fire: search over (state, door bits)."""
    start = (efsm.initial_state, efsm.initial_doors())
    seen = {start}
    todo = deque([start])
    fired: set[int] = set()
    while todo:
        state, doors = todo.popleft()
        for i in efsm.enabled(state, doors):
            fired.add(i)
            nxt = (efsm.transitions[i].dst, efsm.step(i, doors))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return fired


# -- building the model of a level --------------------------------------------

def door_sides(maze: Any, door: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """Floor cells on either side of a door: north/west first, then south/east."""
    x, y = maze.doors[door]
    for a, b in (((x - 1, y), (x + 1, y)), ((x, y - 1), (x, y + 1))):
        if not maze.is_wall(a) and not maze.is_wall(b) and a not in maze._door_at and b not in maze._door_at:
            return a, b
    raise ValueError(f"door {door} at {(x, y)} does not separate two floor cells")


def rooms_of(maze: Any) -> dict[tuple[int, int], int]:
    """Room index of every floor cell; doors count as walls."""
    room: dict[tuple[int, int], int] = {}
    n = 0
    for y in range(maze.height):
        for x in range(maze.width):
            if (x, y) in room or maze.is_wall((x, y)) or (x, y) in maze._door_at:
                continue
            room[(x, y)] = n
            todo = [(x, y)]
            while todo:
                cx, cy = todo.pop()
                for nb in ((cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)):
                    if nb not in room and not maze.is_wall(nb) and nb not in maze._door_at:
                        room[nb] = n
                        todo.append(nb)
            n += 1
    return room


def efsm_from_level(maze: Any) -> EFSM:
    """Model a ButtonMaze level.

    Nodes are the buttons plus the two sides ``<door>a`` / ``<door>b`` of
    every door. Within a room every node can travel to every other node.
    Toggle loops exist only on buttons wired to at least one door.
    """
    room = rooms_of(maze)
    positions: dict[str, tuple[int, int]] = dict(maze.buttons)
    for d in maze.doors:
        a, b = door_sides(maze, d)
        positions[f"{d}a"] = a
        positions[f"{d}b"] = b
    states = list(maze.buttons)
    for d in maze.doors:
        states += [f"{d}a", f"{d}b"]
    members: dict[int, list[str]] = {}
    for s in states:
        members.setdefault(room[positions[s]], []).append(s)
    transitions: list[Transition] = []
    for r in sorted(members):
        nodes = members[r]
        for u in nodes:
            for v in nodes:
                if u != v:
                    transitions.append(Transition(u, v, "travel"))
    for d in maze.doors:
        transitions.append(Transition(f"{d}a", f"{d}b", "doorCross", guard=d))
        transitions.append(Transition(f"{d}b", f"{d}a", "doorCross", guard=d))
    for b in maze.buttons:
        wired = tuple(maze.wired(b))
        if wired:
            transitions.append(Transition(b, b, "toggle", update=wired))
    if not states:
        raise ValueError("level has no buttons or doors to model")
    initial = "b0" if "b0" in maze.buttons else states[0]
    return EFSM(states, initial, {d: False for d in maze.doors}, transitions, positions)


def random_feasible_test(efsm: EFSM, length: int, rng: Any) -> TestCase:
    """A random walk of at most ``length`` enabled transitions from the start."""
    state = efsm.initial_state
    doors = efsm.initial_doors()
    out: TestCase = []
    for _ in range(length):
        choices = efsm.enabled(state, doors)
        if not choices:
            break
        i = rng.choice(choices)
        doors = efsm.step(i, doors)
        state = efsm.transitions[i].dst
        out.append(i)
    return out
