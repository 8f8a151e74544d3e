"""Command-line entry point: ``agentplay <subcommand> [flags]``.

Every subcommand builds one JSON document. ``--json`` prints it, ``--out``
writes it to a file, and otherwise a short summary is printed. Exit codes:
0 on success, 1 when the run found failures or violations, 2 on bad flags
or unreadable inputs.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

DEFAULT_SEED = 42
GAME_MUTANTS = ("buggyMonsterMove", "wallWalk")
MUTANTS = GAME_MUTANTS + ("crashButton",)


class InputError(Exception):
    """A flag value or input file the command cannot use."""


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--json", action="store_true", help="print the JSON report on stdout")
    p.add_argument("--out", type=Path, help="also write the JSON report to this file")


def _dungeon(p: argparse.ArgumentParser) -> None:
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--grid", type=int, default=20)
    p.add_argument("--monsters", type=int, default=4, help="monsters per level")
    p.add_argument("--scrolls", type=int, default=3, help="scrolls per level")
    p.add_argument("--players", type=int, choices=(1, 2), default=1)
    p.add_argument("--mutant", action="append", default=[], choices=MUTANTS, help="repeatable")


def _level_shape(p: argparse.ArgumentParser) -> None:
    from agentplay.games.buttonmaze import L1_PARAMS

    p.add_argument("--rooms", type=int, default=L1_PARAMS["rooms"])
    p.add_argument("--buttons", type=int, default=L1_PARAMS["buttons"])
    p.add_argument("--doors", type=int, default=L1_PARAMS["doors"])
    p.add_argument("--density", type=float, default=L1_PARAMS["wiring_density"], help="extra wiring probability")
    p.add_argument("--room-size", type=int, default=5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agentplay", description="Agent-based testing of built-in games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("playtest", help="run the shrine playtest on MiniDungeon")
    _common(p)
    _dungeon(p)
    p.add_argument("--max-cycles", type=int, default=4000)

    p = sub.add_parser("genlevel", help="generate a ButtonMaze level and its EFSM")
    _common(p)
    _level_shape(p)
    p.add_argument("--csv", type=Path, help="write the level CSV here")
    p.add_argument("--efsm", type=Path, help="write the EFSM JSON here")

    p = sub.add_parser("mbt-gen", help="generate an abstract test suite for a level")
    _common(p)
    _level_shape(p)
    p.add_argument("--level", type=Path, help="level CSV; generated from the shape flags when absent")
    p.add_argument("--strategy", choices=("random", "mulambda", "mosa"), default="random")
    p.add_argument("--budget", type=int, default=50_000, help="fitness evaluations")
    p.add_argument("--seconds", type=float, help="wall-clock limit instead of --budget (not reproducible)")
    p.add_argument("--max-length", type=int)
    p.add_argument("--population", type=int, help="MOSA population size")
    p.add_argument("--mu", type=int)
    p.add_argument("--lam", type=int)

    p = sub.add_parser("mbt-run", help="execute a generated suite on its level")
    _common(p)
    p.add_argument("--suite", type=Path, required=True, help="suite JSON written by mbt-gen")
    p.add_argument("--level", type=Path, help="level CSV; defaults to the level stored in the suite")
    p.add_argument("--budget", type=int, default=150, help="deliberation cycles per goal")

    p = sub.add_parser("explore", help="run a scriptless exploratory session")
    _common(p)
    _dungeon(p)
    p.add_argument("--game", choices=("buttonmaze", "minidungeon"), default="buttonmaze")
    p.add_argument("--level", type=Path, help="ButtonMaze level CSV; an open level when absent")
    p.add_argument("--open-buttons", type=int, default=12, help="buttons on the default open level")
    p.add_argument("--budget", type=int, default=300, help="derived actions")

    p = sub.add_parser("oracle-soak", help="random-key MiniDungeon run with implanted assertions")
    _common(p)
    _dungeon(p)
    p.add_argument("--turns", type=int, default=2000)
    return parser


# -- subcommands ------------------------------------------------------------------

def _game_config(a: argparse.Namespace) -> Any:
    from agentplay.games.minidungeon import GameConfig, InfeasibleConfig

    cfg = GameConfig(
        level_count=a.levels, grid_size=a.grid, monsters_per_level=a.monsters,
        scrolls_per_level=a.scrolls, player_count=a.players, seed=a.seed,
    )
    try:
        cfg.validate()
    except InfeasibleConfig as exc:
        raise InputError(str(exc)) from None
    return cfg


def _game_mutants(a: argparse.Namespace) -> list[str]:
    if "crashButton" in a.mutant:
        raise InputError("crashButton applies to ButtonMaze exploration only")
    return sorted(set(a.mutant))


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _level(a: argparse.Namespace) -> str:
    from agentplay.games.buttonmaze import InfeasibleLevel, generate_level

    if getattr(a, "level", None) is not None:
        return _read(a.level)
    try:
        text, _ = generate_level(a.rooms, a.buttons, a.doors, a.density, a.seed, a.room_size)
    except (InfeasibleLevel, ValueError) as exc:
        raise InputError(str(exc)) from None
    return text


def _load(text: str) -> Any:
    from agentplay.games.buttonmaze import load_level_csv

    try:
        return load_level_csv(text)
    except ValueError as exc:  # parse errors, dangling ids, no floor
        raise InputError(f"bad level: {exc}") from None


def _model(text: str) -> Any:
    from agentplay.mbt.efsm import efsm_from_level

    try:
        return efsm_from_level(_load(text))
    except ValueError as exc:
        raise InputError(f"cannot model level: {exc}") from None


def cmd_playtest(a: argparse.Namespace) -> tuple[dict[str, Any], int, str]:
    from agentplay.playtest import run_playtest

    r = run_playtest(_game_config(a), max_cycles=a.max_cycles, mutants=_game_mutants(a))
    doc = r.to_dict()
    lines = [f"seed {r.seed}: game {r.game_status}, goal {r.goal_status}, {r.cycles} cycles, {r.turns} turns"]
    for v in r.oracle_violations:
        lines.append(f"  oracle {v.oracle} at step {v.step_index}: {v.detail}")
    for v in r.game_violations:
        lines.append(f"  assertion {v.check} at turn {v.turn}: {v.detail}")
    return doc, 0 if r.ok else 1, "\n".join(lines)


def cmd_genlevel(a: argparse.Namespace) -> tuple[dict[str, Any], int, str]:
    text = _level(a)
    efsm = _model(text)
    params = dict(rooms=a.rooms, buttons=a.buttons, doors=a.doors, wiringDensity=a.density, roomSize=a.room_size)
    doc = {
        "seed": a.seed,
        "params": params,
        "states": len(efsm.states),
        "transitions": len(efsm.transitions),
        "variables": len(efsm.variables),
        "level": text,
        "efsm": efsm.to_dict(),
    }
    if a.csv is not None:
        a.csv.write_text(text)
    if a.efsm is not None:
        a.efsm.write_text(efsm.to_json() + "\n")
    summary = f"{doc['states']} states, {doc['transitions']} transitions, {doc['variables']} variables"
    return doc, 0, summary


def cmd_mbt_gen(a: argparse.Namespace) -> tuple[dict[str, Any], int, str]:
    from agentplay.mbt.generation import generate, generate_timed

    text = _level(a)
    efsm = _model(text)
    kw: dict[str, Any] = {}
    if a.max_length is not None:
        kw["max_length"] = a.max_length
    if a.strategy == "mosa" and a.population is not None:
        kw["population_size"] = a.population
    if a.strategy == "mulambda":
        if a.mu is not None:
            kw["mu"] = a.mu
        if a.lam is not None:
            kw["lam"] = a.lam
    try:
        if a.seconds is not None:
            suite = generate_timed(efsm, a.strategy, a.seconds, a.seed, **kw)
        else:
            suite = generate(efsm, a.strategy, a.budget, a.seed, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = suite.to_dict(efsm)
    doc["level"] = text
    summary = (
        f"{a.strategy}: {len(suite.tests)} tests, coverage {doc['coverage']:.3f} "
        f"of {doc['nTransitions']} transitions, {suite.evaluations} evaluations"
    )
    return doc, 0, summary


def cmd_mbt_run(a: argparse.Namespace) -> tuple[dict[str, Any], int, str]:
    from agentplay.games.buttonmaze import load_level_csv
    from agentplay.mbt.efsm import MalformedTest
    from agentplay.mbt.execute import LevelModelMismatch, execute_suite

    try:
        data = json.loads(_read(a.suite))
        tests = [list(map(int, t)) for t in data["tests"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad suite file: {exc}") from None
    if a.level is not None:
        text = _read(a.level)
    elif isinstance(data.get("level"), str):
        text = data["level"]
    else:
        raise InputError("the suite holds no level; pass --level")
    efsm = _model(text)
    try:
        report = execute_suite(lambda: load_level_csv(text), tests, efsm, a.budget, a.seed)
    except (MalformedTest, LevelModelMismatch) as exc:
        raise InputError(str(exc)) from None
    doc = {"seed": a.seed, **report.to_dict()}
    bad = report.n_fails or not report.conformant
    summary = (
        f"{report.n_tests} tests, {report.n_fails} fails, {report.total_cycles} cycles, "
        f"{doc['conformanceViolations']} conformance violations"
    )
    return doc, 1 if bad else 0, summary


def cmd_explore(a: argparse.Namespace) -> tuple[dict[str, Any], int, str]:
    from agentplay.explorer import buttonmaze_profile, implanted_assertion_oracle, minidungeon_profile, run_exploratory
    from agentplay.games.buttonmaze import open_level
    from agentplay.games.minidungeon import MiniDungeon

    if a.budget < 1:
        raise InputError("budget must be at least 1")
    oracles: list[tuple[str, Callable[[Any], list[str]]]] = []
    if a.game == "buttonmaze":
        if set(a.mutant) - {"crashButton"}:
            raise InputError("ButtonMaze supports only the crashButton mutant")
        text = _read(a.level) if a.level is not None else open_level(a.open_buttons, seed=a.seed)
        maze = _load(text)
        crash = None
        if "crashButton" in a.mutant:
            if not maze.buttons:
                raise InputError("crashButton needs a level with buttons")
            crash = random.Random(a.seed).choice(sorted(maze.buttons))
        profile = buttonmaze_profile()

        def make() -> Any:
            from agentplay.games.buttonmaze import load_level_csv

            return load_level_csv(text, crash_button=crash)
    else:
        cfg, mutants = _game_config(a), _game_mutants(a)
        profile = minidungeon_profile()
        oracles.append(("implanted", implanted_assertion_oracle()))

        def make() -> Any:
            return MiniDungeon(cfg, mutants=mutants)

    r = run_exploratory(make, profile, a.budget, oracles=oracles, seed=a.seed)
    doc = {"game": a.game, **r.to_dict()}
    lines = [f"{r.actions} actions, {r.unique_interactions} entities interacted, {r.commands} commands"]
    lines += [f"  {v.oracle} after action {v.action_index}: {v.detail}" for v in r.violations]
    return doc, 1 if r.violations else 0, "\n".join(lines)


def cmd_oracle_soak(a: argparse.Namespace) -> tuple[dict[str, Any], int, str]:
    from agentplay.games.soak import soak

    if a.turns < 0:
        raise InputError("turns must be non-negative")
    r = soak(_game_config(a), a.turns, _game_mutants(a))
    lines = [f"{r.turns} turns over {r.games} games, {len(r.violations)} violations"]
    lines += [f"  {v.check} at turn {v.turn}: {v.detail}" for v in r.violations[:20]]
    return r.to_dict(), 1 if r.violations else 0, "\n".join(lines)


COMMANDS = {
    "playtest": cmd_playtest,
    "genlevel": cmd_genlevel,
    "mbt-gen": cmd_mbt_gen,
    "mbt-run": cmd_mbt_run,
    "explore": cmd_explore,
    "oracle-soak": cmd_oracle_soak,
}


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=1) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc, code, summary = COMMANDS[a.command](a)
    except InputError as exc:
        print(f"agentplay {a.command}: error: {exc}", file=sys.stderr)
        return 2
    text = dumps(doc)
    if a.out is not None:
        a.out.write_text(text)
    if a.json:
        sys.stdout.write(text)
    else:
        print(summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
