import json

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from agentplay import schemas
from agentplay.cli import main

REGISTRY = Registry().with_resources(
    (name, Resource.from_contents(doc)) for name, doc in schemas.all_schemas().items()
)


def validate(command, doc):
    schema = schemas.load(schemas.FOR_COMMAND[command])
    Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out), out


SMALL_LEVEL = ("--rooms", "4", "--buttons", "5", "--doors", "4")


def test_schemas_are_valid():
    for doc in schemas.all_schemas().values():
        Draft202012Validator.check_schema(doc)


def test_playtest_json(capsys):
    code, doc, _ = run_json(capsys, "playtest", "--seed", "0")
    validate("playtest", doc)
    assert doc["won"] is True and code == (0 if not doc["violations"] else 1)


def test_playtest_mutant_exits_one(capsys):
    code, doc, _ = run_json(capsys, "playtest", "--mutant", "buggyMonsterMove")
    validate("playtest", doc)
    assert code == 1
    assert doc["gameViolations"]
    assert {v["check"] for v in doc["gameViolations"]} & {"monsterMoveEmpty", "singleOccupant", "occupancyMap"}


def test_genlevel_writes_files(capsys, tmp_path):
    csv, efsm = tmp_path / "l.csv", tmp_path / "m.json"
    code, doc, _ = run_json(capsys, "genlevel", *SMALL_LEVEL, "--seed", "3", "--csv", str(csv), "--efsm", str(efsm))
    assert code == 0
    validate("genlevel", doc)
    assert csv.read_text() == doc["level"]
    assert json.loads(efsm.read_text()) == doc["efsm"]
    assert doc["states"] == 5 + 2 * 4


def test_mbt_gen_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(capsys, "mbt-gen", "--strategy", "random", "--budget", "50000", "--seed", "7", "--out", str(out))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    validate("mbt-gen", json.loads(a.read_text()))


def test_mbt_run_report(capsys, tmp_path):
    suite = tmp_path / "s.json"
    run(capsys, "mbt-gen", *SMALL_LEVEL, "--strategy", "mosa", "--budget", "2000", "--out", str(suite))
    code, doc, _ = run_json(capsys, "mbt-run", "--suite", str(suite))
    validate("mbt-run", doc)
    assert {"time", "nTests", "nFails"} <= set(doc)
    assert code == (1 if doc["nFails"] else 0)


def test_mbt_run_against_other_level_is_input_error(capsys, tmp_path):
    suite, level = tmp_path / "s.json", tmp_path / "l.csv"
    run(capsys, "mbt-gen", *SMALL_LEVEL, "--budget", "500", "--out", str(suite))
    run(capsys, "genlevel", *SMALL_LEVEL, "--seed", "99", "--csv", str(level))
    code, _, err = run(capsys, "mbt-run", "--suite", str(suite), "--level", str(level))
    assert code == 2 and "error" in err


def test_explore_crash_button(capsys):
    code, doc, _ = run_json(capsys, "explore", "--mutant", "crashButton", "--seed", "1")
    validate("explore", doc)
    assert code == 1
    assert any(v["oracle"] == "crash" for v in doc["violations"])


def test_explore_minidungeon(capsys):
    code, doc, _ = run_json(capsys, "explore", "--game", "minidungeon", "--budget", "50")
    validate("explore", doc)
    assert doc["actions"] == 50


def test_oracle_soak(capsys):
    code, doc, _ = run_json(capsys, "oracle-soak", "--turns", "300")
    validate("oracle-soak", doc)
    assert code == 0 and doc["violations"] == []
    code, doc, _ = run_json(capsys, "oracle-soak", "--turns", "500", "--mutant", "buggyMonsterMove")
    assert code == 1 and doc["firstViolationTurn"] is not None


@pytest.mark.parametrize("argv", [
    ["playtest", "--players", "3"],
    ["mbt-gen", "--strategy", "hillclimb"],
    ["nosuch"],
    [],
    ["mbt-gen", "--budget", "0"],
    ["mbt-run", "--suite", "/nonexistent/suite.json"],
    ["oracle-soak", "--turns", "-1"],
    ["playtest", "--mutant", "crashButton"],
])
def test_bad_input_exits_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_summary_without_json(capsys):
    code, out, _ = run(capsys, "oracle-soak", "--turns", "50")
    assert code == 0 and not out.lstrip().startswith("{")


@pytest.mark.parametrize("argv", [
    ["playtest", "--seed", "5"],
    ["genlevel", "--seed", "5"],
    ["explore", "--seed", "5", "--budget", "60"],
    ["oracle-soak", "--seed", "5", "--turns", "200"],
])
def test_commands_are_deterministic(capsys, argv):
    _, a, _ = run_json(capsys, *argv)
    _, b, _ = run_json(capsys, *argv)
    a.pop("time", None)
    b.pop("time", None)
    assert a == b
