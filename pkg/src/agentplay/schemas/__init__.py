"""JSON Schemas of the reports the command line emits."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

# subcommand -> schema file describing its JSON report
FOR_COMMAND = {
    "playtest": "playtest.schema.json",
    "genlevel": "genlevel.schema.json",
    "mbt-gen": "suite.schema.json",
    "mbt-run": "mbt-run.schema.json",
    "explore": "explore.schema.json",
    "oracle-soak": "oracle-soak.schema.json",
}


def load(name: str) -> dict[str, Any]:
    return json.loads(resources.files(__name__).joinpath(name).read_text())


def all_schemas() -> dict[str, dict[str, Any]]:
    names = sorted(set(FOR_COMMAND.values()) | {"efsm.schema.json"})
    return {n: load(n) for n in names}
