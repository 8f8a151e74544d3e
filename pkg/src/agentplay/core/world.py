"""Observation and belief records shared by agents and games.

A :class:`WorldModel` is used both for a single observation produced by a
game and for the agent's accumulated belief. Beliefs are built by folding
observations in with :func:`merge_observation`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Iterator

Pos = tuple[int, int]

# Entity types describing static geometry rather than game objects.
TILE_TYPES = frozenset({"wall", "floor"})


class OutOfOrderObservation(ValueError):
    """Raised when an observation is older than the belief it is merged into."""


@dataclass(frozen=True)
class WorldEntity:
    id: str
    type: str
    position: Pos
    timestamp: int
    properties: dict[str, Any] = field(default_factory=dict)
    alive: bool = True
    sub_entities: tuple["WorldEntity", ...] = ()

    def get(self, name: str, default: Any = None) -> Any:
        return self.properties.get(name, default)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "type": self.type,
            "position": list(self.position),
            "timestamp": self.timestamp,
            "properties": dict(self.properties),
            "alive": self.alive,
            "subEntities": [e.to_dict() for e in self.sub_entities],
        }


@dataclass(frozen=True)
class WorldModel:
    agent_id: str
    timestamp: int = 0
    entities: dict[str, WorldEntity] = field(default_factory=dict)
    agent_position: Pos = (0, 0)
    agent_properties: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for e in self.entities.values():
            if e.timestamp > self.timestamp:
                raise ValueError(
                    f"entity {e.id} timestamp {e.timestamp} is ahead of model timestamp {self.timestamp}"
                )

    def get(self, entity_id: str) -> WorldEntity | None:
        return self.entities.get(entity_id)

    def query(
        self,
        entity_type: str | None = None,
        *,
        alive_only: bool = False,
        level: int | None = None,
    ) -> Iterator[WorldEntity]:
        """Iterate entities, optionally filtered by type, liveness and level.

        Tombstoned entities are included unless ``alive_only`` is set, so
        guards can still reason about objects known to be destroyed.
        """
        for e in self.entities.values():
            if entity_type is not None and e.type != entity_type:
                continue
            if alive_only and not e.alive:
                continue
            if level is not None and e.properties.get("level", level) != level:
                continue
            yield e

    def with_entities(self, entities: Iterable[WorldEntity]) -> "WorldModel":
        return replace(self, entities={e.id: e for e in entities})

    def to_dict(self) -> dict[str, Any]:
        return {
            "agentId": self.agent_id,
            "timestamp": self.timestamp,
            "agentPosition": list(self.agent_position),
            "agentProperties": dict(self.agent_properties),
            "entities": [self.entities[k].to_dict() for k in sorted(self.entities)],
        }


def merge_observation(belief: WorldModel, obs: WorldModel) -> WorldModel:
    """Fold a fresh observation into a belief and return the new belief.

    Entities in ``obs`` replace same-id entries. Entities that are absent from
    ``obs`` stay as they were, stale but remembered. Destroyed entities arrive
    with ``alive=False`` and are kept as tombstones. No entity timestamp ever
    goes backwards.
    """
    if obs.timestamp < belief.timestamp:
        raise OutOfOrderObservation(
            f"observation at t={obs.timestamp} is older than belief at t={belief.timestamp}"
        )
    entities = dict(belief.entities)
    for eid, e in obs.entities.items():
        old = entities.get(eid)
        if old is not None and old.timestamp > e.timestamp:
            continue
        entities[eid] = e
    return WorldModel(
        agent_id=obs.agent_id or belief.agent_id,
        timestamp=obs.timestamp,
        entities=entities,
        agent_position=obs.agent_position,
        agent_properties=dict(obs.agent_properties),
    )


def _freeze(value: Any) -> Any:
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in value.items()))
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    return value


def digest(
    model: WorldModel,
    *,
    entities: dict[str, WorldEntity] | None = None,
    include_tiles: bool = False,
) -> str:
    """Short stable hash of the agent state plus (non-tile) entities.

    ``entities`` overrides ``model.entities`` when the caller already keeps a
    smaller index of the entities worth hashing.
    """
    pool = model.entities if entities is None else entities
    parts: list[Any] = [model.agent_position, _freeze(model.agent_properties)]
    for eid in sorted(pool):
        e = pool[eid]
        if not include_tiles and e.type in TILE_TYPES:
            continue
        parts.append((eid, e.position, e.alive, _freeze(e.properties)))
    return hashlib.sha1(repr(parts).encode()).hexdigest()[:16]
