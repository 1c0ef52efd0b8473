"""Candidate service boundary: who owns what, and the policy knobs."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Mapping

from .errors import (
    DoublyAssignedEntityError,
    SchemaError,
    UnassignedEntityError,
    UnknownEntityError,
)
from .model import ArchModel

COMMUNICATION_POLICIES = frozenset({"sync", "async", "by_flags"})
DISTINCT_COLUMN_POLICIES = frozenset({"split", "replicate"})
SHARED_WRITE_POLICIES = frozenset({"ownership", "replicate"})
READER_STRATEGIES = frozenset({"service_call", "replicate"})
REPLICATION_MECHANISMS = frozenset({"event_sourcing", "db_replication", "change_data_capture"})

_POLICY_ENUMS = {
    "default_communication": COMMUNICATION_POLICIES,
    "shared_table_distinct_columns": DISTINCT_COLUMN_POLICIES,
    "shared_table_shared_write": SHARED_WRITE_POLICIES,
    "reader_strategy": READER_STRATEGIES,
    "replication_mechanism": REPLICATION_MECHANISMS,
}


@dataclass(frozen=True)
class PolicyConfig:
    default_communication: str = "by_flags"
    shared_table_distinct_columns: str = "split"
    shared_table_shared_write: str = "ownership"
    reader_strategy: str = "service_call"
    replication_mechanism: str = "event_sourcing"
    fault_tolerance_note: bool = True
    type_use_proxy: bool = False

    def __post_init__(self) -> None:
        for name, allowed in _POLICY_ENUMS.items():
            value = getattr(self, name)
            if value not in allowed:
                raise SchemaError(f"policy.{name}: {value!r} not one of {sorted(allowed)}")

    def replace(self, **kwargs: Any) -> "PolicyConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(kwargs)
        return PolicyConfig(**values)

    def to_obj(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str = "policy") -> "PolicyConfig":
        if not isinstance(data, Mapping):
            raise SchemaError(f"{path}: expected an object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise SchemaError(f"{path}: unknown fields: {', '.join(unknown)}")
        return cls(**dict(data))


@dataclass(frozen=True)
class Boundary:
    """Total assignment of model entities to named candidate services.

    Classes, tables, and artifacts of the input model are partitioned across
    services. Entities created later by transforms own themselves: generated
    entities through ``owner_service`` and split tables through the table's
    ``owner_hint``, which also takes precedence over an assignment when a
    transform reassigns ownership.
    """

    services: tuple[tuple[str, tuple[str, ...]], ...]
    policy: PolicyConfig = field(default_factory=PolicyConfig)

    def __post_init__(self) -> None:
        normalized = tuple(sorted((name, tuple(sorted(ids))) for name, ids in dict(self.services).items()))
        object.__setattr__(self, "services", normalized)

    def service_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.services)

    def assignment(self) -> dict[str, str]:
        return {eid: name for name, ids in self.services for eid in ids}

    def owner_of(self, model: ArchModel, entity_id: str) -> str | None:
        """Service owning an entity; None when unknown."""
        table = model.table_by_id(entity_id)
        if table is not None and table.owner_hint is not None:
            return table.owner_hint
        assigned = self.assignment().get(entity_id)
        if assigned is not None:
            return assigned
        gen = model.generated_by_id(entity_id)
        if gen is not None:
            return gen.owner_service
        method = model.method_by_id(entity_id)
        if method is not None:
            return self.owner_of(model, method.owner_class_id)
        return None

    def to_obj(self) -> dict[str, Any]:
        return {
            "format": 1,
            "services": {name: list(ids) for name, ids in self.services},
            "policy": self.policy.to_obj(),
        }


def check_boundary(model: ArchModel, boundary: Boundary, *, strict: bool = True) -> None:
    """Validate that the boundary partitions the model's entities.

    With ``strict`` off, assignments of ids absent from the model are
    tolerated: transformed models drop entities (split tables, duplicated
    artifacts) that the original boundary file still names.
    """
    assignable: set[str] = (
        {c.id for c in model.classes}
        | {t.id for t in model.tables if t.owner_hint is None}
        | {a.id for a in model.artifacts}
    )
    known: set[str] = set(model.entity_ids())

    seen: dict[str, str] = {}
    for name, ids in boundary.services:
        if not name:
            raise SchemaError("service names must be non-empty")
        for entity_id in ids:
            if entity_id in seen:
                raise DoublyAssignedEntityError(entity_id, sorted({seen[entity_id], name}))
            seen[entity_id] = name

    unknown = sorted(eid for eid in seen if eid not in known)
    if unknown and strict:
        raise UnknownEntityError(unknown)

    unassigned = sorted(assignable - set(seen))
    if unassigned:
        raise UnassignedEntityError(unassigned)
