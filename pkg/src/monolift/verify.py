"""Extraction readiness: no unsanctioned dependency may cross the boundary.

Service calls, DTOs, replicas, snapshots, libraries, and duplicated copies
are the sanctioned crossing mechanisms; everything else is a violation. The
rules mirror the classifier's notion of a dependency so the two predicates
agree: findings exist exactly when the model is not ready.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .boundary import Boundary
from .model import ArchModel


@dataclass(frozen=True)
class RuleViolation:
    rule_id: str
    entity_ids: tuple[str, ...]
    message: str

    def to_obj(self) -> dict[str, Any]:
        return {"rule_id": self.rule_id, "entity_ids": list(self.entity_ids), "message": self.message}


@dataclass(frozen=True)
class ReadinessReport:
    ready: bool
    violations: tuple[RuleViolation, ...]

    def to_obj(self) -> dict[str, Any]:
        return {"ready": self.ready, "violations": [v.to_obj() for v in self.violations]}


def extraction_ready(model: ArchModel, boundary: Boundary) -> ReadinessReport:
    violations: list[RuleViolation] = []
    violations.extend(_rule_calls(model, boundary))
    violations.extend(_rule_foreign_keys(model, boundary))
    violations.extend(_rule_shared_writes(model, boundary))
    violations.extend(_rule_foreign_access(model, boundary))
    violations.extend(_rule_type_uses(model, boundary))
    violations.extend(_rule_artifacts(model, boundary))
    violations.extend(_rule_replica_writes(model, boundary))
    violations.sort(key=lambda v: (v.rule_id, v.entity_ids))
    return ReadinessReport(ready=not violations, violations=tuple(violations))


def _service_of_class(model: ArchModel, boundary: Boundary, class_id: str) -> str | None:
    return boundary.owner_of(model, class_id)


def _rule_calls(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    out = []
    for edge in model.edges.calls:
        caller = model.method_by_id(edge.caller_method_id)
        callee = model.method_by_id(edge.callee_method_id)
        if caller is None or callee is None:
            continue
        caller_service = _service_of_class(model, boundary, caller.owner_class_id)
        callee_service = _service_of_class(model, boundary, callee.owner_class_id)
        if caller_service is not None and callee_service is not None and caller_service != callee_service:
            out.append(RuleViolation(
                "R-CALL", (edge.id,),
                f"direct call from {caller_service} to {callee_service} "
                f"({edge.caller_method_id} -> {edge.callee_method_id})",
            ))
    return out


def _rule_foreign_keys(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    out = []
    for fk in model.foreign_keys:
        from_service = boundary.owner_of(model, fk.from_table_id)
        to_service = boundary.owner_of(model, fk.to_table_id)
        if from_service is not None and to_service is not None and from_service != to_service:
            out.append(RuleViolation(
                "R-FK", (fk.id,),
                f"foreign key across services: {fk.from_table_id} ({from_service}) "
                f"-> {fk.to_table_id} ({to_service})",
            ))
    return out


def _rule_shared_writes(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    writers: dict[str, set[str]] = {}
    for edge in model.edges.data_access:
        if not edge.writes or model.table_by_id(edge.table_id) is None:
            continue
        service = _service_of_class(model, boundary, edge.accessor_class_id)
        if service is not None:
            writers.setdefault(edge.table_id, set()).add(service)
    return [
        RuleViolation("R-TBL-W", (table_id,),
                      f"table written from several services: {', '.join(sorted(services))}")
        for table_id, services in sorted(writers.items())
        if len(services) >= 2
    ]


def _rule_foreign_access(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    out = []
    for edge in model.edges.data_access:
        table = model.table_by_id(edge.table_id)
        if table is None or table.read_only:
            continue  # snapshots are checked by R-REP; read-only tables are shareable
        owner = boundary.owner_of(model, edge.table_id)
        accessor_service = _service_of_class(model, boundary, edge.accessor_class_id)
        if owner is not None and accessor_service is not None and accessor_service != owner:
            out.append(RuleViolation(
                "R-TBL-X", (edge.id,),
                f"service {accessor_service} accesses table {edge.table_id} owned by {owner}",
            ))
    return out


def _rule_type_uses(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    out = []
    classes = {c.id for c in model.classes}
    for edge in model.edges.type_uses:
        if edge.used_class_id not in classes:
            continue  # DTO / replica / proxy targets are sanctioned by kind
        user_service = _service_of_class(model, boundary, edge.user_class_id)
        used_service = _service_of_class(model, boundary, edge.used_class_id)
        if user_service is not None and used_service is not None and user_service != used_service:
            out.append(RuleViolation(
                "R-TYPE", (edge.id,),
                f"service {user_service} depends on concrete type {edge.used_class_id} "
                f"of {used_service} ({edge.kind})",
            ))
    return out


def _rule_artifacts(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    uses: dict[str, set[str]] = {}
    for edge in model.edges.artifact_uses:
        if model.artifact_by_id(edge.artifact_id) is None:
            continue  # library entities and copies are sanctioned
        service = _service_of_class(model, boundary, edge.user_class_id)
        if service is not None:
            uses.setdefault(edge.artifact_id, set()).add(service)
    return [
        RuleViolation("R-ART", (artifact_id,),
                      f"artifact shared by {', '.join(sorted(services))} is neither a "
                      "library nor duplicated")
        for artifact_id, services in sorted(uses.items())
        if len(services) >= 2
    ]


def _rule_replica_writes(model: ArchModel, boundary: Boundary) -> list[RuleViolation]:
    out = []
    snapshots = {g.id for g in model.generated if g.kind == "snapshot_table"}
    for edge in model.edges.data_access:
        if edge.table_id in snapshots and edge.writes:
            out.append(RuleViolation(
                "R-REP", (edge.id,),
                f"write access to read-only snapshot {edge.table_id}",
            ))
    return out
