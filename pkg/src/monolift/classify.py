"""Enumerate and categorize every cross-service dependency in (model, boundary).

Five categories: CALL, FOREIGN_KEY, SHARED_TABLE, TYPE_USE, SHARED_ARTIFACT.
The classifier and the readiness verifier must agree on what counts as a
dependency; any exemption here (sanctioned generated targets, read-only
tables) mirrors a rule there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .boundary import Boundary
from .errors import UnknownTableError
from .model import WILDCARD, ArchModel, Table

CATEGORIES = ("CALL", "FOREIGN_KEY", "SHARED_ARTIFACT", "SHARED_TABLE", "TYPE_USE")

TABLE_SCENARIOS = frozenset({
    "exclusive", "distinct_columns", "shared_write_columns", "single_writer_multi_reader",
})

SCENARIOS_BY_CATEGORY = {
    "CALL": frozenset({"requires_response", "eventual_ok"}),
    "FOREIGN_KEY": frozenset({"one_to_one", "many_to_one", "one_to_many"}),
    "SHARED_TABLE": frozenset({"distinct_columns", "shared_write_columns", "single_writer_multi_reader"}),
    "TYPE_USE": frozenset({"holds_data", "invocation_only", "transient"}),
    "SHARED_ARTIFACT": frozenset({"unresolved"}),
}


@dataclass(frozen=True)
class Finding:
    id: str
    category: str
    subject_ids: tuple[str, ...]
    services: tuple[str, ...]
    scenario: str
    evidence: str

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "category": self.category,
            "subject_ids": list(self.subject_ids),
            "services": list(self.services),
            "scenario": self.scenario,
            "evidence": self.evidence,
        }

    @classmethod
    def from_obj(cls, data: dict[str, Any]) -> "Finding":
        return cls(
            id=data["id"],
            category=data["category"],
            subject_ids=tuple(data["subject_ids"]),
            services=tuple(data["services"]),
            scenario=data["scenario"],
            evidence=data["evidence"],
        )


@dataclass(frozen=True)
class AccessMatrix:
    table_id: str
    rows: tuple[tuple[str, tuple[str, ...], tuple[str, ...]], ...]
    """(service, read columns, write columns), sorted by service."""

    def services(self) -> tuple[str, ...]:
        return tuple(service for service, _, _ in self.rows)

    def writers(self) -> tuple[str, ...]:
        return tuple(service for service, _, writes in self.rows if writes)

    def readers_only(self) -> tuple[str, ...]:
        return tuple(service for service, reads, writes in self.rows if reads and not writes)

    def write_columns(self, service: str) -> frozenset[str]:
        for name, _, writes in self.rows:
            if name == service:
                return frozenset(writes)
        return frozenset()


def access_matrix(model: ArchModel, boundary: Boundary, table_id: str) -> AccessMatrix:
    """Per-service read/write column sets for one table.

    Wildcard accesses expand to all columns; ``read_write`` contributes to
    both sets.
    """
    table = model.table_by_id(table_id)
    if table is None:
        raise UnknownTableError(table_id)
    all_columns = table.column_names()

    reads: dict[str, set[str]] = {}
    writes: dict[str, set[str]] = {}
    for edge in model.edges.data_access:
        if edge.table_id != table_id:
            continue
        service = boundary.owner_of(model, edge.accessor_class_id)
        if service is None:
            continue
        columns = set(all_columns) if edge.columns == (WILDCARD,) else set(edge.columns)
        if edge.reads:
            reads.setdefault(service, set()).update(columns)
        if edge.writes:
            writes.setdefault(service, set()).update(columns)

    rows = tuple(
        (service, tuple(sorted(reads.get(service, set()))), tuple(sorted(writes.get(service, set()))))
        for service in sorted(set(reads) | set(writes))
    )
    return AccessMatrix(table_id=table_id, rows=rows)


def table_scenario(matrix: AccessMatrix) -> str:
    """Access-pattern scenario of a shared table.

    ``exclusive`` when at most one service touches it; ``shared_write_columns``
    when two or more services write an overlapping column;
    ``distinct_columns`` when several services write disjoint column sets;
    ``single_writer_multi_reader`` otherwise.
    """
    if len(matrix.rows) <= 1:
        return "exclusive"
    writers = matrix.writers()
    if len(writers) >= 2:
        for i, first in enumerate(writers):
            for second in writers[i + 1:]:
                if matrix.write_columns(first) & matrix.write_columns(second):
                    return "shared_write_columns"
        return "distinct_columns"
    return "single_writer_multi_reader"


def classify(model: ArchModel, boundary: Boundary) -> list[Finding]:
    """All cross-service dependencies, each reported once, deterministically
    sorted by (category, subject)."""
    findings: list[Finding] = []
    findings.extend(_classify_calls(model, boundary))
    findings.extend(_classify_foreign_keys(model, boundary))
    findings.extend(_classify_shared_tables(model, boundary))
    findings.extend(_classify_type_uses(model, boundary))
    findings.extend(_classify_artifacts(model, boundary))
    findings.sort(key=lambda f: (f.category, f.id))
    return findings


def _service_of_method(model: ArchModel, boundary: Boundary, method_id: str) -> str | None:
    method = model.method_by_id(method_id)
    if method is None:
        return None
    return boundary.owner_of(model, method.owner_class_id)


def _classify_calls(model: ArchModel, boundary: Boundary) -> list[Finding]:
    out = []
    for edge in model.edges.calls:
        caller = _service_of_method(model, boundary, edge.caller_method_id)
        callee = _service_of_method(model, boundary, edge.callee_method_id)
        if caller is None or callee is None or caller == callee:
            continue
        scenario = (
            "requires_response"
            if edge.needs_immediate_response or edge.needs_strong_consistency
            else "eventual_ok"
        )
        out.append(Finding(
            id=f"find:CALL:{edge.id}",
            category="CALL",
            subject_ids=(edge.id,),
            services=tuple(sorted({caller, callee})),
            scenario=scenario,
            evidence=(
                f"method {edge.caller_method_id} ({caller}) calls "
                f"{edge.callee_method_id} ({callee}) directly"
            ),
        ))
    return out


def _classify_foreign_keys(model: ArchModel, boundary: Boundary) -> list[Finding]:
    out = []
    for fk in model.foreign_keys:
        from_service = boundary.owner_of(model, fk.from_table_id)
        to_service = boundary.owner_of(model, fk.to_table_id)
        if from_service is None or to_service is None or from_service == to_service:
            continue
        out.append(Finding(
            id=f"find:FOREIGN_KEY:{fk.id}",
            category="FOREIGN_KEY",
            subject_ids=(fk.id,),
            services=tuple(sorted({from_service, to_service})),
            scenario=fk.cardinality,
            evidence=(
                f"table {fk.from_table_id} ({from_service}) references "
                f"{fk.to_table_id} ({to_service}) via columns {', '.join(fk.from_columns)}"
            ),
        ))
    return out


def _classify_shared_tables(model: ArchModel, boundary: Boundary) -> list[Finding]:
    out = []
    for table in model.tables:
        if table.read_only:
            # Read-only tables are shareable reference data; the verifier
            # exempts them the same way.
            continue
        finding = _shared_table_finding(model, boundary, table)
        if finding is not None:
            out.append(finding)
    return out


def _shared_table_finding(model: ArchModel, boundary: Boundary, table: Table) -> Finding | None:
    matrix = access_matrix(model, boundary, table.id)
    if not matrix.rows:
        return None
    owner = boundary.owner_of(model, table.id)
    accessors = set(matrix.services())
    foreign = accessors - ({owner} if owner else set())
    if len(accessors) < 2 and not foreign:
        return None
    scenario = table_scenario(matrix)
    if scenario == "exclusive":
        # Single accessor, but a foreign one: still a shared-ownership problem.
        scenario = "single_writer_multi_reader"
    services = sorted(accessors | ({owner} if owner else set()))
    writers = matrix.writers()
    return Finding(
        id=f"find:SHARED_TABLE:{table.id}",
        category="SHARED_TABLE",
        subject_ids=(table.id,),
        services=tuple(services),
        scenario=scenario,
        evidence=(
            f"table {table.id} (owner {owner}) accessed from {', '.join(sorted(accessors))}; "
            f"writers: {', '.join(writers) if writers else 'none'}"
        ),
    )


def _call_class_pairs(model: ArchModel) -> set[tuple[str, str]]:
    pairs = set()
    for edge in model.edges.calls:
        caller = model.method_by_id(edge.caller_method_id)
        callee = model.method_by_id(edge.callee_method_id)
        if caller is not None and callee is not None:
            pairs.add((caller.owner_class_id, callee.owner_class_id))
    return pairs


def _classify_type_uses(model: ArchModel, boundary: Boundary) -> list[Finding]:
    call_pairs = _call_class_pairs(model)
    classes = {c.id for c in model.classes}
    groups: dict[tuple[str, str], list] = {}
    for edge in model.edges.type_uses:
        if edge.used_class_id not in classes:
            continue  # DTOs, replicas, and other generated targets are sanctioned
        user_service = boundary.owner_of(model, edge.user_class_id)
        used_service = boundary.owner_of(model, edge.used_class_id)
        if user_service is None or used_service is None or user_service == used_service:
            continue
        if edge.kind == "invocation" and (edge.user_class_id, edge.used_class_id) in call_pairs:
            continue  # subsumed by the CALL finding on the same class pair
        groups.setdefault((user_service, edge.used_class_id), []).append((edge, used_service))

    out = []
    for (user_service, used_class_id), entries in sorted(groups.items()):
        edges = sorted((e for e, _ in entries), key=lambda e: e.id)
        used_service = entries[0][1]
        kinds = sorted({e.kind for e in edges})
        if "attribute" in kinds:
            scenario = "holds_data"
        elif kinds == ["invocation"]:
            scenario = "invocation_only"
        else:
            scenario = "transient"
        out.append(Finding(
            id=f"find:TYPE_USE:{used_class_id}@{user_service}",
            category="TYPE_USE",
            subject_ids=tuple(e.id for e in edges),
            services=tuple(sorted({user_service, used_service})),
            scenario=scenario,
            evidence=(
                f"service {user_service} uses type {used_class_id} ({used_service}); "
                f"kinds: {', '.join(kinds)}"
            ),
        ))
    return out


def _classify_artifacts(model: ArchModel, boundary: Boundary) -> list[Finding]:
    uses: dict[str, set[str]] = {}
    for edge in model.edges.artifact_uses:
        if model.artifact_by_id(edge.artifact_id) is None:
            continue  # library / copy targets are sanctioned
        service = boundary.owner_of(model, edge.user_class_id)
        if service is not None:
            uses.setdefault(edge.artifact_id, set()).add(service)

    out = []
    for artifact_id, services in sorted(uses.items()):
        if len(services) < 2:
            continue
        artifact = model.artifact_by_id(artifact_id)
        out.append(Finding(
            id=f"find:SHARED_ARTIFACT:{artifact_id}",
            category="SHARED_ARTIFACT",
            subject_ids=(artifact_id,),
            services=tuple(sorted(services)),
            scenario="unresolved",
            evidence=(
                f"artifact {artifact_id} (business logic: {artifact.has_business_logic}, "
                f"{artifact.stability}) used from {', '.join(sorted(services))}"
            ),
        ))
    return out
