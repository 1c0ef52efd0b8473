"""The seven catalogue refactorings as pure delta-emitting functions.

Each transform maps (model, boundary, subject) to the deltas realizing its
mechanics plus requests for the helper refactorings those mechanics require.
Transforms are "ensure"-style: an entity or edge that already exists under
its deterministic id is reused, never duplicated, so arbitrary compositions
of steps stay replayable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import naming
from .boundary import Boundary, PolicyConfig
from .classify import AccessMatrix, access_matrix, table_scenario
from .deltas import (
    ModelDelta,
    add_attribute,
    add_edge,
    add_entity,
    remove_edge,
    remove_entity,
    remove_foreign_key,
    retag_edge,
    set_table_owner_hint,
    split_table,
    duplicate_artifact,
)
from .errors import (
    ConsumerWritesReplicaError,
    IllegalStrategyError,
    NotCrossBoundaryError,
    ScenarioMismatchError,
    UnknownEdgeError,
    UnknownTableError,
)
from .model import (
    WILDCARD,
    ArchModel,
    CodeClass,
    DataAccessEdge,
    GeneratedEntity,
    ServiceCallEdge,
    Table,
    TypeUseEdge,
)

REFACTORINGS = (
    "BreakDataTypeDependency",
    "CreateDTO",
    "MoveForeignKeyToCode",
    "ReplaceMethodCallWithServiceCall",
    "ReplicateData",
    "SharedCodeIsolation",
    "SplitDatabase",
)

LEGAL_STRATEGIES = {
    "ReplaceMethodCallWithServiceCall": frozenset({"sync", "async"}),
    "MoveForeignKeyToCode": frozenset({"move_to_code"}),
    "ReplicateData": frozenset({"event_sourcing", "db_replication", "change_data_capture"}),
    "SplitDatabase": frozenset({"split", "replicate", "ownership", "service_call"}),
    "CreateDTO": frozenset({"dto"}),
    "BreakDataTypeDependency": frozenset({"central", "replicate", "proxy"}),
    "SharedCodeIsolation": frozenset({"duplicate", "library", "service"}),
}


@dataclass(frozen=True)
class Subject:
    """What a step operates on; ids are interpreted per kind."""

    kind: str
    ids: tuple[str, ...]


@dataclass(frozen=True)
class DelegationRequest:
    """A helper step another refactoring's mechanics require."""

    refactoring: str
    strategy: str
    subject: Subject
    rationale: str
    before_parent: bool
    child_key: str
    follows_keys: tuple[str, ...] = ()


@dataclass(frozen=True)
class TransformResult:
    deltas: tuple[ModelDelta, ...] = ()
    requests: tuple[DelegationRequest, ...] = ()
    notes: tuple[str, ...] = ()


class _Emitter:
    """Collects deltas against a model, skipping already-satisfied additions."""

    def __init__(self, model: ArchModel):
        self.model = model
        self.deltas: list[ModelDelta] = []
        self.notes: list[str] = []
        self._ids = set(model.entity_ids()) | {e.id for e in model.edges.all_edges()}
        self._removed: set[str] = set()

    def has(self, entity_id: str) -> bool:
        return entity_id in self._ids and entity_id not in self._removed

    def ensure_generated(self, entity: GeneratedEntity) -> None:
        if self.has(entity.id):
            return
        self.deltas.append(add_entity("generated", entity))
        self._ids.add(entity.id)

    def ensure_table(self, table: Table) -> None:
        if self.has(table.id):
            return
        self.deltas.append(add_entity("table", table))
        self._ids.add(table.id)

    def ensure_service_edge(self, edge: ServiceCallEdge) -> None:
        if self.has(edge.id):
            return
        self.deltas.append(add_edge("service_calls", edge))
        self._ids.add(edge.id)

    def remove_edge(self, edge_id: str) -> None:
        if not self.has(edge_id):
            return
        self.deltas.append(remove_edge(edge_id))
        self._removed.add(edge_id)

    def retag(self, edge_id: str, **changes) -> None:
        self.deltas.append(retag_edge(edge_id, changes))

    def raw(self, delta: ModelDelta) -> None:
        self.deltas.append(delta)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def result(self, requests: tuple[DelegationRequest, ...] = ()) -> TransformResult:
        return TransformResult(deltas=tuple(self.deltas), requests=requests, notes=tuple(self.notes))


# --- shared lookups -----------------------------------------------------------

def _table_or_raise(model: ArchModel, table_id: str) -> Table:
    table = model.table_by_id(table_id)
    if table is None:
        raise UnknownTableError(table_id)
    return table


def _table_key_column(model: ArchModel, table: Table) -> str:
    keys = table.key_columns(model.fk_reference_columns(table.id))
    if keys:
        return keys[0]
    return table.columns[0].name if table.columns else "id"


def _primary_orm_class(model: ArchModel, table_id: str) -> CodeClass | None:
    linked = model.orm_classes_of_table(table_id)
    return linked[0] if linked else None


def _write_edge_counts(model: ArchModel, boundary: Boundary, table_id: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for edge in model.edges.data_access:
        if edge.table_id == table_id and edge.writes:
            service = boundary.owner_of(model, edge.accessor_class_id)
            if service is not None:
                counts[service] = counts.get(service, 0) + 1
    return counts


def decide_table_owner(model: ArchModel, boundary: Boundary, table_id: str, scenario: str) -> str:
    """Owner of a shared table under the given scenario.

    Shared writes: the service with most write edges, ties broken by
    lexicographically smallest name. Single writer: that writer. Otherwise
    the boundary assignment stands.
    """
    matrix = access_matrix(model, boundary, table_id)
    writers = matrix.writers()
    if scenario == "shared_write_columns" or (scenario == "distinct_columns" and writers):
        counts = _write_edge_counts(model, boundary, table_id)
        best = max(counts.values())
        return sorted(s for s, n in counts.items() if n == best)[0]
    if len(writers) == 1:
        return writers[0]
    owner = boundary.owner_of(model, table_id)
    if owner is not None:
        return owner
    return sorted(matrix.services())[0]


def effective_table_scenario(model: ArchModel, boundary: Boundary, table_id: str) -> str | None:
    """Scenario the classifier reports for a shared table, or None when the
    table is not shared (only its owner touches it)."""
    table = _table_or_raise(model, table_id)
    if table.read_only:
        return None
    matrix = access_matrix(model, boundary, table_id)
    if not matrix.rows:
        return None
    owner = boundary.owner_of(model, table_id)
    accessors = set(matrix.services())
    if len(accessors) < 2 and accessors == ({owner} if owner else set()):
        return None
    scenario = table_scenario(matrix)
    return "single_writer_multi_reader" if scenario == "exclusive" else scenario


# --- Replace Method Call with Service Call -------------------------------------

def replace_call(model: ArchModel, boundary: Boundary, call_edge_id: str, mode: str) -> TransformResult:
    """Turn a direct cross-service method call into a service call.

    Synchronous: interface and request client on the caller side, an API
    endpoint on the provider side. Asynchronous: a message channel that the
    initiator publishes to and the provider subscribes to.
    """
    if mode not in ("sync", "async"):
        raise IllegalStrategyError(f"mode must be sync or async, got {mode!r}")
    edge = next((e for e in model.edges.calls if e.id == call_edge_id), None)
    if edge is None:
        raise UnknownEdgeError(call_edge_id)
    caller_method = model.method_by_id(edge.caller_method_id)
    callee_method = model.method_by_id(edge.callee_method_id)
    caller_service = boundary.owner_of(model, caller_method.owner_class_id)
    callee_service = boundary.owner_of(model, callee_method.owner_class_id)
    if caller_service == callee_service:
        raise NotCrossBoundaryError(
            f"call edge {call_edge_id!r} stays inside service {caller_service!r}")
    return _replace_call_deltas(model, boundary, call_edge_id, mode)


def _replace_call_deltas(model: ArchModel, boundary: Boundary, call_edge_id: str, mode: str) -> TransformResult:
    emitter = _Emitter(model)
    edge = next((e for e in model.edges.calls if e.id == call_edge_id), None)
    if edge is None:
        emitter.note(f"call edge {call_edge_id} already resolved by an earlier step")
        return emitter.result()
    caller_method = model.method_by_id(edge.caller_method_id)
    callee_method = model.method_by_id(edge.callee_method_id)
    caller_class = model.class_by_id(caller_method.owner_class_id)
    callee_class = model.class_by_id(callee_method.owner_class_id)
    caller_service = boundary.owner_of(model, caller_class.id)
    callee_service = boundary.owner_of(model, callee_class.id)

    if mode == "sync":
        interface = GeneratedEntity(
            id=naming.interface_id(callee_class.id, caller_service),
            kind="interface", name=callee_class.name, owner_service=caller_service,
            payload={"methods": [callee_method.name]},
        )
        client = GeneratedEntity(
            id=naming.request_client_id(callee_class.id, caller_service),
            kind="request_client", name=f"Remote{callee_class.name}", owner_service=caller_service,
            payload={"implements": interface.id},
        )
        segment = naming.provider_segment(callee_class.name)
        endpoint = GeneratedEntity(
            id=naming.api_endpoint_id(callee_method.id),
            kind="api_endpoint", name=naming.pascal(segment) + "Controller",
            owner_service=callee_service,
            payload={"path": naming.call_endpoint_path(callee_class.name, callee_method.name)},
        )
        emitter.ensure_generated(interface)
        emitter.ensure_generated(client)
        emitter.ensure_generated(endpoint)
        via = endpoint.id
        service_edge = ServiceCallEdge(
            id=naming.service_call_edge_id(caller_class.id, via),
            caller_entity_id=caller_class.id, provider_entity_id=callee_class.id,
            mode="sync", via=via,
        )
    else:
        channel = GeneratedEntity(
            id=naming.channel_id(f"{caller_class.id}-events"),
            kind="message_channel", name=f"{caller_class.name}Events", owner_service=caller_service,
            payload={"topic": naming.kebab(caller_class.name) + "-events"},
        )
        emitter.ensure_generated(channel)
        via = channel.id
        service_edge = ServiceCallEdge(
            id=naming.service_call_edge_id(caller_class.id, via),
            caller_entity_id=caller_class.id, provider_entity_id=channel.id,
            mode="async_publish", via=via,
        )

    emitter.remove_edge(edge.id)
    _drop_subsumed_invocations(emitter, model, caller_class.id, callee_class.id)
    emitter.ensure_service_edge(service_edge)
    if mode == "async":
        emitter.ensure_service_edge(ServiceCallEdge(
            id=naming.service_call_edge_id(callee_class.id, via),
            caller_entity_id=callee_class.id, provider_entity_id=via,
            mode="async_subscribe", via=via,
        ))
        emitter.note(
            "async roles follow the worked examples: the initiator publishes the "
            "domain event and the effect owner subscribes (the mechanics text "
            "lists the reverse)"
        )
    return emitter.result()


def _drop_subsumed_invocations(emitter: _Emitter, model: ArchModel, caller_class_id: str, callee_class_id: str) -> None:
    # Invocation-kind type uses between the same class pair describe the same
    # dependency as the call edge; the service call resolves both.
    for edge in model.edges.type_uses:
        if (edge.kind == "invocation"
                and edge.user_class_id == caller_class_id
                and edge.used_class_id == callee_class_id):
            emitter.remove_edge(edge.id)


def _fk_retrieve_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    """Follow-up service call for a moved foreign key: the referencing side
    retrieves related rows by primary key."""
    fk_id, from_table_id, to_table_id = subject.ids[0], subject.ids[1], subject.ids[2]
    to_columns = subject.ids[3:]
    emitter = _Emitter(model)
    to_table = model.table_by_id(to_table_id)
    from_service = boundary.owner_of(model, from_table_id)
    to_service = boundary.owner_of(model, to_table_id)
    if to_table is None or from_service is None or to_service is None:
        emitter.note(f"retrieval call for {fk_id} skipped: tables no longer present")
        return emitter.result()
    if from_service == to_service:
        emitter.note(f"retrieval for {fk_id} stays a local repository lookup inside {from_service}")
        return emitter.result()

    provider_class = _primary_orm_class(model, to_table_id)
    provider_seed = provider_class.id if provider_class else to_table_id
    provider_name = provider_class.name if provider_class else naming.pascal(naming.singular(to_table.name))
    key_column = to_columns[0] if to_columns else _table_key_column(model, to_table)

    endpoint = GeneratedEntity(
        id=naming.api_endpoint_id(f"{to_table_id}.get"),
        kind="api_endpoint", name=f"{provider_name}Controller", owner_service=to_service,
        payload={"path": naming.row_endpoint_path(to_table.name, key_column)},
    )
    interface = GeneratedEntity(
        id=naming.interface_id(provider_seed, from_service),
        kind="interface", name=provider_name, owner_service=from_service,
        payload={"methods": [naming.camel("get", provider_name, "by", key_column)]},
    )
    client = GeneratedEntity(
        id=naming.request_client_id(provider_seed, from_service),
        kind="request_client", name=f"Remote{provider_name}", owner_service=from_service,
        payload={"implements": interface.id},
    )
    emitter.ensure_generated(endpoint)
    emitter.ensure_generated(interface)
    emitter.ensure_generated(client)

    caller = _primary_orm_class(model, from_table_id)
    caller_id = caller.id if caller else naming.data_access_interface_id(from_table_id)
    if caller is None and not emitter.has(caller_id):
        from_table = model.table_by_id(from_table_id)
        emitter.ensure_generated(_data_access_interface(from_table or to_table, from_table_id, from_service))
    provider_id = provider_class.id if provider_class else naming.data_access_interface_id(to_table_id)
    if provider_class is None and not emitter.has(provider_id):
        emitter.ensure_generated(_data_access_interface(to_table, to_table_id, to_service))

    emitter.ensure_service_edge(ServiceCallEdge(
        id=naming.service_call_edge_id(caller_id, endpoint.id),
        caller_entity_id=caller_id, provider_entity_id=provider_id,
        mode="sync", via=endpoint.id,
    ))
    return emitter.result()


def _table_access_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    """Replace one foreign data-access edge with service calls to the
    table's owner: one endpoint per written column, one row endpoint for
    pure reads."""
    edge_id, table_id, owner_service = subject.ids
    emitter = _Emitter(model)
    edge = next((e for e in model.edges.data_access if e.id == edge_id), None)
    if edge is None or edge.table_id != table_id:
        emitter.note(f"data access {edge_id} already resolved by an earlier step")
        return emitter.result()
    accessor_service = boundary.owner_of(model, edge.accessor_class_id)
    if accessor_service == owner_service:
        emitter.note(f"data access {edge_id} is local to {owner_service}; nothing to replace")
        return emitter.result()
    table = model.table_by_id(edge.table_id)
    if table is None:
        emitter.note(f"data access {edge_id} targets a vanished table; skipped")
        return emitter.result()

    key_column = _table_key_column(model, table)
    controller = naming.pascal(naming.singular(table.name)) + "Controller"
    endpoints: list[GeneratedEntity] = []
    if edge.writes:
        written = table.column_names() if edge.columns == (WILDCARD,) else edge.columns
        for column in sorted(written):
            endpoints.append(GeneratedEntity(
                id=naming.api_endpoint_id(f"{table.id}.{column}"),
                kind="api_endpoint", name=controller, owner_service=owner_service,
                payload={"path": naming.column_endpoint_path(table.name, key_column, column)},
            ))
    else:
        endpoints.append(GeneratedEntity(
            id=naming.api_endpoint_id(f"{table.id}.get"),
            kind="api_endpoint", name=controller, owner_service=owner_service,
            payload={"path": naming.row_endpoint_path(table.name, key_column)},
        ))

    client = GeneratedEntity(
        id=naming.request_client_id(table.id, accessor_service),
        kind="request_client", name=f"Remote{naming.pascal(naming.singular(table.name))}",
        owner_service=accessor_service,
        payload={"table_id": table.id},
    )
    emitter.ensure_generated(client)
    emitter.remove_edge(edge.id)
    for endpoint in endpoints:
        emitter.ensure_generated(endpoint)
        emitter.ensure_service_edge(ServiceCallEdge(
            id=naming.service_call_edge_id(edge.accessor_class_id, endpoint.id),
            caller_entity_id=edge.accessor_class_id, provider_entity_id=table.id,
            mode="sync", via=endpoint.id,
        ))
    return emitter.result()


def _type_invocation_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    """Replace invocation-kind uses of a foreign type with service calls."""
    used_class_id, user_service = subject.ids[0], subject.ids[1]
    edge_ids = subject.ids[2:]
    emitter = _Emitter(model)
    used = model.class_by_id(used_class_id)
    if used is None:
        emitter.note(f"type {used_class_id} no longer present; skipped")
        return emitter.result()
    used_service = boundary.owner_of(model, used_class_id)

    endpoint = GeneratedEntity(
        id=naming.api_endpoint_id(f"{used_class_id}.get"),
        kind="api_endpoint", name=f"{used.name}Controller", owner_service=used_service,
        payload={"path": f"/api/{naming.kebab(used.name)}/{{id}}"},
    )
    client = GeneratedEntity(
        id=naming.request_client_id(used_class_id, user_service),
        kind="request_client", name=f"Remote{used.name}", owner_service=user_service,
        payload={"source_class_id": used_class_id},
    )
    removed_any = False
    for edge_id in edge_ids:
        edge = next((e for e in model.edges.type_uses if e.id == edge_id), None)
        if edge is None or edge.kind != "invocation" or edge.used_class_id != used_class_id:
            continue
        if not removed_any:
            emitter.ensure_generated(endpoint)
            emitter.ensure_generated(client)
            removed_any = True
        emitter.remove_edge(edge.id)
        emitter.ensure_service_edge(ServiceCallEdge(
            id=naming.service_call_edge_id(edge.user_class_id, endpoint.id),
            caller_entity_id=edge.user_class_id, provider_entity_id=used_class_id,
            mode="sync", via=endpoint.id,
        ))
    if not removed_any:
        emitter.note(f"no invocation uses of {used_class_id} remained for {user_service}")
    return emitter.result()


def _artifact_call_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    """Point one service's uses of an isolated artifact at the new service."""
    artifact_id, service = subject.ids
    emitter = _Emitter(model)
    artifact = model.artifact_by_id(artifact_id)
    if artifact is None:
        emitter.note(f"artifact {artifact_id} no longer present; skipped")
        return emitter.result()
    endpoint_id = naming.api_endpoint_id(artifact_id)
    new_service_entity_id = naming.new_service_id(artifact_id)
    if not emitter.has(endpoint_id) or not emitter.has(new_service_entity_id):
        emitter.note(f"isolation service for {artifact_id} missing; edges left untouched")
        return emitter.result()

    client = GeneratedEntity(
        id=naming.request_client_id(artifact_id, service),
        kind="request_client", name=f"Remote{artifact.name}", owner_service=service,
        payload={"source_artifact_id": artifact_id},
    )
    touched = False
    for edge in model.edges.artifact_uses:
        if edge.artifact_id != artifact_id:
            continue
        if boundary.owner_of(model, edge.user_class_id) != service:
            continue
        if not touched:
            emitter.ensure_generated(client)
            touched = True
        emitter.remove_edge(edge.id)
        emitter.ensure_service_edge(ServiceCallEdge(
            id=naming.service_call_edge_id(edge.user_class_id, endpoint_id),
            caller_entity_id=edge.user_class_id, provider_entity_id=new_service_entity_id,
            mode="sync", via=endpoint_id,
        ))
    if not touched:
        emitter.note(f"no uses of {artifact_id} remained in {service}")
    return emitter.result()


# --- Move Foreign-key Relationship to Code --------------------------------------

def move_fk(model: ArchModel, boundary: Boundary, fk_id: str) -> TransformResult:
    """Drop a cross-service foreign key and carry the relationship in code.

    The constraint is removed, the referencing class gains a reference
    attribute per key column, both tables get explicit owner hints and data
    access interfaces, and former join accesses become column filters. Data
    retrieval is delegated to a follow-up service call.
    """
    fk = model.foreign_key_by_id(fk_id)
    if fk is None:
        raise UnknownEdgeError(fk_id)
    from_service = boundary.owner_of(model, fk.from_table_id)
    to_service = boundary.owner_of(model, fk.to_table_id)
    if from_service == to_service:
        raise NotCrossBoundaryError(f"foreign key {fk_id!r} stays inside service {from_service!r}")
    result = _move_fk_deltas(model, boundary, Subject("fk", (fk_id,)))
    return TransformResult(
        deltas=result.deltas,
        requests=(_fk_retrieve_request(model, fk),),
        notes=result.notes,
    )


def _fk_retrieve_request(model: ArchModel, fk) -> DelegationRequest:
    return DelegationRequest(
        refactoring="ReplaceMethodCallWithServiceCall",
        strategy="sync",
        subject=Subject("fk_retrieve", (fk.id, fk.from_table_id, fk.to_table_id) + fk.to_columns),
        rationale="retrieve related data by primary key now that the join is gone",
        before_parent=False,
        child_key="retrieve",
    )


def _data_access_interface(table: Table, table_id: str, service: str) -> GeneratedEntity:
    return GeneratedEntity(
        id=naming.data_access_interface_id(table_id),
        kind="data_access_interface",
        name=naming.pascal(naming.singular(table.name)) + "Repository",
        owner_service=service,
        payload={"table_id": table_id},
    )


def _move_fk_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    fk_id = subject.ids[0]
    emitter = _Emitter(model)
    fk = model.foreign_key_by_id(fk_id)
    if fk is None:
        emitter.note(f"foreign key {fk_id} already removed by an earlier step")
        return emitter.result()
    from_table = model.table_by_id(fk.from_table_id)
    to_table = model.table_by_id(fk.to_table_id)
    from_service = boundary.owner_of(model, fk.from_table_id)
    to_service = boundary.owner_of(model, fk.to_table_id)

    emitter.raw(remove_foreign_key(fk_id))

    referencing = _primary_orm_class(model, fk.from_table_id)
    referenced = _primary_orm_class(model, fk.to_table_id)
    referenced_name = referenced.name if referenced else naming.singular(to_table.name)
    if referencing is not None:
        for key_column in fk.to_columns:
            attribute = naming.reference_attribute(referenced_name, key_column)
            if attribute not in referencing.scalar_attributes:
                emitter.raw(add_attribute(referencing.id, attribute))
    else:
        emitter.note(
            f"table {fk.from_table_id} has no mapped class; reference attribute "
            f"for {fk.to_table_id} skipped"
        )

    for table, service in ((from_table, from_service), (to_table, to_service)):
        if service is not None and table.owner_hint != service:
            emitter.raw(set_table_owner_hint(table.id, service))
        if service is not None:
            emitter.ensure_generated(_data_access_interface(table, table.id, service))

    # Former joins: accesses from the referencing side to the referenced table
    # become filters on the local reference columns.
    if from_service is not None:
        for edge in model.edges.data_access:
            if edge.table_id != fk.to_table_id:
                continue
            if boundary.owner_of(model, edge.accessor_class_id) != from_service:
                continue
            emitter.retag(edge.id, table_id=fk.from_table_id,
                          columns=list(fk.from_columns), mode="read")
    return emitter.result()


# --- Replicate Data Across Microservices ----------------------------------------

def replicate_data(
    model: ArchModel,
    boundary: Boundary,
    table_id: str,
    owner_service: str,
    consumer_services: tuple[str, ...] | list[str],
    mechanism: str = "event_sourcing",
) -> TransformResult:
    """Give consumers read-only snapshots of an owner's table.

    Event sourcing adds a domain-event channel the owner publishes to and
    each snapshot subscribes to; other mechanisms are recorded on the
    snapshot only. Consumer reads move to the local snapshot; a consumer
    that writes the source table is an error.
    """
    table = _table_or_raise(model, table_id)
    if mechanism not in LEGAL_STRATEGIES["ReplicateData"]:
        raise IllegalStrategyError(f"unknown replication mechanism {mechanism!r}")
    consumers = tuple(sorted(set(consumer_services)))
    if owner_service in consumers:
        raise IllegalStrategyError(f"owner {owner_service!r} cannot be its own replication consumer")
    actual_owner = boundary.owner_of(model, table_id)
    if actual_owner is not None and actual_owner != owner_service:
        raise IllegalStrategyError(
            f"table {table_id!r} belongs to {actual_owner!r}, not {owner_service!r}")
    for edge in model.edges.data_access:
        if edge.table_id == table_id and edge.writes:
            service = boundary.owner_of(model, edge.accessor_class_id)
            if service in consumers:
                raise ConsumerWritesReplicaError(
                    f"consumer {service!r} writes source table {table_id!r} via {edge.id!r}")
    return _replicate_deltas(model, boundary,
                             Subject("replicate", (table_id, owner_service, mechanism) + consumers))


def _replicate_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    table_id, owner_service, mechanism = subject.ids[0], subject.ids[1], subject.ids[2]
    consumers = subject.ids[3:]
    emitter = _Emitter(model)
    table = model.table_by_id(table_id)
    if table is None:
        emitter.note(f"table {table_id} no longer present; replication skipped")
        return emitter.result()

    channel_entity_id = None
    if mechanism == "event_sourcing":
        channel = GeneratedEntity(
            id=naming.channel_id(f"{table_id}-events"),
            kind="message_channel",
            name=naming.pascal(naming.singular(table.name)) + "UpdatedEvent",
            owner_service=owner_service,
            payload={"topic": naming.kebab(table.name) + "-updates"},
        )
        emitter.ensure_generated(channel)
        channel_entity_id = channel.id
        publisher = _primary_orm_class(model, table_id)
        publisher_id = publisher.id if publisher else table_id
        emitter.ensure_service_edge(ServiceCallEdge(
            id=naming.service_call_edge_id(publisher_id, channel.id),
            caller_entity_id=publisher_id, provider_entity_id=channel.id,
            mode="async_publish", via=channel.id,
        ))

    for consumer in consumers:
        if _consumer_writes(model, boundary, table_id, consumer):
            raise ConsumerWritesReplicaError(
                f"consumer {consumer!r} writes source table {table_id!r}")
        snapshot = GeneratedEntity(
            id=naming.snapshot_table_id(table_id, consumer),
            kind="snapshot_table", name=f"{table.name}_snapshot", owner_service=consumer,
            payload={"source_table_id": table_id, "read_only": True, "mechanism": mechanism},
        )
        emitter.ensure_generated(snapshot)
        if channel_entity_id is not None:
            emitter.ensure_service_edge(ServiceCallEdge(
                id=naming.service_call_edge_id(snapshot.id, channel_entity_id),
                caller_entity_id=snapshot.id, provider_entity_id=channel_entity_id,
                mode="async_subscribe", via=channel_entity_id,
            ))
        for edge in model.edges.data_access:
            if edge.table_id != table_id or edge.writes:
                continue
            if boundary.owner_of(model, edge.accessor_class_id) != consumer:
                continue
            emitter.retag(edge.id, table_id=snapshot.id)
    return emitter.result()


def _consumer_writes(model: ArchModel, boundary: Boundary, table_id: str, consumer: str) -> bool:
    return any(
        edge.table_id == table_id and edge.writes
        and boundary.owner_of(model, edge.accessor_class_id) == consumer
        for edge in model.edges.data_access
    )


# --- Split Database Across Microservices -----------------------------------------

def split_database(
    model: ArchModel,
    boundary: Boundary,
    table_id: str,
    scenario: str,
    policy: PolicyConfig,
) -> TransformResult:
    """Give a shared table a single owner, by access pattern.

    Distinct columns split into per-service tables (after delegated foreign
    key moves); shared writes assign an owner and delegate foreign writes to
    service calls; readers go through service calls or replication per
    policy.
    """
    recomputed = effective_table_scenario(model, boundary, table_id)
    if scenario == "exclusive":
        if recomputed is not None:
            raise ScenarioMismatchError(
                f"table {table_id!r}: supplied scenario 'exclusive', recomputed {recomputed!r}")
        return TransformResult(notes=(f"table {table_id} is not shared; nothing to do",))
    if recomputed != scenario:
        raise ScenarioMismatchError(
            f"table {table_id!r}: supplied scenario {scenario!r}, recomputed {recomputed!r}")
    strategy = _split_strategy_for(scenario, policy)
    owner = decide_table_owner(model, boundary, table_id, scenario)
    requests = split_requests(model, boundary, table_id, scenario, strategy, owner, policy)
    subject = Subject("table", (table_id, scenario, owner))
    deltas = _split_parent_deltas(model, boundary, subject, strategy)
    return TransformResult(deltas=deltas.deltas, requests=tuple(requests), notes=deltas.notes)


def _split_strategy_for(scenario: str, policy: PolicyConfig) -> str:
    if scenario == "distinct_columns":
        return "split" if policy.shared_table_distinct_columns == "split" else "replicate"
    if scenario == "shared_write_columns":
        return "ownership" if policy.shared_table_shared_write == "ownership" else "replicate"
    return "service_call" if policy.reader_strategy == "service_call" else "replicate"


def split_requests(
    model: ArchModel,
    boundary: Boundary,
    table_id: str,
    scenario: str,
    strategy: str,
    owner: str,
    policy: PolicyConfig,
) -> list[DelegationRequest]:
    """Helper steps a shared-table resolution needs, all run before the
    owning step completes."""
    requests: list[DelegationRequest] = []
    if strategy == "split":
        for fk in model.foreign_keys:
            if table_id not in (fk.from_table_id, fk.to_table_id):
                continue
            requests.append(DelegationRequest(
                refactoring="MoveForeignKeyToCode",
                strategy="move_to_code",
                subject=Subject("fk", (fk.id,)),
                rationale=f"foreign key {fk.id} must move to code before {table_id} splits",
                before_parent=True,
                child_key=f"movefk:{fk.id}",
            ))
        return requests

    matrix = access_matrix(model, boundary, table_id)
    reader_services: list[str] = []
    for service, reads, writes in matrix.rows:
        if service == owner:
            continue
        if writes:
            # A writing service gives up the table wholesale: its reads go
            # through service calls too, replicas are write-free by contract.
            for edge in sorted(_foreign_access_edges(model, boundary, table_id, service), key=lambda e: e.id):
                requests.append(_table_access_request(table_id, edge.id, owner))
        elif reads:
            reader_services.append(service)

    if reader_services:
        if policy.reader_strategy == "replicate" or strategy == "replicate":
            requests.append(DelegationRequest(
                refactoring="ReplicateData",
                strategy=policy.replication_mechanism,
                subject=Subject("replicate",
                                (table_id, owner, policy.replication_mechanism) + tuple(sorted(reader_services))),
                rationale=f"readers of {table_id} move to local read-only snapshots",
                before_parent=True,
                child_key="replicate",
            ))
        else:
            for service in sorted(reader_services):
                for edge in sorted(_foreign_access_edges(model, boundary, table_id, service), key=lambda e: e.id):
                    if edge.writes:
                        continue
                    requests.append(_table_access_request(table_id, edge.id, owner))
    return requests


def _table_access_request(table_id: str, edge_id: str, owner: str) -> DelegationRequest:
    return DelegationRequest(
        refactoring="ReplaceMethodCallWithServiceCall",
        strategy="sync",
        subject=Subject("table_access", (edge_id, table_id, owner)),
        rationale=f"direct access {edge_id} to {table_id} becomes a service call to {owner}",
        before_parent=True,
        child_key=f"call:{edge_id}",
    )


def _foreign_access_edges(model: ArchModel, boundary: Boundary, table_id: str, service: str):
    for edge in model.edges.data_access:
        if edge.table_id == table_id and boundary.owner_of(model, edge.accessor_class_id) == service:
            yield edge


def _split_parent_deltas(model: ArchModel, boundary: Boundary, subject: Subject, strategy: str) -> TransformResult:
    table_id, _, owner = subject.ids
    emitter = _Emitter(model)
    table = model.table_by_id(table_id)
    if table is None:
        emitter.note(f"table {table_id} no longer present; skipped")
        return emitter.result()
    if strategy != "split":
        if table.owner_hint != owner:
            emitter.raw(set_table_owner_hint(table_id, owner))
        return emitter.result()

    matrix = access_matrix(model, boundary, table_id)
    if not matrix.rows:
        emitter.note(f"no accesses to {table_id} remain; split skipped")
        return emitter.result()

    key_columns = set(table.key_columns(model.fk_reference_columns(table_id)))
    accessed: set[str] = set()
    columns_by_service: dict[str, set[str]] = {}
    for service, reads, writes in matrix.rows:
        columns_by_service[service] = set(reads) | set(writes) | key_columns
        accessed |= set(reads) | set(writes)
    orphans = set(table.column_names()) - accessed - key_columns
    if orphans:
        home = boundary.owner_of(model, table_id) or sorted(columns_by_service)[0]
        columns_by_service.setdefault(home, set(key_columns)).update(orphans)
        emitter.note(f"columns untouched by any service stay with {home}: {', '.join(sorted(orphans))}")

    parts = [
        {
            "new_id": naming.split_table_id(table_id, service),
            "service": service,
            "name": f"{table.name}_{naming.kebab(service)}",
            "columns": [c.name for c in table.columns if c.name in columns_by_service[service]],
        }
        for service in sorted(columns_by_service)
    ]
    edge_services: dict[str, str] = {}
    for edge in model.edges.data_access:
        if edge.table_id == table_id:
            service = boundary.owner_of(model, edge.accessor_class_id)
            if service is not None:
                edge_services[edge.id] = service
    for cid, tid in model.orm_links:
        if tid == table_id:
            service = boundary.owner_of(model, cid)
            if service not in columns_by_service:
                service = boundary.owner_of(model, table_id)
            if service in columns_by_service:
                edge_services[f"orm:{cid}"] = service
    emitter.raw(ModelDelta("split_table", {
        "table_id": table_id,
        "parts": parts,
        "edge_services": edge_services,
    }))
    emitter.note("key columns are copied into every part; shared read columns "
                 "are duplicated and noted for replication follow-up")
    return emitter.result()


# --- Create Data Transfer Object --------------------------------------------------

def create_dto(model: ArchModel, boundary: Boundary, subject: str | Subject) -> TransformResult:
    """Expose a type across the boundary through a DTO instead of the domain
    model.

    The DTO carries the scalar attributes (an ``id`` attribute is qualified
    with the type's name) plus one name-list field per referenced domain
    type; crossing parameter and return uses are retargeted at it.
    """
    resolved = _resolve_dto_subject(model, boundary, subject)
    if resolved is None:
        raise NotCrossBoundaryError("subject exposes no type across a service boundary")
    return _dto_deltas(model, boundary, resolved)


def _resolve_dto_subject(model: ArchModel, boundary: Boundary, subject: str | Subject) -> Subject | None:
    if isinstance(subject, Subject):
        return subject
    method = model.method_by_id(subject)
    class_id = None
    if method is not None:
        class_id = method.return_type_id
    elif model.class_by_id(subject) is not None:
        class_id = subject
    if class_id is None or model.class_by_id(class_id) is None:
        return None
    owner = boundary.owner_of(model, class_id)
    edges = tuple(sorted(
        e.id for e in model.edges.type_uses
        if e.used_class_id == class_id and e.kind in ("parameter", "return")
        and boundary.owner_of(model, e.user_class_id) not in (None, owner)
    ))
    if not edges:
        return None
    return Subject("dto", (class_id,) + edges)


def _dto_fields(model: ArchModel, cls: CodeClass) -> list[str]:
    fields_out: list[str] = []
    for attr in cls.scalar_attributes:
        name = naming.dto_field_for_id(cls.name) if attr == "id" else naming.camel(attr)
        if name not in fields_out:
            fields_out.append(name)
    for type_id in cls.attribute_types:
        ref = model.class_by_id(type_id) or model.generated_by_id(type_id)
        if ref is not None:
            name = naming.dto_field_for_reference(ref.name)
            if name not in fields_out:
                fields_out.append(name)
    return fields_out


def _dto_deltas(model: ArchModel, boundary: Boundary, subject: Subject) -> TransformResult:
    class_id = subject.ids[0]
    edge_ids = subject.ids[1:]
    emitter = _Emitter(model)
    cls = model.class_by_id(class_id)
    if cls is None:
        emitter.note(f"type {class_id} no longer present; DTO skipped")
        return emitter.result()
    owner = boundary.owner_of(model, class_id)

    fields_out = _dto_fields(model, cls)
    dto = GeneratedEntity(
        id=naming.dto_id(class_id),
        kind="dto", name=f"{cls.name}DTO", owner_service=owner or "",
        payload={"fields": fields_out, "source_class_id": class_id},
    )
    emitter.ensure_generated(dto)
    if not fields_out:
        emitter.note(f"type {class_id} has no scalar attributes; DTO field list is empty")

    for edge_id in edge_ids:
        edge = next((e for e in model.edges.type_uses if e.id == edge_id), None)
        if edge is None or edge.used_class_id != class_id:
            continue
        if edge.kind not in ("parameter", "return"):
            continue
        emitter.retag(edge.id, used_class_id=dto.id)
    return emitter.result()


# --- Break Data Type Dependency ----------------------------------------------------

def break_type_dep(
    model: ArchModel,
    boundary: Boundary,
    type_use_group: Subject | tuple[str, str],
    strategy: str,
) -> TransformResult:
    """Decouple a service from a foreign data type.

    ``central`` keeps the type with its owner behind an interface, a DTO and
    service calls; ``replicate`` copies the type into the consumer and keeps
    it synchronized; ``proxy`` fronts the owner with a local proxy service.
    """
    if strategy not in LEGAL_STRATEGIES["BreakDataTypeDependency"]:
        raise IllegalStrategyError(f"unknown strategy {strategy!r}")
    subject = _resolve_type_group(model, boundary, type_use_group)
    used_service = boundary.owner_of(model, subject.ids[0])
    if used_service == subject.ids[1]:
        raise NotCrossBoundaryError(
            f"type {subject.ids[0]!r} and its users are both in {used_service!r}")
    requests = type_dep_requests(model, boundary, subject, strategy, PolicyConfig())
    deltas = _break_type_deltas(model, boundary, subject, strategy)
    return TransformResult(deltas=deltas.deltas, requests=tuple(requests), notes=deltas.notes)


def _resolve_type_group(model: ArchModel, boundary: Boundary, group: Subject | tuple[str, str]) -> Subject:
    if isinstance(group, Subject):
        return group
    used_class_id, user_service = group
    edges = tuple(sorted(
        e.id for e in model.edges.type_uses
        if e.used_class_id == used_class_id
        and boundary.owner_of(model, e.user_class_id) == user_service
    ))
    return Subject("type_group", (used_class_id, user_service) + edges)


def type_dep_requests(
    model: ArchModel,
    boundary: Boundary,
    subject: Subject,
    strategy: str,
    policy: PolicyConfig,
    table_owners: Mapping[str, str] | None = None,
) -> list[DelegationRequest]:
    used_class_id, user_service = subject.ids[0], subject.ids[1]
    edge_ids = subject.ids[2:]
    requests: list[DelegationRequest] = []
    if strategy == "central":
        requests.append(DelegationRequest(
            refactoring="CreateDTO",
            strategy="dto",
            subject=Subject("dto", (used_class_id,) + edge_ids),
            rationale=f"data of {used_class_id} travels as a DTO",
            before_parent=True,
            child_key="dto",
        ))
        invocation_edges = tuple(sorted(
            e.id for e in model.edges.type_uses
            if e.id in edge_ids and e.kind == "invocation"
        ))
        if invocation_edges:
            requests.append(DelegationRequest(
                refactoring="ReplaceMethodCallWithServiceCall",
                strategy="sync",
                subject=Subject("type_invocations", (used_class_id, user_service) + invocation_edges),
                rationale=f"operations on {used_class_id} become service calls to its owner",
                before_parent=True,
                child_key="calls",
                follows_keys=("dto",),
            ))
    elif strategy == "replicate":
        table = model.orm_table_of_class(used_class_id)
        if table is not None:
            owner = (table_owners or {}).get(table.id) or boundary.owner_of(model, table.id)
            if owner is not None and owner != user_service:
                requests.append(DelegationRequest(
                    refactoring="ReplicateData",
                    strategy=policy.replication_mechanism,
                    subject=Subject("replicate", (table.id, owner, policy.replication_mechanism, user_service)),
                    rationale=f"replicated type {used_class_id} stays in sync via its backing table",
                    before_parent=True,
                    child_key="replicate",
                ))
    return requests


def _break_type_deltas(model: ArchModel, boundary: Boundary, subject: Subject, strategy: str) -> TransformResult:
    used_class_id, user_service = subject.ids[0], subject.ids[1]
    edge_ids = subject.ids[2:]
    emitter = _Emitter(model)
    used = model.class_by_id(used_class_id)
    if used is None:
        emitter.note(f"type {used_class_id} no longer present; skipped")
        return emitter.result()
    used_service = boundary.owner_of(model, used_class_id)

    if strategy == "central":
        emitter.ensure_generated(GeneratedEntity(
            id=naming.interface_id(used_class_id, user_service),
            kind="interface", name=f"{used.name}Interface", owner_service=user_service,
            payload={"source_class_id": used_class_id},
        ))
        return emitter.result()

    if strategy == "replicate":
        replica = GeneratedEntity(
            id=naming.type_replica_id(used_class_id, user_service),
            kind="type_replica", name=used.name, owner_service=user_service,
            payload={"source_class_id": used_class_id},
        )
        emitter.ensure_generated(replica)
        target = replica.id
    else:  # proxy
        endpoint = GeneratedEntity(
            id=naming.api_endpoint_id(f"{used_class_id}.get"),
            kind="api_endpoint", name=f"{used.name}Controller", owner_service=used_service,
            payload={"path": f"/api/{naming.kebab(used.name)}/{{id}}"},
        )
        proxy = GeneratedEntity(
            id=naming.proxy_service_id(used_class_id, user_service),
            kind="proxy_service", name=f"{used.name}Proxy", owner_service=user_service,
            payload={"delegates_to": used_class_id},
        )
        emitter.ensure_generated(endpoint)
        emitter.ensure_generated(proxy)
        emitter.ensure_service_edge(ServiceCallEdge(
            id=naming.service_call_edge_id(proxy.id, endpoint.id),
            caller_entity_id=proxy.id, provider_entity_id=used_class_id,
            mode="sync", via=endpoint.id,
        ))
        target = proxy.id

    for edge_id in edge_ids:
        edge = next((e for e in model.edges.type_uses if e.id == edge_id), None)
        if edge is None or edge.used_class_id != used_class_id:
            continue
        emitter.retag(edge.id, used_class_id=target)
    return emitter.result()


# --- Shared Code Isolation ----------------------------------------------------------

def isolate_shared_code(model: ArchModel, boundary: Boundary, artifact_id: str, scenario: str) -> TransformResult:
    """Resolve a shared code artifact per its nature.

    Stable utility code is duplicated into every using service; volatile
    utility code becomes a versioned library; business logic moves into a
    dedicated service behind an API.
    """
    artifact = model.artifact_by_id(artifact_id)
    if artifact is None:
        raise UnknownEdgeError(artifact_id)
    users = _artifact_user_services(model, boundary, artifact_id)
    if len(users) < 2:
        raise NotCrossBoundaryError(f"artifact {artifact_id!r} is not shared across services")
    expected = artifact_scenario(artifact)
    if scenario != expected:
        raise ScenarioMismatchError(
            f"artifact {artifact_id!r} calls for scenario {expected!r}, got {scenario!r}")
    requests = isolation_requests(model, boundary, artifact_id, scenario)
    deltas = _isolate_deltas(model, boundary, Subject("artifact", (artifact_id,)), scenario)
    return TransformResult(deltas=deltas.deltas, requests=tuple(requests), notes=deltas.notes)


def artifact_scenario(artifact) -> str:
    if artifact.has_business_logic:
        return "service"
    return "duplicate" if artifact.stability == "stable" else "library"


def _artifact_user_services(model: ArchModel, boundary: Boundary, artifact_id: str) -> tuple[str, ...]:
    services = {
        boundary.owner_of(model, e.user_class_id)
        for e in model.edges.artifact_uses
        if e.artifact_id == artifact_id
    }
    return tuple(sorted(s for s in services if s is not None))


def isolation_requests(model: ArchModel, boundary: Boundary, artifact_id: str, scenario: str) -> list[DelegationRequest]:
    if scenario != "service":
        return []
    return [
        DelegationRequest(
            refactoring="ReplaceMethodCallWithServiceCall",
            strategy="sync",
            subject=Subject("artifact_call", (artifact_id, service)),
            rationale=f"{service} consumes the extracted logic through its API",
            before_parent=False,
            child_key=f"call:{service}",
        )
        for service in _artifact_user_services(model, boundary, artifact_id)
    ]


def _isolate_deltas(model: ArchModel, boundary: Boundary, subject: Subject, scenario: str) -> TransformResult:
    artifact_id = subject.ids[0]
    emitter = _Emitter(model)
    artifact = model.artifact_by_id(artifact_id)
    if artifact is None:
        emitter.note(f"artifact {artifact_id} no longer present; skipped")
        return emitter.result()

    if scenario == "duplicate":
        for service in _artifact_user_services(model, boundary, artifact_id):
            copy_id = naming.artifact_copy_id(artifact_id, service)
            if not emitter.has(copy_id):
                emitter.raw(duplicate_artifact(artifact_id, service, copy_id))
            for edge in model.edges.artifact_uses:
                if edge.artifact_id == artifact_id and boundary.owner_of(model, edge.user_class_id) == service:
                    emitter.retag(edge.id, artifact_id=copy_id)
        emitter.raw(remove_entity(artifact_id))
        return emitter.result()

    if scenario == "library":
        owner = boundary.owner_of(model, artifact_id) or _artifact_user_services(model, boundary, artifact_id)[0]
        library = GeneratedEntity(
            id=naming.library_id(artifact_id),
            kind="library", name=artifact.name, owner_service=owner,
            payload={"version": "1.0.0", "source_artifact_id": artifact_id},
        )
        emitter.ensure_generated(library)
        for edge in model.edges.artifact_uses:
            if edge.artifact_id == artifact_id:
                emitter.retag(edge.id, artifact_id=library.id)
        return emitter.result()

    # service
    service_name = f"{artifact.name}Service"
    emitter.ensure_generated(GeneratedEntity(
        id=naming.new_service_id(artifact_id),
        kind="new_service", name=service_name, owner_service=service_name,
        payload={"source_artifact_id": artifact_id},
    ))
    emitter.ensure_generated(GeneratedEntity(
        id=naming.api_endpoint_id(artifact_id),
        kind="api_endpoint", name=f"{artifact.name}Controller", owner_service=service_name,
        payload={"path": "/" + naming.kebab(artifact.name)},
    ))
    return emitter.result()


# --- planner-facing dispatch ----------------------------------------------------------

def compute_deltas(
    model: ArchModel,
    boundary: Boundary,
    refactoring: str,
    strategy: str,
    subject: Subject,
) -> TransformResult:
    """Deltas for one planned step against the model state it executes in."""
    if refactoring == "ReplaceMethodCallWithServiceCall":
        if subject.kind == "call_edge":
            return _replace_call_deltas(model, boundary, subject.ids[0], strategy)
        if subject.kind == "fk_retrieve":
            return _fk_retrieve_deltas(model, boundary, subject)
        if subject.kind == "table_access":
            return _table_access_deltas(model, boundary, subject)
        if subject.kind == "type_invocations":
            return _type_invocation_deltas(model, boundary, subject)
        if subject.kind == "artifact_call":
            return _artifact_call_deltas(model, boundary, subject)
    elif refactoring == "MoveForeignKeyToCode":
        return _move_fk_deltas(model, boundary, subject)
    elif refactoring == "ReplicateData":
        return _replicate_deltas(model, boundary, subject)
    elif refactoring == "SplitDatabase":
        return _split_parent_deltas(model, boundary, subject, strategy)
    elif refactoring == "CreateDTO":
        return _dto_deltas(model, boundary, subject)
    elif refactoring == "BreakDataTypeDependency":
        return _break_type_deltas(model, boundary, subject, strategy)
    elif refactoring == "SharedCodeIsolation":
        return _isolate_deltas(model, boundary, subject, strategy)
    raise IllegalStrategyError(f"no transform for {refactoring} on subject kind {subject.kind!r}")


def child_requests(
    model: ArchModel,
    boundary: Boundary,
    refactoring: str,
    strategy: str,
    subject: Subject,
    policy: PolicyConfig,
) -> list[DelegationRequest]:
    """Delegations a step itself requires (used when a delegated step in turn
    delegates, e.g. a foreign-key move spawned by a table split)."""
    if refactoring == "MoveForeignKeyToCode" and subject.kind == "fk":
        fk = model.foreign_key_by_id(subject.ids[0])
        if fk is not None:
            return [_fk_retrieve_request(model, fk)]
    return []


# --- reachability ------------------------------------------------------------------

def capability_reachable(model: ArchModel, from_entity_id: str, to_entity_id: str) -> bool:
    """Can the caller still reach the provider-side capability, following
    direct edges, service calls, channels, and generated stand-ins?"""
    adjacency: dict[str, set[str]] = {}

    def link(a: str, b: str) -> None:
        adjacency.setdefault(a, set()).add(b)

    for edge in model.edges.calls:
        caller = model.method_by_id(edge.caller_method_id)
        callee = model.method_by_id(edge.callee_method_id)
        if caller and callee:
            link(caller.owner_class_id, callee.owner_class_id)
    for edge in model.edges.data_access:
        link(edge.accessor_class_id, edge.table_id)
    for edge in model.edges.artifact_uses:
        link(edge.user_class_id, edge.artifact_id)
    for edge in model.edges.type_uses:
        link(edge.user_class_id, edge.used_class_id)
    for edge in model.edges.service_calls:
        if edge.mode == "sync":
            link(edge.caller_entity_id, edge.provider_entity_id)
        elif edge.mode == "async_publish":
            link(edge.caller_entity_id, edge.via)
        else:
            link(edge.via, edge.caller_entity_id)
    for gen in model.generated:
        payload = gen.payload_map()
        for key in ("source_table_id", "source_class_id", "source_artifact_id", "delegates_to"):
            if key in payload:
                link(gen.id, payload[key])

    seen = {from_entity_id}
    stack = [from_entity_id]
    while stack:
        node = stack.pop()
        if node == to_entity_id:
            return True
        for neighbor in adjacency.get(node, ()):
            if neighbor not in seen:
                seen.add(neighbor)
                stack.append(neighbor)
    return from_entity_id == to_entity_id
