"""Atomic, replayable model edits.

Transforms never mutate a model directly: they emit ``ModelDelta`` values and
the model is rebuilt by replaying them. A delta either applies cleanly or
raises; ``apply_deltas`` is atomic over a whole sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    DeltaSequenceError,
    DuplicateIdError,
    IllegalDeltaError,
    MissingTargetError,
)
from .model import (
    WILDCARD,
    ArchModel,
    ArtifactUseEdge,
    CallEdge,
    CodeClass,
    Column,
    DataAccessEdge,
    EdgeSet,
    ForeignKey,
    GeneratedEntity,
    MethodDecl,
    ServiceCallEdge,
    SharedArtifact,
    Table,
    TypeUseEdge,
    validate_model,
)

DELTA_OPS = frozenset({
    "add_entity",
    "remove_entity",
    "add_edge",
    "remove_edge",
    "remove_foreign_key",
    "add_attribute",
    "split_table",
    "set_table_owner_hint",
    "mark_read_only",
    "duplicate_artifact",
    "retag_edge",
})

_ENTITY_CODECS = {
    "class": CodeClass,
    "method": MethodDecl,
    "table": Table,
    "foreign_key": ForeignKey,
    "artifact": SharedArtifact,
    "generated": GeneratedEntity,
}

_EDGE_CODECS = {
    "calls": CallEdge,
    "data_access": DataAccessEdge,
    "type_uses": TypeUseEdge,
    "artifact_uses": ArtifactUseEdge,
    "service_calls": ServiceCallEdge,
}

# Fields retag_edge may rewrite, per edge collection.
_RETAGGABLE = {
    "calls": {"needs_immediate_response", "needs_strong_consistency"},
    "data_access": {"table_id", "columns", "mode"},
    "type_uses": {"used_class_id", "kind"},
    "artifact_uses": {"artifact_id"},
}


@dataclass(frozen=True)
class ModelDelta:
    op: str
    args: dict[str, Any] = field(default_factory=dict)

    def to_obj(self) -> dict[str, Any]:
        return {"op": self.op, "args": self.args}

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str = "delta") -> "ModelDelta":
        if not isinstance(data, Mapping) or set(data) != {"op", "args"}:
            raise IllegalDeltaError(f"{path}: delta must be an object with 'op' and 'args'")
        op = data["op"]
        if op not in DELTA_OPS:
            raise IllegalDeltaError(f"{path}: unknown delta op {op!r}")
        args = data["args"]
        if not isinstance(args, Mapping):
            raise IllegalDeltaError(f"{path}: args must be an object")
        return cls(op=op, args=dict(args))


def add_entity(entity_kind: str, value: Any) -> ModelDelta:
    obj = value.to_obj() if hasattr(value, "to_obj") else value
    return ModelDelta("add_entity", {"entity_kind": entity_kind, "value": obj})


def remove_entity(entity_id: str) -> ModelDelta:
    return ModelDelta("remove_entity", {"id": entity_id})


def add_edge(edge_kind: str, value: Any) -> ModelDelta:
    obj = value.to_obj() if hasattr(value, "to_obj") else value
    return ModelDelta("add_edge", {"edge_kind": edge_kind, "value": obj})


def remove_edge(edge_id: str) -> ModelDelta:
    return ModelDelta("remove_edge", {"id": edge_id})


def remove_foreign_key(fk_id: str) -> ModelDelta:
    return ModelDelta("remove_foreign_key", {"id": fk_id})


def add_attribute(class_id: str, attribute: str) -> ModelDelta:
    return ModelDelta("add_attribute", {"class_id": class_id, "attribute": attribute})


def split_table(table_id: str, parts: Sequence[dict[str, Any]]) -> ModelDelta:
    return ModelDelta("split_table", {"table_id": table_id, "parts": list(parts)})


def set_table_owner_hint(table_id: str, service: str) -> ModelDelta:
    return ModelDelta("set_table_owner_hint", {"table_id": table_id, "service": service})


def mark_read_only(table_id: str, read_only: bool = True) -> ModelDelta:
    return ModelDelta("mark_read_only", {"table_id": table_id, "read_only": read_only})


def duplicate_artifact(artifact_id: str, service: str, new_id: str) -> ModelDelta:
    return ModelDelta("duplicate_artifact", {"artifact_id": artifact_id, "service": service, "new_id": new_id})


def retag_edge(edge_id: str, changes: Mapping[str, Any]) -> ModelDelta:
    return ModelDelta("retag_edge", {"edge_id": edge_id, "changes": dict(changes)})


def apply_delta(model: ArchModel, delta: ModelDelta) -> ArchModel:
    """Apply one delta, returning a new model; the input is never mutated."""
    handler = _HANDLERS.get(delta.op)
    if handler is None:
        raise IllegalDeltaError(f"unknown delta op {delta.op!r}")
    result = handler(model, delta.args)
    violations = validate_model(result)
    if violations:
        first = violations[0]
        raise IllegalDeltaError(
            f"delta {delta.op!r} left the model invalid: "
            f"[{first.rule}] {first.entity_id}: {first.message}"
        )
    return result


def apply_deltas(model: ArchModel, deltas: Iterable[ModelDelta]) -> ArchModel:
    """Left-fold of ``apply_delta``; atomic.

    On failure the caller's model is unchanged (models are values) and the
    raised ``DeltaSequenceError`` carries the failing position.
    """
    current = model
    for index, delta in enumerate(deltas):
        try:
            current = apply_delta(current, delta)
        except DeltaSequenceError:
            raise
        except Exception as exc:  # noqa: BLE001 - annotate any delta failure with its position
            raise DeltaSequenceError(index, exc) from exc
    return current


# --- handlers -----------------------------------------------------------------

def _require(args: Mapping[str, Any], key: str) -> Any:
    if key not in args:
        raise IllegalDeltaError(f"delta args missing {key!r}")
    return args[key]


def _apply_add_entity(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    kind = _require(args, "entity_kind")
    codec = _ENTITY_CODECS.get(kind)
    if codec is None:
        raise IllegalDeltaError(f"unknown entity kind {kind!r}")
    entity = codec.from_obj(_require(args, "value"), f"add_entity.{kind}")
    if entity.id in model.entity_ids():
        raise DuplicateIdError(entity.id)
    attr = {
        "class": "classes", "method": "methods", "table": "tables",
        "foreign_key": "foreign_keys", "artifact": "artifacts", "generated": "generated",
    }[kind]
    return model.replace(**{attr: getattr(model, attr) + (entity,)})


def _apply_remove_entity(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    entity_id = _require(args, "id")
    kind = model.entity_ids().get(entity_id)
    if kind is None:
        raise MissingTargetError(entity_id)
    attr = {
        "class": "classes", "method": "methods", "table": "tables",
        "foreign_key": "foreign_keys", "artifact": "artifacts", "generated": "generated",
    }[kind]
    remaining = tuple(e for e in getattr(model, attr) if e.id != entity_id)
    updated = model.replace(**{attr: remaining})
    # orm links involving the entity go with it; lingering edges are a bug the
    # post-apply validation will surface.
    links = tuple(link for link in updated.orm_links if entity_id not in link)
    return updated.replace(orm_links=links)


def _apply_add_edge(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    kind = _require(args, "edge_kind")
    codec = _EDGE_CODECS.get(kind)
    if codec is None:
        raise IllegalDeltaError(f"unknown edge kind {kind!r}")
    edge = codec.from_obj(_require(args, "value"), f"add_edge.{kind}")
    existing = {e.id for e in model.edges.all_edges()} | set(model.entity_ids())
    if edge.id in existing:
        raise DuplicateIdError(edge.id)
    return model.replace(edges=model.edges.replace(**{kind: getattr(model.edges, kind) + (edge,)}))


def _apply_remove_edge(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    edge_id = _require(args, "id")
    for kind in _EDGE_CODECS:
        edges = getattr(model.edges, kind)
        remaining = tuple(e for e in edges if e.id != edge_id)
        if len(remaining) != len(edges):
            return model.replace(edges=model.edges.replace(**{kind: remaining}))
    raise MissingTargetError(edge_id)


def _apply_remove_foreign_key(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    fk_id = _require(args, "id")
    if model.foreign_key_by_id(fk_id) is None:
        if fk_id in model.entity_ids():
            raise IllegalDeltaError(f"{fk_id!r} is not a foreign key")
        raise MissingTargetError(fk_id)
    return model.replace(foreign_keys=tuple(f for f in model.foreign_keys if f.id != fk_id))


def _apply_add_attribute(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    class_id = _require(args, "class_id")
    attribute = _require(args, "attribute")
    cls = model.class_by_id(class_id)
    if cls is None:
        raise MissingTargetError(class_id)
    if attribute in cls.scalar_attributes:
        raise IllegalDeltaError(f"class {class_id!r} already has attribute {attribute!r}")
    updated = CodeClass(
        id=cls.id, name=cls.name,
        attribute_types=cls.attribute_types,
        scalar_attributes=cls.scalar_attributes + (attribute,),
        tags=cls.tags,
    )
    return model.replace(classes=tuple(updated if c.id == class_id else c for c in model.classes))


def _apply_set_owner_hint(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    table_id = _require(args, "table_id")
    service = _require(args, "service")
    table = model.table_by_id(table_id)
    if table is None:
        raise MissingTargetError(table_id)
    updated = Table(id=table.id, name=table.name, columns=table.columns,
                    read_only=table.read_only, owner_hint=service)
    return model.replace(tables=tuple(updated if t.id == table_id else t for t in model.tables))


def _apply_mark_read_only(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    table_id = _require(args, "table_id")
    read_only = bool(args.get("read_only", True))
    table = model.table_by_id(table_id)
    if table is None:
        raise MissingTargetError(table_id)
    updated = Table(id=table.id, name=table.name, columns=table.columns,
                    read_only=read_only, owner_hint=table.owner_hint)
    return model.replace(tables=tuple(updated if t.id == table_id else t for t in model.tables))


def _apply_duplicate_artifact(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    artifact_id = _require(args, "artifact_id")
    service = _require(args, "service")
    new_id = _require(args, "new_id")
    artifact = model.artifact_by_id(artifact_id)
    if artifact is None:
        raise MissingTargetError(artifact_id)
    if new_id in model.entity_ids():
        raise DuplicateIdError(new_id)
    copy = GeneratedEntity(
        id=new_id, kind="artifact_copy", name=artifact.name, owner_service=service,
        payload={"source_artifact_id": artifact_id},
    )
    return model.replace(generated=model.generated + (copy,))


def _apply_retag_edge(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    edge_id = _require(args, "edge_id")
    changes = _require(args, "changes")
    if not isinstance(changes, Mapping) or not changes:
        raise IllegalDeltaError("retag_edge requires a non-empty changes object")
    for kind, retaggable in _RETAGGABLE.items():
        edges = getattr(model.edges, kind)
        target = next((e for e in edges if e.id == edge_id), None)
        if target is None:
            continue
        illegal = sorted(set(changes) - retaggable)
        if illegal:
            raise IllegalDeltaError(f"fields not retaggable on {kind}: {', '.join(illegal)}")
        obj = target.to_obj()
        obj.update(changes)
        updated = _EDGE_CODECS[kind].from_obj(obj, "retag_edge")
        return model.replace(edges=model.edges.replace(
            **{kind: tuple(updated if e.id == edge_id else e for e in edges)}
        ))
    raise MissingTargetError(edge_id, "retaggable edge")


def _apply_split_table(model: ArchModel, args: Mapping[str, Any]) -> ArchModel:
    """Replace one table with per-service parts and rewire accesses and links.

    Parts: ``[{"new_id", "service", "columns"}, ...]``. No foreign key may
    still touch the table; the planner clears them first.
    """
    table_id = _require(args, "table_id")
    parts = _require(args, "parts")
    table = model.table_by_id(table_id)
    if table is None:
        raise MissingTargetError(table_id)
    for fk in model.foreign_keys:
        if table_id in (fk.from_table_id, fk.to_table_id):
            raise IllegalDeltaError(f"cannot split {table_id!r}: foreign key {fk.id!r} still touches it")
    if not parts:
        raise IllegalDeltaError("split_table requires at least one part")

    existing = model.entity_ids()
    by_service: dict[str, Table] = {}
    new_tables: list[Table] = []
    for part in parts:
        new_id, service = part["new_id"], part["service"]
        if new_id in existing:
            raise DuplicateIdError(new_id)
        columns = tuple(c for c in table.columns if c.name in set(part["columns"]))
        new_table = Table(id=new_id, name=part.get("name", f"{table.name}_{service}"),
                          columns=columns, read_only=table.read_only, owner_hint=service)
        by_service[service] = new_table
        new_tables.append(new_table)

    # Accessor edges move to the part owned by the accessor's service; the
    # caller guarantees each accessing service received a part.
    service_of_part = _require(args, "edge_services")
    rewired = []
    for edge in model.edges.data_access:
        if edge.table_id != table_id:
            rewired.append(edge)
            continue
        service = service_of_part.get(edge.id)
        part = by_service.get(service) if service is not None else None
        if part is None:
            raise IllegalDeltaError(f"no split part receives access edge {edge.id!r}")
        if edge.columns == (WILDCARD,):
            columns: tuple[str, ...] = (WILDCARD,)
        else:
            columns = tuple(c for c in edge.columns if c in part.column_names())
        rewired.append(DataAccessEdge(id=edge.id, accessor_class_id=edge.accessor_class_id,
                                      table_id=part.id, columns=columns, mode=edge.mode))

    links = []
    for cid, tid in model.orm_links:
        if tid != table_id:
            links.append((cid, tid))
            continue
        link_service = service_of_part.get(f"orm:{cid}")
        part = by_service.get(link_service) if link_service is not None else None
        if part is not None:
            links.append((cid, part.id))

    tables = tuple(t for t in model.tables if t.id != table_id) + tuple(new_tables)
    return model.replace(
        tables=tables,
        orm_links=tuple(links),
        edges=model.edges.replace(data_access=tuple(rewired)),
    )


_HANDLERS = {
    "add_entity": _apply_add_entity,
    "remove_entity": _apply_remove_entity,
    "add_edge": _apply_add_edge,
    "remove_edge": _apply_remove_edge,
    "remove_foreign_key": _apply_remove_foreign_key,
    "add_attribute": _apply_add_attribute,
    "split_table": _apply_split_table,
    "set_table_owner_hint": _apply_set_owner_hint,
    "mark_read_only": _apply_mark_read_only,
    "duplicate_artifact": _apply_duplicate_artifact,
    "retag_edge": _apply_retag_edge,
}
