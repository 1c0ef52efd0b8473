"""Architecture model: typed graph of a monolith's code and data entities.

Models are immutable values. Construction canonicalizes every collection
(sorted by id), so two structurally equal models compare equal and serialize
to identical bytes. All mutation goes through deltas (see ``deltas``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Iterable, Mapping

from .errors import SchemaError

WILDCARD = "*"

CLASS_TAGS = frozenset({"utility", "business_logic", "entity"})
CARDINALITIES = frozenset({"one_to_one", "many_to_one", "one_to_many"})
STABILITIES = frozenset({"stable", "volatile"})
ACCESS_MODES = frozenset({"read", "write", "read_write"})
TYPE_USE_KINDS = frozenset({"attribute", "parameter", "return", "invocation"})
SERVICE_CALL_MODES = frozenset({"sync", "async_publish", "async_subscribe"})

GENERATED_KINDS = frozenset({
    "interface",
    "request_client",
    "api_endpoint",
    "dto",
    "message_channel",
    "snapshot_table",
    "data_access_interface",
    "library",
    "proxy_service",
    "new_service",
    "artifact_copy",
    "type_replica",
})

# Payload keys each generated kind must carry.
MANDATORY_PAYLOAD_KEYS = {
    "api_endpoint": ("path",),
    "message_channel": ("topic",),
    "dto": ("fields",),
    "snapshot_table": ("source_table_id",),
    "library": ("version",),
    "artifact_copy": ("source_artifact_id",),
    "type_replica": ("source_class_id",),
}


def _sorted_by_id(items: Iterable[Any]) -> tuple[Any, ...]:
    return tuple(sorted(items, key=lambda item: item.id))


def _freeze(obj: Any, name: str, value: Any) -> None:
    object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class Column:
    name: str
    type: str

    def to_obj(self) -> list[str]:
        return [self.name, self.type]

    @classmethod
    def from_obj(cls, data: Any, path: str) -> "Column":
        if not (isinstance(data, (list, tuple)) and len(data) == 2):
            raise SchemaError(f"{path}: column must be a [name, type] pair")
        name, type_tag = data
        if not (isinstance(name, str) and isinstance(type_tag, str)):
            raise SchemaError(f"{path}: column name and type must be strings")
        return cls(name, type_tag)


@dataclass(frozen=True)
class CodeClass:
    id: str
    name: str
    attribute_types: tuple[str, ...] = ()
    scalar_attributes: tuple[str, ...] = ()
    tags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _freeze(self, "attribute_types", tuple(self.attribute_types))
        _freeze(self, "scalar_attributes", tuple(self.scalar_attributes))
        _freeze(self, "tags", tuple(sorted(set(self.tags))))

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "attribute_types": list(self.attribute_types),
            "scalar_attributes": list(self.scalar_attributes),
            "tags": list(self.tags),
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "CodeClass":
        obj = _expect_keys(data, path, {"id", "name"},
                           {"attribute_types", "scalar_attributes", "tags"})
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            name=_expect_str(obj["name"], f"{path}.name"),
            attribute_types=_expect_str_list(obj.get("attribute_types", []), f"{path}.attribute_types"),
            scalar_attributes=_expect_str_list(obj.get("scalar_attributes", []), f"{path}.scalar_attributes"),
            tags=_expect_str_list(obj.get("tags", []), f"{path}.tags"),
        )


@dataclass(frozen=True)
class MethodDecl:
    id: str
    owner_class_id: str
    name: str
    param_type_ids: tuple[str, ...] = ()
    return_type_id: str | None = None

    def __post_init__(self) -> None:
        _freeze(self, "param_type_ids", tuple(self.param_type_ids))

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "owner_class_id": self.owner_class_id,
            "name": self.name,
            "param_type_ids": list(self.param_type_ids),
            "return_type_id": self.return_type_id,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "MethodDecl":
        obj = _expect_keys(data, path, {"id", "owner_class_id", "name"},
                           {"param_type_ids", "return_type_id"})
        return_type = obj.get("return_type_id")
        if return_type is not None:
            return_type = _expect_str(return_type, f"{path}.return_type_id")
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            owner_class_id=_expect_str(obj["owner_class_id"], f"{path}.owner_class_id"),
            name=_expect_str(obj["name"], f"{path}.name"),
            param_type_ids=_expect_str_list(obj.get("param_type_ids", []), f"{path}.param_type_ids"),
            return_type_id=return_type,
        )


@dataclass(frozen=True)
class Table:
    id: str
    name: str
    columns: tuple[Column, ...] = ()
    read_only: bool = False
    owner_hint: str | None = None

    def __post_init__(self) -> None:
        cols = tuple(c if isinstance(c, Column) else Column(*c) for c in self.columns)
        _freeze(self, "columns", cols)

    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def key_columns(self, foreign_reference_columns: frozenset[str] = frozenset()) -> tuple[str, ...]:
        """Identity columns: ``id`` or ``*_id`` names that are not themselves
        references to other tables."""
        keys = [
            c.name for c in self.columns
            if (c.name == "id" or c.name.endswith("_id")) and c.name not in foreign_reference_columns
        ]
        return tuple(keys)

    def to_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {
            "id": self.id,
            "name": self.name,
            "columns": [c.to_obj() for c in self.columns],
            "read_only": self.read_only,
        }
        if self.owner_hint is not None:
            obj["owner_hint"] = self.owner_hint
        return obj

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "Table":
        obj = _expect_keys(data, path, {"id", "name", "columns"}, {"read_only", "owner_hint"})
        raw_columns = obj["columns"]
        if not isinstance(raw_columns, list):
            raise SchemaError(f"{path}.columns: expected a list")
        owner_hint = obj.get("owner_hint")
        if owner_hint is not None:
            owner_hint = _expect_str(owner_hint, f"{path}.owner_hint")
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            name=_expect_str(obj["name"], f"{path}.name"),
            columns=tuple(Column.from_obj(c, f"{path}.columns[{i}]") for i, c in enumerate(raw_columns)),
            read_only=_expect_bool(obj.get("read_only", False), f"{path}.read_only"),
            owner_hint=owner_hint,
        )


@dataclass(frozen=True)
class ForeignKey:
    id: str
    from_table_id: str
    from_columns: tuple[str, ...]
    to_table_id: str
    to_columns: tuple[str, ...]
    cardinality: str = "many_to_one"

    def __post_init__(self) -> None:
        _freeze(self, "from_columns", tuple(self.from_columns))
        _freeze(self, "to_columns", tuple(self.to_columns))

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "from_table_id": self.from_table_id,
            "from_columns": list(self.from_columns),
            "to_table_id": self.to_table_id,
            "to_columns": list(self.to_columns),
            "cardinality": self.cardinality,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "ForeignKey":
        obj = _expect_keys(
            data, path,
            {"id", "from_table_id", "from_columns", "to_table_id", "to_columns"},
            {"cardinality"},
        )
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            from_table_id=_expect_str(obj["from_table_id"], f"{path}.from_table_id"),
            from_columns=_expect_str_list(obj["from_columns"], f"{path}.from_columns"),
            to_table_id=_expect_str(obj["to_table_id"], f"{path}.to_table_id"),
            to_columns=_expect_str_list(obj["to_columns"], f"{path}.to_columns"),
            cardinality=_expect_str(obj.get("cardinality", "many_to_one"), f"{path}.cardinality"),
        )


@dataclass(frozen=True)
class SharedArtifact:
    id: str
    name: str
    has_business_logic: bool = False
    stability: str = "stable"

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "has_business_logic": self.has_business_logic,
            "stability": self.stability,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "SharedArtifact":
        obj = _expect_keys(data, path, {"id", "name"}, {"has_business_logic", "stability"})
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            name=_expect_str(obj["name"], f"{path}.name"),
            has_business_logic=_expect_bool(obj.get("has_business_logic", False), f"{path}.has_business_logic"),
            stability=_expect_str(obj.get("stability", "stable"), f"{path}.stability"),
        )


@dataclass(frozen=True)
class GeneratedEntity:
    id: str
    kind: str
    name: str
    owner_service: str
    payload: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self) -> None:
        if isinstance(self.payload, Mapping):
            items = self.payload.items()
        else:
            items = self.payload
        _freeze(self, "payload", tuple(sorted((str(k), _canonical_value(v)) for k, v in items)))

    def payload_map(self) -> dict[str, Any]:
        return {k: _thaw_value(v) for k, v in self.payload}

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "name": self.name,
            "owner_service": self.owner_service,
            "payload": {k: _thaw_value(v) for k, v in self.payload},
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "GeneratedEntity":
        obj = _expect_keys(data, path, {"id", "kind", "name", "owner_service"}, {"payload"})
        payload = obj.get("payload", {})
        if not isinstance(payload, Mapping):
            raise SchemaError(f"{path}.payload: expected an object")
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            kind=_expect_str(obj["kind"], f"{path}.kind"),
            name=_expect_str(obj["name"], f"{path}.name"),
            owner_service=_expect_str(obj["owner_service"], f"{path}.owner_service"),
            payload=tuple(payload.items()),
        )


def _canonical_value(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return tuple(_canonical_value(v) for v in value)
    if isinstance(value, Mapping):
        return tuple(sorted((str(k), _canonical_value(v)) for k, v in value.items()))
    return value


def _thaw_value(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_thaw_value(v) for v in value]
    return value


# --- edges -------------------------------------------------------------------

@dataclass(frozen=True)
class CallEdge:
    id: str
    caller_method_id: str
    callee_method_id: str
    needs_immediate_response: bool = False
    needs_strong_consistency: bool = False

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "caller_method_id": self.caller_method_id,
            "callee_method_id": self.callee_method_id,
            "needs_immediate_response": self.needs_immediate_response,
            "needs_strong_consistency": self.needs_strong_consistency,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "CallEdge":
        obj = _expect_keys(data, path, {"id", "caller_method_id", "callee_method_id"},
                           {"needs_immediate_response", "needs_strong_consistency"})
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            caller_method_id=_expect_str(obj["caller_method_id"], f"{path}.caller_method_id"),
            callee_method_id=_expect_str(obj["callee_method_id"], f"{path}.callee_method_id"),
            needs_immediate_response=_expect_bool(obj.get("needs_immediate_response", False), path),
            needs_strong_consistency=_expect_bool(obj.get("needs_strong_consistency", False), path),
        )


@dataclass(frozen=True)
class DataAccessEdge:
    id: str
    accessor_class_id: str
    table_id: str
    columns: tuple[str, ...] = (WILDCARD,)
    mode: str = "read"

    def __post_init__(self) -> None:
        _freeze(self, "columns", tuple(self.columns))

    @property
    def reads(self) -> bool:
        return self.mode in ("read", "read_write")

    @property
    def writes(self) -> bool:
        return self.mode in ("write", "read_write")

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "accessor_class_id": self.accessor_class_id,
            "table_id": self.table_id,
            "columns": list(self.columns),
            "mode": self.mode,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "DataAccessEdge":
        obj = _expect_keys(data, path, {"id", "accessor_class_id", "table_id"}, {"columns", "mode"})
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            accessor_class_id=_expect_str(obj["accessor_class_id"], f"{path}.accessor_class_id"),
            table_id=_expect_str(obj["table_id"], f"{path}.table_id"),
            columns=_expect_str_list(obj.get("columns", [WILDCARD]), f"{path}.columns"),
            mode=_expect_str(obj.get("mode", "read"), f"{path}.mode"),
        )


@dataclass(frozen=True)
class TypeUseEdge:
    id: str
    user_class_id: str
    used_class_id: str
    kind: str = "attribute"

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "user_class_id": self.user_class_id,
            "used_class_id": self.used_class_id,
            "kind": self.kind,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "TypeUseEdge":
        obj = _expect_keys(data, path, {"id", "user_class_id", "used_class_id", "kind"}, set())
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            user_class_id=_expect_str(obj["user_class_id"], f"{path}.user_class_id"),
            used_class_id=_expect_str(obj["used_class_id"], f"{path}.used_class_id"),
            kind=_expect_str(obj["kind"], f"{path}.kind"),
        )


@dataclass(frozen=True)
class ArtifactUseEdge:
    id: str
    user_class_id: str
    artifact_id: str

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "user_class_id": self.user_class_id,
            "artifact_id": self.artifact_id,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "ArtifactUseEdge":
        obj = _expect_keys(data, path, {"id", "user_class_id", "artifact_id"}, set())
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            user_class_id=_expect_str(obj["user_class_id"], f"{path}.user_class_id"),
            artifact_id=_expect_str(obj["artifact_id"], f"{path}.artifact_id"),
        )


@dataclass(frozen=True)
class ServiceCallEdge:
    id: str
    caller_entity_id: str
    provider_entity_id: str
    mode: str
    via: str

    def to_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "caller_entity_id": self.caller_entity_id,
            "provider_entity_id": self.provider_entity_id,
            "mode": self.mode,
            "via": self.via,
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "ServiceCallEdge":
        obj = _expect_keys(data, path, {"id", "caller_entity_id", "provider_entity_id", "mode", "via"}, set())
        return cls(
            id=_expect_str(obj["id"], f"{path}.id"),
            caller_entity_id=_expect_str(obj["caller_entity_id"], f"{path}.caller_entity_id"),
            provider_entity_id=_expect_str(obj["provider_entity_id"], f"{path}.provider_entity_id"),
            mode=_expect_str(obj["mode"], f"{path}.mode"),
            via=_expect_str(obj["via"], f"{path}.via"),
        )


Edge = CallEdge | DataAccessEdge | TypeUseEdge | ArtifactUseEdge | ServiceCallEdge


@dataclass(frozen=True)
class EdgeSet:
    calls: tuple[CallEdge, ...] = ()
    data_access: tuple[DataAccessEdge, ...] = ()
    type_uses: tuple[TypeUseEdge, ...] = ()
    artifact_uses: tuple[ArtifactUseEdge, ...] = ()
    service_calls: tuple[ServiceCallEdge, ...] = ()

    def __post_init__(self) -> None:
        for name in ("calls", "data_access", "type_uses", "artifact_uses", "service_calls"):
            _freeze(self, name, _sorted_by_id(getattr(self, name)))

    def all_edges(self) -> tuple[Edge, ...]:
        return self.calls + self.data_access + self.type_uses + self.artifact_uses + self.service_calls

    def replace(self, **kwargs: tuple) -> "EdgeSet":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(kwargs)
        return EdgeSet(**values)


@dataclass(frozen=True)
class ArchModel:
    classes: tuple[CodeClass, ...] = ()
    methods: tuple[MethodDecl, ...] = ()
    tables: tuple[Table, ...] = ()
    foreign_keys: tuple[ForeignKey, ...] = ()
    artifacts: tuple[SharedArtifact, ...] = ()
    generated: tuple[GeneratedEntity, ...] = ()
    edges: EdgeSet = field(default_factory=EdgeSet)
    orm_links: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        for name in ("classes", "methods", "tables", "foreign_keys", "artifacts", "generated"):
            _freeze(self, name, _sorted_by_id(getattr(self, name)))
        _freeze(self, "orm_links", tuple(sorted(tuple(link) for link in self.orm_links)))

    # -- lookups (models are small; linear scans are deliberate) --------------

    def class_by_id(self, class_id: str) -> CodeClass | None:
        return next((c for c in self.classes if c.id == class_id), None)

    def method_by_id(self, method_id: str) -> MethodDecl | None:
        return next((m for m in self.methods if m.id == method_id), None)

    def table_by_id(self, table_id: str) -> Table | None:
        return next((t for t in self.tables if t.id == table_id), None)

    def foreign_key_by_id(self, fk_id: str) -> ForeignKey | None:
        return next((f for f in self.foreign_keys if f.id == fk_id), None)

    def artifact_by_id(self, artifact_id: str) -> SharedArtifact | None:
        return next((a for a in self.artifacts if a.id == artifact_id), None)

    def generated_by_id(self, gen_id: str) -> GeneratedEntity | None:
        return next((g for g in self.generated if g.id == gen_id), None)

    def edge_by_id(self, edge_id: str) -> Edge | None:
        return next((e for e in self.edges.all_edges() if e.id == edge_id), None)

    def entity_ids(self) -> dict[str, str]:
        """Every entity id mapped to its entity category."""
        ids: dict[str, str] = {}
        for group, kind in (
            (self.classes, "class"),
            (self.methods, "method"),
            (self.tables, "table"),
            (self.foreign_keys, "foreign_key"),
            (self.artifacts, "artifact"),
            (self.generated, "generated"),
        ):
            for entity in group:
                ids[entity.id] = kind
        return ids

    def orm_classes_of_table(self, table_id: str) -> tuple[CodeClass, ...]:
        linked = [cid for cid, tid in self.orm_links if tid == table_id]
        return tuple(c for c in self.classes if c.id in linked)

    def orm_table_of_class(self, class_id: str) -> Table | None:
        for cid, tid in self.orm_links:
            if cid == class_id:
                return self.table_by_id(tid)
        return None

    def fk_reference_columns(self, table_id: str) -> frozenset[str]:
        """Columns of ``table_id`` that reference other tables."""
        cols: set[str] = set()
        for fk in self.foreign_keys:
            if fk.from_table_id == table_id:
                cols.update(fk.from_columns)
        return frozenset(cols)

    def replace(self, **kwargs: Any) -> "ArchModel":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(kwargs)
        return ArchModel(**values)

    def to_obj(self) -> dict[str, Any]:
        return {
            "format": 1,
            "entities": {
                "classes": [c.to_obj() for c in self.classes],
                "methods": [m.to_obj() for m in self.methods],
                "tables": [t.to_obj() for t in self.tables],
                "foreign_keys": [f.to_obj() for f in self.foreign_keys],
                "artifacts": [a.to_obj() for a in self.artifacts],
            },
            "edges": {
                "calls": [e.to_obj() for e in self.edges.calls],
                "data_access": [e.to_obj() for e in self.edges.data_access],
                "type_uses": [e.to_obj() for e in self.edges.type_uses],
                "artifact_uses": [e.to_obj() for e in self.edges.artifact_uses],
                "service_calls": [e.to_obj() for e in self.edges.service_calls],
            },
            "orm_links": [list(link) for link in self.orm_links],
            "generated": [g.to_obj() for g in self.generated],
        }


# --- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    entity_id: str
    message: str


def validate_model(model: ArchModel) -> list[Violation]:
    """Structural validation; an empty report means the model is valid."""
    out: list[Violation] = []
    ids = _collect_ids(model, out)

    classes = {c.id for c in model.classes}
    methods = {m.id: m for m in model.methods}
    tables = {t.id: t for t in model.tables}
    artifacts = {a.id for a in model.artifacts}
    generated = {g.id: g for g in model.generated}
    type_targets = classes | set(generated)

    for cls in model.classes:
        if not cls.name:
            out.append(Violation("class-name", cls.id, "class name must be non-empty"))
        for tag in cls.tags:
            if tag not in CLASS_TAGS:
                out.append(Violation("enum-value", cls.id, f"unknown class tag {tag!r}"))
        for type_id in cls.attribute_types:
            if type_id not in type_targets:
                out.append(Violation("class-attr-type", cls.id,
                                     f"attribute type {type_id!r} is not a class or generated entity"))

    for method in model.methods:
        if method.owner_class_id not in classes:
            out.append(Violation("method-owner", method.id,
                                 f"owner class {method.owner_class_id!r} does not exist"))
        for type_id in method.param_type_ids:
            if type_id not in type_targets:
                out.append(Violation("method-type", method.id, f"parameter type {type_id!r} does not exist"))
        if method.return_type_id is not None and method.return_type_id not in type_targets:
            out.append(Violation("method-type", method.id,
                                 f"return type {method.return_type_id!r} does not exist"))

    for table in model.tables:
        names = table.column_names()
        if len(set(names)) != len(names):
            out.append(Violation("table-columns", table.id, "duplicate column names"))

    for fk in model.foreign_keys:
        if not fk.from_columns or len(fk.from_columns) != len(fk.to_columns):
            out.append(Violation("fk-shape", fk.id, "column lists must be non-empty and equal length"))
        if fk.cardinality not in CARDINALITIES:
            out.append(Violation("enum-value", fk.id, f"unknown cardinality {fk.cardinality!r}"))
        for table_id, cols in ((fk.from_table_id, fk.from_columns), (fk.to_table_id, fk.to_columns)):
            table = tables.get(table_id)
            if table is None:
                out.append(Violation("fk-table", fk.id, f"table {table_id!r} does not exist"))
                continue
            for col in cols:
                if col not in table.column_names():
                    out.append(Violation("fk-columns", fk.id,
                                         f"column {col!r} does not exist in table {table_id!r}"))

    for artifact in model.artifacts:
        if not artifact.name:
            out.append(Violation("artifact-name", artifact.id, "artifact name must be non-empty"))
        if artifact.stability not in STABILITIES:
            out.append(Violation("enum-value", artifact.id, f"unknown stability {artifact.stability!r}"))

    for gen in model.generated:
        if gen.kind not in GENERATED_KINDS:
            out.append(Violation("generated-kind", gen.id, f"unknown generated kind {gen.kind!r}"))
            continue
        payload = gen.payload_map()
        for key in MANDATORY_PAYLOAD_KEYS.get(gen.kind, ()):
            if key not in payload:
                out.append(Violation("generated-payload", gen.id,
                                     f"kind {gen.kind!r} requires payload key {key!r}"))
        if not gen.owner_service:
            out.append(Violation("generated-owner", gen.id, "owner_service must be non-empty"))

    for cid, tid in model.orm_links:
        if cid not in classes:
            out.append(Violation("orm-link", cid, f"orm link names missing class {cid!r}"))
        if tid not in tables:
            out.append(Violation("orm-link", tid, f"orm link names missing table {tid!r}"))

    _validate_edges(model, classes, methods, tables, artifacts, generated, out)
    return out


def _collect_ids(model: ArchModel, out: list[Violation]) -> set[str]:
    seen: set[str] = set()
    everything: list[str] = [e.id for e in (
        *model.classes, *model.methods, *model.tables,
        *model.foreign_keys, *model.artifacts, *model.generated,
        *model.edges.all_edges(),
    )]
    for entity_id in everything:
        if entity_id in seen:
            out.append(Violation("unique-id", entity_id, "id used more than once"))
        seen.add(entity_id)
    return seen


def _validate_edges(
    model: ArchModel,
    classes: set[str],
    methods: dict[str, MethodDecl],
    tables: dict[str, Table],
    artifacts: set[str],
    generated: dict[str, GeneratedEntity],
    out: list[Violation],
) -> None:
    entity_ids = model.entity_ids()

    call_pairs: set[tuple[str, str]] = set()
    for edge in model.edges.calls:
        for endpoint in (edge.caller_method_id, edge.callee_method_id):
            if endpoint not in methods:
                out.append(Violation("edge-endpoint", edge.id, f"method {endpoint!r} does not exist"))
        if edge.caller_method_id == edge.callee_method_id:
            out.append(Violation("call-self", edge.id, "caller and callee must differ"))
        pair = (edge.caller_method_id, edge.callee_method_id)
        if pair in call_pairs:
            out.append(Violation("call-duplicate", edge.id, f"duplicate call edge for {pair}"))
        call_pairs.add(pair)

    for edge in model.edges.data_access:
        if edge.accessor_class_id not in classes:
            out.append(Violation("edge-endpoint", edge.id,
                                 f"accessor class {edge.accessor_class_id!r} does not exist"))
        if edge.mode not in ACCESS_MODES:
            out.append(Violation("enum-value", edge.id, f"unknown access mode {edge.mode!r}"))
        target_columns = _data_target_columns(model, edge.table_id, tables, generated)
        if target_columns is None:
            out.append(Violation("edge-endpoint", edge.id,
                                 f"table {edge.table_id!r} does not exist"))
            continue
        if edge.columns != (WILDCARD,):
            if WILDCARD in edge.columns:
                out.append(Violation("data-access-columns", edge.id, "wildcard must stand alone"))
            for col in edge.columns:
                if col != WILDCARD and col not in target_columns:
                    out.append(Violation("data-access-columns", edge.id,
                                         f"column {col!r} not in table {edge.table_id!r}"))
        table = tables.get(edge.table_id)
        if table is not None and table.read_only and edge.writes:
            out.append(Violation("data-access-readonly", edge.id,
                                 f"write access to read-only table {edge.table_id!r}"))

    for edge in model.edges.type_uses:
        if edge.user_class_id not in classes:
            out.append(Violation("edge-endpoint", edge.id,
                                 f"user class {edge.user_class_id!r} does not exist"))
        if edge.used_class_id not in classes and edge.used_class_id not in generated:
            out.append(Violation("edge-endpoint", edge.id,
                                 f"used type {edge.used_class_id!r} does not exist"))
        if edge.user_class_id == edge.used_class_id:
            out.append(Violation("type-use-self", edge.id, "user and used must differ"))
        if edge.kind not in TYPE_USE_KINDS:
            out.append(Violation("enum-value", edge.id, f"unknown type-use kind {edge.kind!r}"))

    for edge in model.edges.artifact_uses:
        if edge.user_class_id not in classes:
            out.append(Violation("edge-endpoint", edge.id,
                                 f"user class {edge.user_class_id!r} does not exist"))
        if edge.artifact_id not in artifacts and edge.artifact_id not in generated:
            out.append(Violation("edge-endpoint", edge.id,
                                 f"artifact {edge.artifact_id!r} does not exist"))

    for edge in model.edges.service_calls:
        for endpoint in (edge.caller_entity_id, edge.provider_entity_id):
            if endpoint not in entity_ids:
                out.append(Violation("edge-endpoint", edge.id, f"entity {endpoint!r} does not exist"))
        if edge.mode not in SERVICE_CALL_MODES:
            out.append(Violation("enum-value", edge.id, f"unknown service-call mode {edge.mode!r}"))
        via = generated.get(edge.via)
        if via is None:
            out.append(Violation("service-call-via", edge.id, f"via {edge.via!r} is not a generated entity"))
        else:
            expected = "api_endpoint" if edge.mode == "sync" else "message_channel"
            if via.kind != expected:
                out.append(Violation("service-call-via", edge.id,
                                     f"mode {edge.mode!r} requires via of kind {expected!r}, got {via.kind!r}"))


def _data_target_columns(
    model: ArchModel,
    table_id: str,
    tables: dict[str, Table],
    generated: dict[str, GeneratedEntity],
) -> tuple[str, ...] | None:
    """Columns addressable through a data-access edge target.

    Targets are real tables or generated snapshot tables; a snapshot exposes
    the columns of its source table.
    """
    table = tables.get(table_id)
    if table is not None:
        return table.column_names()
    gen = generated.get(table_id)
    if gen is not None and gen.kind == "snapshot_table":
        source = tables.get(gen.payload_map().get("source_table_id", ""))
        if source is not None:
            return source.column_names()
        return ()
    return None


# --- strict field helpers ------------------------------------------------------

def _expect_keys(
    data: Mapping[str, Any],
    path: str,
    required: set[str],
    optional: set[str],
) -> Mapping[str, Any]:
    if not isinstance(data, Mapping):
        raise SchemaError(f"{path}: expected an object")
    unknown = sorted(set(data) - required - optional)
    if unknown:
        raise SchemaError(f"{path}: unknown fields: {', '.join(unknown)}")
    missing = sorted(required - set(data))
    if missing:
        raise SchemaError(f"{path}: missing fields: {', '.join(missing)}")
    return data


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{path}: expected a string, got {type(value).__name__}")
    return value


def _expect_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"{path}: expected a boolean, got {type(value).__name__}")
    return value


def _expect_str_list(value: Any, path: str) -> tuple[str, ...]:
    if not isinstance(value, (list, tuple)):
        raise SchemaError(f"{path}: expected a list")
    return tuple(_expect_str(v, f"{path}[{i}]") for i, v in enumerate(value))
