"""File formats: ``.model.json``, ``.boundary.json``, ``.plan.json``.

UTF-8 JSON throughout. Canonical output means sorted keys, 2-space indent,
newline-terminated; two structurally equal values always serialize to
identical bytes. Unknown fields are errors, not noise.
"""

from __future__ import annotations

import json
from typing import Any

from .boundary import Boundary, PolicyConfig, check_boundary
from .classify import Finding
from .errors import DanglingReferenceError, JsonSyntaxError, SchemaError
from .model import (
    ArchModel,
    ArtifactUseEdge,
    CallEdge,
    CodeClass,
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
from .plan import Plan

MODEL_FORMAT = 1

_ENTITY_SECTIONS = {
    "classes": CodeClass,
    "methods": MethodDecl,
    "tables": Table,
    "foreign_keys": ForeignKey,
    "artifacts": SharedArtifact,
}

_EDGE_SECTIONS = {
    "calls": CallEdge,
    "data_access": DataAccessEdge,
    "type_uses": TypeUseEdge,
    "artifact_uses": ArtifactUseEdge,
    "service_calls": ServiceCallEdge,
}


def _loads(data: bytes | str, what: str) -> Any:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise JsonSyntaxError(f"{what}: {exc.msg}", exc.lineno, exc.colno) from exc


def _dumps(obj: Any) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")


def _section(data: Any, key: str, path: str) -> list:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise SchemaError(f"{path}.{key}: expected a list")
    return value


def parse_model(data: bytes | str) -> ArchModel:
    """Parse and structurally validate a model file."""
    obj = _loads(data, "model")
    if not isinstance(obj, dict):
        raise SchemaError("model: top level must be an object")
    unknown = sorted(set(obj) - {"format", "entities", "edges", "orm_links", "generated"})
    if unknown:
        raise SchemaError(f"model: unknown fields: {', '.join(unknown)}")
    if obj.get("format") != MODEL_FORMAT:
        raise SchemaError(f"model: unsupported format {obj.get('format')!r}")

    entities = obj.get("entities", {})
    if not isinstance(entities, dict):
        raise SchemaError("model.entities: expected an object")
    unknown = sorted(set(entities) - set(_ENTITY_SECTIONS))
    if unknown:
        raise SchemaError(f"model.entities: unknown sections: {', '.join(unknown)}")
    parsed_entities = {
        key: tuple(codec.from_obj(item, f"entities.{key}[{i}]")
                   for i, item in enumerate(_section(entities, key, "model.entities")))
        for key, codec in _ENTITY_SECTIONS.items()
    }

    edges_obj = obj.get("edges", {})
    if not isinstance(edges_obj, dict):
        raise SchemaError("model.edges: expected an object")
    unknown = sorted(set(edges_obj) - set(_EDGE_SECTIONS))
    if unknown:
        raise SchemaError(f"model.edges: unknown sections: {', '.join(unknown)}")
    parsed_edges = {
        key: tuple(codec.from_obj(item, f"edges.{key}[{i}]")
                   for i, item in enumerate(_section(edges_obj, key, "model.edges")))
        for key, codec in _EDGE_SECTIONS.items()
    }

    orm_links = obj.get("orm_links", [])
    if not isinstance(orm_links, list):
        raise SchemaError("model.orm_links: expected a list")
    links = []
    for i, link in enumerate(orm_links):
        if not (isinstance(link, list) and len(link) == 2 and all(isinstance(x, str) for x in link)):
            raise SchemaError(f"model.orm_links[{i}]: expected a [class_id, table_id] pair")
        links.append((link[0], link[1]))

    generated = tuple(
        GeneratedEntity.from_obj(item, f"generated[{i}]")
        for i, item in enumerate(_section(obj, "generated", "model"))
    )

    model = ArchModel(
        classes=parsed_entities["classes"],
        methods=parsed_entities["methods"],
        tables=parsed_entities["tables"],
        foreign_keys=parsed_entities["foreign_keys"],
        artifacts=parsed_entities["artifacts"],
        generated=generated,
        edges=EdgeSet(**parsed_edges),
        orm_links=tuple(links),
    )
    violations = validate_model(model)
    if violations:
        first = violations[0]
        raise DanglingReferenceError(f"[{first.rule}] {first.entity_id}: {first.message}")
    return model


def serialize_model(model: ArchModel) -> bytes:
    return _dumps(model.to_obj())


def parse_boundary(data: bytes | str, model: ArchModel) -> Boundary:
    """Parse a boundary file and check it partitions the model.

    Assignments of ids the model no longer contains are tolerated once the
    model carries generated entities: transforms consume originals (split
    tables, duplicated artifacts) that older boundary files still name.
    """
    obj = _loads(data, "boundary")
    if not isinstance(obj, dict):
        raise SchemaError("boundary: top level must be an object")
    unknown = sorted(set(obj) - {"format", "services", "policy"})
    if unknown:
        raise SchemaError(f"boundary: unknown fields: {', '.join(unknown)}")
    if obj.get("format") != MODEL_FORMAT:
        raise SchemaError(f"boundary: unsupported format {obj.get('format')!r}")
    services_obj = obj.get("services", {})
    if not isinstance(services_obj, dict):
        raise SchemaError("boundary.services: expected an object")
    services = []
    for name, ids in services_obj.items():
        if not isinstance(ids, list) or not all(isinstance(x, str) for x in ids):
            raise SchemaError(f"boundary.services.{name}: expected a list of ids")
        services.append((name, tuple(ids)))

    boundary = Boundary(
        services=tuple(services),
        policy=PolicyConfig.from_obj(obj.get("policy", {}), "boundary.policy"),
    )
    check_boundary(model, boundary, strict=not model.generated)
    return boundary


def serialize_boundary(boundary: Boundary) -> bytes:
    return _dumps(boundary.to_obj())


def parse_plan(data: bytes | str) -> Plan:
    obj = _loads(data, "plan")
    return Plan.from_obj(obj)


def serialize_plan(plan: Plan) -> bytes:
    return _dumps(plan.to_obj())


def serialize_findings(findings: list[Finding]) -> bytes:
    return _dumps({"format": MODEL_FORMAT, "findings": [f.to_obj() for f in findings]})


def parse_findings(data: bytes | str) -> list[Finding]:
    obj = _loads(data, "findings")
    if not isinstance(obj, dict) or set(obj) - {"format", "findings"}:
        raise SchemaError("findings: expected an object with 'format' and 'findings'")
    return [Finding.from_obj(item) for item in obj.get("findings", [])]
