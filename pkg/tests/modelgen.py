"""Seeded random generator for valid (model, boundary) pairs.

Used by the corpus-based suites: oracle equivalence, end-to-end closure,
round-trips, and determinism. Same seed, same model, always.
"""

from __future__ import annotations

import random

from monolift.boundary import Boundary, PolicyConfig, check_boundary
from monolift.model import (
    ArchModel,
    ArtifactUseEdge,
    CallEdge,
    CodeClass,
    Column,
    DataAccessEdge,
    EdgeSet,
    ForeignKey,
    MethodDecl,
    SharedArtifact,
    Table,
    TypeUseEdge,
    validate_model,
)

_SERVICES = ["alpha", "beta", "gamma", "delta"]
_CLASS_WORDS = ["Order", "Invoice", "Stock", "Account", "Shipment", "Catalog",
                "Payment", "Customer", "Pricing", "Billing", "Ledger", "Quote"]
_ROLES = ["Service", "Manager", "Handler", "Processor", "Entity", "Store"]
_TABLE_WORDS = ["orders", "invoices", "stock", "accounts", "shipments",
                "catalog", "payments", "ledger"]
_COLUMN_WORDS = ["name", "status", "amount", "quantity", "created_at",
                 "notes", "price", "region"]
_SCALARS = ["id", "name", "status", "amount", "createdAt"]
_TYPES = ["string", "long", "int", "decimal", "bool"]


def generate(seed: int, max_classes: int = 12, max_tables: int = 6, max_edges: int = 30):
    """A valid model and a boundary partitioning it, derived from the seed."""
    rng = random.Random(seed)
    services = _SERVICES[: rng.randint(2, 4)]

    n_classes = rng.randint(3, max_classes)
    classes = []
    for i in range(n_classes):
        name = rng.choice(_CLASS_WORDS) + rng.choice(_ROLES) + str(i)
        classes.append(CodeClass(
            id=f"c{i}", name=name,
            scalar_attributes=tuple(s for s in _SCALARS if rng.random() < 0.4),
            tags=tuple(t for t in ("business_logic", "entity", "utility") if rng.random() < 0.3),
        ))

    methods = []
    for cls in classes:
        for j in range(rng.randint(0, 2)):
            methods.append(MethodDecl(
                id=f"{cls.id}.m{j}", owner_class_id=cls.id,
                name=rng.choice(["process", "update", "fetch", "apply", "check"]) + str(j),
            ))

    n_tables = rng.randint(0, max_tables)
    tables = []
    for i in range(n_tables):
        word = rng.choice(_TABLE_WORDS)
        columns = [Column("id", "long")]
        for col in rng.sample(_COLUMN_WORDS, rng.randint(1, 4)):
            columns.append(Column(col, rng.choice(_TYPES)))
        tables.append(Table(
            id=f"t{i}", name=f"{word}{i}", columns=tuple(columns),
            read_only=rng.random() < 0.08,
        ))

    foreign_keys = []
    if len(tables) >= 2:
        for k in range(rng.randint(0, 3)):
            from_t, to_t = rng.sample(range(len(tables)), 2)
            composite = rng.random() < 0.2
            ref_cols = [f"ref{k}_id"] + ([f"ref{k}_part"] if composite else [])
            tables[from_t] = Table(
                id=tables[from_t].id, name=tables[from_t].name,
                columns=tables[from_t].columns + tuple(Column(c, "long") for c in ref_cols),
                read_only=tables[from_t].read_only,
            )
            to_cols = ["id"] + (["id"] if composite else [])
            if composite:
                # composite target needs two distinct key columns
                extra = f"alt{k}_id"
                tables[to_t] = Table(
                    id=tables[to_t].id, name=tables[to_t].name,
                    columns=tables[to_t].columns + (Column(extra, "long"),),
                    read_only=tables[to_t].read_only,
                )
                to_cols = ["id", extra]
            foreign_keys.append(ForeignKey(
                id=f"fk{k}", from_table_id=tables[from_t].id, from_columns=tuple(ref_cols),
                to_table_id=tables[to_t].id, to_columns=tuple(to_cols),
                cardinality=rng.choice(["one_to_one", "many_to_one", "one_to_many"]),
            ))

    artifacts = [
        SharedArtifact(
            id=f"a{i}", name=rng.choice(["Utils", "Validation", "Pricing", "Formats"]) + str(i),
            has_business_logic=rng.random() < 0.35,
            stability=rng.choice(["stable", "volatile"]),
        )
        for i in range(rng.randint(0, 3))
    ]

    orm_links = []
    if tables:
        for cls in classes:
            if rng.random() < 0.35:
                orm_links.append((cls.id, rng.choice(tables).id))

    calls, data_access, type_uses, artifact_uses = [], [], [], []
    budget = rng.randint(4, max_edges)
    call_pairs = set()
    for i in range(budget):
        kind = rng.choice(["call", "data", "type", "artifact"])
        if kind == "call" and len(methods) >= 2:
            a, b = rng.sample(methods, 2)
            if (a.id, b.id) in call_pairs:
                continue
            call_pairs.add((a.id, b.id))
            calls.append(CallEdge(
                id=f"call{i}", caller_method_id=a.id, callee_method_id=b.id,
                needs_immediate_response=rng.random() < 0.4,
                needs_strong_consistency=rng.random() < 0.2,
            ))
        elif kind == "data" and tables:
            table = rng.choice(tables)
            mode = rng.choice(["read", "read", "write", "read_write"])
            if table.read_only:
                mode = "read"
            if rng.random() < 0.25:
                columns = ("*",)
            else:
                columns = tuple(rng.sample(table.column_names(), rng.randint(1, min(3, len(table.columns)))))
            data_access.append(DataAccessEdge(
                id=f"da{i}", accessor_class_id=rng.choice(classes).id,
                table_id=table.id, columns=columns, mode=mode,
            ))
        elif kind == "type" and len(classes) >= 2:
            user, used = rng.sample(classes, 2)
            type_uses.append(TypeUseEdge(
                id=f"tu{i}", user_class_id=user.id, used_class_id=used.id,
                kind=rng.choice(["attribute", "parameter", "return", "invocation"]),
            ))
        elif kind == "artifact" and artifacts:
            artifact_uses.append(ArtifactUseEdge(
                id=f"au{i}", user_class_id=rng.choice(classes).id,
                artifact_id=rng.choice(artifacts).id,
            ))

    model = ArchModel(
        classes=tuple(classes), methods=tuple(methods), tables=tuple(tables),
        foreign_keys=tuple(foreign_keys), artifacts=tuple(artifacts),
        edges=EdgeSet(calls=tuple(calls), data_access=tuple(data_access),
                      type_uses=tuple(type_uses), artifact_uses=tuple(artifact_uses)),
        orm_links=tuple(set(orm_links)),
    )
    assert not validate_model(model), f"generator bug at seed {seed}"

    assignment = {}
    for entity in (*classes, *tables, *artifacts):
        assignment.setdefault(rng.choice(services), []).append(entity.id)
    boundary = Boundary(
        services=tuple((name, tuple(ids)) for name, ids in assignment.items()),
        policy=PolicyConfig(),
    )
    check_boundary(model, boundary)
    return model, boundary


def corpus(count: int = 200, start_seed: int = 0):
    return [generate(seed) for seed in range(start_seed, start_seed + count)]
