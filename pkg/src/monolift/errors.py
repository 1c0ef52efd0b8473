"""Exception types shared across the package."""

from __future__ import annotations


class MonoliftError(Exception):
    """Base class for all errors raised by this package."""


# --- ingest ----------------------------------------------------------------

class IngestError(MonoliftError):
    """Base class for file parsing and validation failures."""


class JsonSyntaxError(IngestError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(IngestError):
    """A field is missing, unknown, or of the wrong shape."""


class DanglingReferenceError(IngestError):
    """An id mentioned in the file does not resolve to an entity."""


class UnassignedEntityError(IngestError):
    def __init__(self, entity_ids: list[str]):
        super().__init__(f"entities not assigned to any service: {', '.join(entity_ids)}")
        self.entity_ids = entity_ids


class DoublyAssignedEntityError(IngestError):
    def __init__(self, entity_id: str, services: list[str]):
        super().__init__(f"entity {entity_id!r} assigned to several services: {', '.join(services)}")
        self.entity_id = entity_id
        self.services = services


class UnknownEntityError(IngestError):
    def __init__(self, entity_ids: list[str]):
        super().__init__(f"boundary names unknown entities: {', '.join(entity_ids)}")
        self.entity_ids = entity_ids


# --- deltas ----------------------------------------------------------------

class DeltaError(MonoliftError):
    """Base class for failures while applying a model delta."""


class MissingTargetError(DeltaError):
    def __init__(self, target_id: str, detail: str = ""):
        suffix = f" ({detail})" if detail else ""
        super().__init__(f"delta target not found: {target_id!r}{suffix}")
        self.target_id = target_id


class DuplicateIdError(DeltaError):
    def __init__(self, entity_id: str):
        super().__init__(f"id already exists in model: {entity_id!r}")
        self.entity_id = entity_id


class IllegalDeltaError(DeltaError):
    """The delta is malformed or not applicable to its target."""


class DeltaSequenceError(DeltaError):
    """A delta in a sequence failed; the input model is left untouched."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"delta at position {index} failed: {cause}")
        self.index = index
        self.cause = cause


# --- classifier / planner / transforms --------------------------------------

class UnknownTableError(MonoliftError):
    def __init__(self, table_id: str):
        super().__init__(f"no such table: {table_id!r}")
        self.table_id = table_id


class UnknownEdgeError(MonoliftError):
    def __init__(self, edge_id: str):
        super().__init__(f"no such edge: {edge_id!r}")
        self.edge_id = edge_id


class NotCrossBoundaryError(MonoliftError):
    """The subject lives entirely inside one service."""


class ConsumerWritesReplicaError(MonoliftError):
    """A replication consumer writes to the source table, violating the
    read-only replica contract."""


class ScenarioMismatchError(MonoliftError):
    """The supplied scenario disagrees with the one recomputed from the model."""


class IllegalStrategyError(MonoliftError):
    """The strategy tag is not legal for the refactoring."""


class NoOrmLinkError(MonoliftError):
    """A table has no mapped code class."""


class CyclicDependencyError(MonoliftError):
    """Step dependencies contain a cycle."""


class PlanMismatchError(MonoliftError):
    """A plan does not belong to the model it is being applied to."""
