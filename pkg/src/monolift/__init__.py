"""monolift: plan the ground work for extracting services from a monolith.

Classifies every cross-service dependency in a modeled monolith, synthesizes
an ordered plan of catalogue refactorings that resolves them, applies the
plan as replayable model deltas, and verifies the result is extraction-ready.
"""

from .boundary import Boundary, PolicyConfig
from .classify import AccessMatrix, Finding, access_matrix, classify, table_scenario
from .deltas import ModelDelta, apply_delta, apply_deltas
from .ingest import (
    parse_boundary,
    parse_model,
    parse_plan,
    serialize_model,
    serialize_plan,
)
from .model import ArchModel, validate_model
from .plan import Plan, RefactoringStep, decide, order_plan, synthesize_plan
from .transforms import (
    break_type_dep,
    capability_reachable,
    create_dto,
    isolate_shared_code,
    move_fk,
    replace_call,
    replicate_data,
    split_database,
)
from .verify import ReadinessReport, extraction_ready

__version__ = "0.1.0"

__all__ = [
    "AccessMatrix",
    "ArchModel",
    "Boundary",
    "Finding",
    "ModelDelta",
    "Plan",
    "PolicyConfig",
    "ReadinessReport",
    "RefactoringStep",
    "access_matrix",
    "apply_delta",
    "apply_deltas",
    "break_type_dep",
    "capability_reachable",
    "classify",
    "create_dto",
    "decide",
    "extraction_ready",
    "isolate_shared_code",
    "move_fk",
    "order_plan",
    "parse_boundary",
    "parse_model",
    "parse_plan",
    "replace_call",
    "replicate_data",
    "serialize_model",
    "serialize_plan",
    "split_database",
    "synthesize_plan",
    "table_scenario",
    "validate_model",
]
