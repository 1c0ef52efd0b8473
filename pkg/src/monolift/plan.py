"""Plan synthesis: findings become an ordered DAG of refactoring steps.

Strategies follow the catalogue's decision rules; helper steps one
refactoring's mechanics require are wired in as dependencies. Deltas are
embedded at plan time by replaying steps against intermediate models, so
applying a plan is pure replay.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from . import transforms
from .boundary import Boundary, PolicyConfig
from .classify import Finding
from .deltas import ModelDelta, apply_deltas
from .errors import CyclicDependencyError, PlanMismatchError, SchemaError
from .model import ArchModel
from .transforms import DelegationRequest, Subject

FAULT_TOLERANCE_NOTE = "fault-tolerance: retries/circuit-breaker required"

PLAN_FORMAT = 1


@dataclass(frozen=True)
class RefactoringStep:
    step_id: str
    refactoring: str
    finding_id: str
    strategy: str
    depends_on: tuple[str, ...] = ()
    rationale: str = ""
    annotations: tuple[str, ...] = ()
    deltas: tuple[ModelDelta, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "depends_on", tuple(sorted(self.depends_on)))
        object.__setattr__(self, "annotations", tuple(sorted(self.annotations)))
        object.__setattr__(self, "deltas", tuple(self.deltas))

    @property
    def is_primary(self) -> bool:
        return "/" not in self.step_id

    def to_obj(self) -> dict[str, Any]:
        return {
            "step_id": self.step_id,
            "refactoring": self.refactoring,
            "finding_id": self.finding_id,
            "strategy": self.strategy,
            "depends_on": list(self.depends_on),
            "rationale": self.rationale,
            "annotations": list(self.annotations),
            "deltas": [d.to_obj() for d in self.deltas],
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any], path: str) -> "RefactoringStep":
        required = {"step_id", "refactoring", "finding_id", "strategy",
                    "depends_on", "rationale", "annotations"}
        if not isinstance(data, Mapping):
            raise SchemaError(f"{path}: expected an object")
        unknown = sorted(set(data) - required - {"deltas"})
        if unknown:
            raise SchemaError(f"{path}: unknown fields: {', '.join(unknown)}")
        missing = sorted(required - set(data))
        if missing:
            raise SchemaError(f"{path}: missing fields: {', '.join(missing)}")
        return cls(
            step_id=data["step_id"],
            refactoring=data["refactoring"],
            finding_id=data["finding_id"],
            strategy=data["strategy"],
            depends_on=tuple(data["depends_on"]),
            rationale=data["rationale"],
            annotations=tuple(data["annotations"]),
            deltas=tuple(ModelDelta.from_obj(d, f"{path}.deltas[{i}]")
                         for i, d in enumerate(data.get("deltas", []))),
        )


@dataclass(frozen=True)
class Plan:
    steps: tuple[RefactoringStep, ...] = ()
    policy: PolicyConfig = field(default_factory=PolicyConfig)

    def primary_steps(self) -> tuple[RefactoringStep, ...]:
        return tuple(s for s in self.steps if s.is_primary)

    def all_deltas(self) -> tuple[ModelDelta, ...]:
        return tuple(d for s in self.steps for d in s.deltas)

    def to_obj(self) -> dict[str, Any]:
        return {
            "format": PLAN_FORMAT,
            "policy": self.policy.to_obj(),
            "steps": [s.to_obj() for s in self.steps],
        }

    @classmethod
    def from_obj(cls, data: Mapping[str, Any]) -> "Plan":
        if not isinstance(data, Mapping):
            raise SchemaError("plan: expected an object")
        unknown = sorted(set(data) - {"format", "policy", "steps"})
        if unknown:
            raise SchemaError(f"plan: unknown fields: {', '.join(unknown)}")
        if data.get("format") != PLAN_FORMAT:
            raise PlanMismatchError(f"unsupported plan format {data.get('format')!r}")
        steps = data.get("steps", [])
        if not isinstance(steps, list):
            raise SchemaError("plan.steps: expected a list")
        return cls(
            steps=tuple(RefactoringStep.from_obj(s, f"plan.steps[{i}]") for i, s in enumerate(steps)),
            policy=PolicyConfig.from_obj(data.get("policy", {}), "plan.policy"),
        )


def decide(finding: Finding, policy: PolicyConfig, model: ArchModel, boundary: Boundary) -> tuple[str, str]:
    """Strategy and rationale for one finding, per the catalogue's rules."""
    if finding.category == "CALL":
        return _decide_call(finding, policy, model)
    if finding.category == "FOREIGN_KEY":
        return "move_to_code", ("the constraint blocks extraction; the relationship "
                                "moves into code with the key as a query filter")
    if finding.category == "SHARED_TABLE":
        return _decide_shared_table(finding, policy, model, boundary)
    if finding.category == "TYPE_USE":
        return _decide_type_use(finding, policy)
    if finding.category == "SHARED_ARTIFACT":
        return _decide_artifact(finding, model)
    raise SchemaError(f"unknown finding category {finding.category!r}")


def _decide_call(finding: Finding, policy: PolicyConfig, model: ArchModel) -> tuple[str, str]:
    edge = next((e for e in model.edges.calls if e.id == finding.subject_ids[0]), None)
    strong = edge is not None and edge.needs_strong_consistency
    immediate = edge is not None and edge.needs_immediate_response
    if policy.default_communication == "sync":
        return "sync", "policy fixes communication to synchronous calls"
    if policy.default_communication == "async":
        if strong:
            return "sync", ("strong consistency is required; asynchronous messaging "
                            "cannot satisfy it, policy notwithstanding")
        return "async", "policy fixes communication to asynchronous messaging"
    if immediate or strong:
        reason = "an immediate response is required" if immediate else "strong consistency is required"
        return "sync", f"{reason}, so the call becomes a synchronous service call"
    return "async", "eventual consistency is acceptable, so the call becomes an event"


def _decide_shared_table(finding: Finding, policy: PolicyConfig, model: ArchModel, boundary: Boundary) -> tuple[str, str]:
    table_id = finding.subject_ids[0]
    owner = transforms.decide_table_owner(model, boundary, table_id, finding.scenario)
    if finding.scenario == "distinct_columns":
        if policy.shared_table_distinct_columns == "split":
            return "split", "services write disjoint columns; the table splits per service"
        return "replicate", f"{owner} owns the table; other services work on replicas"
    if finding.scenario == "shared_write_columns":
        if policy.shared_table_shared_write == "ownership":
            return "ownership", (f"overlapping writes need one owner: {owner} "
                                 "(most write accesses, ties broken by name)")
        return "replicate", f"{owner} owns the shared columns; others receive replicas"
    if policy.reader_strategy == "service_call":
        return "service_call", f"{owner} keeps the table; readers switch to service calls"
    return "replicate", f"{owner} keeps the table; readers work on read-only snapshots"


def _decide_type_use(finding: Finding, policy: PolicyConfig) -> tuple[str, str]:
    if finding.scenario == "holds_data":
        return "replicate", ("the consumer stores the type locally, so it is replicated "
                             "and kept in sync")
    if finding.scenario == "invocation_only" and policy.type_use_proxy:
        return "proxy", "the consumer only invokes operations; a proxy fronts the owner"
    return "central", ("the owner keeps the type; consumers work through an interface "
                       "and a transfer object")


def _decide_artifact(finding: Finding, model: ArchModel) -> tuple[str, str]:
    artifact = model.artifact_by_id(finding.subject_ids[0])
    scenario = transforms.artifact_scenario(artifact)
    reasons = {
        "duplicate": "stable code without business logic can be safely copied into each service",
        "library": "the code changes over time, so it becomes a versioned shared library",
        "service": "business logic must stay single-sourced, so it becomes a dedicated service",
    }
    return scenario, reasons[scenario]


class _Node:
    __slots__ = ("step_id", "refactoring", "finding_id", "strategy", "subject",
                 "rationale", "depends", "annotations", "deltas", "descendants")

    def __init__(self, step_id: str, refactoring: str, finding_id: str,
                 strategy: str, subject: Subject, rationale: str):
        self.step_id = step_id
        self.refactoring = refactoring
        self.finding_id = finding_id
        self.strategy = strategy
        self.subject = subject
        self.rationale = rationale
        self.depends: set[str] = set()
        self.annotations: set[str] = set()
        self.deltas: tuple[ModelDelta, ...] = ()
        self.descendants: set[str] = set()


def synthesize_plan(
    findings: Iterable[Finding],
    policy: PolicyConfig,
    model: ArchModel,
    boundary: Boundary,
) -> Plan:
    """One primary step per finding plus the delegated helpers, topologically
    ordered, with deltas embedded."""
    builder = _PlanBuilder(policy, model, boundary)
    builder.plan_all(sorted(findings, key=lambda f: (f.category, f.id)))
    return builder.build()


class _PlanBuilder:
    def __init__(self, policy: PolicyConfig, model: ArchModel, boundary: Boundary):
        self.policy = policy
        self.model = model
        self.boundary = boundary
        self.nodes: dict[str, _Node] = {}
        self.registry: dict[tuple, _Node] = {}
        self.primary_by_finding: dict[str, _Node] = {}
        self.table_owners: dict[str, str] = {}
        self.split_tables: set[str] = set()

    def plan_all(self, findings: list[Finding]) -> None:
        decided = [(f, *decide(f, self.policy, self.model, self.boundary)) for f in findings]
        # Table ownership is settled before any step is wired: a decided
        # owner can differ from the boundary assignment, and every other
        # step must plan against the final ownership, not the initial one.
        for finding, strategy, _ in decided:
            if finding.category != "SHARED_TABLE":
                continue
            table_id = finding.subject_ids[0]
            if strategy == "split":
                self.split_tables.add(table_id)
            else:
                self.table_owners[table_id] = transforms.decide_table_owner(
                    self.model, self.boundary, table_id, finding.scenario)
        for finding, strategy, rationale in decided:
            self.add_finding(finding, strategy, rationale)
        self._order_fk_moves_after_ownership()
        self._sweep_effectively_crossing_fks()

    def add_finding(self, finding: Finding, strategy: str, rationale: str) -> None:
        subject = self._primary_subject(finding, strategy)
        suffix = finding.id.removeprefix("find:")
        node = self._ensure_node(f"step:{suffix}", _REFACTORING_BY_CATEGORY[finding.category],
                                 finding.id, strategy, subject, rationale)
        self.primary_by_finding[finding.id] = node
        requests = self._requests_for_finding(finding, strategy, subject)
        self._expand(node, requests)

    def _effective_service(self, table_id: str) -> str | None:
        return self.table_owners.get(table_id) or self.boundary.owner_of(self.model, table_id)

    def _order_fk_moves_after_ownership(self) -> None:
        # A foreign-key move reads table ownership when it retags join
        # accesses; it must see the final owners.
        for node in list(self.nodes.values()):
            if node.refactoring != "MoveForeignKeyToCode" or node.subject.kind != "fk":
                continue
            fk = self.model.foreign_key_by_id(node.subject.ids[0])
            if fk is None:
                continue
            for table_id in (fk.from_table_id, fk.to_table_id):
                if table_id in self.table_owners:
                    owner_step = self.primary_by_finding.get(f"find:SHARED_TABLE:{table_id}")
                    if owner_step is not None and owner_step.step_id != node.step_id:
                        node.depends.add(owner_step.step_id)

    def _sweep_effectively_crossing_fks(self) -> None:
        # Ownership reassignment can pull a table away from a foreign key
        # partner that used to share its service; such keys cross only in
        # the final state and get their move steps here.
        for fk in self.model.foreign_keys:
            if fk.from_table_id in self.split_tables or fk.to_table_id in self.split_tables:
                continue  # the split family already clears these
            key = ("MoveForeignKeyToCode", "move_to_code", "fk", (fk.id,))
            if key in self.registry or f"find:FOREIGN_KEY:{fk.id}" in self.primary_by_finding:
                continue
            from_service = self._effective_service(fk.from_table_id)
            to_service = self._effective_service(fk.to_table_id)
            if from_service is None or to_service is None or from_service == to_service:
                continue
            parents = sorted(
                self.primary_by_finding[f"find:SHARED_TABLE:{tid}"].step_id
                for tid in (fk.from_table_id, fk.to_table_id)
                if tid in self.table_owners and f"find:SHARED_TABLE:{tid}" in self.primary_by_finding
            )
            if not parents:
                continue
            host = self.nodes[parents[0]]
            child = self._ensure_node(
                f"{host.step_id}/movefk:{fk.id}", "MoveForeignKeyToCode", host.finding_id,
                "move_to_code", Subject("fk", (fk.id,)),
                f"reassigned ownership leaves foreign key {fk.id} crossing services",
            )
            self.registry[key] = child
            child.depends.update(parents)
            host.descendants.add(child.step_id)
            self._expand(child, transforms.child_requests(
                self.model, self.boundary, "MoveForeignKeyToCode",
                "move_to_code", child.subject, self.policy))

    def _primary_subject(self, finding: Finding, strategy: str) -> Subject:
        if finding.category == "CALL":
            return Subject("call_edge", (finding.subject_ids[0],))
        if finding.category == "FOREIGN_KEY":
            return Subject("fk", (finding.subject_ids[0],))
        if finding.category == "SHARED_TABLE":
            table_id = finding.subject_ids[0]
            owner = transforms.decide_table_owner(self.model, self.boundary, table_id, finding.scenario)
            return Subject("table", (table_id, finding.scenario, owner))
        if finding.category == "TYPE_USE":
            first = next(e for e in self.model.edges.type_uses if e.id == finding.subject_ids[0])
            user_service = self.boundary.owner_of(self.model, first.user_class_id)
            return Subject("type_group", (first.used_class_id, user_service) + finding.subject_ids)
        return Subject("artifact", (finding.subject_ids[0],))

    def _requests_for_finding(self, finding: Finding, strategy: str, subject: Subject) -> list[DelegationRequest]:
        if finding.category == "FOREIGN_KEY":
            return transforms.child_requests(self.model, self.boundary,
                                             "MoveForeignKeyToCode", strategy, subject, self.policy)
        if finding.category == "SHARED_TABLE":
            table_id, scenario, owner = subject.ids
            return transforms.split_requests(self.model, self.boundary, table_id,
                                             scenario, strategy, owner, self.policy)
        if finding.category == "TYPE_USE":
            return transforms.type_dep_requests(self.model, self.boundary, subject, strategy,
                                                self.policy, table_owners=self.table_owners)
        if finding.category == "SHARED_ARTIFACT":
            return transforms.isolation_requests(self.model, self.boundary, subject.ids[0], strategy)
        return []

    def _ensure_node(self, step_id: str, refactoring: str, finding_id: str,
                     strategy: str, subject: Subject, rationale: str) -> _Node:
        node = _Node(step_id, refactoring, finding_id, strategy, subject, rationale)
        self.nodes[step_id] = node
        return node

    def _expand(self, parent: _Node, requests: list[DelegationRequest]) -> None:
        materialized: dict[str, _Node] = {}
        for request in sorted(requests, key=lambda r: r.child_key):
            key = (request.refactoring, request.strategy, request.subject.kind, request.subject.ids)
            child = self.registry.get(key)
            if child is None:
                child = self._ensure_node(
                    f"{parent.step_id}/{request.child_key}",
                    request.refactoring, parent.finding_id, request.strategy,
                    request.subject, request.rationale,
                )
                self.registry[key] = child
                grandchildren = transforms.child_requests(
                    self.model, self.boundary, request.refactoring,
                    request.strategy, request.subject, self.policy,
                )
                self._expand(child, grandchildren)
            materialized[request.child_key] = child

            if request.before_parent:
                parent.depends.add(child.step_id)
                parent.depends |= child.descendants
                parent.descendants |= {child.step_id} | child.descendants
            else:
                child.depends.add(parent.step_id)
                parent.descendants |= {child.step_id} | child.descendants

            for follows in request.follows_keys:
                sibling = materialized.get(follows)
                if sibling is not None:
                    child.depends.add(sibling.step_id)

            if request.refactoring == "ReplicateData":
                self._order_after_shared_table(parent, child, request.subject.ids[0])

    def _order_after_shared_table(self, parent: _Node, child: _Node, table_id: str) -> None:
        # Replication must wait for the table's own resolution to clear
        # foreign writes, unless this replication *is* (part of) that
        # resolution, which would knot the dependencies into a cycle.
        finding_id = f"find:SHARED_TABLE:{table_id}"
        if parent.finding_id == finding_id:
            return
        owner_step = self.primary_by_finding.get(finding_id)
        if owner_step is None or child.step_id in owner_step.descendants:
            return
        child.depends.add(owner_step.step_id)
        child.depends |= owner_step.descendants

    def build(self) -> Plan:
        order = _topological_order(self.nodes)
        current = self.model
        steps: list[RefactoringStep] = []
        for step_id in order:
            node = self.nodes[step_id]
            result = transforms.compute_deltas(current, self.boundary, node.refactoring,
                                               node.strategy, node.subject)
            node.deltas = result.deltas
            node.annotations |= {f"note: {n}" for n in result.notes}
            if (node.refactoring == "ReplaceMethodCallWithServiceCall"
                    and self.policy.fault_tolerance_note):
                node.annotations.add(FAULT_TOLERANCE_NOTE)
            current = apply_deltas(current, result.deltas)
            steps.append(RefactoringStep(
                step_id=node.step_id,
                refactoring=node.refactoring,
                finding_id=node.finding_id,
                strategy=node.strategy,
                depends_on=tuple(node.depends),
                rationale=node.rationale,
                annotations=tuple(node.annotations),
                deltas=node.deltas,
            ))
        return Plan(steps=tuple(steps), policy=self.policy)


_REFACTORING_BY_CATEGORY = {
    "CALL": "ReplaceMethodCallWithServiceCall",
    "FOREIGN_KEY": "MoveForeignKeyToCode",
    "SHARED_TABLE": "SplitDatabase",
    "TYPE_USE": "BreakDataTypeDependency",
    "SHARED_ARTIFACT": "SharedCodeIsolation",
}


def _topological_order(nodes: Mapping[str, _Node]) -> list[str]:
    """Kahn's algorithm; among ready steps the smallest (refactoring,
    step_id) runs first, making the order deterministic and stable."""
    blockers: dict[str, set[str]] = {}
    dependents: dict[str, set[str]] = {sid: set() for sid in nodes}
    for sid, node in nodes.items():
        deps = {d for d in node.depends if d in nodes}
        blockers[sid] = set(deps)
        for dep in deps:
            dependents[dep].add(sid)

    ready = [(nodes[sid].refactoring, sid) for sid, deps in blockers.items() if not deps]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        _, sid = heapq.heappop(ready)
        order.append(sid)
        for dependent in dependents[sid]:
            blockers[dependent].discard(sid)
            if not blockers[dependent]:
                heapq.heappush(ready, (nodes[dependent].refactoring, dependent))
    if len(order) != len(nodes):
        stuck = sorted(set(nodes) - set(order))
        raise CyclicDependencyError(f"steps form a dependency cycle: {', '.join(stuck)}")
    return order


def order_plan(plan: Plan) -> Plan:
    """Re-order a plan's steps topologically with the deterministic
    tie-break; raises on cycles."""
    nodes: dict[str, _Node] = {}
    for step in plan.steps:
        node = _Node(step.step_id, step.refactoring, step.finding_id,
                     step.strategy, Subject("opaque", ()), step.rationale)
        node.depends = set(step.depends_on)
        node.annotations = set(step.annotations)
        node.deltas = step.deltas
        nodes[step.step_id] = node
    order = _topological_order(nodes)
    by_id = {s.step_id: s for s in plan.steps}
    return Plan(steps=tuple(by_id[sid] for sid in order), policy=plan.policy)
