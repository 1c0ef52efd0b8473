"""Command-line front end: analyze, plan, apply, verify, report.

Exit codes: 0 ok, 1 usage, 2 parse/validation error, 3 model not
extraction-ready, 4 transform/apply error. Diagnostics go to stderr, data to
stdout or the -o file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import ingest
from .boundary import Boundary, PolicyConfig
from .classify import classify
from .deltas import apply_deltas
from .errors import (
    DeltaError,
    IngestError,
    MonoliftError,
    PlanMismatchError,
)
from .model import ArchModel
from .plan import Plan, synthesize_plan
from .verify import extraction_ready

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NOT_READY = 3
EXIT_TRANSFORM = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 instead of argparse's 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="monolift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p: argparse.ArgumentParser, output: bool = True) -> None:
        p.add_argument("-m", "--model", required=True, help="model file (.model.json)")
        p.add_argument("-b", "--boundary", required=True, help="boundary file (.boundary.json)")
        if output:
            p.add_argument("-o", "--output", help="output file (defaults to stdout)")

    analyze = sub.add_parser("analyze", help="classify cross-service dependencies")
    io_args(analyze)

    plan = sub.add_parser("plan", help="synthesize a refactoring plan with embedded deltas")
    io_args(plan)
    plan.add_argument("--prefer-replication", action="store_true",
                      help="favor replication over splitting, ownership, and reader calls")
    plan.add_argument("--default-communication", choices=["sync", "async", "by-flags"],
                      help="communication strategy for replaced calls")
    plan.add_argument("--reader-strategy", choices=["service-call", "replicate"],
                      help="how read-only consumers of a shared table are served")

    apply_cmd = sub.add_parser("apply", help="replay a plan's deltas onto the model")
    io_args(apply_cmd, output=False)
    apply_cmd.add_argument("-p", "--plan", required=True, help="plan file (.plan.json)")
    apply_cmd.add_argument("-o", "--output", required=True, help="transformed model file")

    verify = sub.add_parser("verify", help="check extraction readiness")
    io_args(verify, output=False)

    report = sub.add_parser("report", help="write a markdown summary")
    io_args(report)
    report.add_argument("-p", "--plan", help="plan file to include in the report")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        return _dispatch(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DeltaError, PlanMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSFORM
    except MonoliftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSFORM
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def _dispatch(args: argparse.Namespace) -> int:
    model, boundary = _load_inputs(args.model, args.boundary)
    if args.command == "analyze":
        return _cmd_analyze(args, model, boundary)
    if args.command == "plan":
        return _cmd_plan(args, model, boundary)
    if args.command == "apply":
        return _cmd_apply(args, model, boundary)
    if args.command == "verify":
        return _cmd_verify(model, boundary)
    if args.command == "report":
        return _cmd_report(args, model, boundary)
    raise _UsageError(f"unknown command {args.command!r}")


def _load_inputs(model_path: str, boundary_path: str) -> tuple[ArchModel, Boundary]:
    model = ingest.parse_model(Path(model_path).read_bytes())
    boundary = ingest.parse_boundary(Path(boundary_path).read_bytes(), model)
    return model, boundary


def _emit(data: bytes, output: str | None) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _cmd_analyze(args: argparse.Namespace, model: ArchModel, boundary: Boundary) -> int:
    findings = classify(model, boundary)
    _emit(ingest.serialize_findings(findings), args.output)
    return EXIT_OK


def _policy_from_flags(args: argparse.Namespace, policy: PolicyConfig) -> PolicyConfig:
    if args.prefer_replication:
        policy = policy.replace(
            shared_table_distinct_columns="replicate",
            shared_table_shared_write="replicate",
            reader_strategy="replicate",
        )
    if args.default_communication:
        policy = policy.replace(default_communication=args.default_communication.replace("-", "_"))
    if args.reader_strategy:
        policy = policy.replace(reader_strategy=args.reader_strategy.replace("-", "_"))
    return policy


def _cmd_plan(args: argparse.Namespace, model: ArchModel, boundary: Boundary) -> int:
    policy = _policy_from_flags(args, boundary.policy)
    findings = classify(model, boundary)
    plan = synthesize_plan(findings, policy, model, boundary)
    _emit(ingest.serialize_plan(plan), args.output)
    return EXIT_OK


def _cmd_apply(args: argparse.Namespace, model: ArchModel, boundary: Boundary) -> int:
    plan = ingest.parse_plan(Path(args.plan).read_bytes())
    _check_plan_matches(plan, model, boundary)
    transformed = apply_deltas(model, plan.all_deltas())
    _emit(ingest.serialize_model(transformed), args.output)
    return EXIT_OK


def _check_plan_matches(plan: Plan, model: ArchModel, boundary: Boundary) -> None:
    planned = {s.finding_id for s in plan.primary_steps()}
    current = {f.id for f in classify(model, boundary)}
    if planned != current:
        stale = sorted(planned - current)
        missing = sorted(current - planned)
        detail = []
        if stale:
            detail.append(f"plan covers findings absent from the model: {', '.join(stale)}")
        if missing:
            detail.append(f"model has findings the plan does not cover: {', '.join(missing)}")
        raise PlanMismatchError("; ".join(detail) or "plan does not match the model")


def _color(text: str, code: str) -> str:
    if os.environ.get("MONOLIFT_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _cmd_verify(model: ArchModel, boundary: Boundary) -> int:
    report = extraction_ready(model, boundary)
    if report.ready:
        print(_color("ready: the model can be extracted along this boundary", "32"))
        return EXIT_OK
    print(_color(f"not ready: {len(report.violations)} violation(s)", "31"))
    for violation in report.violations:
        print(f"  [{violation.rule_id}] {', '.join(violation.entity_ids)}: {violation.message}")
    return EXIT_NOT_READY


def _cmd_report(args: argparse.Namespace, model: ArchModel, boundary: Boundary) -> int:
    findings = classify(model, boundary)
    readiness = extraction_ready(model, boundary)
    plan = ingest.parse_plan(Path(args.plan).read_bytes()) if args.plan else None

    lines = ["# Migration report", ""]
    lines.append(f"Services: {', '.join(boundary.service_names())}")
    lines.append("")
    lines.append(f"## Findings ({len(findings)})")
    lines.append("")
    if findings:
        lines.append("| id | category | scenario | services |")
        lines.append("|---|---|---|---|")
        for f in findings:
            lines.append(f"| {f.id} | {f.category} | {f.scenario} | {', '.join(f.services)} |")
        lines.append("")
        for f in findings:
            lines.append(f"- `{f.id}`: {f.evidence}")
    else:
        lines.append("No cross-service dependencies.")
    lines.append("")

    if plan is not None:
        lines.append(f"## Plan ({len(plan.steps)} steps)")
        lines.append("")
        for i, step in enumerate(plan.steps, 1):
            depends = f" (after {', '.join(step.depends_on)})" if step.depends_on else ""
            lines.append(f"{i}. `{step.step_id}` {step.refactoring} [{step.strategy}]{depends}")
            lines.append(f"   - {step.rationale}")
            for note in step.annotations:
                lines.append(f"   - {note}")
        lines.append("")

    lines.append("## Readiness")
    lines.append("")
    if readiness.ready:
        lines.append("Ready: no unsanctioned dependency crosses the boundary.")
    else:
        lines.append(f"Not ready: {len(readiness.violations)} violation(s).")
        lines.append("")
        for violation in readiness.violations:
            lines.append(f"- **{violation.rule_id}** {', '.join(violation.entity_ids)}: {violation.message}")
    lines.append("")

    _emit("\n".join(lines).encode("utf-8"), args.output)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
