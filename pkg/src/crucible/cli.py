"""Command-line driver for scripted and CI use.

Exit codes: 0 success, 1 test failure, 2 usage error, 3 engine error.
With --output json, results go to stdout and errors to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from pathlib import Path

from .errors import CrucibleError, NotFound
from .evaluator import run_test
from .oracle import Scope, enumerate_satisfiable
from .parser import parse_formula_block
from .schema import schema_to_json
from .store import ProjectStore
from .testcase import Project
from .translator import aunit_test_file, generate_command_string

USAGE_ERROR = 2
ENGINE_ERROR = 3


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _default_store_dir() -> str:
    return os.environ.get("CRUCIBLE_STORE_DIR", "crucible_store")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crucible",
        description="Build, translate and execute canvas-defined model tests.",
    )
    parser.add_argument(
        "--store-dir",
        default=_default_store_dir(),
        help="project store directory (env: CRUCIBLE_STORE_DIR)",
    )
    parser.add_argument(
        "--output", choices=("text", "json"), default="text", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="create a project from a model file")
    p.add_argument("file", help="path to the model source")
    p.add_argument("--name", required=True, help="project name")

    p = sub.add_parser("schema", help="print a project's resolved schema")
    p.add_argument("project")

    p = sub.add_parser("run", help="run one test or all tests of a project")
    p.add_argument("project")
    p.add_argument("--test", help="run only this test")
    p.add_argument(
        "--allow-structural-failure",
        action="store_true",
        help="run even when the pre-run report has violations",
    )

    p = sub.add_parser("translate", help="print a test's command string")
    p.add_argument("project")
    p.add_argument("test")
    p.add_argument(
        "--aunit-file",
        action="store_true",
        help="emit a val/@Test wrapper instead of the bare command string",
    )

    p = sub.add_parser("bench-translate", help="time command-string generation")
    p.add_argument("project")
    p.add_argument("test")
    p.add_argument("--iterations", type=int, default=10)

    p = sub.add_parser("oracle-check", help="compare a run against brute force")
    p.add_argument("project")
    p.add_argument("test")
    p.add_argument("--scope", type=int, default=3, help="per-sig atom bound")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("CRUCIBLE_PORT", "8000")),
        help="listen port (env: CRUCIBLE_PORT)",
    )
    p.add_argument("--bind", default="127.0.0.1", help="bind address")
    p.add_argument("--ui-dir", default=None, help="static UI directory")

    return parser


def _find_project(store: ProjectStore, ref: str) -> Project:
    try:
        return store.load_project(ref)
    except NotFound:
        pass
    for entry in store.list_projects():
        if entry["name"] == ref:
            return store.load_project(entry["id"])
    raise _CliError(f"no project named or identified by {ref!r}", USAGE_ERROR)


def _emit(payload: dict, text: str, args) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    elif text:
        print(text)


def _cmd_import(store: ProjectStore, args) -> int:
    try:
        source = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read {args.file}: {exc}", USAGE_ERROR)
    project = store.create_project(args.name, source)
    doc = schema_to_json(project.schema)
    _emit(
        {"id": project.id, "name": project.name, "schema": doc},
        f"created project {project.name} ({project.id})\n"
        + json.dumps(doc, indent=2),
        args,
    )
    return 0


def _cmd_schema(store: ProjectStore, args) -> int:
    project = _find_project(store, args.project)
    doc = schema_to_json(project.schema)
    _emit({"id": project.id, "schema": doc}, json.dumps(doc, indent=2), args)
    return 0


def _cmd_run(store: ProjectStore, args) -> int:
    project = _find_project(store, args.project)
    if args.test is not None:
        if args.test not in project.tests:
            raise _CliError(f"no test named {args.test!r}", USAGE_ERROR)
        names = [args.test]
    else:
        names = list(project.tests)
    results = []
    all_passed = True
    lines = []
    for name in names:
        result = run_test(project, name, args.allow_structural_failure)
        all_passed = all_passed and result.passed
        results.append(
            {
                "test": name,
                "status": result.status,
                "diagnostics": [
                    {"kind": d.kind, "subject": d.subject, "holds": d.holds}
                    for d in result.diagnostics
                ],
                "elapsedMs": result.elapsed * 1000.0,
            }
        )
        lines.append(f"{result.status.upper():4s} {name}")
        for d in result.diagnostics:
            if not d.holds:
                lines.append(f"     {d.kind}: {d.subject} expected but evaluated false")
    _emit({"results": results}, "\n".join(lines), args)
    return 0 if all_passed else 1


def _get_test(project: Project, name: str):
    if name not in project.tests:
        raise _CliError(f"no test named {name!r}", USAGE_ERROR)
    return project.tests[name]


def _cmd_translate(store: ProjectStore, args) -> int:
    project = _find_project(store, args.project)
    test = _get_test(project, args.test)
    if args.aunit_file:
        text = aunit_test_file(test, project.schema)
    else:
        text = generate_command_string(test, project.schema).text
    _emit({"commandString": text}, text, args)
    return 0


def _cmd_bench_translate(store: ProjectStore, args) -> int:
    if args.iterations < 1:
        raise _CliError("--iterations must be positive", USAGE_ERROR)
    project = _find_project(store, args.project)
    test = _get_test(project, args.test)
    timings = []
    for _ in range(args.iterations):
        started = time.perf_counter()
        generate_command_string(test, project.schema)
        timings.append((time.perf_counter() - started) * 1000.0)
    payload = {
        "test": args.test,
        "atoms": len(test.atoms),
        "connections": len(test.connections),
        "iterations": args.iterations,
        "meanMs": statistics.fmean(timings),
        "minMs": min(timings),
        "maxMs": max(timings),
    }
    _emit(
        payload,
        f"{payload['atoms']} atoms, {payload['connections']} connections: "
        f"mean {payload['meanMs']:.3f} ms over {args.iterations} runs "
        f"(min {payload['minMs']:.3f}, max {payload['maxMs']:.3f})",
        args,
    )
    return 0


def _cmd_oracle_check(store: ProjectStore, args) -> int:
    project = _find_project(store, args.project)
    test = _get_test(project, args.test)
    result = run_test(project, args.test, allow_structural_failure=True)
    formula = parse_formula_block(result.command.text, project.schema)
    sat, _ = enumerate_satisfiable(
        project.schema, formula, Scope(default=args.scope)
    )
    agree = sat == result.passed
    _emit(
        {
            "test": args.test,
            "evaluator": result.status,
            "oracle": "sat" if sat else "unsat",
            "agree": agree,
        },
        f"evaluator: {result.status}; oracle: {'sat' if sat else 'unsat'}; "
        + ("verdicts agree" if agree else "VERDICTS DISAGREE"),
        args,
    )
    return 0 if agree else 1


def _cmd_serve(store: ProjectStore, args) -> int:
    from .service import serve

    serve(args.store_dir, port=args.port, bind=args.bind, ui_dir=args.ui_dir)
    return 0


_COMMANDS = {
    "import": _cmd_import,
    "schema": _cmd_schema,
    "run": _cmd_run,
    "translate": _cmd_translate,
    "bench-translate": _cmd_bench_translate,
    "oracle-check": _cmd_oracle_check,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    store = ProjectStore(args.store_dir)
    try:
        return _COMMANDS[args.command](store, args)
    except _CliError as exc:
        _fail(args, str(exc), exc.code)
        return exc.code
    except CrucibleError as exc:
        _fail(args, str(exc), ENGINE_ERROR)
        return ENGINE_ERROR


def _fail(args, message: str, code: int) -> None:
    if args.output == "json":
        print(json.dumps({"error": {"message": message, "exitCode": code}}), file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
