"""HTTP/JSON facade over the store, guidance, translator and evaluator.

The service holds no state of its own: every request reloads from the
store, so restarts are invisible to clients and the companion UI can
treat the server as the single source of truth.
"""

from __future__ import annotations

import os
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import evaluator, guidance
from .errors import (
    ArityError,
    ArityMismatch,
    BadArgs,
    CorruptProject,
    CrucibleError,
    CyclicHierarchy,
    DuplicateName,
    GuidanceViolation,
    IoError,
    ModelSyntaxError,
    NotFound,
    StructuralBlock,
    UniverseTooLarge,
    UnknownName,
    UnsupportedFeature,
)
from .schema import schema_to_json
from .store import ProjectStore
from .testcase import Project, TestCase
from .translator import generate_command_string

_ERROR_MAP: list[tuple[type, int, str]] = [
    (GuidanceViolation, 409, "guidanceBlocked"),
    (StructuralBlock, 409, "structuralBlock"),
    (DuplicateName, 409, "duplicate"),
    (NotFound, 404, "notFound"),
    (ModelSyntaxError, 400, "syntaxError"),
    (UnsupportedFeature, 400, "unsupportedFeature"),
    (UnknownName, 400, "unknownName"),
    (CyclicHierarchy, 400, "cyclicHierarchy"),
    (ArityError, 400, "arityError"),
    (ArityMismatch, 400, "arityMismatch"),
    (BadArgs, 400, "badArgs"),
    (UniverseTooLarge, 400, "universeTooLarge"),
    (CorruptProject, 500, "corruptProject"),
    (IoError, 500, "ioError"),
    (CrucibleError, 500, "engineError"),
]


def _error_response(exc: CrucibleError) -> JSONResponse:
    for etype, status, code in _ERROR_MAP:
        if isinstance(exc, etype):
            details = None
            if isinstance(exc, GuidanceViolation):
                details = asdict(exc.verdict)
            elif isinstance(exc, StructuralBlock):
                details = [asdict(v) for v in exc.report.violations]
            body = {"code": code, "message": str(exc)}
            if details is not None:
                body["details"] = details
            return JSONResponse(status_code=status, content={"error": body})
    raise exc


class ProjectBody(BaseModel):
    name: str
    modelSource: str


class ProjectPatchBody(BaseModel):
    colorAssignments: dict[str, str]


class TestBody(BaseModel):
    name: str


class AtomBody(BaseModel):
    sig: str
    x: float = 0.0
    y: float = 0.0


class AtomPatchBody(BaseModel):
    x: float | None = None
    y: float | None = None
    subsets: list[str] | None = None


class ConnectionBody(BaseModel):
    relation: str
    atomIds: list[str]


class TargetsBody(BaseModel):
    relation: str
    prefixAtomIds: list[str] = []


class PredicateBody(BaseModel):
    state: str
    args: list[str] = []


class RunBody(BaseModel):
    allowStructuralFailure: bool = False


def _atom_json(atom) -> dict:
    return {
        "id": atom.id,
        "sig": atom.sig,
        "nickname": atom.nickname,
        "subsets": list(atom.subsets),
        "x": atom.x,
        "y": atom.y,
    }


def _test_json(test: TestCase) -> dict:
    return {
        "name": test.name,
        "atoms": [_atom_json(a) for a in test.atoms],
        "connections": [
            {"relation": c.relation, "atomIds": list(c.atom_ids)}
            for c in test.connections
        ],
        "predicateStates": {
            pred: {"state": ps.state, "args": list(ps.args)}
            for pred, ps in test.predicate_states.items()
        },
        "nicknameCounters": dict(test.nickname_counters),
    }


def _project_json(project: Project) -> dict:
    return {
        "id": project.id,
        "name": project.name,
        "modelSource": project.model_source,
        "colorAssignments": dict(project.color_assignments),
        "schema": schema_to_json(project.schema),
        "tests": list(project.tests),
    }


def create_app(store: ProjectStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="crucible", docs_url=None, redoc_url=None)

    @app.exception_handler(CrucibleError)
    async def handle_engine_error(request: Request, exc: CrucibleError):
        return _error_response(exc)

    # ── projects ────────────────────────────────────────────────────

    @app.post("/projects", status_code=201)
    def create_project(body: ProjectBody):
        project = store.create_project(body.name, body.modelSource)
        return _project_json(project)

    @app.get("/projects")
    def list_projects():
        return {"projects": store.list_projects()}

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        return _project_json(store.load_project(project_id))

    @app.patch("/projects/{project_id}")
    def patch_project(project_id: str, body: ProjectPatchBody):
        project = store.set_colors(project_id, body.colorAssignments)
        return {"colorAssignments": dict(project.color_assignments)}

    @app.delete("/projects/{project_id}", status_code=204)
    def delete_project(project_id: str):
        store.delete_project(project_id)

    # ── tests ───────────────────────────────────────────────────────

    @app.post("/projects/{project_id}/tests", status_code=201)
    def create_test(project_id: str, body: TestBody):
        test = store.create_test(project_id, body.name)
        return _test_json(test)

    @app.get("/projects/{project_id}/tests/{test_name}")
    def get_test(project_id: str, test_name: str):
        project = store.load_project(project_id)
        if test_name not in project.tests:
            raise NotFound("test", test_name)
        return _test_json(project.tests[test_name])

    @app.delete("/projects/{project_id}/tests/{test_name}", status_code=204)
    def delete_test(project_id: str, test_name: str):
        store.delete_test(project_id, test_name)

    # ── canvas edits ────────────────────────────────────────────────

    @app.post("/projects/{project_id}/tests/{test_name}/atoms", status_code=201)
    def add_atom(project_id: str, test_name: str, body: AtomBody):
        atom = store.add_atom(project_id, test_name, body.sig, body.x, body.y)
        return _atom_json(atom)

    @app.delete("/projects/{project_id}/tests/{test_name}/atoms/{atom_id}")
    def remove_atom(project_id: str, test_name: str, atom_id: str):
        removed = store.remove_atom(project_id, test_name, atom_id)
        return {
            "removedConnections": [
                {"relation": c.relation, "atomIds": list(c.atom_ids)}
                for c in removed
            ]
        }

    @app.patch("/projects/{project_id}/tests/{test_name}/atoms/{atom_id}")
    def patch_atom(project_id: str, test_name: str, atom_id: str, body: AtomPatchBody):
        atom = store.update_atom(
            project_id,
            test_name,
            atom_id,
            x=body.x,
            y=body.y,
            subsets=None if body.subsets is None else tuple(body.subsets),
        )
        return _atom_json(atom)

    @app.post(
        "/projects/{project_id}/tests/{test_name}/connections", status_code=201
    )
    def add_connection(project_id: str, test_name: str, body: ConnectionBody):
        store.add_connection(
            project_id, test_name, body.relation, tuple(body.atomIds)
        )
        project = store.load_project(project_id)
        index = len(project.tests[test_name].connections) - 1
        return {"relation": body.relation, "atomIds": body.atomIds, "index": index}

    @app.delete("/projects/{project_id}/tests/{test_name}/connections/{index}")
    def remove_connection(project_id: str, test_name: str, index: int):
        removed = store.remove_connection(project_id, test_name, index)
        return {
            "removed": [
                {"relation": c.relation, "atomIds": list(c.atom_ids)}
                for c in removed
            ]
        }

    @app.post("/projects/{project_id}/tests/{test_name}/valid-targets")
    def valid_targets(project_id: str, test_name: str, body: TargetsBody):
        project = store.load_project(project_id)
        if test_name not in project.tests:
            raise NotFound("test", test_name)
        targets = guidance.valid_connection_targets(
            project.tests[test_name],
            project.schema,
            body.relation,
            tuple(body.prefixAtomIds),
        )
        return {"targets": targets}

    @app.put("/projects/{project_id}/tests/{test_name}/predicates/{pred_name}")
    def put_predicate(
        project_id: str, test_name: str, pred_name: str, body: PredicateBody
    ):
        pstate = store.set_predicate_state(
            project_id, test_name, pred_name, body.state, tuple(body.args)
        )
        return {"state": pstate.state, "args": list(pstate.args)}

    # ── execution ───────────────────────────────────────────────────

    @app.post("/projects/{project_id}/tests/{test_name}/run")
    def run(project_id: str, test_name: str, body: RunBody | None = None):
        project = store.load_project(project_id)
        allow = body.allowStructuralFailure if body is not None else False
        result = evaluator.run_test(project, test_name, allow)
        return {
            "status": result.status,
            "commandString": result.command.text,
            "diagnostics": [
                {"kind": d.kind, "subject": d.subject, "holds": d.holds}
                for d in result.diagnostics
            ],
            "elapsedMs": result.elapsed * 1000.0,
        }

    @app.post("/projects/{project_id}/tests/{test_name}/translate")
    def translate(project_id: str, test_name: str):
        project = store.load_project(project_id)
        if test_name not in project.tests:
            raise NotFound("test", test_name)
        command = generate_command_string(
            project.tests[test_name], project.schema
        )
        return {"commandString": command.text}

    ui_path = _resolve_ui_dir(ui_dir)
    if ui_path is not None:
        app.mount("/ui", StaticFiles(directory=ui_path, html=True), name="ui")

    return app


def _resolve_ui_dir(ui_dir: str | Path | None) -> Path | None:
    candidates = []
    if ui_dir is not None:
        candidates.append(Path(ui_dir))
    env_dir = os.environ.get("CRUCIBLE_UI_DIR")
    if env_dir:
        candidates.append(Path(env_dir))
    # repo layout: src/crucible/service.py -> repo root -> frontend/dist
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for candidate in candidates:
        if candidate.is_dir():
            return candidate
    return None


def serve(
    store_dir: str | Path,
    port: int = 8000,
    bind: str = "127.0.0.1",
    ui_dir: str | Path | None = None,
) -> None:
    import uvicorn

    app = create_app(ProjectStore(store_dir), ui_dir=ui_dir)
    uvicorn.run(app, host=bind, port=port, log_level="warning")
