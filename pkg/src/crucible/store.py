"""File-backed project store: one JSON document per project.

Every mutating operation re-checks guidance, applies the edit, and
persists before returning, so a reload at any point observes the last
completed mutation.  Mutations on one project are serialized behind a
per-project lock; distinct projects are independent.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from . import guidance
from .errors import (
    BadArgs,
    CorruptProject,
    DuplicateName,
    GuidanceViolation,
    IoError,
    NotFound,
)
from .parser import parse_model
from .schema import ModelSchema, resolve
from .testcase import (
    DONT_TEST,
    PREDICATE_STATES,
    Atom,
    Connection,
    PredicateState,
    Project,
    TestCase,
    move_atom,
)

FORMAT_VERSION = 1


class ProjectStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoError(f"cannot create store directory {self.root}: {exc}")
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, project_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(project_id, threading.Lock())

    def _path(self, project_id: str) -> Path:
        return self.root / f"{project_id}.json"

    # ── project lifecycle ───────────────────────────────────────────

    def create_project(self, name: str, model_source: str) -> Project:
        schema = resolve(parse_model(model_source))
        for existing in self.list_projects():
            if existing["name"] == name:
                raise DuplicateName(name, "project")
        project = Project(
            id=uuid.uuid4().hex[:12],
            name=name,
            model_source=model_source,
            schema=schema,
        )
        self.save_project(project)
        return project

    def list_projects(self) -> list[dict]:
        out = []
        for path in sorted(self.root.glob("*.json")):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, ValueError):
                continue
            out.append({"id": path.stem, "name": doc.get("name", path.stem)})
        return out

    def load_project(self, project_id: str) -> Project:
        path = self._path(project_id)
        if not path.exists():
            raise NotFound("project", project_id)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoError(f"cannot read {path}: {exc}")
        except ValueError as exc:
            raise CorruptProject(f"invalid JSON: {exc}")
        return _project_from_doc(project_id, doc)

    def save_project(self, project: Project) -> None:
        path = self._path(project.id)
        tmp = path.with_suffix(".json.tmp")
        try:
            tmp.write_text(
                json.dumps(_project_to_doc(project), indent=2) + "\n",
                encoding="utf-8",
            )
            tmp.replace(path)
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}")

    def delete_project(self, project_id: str) -> None:
        path = self._path(project_id)
        if not path.exists():
            raise NotFound("project", project_id)
        path.unlink()

    # ── tests ───────────────────────────────────────────────────────

    def create_test(self, project_id: str, name: str) -> TestCase:
        with self._lock(project_id):
            project = self.load_project(project_id)
            if name in project.tests:
                raise DuplicateName(name, "test")
            test = TestCase(name=name)
            project.tests[name] = test
            self.save_project(project)
            return test

    def delete_test(self, project_id: str, name: str) -> None:
        with self._lock(project_id):
            project = self.load_project(project_id)
            if name not in project.tests:
                raise NotFound("test", name)
            del project.tests[name]
            self.save_project(project)

    def _test(self, project: Project, name: str) -> TestCase:
        if name not in project.tests:
            raise NotFound("test", name)
        return project.tests[name]

    # ── canvas mutations ────────────────────────────────────────────

    def add_atom(
        self, project_id: str, test_name: str, sig: str, x: float = 0.0, y: float = 0.0
    ) -> Atom:
        with self._lock(project_id):
            project = self.load_project(project_id)
            test = self._test(project, test_name)
            verdict = guidance.validate_atom_addition(test, project.schema, sig)
            if not verdict.allowed:
                raise GuidanceViolation(verdict)
            counter = test.nickname_counters.get(sig, 0)
            atom = Atom(
                id=uuid.uuid4().hex[:12],
                sig=sig,
                nickname=f"{sig}{counter}",
                x=x,
                y=y,
            )
            test.nickname_counters[sig] = counter + 1
            test.atoms.append(atom)
            self.save_project(project)
            return atom

    def remove_atom(
        self, project_id: str, test_name: str, atom_id: str
    ) -> list[Connection]:
        """Remove an atom; incident connections cascade, and predicate
        expectations whose arguments referenced it fall back to dontTest."""
        with self._lock(project_id):
            project = self.load_project(project_id)
            test = self._test(project, test_name)
            if test.atom_by_id(atom_id) is None:
                raise NotFound("atom", atom_id)
            removed = [c for c in test.connections if atom_id in c.atom_ids]
            test.connections = [
                c for c in test.connections if atom_id not in c.atom_ids
            ]
            test.atoms = [a for a in test.atoms if a.id != atom_id]
            for pred, pstate in list(test.predicate_states.items()):
                if atom_id in pstate.args:
                    test.predicate_states[pred] = PredicateState()
            self.save_project(project)
            return removed

    def update_atom(
        self,
        project_id: str,
        test_name: str,
        atom_id: str,
        x: float | None = None,
        y: float | None = None,
        subsets: tuple[str, ...] | None = None,
    ) -> Atom:
        with self._lock(project_id):
            project = self.load_project(project_id)
            test = self._test(project, test_name)
            atom = test.atom_by_id(atom_id)
            if atom is None:
                raise NotFound("atom", atom_id)
            if subsets is not None:
                verdict = guidance.validate_subset_markers(
                    test, project.schema, atom, tuple(subsets)
                )
                if not verdict.allowed:
                    raise GuidanceViolation(verdict)
                atom = Atom(
                    id=atom.id,
                    sig=atom.sig,
                    nickname=atom.nickname,
                    subsets=tuple(subsets),
                    x=atom.x,
                    y=atom.y,
                )
            if x is not None or y is not None:
                atom = move_atom(
                    atom,
                    atom.x if x is None else x,
                    atom.y if y is None else y,
                )
            test.replace_atom(atom)
            self.save_project(project)
            return atom

    def add_connection(
        self,
        project_id: str,
        test_name: str,
        relation: str,
        atom_ids: tuple[str, ...],
    ) -> Connection:
        with self._lock(project_id):
            project = self.load_project(project_id)
            test = self._test(project, test_name)
            verdict = guidance.validate_connection_addition(
                test, project.schema, relation, tuple(atom_ids)
            )
            if not verdict.allowed:
                raise GuidanceViolation(verdict)
            conn = Connection(relation=relation, atom_ids=tuple(atom_ids))
            test.connections.append(conn)
            self.save_project(project)
            return conn

    def remove_connection(
        self, project_id: str, test_name: str, index: int
    ) -> list[Connection]:
        """Delete the index-th connection (creation order).

        A connection always stands for a whole tuple, so deleting what the
        canvas renders as one segment of a higher-arity chain removes the
        entire tuple.  Returns everything removed.
        """
        with self._lock(project_id):
            project = self.load_project(project_id)
            test = self._test(project, test_name)
            if not 0 <= index < len(test.connections):
                raise NotFound("connection", str(index))
            removed = test.connections.pop(index)
            self.save_project(project)
            return [removed]

    def set_predicate_state(
        self,
        project_id: str,
        test_name: str,
        pred_name: str,
        state: str,
        args: tuple[str, ...] = (),
    ) -> PredicateState:
        with self._lock(project_id):
            project = self.load_project(project_id)
            test = self._test(project, test_name)
            schema = project.schema
            if pred_name not in schema.preds:
                raise NotFound("predicate", pred_name)
            if state not in PREDICATE_STATES:
                raise BadArgs(f"unknown predicate state {state!r}")
            if state == DONT_TEST:
                pstate = PredicateState()
            else:
                params = schema.preds[pred_name].params
                if len(args) != len(params):
                    raise BadArgs(
                        f"{pred_name} takes {len(params)} argument(s),"
                        f" got {len(args)}"
                    )
                for arg_id, (pname, psig) in zip(args, params):
                    atom = test.atom_by_id(arg_id)
                    if atom is None:
                        raise BadArgs(f"no atom {arg_id!r} on this canvas")
                    if not schema.is_subtype(atom.sig, psig) and psig not in atom.subsets:
                        raise BadArgs(
                            f"argument {pname} of {pred_name} needs a {psig},"
                            f" got {atom.nickname}"
                        )
                pstate = PredicateState(state=state, args=tuple(args))
            test.predicate_states[pred_name] = pstate
            self.save_project(project)
            return pstate

    def set_colors(self, project_id: str, colors: dict[str, str]) -> Project:
        with self._lock(project_id):
            project = self.load_project(project_id)
            project.color_assignments.update(colors)
            self.save_project(project)
            return project


# ── document mapping ────────────────────────────────────────────────


def _project_to_doc(project: Project) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "name": project.name,
        "modelSource": project.model_source,
        "colorAssignments": dict(project.color_assignments),
        "tests": {
            name: {
                "atoms": [
                    {
                        "id": a.id,
                        "sig": a.sig,
                        "nickname": a.nickname,
                        "subsets": list(a.subsets),
                        "x": a.x,
                        "y": a.y,
                    }
                    for a in test.atoms
                ],
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
            for name, test in project.tests.items()
        },
    }


def _project_from_doc(project_id: str, doc: dict) -> Project:
    version = doc.get("formatVersion")
    if version != FORMAT_VERSION:
        raise CorruptProject(f"unsupported format version {version!r}", version)
    try:
        schema = _schema_of(doc["modelSource"])
        tests = {}
        for name, tdoc in doc["tests"].items():
            tests[name] = TestCase(
                name=name,
                atoms=[
                    Atom(
                        id=a["id"],
                        sig=a["sig"],
                        nickname=a["nickname"],
                        subsets=tuple(a["subsets"]),
                        x=a["x"],
                        y=a["y"],
                    )
                    for a in tdoc["atoms"]
                ],
                connections=[
                    Connection(relation=c["relation"], atom_ids=tuple(c["atomIds"]))
                    for c in tdoc["connections"]
                ],
                predicate_states={
                    pred: PredicateState(state=ps["state"], args=tuple(ps["args"]))
                    for pred, ps in tdoc["predicateStates"].items()
                },
                nickname_counters=dict(tdoc["nicknameCounters"]),
            )
        return Project(
            id=project_id,
            name=doc["name"],
            model_source=doc["modelSource"],
            schema=schema,
            color_assignments=dict(doc["colorAssignments"]),
            tests=tests,
        )
    except (KeyError, TypeError) as exc:
        raise CorruptProject(f"malformed project document: {exc!r}")


def _schema_of(model_source: str) -> ModelSchema:
    try:
        return resolve(parse_model(model_source))
    except Exception as exc:
        raise CorruptProject(f"stored model no longer resolves: {exc}")
