"""Shared fixtures: the case-study models, canvas builders, and a
guidance-respecting random editor used by the soundness and
differential suites."""

from __future__ import annotations

import random

import pytest

from crucible import parse_model, resolve
from crucible.guidance import (
    validate_atom_addition,
    validate_connection_addition,
    validate_subset_markers,
)
from crucible.schema import ModelSchema
from crucible.store import ProjectStore
from crucible.testcase import (
    INVALID,
    VALID,
    Atom,
    Connection,
    PredicateState,
    Project,
    TestCase,
    sig_members,
)

# ── fixture models ──────────────────────────────────────────────────

LISTS_FAULTY = """\
one sig List { header: lone Node }
sig Node { link: lone Node }
pred acyclic {
  all n : List.header.*link | n !in n.*link
}
run acyclic for 3
"""

# same model with the reflexive closure in the body tightened to ^
LISTS_FIXED = LISTS_FAULTY.replace("n !in n.*link", "n !in n.^link")

LTS_FAULTY = """\
sig State { trans : Event -> State }
sig Init in State {}
sig Event {}
pred inv3 {
  all s : State, e : Event | lone s.(e.trans)
}
"""

LTS_FIXED = LTS_FAULTY.replace("lone s.(e.trans)", "lone e.(s.trans)")

CV_FAULTY = """\
abstract sig Source {}
sig User extends Source {
  profile : set Work,
  visible : set Work
}
sig Institution extends Source {}
sig Id {}
sig Work { ids : some Id, source : one Source }
pred inv1 {
  User.visible in User.profile
}
"""

CV_FIXED = CV_FAULTY.replace(
    "User.visible in User.profile", "all u : User | u.visible in u.profile"
)

# smaller models for targeted structural coverage
TERNARY_MODEL = """\
sig A { r : B one -> lone C }
sig B {}
sig C {}
"""

HIERARCHY_MODEL = """\
abstract sig Animal { friend : set Animal }
sig Dog extends Animal {}
sig Cat extends Animal {}
one sig Owner { pet : lone Dog }
sig Tame in Animal {}
"""

PARAM_PRED_MODEL = """\
sig Node { link : lone Node }
pred self_loop [n : Node] {
  n in n.link
}
"""


def schema_for(source: str) -> ModelSchema:
    return resolve(parse_model(source))


def make_project(source: str, **tests: TestCase) -> Project:
    """Wrap in-memory tests in a Project without touching a store."""
    return Project(
        id="p0",
        name="fixture",
        model_source=source,
        schema=schema_for(source),
        tests=dict(tests),
    )


@pytest.fixture
def store(tmp_path) -> ProjectStore:
    return ProjectStore(tmp_path / "store")


# ── in-memory canvas builder ────────────────────────────────────────


class CanvasBuilder:
    """Drives a TestCase through the same guidance gates the store
    uses, without the persistence round-trips.  Blocked edits return
    None/False instead of raising so random editing can just shrug."""

    def __init__(self, schema: ModelSchema, name: str = "canvas"):
        self.schema = schema
        self.test = TestCase(name=name)
        self._serial = 0

    def add_atom(self, sig: str) -> Atom | None:
        if not validate_atom_addition(self.test, self.schema, sig).allowed:
            return None
        counter = self.test.nickname_counters.get(sig, 0)
        self._serial += 1
        atom = Atom(id=f"a{self._serial:03d}", sig=sig, nickname=f"{sig}{counter}")
        self.test.nickname_counters[sig] = counter + 1
        self.test.atoms.append(atom)
        return atom

    def connect(self, relation: str, *atom_ids: str) -> bool:
        verdict = validate_connection_addition(
            self.test, self.schema, relation, tuple(atom_ids)
        )
        if not verdict.allowed:
            return False
        self.test.connections.append(Connection(relation, tuple(atom_ids)))
        return True

    def mark(self, atom_id: str, *subsets: str) -> bool:
        atom = self.test.atom_by_id(atom_id)
        assert atom is not None
        verdict = validate_subset_markers(
            self.test, self.schema, atom, tuple(subsets)
        )
        if not verdict.allowed:
            return False
        self.test.replace_atom(
            Atom(atom.id, atom.sig, atom.nickname, tuple(subsets), atom.x, atom.y)
        )
        return True

    def remove_atom(self, atom_id: str) -> None:
        # mirror the store: cascade connections, reset stale pred args
        self.test.connections = [
            c for c in self.test.connections if atom_id not in c.atom_ids
        ]
        self.test.atoms = [a for a in self.test.atoms if a.id != atom_id]
        for pred, pstate in list(self.test.predicate_states.items()):
            if atom_id in pstate.args:
                del self.test.predicate_states[pred]

    def remove_connection(self, index: int) -> None:
        del self.test.connections[index]


# ── canonical case-study canvases (in memory) ───────────────────────


def lists_canvas(schema: ModelSchema) -> TestCase:
    """List0 -header-> Node0 -link-> Node1, acyclic expected to hold."""
    b = CanvasBuilder(schema, "twoNode")
    l0 = b.add_atom("List")
    n0 = b.add_atom("Node")
    n1 = b.add_atom("Node")
    assert b.connect("header", l0.id, n0.id)
    assert b.connect("link", n0.id, n1.id)
    b.test.predicate_states["acyclic"] = PredicateState(VALID)
    return b.test


def lts_canvas(schema: ModelSchema) -> TestCase:
    """The nondeterministic 2-state/3-event valuation, inv3 unexpected."""
    b = CanvasBuilder(schema, "nondet")
    s0 = b.add_atom("State")
    s1 = b.add_atom("State")
    e0 = b.add_atom("Event")
    b.add_atom("Event")
    b.add_atom("Event")
    assert b.connect("trans", s1.id, e0.id, s0.id)
    assert b.connect("trans", s1.id, e0.id, s1.id)
    assert b.mark(s1.id, "Init")
    b.test.predicate_states["inv3"] = PredicateState(INVALID)
    return b.test


def cv_canvas(schema: ModelSchema) -> TestCase:
    """The visibility-leak valuation: User0 sees all of User1's works."""
    b = CanvasBuilder(schema, "leak")
    u0 = b.add_atom("User")
    u1 = b.add_atom("User")
    works = [b.add_atom("Work") for _ in range(3)]
    i0 = b.add_atom("Id")
    for w in works:
        assert b.connect("profile", u1.id, w.id)
        assert b.connect("visible", u0.id, w.id)
        assert b.connect("ids", w.id, i0.id)
    assert b.connect("source", works[0].id, u1.id)
    assert b.connect("source", works[1].id, u1.id)
    assert b.connect("source", works[2].id, u0.id)
    b.test.predicate_states["inv1"] = PredicateState(INVALID)
    return b.test


# ── store-level scenario builders ───────────────────────────────────


def populate_lists(
    store: ProjectStore,
    source: str = LISTS_FAULTY,
    project_name: str = "lists",
    test_name: str = "twoNode",
) -> Project:
    project = store.create_project(project_name, source)
    store.create_test(project.id, test_name)
    l0 = store.add_atom(project.id, test_name, "List")
    n0 = store.add_atom(project.id, test_name, "Node")
    n1 = store.add_atom(project.id, test_name, "Node")
    store.add_connection(project.id, test_name, "header", (l0.id, n0.id))
    store.add_connection(project.id, test_name, "link", (n0.id, n1.id))
    store.set_predicate_state(project.id, test_name, "acyclic", VALID)
    return store.load_project(project.id)


def populate_lts(
    store: ProjectStore,
    source: str = LTS_FAULTY,
    project_name: str = "lts",
    test_name: str = "nondet",
) -> Project:
    project = store.create_project(project_name, source)
    store.create_test(project.id, test_name)
    s0 = store.add_atom(project.id, test_name, "State")
    s1 = store.add_atom(project.id, test_name, "State")
    e0 = store.add_atom(project.id, test_name, "Event")
    store.add_atom(project.id, test_name, "Event")
    store.add_atom(project.id, test_name, "Event")
    store.add_connection(project.id, test_name, "trans", (s1.id, e0.id, s0.id))
    store.add_connection(project.id, test_name, "trans", (s1.id, e0.id, s1.id))
    store.update_atom(project.id, test_name, s1.id, subsets=("Init",))
    store.set_predicate_state(project.id, test_name, "inv3", INVALID)
    return store.load_project(project.id)


def populate_lts_maximal(
    store: ProjectStore,
    source: str = LTS_FAULTY,
    project_name: str = "lts-max",
    test_name: str = "maximal",
) -> Project:
    """3 states, 3 events, all 27 transition tuples."""
    project = store.create_project(project_name, source)
    store.create_test(project.id, test_name)
    states = [store.add_atom(project.id, test_name, "State") for _ in range(3)]
    events = [store.add_atom(project.id, test_name, "Event") for _ in range(3)]
    for s in states:
        for e in events:
            for s2 in states:
                store.add_connection(
                    project.id, test_name, "trans", (s.id, e.id, s2.id)
                )
    store.set_predicate_state(project.id, test_name, "inv3", INVALID)
    return store.load_project(project.id)


def populate_cv(
    store: ProjectStore,
    source: str = CV_FAULTY,
    project_name: str = "cv",
    test_name: str = "leak",
) -> Project:
    project = store.create_project(project_name, source)
    store.create_test(project.id, test_name)
    u0 = store.add_atom(project.id, test_name, "User")
    u1 = store.add_atom(project.id, test_name, "User")
    works = [store.add_atom(project.id, test_name, "Work") for _ in range(3)]
    i0 = store.add_atom(project.id, test_name, "Id")
    for w in works:
        store.add_connection(project.id, test_name, "profile", (u1.id, w.id))
        store.add_connection(project.id, test_name, "visible", (u0.id, w.id))
        store.add_connection(project.id, test_name, "ids", (w.id, i0.id))
    store.add_connection(project.id, test_name, "source", (works[0].id, u1.id))
    store.add_connection(project.id, test_name, "source", (works[1].id, u1.id))
    store.add_connection(project.id, test_name, "source", (works[2].id, u0.id))
    store.set_predicate_state(project.id, test_name, "inv1", INVALID)
    return store.load_project(project.id)


# ── random guidance-valid editing ───────────────────────────────────

# atom caps keep the brute-force sweeps tractable; all are <= 3
RANDOM_CAPS = {
    "lists": {"List": 1, "Node": 3},
    "lts": {"State": 2, "Event": 3},
    "cv": {"User": 2, "Institution": 1, "Id": 1, "Work": 2},
    "ternary": {"A": 2, "B": 2, "C": 2},
    "hierarchy": {"Dog": 1, "Cat": 1, "Owner": 1},
}

RANDOM_SOURCES = {
    "lists": LISTS_FAULTY,
    "lts": LTS_FAULTY,
    "cv": CV_FAULTY,
    "ternary": TERNARY_MODEL,
    "hierarchy": HIERARCHY_MODEL,
}


def random_edits(
    rng: random.Random,
    builder: CanvasBuilder,
    caps: dict[str, int],
    ops: int,
) -> None:
    """Apply a random sequence of canvas edits, all mediated by the
    guidance checks (blocked attempts are silently dropped)."""
    schema = builder.schema
    concrete = schema.concrete_sigs()
    fields = list(schema.fields.values())
    subsets = schema.subset_sigs()
    for _ in range(ops):
        roll = rng.random()
        test = builder.test
        if roll < 0.45:
            sig = rng.choice(concrete)
            if len(test.atoms_of_sig(sig)) < caps.get(sig, 3):
                builder.add_atom(sig)
        elif roll < 0.80 and fields and test.atoms:
            fdecl = rng.choice(fields)
            ids = []
            for col in fdecl.cols:
                members = sig_members(test, schema, col)
                if not members:
                    break
                ids.append(rng.choice(members).id)
            else:
                builder.connect(fdecl.name, *ids)
        elif roll < 0.90 and subsets and test.atoms:
            atom = rng.choice(test.atoms)
            marker = rng.choice(subsets)
            current = set(atom.subsets)
            current.symmetric_difference_update({marker})
            builder.mark(atom.id, *sorted(current))
        elif roll < 0.95 and test.connections:
            builder.remove_connection(rng.randrange(len(test.connections)))
        elif test.atoms:
            builder.remove_atom(rng.choice(test.atoms).id)


def random_canvas(
    rng: random.Random, model_key: str, ops: int | None = None
) -> tuple[CanvasBuilder, ModelSchema]:
    schema = schema_for(RANDOM_SOURCES[model_key])
    builder = CanvasBuilder(schema)
    random_edits(rng, builder, RANDOM_CAPS[model_key], ops or rng.randint(4, 24))
    return builder, schema
