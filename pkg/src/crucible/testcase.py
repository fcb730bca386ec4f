"""Canvas-level domain types: projects, tests, atoms, connections, valuations.

A test case is the drawn scenario; derive_valuation turns it into the
assignment of atoms and tuples that evaluation and translation consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .schema import ModelSchema

DONT_TEST = "dontTest"
VALID = "valid"
INVALID = "invalid"
PREDICATE_STATES = (DONT_TEST, VALID, INVALID)


@dataclass(frozen=True)
class Atom:
    id: str
    sig: str
    nickname: str
    subsets: tuple[str, ...] = ()
    x: float = 0.0
    y: float = 0.0


@dataclass(frozen=True)
class Connection:
    relation: str
    atom_ids: tuple[str, ...]


@dataclass(frozen=True)
class PredicateState:
    state: str = DONT_TEST
    args: tuple[str, ...] = ()


@dataclass
class TestCase:
    name: str
    atoms: list[Atom] = field(default_factory=list)
    connections: list[Connection] = field(default_factory=list)
    predicate_states: dict[str, PredicateState] = field(default_factory=dict)
    nickname_counters: dict[str, int] = field(default_factory=dict)

    def atom_by_id(self, atom_id: str) -> Atom | None:
        for atom in self.atoms:
            if atom.id == atom_id:
                return atom
        return None

    def atoms_of_sig(self, sig: str) -> list[Atom]:
        return [a for a in self.atoms if a.sig == sig]

    def replace_atom(self, updated: Atom) -> None:
        for i, atom in enumerate(self.atoms):
            if atom.id == updated.id:
                self.atoms[i] = updated
                return
        raise KeyError(updated.id)


@dataclass
class Project:
    id: str
    name: str
    model_source: str
    schema: ModelSchema
    color_assignments: dict[str, str] = field(default_factory=dict)
    tests: dict[str, TestCase] = field(default_factory=dict)


@dataclass(frozen=True)
class Valuation:
    """Assignment to every sig set and relation of the model.

    sig_sets carries inherited membership: an atom belongs to its own sig,
    every `extends` ancestor, and every subset sig it is marked with.
    """

    sig_sets: dict[str, frozenset[str]]
    rel_tuples: dict[str, frozenset[tuple[str, ...]]]

    @property
    def universe(self) -> frozenset[str]:
        out: set[str] = set()
        for ids in self.sig_sets.values():
            out |= ids
        return frozenset(out)


def atom_member_of(schema: ModelSchema, atom: Atom, sig_name: str) -> bool:
    """Membership including extends ancestry and subset markers."""
    return sig_name in schema.extends_ancestors(atom.sig) or sig_name in atom.subsets


def sig_members(test: TestCase, schema: ModelSchema, sig_name: str) -> list[Atom]:
    """Atoms belonging to sig_name, in creation order."""
    return [a for a in test.atoms if atom_member_of(schema, a, sig_name)]


def derive_valuation(test: TestCase, schema: ModelSchema) -> Valuation:
    """Build the valuation a canvas denotes; absent sigs/fields map to empty."""
    sig_sets: dict[str, set[str]] = {name: set() for name in schema.sigs}
    for atom in test.atoms:
        for ancestor in schema.extends_ancestors(atom.sig):
            sig_sets[ancestor].add(atom.id)
        for marker in atom.subsets:
            sig_sets[marker].add(atom.id)
    rel_tuples: dict[str, set[tuple[str, ...]]] = {name: set() for name in schema.fields}
    for conn in test.connections:
        rel_tuples[conn.relation].add(conn.atom_ids)
    return Valuation(
        sig_sets={k: frozenset(v) for k, v in sig_sets.items()},
        rel_tuples={k: frozenset(v) for k, v in rel_tuples.items()},
    )


def move_atom(atom: Atom, x: float, y: float) -> Atom:
    return replace(atom, x=x, y=y)
