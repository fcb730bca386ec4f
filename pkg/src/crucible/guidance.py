"""Edit-time canvas validation and pre-run completeness reporting.

Upper-bound violations (sig multiplicities, binary field multiplicities,
duplicates, type mismatches) are blocked at edit time.  Lower bounds are
legitimately unmet while a canvas is under construction, so they surface
in a PreRunReport instead; higher-arity arrow multiplicities are likewise
checked only before a run, never during canvas edits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ArityMismatch, BadArgs, NotFound, UnknownName
from .schema import FieldDecl, ModelSchema
from .testcase import Atom, TestCase, atom_member_of, sig_members

_CARD_CHECKS = {
    "set": lambda n: True,
    "some": lambda n: n >= 1,
    "lone": lambda n: n <= 1,
    "one": lambda n: n == 1,
    None: lambda n: True,
}


@dataclass(frozen=True)
class GuidanceVerdict:
    allowed: bool
    rule: str | None = None
    message: str = ""
    culprit: str | None = None


ALLOWED = GuidanceVerdict(True)


def _blocked(rule: str, message: str, culprit: str) -> GuidanceVerdict:
    return GuidanceVerdict(False, rule, message, culprit)


@dataclass(frozen=True)
class Violation:
    kind: str  # lowerBound | higherArityMult
    subject: str
    detail: str


@dataclass(frozen=True)
class PreRunReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


# ── atom placement ──────────────────────────────────────────────────


def validate_atom_addition(
    test: TestCase, schema: ModelSchema, sig: str
) -> GuidanceVerdict:
    decl = schema.sig(sig)
    if decl.is_subset:
        return _blocked(
            "subsetSig",
            f"{sig} is a subset signature; mark an existing atom instead",
            sig,
        )
    if decl.is_abstract and schema.extends_children(sig):
        return _blocked(
            "abstract",
            f"{sig} is abstract; add an atom of one of its extending signatures",
            sig,
        )
    # an atom counts toward every extends ancestor, so caps apply up the chain
    for ancestor in schema.extends_ancestors(sig):
        anc_decl = schema.sig(ancestor)
        if anc_decl.mult in ("one", "lone") and sig_members(test, schema, ancestor):
            return _blocked(
                "sigUpperBound",
                f"{anc_decl.mult} sig {ancestor} already has an atom",
                ancestor,
            )
    return ALLOWED


def validate_subset_markers(
    test: TestCase, schema: ModelSchema, atom: Atom, subsets: tuple[str, ...]
) -> GuidanceVerdict:
    """Check a proposed full marker list for one atom."""
    for marker in subsets:
        decl = schema.sig(marker)
        if not decl.is_subset:
            return _blocked(
                "subsetMarker", f"{marker} is not a subset signature", marker
            )
        for parent in decl.parents:
            if not schema.is_subtype(atom.sig, parent):
                return _blocked(
                    "subsetMarker",
                    f"{atom.nickname} is not a {parent}, so it cannot be in {marker}",
                    marker,
                )
        if decl.mult in ("one", "lone"):
            others = [
                a
                for a in test.atoms
                if a.id != atom.id and marker in a.subsets
            ]
            if others:
                return _blocked(
                    "sigUpperBound",
                    f"{decl.mult} sig {marker} already has a member",
                    marker,
                )
    return ALLOWED


# ── connections ─────────────────────────────────────────────────────


def _field(schema: ModelSchema, relation: str) -> FieldDecl:
    try:
        return schema.fields[relation]
    except KeyError:
        raise UnknownName(relation) from None


def validate_connection_addition(
    test: TestCase, schema: ModelSchema, relation: str, atom_ids: tuple[str, ...]
) -> GuidanceVerdict:
    decl = _field(schema, relation)
    if len(atom_ids) != decl.arity:
        raise ArityMismatch(relation, decl.arity, len(atom_ids))
    atoms = []
    for atom_id in atom_ids:
        atom = test.atom_by_id(atom_id)
        if atom is None:
            raise NotFound("atom", atom_id)
        atoms.append(atom)
    for col, atom in zip(decl.cols, atoms):
        if not atom_member_of(schema, atom, col):
            return _blocked(
                "typeMismatch",
                f"{atom.nickname} is not a {col}, which {relation} requires here",
                relation,
            )
    tup = tuple(atom_ids)
    if any(c.relation == relation and c.atom_ids == tup for c in test.connections):
        return _blocked(
            "duplicate", f"{relation} already contains this tuple", relation
        )
    if decl.arity == 2 and decl.mult in ("lone", "one"):
        source = atom_ids[0]
        if any(
            c.relation == relation and c.atom_ids[0] == source
            for c in test.connections
        ):
            return _blocked(
                "relUpperBound",
                f"{decl.mult} field {relation} already maps {atoms[0].nickname}",
                relation,
            )
    return ALLOWED


def valid_connection_targets(
    test: TestCase,
    schema: ModelSchema,
    relation: str,
    prefix_atom_ids: tuple[str, ...],
) -> list[str]:
    """Atom ids that may fill the next column, in creation order."""
    decl = _field(schema, relation)
    if len(prefix_atom_ids) >= decl.arity:
        raise BadArgs(f"prefix already has {decl.arity} atoms")
    prefix_atoms = []
    for atom_id in prefix_atom_ids:
        atom = test.atom_by_id(atom_id)
        if atom is None:
            raise NotFound("atom", atom_id)
        prefix_atoms.append(atom)
    for col, atom in zip(decl.cols, prefix_atoms):
        if not atom_member_of(schema, atom, col):
            raise BadArgs(f"prefix atom {atom.nickname} is not a {col}")
    next_col = decl.cols[len(prefix_atom_ids)]
    candidates = sig_members(test, schema, next_col)
    completes_binary = decl.arity == 2 and len(prefix_atom_ids) == 1
    if not completes_binary:
        return [a.id for a in candidates]
    out = []
    for atom in candidates:
        verdict = validate_connection_addition(
            test, schema, relation, (prefix_atom_ids[0], atom.id)
        )
        if verdict.allowed:
            out.append(atom.id)
    return out


# ── pre-run completeness ────────────────────────────────────────────


def pre_run_check(test: TestCase, schema: ModelSchema) -> PreRunReport:
    violations: list[Violation] = []

    for decl in schema.sigs.values():
        if decl.mult not in ("one", "some"):
            continue
        if not sig_members(test, schema, decl.name):
            violations.append(
                Violation(
                    "lowerBound",
                    decl.name,
                    f"{decl.mult} sig {decl.name} has no atoms",
                )
            )

    for fdecl in schema.fields.values():
        if fdecl.arity == 2 and fdecl.mult in ("one", "some"):
            for atom in sig_members(test, schema, fdecl.cols[0]):
                has_tuple = any(
                    c.relation == fdecl.name and c.atom_ids[0] == atom.id
                    for c in test.connections
                )
                if not has_tuple:
                    violations.append(
                        Violation(
                            "lowerBound",
                            fdecl.name,
                            f"{fdecl.mult} field {fdecl.name} has no tuple"
                            f" for {atom.nickname}",
                        )
                    )
        elif fdecl.arity >= 3 and any(
            m is not None for pair in fdecl.arrow_mults for m in pair
        ):
            tuples = [
                c.atom_ids for c in test.connections if c.relation == fdecl.name
            ]
            members = [
                [a.id for a in sig_members(test, schema, col)] for col in fdecl.cols
            ]
            violations.extend(
                check_arrow_mults(
                    fdecl.name,
                    tuples,
                    # the owner arrow carries no declared mults
                    ((None, None),) + fdecl.arrow_mults,
                    members,
                )
            )

    return PreRunReport(tuple(violations))


def check_arrow_mults(
    name: str,
    tuples: list[tuple[str, ...]],
    arrow_mults: tuple[tuple[str | None, str | None], ...],
    members: list[list[str]],
) -> list[Violation]:
    """Arrow types associate to the right: the first arrow is outermost.

    For `A m -> n REST`, the right mult n bounds each A atom's image over
    REST tuples, the left mult m bounds the sources of each type-possible
    REST tuple, and the image of each A atom must recursively satisfy the
    remaining arrows.
    """
    left_mult, right_mult = arrow_mults[0]
    violations: list[Violation] = []
    for source in members[0]:
        image = [t[1:] for t in tuples if t[0] == source]
        if not _CARD_CHECKS[right_mult](len(image)):
            violations.append(
                Violation(
                    "higherArityMult",
                    name,
                    f"{source} maps to {len(image)} tuples,"
                    f" violating ->{right_mult}",
                )
            )
        if len(arrow_mults) > 1:
            violations.extend(
                check_arrow_mults(name, image, arrow_mults[1:], members[1:])
            )
    if left_mult is not None and left_mult != "set":
        for rest in product(*members[1:]):
            sources = [t[0] for t in tuples if t[1:] == tuple(rest)]
            if not _CARD_CHECKS[left_mult](len(sources)):
                violations.append(
                    Violation(
                        "higherArityMult",
                        name,
                        f"{'->'.join(rest)} has {len(sources)} sources,"
                        f" violating {left_mult}->",
                    )
                )
    return violations
