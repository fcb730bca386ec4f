"""Brute-force ground truth: enumerate every valuation up to a scope.

This is test support, not a production path.  It enumerates atom counts
per concrete sig, subset memberships, and relation tuple sets, in a fixed
canonical order, and reports whether any valuation satisfies the model's
structural constraints, its facts, and the given formula.

Multiplicity-aware generation keeps the enumeration honest but tractable:
families that could never pass the structural check (a second target under
`lone`, an empty image under `some`) are never generated, which prunes
without excluding any structurally valid valuation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

from .ast_nodes import Formula
from .errors import UniverseTooLarge
from .evaluator import Env, check_structural, eval_formula
from .schema import FieldDecl, ModelSchema
from .testcase import Valuation

UNIVERSE_LIMIT = 12


@dataclass(frozen=True)
class Scope:
    per_sig: dict[str, int] = dataclass_field(default_factory=dict)
    default: int = 3

    def bound(self, sig: str) -> int:
        return self.per_sig.get(sig, self.default)


def enumerate_satisfiable(
    schema: ModelSchema, formula: Formula, scope: Scope
) -> tuple[bool, Valuation | None]:
    """True plus the first witness if any in-scope valuation satisfies
    structure ∧ facts ∧ formula; (False, None) otherwise."""
    concrete = schema.concrete_sigs()
    bounds = [scope.bound(sig) for sig in concrete]
    if sum(bounds) > UNIVERSE_LIMIT:
        raise UniverseTooLarge(sum(bounds), UNIVERSE_LIMIT)

    count_choices = sorted(
        itertools.product(*(range(b + 1) for b in bounds)),
        key=lambda counts: (sum(counts), counts),
    )
    for counts in count_choices:
        atoms = {
            sig: tuple(f"{sig}${i}" for i in range(n))
            for sig, n in zip(concrete, counts)
        }
        if not _sig_mults_possible(schema, atoms):
            continue
        for valuation in _valuations(schema, atoms):
            if not all(d.holds for d in check_structural(valuation, schema)):
                continue
            env = Env(valuation, schema)
            if not all(eval_formula(fact, env) for fact in schema.facts):
                continue
            if eval_formula(formula, env):
                return True, valuation
    return False, None


def _members(schema: ModelSchema, atoms: dict[str, tuple[str, ...]], sig: str) -> tuple[str, ...]:
    """Extends-membership of sig under a per-concrete-sig atom assignment."""
    out = []
    for concrete_sig in schema.concrete_descendants(sig):
        out.extend(atoms.get(concrete_sig, ()))
    return tuple(out)


def _sig_mults_possible(schema: ModelSchema, atoms: dict[str, tuple[str, ...]]) -> bool:
    """Prune count assignments that already violate a sig multiplicity."""
    for decl in schema.sigs.values():
        if decl.is_subset or decl.mult == "any":
            continue
        n = len(_members(schema, atoms, decl.name))
        if decl.mult == "one" and n != 1:
            return False
        if decl.mult == "lone" and n > 1:
            return False
        if decl.mult == "some" and n == 0:
            return False
    return True


def _valuations(schema: ModelSchema, atoms: dict[str, tuple[str, ...]]):
    base_sets = {
        decl.name: frozenset(_members(schema, atoms, decl.name))
        for decl in schema.sigs.values()
        if not decl.is_subset
    }
    subset_names = schema.subset_sigs()
    subset_families = [
        _subset_family(schema, atoms, name) for name in subset_names
    ]
    for subset_choice in itertools.product(*subset_families):
        sig_sets = dict(base_sets)
        for name, chosen in zip(subset_names, subset_choice):
            sig_sets[name] = frozenset(chosen)
        field_names = list(schema.fields)
        families = [
            _tuple_family(schema.fields[name], sig_sets) for name in field_names
        ]
        for rel_choice in itertools.product(*families):
            yield Valuation(
                sig_sets=sig_sets,
                rel_tuples={
                    name: frozenset(tuples)
                    for name, tuples in zip(field_names, rel_choice)
                },
            )


def _subset_family(
    schema: ModelSchema, atoms: dict[str, tuple[str, ...]], name: str
):
    """Candidate member tuples for one subset sig, in bitmask order."""
    decl = schema.sig(name)
    base: list[str] = []
    for atom in _members(schema, atoms, decl.parents[0]):
        if all(
            atom in _members(schema, atoms, parent) for parent in decl.parents
        ):
            base.append(atom)
    out = []
    for mask in range(1 << len(base)):
        chosen = tuple(base[i] for i in range(len(base)) if mask >> i & 1)
        n = len(chosen)
        if decl.mult == "one" and n != 1:
            continue
        if decl.mult == "lone" and n > 1:
            continue
        if decl.mult == "some" and n == 0:
            continue
        out.append(chosen)
    return out


def _tuple_family(fdecl: FieldDecl, sig_sets: dict[str, frozenset[str]]):
    """All tuple sets for one field that could pass the structural check."""
    cols = [sorted(sig_sets.get(col, frozenset())) for col in fdecl.cols]
    if fdecl.arity == 2 and fdecl.mult in ("one", "lone", "some"):
        sources, targets = cols
        per_source = []
        for source in sources:
            options = _image_options(source, targets, fdecl.mult)
            per_source.append(options)
        out = []
        for combo in itertools.product(*per_source):
            tuples: list[tuple[str, str]] = []
            for image in combo:
                tuples.extend(image)
            out.append(tuple(tuples))
        return out
    # unconstrained: every subset of the full column product, bitmask order
    space = list(itertools.product(*cols))
    return [
        tuple(space[i] for i in range(len(space)) if mask >> i & 1)
        for mask in range(1 << len(space))
    ]


def _image_options(source: str, targets: list[str], mult: str):
    if mult == "one":
        return [((source, t),) for t in targets]
    if mult == "lone":
        return [()] + [((source, t),) for t in targets]
    # some: every nonempty subset of targets
    out = []
    for mask in range(1, 1 << len(targets)):
        out.append(
            tuple(
                (source, targets[i])
                for i in range(len(targets))
                if mask >> i & 1
            )
        )
    return out
