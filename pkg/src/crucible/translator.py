"""Render a test case as an executable command string.

The output shape is deliberately rigid so golden-file comparisons work
byte-for-byte: quantifier lines per populated concrete sig in declaration
order, one equality line per sig and field (two-space indented while any
quantifier scope is open), predicate literals last, closers on one line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .schema import ModelSchema
from .testcase import DONT_TEST, INVALID, Connection, TestCase, sig_members


@dataclass(frozen=True)
class CommandString:
    text: str
    predicate_suffixes: tuple[str, ...]


def render_tuple(connection: Connection, test: TestCase) -> str:
    nicks = []
    for atom_id in connection.atom_ids:
        atom = test.atom_by_id(atom_id)
        nicks.append(atom.nickname if atom else atom_id)
    return "->".join(nicks)


def predicate_literals(test: TestCase, schema: ModelSchema) -> list[str]:
    """Rendered literals for enabled predicates, in declaration order."""
    out = []
    for pred in schema.preds.values():
        pstate = test.predicate_states.get(pred.name)
        if pstate is None or pstate.state == DONT_TEST:
            continue
        literal = pred.name
        if pstate.args:
            nicks = []
            for atom_id in pstate.args:
                atom = test.atom_by_id(atom_id)
                nicks.append(atom.nickname if atom else atom_id)
            literal += "[" + ", ".join(nicks) + "]"
        if pstate.state == INVALID:
            literal = "!" + literal
        out.append(literal)
    return out


def generate_command_string(
    test: TestCase, schema: ModelSchema, include_predicates: bool = True
) -> CommandString:
    lines: list[str] = []
    depth = 0
    for sig_name in schema.concrete_sigs():
        atoms = test.atoms_of_sig(sig_name)
        if not atoms:
            continue
        nicks = ", ".join(a.nickname for a in atoms)
        lines.append(f"some disj {nicks} : {sig_name} {{")
        depth += 1

    indent = "  " if depth else ""

    def equality(name: str, parts: list[str]) -> str:
        if not parts:
            return f"{indent}no {name}"
        return f"{indent}{name} = " + " + ".join(parts)

    for decl in schema.sigs.values():
        if decl.is_subset:
            continue
        if decl.is_abstract and schema.extends_children(decl.name):
            continue
        members = sig_members(test, schema, decl.name)
        lines.append(equality(decl.name, [a.nickname for a in members]))
    for decl in schema.sigs.values():
        if not decl.is_subset:
            continue
        marked = [a for a in test.atoms if decl.name in a.subsets]
        lines.append(equality(decl.name, [a.nickname for a in marked]))
    for fdecl in schema.fields.values():
        tuples = [
            render_tuple(c, test)
            for c in test.connections
            if c.relation == fdecl.name
        ]
        lines.append(equality(fdecl.name, tuples))

    suffixes = tuple(predicate_literals(test, schema))
    if include_predicates:
        for literal in suffixes:
            lines.append(indent + literal)

    if depth:
        lines.append("}" * depth)
    return CommandString(text="\n".join(lines), predicate_suffixes=suffixes)


def aunit_test_file(test: TestCase, schema: ModelSchema) -> str:
    """Valuation/command pair in the keyword syntax of AUnit-extended Alloy."""
    body = generate_command_string(test, schema, include_predicates=False)
    literals = predicate_literals(test, schema)
    name = test.name
    conjuncts = " and ".join([*literals, name])
    val_lines = "\n".join("  " + line for line in body.text.split("\n"))
    return (
        f"val {name} {{\n{val_lines}\n}}\n"
        f"@Test {name}_cmd: run {{ {conjuncts} }}"
    )
