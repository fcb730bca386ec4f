"""Name resolution, hierarchy queries, arity checking, and the JSON
projection of resolved models."""

from __future__ import annotations

import pytest

from conftest import (
    CV_FAULTY,
    HIERARCHY_MODEL,
    LISTS_FAULTY,
    LTS_FAULTY,
    TERNARY_MODEL,
    schema_for,
)
from crucible.ast_nodes import FieldRef, Quantified, SigRef, VarRef
from crucible.errors import (
    ArityError,
    CyclicHierarchy,
    DuplicateName,
    UnknownName,
    UnsupportedFeature,
)
from crucible.parser import parse_formula_text, parse_model
from crucible.schema import resolve, resolve_formula, schema_to_json


def test_lists_resolution_basics():
    schema = schema_for(LISTS_FAULTY)
    assert list(schema.sigs) == ["List", "Node"]
    assert schema.sigs["List"].mult == "one"
    header = schema.fields["header"]
    assert header.owner == "List"
    assert header.cols == ("List", "Node")
    assert header.mult == "lone"
    assert list(schema.preds) == ["acyclic"]
    assert len(schema.commands) == 1


def test_binary_field_defaults_to_one():
    schema = schema_for("sig S { f : S }")
    assert schema.fields["f"].mult == "one"


def test_decl_indices_follow_source_order():
    schema = schema_for(CV_FAULTY)
    assert [s.decl_index for s in schema.sigs.values()] == [0, 1, 2, 3, 4]
    assert [f.decl_index for f in schema.fields.values()] == [0, 1, 2, 3]


def test_concrete_sigs_skip_abstract_parents_and_subsets():
    assert schema_for(CV_FAULTY).concrete_sigs() == (
        "User",
        "Institution",
        "Id",
        "Work",
    )
    assert schema_for(LTS_FAULTY).concrete_sigs() == ("State", "Event")
    assert schema_for(LTS_FAULTY).subset_sigs() == ("Init",)


def test_childless_abstract_sig_counts_as_concrete():
    schema = schema_for("abstract sig Ghost {}\nsig A {}")
    assert schema.concrete_sigs() == ("Ghost", "A")


def test_hierarchy_queries():
    schema = schema_for(HIERARCHY_MODEL)
    assert schema.extends_children("Animal") == ("Dog", "Cat")
    assert schema.extends_ancestors("Dog") == ("Dog", "Animal")
    assert schema.is_subtype("Dog", "Animal")
    assert schema.is_subtype("Tame", "Animal")
    assert not schema.is_subtype("Animal", "Dog")
    assert not schema.is_subtype("Owner", "Animal")
    assert schema.concrete_descendants("Animal") == ("Dog", "Cat")


def test_ternary_field_keeps_arrow_mults():
    schema = schema_for(TERNARY_MODEL)
    r = schema.fields["r"]
    assert r.arity == 3
    assert r.mult is None
    assert r.arrow_mults == (("one", "lone"),)


# ── rejected models ─────────────────────────────────────────────────


@pytest.mark.parametrize(
    "source,error",
    [
        ("sig A {}\nsig A {}", DuplicateName),
        ("sig A { f : A }\nsig B { f : B }", DuplicateName),
        ("sig A { B : A }\nsig B {}", DuplicateName),
        ("pred p {}\npred p {}", DuplicateName),
        ("sig A extends Ghost {}", UnknownName),
        ("sig A { f : Ghost }", UnknownName),
        ("sig A in Ghost {}", UnknownName),
        ("pred p { some Ghost }", UnknownName),
        ("sig A {}\nrun ghost for 3", UnknownName),
        ("sig A extends B {}\nsig B extends A {}", CyclicHierarchy),
        ("sig A {}\nsig X in A { f : A }", UnsupportedFeature),
        ("sig A {}\nsig X in A {}\nsig B extends X {}", UnsupportedFeature),
    ],
)
def test_resolution_errors(source, error):
    with pytest.raises(error):
        resolve(parse_model(source))


@pytest.mark.parametrize(
    "body",
    [
        "some n : Node | some m : Node | no n.m",  # join of two unary exprs
        "Node = link",  # arity mismatch on compare
        "Node + link = link",  # mixed-arity union
        "some ^Node",  # closure needs a binary operand
        "all x : link | no x",  # quantifier domain must be unary
        "self_ref[link]",
    ],
)
def test_formula_arity_errors(body):
    source = (
        "sig Node { link : lone Node }\n"
        "pred self_ref [n : Node] { n in n.link }\n"
        "pred bad { " + body + " }"
    )
    with pytest.raises(ArityError):
        resolve(parse_model(source))


def test_pred_call_argument_count_checked():
    source = (
        "sig Node { link : lone Node }\n"
        "pred one_arg [n : Node] { some n }\n"
        "pred bad { one_arg[Node, Node] }"
    )
    with pytest.raises(ArityError):
        resolve(parse_model(source))


def test_forward_pred_references_resolve():
    source = (
        "sig Node {}\n"
        "pred caller { callee }\n"
        "pred callee { some Node }"
    )
    schema = resolve(parse_model(source))
    assert set(schema.preds) == {"caller", "callee"}


# ── formula resolution ──────────────────────────────────────────────


def test_names_resolve_to_typed_references():
    schema = schema_for(LISTS_FAULTY)
    f = resolve_formula(parse_formula_text("List.header in Node"), schema)
    assert isinstance(f.left.left, SigRef)
    assert isinstance(f.left.right, FieldRef)
    assert isinstance(f.right, SigRef)


def test_quantified_variable_shadows_and_unbinds():
    schema = schema_for(LISTS_FAULTY)
    f = resolve_formula(
        parse_formula_text("all n : Node | n in Node"), schema
    )
    assert isinstance(f, Quantified)
    assert isinstance(f.body.left, VarRef)
    with pytest.raises(UnknownName):
        resolve_formula(parse_formula_text("n in Node"), schema)


def test_resolution_is_idempotent_on_resolved_trees():
    schema = schema_for(LTS_FAULTY)
    once = resolve_formula(
        parse_formula_text("all s : State | lone s.trans"), schema
    )
    assert resolve_formula(once, schema) == once


# ── JSON projection ─────────────────────────────────────────────────


def test_schema_json_shape():
    doc = schema_to_json(schema_for(CV_FAULTY))
    assert set(doc) == {"sigs", "fields", "preds"}
    sigs = {s["name"]: s for s in doc["sigs"]}
    assert sigs["Source"]["abstract"] is True
    assert sigs["User"]["parentKind"] == "extends"
    assert sigs["User"]["parents"] == ["Source"]
    assert sigs["Id"]["mult"] == "any"
    fields = {f["name"]: f for f in doc["fields"]}
    assert fields["source"]["owner"] == "Work"
    assert fields["source"]["cols"] == ["Work", "Source"]
    assert fields["source"]["mult"] == "one"
    preds = {p["name"]: p for p in doc["preds"]}
    assert preds["inv1"]["params"] == []
    assert preds["inv1"]["assert"] is False


def test_schema_json_hints_higher_arity():
    doc = schema_to_json(schema_for(LTS_FAULTY))
    trans = doc["fields"][0]
    assert trans["cols"] == ["State", "Event", "State"]
    assert trans["mult"] is None
    assert trans["arrowMults"] == [[None, None]]


def test_schema_json_declares_params():
    source = "sig Node {}\npred p [a : Node, b : Node] { a = b }"
    doc = schema_to_json(resolve(parse_model(source)))
    assert doc["preds"][0]["params"] == [["a", "Node"], ["b", "Node"]]
