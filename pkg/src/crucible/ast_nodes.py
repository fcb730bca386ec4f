"""AST node types for the supported Alloy subset, plus a canonical printer.

Spans never participate in equality: two nodes are equal iff they are
structurally identical, which is what the parse/print round-trip tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .source import DUMMY_SPAN, Span


def _span_field():
    return field(default=DUMMY_SPAN, compare=False, repr=False)


# ── Relational expressions ──────────────────────────────────────────────


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Name(Expr):
    """Unresolved reference; resolution rewrites it to Sig/Field/VarRef."""

    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class SigRef(Expr):
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class FieldRef(Expr):
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class VarRef(Expr):
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class Univ(Expr):
    span: Span = _span_field()


@dataclass(frozen=True)
class Iden(Expr):
    span: Span = _span_field()


@dataclass(frozen=True)
class NoneSet(Expr):
    span: Span = _span_field()


@dataclass(frozen=True)
class Transpose(Expr):
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Closure(Expr):
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class ReflexiveClosure(Expr):
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Join(Expr):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Union(Expr):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Difference(Expr):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Intersection(Expr):
    left: Expr
    right: Expr
    span: Span = _span_field()


# ── First-order formulas ────────────────────────────────────────────────


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Subset(Formula):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Equal(Formula):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class NotEqual(Formula):
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class MultFormula(Formula):
    """Cardinality test on an expression: kind in {no, some, lone, one}."""

    kind: str
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Quantified(Formula):
    """One declaration group; groups of a source quantifier nest left-to-right.

    All variables of a node share the disj flag: bindings must be pairwise
    distinct atoms when it is set.
    """

    kind: str  # all | some | no | lone | one
    disj: bool
    vars: tuple[tuple[str, Expr], ...]
    body: Formula
    span: Span = _span_field()


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula
    span: Span = _span_field()


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    span: Span = _span_field()


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    span: Span = _span_field()


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    orelse: Formula | None = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula
    span: Span = _span_field()


@dataclass(frozen=True)
class PredCall(Formula):
    name: str
    args: tuple[Expr, ...] = ()
    span: Span = _span_field()


@dataclass(frozen=True)
class Block(Formula):
    formulas: tuple[Formula, ...]
    span: Span = _span_field()


# ── Declarations ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class FieldDeclNode:
    """Field as written: declared columns exclude the owning sig.

    mult is the binary multiplicity keyword (None when omitted; the resolver
    applies the `one` default).  arrow_mults holds one (left, right) pair per
    arrow for multi-column types, entries None when unannotated.
    """

    name: str
    cols: tuple[str, ...]
    mult: str | None = None
    arrow_mults: tuple[tuple[str | None, str | None], ...] = ()
    span: Span = _span_field()


@dataclass(frozen=True)
class SigDeclNode:
    name: str
    mult: str = "any"  # one | lone | some | any
    is_abstract: bool = False
    parent_kind: str = "top"  # top | extends | in
    parents: tuple[str, ...] = ()
    fields: tuple[FieldDeclNode, ...] = ()
    span: Span = _span_field()


@dataclass(frozen=True)
class PredDeclNode:
    name: str
    params: tuple[tuple[str, str], ...]
    body: Formula
    is_assert: bool = False
    span: Span = _span_field()


@dataclass(frozen=True)
class FactDeclNode:
    body: Formula
    name: str | None = None
    span: Span = _span_field()


@dataclass(frozen=True)
class CommandDeclNode:
    """`run`/`check` command, parsed and retained but never executed."""

    kind: str  # run | check
    target: str | Formula
    scope: int | None = None
    span: Span = _span_field()


Declaration = SigDeclNode | PredDeclNode | FactDeclNode | CommandDeclNode


@dataclass(frozen=True)
class SourceModel:
    text: str
    declarations: tuple[Declaration, ...]


# ── Canonical textual form ──────────────────────────────────────────────

# Expression precedence, loosest to tightest; printer inserts parentheses
# whenever a child binds looser than its context requires.
_P_UNION = 1       # + -
_P_INTERSECT = 2   # &
_P_ARROW = 3       # ->
_P_JOIN = 4        # .
_P_UNARY = 5       # ~ ^ *
_P_ATOM = 6

_F_OR = 1
_F_IFF = 2
_F_IMPLIES = 3
_F_AND = 4
_F_NOT = 5
_F_ATOM = 6


def expr_to_text(expr: Expr, at: int = 0) -> str:
    text, prec = _expr_text(expr)
    if prec < at:
        return f"({text})"
    return text


def _expr_text(expr: Expr) -> tuple[str, int]:
    if isinstance(expr, (Name, SigRef, FieldRef, VarRef)):
        return expr.name, _P_ATOM
    if isinstance(expr, Univ):
        return "univ", _P_ATOM
    if isinstance(expr, Iden):
        return "iden", _P_ATOM
    if isinstance(expr, NoneSet):
        return "none", _P_ATOM
    if isinstance(expr, Transpose):
        return "~" + expr_to_text(expr.expr, _P_UNARY), _P_UNARY
    if isinstance(expr, Closure):
        return "^" + expr_to_text(expr.expr, _P_UNARY), _P_UNARY
    if isinstance(expr, ReflexiveClosure):
        return "*" + expr_to_text(expr.expr, _P_UNARY), _P_UNARY
    if isinstance(expr, Join):
        l = expr_to_text(expr.left, _P_JOIN)
        r = expr_to_text(expr.right, _P_JOIN + 1)
        return f"{l}.{r}", _P_JOIN
    if isinstance(expr, Product):
        l = expr_to_text(expr.left, _P_ARROW)
        r = expr_to_text(expr.right, _P_ARROW + 1)
        return f"{l}->{r}", _P_ARROW
    if isinstance(expr, Intersection):
        l = expr_to_text(expr.left, _P_INTERSECT)
        r = expr_to_text(expr.right, _P_INTERSECT + 1)
        return f"{l} & {r}", _P_INTERSECT
    if isinstance(expr, Union):
        l = expr_to_text(expr.left, _P_UNION)
        r = expr_to_text(expr.right, _P_UNION + 1)
        return f"{l} + {r}", _P_UNION
    if isinstance(expr, Difference):
        l = expr_to_text(expr.left, _P_UNION)
        r = expr_to_text(expr.right, _P_UNION + 1)
        return f"{l} - {r}", _P_UNION
    raise TypeError(f"not an expression node: {expr!r}")


def formula_to_text(formula: Formula, at: int = 0) -> str:
    text, prec = _formula_text(formula)
    if prec < at:
        return f"({text})"
    return text


def _formula_text(formula: Formula) -> tuple[str, int]:
    if isinstance(formula, Subset):
        return (
            f"{expr_to_text(formula.left)} in {expr_to_text(formula.right)}",
            _F_ATOM,
        )
    if isinstance(formula, Equal):
        return (
            f"{expr_to_text(formula.left)} = {expr_to_text(formula.right)}",
            _F_ATOM,
        )
    if isinstance(formula, NotEqual):
        return (
            f"{expr_to_text(formula.left)} != {expr_to_text(formula.right)}",
            _F_ATOM,
        )
    if isinstance(formula, MultFormula):
        return f"{formula.kind} {expr_to_text(formula.expr, _P_UNION)}", _F_ATOM
    if isinstance(formula, Not):
        # !in sugar keeps the common membership-exclusion form readable
        if isinstance(formula.operand, Subset):
            sub = formula.operand
            return (
                f"{expr_to_text(sub.left)} !in {expr_to_text(sub.right)}",
                _F_ATOM,
            )
        return "!" + formula_to_text(formula.operand, _F_NOT), _F_NOT
    if isinstance(formula, And):
        l = formula_to_text(formula.left, _F_AND)
        r = formula_to_text(formula.right, _F_AND + 1)
        return f"{l} && {r}", _F_AND
    if isinstance(formula, Or):
        l = formula_to_text(formula.left, _F_OR)
        r = formula_to_text(formula.right, _F_OR + 1)
        return f"{l} || {r}", _F_OR
    if isinstance(formula, Implies):
        l = formula_to_text(formula.left, _F_IMPLIES + 1)
        if formula.orelse is not None:
            # an else-less implies in the then-branch would capture our else
            bare = isinstance(formula.right, Implies) and formula.right.orelse is None
            r = formula_to_text(formula.right, _F_IMPLIES + 1 if bare else _F_IMPLIES)
            e = formula_to_text(formula.orelse, _F_IMPLIES)
            return f"{l} => {r} else {e}", _F_IMPLIES
        r = formula_to_text(formula.right, _F_IMPLIES)
        return f"{l} => {r}", _F_IMPLIES
    if isinstance(formula, Iff):
        l = formula_to_text(formula.left, _F_IFF)
        r = formula_to_text(formula.right, _F_IFF + 1)
        return f"{l} <=> {r}", _F_IFF
    if isinstance(formula, Quantified):
        doms = [expr_to_text(dom) for _, dom in formula.vars]
        if len(set(doms)) == 1:
            names = ", ".join(name for name, _ in formula.vars)
            decls = f"{names} : {doms[0]}"
        else:
            decls = ", ".join(
                f"{name} : {dom}" for (name, _), dom in zip(formula.vars, doms)
            )
        head = formula.kind + (" disj " if formula.disj else " ") + decls
        if isinstance(formula.body, Block):
            body, _ = _formula_text(formula.body)
            return f"{head} {body}", _F_ATOM
        return f"{head} | {formula_to_text(formula.body)}", 0
    if isinstance(formula, PredCall):
        if formula.args:
            args = ", ".join(expr_to_text(a) for a in formula.args)
            return f"{formula.name}[{args}]", _F_ATOM
        return formula.name, _F_ATOM
    if isinstance(formula, Block):
        inner = " ".join(formula_to_text(f) for f in formula.formulas)
        return "{ " + inner + " }" if inner else "{ }", _F_ATOM
    raise TypeError(f"not a formula node: {formula!r}")
