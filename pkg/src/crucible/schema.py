"""Name resolution: turn a parsed model into a queryable schema.

The schema owns the signature hierarchy, field signatures (arity, column
types, multiplicities) and predicate declarations, all in declaration
order.  Formula bodies come out with every bare name replaced by a
SigRef/FieldRef/VarRef and every expression arity-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast_nodes import (
    And,
    Block,
    Closure,
    CommandDeclNode,
    Difference,
    Equal,
    Expr,
    FactDeclNode,
    FieldRef,
    Formula,
    Iden,
    Iff,
    Implies,
    Intersection,
    Join,
    MultFormula,
    Name,
    NoneSet,
    Not,
    NotEqual,
    Or,
    PredCall,
    PredDeclNode,
    Product,
    Quantified,
    ReflexiveClosure,
    SigDeclNode,
    SigRef,
    SourceModel,
    Subset,
    Transpose,
    Union,
    Univ,
    VarRef,
)
from .errors import (
    ArityError,
    CyclicHierarchy,
    DuplicateName,
    UnknownName,
    UnsupportedFeature,
)


@dataclass(frozen=True)
class SigDecl:
    name: str
    mult: str  # one | lone | some | any
    is_abstract: bool
    parent_kind: str  # top | extends | in
    parents: tuple[str, ...]
    decl_index: int

    @property
    def is_subset(self) -> bool:
        return self.parent_kind == "in"


@dataclass(frozen=True)
class FieldDecl:
    name: str
    owner: str
    cols: tuple[str, ...]  # full column types, owner first
    mult: str | None  # binary fields only; None for arity >= 3
    arrow_mults: tuple[tuple[str | None, str | None], ...]
    decl_index: int

    @property
    def arity(self) -> int:
        return len(self.cols)


@dataclass(frozen=True)
class PredDecl:
    name: str
    params: tuple[tuple[str, str], ...]  # (name, sig)
    body: Formula
    is_assert: bool
    decl_index: int


@dataclass
class ModelSchema:
    source: SourceModel
    sigs: dict[str, SigDecl]
    fields: dict[str, FieldDecl]
    preds: dict[str, PredDecl]
    facts: tuple[Formula, ...]
    commands: tuple[CommandDeclNode, ...]
    _children: dict[str, tuple[str, ...]] = field(default_factory=dict, repr=False)

    # ── hierarchy queries ───────────────────────────────────────────

    def sig(self, name: str) -> SigDecl:
        try:
            return self.sigs[name]
        except KeyError:
            raise UnknownName(name) from None

    def extends_children(self, name: str) -> tuple[str, ...]:
        self.sig(name)
        return self._children.get(name, ())

    def is_subtype(self, sub: str, sup: str) -> bool:
        """True iff sub reaches sup upward via extends or `in` edges."""
        self.sig(sup)
        seen: set[str] = set()
        frontier = [sub]
        while frontier:
            cur = frontier.pop()
            if cur == sup:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            frontier.extend(self.sig(cur).parents)
        return False

    def extends_ancestors(self, name: str) -> tuple[str, ...]:
        """name plus every extends ancestor, innermost first."""
        out = [name]
        decl = self.sig(name)
        while decl.parent_kind == "extends":
            decl = self.sig(decl.parents[0])
            out.append(decl.name)
        return tuple(out)

    def concrete_sigs(self) -> tuple[str, ...]:
        """Sigs that may directly own atoms, in declaration order.

        Subset sigs never own atoms; abstract sigs do only when nothing
        extends them (an abstract leaf behaves as concrete).
        """
        out = []
        for decl in self.sigs.values():
            if decl.is_subset:
                continue
            if decl.is_abstract and self.extends_children(decl.name):
                continue
            out.append(decl.name)
        return tuple(out)

    def subset_sigs(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.sigs.values() if d.is_subset)

    def concrete_descendants(self, name: str) -> tuple[str, ...]:
        """Concrete sigs equal to or extending name, in declaration order."""
        member: set[str] = set()
        frontier = [name]
        while frontier:
            cur = frontier.pop()
            if cur in member:
                continue
            member.add(cur)
            frontier.extend(self.extends_children(cur))
        return tuple(s for s in self.concrete_sigs() if s in member)


def schema_to_json(schema: ModelSchema) -> dict:
    """Canonical JSON document for a resolved schema."""
    return {
        "sigs": [
            {
                "name": s.name,
                "mult": s.mult,
                "abstract": s.is_abstract,
                "parentKind": s.parent_kind,
                "parents": list(s.parents),
                "declIndex": s.decl_index,
            }
            for s in schema.sigs.values()
        ],
        "fields": [
            {
                "name": f.name,
                "owner": f.owner,
                "cols": list(f.cols),
                "mult": f.mult,
                "arrowMults": [list(pair) for pair in f.arrow_mults],
                "declIndex": f.decl_index,
            }
            for f in schema.fields.values()
        ],
        "preds": [
            {
                "name": p.name,
                "params": [[n, s] for n, s in p.params],
                "assert": p.is_assert,
                "declIndex": p.decl_index,
            }
            for p in schema.preds.values()
        ],
    }


# ── resolution ──────────────────────────────────────────────────────


def resolve(source: SourceModel) -> ModelSchema:
    """Resolve a parsed model into a ModelSchema.

    Rejects duplicate names, unknown references, hierarchy cycles and
    arity-incoherent formulas.
    """
    sig_nodes: dict[str, SigDeclNode] = {}
    for decl in source.declarations:
        if isinstance(decl, SigDeclNode):
            if decl.name in sig_nodes:
                raise DuplicateName(decl.name, "sig")
            sig_nodes[decl.name] = decl

    for node in sig_nodes.values():
        for parent in node.parents:
            if parent not in sig_nodes:
                raise UnknownName(parent, node.span)
        if node.parent_kind == "extends":
            if sig_nodes[node.parents[0]].parent_kind == "in":
                raise UnsupportedFeature(node.span, "extending a subset signature")
        if node.parent_kind == "in" and node.fields:
            raise UnsupportedFeature(node.span, "fields on a subset signature")

    _check_acyclic(sig_nodes)

    sigs: dict[str, SigDecl] = {}
    children: dict[str, list[str]] = {}
    for index, node in enumerate(sig_nodes.values()):
        sigs[node.name] = SigDecl(
            name=node.name,
            mult=node.mult,
            is_abstract=node.is_abstract,
            parent_kind=node.parent_kind,
            parents=node.parents,
            decl_index=index,
        )
        if node.parent_kind == "extends":
            children.setdefault(node.parents[0], []).append(node.name)

    fields: dict[str, FieldDecl] = {}
    for node in sig_nodes.values():
        for fnode in node.fields:
            if fnode.name in fields or fnode.name in sigs:
                raise DuplicateName(fnode.name, "field")
            cols = (node.name,) + fnode.cols
            for col in cols:
                if col not in sigs:
                    raise UnknownName(col, fnode.span)
            mult = fnode.mult
            if len(cols) == 2 and mult is None:
                mult = "one"
            fields[fnode.name] = FieldDecl(
                name=fnode.name,
                owner=node.name,
                cols=cols,
                mult=mult,
                arrow_mults=fnode.arrow_mults,
                decl_index=len(fields),
            )

    pred_nodes: dict[str, PredDeclNode] = {}
    for decl in source.declarations:
        if isinstance(decl, PredDeclNode):
            if decl.name in pred_nodes:
                raise DuplicateName(decl.name, "pred")
            pred_nodes[decl.name] = decl

    schema = ModelSchema(
        source=source,
        sigs=sigs,
        fields=fields,
        preds={},
        facts=(),
        commands=(),
        _children={k: tuple(v) for k, v in children.items()},
    )

    ctx = _Resolver(schema, {name: len(n.params) for name, n in pred_nodes.items()})

    for node in pred_nodes.values():
        params = []
        seen_params: set[str] = set()
        for pname, psig in node.params:
            if pname in seen_params:
                raise DuplicateName(pname, "parameter")
            seen_params.add(pname)
            if psig not in sigs:
                raise UnknownName(psig, node.span)
            params.append((pname, psig))
        body = ctx.formula(node.body, frozenset(seen_params))
        schema.preds[node.name] = PredDecl(
            name=node.name,
            params=tuple(params),
            body=body,
            is_assert=node.is_assert,
            decl_index=len(schema.preds),
        )

    facts = []
    commands = []
    for decl in source.declarations:
        if isinstance(decl, FactDeclNode):
            facts.append(ctx.formula(decl.body, frozenset()))
        elif isinstance(decl, CommandDeclNode):
            target = decl.target
            if isinstance(target, str):
                if target not in pred_nodes:
                    raise UnknownName(target, decl.span)
            else:
                target = ctx.formula(target, frozenset())
            commands.append(
                CommandDeclNode(decl.kind, target, decl.scope, span=decl.span)
            )
    schema.facts = tuple(facts)
    schema.commands = tuple(commands)
    return schema


def resolve_formula(formula: Formula, schema: ModelSchema, env: frozenset[str] = frozenset()) -> Formula:
    """Resolve a standalone formula against an existing schema."""
    pred_arity = {name: len(p.params) for name, p in schema.preds.items()}
    return _Resolver(schema, pred_arity).formula(formula, env)


def _check_acyclic(sig_nodes: dict[str, SigDeclNode]) -> None:
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(name: str, trail: list[str]) -> None:
        mark = state.get(name)
        if mark == 2:
            return
        if mark == 1:
            cycle = trail[trail.index(name):] + [name]
            raise CyclicHierarchy(cycle)
        state[name] = 1
        trail.append(name)
        for parent in sig_nodes[name].parents:
            visit(parent, trail)
        trail.pop()
        state[name] = 2

    for name in sig_nodes:
        visit(name, [])


class _Resolver:
    """Rewrites Name nodes into refs and computes expression arities."""

    def __init__(self, schema: ModelSchema, pred_arity: dict[str, int]):
        self.schema = schema
        self.pred_arity = pred_arity

    def formula(self, f: Formula, env: frozenset[str]) -> Formula:
        if isinstance(f, Block):
            return Block(
                tuple(self.formula(g, env) for g in f.formulas), span=f.span
            )
        if isinstance(f, Not):
            return Not(self.formula(f.operand, env), span=f.span)
        if isinstance(f, And):
            return And(self.formula(f.left, env), self.formula(f.right, env), span=f.span)
        if isinstance(f, Or):
            return Or(self.formula(f.left, env), self.formula(f.right, env), span=f.span)
        if isinstance(f, Iff):
            return Iff(self.formula(f.left, env), self.formula(f.right, env), span=f.span)
        if isinstance(f, Implies):
            orelse = self.formula(f.orelse, env) if f.orelse is not None else None
            return Implies(
                self.formula(f.left, env), self.formula(f.right, env), orelse,
                span=f.span,
            )
        if isinstance(f, (Subset, Equal, NotEqual)):
            left, la = self.expr(f.left, env)
            right, ra = self.expr(f.right, env)
            if la != ra:
                raise ArityError(
                    f"cannot compare arity-{la} and arity-{ra} expressions",
                    f.span,
                )
            return type(f)(left, right, span=f.span)
        if isinstance(f, MultFormula):
            expr, _ = self.expr(f.expr, env)
            return MultFormula(f.kind, expr, span=f.span)
        if isinstance(f, Quantified):
            doms = []
            names = []
            for vname, dom in f.vars:
                resolved, arity = self.expr(dom, env)
                if arity != 1:
                    raise ArityError(
                        "quantified variables must range over a set of atoms",
                        f.span,
                    )
                doms.append(resolved)
                names.append(vname)
            body = self.formula(f.body, env | frozenset(names))
            return Quantified(
                f.kind,
                f.disj,
                tuple(zip(names, doms)),
                body,
                span=f.span,
            )
        if isinstance(f, PredCall):
            if f.name not in self.pred_arity:
                raise UnknownName(f.name, f.span)
            expected = self.pred_arity[f.name]
            if len(f.args) != expected:
                raise ArityError(
                    f"{f.name} expects {expected} argument(s), got {len(f.args)}",
                    f.span,
                )
            args = []
            for arg in f.args:
                resolved, arity = self.expr(arg, env)
                if arity != 1:
                    raise ArityError(
                        "predicate arguments must be set expressions",
                        f.span,
                    )
                args.append(resolved)
            return PredCall(f.name, tuple(args), span=f.span)
        raise TypeError(f"not a formula node: {f!r}")

    def expr(self, e: Expr, env: frozenset[str]) -> tuple[Expr, int]:
        if isinstance(e, Name):
            if e.name in env:
                return VarRef(e.name, span=e.span), 1
            if e.name in self.schema.sigs:
                return SigRef(e.name, span=e.span), 1
            if e.name in self.schema.fields:
                return FieldRef(e.name, span=e.span), self.schema.fields[e.name].arity
            raise UnknownName(e.name, e.span)
        if isinstance(e, (SigRef, VarRef)):
            return e, 1
        if isinstance(e, FieldRef):
            return e, self.schema.fields[e.name].arity
        if isinstance(e, Univ):
            return e, 1
        if isinstance(e, NoneSet):
            return e, 1
        if isinstance(e, Iden):
            return e, 2
        if isinstance(e, Transpose):
            inner, arity = self.expr(e.expr, env)
            if arity != 2:
                raise ArityError("~ applies to binary relations only", e.span)
            return Transpose(inner, span=e.span), 2
        if isinstance(e, (Closure, ReflexiveClosure)):
            inner, arity = self.expr(e.expr, env)
            if arity != 2:
                raise ArityError(
                    "closure applies to binary relations only", e.span
                )
            return type(e)(inner, span=e.span), 2
        if isinstance(e, Join):
            left, la = self.expr(e.left, env)
            right, ra = self.expr(e.right, env)
            arity = la + ra - 2
            if arity < 1:
                raise ArityError(
                    "join of two unary expressions has arity 0", e.span
                )
            return Join(left, right, span=e.span), arity
        if isinstance(e, Product):
            left, la = self.expr(e.left, env)
            right, ra = self.expr(e.right, env)
            return Product(left, right, span=e.span), la + ra
        if isinstance(e, (Union, Difference, Intersection)):
            left, la = self.expr(e.left, env)
            right, ra = self.expr(e.right, env)
            if la != ra:
                raise ArityError(
                    f"cannot combine arity-{la} and arity-{ra} expressions",
                    e.span,
                )
            return type(e)(left, right, span=e.span), la
        raise TypeError(f"not an expression node: {e!r}")
