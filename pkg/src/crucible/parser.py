"""Recursive-descent parser for the Alloy subset.

Produces raw (name-unresolved) ASTs; the schema module resolves references
and checks arities.  The grammar covers signature, predicate, assert and
fact paragraphs plus run/check commands, with the relational operator set
~ ^ * . -> & + - and the usual formula connectives.
"""

from __future__ import annotations

from .ast_nodes import (
    And,
    Block,
    Closure,
    CommandDeclNode,
    Declaration,
    Difference,
    Equal,
    Expr,
    FactDeclNode,
    FieldDeclNode,
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
    SourceModel,
    Subset,
    Transpose,
    Union,
    Univ,
    SigRef,  # noqa: F401  (re-export convenience for callers)
)
from .errors import ModelSyntaxError, UnsupportedFeature
from .lexer import EOF, IDENT, NUMBER, SYM, Token, tokenize
from .source import Span

_SIG_MULTS = ("one", "lone", "some")
_FIELD_MULTS = ("set", "some", "lone", "one")
_QUANT_KINDS = ("all", "some", "no", "lone", "one")
_MULT_FORMULA_KINDS = ("no", "some", "lone", "one")
_UNSUPPORTED_DECLS = ("open", "module", "fun", "enum", "let")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # ── token access ────────────────────────────────────────────────

    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def at(self, text: str) -> bool:
        return self.cur().text == text and self.cur().kind in (SYM, IDENT)

    def advance(self) -> Token:
        tok = self.cur()
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        return self.fail(f"expected '{text}'")

    def expect_name(self, what: str = "identifier") -> Token:
        tok = self.cur()
        if tok.kind != IDENT:
            self.fail(f"expected {what}")
        if tok.text in ("Int", "seq", "sum"):
            raise UnsupportedFeature(tok.span, tok.text)
        from .lexer import KEYWORDS

        if tok.text in KEYWORDS:
            self.fail(f"expected {what}")
        return self.advance()

    def fail(self, message: str):
        tok = self.cur()
        found = f"'{tok.text}'" if tok.kind != EOF else "end of input"
        raise ModelSyntaxError(tok.span, f"{message}, found {found}")

    # ── declarations ────────────────────────────────────────────────

    def model(self) -> tuple[Declaration, ...]:
        decls: list[Declaration] = []
        while self.cur().kind != EOF:
            decls.append(self.declaration())
        return tuple(decls)

    def declaration(self) -> Declaration:
        tok = self.cur()
        if tok.text in _UNSUPPORTED_DECLS:
            raise UnsupportedFeature(tok.span, tok.text)
        if tok.text in ("sig", "abstract") or (
            tok.text in _SIG_MULTS and self.peek().text in ("sig", "abstract")
        ):
            return self.sig_decl()
        if tok.text == "pred":
            return self.pred_decl()
        if tok.text == "assert":
            return self.assert_decl()
        if tok.text == "fact":
            return self.fact_decl()
        if tok.text in ("run", "check"):
            return self.command_decl()
        self.fail("expected a declaration")

    def sig_decl(self) -> SigDeclNode:
        start = self.cur()
        is_abstract = False
        mult = "any"
        while True:
            if self.accept("abstract"):
                is_abstract = True
                continue
            if self.cur().text in _SIG_MULTS and self.peek().text in (
                "sig",
                "abstract",
            ):
                mult = self.advance().text
                continue
            break
        self.expect("sig")
        if is_abstract and mult != "any":
            raise UnsupportedFeature(
                start.span, "abstract sig with a multiplicity keyword"
            )
        name = self.expect_name("signature name")
        parent_kind = "top"
        parents: tuple[str, ...] = ()
        if self.accept("extends"):
            parent_kind = "extends"
            parents = (self.expect_name("parent signature").text,)
        elif self.accept("in"):
            parent_kind = "in"
            names = [self.expect_name("parent signature").text]
            while self.accept("+"):
                names.append(self.expect_name("parent signature").text)
            parents = tuple(names)
        self.expect("{")
        fields: list[FieldDeclNode] = []
        if not self.at("}"):
            fields.extend(self.field_decl())
            while self.accept(","):
                fields.extend(self.field_decl())
        self.expect("}")
        return SigDeclNode(
            name=name.text,
            mult=mult,
            is_abstract=is_abstract,
            parent_kind=parent_kind,
            parents=parents,
            fields=tuple(fields),
            span=start.span,
        )

    def field_decl(self) -> list[FieldDeclNode]:
        names = [self.expect_name("field name")]
        while self.cur().text == "," and self.peek(2).text in (",", ":"):
            self.expect(",")
            names.append(self.expect_name("field name"))
        self.expect(":")
        mult: str | None = None
        if self.cur().text in _FIELD_MULTS:
            mult = self.advance().text
        first = self.expect_name("signature name")
        cols = [first.text]
        arrow_mults: list[tuple[str | None, str | None]] = []
        while self.at("->") or self.cur().text in _FIELD_MULTS:
            left: str | None = None
            if self.cur().text in _FIELD_MULTS:
                left = self.advance().text
            arrow = self.expect("->")
            if mult is not None:
                raise UnsupportedFeature(
                    arrow.span, "declaration multiplicity on an arrow type"
                )
            right: str | None = None
            if self.cur().text in _FIELD_MULTS:
                right = self.advance().text
            cols.append(self.expect_name("signature name").text)
            arrow_mults.append((left, right))
        return [
            FieldDeclNode(
                name=tok.text,
                cols=tuple(cols),
                mult=mult,
                arrow_mults=tuple(arrow_mults),
                span=tok.span,
            )
            for tok in names
        ]

    def pred_decl(self) -> PredDeclNode:
        start = self.expect("pred")
        name = self.expect_name("predicate name")
        params: list[tuple[str, str]] = []
        if self.accept("["):
            if not self.at("]"):
                params.extend(self.param_group())
                while self.accept(","):
                    params.extend(self.param_group())
            self.expect("]")
        body = self.block()
        return PredDeclNode(
            name=name.text,
            params=tuple(params),
            body=body,
            span=start.span,
        )

    def param_group(self) -> list[tuple[str, str]]:
        names = [self.expect_name("parameter name")]
        while self.cur().text == "," and self.peek(2).text in (",", ":"):
            self.expect(",")
            names.append(self.expect_name("parameter name"))
        self.expect(":")
        sig = self.expect_name("parameter signature")
        return [(tok.text, sig.text) for tok in names]

    def assert_decl(self) -> PredDeclNode:
        start = self.expect("assert")
        name = self.expect_name("assertion name")
        body = self.block()
        return PredDeclNode(
            name=name.text,
            params=(),
            body=body,
            is_assert=True,
            span=start.span,
        )

    def fact_decl(self) -> FactDeclNode:
        start = self.expect("fact")
        name = None
        if self.cur().kind == IDENT and not self.at("{"):
            name = self.expect_name("fact name").text
        body = self.block()
        return FactDeclNode(body=body, name=name, span=start.span)

    def command_decl(self) -> CommandDeclNode:
        start = self.advance()
        target: str | Formula
        if self.at("{"):
            target = self.block()
        else:
            target = self.expect_name("command target").text
        scope: int | None = None
        if self.accept("for"):
            tok = self.cur()
            if tok.text == "exactly":
                raise UnsupportedFeature(tok.span, "per-signature scopes")
            if tok.kind != NUMBER:
                self.fail("expected a scope number")
            scope = int(self.advance().text)
            if self.cur().text in ("but", "exactly"):
                raise UnsupportedFeature(self.cur().span, "per-signature scopes")
        return CommandDeclNode(
            kind=start.text, target=target, scope=scope, span=start.span
        )

    # ── formulas ────────────────────────────────────────────────────

    def block(self) -> Block:
        start = self.expect("{")
        formulas: list[Formula] = []
        while not self.at("}"):
            if self.cur().kind == EOF:
                self.fail("expected '}'")
            formulas.append(self.formula())
        self.expect("}")
        return Block(tuple(formulas), span=start.span)

    def formula(self) -> Formula:
        return self.or_formula()

    def or_formula(self) -> Formula:
        left = self.iff_formula()
        while self.at("||") or self.at("or"):
            op = self.advance()
            right = self.iff_formula()
            left = Or(left, right, span=op.span)
        return left

    def iff_formula(self) -> Formula:
        left = self.implies_formula()
        while self.at("<=>") or self.at("iff"):
            op = self.advance()
            right = self.implies_formula()
            left = Iff(left, right, span=op.span)
        return left

    def implies_formula(self) -> Formula:
        left = self.and_formula()
        if self.at("=>") or self.at("implies"):
            op = self.advance()
            right = self.implies_formula()
            orelse = None
            if self.accept("else"):
                orelse = self.implies_formula()
            return Implies(left, right, orelse, span=op.span)
        return left

    def and_formula(self) -> Formula:
        left = self.not_formula()
        while self.at("&&") or self.at("and"):
            op = self.advance()
            right = self.not_formula()
            left = And(left, right, span=op.span)
        return left

    def not_formula(self) -> Formula:
        if self.at("!") or self.at("not"):
            op = self.advance()
            return Not(self.not_formula(), span=op.span)
        return self.comparison()

    def comparison(self) -> Formula:
        tok = self.cur()
        if tok.text == "all":
            return self.quantified(self.advance())
        if tok.text in _MULT_FORMULA_KINDS and self._starts_quantifier():
            return self.quantified(self.advance())
        if tok.text in _MULT_FORMULA_KINDS:
            kind = self.advance()
            expr = self.expr()
            return MultFormula(kind.text, expr, span=kind.span)
        if self.at("{"):
            return self.block()
        if tok.kind == IDENT and self.peek().text == "[" and not self._is_expr_keyword(tok):
            return self.pred_call()
        if self.at("("):
            snapshot = self.pos
            try:
                return self.expr_comparison()
            except ModelSyntaxError:
                self.pos = snapshot
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return inner
        return self.expr_comparison()

    def _is_expr_keyword(self, tok: Token) -> bool:
        return tok.text in ("univ", "iden", "none")

    def _starts_quantifier(self) -> bool:
        nxt = self.peek()
        if nxt.text == "disj":
            return True
        return nxt.kind == IDENT and self.peek(2).text in (",", ":")

    def quantified(self, kind: Token) -> Formula:
        groups: list[tuple[bool, list[str], Expr]] = []
        while True:
            disj = bool(self.accept("disj"))
            names = [self.expect_name("variable name").text]
            while self.cur().text == "," and self.peek(2).text in (",", ":"):
                self.expect(",")
                names.append(self.expect_name("variable name").text)
            self.expect(":")
            domain = self.expr()
            groups.append((disj, names, domain))
            if not self.accept(","):
                break
        if self.accept("|"):
            body = self.formula()
        elif self.at("{"):
            body = self.block()
        else:
            self.fail("expected '|' or '{' after quantifier declarations")
        for disj, names, domain in reversed(groups):
            body = Quantified(
                kind.text,
                disj,
                tuple((n, domain) for n in names),
                body,
                span=kind.span,
            )
        return body

    def pred_call(self) -> PredCall:
        name = self.expect_name("predicate name")
        self.expect("[")
        args: list[Expr] = []
        if not self.at("]"):
            args.append(self.expr())
            while self.accept(","):
                args.append(self.expr())
        self.expect("]")
        return PredCall(name.text, tuple(args), span=name.span)

    def expr_comparison(self) -> Formula:
        left = self.expr()
        if self.at("in"):
            op = self.advance()
            return Subset(left, self.expr(), span=op.span)
        if self.at("="):
            op = self.advance()
            return Equal(left, self.expr(), span=op.span)
        if self.at("!="):
            op = self.advance()
            return NotEqual(left, self.expr(), span=op.span)
        if self.at("!") and self.peek().text == "in":
            op = self.advance()
            self.expect("in")
            return Not(Subset(left, self.expr(), span=op.span), span=op.span)
        if isinstance(left, Name):
            return PredCall(left.name, (), span=left.span)
        self.fail("expected a comparison operator")

    # ── relational expressions ──────────────────────────────────────

    def expr(self) -> Expr:
        expr = self.union_expr()
        if self.cur().text in ("++", "<:", ":>"):
            raise UnsupportedFeature(self.cur().span, f"operator {self.cur().text}")
        return expr

    def union_expr(self) -> Expr:
        left = self.intersect_expr()
        while self.at("+") or self.at("-"):
            op = self.advance()
            right = self.intersect_expr()
            if op.text == "+":
                left = Union(left, right, span=op.span)
            else:
                left = Difference(left, right, span=op.span)
        return left

    def intersect_expr(self) -> Expr:
        left = self.arrow_expr()
        while self.at("&"):
            op = self.advance()
            left = Intersection(left, self.arrow_expr(), span=op.span)
        return left

    def arrow_expr(self) -> Expr:
        left = self.join_expr()
        while self.at("->"):
            op = self.advance()
            left = Product(left, self.join_expr(), span=op.span)
        return left

    def join_expr(self) -> Expr:
        left = self.unary_expr()
        while self.at("."):
            op = self.advance()
            left = Join(left, self.unary_expr(), span=op.span)
        return left

    def unary_expr(self) -> Expr:
        tok = self.cur()
        if tok.text == "~":
            self.advance()
            return Transpose(self.unary_expr(), span=tok.span)
        if tok.text == "^":
            self.advance()
            return Closure(self.unary_expr(), span=tok.span)
        if tok.text == "*":
            self.advance()
            return ReflexiveClosure(self.unary_expr(), span=tok.span)
        return self.primary_expr()

    def primary_expr(self) -> Expr:
        tok = self.cur()
        if tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.text == "#":
            raise UnsupportedFeature(tok.span, "cardinality operator")
        if tok.text == "{":
            raise UnsupportedFeature(tok.span, "set comprehension")
        if tok.kind == NUMBER:
            raise UnsupportedFeature(tok.span, "integer literal")
        if tok.text in ("Int", "seq", "sum", "let"):
            raise UnsupportedFeature(tok.span, tok.text)
        if tok.kind == IDENT:
            if tok.text == "univ":
                self.advance()
                return Univ(span=tok.span)
            if tok.text == "iden":
                self.advance()
                return Iden(span=tok.span)
            if tok.text == "none":
                self.advance()
                return NoneSet(span=tok.span)
            name = self.expect_name("expression")
            return Name(name.text, span=name.span)
        self.fail("expected an expression")


def parse_model(text: str) -> SourceModel:
    """Parse full model source into an ordered declaration list."""
    parser = _Parser(tokenize(text))
    decls = parser.model()
    return SourceModel(text=text, declarations=decls)


def parse_formula_text(text: str) -> Formula:
    """Parse a standalone formula sequence without resolving names.

    Multiple juxtaposed formulas collapse into a Block; a single formula is
    returned bare.
    """
    parser = _Parser(tokenize(text))
    formulas: list[Formula] = []
    while parser.cur().kind != EOF:
        formulas.append(parser.formula())
    if not formulas:
        parser.fail("expected a formula")
    if len(formulas) == 1:
        return formulas[0]
    return Block(tuple(formulas), span=Span(1, 1))


def parse_formula_block(text: str, schema) -> Formula:
    """Parse and resolve a formula block against a resolved schema."""
    from .schema import resolve_formula

    return resolve_formula(parse_formula_text(text), schema)
