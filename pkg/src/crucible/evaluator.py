"""Native evaluation of formulas over pinned finite valuations.

Because a canvas fixes every sig set and relation, satisfiability of the
generated command string reduces to direct evaluation: no solver, just
relational algebra over small tuple sets plus quantification by
enumeration.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import guidance
from .ast_nodes import (
    And,
    Block,
    Closure,
    Difference,
    Equal,
    Expr,
    FieldRef,
    Formula,
    Iden,
    Iff,
    Implies,
    Intersection,
    Join,
    MultFormula,
    NoneSet,
    Not,
    NotEqual,
    Or,
    PredCall,
    Product,
    Quantified,
    ReflexiveClosure,
    SigRef,
    Subset,
    Transpose,
    Union,
    Univ,
    VarRef,
)
from .errors import NotFound, StructuralBlock
from .schema import ModelSchema
from .testcase import (
    DONT_TEST,
    VALID,
    Project,
    TestCase,
    Valuation,
    derive_valuation,
)
from .translator import CommandString, generate_command_string, predicate_literals

TupleSet = frozenset[tuple[str, ...]]

_EMPTY: TupleSet = frozenset()

_CARDINALITY = {
    "no": lambda n: n == 0,
    "some": lambda n: n >= 1,
    "lone": lambda n: n <= 1,
    "one": lambda n: n == 1,
}


@dataclass
class Env:
    valuation: Valuation
    schema: ModelSchema
    bindings: dict[str, TupleSet] = field(default_factory=dict)

    @property
    def universe(self) -> frozenset[str]:
        return self.valuation.universe

    def bound(self, name: str, value: TupleSet) -> Env:
        child = dict(self.bindings)
        child[name] = value
        return Env(self.valuation, self.schema, child)


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # structural | fact | predicate
    subject: str
    holds: bool


@dataclass(frozen=True)
class RunResult:
    status: str  # pass | fail
    command: CommandString
    diagnostics: tuple[Diagnostic, ...]
    elapsed: float

    @property
    def passed(self) -> bool:
        return self.status == "pass"


# ── expressions ─────────────────────────────────────────────────────


def eval_expr(expr: Expr, env: Env) -> TupleSet:
    if isinstance(expr, SigRef):
        return frozenset((a,) for a in env.valuation.sig_sets.get(expr.name, ()))
    if isinstance(expr, FieldRef):
        return env.valuation.rel_tuples.get(expr.name, _EMPTY)
    if isinstance(expr, VarRef):
        return env.bindings[expr.name]
    if isinstance(expr, Univ):
        return frozenset((a,) for a in env.universe)
    if isinstance(expr, Iden):
        return frozenset((a, a) for a in env.universe)
    if isinstance(expr, NoneSet):
        return _EMPTY
    if isinstance(expr, Transpose):
        return frozenset((b, a) for a, b in eval_expr(expr.expr, env))
    if isinstance(expr, Closure):
        return _closure(eval_expr(expr.expr, env))
    if isinstance(expr, ReflexiveClosure):
        refl = frozenset((a, a) for a in env.universe)
        return _closure(eval_expr(expr.expr, env)) | refl
    if isinstance(expr, Join):
        return _join(eval_expr(expr.left, env), eval_expr(expr.right, env))
    if isinstance(expr, Product):
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        return frozenset(a + b for a in left for b in right)
    if isinstance(expr, Union):
        return eval_expr(expr.left, env) | eval_expr(expr.right, env)
    if isinstance(expr, Difference):
        return eval_expr(expr.left, env) - eval_expr(expr.right, env)
    if isinstance(expr, Intersection):
        return eval_expr(expr.left, env) & eval_expr(expr.right, env)
    raise TypeError(f"cannot evaluate {expr!r}")


def _join(left: TupleSet, right: TupleSet) -> TupleSet:
    by_head: dict[str, list[tuple[str, ...]]] = {}
    for t in right:
        by_head.setdefault(t[0], []).append(t[1:])
    out = set()
    for t in left:
        for tail in by_head.get(t[-1], ()):
            out.add(t[:-1] + tail)
    return frozenset(out)


def _closure(rel: TupleSet) -> TupleSet:
    result = set(rel)
    while True:
        extra = {
            (a, d)
            for (a, b) in result
            for (c, d) in result
            if b == c and (a, d) not in result
        }
        if not extra:
            return frozenset(result)
        result |= extra


# ── formulas ────────────────────────────────────────────────────────


def eval_formula(formula: Formula, env: Env) -> bool:
    if isinstance(formula, Block):
        return all(eval_formula(f, env) for f in formula.formulas)
    if isinstance(formula, Subset):
        return eval_expr(formula.left, env) <= eval_expr(formula.right, env)
    if isinstance(formula, Equal):
        return eval_expr(formula.left, env) == eval_expr(formula.right, env)
    if isinstance(formula, NotEqual):
        return eval_expr(formula.left, env) != eval_expr(formula.right, env)
    if isinstance(formula, MultFormula):
        return _CARDINALITY[formula.kind](len(eval_expr(formula.expr, env)))
    if isinstance(formula, Not):
        return not eval_formula(formula.operand, env)
    if isinstance(formula, And):
        return eval_formula(formula.left, env) and eval_formula(formula.right, env)
    if isinstance(formula, Or):
        return eval_formula(formula.left, env) or eval_formula(formula.right, env)
    if isinstance(formula, Implies):
        if eval_formula(formula.left, env):
            return eval_formula(formula.right, env)
        if formula.orelse is not None:
            return eval_formula(formula.orelse, env)
        return True
    if isinstance(formula, Iff):
        return eval_formula(formula.left, env) == eval_formula(formula.right, env)
    if isinstance(formula, Quantified):
        return _eval_quantified(formula, env)
    if isinstance(formula, PredCall):
        return _eval_pred_call(formula, env)
    raise TypeError(f"cannot evaluate {formula!r}")


def _eval_quantified(formula: Quantified, env: Env) -> bool:
    domains = []
    for _, dom in formula.vars:
        atoms = sorted(t[0] for t in eval_expr(dom, env))
        domains.append(atoms)
    names = [name for name, _ in formula.vars]

    def satisfied():
        for combo in itertools.product(*domains):
            if formula.disj and len(set(combo)) != len(combo):
                continue
            inner = env
            for name, atom in zip(names, combo):
                inner = inner.bound(name, frozenset({(atom,)}))
            yield eval_formula(formula.body, inner)

    if formula.kind == "all":
        return all(satisfied())
    if formula.kind == "some":
        return any(satisfied())
    if formula.kind == "no":
        return not any(satisfied())
    # lone/one need a count, but never beyond two hits
    hits = 0
    for ok in satisfied():
        if ok:
            hits += 1
            if hits > 1:
                break
    if formula.kind == "lone":
        return hits <= 1
    return hits == 1


def _eval_pred_call(formula: PredCall, env: Env) -> bool:
    pred = env.schema.preds[formula.name]
    bindings: dict[str, TupleSet] = {}
    for (pname, _), arg in zip(pred.params, formula.args):
        bindings[pname] = eval_expr(arg, env)
    # predicates are closed: the body sees only its own parameters
    inner = Env(env.valuation, env.schema, bindings)
    return eval_formula(pred.body, inner)


# ── structural constraints ──────────────────────────────────────────


def check_structural(valuation: Valuation, schema: ModelSchema) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def add(subject: str, holds: bool) -> None:
        diags.append(Diagnostic("structural", subject, holds))

    for decl in schema.sigs.values():
        members = valuation.sig_sets.get(decl.name, frozenset())
        if decl.mult != "any":
            add(
                f"{decl.mult} sig {decl.name}",
                _CARDINALITY[decl.mult](len(members)),
            )
        for parent in decl.parents:
            parent_members = valuation.sig_sets.get(parent, frozenset())
            add(f"{decl.name} in {parent}", members <= parent_members)

    for decl in schema.sigs.values():
        children = schema.extends_children(decl.name)
        for left, right in itertools.combinations(children, 2):
            l_set = valuation.sig_sets.get(left, frozenset())
            r_set = valuation.sig_sets.get(right, frozenset())
            add(f"disjoint {left}/{right}", not (l_set & r_set))

    for fdecl in schema.fields.values():
        tuples = valuation.rel_tuples.get(fdecl.name, frozenset())
        typed = all(
            len(t) == fdecl.arity
            and all(
                atom in valuation.sig_sets.get(col, frozenset())
                for atom, col in zip(t, fdecl.cols)
            )
            for t in tuples
        )
        add(f"{fdecl.name} typing", typed)
        if fdecl.arity == 2 and fdecl.mult != "set":
            check = _CARDINALITY[fdecl.mult]
            owners = valuation.sig_sets.get(fdecl.cols[0], frozenset())
            ok = all(
                check(sum(1 for t in tuples if t[0] == owner)) for owner in owners
            )
            add(f"{fdecl.mult} {fdecl.name}", ok)
        elif fdecl.arity >= 3 and any(
            m is not None for pair in fdecl.arrow_mults for m in pair
        ):
            members = [
                sorted(valuation.sig_sets.get(col, frozenset()))
                for col in fdecl.cols
            ]
            violations = guidance.check_arrow_mults(
                fdecl.name,
                sorted(tuples),
                ((None, None),) + fdecl.arrow_mults,
                members,
            )
            add(f"{fdecl.name} arrow multiplicities", not violations)

    return diags


# ── running a test ──────────────────────────────────────────────────


def run_test(
    project: Project, test_name: str, allow_structural_failure: bool = False
) -> RunResult:
    if test_name not in project.tests:
        raise NotFound("test", test_name)
    test = project.tests[test_name]
    schema = project.schema

    report = guidance.pre_run_check(test, schema)
    if not report.ok and not allow_structural_failure:
        raise StructuralBlock(report)

    started = time.perf_counter()
    command = generate_command_string(test, schema)
    valuation = derive_valuation(test, schema)
    env = Env(valuation, schema)

    diagnostics = list(check_structural(valuation, schema))
    for index, fact in enumerate(schema.facts):
        diagnostics.append(
            Diagnostic("fact", f"fact #{index + 1}", eval_formula(fact, env))
        )
    diagnostics.extend(_predicate_diagnostics(test, schema, env))

    status = "pass" if all(d.holds for d in diagnostics) else "fail"
    elapsed = time.perf_counter() - started
    return RunResult(status, command, tuple(diagnostics), elapsed)


def _predicate_diagnostics(
    test: TestCase, schema: ModelSchema, env: Env
) -> list[Diagnostic]:
    literals = predicate_literals(test, schema)
    out = []
    index = 0
    for pred in schema.preds.values():
        pstate = test.predicate_states.get(pred.name)
        if pstate is None or pstate.state == DONT_TEST:
            continue
        bindings = {
            pname: frozenset({(atom_id,)})
            for (pname, _), atom_id in zip(pred.params, pstate.args)
        }
        body_holds = eval_formula(pred.body, Env(env.valuation, schema, bindings))
        expected = pstate.state == VALID
        out.append(
            Diagnostic("predicate", literals[index], body_holds == expected)
        )
        index += 1
    return out
