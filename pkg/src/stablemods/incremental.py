"""Projection, module instantiation, and incremental assembly.

Projection replaces atoms outside a predicate set with falsity and then
simplifies with a fixed table of boolean/quantifier rewrites, applied
bottom-up until nothing changes.  The table deliberately has no rule for
``F -> top``, so such subformulas survive simplification.

FM instantiation iterates projection onto inputs plus current strict heads to
its least fixpoint; DM instantiation is the two-stage ground-program analogue.
Their results differ in general, which is the point of keeping both.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .errors import AcyclicityError, AssemblyError, NotJoinableError, SignatureError
from .herbrand import (
    DEFAULT_MAX_CANDIDATES,
    PROP_ELEMENT,
    PartialInterpretation,
    module_stable_models,
)
from .modules import FOModule, join
from .programs import (
    BodyLiteral,
    HeadLiteral,
    Program,
    Rule,
    fol_representation,
    instantiate_at,
    parse_incremental_file,
)
from .reduct import ground_atom_name, to_ground_rules
from .modules import DLPModule
from .syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Obj,
    Or,
    ParamAtom,
    Pred,
    PredicateList,
    Signature,
    Term,
    Var,
    atom_occurrences,
    conj,
    flatten_and,
    head_predicates,
    is_top,
    predicates_of,
    signature_of,
    top,
)

# ---------------------------------------------------------------------------
# The rewrite system

RewriteRule = Callable[[Formula], "Formula | None"]


def _and_bot_left(f):
    if isinstance(f, And) and isinstance(f.left, Bot):
        return Bot()


def _and_bot_right(f):
    if isinstance(f, And) and isinstance(f.right, Bot):
        return Bot()


def _and_top_left(f):
    if isinstance(f, And) and is_top(f.left):
        return f.right


def _and_top_right(f):
    if isinstance(f, And) and is_top(f.right):
        return f.left


def _or_bot_left(f):
    if isinstance(f, Or) and isinstance(f.left, Bot):
        return f.right


def _or_bot_right(f):
    if isinstance(f, Or) and isinstance(f.right, Bot):
        return f.left


def _or_top_left(f):
    if isinstance(f, Or) and is_top(f.left):
        return top()


def _or_top_right(f):
    if isinstance(f, Or) and is_top(f.right):
        return top()


def _implies_bot(f):
    if isinstance(f, Implies) and isinstance(f.left, Bot):
        return top()


def _implies_top(f):
    if isinstance(f, Implies) and is_top(f.left):
        return f.right


def _quantifier_top(f):
    if isinstance(f, (Forall, Exists)) and is_top(f.body):
        return top()


def _quantifier_bot(f):
    if isinstance(f, (Forall, Exists)) and isinstance(f.body, Bot):
        return Bot()


DEFAULT_RULE_ORDER: tuple[RewriteRule, ...] = (
    _and_bot_left,
    _and_bot_right,
    _and_top_left,
    _and_top_right,
    _or_bot_left,
    _or_bot_right,
    _or_top_left,
    _or_top_right,
    _implies_bot,
    _implies_top,
    _quantifier_top,
    _quantifier_bot,
)

REVERSED_RULE_ORDER: tuple[RewriteRule, ...] = tuple(reversed(DEFAULT_RULE_ORDER))


def _rewrite_pass(f: Formula, order: Sequence[RewriteRule]) -> Formula:
    if isinstance(f, (And, Or, Implies)):
        f = type(f)(_rewrite_pass(f.left, order), _rewrite_pass(f.right, order))
    elif isinstance(f, (Forall, Exists)):
        f = type(f)(f.var, _rewrite_pass(f.body, order))
    while True:
        for rule in order:
            g = rule(f)
            if g is not None and g != f:
                f = g
                break
        else:
            return f


def simplify(f: Formula, order: Sequence[RewriteRule] = DEFAULT_RULE_ORDER) -> Formula:
    """Apply the rewrite table bottom-up, repeating passes to a fixpoint."""
    while True:
        g = _rewrite_pass(f, order)
        if g == f:
            return g
        f = g


def project_formula(
    f: Formula,
    preds: Iterable[Pred],
    order: Sequence[RewriteRule] = DEFAULT_RULE_ORDER,
) -> Formula:
    """Replace atoms of predicates outside preds with falsity, then simplify."""
    keep = set(preds)

    def replace(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return g if g.pred in keep else Bot()
        if isinstance(g, ParamAtom):
            raise ValueError("parameterized atoms cannot be projected; instantiate first")
        if isinstance(g, (Eq, Bot)):
            return g
        if isinstance(g, (And, Or, Implies)):
            return type(g)(replace(g.left), replace(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, replace(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return simplify(replace(f), order)


# ---------------------------------------------------------------------------
# First-order module instantiation (fixpoint of projection)


def fm_trace(f: Formula, inputs: Sequence[Pred]) -> tuple[Formula, ...]:
    """The projection sequence, ending with the repeated fixpoint entry."""
    trace = [f]
    current = f
    while True:
        target = set(inputs) | set(head_predicates(current))
        nxt = project_formula(current, target)
        trace.append(nxt)
        if nxt == current:
            return tuple(trace)
        current = nxt


def fm_instantiate(f: Formula, inputs: Sequence[Pred]) -> FOModule:
    """Module whose formula is the least fixpoint of projecting onto inputs
    plus current strict heads; outputs are all other predicates of f."""
    fixpoint = fm_trace(f, inputs)[-1]
    inputs = tuple(inputs)
    outputs = tuple(p for p in predicates_of(f) if p not in set(inputs))
    return FOModule(tuple(flatten_and(fixpoint)), inputs, outputs)


# ---------------------------------------------------------------------------
# Ground programs and DM instantiation


def _subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.func, tuple(_subst_term(a, mapping) for a in t.args))
    return t


def _subst_item(item, mapping):
    if isinstance(item, Atom):
        return Atom(item.pred, tuple(_subst_term(a, mapping) for a in item.args))
    if isinstance(item, ParamAtom):
        raise ValueError("parameterized atoms cannot be grounded; instantiate first")
    return Eq(_subst_term(item.left, mapping), _subst_term(item.right, mapping))


def _subst_rule(rule: Rule, mapping: Mapping[str, Term]) -> Rule:
    head = tuple(HeadLiteral(_subst_item(h.atom, mapping), h.negated) for h in rule.head)
    body = tuple(
        BodyLiteral(_subst_item(b.item, mapping), b.neg) for b in rule.body
    )
    return Rule(head, body, rule.choice)


def _rule_free_vars(rule: Rule) -> list[str]:
    from .programs import _atoms_of_rule
    from .syntax import free_vars

    seen: set[str] = set()
    for item in _atoms_of_rule(rule):
        seen |= free_vars(item)
    return sorted(seen)


def ground_program(program: Program, sig=None) -> Program:
    """All ground instances over the object constants, in rule order and then
    instance-lexicographic order."""
    sig = sig or program.signature
    if sig.functions:
        raise SignatureError("grounding needs a function-free signature")
    objects = tuple(sorted(sig.objects))
    rules: list[Rule] = []
    for rule in program.rules:
        if rule.aggregates:
            raise SignatureError("aggregates cannot be grounded")
        variables = _rule_free_vars(rule)
        if not variables:
            rules.append(rule)
            continue
        if not objects:
            raise SignatureError("no object constants to ground over")
        for values in product(objects, repeat=len(variables)):
            mapping = {v: Obj(c) for v, c in zip(variables, values)}
            rules.append(_subst_rule(rule, mapping))
    return Program.from_rules(rules, Signature(objects=sig.objects))


def _require_ground(rule: Rule) -> None:
    if _rule_free_vars(rule) or rule.aggregates:
        raise SignatureError("program is not ground")


def head_atoms(program: Program) -> frozenset[str]:
    out = set()
    for rule in program.rules:
        for h in rule.head:
            if isinstance(h.atom, ParamAtom):
                raise ValueError("parameterized atom; instantiate first")
            out.add(ground_atom_name(h.atom))
    return frozenset(out)


def project_program(program: Program, atoms: Iterable[str]) -> Program:
    """Drop rules whose positive body leaves the atom set; drop negative
    literals whose atom leaves it; heads stay untouched."""
    keep = frozenset(atoms)
    rules = []
    for rule in program.rules:
        _require_ground(rule)
        body: list[BodyLiteral] = []
        alive = True
        for lit in rule.body:
            assert isinstance(lit, BodyLiteral)
            if isinstance(lit.item, Eq):
                body.append(lit)
                continue
            name = ground_atom_name(lit.item)
            if lit.neg == 1:
                if name in keep:
                    body.append(lit)
            else:  # positive, and `not not` behaves positively here
                if name not in keep:
                    alive = False
                    break
                body.append(lit)
        if alive:
            rules.append(Rule(rule.head, tuple(body), rule.choice))
    return Program(program.signature, tuple(rules))


def dm_instantiate(program: Program, inputs: Iterable[str]) -> DLPModule:
    """The two-stage ground instantiation: project onto inputs plus heads to
    find the outputs, then onto inputs plus outputs to fix the program."""
    ground = ground_program(program)
    inputs = frozenset(inputs)
    stage1 = project_program(ground, inputs | head_atoms(ground))
    outputs = head_atoms(stage1)
    stage2 = project_program(ground, inputs | outputs)
    return DLPModule(to_ground_rules(stage2), inputs, outputs)


# ---------------------------------------------------------------------------
# Incremental theories


@dataclass(frozen=True)
class IncrementalTheory:
    """Base, cumulative and volatile sentences; the latter two may contain
    parameterized atoms over the step counter."""

    base: Formula
    cumulative: Formula
    volatile: Formula

    @classmethod
    def from_source(cls, text: str) -> "IncrementalTheory":
        base, cumulative, volatile = parse_incremental_file(text)
        return cls(
            fol_representation(base),
            fol_representation(cumulative),
            fol_representation(volatile),
        )

    def components(self, k: int) -> tuple[tuple[str, Formula], ...]:
        """The instantiated formulas B, P[1..k], Q[k] in assembly order.

        The base is instantiated at 0, which resolves constant-index
        parameterized atoms such as ``p@(0)``.
        """
        if k < 0:
            raise ValueError("the step must be nonnegative")
        parts = [("B", instantiate_at(self.base, 0))]
        for i in range(1, k + 1):
            parts.append((f"P[{i}]", instantiate_at(self.cumulative, i)))
        parts.append((f"Q[{k}]", instantiate_at(self.volatile, k)))
        return tuple(parts)


@dataclass(frozen=True)
class AcyclicityReport:
    step: int
    violations: tuple[tuple[Pred, str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return f"acyclic up to step {self.step}"
        lines = [
            f"{pred} occurs strictly positively in {later} but belongs to {earlier}"
            for pred, earlier, later in self.violations
        ]
        return "not acyclic: " + "; ".join(lines)


def acyclic_check(theory: IncrementalTheory, k: int) -> AcyclicityReport:
    """Every later component must be negative on the predicates of every
    earlier one, over B, P[1..k], Q[k]."""
    parts = theory.components(k)
    violations: list[tuple[Pred, str, str]] = []
    for i, (earlier_label, earlier) in enumerate(parts):
        earlier_preds = set(predicates_of(earlier))
        if not earlier_preds:
            continue
        for later_label, later in parts[i + 1 :]:
            for pred, depth in atom_occurrences(later):
                if depth == 0 and pred in earlier_preds:
                    violations.append((pred, earlier_label, later_label))
                    break
    return AcyclicityReport(k, tuple(violations))


def k_expansion(theory: IncrementalTheory, k: int) -> Formula:
    """B ^ P[1] ^ ... ^ P[k] ^ Q[k]."""
    return conj([formula for _, formula in theory.components(k)])


@dataclass(frozen=True)
class AssemblyState:
    step: int
    p_modules: tuple[FOModule, ...]  # cumulative joins, base first
    r_module: FOModule
    instantiated: tuple[tuple[str, Formula], ...]

    def out_sets(self) -> tuple[tuple[str, PredicateList], ...]:
        rows = [
            (f"P{i}", module.outputs) for i, module in enumerate(self.p_modules)
        ]
        rows.append((f"R{self.step}", self.r_module.outputs))
        return tuple(rows)


def assemble(theory: IncrementalTheory, k: int) -> AssemblyState:
    """Join the FM instantiations step by step; acyclicity is checked first,
    after which a join failure indicates a bug, not bad input."""
    report = acyclic_check(theory, k)
    if not report.ok:
        raise AcyclicityError(report)
    parts = theory.components(k)
    modules = [fm_instantiate(parts[0][1], ())]
    for label, formula in parts[1:-1]:
        step_module = fm_instantiate(formula, modules[-1].outputs)
        try:
            modules.append(join(modules[-1], step_module))
        except NotJoinableError as exc:  # pragma: no cover - theorem says impossible
            raise AssemblyError(f"join of {label} failed: {exc}") from exc
    q_label, q_formula = parts[-1]
    q_module = fm_instantiate(q_formula, modules[-1].outputs)
    try:
        r_module = join(modules[-1], q_module)
    except NotJoinableError as exc:  # pragma: no cover - theorem says impossible
        raise AssemblyError(f"join of {q_label} failed: {exc}") from exc
    return AssemblyState(k, tuple(modules), r_module, parts)


def _extent_key(model: PartialInterpretation, preds: Sequence[Pred]):
    return tuple((p, tuple(sorted(model.extent(p)))) for p in preds)


def _component_models(
    formula: Formula,
    inputs: PredicateList,
    universe: tuple[str, ...],
    objects: tuple[tuple[str, str], ...],
    max_candidates: int,
) -> list[PartialInterpretation]:
    module = fm_instantiate(formula, inputs)
    occurring = set(predicates_of(formula))
    in_preds = sorted(p for p in inputs if p in occurring)
    atoms = [
        (p, t) for p in in_preds for t in sorted(product(universe, repeat=p.arity))
    ]
    models: list[PartialInterpretation] = []
    for mask in range(1 << len(atoms)):
        extents: dict[Pred, list] = {p: [] for p in in_preds}
        for i, (p, t) in enumerate(atoms):
            if mask >> i & 1:
                extents[p].append(t)
        fixed = PartialInterpretation(
            universe, objects, tuple((p, tuple(ts)) for p, ts in extents.items())
        )
        models.extend(module_stable_models(module, fixed, max_candidates))
    return models


def incremental_solve(
    theory: IncrementalTheory,
    k: int,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> tuple[PartialInterpretation, ...]:
    """Solve each component module in assembly order and compose compatible
    partial models; equals the stable models of the k-expansion."""
    state = assemble(theory, k)  # also enforces acyclicity
    sig = signature_of(k_expansion(theory, k))
    if sig.functions:
        raise SignatureError("solving needs a function-free signature")
    if not sig.objects and any(p.arity for p in sig.predicates):
        raise SignatureError("no object constants for non-nullary predicates")
    universe = tuple(sorted(sig.objects)) or (PROP_ELEMENT,)
    objects = tuple((o, o) for o in sig.objects)

    groups: list[list[PartialInterpretation]] = []
    previous_out: PredicateList = ()
    for i, (label, formula) in enumerate(state.instantiated):
        inputs = () if i == 0 else previous_out
        groups.append(_component_models(formula, inputs, universe, objects, max_candidates))
        if i < len(state.p_modules):
            previous_out = state.p_modules[i].outputs

    running = groups[0]
    covered: set[Pred] = set(running[0].covered_predicates) if running else set()
    for models in groups[1:]:
        if not running or not models:
            running = []
            break
        cover = set(models[0].covered_predicates)
        shared = sorted(covered & cover)
        buckets: dict = {}
        for m in models:
            buckets.setdefault(_extent_key(m, shared), []).append(m)
        merged = []
        for u in running:
            for m in buckets.get(_extent_key(u, shared), ()):
                merged.append(u.union(m))
        running = merged
        covered |= cover
    unique = sorted(set(running), key=lambda m: m.true_atoms())
    return tuple(unique)
