"""First-order modules with join, the module-theorem harness, and DLP-modules
as the ground special case.

A first-order module is a conjunct list with disjoint input and output
predicate lists covering every predicate of the formula.  Joinability factors
the two conjunct lists through their maximal shared part (structural equality
up to bound-variable renaming) and then checks output disjointness, the
component condition on the dependency graph, and mutual negativity of the
non-shared parts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import IncompatibleError, NotJoinableError, SignatureError, StableModsError
from .herbrand import (
    DEFAULT_MAX_CANDIDATES,
    PartialInterpretation,
    propositional_interpretation,
    sm_holds,
)
from .reduct import GroundRule, atoms_of, gl_answer_sets, is_answer_set
from .sm import build_sm
from .splitting import dependency_graph, strongly_connected_components
from .syntax import (
    Atom,
    Formula,
    Implies,
    Pred,
    PredicateList,
    canonical,
    conj,
    disj,
    fmt,
    is_top,
    neg,
    predicate_list,
    predicates_of,
    symbols_of,
    top,
)


@dataclass(frozen=True)
class FOModule:
    conjuncts: tuple[Formula, ...]
    inputs: PredicateList
    outputs: PredicateList

    def __post_init__(self):
        predicate_list(self.inputs)
        predicate_list(self.outputs)
        overlap = set(self.inputs) & set(self.outputs)
        if overlap:
            raise SignatureError(f"inputs and outputs overlap: {sorted(map(str, overlap))}")
        stray = set(predicates_of(self.formula)) - set(self.inputs) - set(self.outputs)
        if stray:
            raise SignatureError(
                f"predicates outside the interface: {sorted(map(str, stray))}"
            )

    @property
    def formula(self) -> Formula:
        return conj(self.conjuncts)

    def __str__(self) -> str:
        ins = ", ".join(map(str, self.inputs))
        outs = ", ".join(map(str, self.outputs))
        return f"({fmt(self.formula)}, {{{ins}}}, {{{outs}}})"


def _ordered_union(a: Sequence[Pred], b: Sequence[Pred]) -> PredicateList:
    return tuple(dict.fromkeys(tuple(a) + tuple(b)))


@dataclass(frozen=True)
class JoinabilityReport:
    shared: tuple[Formula, ...]
    left_rest: tuple[Formula, ...]
    right_rest: tuple[Formula, ...]
    output_clash: PredicateList
    bad_component: tuple[Pred, ...] | None
    left_witness: Pred | None
    right_witness: Pred | None

    @property
    def outputs_disjoint(self) -> bool:
        return not self.output_clash

    @property
    def ok(self) -> bool:
        return (
            self.outputs_disjoint
            and self.bad_component is None
            and self.left_witness is None
            and self.right_witness is None
        )

    def __str__(self) -> str:
        if self.ok:
            return "joinable"
        if self.output_clash:
            names = ", ".join(map(str, self.output_clash))
            return f"not joinable: outputs share {{{names}}}"
        if self.bad_component is not None:
            names = ", ".join(map(str, self.bad_component))
            return f"not joinable: component {{{names}}} straddles both output lists"
        if self.left_witness is not None:
            return (
                f"not joinable: {self.left_witness} of the second module's outputs "
                f"occurs strictly positively in the first module's own part"
            )
        return (
            f"not joinable: {self.right_witness} of the first module's outputs "
            f"occurs strictly positively in the second module's own part"
        )


def _split_shared(m1: FOModule, m2: FOModule):
    """Factor the conjunct lists as F1 ++ H / F2 ++ H with H the maximal
    common multiset of conjuncts (order preserved from the first module)."""
    available = Counter(canonical(c) for c in m2.conjuncts)
    shared: list[Formula] = []
    left_rest: list[Formula] = []
    for c in m1.conjuncts:
        key = canonical(c)
        if available[key] > 0:
            available[key] -= 1
            shared.append(c)
        else:
            left_rest.append(c)
    remaining = Counter(canonical(c) for c in shared)
    right_rest: list[Formula] = []
    for c in m2.conjuncts:
        key = canonical(c)
        if remaining[key] > 0:
            remaining[key] -= 1
        else:
            right_rest.append(c)
    return tuple(shared), tuple(left_rest), tuple(right_rest)


def _strict_witness(parts: Iterable[Formula], preds: Iterable[Pred]) -> Pred | None:
    from .syntax import atom_occurrences

    wanted = set(preds)
    for part in parts:
        for pred, depth in atom_occurrences(part):
            if depth == 0 and pred in wanted:
                return pred
    return None


def _subtract_conjuncts(conjuncts: tuple[Formula, ...], shared: Sequence[Formula]):
    available = Counter(canonical(c) for c in shared)
    rest = []
    for c in conjuncts:
        key = canonical(c)
        if available[key] > 0:
            available[key] -= 1
        else:
            rest.append(c)
    if +available:
        missing = next(iter(+available))
        raise SignatureError(
            f"declared shared part is not contained in the module: {missing}"
        )
    return tuple(rest)


def joinable(
    m1: FOModule, m2: FOModule, shared: Sequence[Formula] | None = None
) -> JoinabilityReport:
    if shared is not None:
        shared = tuple(shared)
        left_rest = _subtract_conjuncts(m1.conjuncts, shared)
        right_rest = _subtract_conjuncts(m2.conjuncts, shared)
    else:
        shared, left_rest, right_rest = _split_shared(m1, m2)
    clash = tuple(sorted(set(m1.outputs) & set(m2.outputs)))
    merged_outputs = _ordered_union(m1.outputs, m2.outputs)
    graph = dependency_graph(conj(left_rest + right_rest + shared), merged_outputs)
    bad = None
    o1, o2 = set(m1.outputs), set(m2.outputs)
    for component in strongly_connected_components(graph):
        members = set(component)
        if not (members <= o1 or members <= o2):
            bad = component
            break
    return JoinabilityReport(
        shared=shared,
        left_rest=left_rest,
        right_rest=right_rest,
        output_clash=clash,
        bad_component=bad,
        left_witness=_strict_witness(left_rest, m2.outputs),
        right_witness=_strict_witness(right_rest, m1.outputs),
    )


def join(
    m1: FOModule, m2: FOModule, shared: Sequence[Formula] | None = None
) -> FOModule:
    report = joinable(m1, m2, shared)
    if not report.ok:
        raise NotJoinableError(report)
    outputs = _ordered_union(m1.outputs, m2.outputs)
    inputs = tuple(
        p for p in _ordered_union(m1.inputs, m2.inputs) if p not in set(outputs)
    )
    return FOModule(report.left_rest + report.right_rest + report.shared, inputs, outputs)


def module_theorem_check(
    m1: FOModule,
    m2: FOModule,
    i1: PartialInterpretation,
    i2: PartialInterpretation,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> bool:
    """Whether both sides of the module theorem agree on the given pair of
    compatible partial interpretations.  A False return is a bug signal."""
    joined = join(m1, m2)
    if not i1.compatible(i2):
        raise IncompatibleError("the partial interpretations are not compatible")
    for m, i in ((m1, i1), (m2, i2)):
        objs, _, preds = symbols_of(m.formula)
        needed = set(preds) | set(m.outputs)
        if not needed <= i.covered_predicates:
            missing = needed - i.covered_predicates
            raise SignatureError(f"interpretation misses {sorted(map(str, missing))}")
        if not set(objs) <= i.covered_objects:
            raise SignatureError("interpretation misses object constants of the module")
    union = i1.union(i2)
    lhs = sm_holds(union, build_sm(joined.formula, joined.outputs), max_candidates)
    rhs = sm_holds(i1, build_sm(m1.formula, m1.outputs), max_candidates) and sm_holds(
        i2, build_sm(m2.formula, m2.outputs), max_candidates
    )
    return lhs == rhs


def module_stable_sets(
    module: FOModule, max_candidates: int = DEFAULT_MAX_CANDIDATES
) -> frozenset[frozenset[str]]:
    """Stable models of a propositional module as sets of true atom names,
    ranging over all input valuations."""
    preds = _ordered_union(module.inputs, module.outputs)
    if any(p.arity for p in preds):
        raise SignatureError("atom-set view needs a propositional module")
    sos = build_sm(module.formula, module.outputs)
    out = set()
    members = sorted(preds)
    for mask in range(1 << len(members)):
        true = {members[i] for i in range(len(members)) if mask >> i & 1}
        interp = propositional_interpretation(true, preds)
        if sm_holds(interp, sos, max_candidates):
            out.add(frozenset(p.name for p in true))
    return frozenset(out)


# ---------------------------------------------------------------------------
# DLP-modules (ground case; atoms are canonical strings)


@dataclass(frozen=True)
class DLPModule:
    rules: tuple[GroundRule, ...]
    inputs: frozenset[str]
    outputs: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        if self.inputs & self.outputs:
            raise SignatureError("inputs and outputs overlap")
        stray = atoms_of(self.rules) - self.inputs - self.outputs
        if stray:
            raise SignatureError(f"atoms outside the interface: {sorted(stray)}")
        for rule in self.rules:
            if rule.head and not any(a in self.outputs for a, _ in rule.head):
                raise SignatureError(f"rule {rule} has no output atom in its head")

    def __str__(self) -> str:
        rules = " ".join(str(r) for r in self.rules)
        return f"({{{rules}}}, {{{', '.join(sorted(self.inputs))}}}, {{{', '.join(sorted(self.outputs))}}})"


@dataclass(frozen=True)
class DLPJoinReport:
    output_clash: frozenset[str]
    bad_component: tuple[str, ...] | None
    unshared_rule: GroundRule | None

    @property
    def ok(self) -> bool:
        return not self.output_clash and self.bad_component is None and self.unshared_rule is None

    def __str__(self) -> str:
        if self.ok:
            return "joinable"
        if self.output_clash:
            return f"not joinable: outputs share {sorted(self.output_clash)}"
        if self.bad_component is not None:
            return f"not joinable: component {sorted(self.bad_component)} straddles both modules"
        return f"not joinable: rule {self.unshared_rule} defines foreign outputs but is not shared"


def _dlp_sccs(rules: Iterable[GroundRule], vertices: frozenset[str]) -> list[tuple[str, ...]]:
    edges: dict[str, set[str]] = {v: set() for v in sorted(vertices)}
    for r in rules:
        heads = [a for a, negated in r.head if not negated and a in vertices]
        bodies = [b for b in r.pos if b in vertices]
        for h in heads:
            edges[h].update(bodies)
    from .splitting import tarjan_components

    return tarjan_components(sorted(vertices), lambda v: sorted(edges[v]))


def dlp_joinable(d1: DLPModule, d2: DLPModule) -> DLPJoinReport:
    clash = d1.outputs & d2.outputs
    vertices = d1.outputs | d2.outputs
    bad = None
    for component in _dlp_sccs(d1.rules + d2.rules, vertices):
        members = set(component)
        if not (members <= d1.outputs or members <= d2.outputs):
            bad = component
            break
    unshared = None
    for own, other, foreign in ((d1, d2, d2.outputs), (d2, d1, d1.outputs)):
        for rule in own.rules:
            head_atoms = {a for a, _ in rule.head}
            if head_atoms & foreign and rule not in other.rules:
                unshared = rule
                break
        if unshared:
            break
    return DLPJoinReport(clash, bad, unshared)


def dlp_join(d1: DLPModule, d2: DLPModule) -> DLPModule:
    report = dlp_joinable(d1, d2)
    if not report.ok:
        raise NotJoinableError(report)
    rules = tuple(dict.fromkeys(d1.rules + d2.rules))
    outputs = d1.outputs | d2.outputs
    inputs = (d1.inputs | d2.inputs) - outputs
    return DLPModule(rules, inputs, outputs)


def dlp_module_answer_sets(
    module: DLPModule, cross_check: bool = True
) -> frozenset[frozenset[str]]:
    """Module answer sets, via the choice-rule characterization; optionally
    cross-checked against the fact-addition definition."""
    atoms = sorted(module.inputs | module.outputs)
    choice_rules = tuple(GroundRule(((a, False), (a, True))) for a in sorted(module.inputs))
    via_choice = gl_answer_sets(module.rules + choice_rules, atoms=atoms)
    if cross_check:
        via_definition = set()
        n = len(atoms)
        for mask in range(1 << n):
            x = frozenset(atoms[i] for i in range(n) if mask >> i & 1)
            facts = tuple(GroundRule(((a, False),)) for a in sorted(x & module.inputs))
            if is_answer_set(module.rules + facts, x):
                via_definition.add(x)
        if via_choice != frozenset(via_definition):
            raise StableModsError(
                "internal error: choice-rule and fact-addition answer sets diverge"
            )
    return via_choice


def dlp_to_fo(module: DLPModule) -> FOModule:
    """The first-order view of a ground module: one implication per rule over
    nullary predicates named by the atoms."""

    def atom(name: str) -> Formula:
        return Atom(Pred(name, 0))

    conjuncts = []
    for rule in module.rules:
        head = disj([neg(atom(a)) if negated else atom(a) for a, negated in rule.head])
        body_parts = (
            [atom(a) for a in rule.pos]
            + [neg(atom(a)) for a in rule.neg]
            + [neg(neg(atom(a))) for a in rule.nneg]
        )
        conjuncts.append(Implies(conj(body_parts), head) if body_parts else head)
    if not conjuncts:
        conjuncts = [top()]
    inputs = tuple(Pred(a, 0) for a in sorted(module.inputs))
    outputs = tuple(Pred(a, 0) for a in sorted(module.outputs))
    return FOModule(tuple(conjuncts), inputs, outputs)


# ---------------------------------------------------------------------------
# Module files


def module_from_program(program, inputs: Sequence[Pred], outputs: Sequence[Pred]) -> FOModule:
    """Build a module from a parsed program and its interface headers; body
    predicates left undeclared become outputs, with a warning."""
    import warnings

    from .programs import rule_formula

    conjuncts = tuple(rule_formula(r) for r in program.rules)
    declared = set(inputs) | set(outputs)
    undeclared = [p for p in predicates_of(conj(conjuncts)) if p not in declared]
    if undeclared:
        warnings.warn(
            f"undeclared predicates default to outputs: {', '.join(map(str, undeclared))}",
            stacklevel=2,
        )
    return FOModule(conjuncts, tuple(inputs), tuple(outputs) + tuple(undeclared))


def module_file_text(module: FOModule) -> str:
    """Render a module back into the file format (interface headers followed by
    rules).  Conjuncts outside the rule fragment cannot be rendered."""
    from .programs import rule_text_of

    lines = []
    if module.inputs:
        lines.append("#input " + ", ".join(str(p) for p in module.inputs) + ".")
    if module.outputs:
        lines.append("#output " + ", ".join(str(p) for p in module.outputs) + ".")
    for c in module.conjuncts:
        if is_top(c):
            lines.append("% true conjunct omitted")
            continue
        lines.append(rule_text_of(c))
    return "\n".join(lines) + "\n"
