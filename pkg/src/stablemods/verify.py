"""Named property suites: randomized desk-scale checks of the theorems.

Each suite draws inputs from a seeded generator, checks an exact property
(oracle agreement, theorem both-sides agreement, algebraic laws), and returns
a :class:`SuiteResult` with per-case failure descriptions.  The CLI `verify`
command and the acceptance tests both run these.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .herbrand import (
    DEFAULT_MAX_CANDIDATES,
    answer_sets,
    propositional_interpretation,
    sm_holds,
)
from .incremental import (
    DEFAULT_RULE_ORDER,
    REVERSED_RULE_ORDER,
    IncrementalTheory,
    acyclic_check,
    assemble,
    incremental_solve,
    k_expansion,
    project_formula,
    simplify,
)
from .modules import (
    DLPModule,
    FOModule,
    dlp_join,
    dlp_joinable,
    dlp_module_answer_sets,
    dlp_to_fo,
    join,
    joinable,
    module_stable_sets,
    module_theorem_check,
)
from .programs import BodyLiteral, HeadLiteral, Program, Rule, fol_representation
from .reduct import GroundRule, gl_answer_sets, to_ground_rules
from .sm import build_sm
from .syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Implies,
    Obj,
    Or,
    ParamAtom,
    Pred,
    StepExpr,
    Var,
    conj,
    fmt,
    neg,
    predicates_of,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    failures: tuple[str, ...]
    elapsed: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        line = f"{verdict} {self.name}: {self.cases} cases in {self.elapsed:.1f}s"
        if self.failures:
            line += f" ({len(self.failures)} failures)"
        return line


def _prop(name: str) -> Atom:
    return Atom(Pred(name, 0))


# ---------------------------------------------------------------------------
# Random ground programs


def _random_rules(
    rng: random.Random,
    atoms: Sequence[str],
    n_rules: int,
    head_not_p: float = 0.0,
    nneg_p: float = 0.2,
) -> list[Rule]:
    rules = []
    for _ in range(n_rules):
        n_head = rng.choice((0, 1, 1, 1, 2))
        head = tuple(
            HeadLiteral(_prop(a), negated=rng.random() < head_not_p)
            for a in rng.sample(atoms, min(n_head, len(atoms)))
        )
        body: list[BodyLiteral] = []
        for a in rng.sample(atoms, min(rng.randint(0, 2), len(atoms))):
            body.append(BodyLiteral(_prop(a), 0))
        for a in rng.sample(atoms, min(rng.randint(0, 2), len(atoms))):
            body.append(BodyLiteral(_prop(a), 1))
        if rng.random() < nneg_p:
            body.append(BodyLiteral(_prop(rng.choice(atoms)), 2))
        rules.append(Rule(head, tuple(body)))
    return rules


def oracle_suite(
    count: int = 500,
    seed: int = 2024,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> SuiteResult:
    """answer_sets on the FOL representation agrees with the reduct oracle."""
    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    for case in range(count):
        atoms = [f"a{i}" for i in range(rng.randint(1, 6))]
        program = Program.from_rules(
            _random_rules(rng, atoms, rng.randint(1, 8), head_not_p=0.15)
        )
        formula = fol_representation(program)
        via_sm = {
            frozenset(m.true_atoms())
            for m in answer_sets(formula, max_candidates)
        }
        via_reduct = gl_answer_sets(to_ground_rules(program))
        if via_sm != via_reduct:
            failures.append(f"case {case}: {via_sm} != {via_reduct}")
    return SuiteResult("oracle", count, tuple(failures), time.perf_counter() - started)


# ---------------------------------------------------------------------------
# Random joinable modules


def _random_dlp_pair(rng: random.Random) -> tuple[DLPModule, DLPModule]:
    while True:
        pool = [f"a{i}" for i in range(rng.randint(4, 6))]
        rng.shuffle(pool)
        n1 = rng.randint(1, 2)
        n2 = rng.randint(1, 2)
        o1, o2 = set(pool[:n1]), set(pool[n1 : n1 + n2])
        shared: list[GroundRule] = []
        if rng.random() < 0.7:
            body_pool = [a for a in pool if rng.random() < 0.4]
            shared.append(
                GroundRule(
                    ((rng.choice(sorted(o1)), False), (rng.choice(sorted(o2)), False)),
                    pos=tuple(rng.sample(body_pool, min(1, len(body_pool)))),
                    neg=tuple(rng.sample(pool, rng.randint(0, 1))),
                )
            )

        def own(outputs: set[str]) -> list[GroundRule]:
            rules = []
            for _ in range(rng.randint(1, 2)):
                if rng.random() < 0.2:
                    rules.append(
                        GroundRule((), pos=tuple(rng.sample(pool, 1)),
                                   neg=tuple(rng.sample(pool, rng.randint(0, 1))))
                    )
                    continue
                heads = tuple((a, False) for a in rng.sample(sorted(outputs),
                                                             rng.randint(1, len(outputs))))
                rules.append(
                    GroundRule(
                        heads,
                        pos=tuple(rng.sample(pool, rng.randint(0, 2))),
                        neg=tuple(rng.sample(pool, rng.randint(0, 1))),
                        nneg=tuple(rng.sample(pool, 1) if rng.random() < 0.2 else ()),
                    )
                )
            return rules

        rules1 = tuple(own(o1)) + tuple(shared)
        rules2 = tuple(own(o2)) + tuple(shared)
        from .reduct import atoms_of

        d1 = DLPModule(rules1, atoms_of(rules1) - o1, frozenset(o1))
        d2 = DLPModule(rules2, atoms_of(rules2) - o2, frozenset(o2))
        if dlp_joinable(d1, d2).ok:
            return d1, d2


def dlp_suite(count: int = 200, seed: int = 2024) -> SuiteResult:
    """The choice-rule characterization of inputs and ground compositionality
    on random joinable DLP-module pairs."""
    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    for case in range(count):
        d1, d2 = _random_dlp_pair(rng)
        try:
            as1 = dlp_module_answer_sets(d1)  # cross-checks both definitions
            as2 = dlp_module_answer_sets(d2)
        except Exception as exc:  # noqa: BLE001 - recorded as failure
            failures.append(f"case {case}: lemma-1 cross-check raised {exc}")
            continue
        joined = dlp_join(d1, d2)
        as_join = dlp_module_answer_sets(joined, cross_check=False)
        shared_atoms = (d1.inputs | d1.outputs) & (d2.inputs | d2.outputs)
        space1 = sorted(d1.inputs | d1.outputs)
        space2 = sorted(d2.inputs | d2.outputs)
        for m1 in range(1 << len(space1)):
            x1 = frozenset(space1[i] for i in range(len(space1)) if m1 >> i & 1)
            for m2 in range(1 << len(space2)):
                x2 = frozenset(space2[i] for i in range(len(space2)) if m2 >> i & 1)
                if x1 & shared_atoms != x2 & shared_atoms:
                    continue
                lhs = (x1 | x2) in as_join
                rhs = x1 in as1 and x2 in as2
                if lhs != rhs:
                    failures.append(f"case {case}: ground composition fails at {x1} / {x2}")
    return SuiteResult("dlp", count, tuple(failures), time.perf_counter() - started)


def module_theorem_suite(count: int = 200, seed: int = 2024) -> SuiteResult:
    """Both sides of the module theorem agree over every compatible pair of
    partial interpretations of random joinable propositional module pairs."""
    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    for case in range(count):
        d1, d2 = _random_dlp_pair(rng)
        m1, m2 = dlp_to_fo(d1), dlp_to_fo(d2)
        if not joinable(m1, m2).ok:
            failures.append(f"case {case}: lifted pair unexpectedly not joinable")
            continue
        joined = join(m1, m2)
        sos_join = build_sm(joined.formula, joined.outputs)
        sos1 = build_sm(m1.formula, m1.outputs)
        sos2 = build_sm(m2.formula, m2.outputs)
        preds1 = tuple(sorted(set(predicates_of(m1.formula)) | set(m1.outputs)))
        preds2 = tuple(sorted(set(predicates_of(m2.formula)) | set(m2.outputs)))
        shared = sorted(set(preds1) & set(preds2))
        only2 = [p for p in preds2 if p not in set(preds1)]
        checked_op = False
        for mask1 in range(1 << len(preds1)):
            true1 = {preds1[i] for i in range(len(preds1)) if mask1 >> i & 1}
            i1 = propositional_interpretation(true1, preds1)
            for mask2 in range(1 << len(only2)):
                true2 = {only2[i] for i in range(len(only2)) if mask2 >> i & 1}
                true2 |= {p for p in shared if p in true1}
                i2 = propositional_interpretation(true2, preds2)
                lhs = sm_holds(i1.union(i2), sos_join)
                rhs = sm_holds(i1, sos1) and sm_holds(i2, sos2)
                if lhs != rhs:
                    failures.append(
                        f"case {case}: module theorem fails at {i1.model_line()} / {i2.model_line()}"
                    )
                if not checked_op:
                    checked_op = True
                    if not module_theorem_check(m1, m2, i1, i2):
                        failures.append(f"case {case}: module_theorem_check returned False")
    return SuiteResult("module-theorem", count, tuple(failures), time.perf_counter() - started)


def _random_dlp_triple(rng: random.Random) -> tuple[FOModule, FOModule, FOModule]:
    pool = [f"a{i}" for i in range(6)]
    rng.shuffle(pool)
    outs = [{pool[0]}, {pool[1]}, {pool[2]}]
    if rng.random() < 0.5:
        outs[rng.randrange(3)].add(pool[3])
    strict = rng.random() < 0.7  # sometimes skip filters to exercise "not defined"
    modules = []
    shared_pairs = {}
    for i in range(3):
        for j in range(i + 1, 3):
            if rng.random() < 0.5:
                shared_pairs[(i, j)] = GroundRule(
                    ((rng.choice(sorted(outs[i])), False), (rng.choice(sorted(outs[j])), False)),
                    pos=tuple(rng.sample(pool, rng.randint(0, 1))),
                    neg=tuple(rng.sample(pool, rng.randint(0, 1))),
                )
    from .reduct import atoms_of

    for i in range(3):
        rules: list[GroundRule] = []
        for _ in range(rng.randint(1, 2)):
            heads = tuple((a, False) for a in rng.sample(sorted(outs[i]),
                                                         rng.randint(1, len(outs[i]))))
            rules.append(
                GroundRule(
                    heads,
                    pos=tuple(rng.sample(pool, rng.randint(0, 2 if strict else 3))),
                    neg=tuple(rng.sample(pool, rng.randint(0, 1))),
                )
            )
        for (a, b), rule in shared_pairs.items():
            if i in (a, b):
                rules.append(rule)
        d = DLPModule(tuple(rules), atoms_of(tuple(rules)) - outs[i], frozenset(outs[i]))
        modules.append(dlp_to_fo(d))
    return tuple(modules)


def _defined(*steps) -> FOModule | None:
    current = steps[0]
    for m in steps[1:]:
        if not joinable(current, m).ok:
            return None
        current = join(current, m)
    return current


def join_algebra_suite(count: int = 200, seed: int = 2024) -> SuiteResult:
    """Commutativity and associativity of join: definedness both ways, and
    equality of the stable-model sets when defined."""
    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    joinable_triples = 0
    case = 0
    while joinable_triples < count:
        case += 1
        m1, m2, m3 = _random_dlp_triple(rng)
        if joinable(m1, m2).ok != joinable(m2, m1).ok:
            failures.append(f"case {case}: commutative definedness differs")
            continue
        if joinable(m1, m2).ok:
            left = join(m1, m2)
            right = join(m2, m1)
            if module_stable_sets(left) != module_stable_sets(right):
                failures.append(f"case {case}: commuted joins have different models")
        left_assoc = _defined(m1, m2, m3)
        inner = _defined(m2, m3)
        right_assoc = None if inner is None else _defined(m1, inner)
        if (left_assoc is None) != (right_assoc is None):
            failures.append(f"case {case}: associative definedness differs")
            continue
        if left_assoc is None:
            continue
        joinable_triples += 1
        if module_stable_sets(left_assoc) != module_stable_sets(right_assoc):
            failures.append(f"case {case}: associated joins have different models")
    return SuiteResult("join-algebra", joinable_triples, tuple(failures), time.perf_counter() - started)


# ---------------------------------------------------------------------------
# Random acyclic incremental theories


def _random_theory(rng: random.Random) -> tuple[IncrementalTheory, int]:
    def at(base: str, offset: int) -> ParamAtom:
        return ParamAtom(base, StepExpr(offset), ())

    base_preds = [f"b{i}" for i in range(rng.randint(1, 2))]
    base_parts: list = []
    for name in base_preds:
        if rng.random() < 0.7:
            base_parts.append(_prop(name))
        else:
            other = rng.choice(base_preds)
            base_parts.append(Implies(neg(_prop(other)), _prop(name)))
    step_bases = ["c", "d"][: rng.randint(1, 2)]

    def step_body() -> list:
        body = []
        for b in step_bases:
            if rng.random() < 0.5:
                body.append(at(b, -1))
        for name in base_preds:
            if rng.random() < 0.3:
                lit = _prop(name)
                body.append(neg(lit) if rng.random() < 0.5 else lit)
        return body

    cumulative_parts = []
    for b in step_bases:
        body = step_body()
        head = at(b, 0)
        cumulative_parts.append(Implies(conj(body), head) if body else head)
    if rng.random() < 0.3 and step_bases:
        cumulative_parts.append(neg(conj([at(step_bases[0], 0), _prop(base_preds[0])])))

    volatile_parts = []
    roll = rng.random()
    if roll < 0.4 and step_bases:
        volatile_parts.append(neg(at(step_bases[-1], 0)))
    elif roll < 0.7 and step_bases:
        volatile_parts.append(neg(neg(at(step_bases[0], 0))))
    elif roll < 0.85:
        # volatile bodies stay at offset 0 so instantiation works at k = 0
        body = [at(b, 0) for b in step_bases if rng.random() < 0.5]
        body += [_prop(n) for n in base_preds if rng.random() < 0.3]
        head = at("g", 0)
        volatile_parts.append(Implies(conj(body), head) if body else head)

    theory = IncrementalTheory(
        conj(base_parts), conj(cumulative_parts), conj(volatile_parts)
    )
    return theory, rng.randint(0, 3)


def incremental_suite(count: int = 100, seed: int = 2024) -> SuiteResult:
    """Propositions 3-5: assembly of a random acyclic theory never hits a join
    failure, and compositional solving equals the k-expansion's answer sets."""
    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    for case in range(count):
        theory, k = _random_theory(rng)
        report = acyclic_check(theory, k)
        if not report.ok:
            failures.append(f"case {case}: generated theory not acyclic: {report}")
            continue
        try:
            state = assemble(theory, k)
        except Exception as exc:  # noqa: BLE001
            failures.append(f"case {case}: assemble failed: {exc}")
            continue
        # Out(P_i) must match the predicates of the expansion prefix
        prefix = []
        for i, (label, formula) in enumerate(state.instantiated[:-1]):
            prefix.append(formula)
            if set(state.p_modules[i].outputs) != set(predicates_of(conj(prefix))):
                failures.append(f"case {case}: out-set mismatch at {label}")
        via_components = incremental_solve(theory, k)
        via_expansion = answer_sets(k_expansion(theory, k))
        if via_components != via_expansion:
            failures.append(
                f"case {case}, k={k}: composition gives "
                f"{[m.model_line() for m in via_components]}, expansion gives "
                f"{[m.model_line() for m in via_expansion]}"
            )
    return SuiteResult("incremental", count, tuple(failures), time.perf_counter() - started)


# ---------------------------------------------------------------------------
# Random formulas for the rewriting properties


def _random_formula(rng: random.Random, depth: int):
    preds = [Pred("p", 0), Pred("q", 0), Pred("r", 1), Pred("s", 1)]
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.1:
            return Bot()
        if roll < 0.2:
            return Eq(Var("x"), Obj("a")) if rng.random() < 0.5 else Eq(Obj("a"), Obj("b"))
        pred = rng.choice(preds)
        args = tuple(
            rng.choice((Var("x"), Var("y"), Obj("a"))) for _ in range(pred.arity)
        )
        return Atom(pred, args)
    kind = rng.randrange(5)
    if kind < 3:
        node = (And, Or, Implies)[kind]
        return node(_random_formula(rng, depth - 1), _random_formula(rng, depth - 1))
    node = (Forall, Exists)[kind - 3]
    return node(rng.choice(("x", "y")), _random_formula(rng, depth - 1))


def projection_suite(count: int = 1000, seed: int = 2024) -> SuiteResult:
    """Projection idempotence, predicate confinement, and independence of the
    rewrite order."""
    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    all_preds = [Pred("p", 0), Pred("q", 0), Pred("r", 1), Pred("s", 1)]
    for case in range(count):
        f = _random_formula(rng, rng.randint(1, 5))
        keep = tuple(p for p in all_preds if rng.random() < 0.5)
        once = project_formula(f, keep)
        if project_formula(once, keep) != once:
            failures.append(f"case {case}: projection not idempotent on {fmt(f)}")
        if not set(predicates_of(once)) <= set(keep):
            failures.append(f"case {case}: stray predicates in {fmt(once)}")
        if simplify(f, DEFAULT_RULE_ORDER) != simplify(f, REVERSED_RULE_ORDER):
            failures.append(f"case {case}: rewrite order matters on {fmt(f)}")
    return SuiteResult("projection", count, tuple(failures), time.perf_counter() - started)


def splitting_suite(count: int = 50, seed: int = 2024, bound: int = 2) -> SuiteResult:
    """Extended splitting: on random joinable pairs, the split conditions hold
    for (own1, own2, shared) and both sides agree on every interpretation up
    to the universe bound."""
    from .splitting import check_split, verify_split_equivalence

    rng = random.Random(seed)
    failures = []
    started = time.perf_counter()
    for case in range(count):
        d1, d2 = _random_dlp_pair(rng)
        m1, m2 = dlp_to_fo(d1), dlp_to_fo(d2)
        report = joinable(m1, m2)
        f, g, h = conj(report.left_rest), conj(report.right_rest), conj(report.shared)
        split = check_split(f, g, h, m1.outputs, m2.outputs)
        if not split.ok:
            failures.append(f"case {case}: joinable pair fails split conditions: {split}")
            continue
        if not verify_split_equivalence(f, g, h, m1.outputs, m2.outputs, bound):
            failures.append(f"case {case}: split equivalence fails at bound {bound}")
    return SuiteResult("splitting", count, tuple(failures), time.perf_counter() - started)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "oracle": oracle_suite,
    "module-theorem": module_theorem_suite,
    "join-algebra": join_algebra_suite,
    "dlp": dlp_suite,
    "incremental": incremental_suite,
    "projection": projection_suite,
    "splitting": splitting_suite,
}


def run_suite(name: str, **kwargs) -> SuiteResult:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    return suite(**kwargs)
