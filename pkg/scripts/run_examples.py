#!/usr/bin/env python3
"""Drive the worked examples end to end and print what each stage produces.

Everything here is desk scale; the whole script runs in well under a minute.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stablemods.herbrand import (
    PartialInterpretation,
    answer_sets,
    module_stable_models,
)
from stablemods.incremental import (
    IncrementalTheory,
    assemble,
    dm_instantiate,
    fm_trace,
    incremental_solve,
    k_expansion,
)
from stablemods.modules import FOModule, join, joinable
from stablemods.programs import (
    fol_representation,
    parse_formula,
    parse_program,
    rule_formula,
)
from stablemods.sm import build_sm, fmt_sm
from stablemods.splitting import check_split, verify_split_equivalence
from stablemods.syntax import Pred, fmt, predicates_of

GRAPH = """
vertex(a). vertex(b). vertex(c). vertex(d). vertex(e). vertex(f).
edge(a,a). edge(a,b). edge(b,c). edge(c,b). edge(c,c). edge(d,e).
edge(d,f). edge(e,d). edge(e,f). edge(f,d). edge(f,e). at(a).
"""

REACH = """
reachable(X) :- at(X).
reachable(Y) :- reachable(X), edge(X, Y).
"""

CLIQUE = """
{in_clique(X)} :- reachable(X).
:- in_clique(X), in_clique(Y), not edge(X,Y), X != Y.
:- not 2 {X : in_clique(X)}.
"""


def banner(text):
    print(f"\n=== {text} ===")


def three_fact_program():
    banner("a small program, its translation, and its answer set")
    program = parse_program("p(a). q(b). r(x) :- p(x), not q(x).")
    f = fol_representation(program)
    print("translation: ", fmt(f))
    print("SM sentence: ", fmt_sm(build_sm(f, predicates_of(f))))
    for model in answer_sets(f):
        print("answer set:  ", model.model_line())


def partial_split():
    banner("splitting with a shared disjunctive rule")
    f, g = parse_formula("s"), parse_formula("t")
    h = parse_formula("r -> p | q")
    p = (Pred("p", 0), Pred("s", 0))
    q = (Pred("q", 0), Pred("t", 0))
    report = check_split(f, g, h, p, q)
    print("conditions:  ", report)
    print(
        "semantics:   both sides agree on every interpretation:",
        verify_split_equivalence(f, g, h, p, q, bound=1),
    )
    program = parse_program("p ; q :- r. s. t.")
    for model in answer_sets(fol_representation(program)):
        print("answer set of the composed program:", model.model_line())


def clique_pipeline():
    banner("reachable-clique pipeline, one module at a time")

    def module(text, inputs, outputs):
        program = parse_program(text)
        return FOModule(
            tuple(rule_formula(r) for r in program.rules), inputs, outputs
        )

    vertex, edge, at = Pred("vertex", 1), Pred("edge", 2), Pred("at", 1)
    reachable, in_clique = Pred("reachable", 1), Pred("in_clique", 1)
    f_g = module(GRAPH, (), (vertex, edge, at))
    f_r = module(REACH, (edge, at), (reachable,))
    f_c = module(CLIQUE, (reachable, edge), (in_clique,))
    print("graph # reach joinable:", joinable(f_g, f_r).ok)
    print("joined outputs:        ", ", ".join(str(p) for p in join(f_g, f_r).outputs))

    universe = tuple("abcdef")
    seed = PartialInterpretation(universe, tuple((o, o) for o in universe))
    (g_model,) = module_stable_models(f_g, seed)
    (r_model,) = module_stable_models(f_r, g_model.restrict(predicates=[edge, at]))
    (c_model,) = module_stable_models(
        f_c, r_model.restrict(predicates=[edge, reachable])
    )
    print("reachable extent:", sorted(r_model.extent(reachable)))
    print("in_clique extent:", sorted(c_model.extent(in_clique)))
    composite = g_model.union(r_model).union(c_model)
    print("composite model:", composite.model_line())


def instantiation_traces():
    banner("projection fixpoints: formula view vs ground view")
    f = parse_formula("(p -> q) & (q -> r) & (t & -r -> s)")
    for i, step in enumerate(fm_trace(f, (Pred("t", 0), Pred("m", 0)))):
        print(f"F{i}: {fmt(step)}")
    program = parse_program("n :- t. p :- q, t. q :- r, not s. r :- m.")
    print("ground module:", dm_instantiate(program, {"l", "t"}))


def incremental_counter():
    banner("incremental chain with a volatile goal")
    theory = IncrementalTheory.from_source(
        "#base. p@(0).\n"
        "#cumulative t. p@(t) :- p@(t-1).\n"
        "#volatile t. :- not p@(t).\n"
    )
    for k in range(3):
        state = assemble(theory, k)
        models = incremental_solve(theory, k)
        print(f"k={k}: expansion {fmt(k_expansion(theory, k))}")
        print(f"      R{k} outputs {[str(p) for p in state.r_module.outputs]}")
        print(f"      models {[m.model_line() for m in models]}")


if __name__ == "__main__":
    three_fact_program()
    partial_split()
    clique_pipeline()
    instantiation_traces()
    incremental_counter()
