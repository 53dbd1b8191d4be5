"""Acceptance gate: one test per criterion, each printing its verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every stated tolerance and budget is asserted here, nothing is deferred.
"""

import time
from pathlib import Path

from stablemods.cli import main
from stablemods.herbrand import (
    PartialInterpretation,
    answer_sets,
    evaluate,
    herbrand_interpretations,
    module_stable_models,
    sm_holds,
)
from stablemods.incremental import dm_instantiate, fm_instantiate, project_formula
from stablemods.modules import dlp_join, dlp_module_answer_sets
from stablemods.programs import fol_representation, parse_program
from stablemods.reduct import GroundRule, gl_answer_sets, to_ground_rules
from stablemods.sm import build_sm
from stablemods.splitting import check_split, verify_split_equivalence
from stablemods.syntax import (
    And,
    Forall,
    Implies,
    Or,
    Pred,
    Signature,
    conj,
    neg,
    signature_of,
)
from stablemods.verify import run_suite

from helpers import (
    GRAPH_FACTS,
    REACH_RULES,
    CLIQUE_RULES,
    clique_interpretations,
    clique_modules,
    sample_formula,
    sample_equivalent,
    pa,
    projection_sample,
    prop,
)

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def report(number: int, text: str) -> None:
    print(f"[acceptance] criterion {number}: PASS — {text}")


def test_criterion_01_three_fact_program_answer_set(capsys):
    started = time.perf_counter()
    code = main(["solve", str(DATA / "sec21.lp")])
    elapsed = time.perf_counter() - started
    out = capsys.readouterr().out
    assert code == 0
    assert out == "{p(a), q(b), r(a)}\n"
    assert elapsed < 1.0
    with capsys.disabled():
        report(1, f"solve prints the unique answer set in {elapsed:.3f}s")


def test_criterion_02_sm_equivalent_to_first_order_sentence(capsys):
    started = time.perf_counter()
    f1 = sample_formula()
    f2 = sample_equivalent()
    sig = signature_of(f1)
    sos = build_sm(f1, sig.predicates)
    space = list(herbrand_interpretations(sig))
    assert len(space) == 64
    stable = {i for i in space if sm_holds(i, sos)}
    classical = {i for i in space if evaluate(i, f2)}
    assert stable == classical
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    with capsys.disabled():
        report(2, f"the SM sentence and its first-order equivalent agree on all 64 interpretations "
                  f"({elapsed:.3f}s)")


def test_criterion_03_extended_splitting(capsys):
    started = time.perf_counter()
    shared = Implies(prop("r"), Or(prop("p"), prop("q")))
    p = (Pred("p", 0), Pred("s", 0))
    q = (Pred("q", 0), Pred("t", 0))
    split = check_split(prop("s"), prop("t"), shared, p, q)
    assert split.ok
    assert verify_split_equivalence(prop("s"), prop("t"), shared, p, q, bound=1)

    # the composed program, everything intensional, via both engines
    program = parse_program("p ; q :- r. s. t.")
    stable = {frozenset(m.true_atoms()) for m in answer_sets(fol_representation(program))}
    oracle = gl_answer_sets(to_ground_rules(program), atoms="pqrst")
    assert stable == oracle == {frozenset({"s", "t"})}

    # module-level composition agrees with the join's module answer sets
    from stablemods.modules import DLPModule

    rule = GroundRule((("p", False), ("q", False)), pos=("r",))
    m1 = DLPModule((rule, GroundRule((("s", False),))), {"q", "r"}, {"p", "s"})
    m2 = DLPModule((rule, GroundRule((("t", False),))), {"p", "r"}, {"q", "t"})
    as1, as2 = dlp_module_answer_sets(m1), dlp_module_answer_sets(m2)
    joined = dlp_join(m1, m2)
    composed = set()
    shared_atoms = (m1.inputs | m1.outputs) & (m2.inputs | m2.outputs)
    for x1 in as1:
        for x2 in as2:
            if x1 & shared_atoms == x2 & shared_atoms:
                composed.add(x1 | x2)
    assert composed == dlp_module_answer_sets(joined)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    with capsys.disabled():
        report(3, f"partial split of the shared disjunctive rule verified exactly "
                  f"({elapsed:.3f}s)")


def test_criterion_04_instantiation_trace_golden(capsys):
    code = main(["instantiate", str(DATA / "chain.fol"), "--input", "t,m"])
    out = capsys.readouterr().out
    assert code == 0
    assert out == (GOLDEN / "chain_trace.txt").read_text(encoding="utf-8")
    with capsys.disabled():
        report(4, "projection trace is byte-identical to the golden file")


def test_criterion_05_fm_and_dm_of_four_rule_program(capsys):
    program = parse_program((DATA / "four_rules.lp").read_text(encoding="utf-8"))
    f = fol_representation(program)
    l0, t0 = Pred("l", 0), Pred("t", 0)
    fm = fm_instantiate(f, (l0, t0))
    assert fm.conjuncts == (Implies(prop("t"), prop("n")),)
    assert fm.inputs == (l0, t0)
    assert {p.name for p in fm.outputs} == {"m", "n", "p", "q", "r", "s"}
    dm = dm_instantiate(program, {"l", "t"})
    assert dm.inputs == frozenset({"l", "t"})
    assert dm.outputs == frozenset({"n", "p", "q"})
    assert [str(r) for r in dm.rules] == ["n :- t.", "p :- q, t."]
    with capsys.disabled():
        report(5, "FM keeps t -> n over six outputs; DM keeps two rules over three")


def test_criterion_06_projection_golden(capsys):
    f = projection_sample()
    keep = (Pred("q", 1), Pred("r", 0), Pred("s", 1), Pred("t", 1), Pred("m", 0))
    got = project_formula(f, keep)
    want = And(
        Implies(pa("q", "a"), prop("r")),
        Forall("x", Implies(And(neg(pa("q", "x")), pa("t", "x")), pa("s", "x"))),
    )
    assert got == want
    with capsys.disabled():
        report(6, "projection of the three-conjunct example is structurally exact")


def test_criterion_07_clique_pipeline(capsys):
    started = time.perf_counter()
    f_g, f_r, f_c = clique_modules()
    universe = tuple("abcdef")
    seed = PartialInterpretation(universe, tuple((o, o) for o in universe))
    (g_model,) = module_stable_models(f_g, seed)
    fixed_r = g_model.restrict(predicates=[Pred("edge", 2), Pred("at", 1)])
    (r_model,) = module_stable_models(f_r, fixed_r)
    fixed_c = r_model.restrict(predicates=[Pred("edge", 2), Pred("reachable", 1)])
    (c_model,) = module_stable_models(f_c, fixed_c)
    assert r_model.extent(Pred("reachable", 1)) == {("a",), ("b",), ("c",)}
    assert c_model.extent(Pred("in_clique", 1)) == {("b",), ("c",)}
    composite = g_model.union(r_model).union(c_model)
    i_g, i_r, i_c = clique_interpretations()
    assert composite == i_g.union(i_r).union(i_c)
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    with capsys.disabled():
        report(7, f"compositional clique pipeline matches the worked model in "
                  f"{elapsed:.2f}s")


def test_criterion_08_oracle_equivalence_suite(capsys):
    result = run_suite("oracle", count=500)
    assert result.ok, result.failures[:5]
    assert result.cases >= 500
    assert result.elapsed < 60.0
    with capsys.disabled():
        report(8, result.summary())


def test_criterion_09_module_theorem_suite(capsys):
    result = run_suite("module-theorem", count=200)
    assert result.ok, result.failures[:5]
    assert result.cases >= 200
    assert result.elapsed < 60.0
    with capsys.disabled():
        report(9, result.summary())


def test_criterion_10_join_algebra_suite(capsys):
    result = run_suite("join-algebra", count=200)
    assert result.ok, result.failures[:5]
    assert result.cases >= 200
    with capsys.disabled():
        report(10, result.summary())


def test_criterion_11_dlp_suite(capsys):
    result = run_suite("dlp", count=200)
    assert result.ok, result.failures[:5]
    assert result.cases >= 200
    with capsys.disabled():
        report(11, result.summary())


def test_criterion_12_incremental_suite(capsys):
    result = run_suite("incremental", count=100)
    assert result.ok, result.failures[:5]
    assert result.cases >= 100
    assert result.elapsed < 120.0
    with capsys.disabled():
        report(12, result.summary())


def test_criterion_13_projection_suite(capsys):
    result = run_suite("projection", count=1000)
    assert result.ok, result.failures[:5]
    assert result.cases >= 1000
    with capsys.disabled():
        report(13, result.summary())
