import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemods.syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Implies,
    Obj,
    Or,
    Pred,
    Signature,
    Var,
    atom_occurrences,
    canonical,
    conj,
    disj,
    flatten_and,
    fmt,
    formulas_equal,
    free_vars,
    head_predicates,
    is_negative_on,
    is_top,
    neg,
    predicates_of,
    rules_of,
    substitute,
    symbols_of,
    top,
    universal_closure,
)
from stablemods.errors import ArityError, SignatureError

from helpers import sample_formula, pa, prop


# --- random formula strategy -------------------------------------------------

PREDS = [Pred("p", 0), Pred("q", 0), Pred("p1", 1), Pred("q1", 1)]


def atoms():
    terms = st.sampled_from([Var("x"), Var("y"), Obj("a"), Obj("b")])
    unary = st.builds(lambda p, t: Atom(p, (t,)), st.sampled_from(PREDS[2:]), terms)
    nullary = st.builds(Atom, st.sampled_from(PREDS[:2]))
    eq = st.builds(Eq, terms, terms)
    return st.one_of(nullary, unary, eq, st.just(Bot()))


def formulas(max_depth=4):
    return st.recursive(
        atoms(),
        lambda inner: st.one_of(
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Implies, inner, inner),
            st.builds(Forall, st.sampled_from(["x", "y"]), inner),
            st.builds(Exists, st.sampled_from(["x", "y"]), inner),
        ),
        max_leaves=2 ** max_depth,
    )


# --- construction invariants --------------------------------------------------


def test_atom_arity_checked():
    with pytest.raises(ArityError):
        Atom(Pred("p", 2), (Obj("a"),))


def test_signature_rejects_cross_category_reuse():
    with pytest.raises(SignatureError):
        Signature(objects=("a",), predicates=(Pred("a", 1),))
    with pytest.raises(SignatureError):
        Signature(predicates=(Pred("p", 1), Pred("p", 1)))


def test_top_is_derived_form():
    assert top() == Implies(Bot(), Bot())
    assert is_top(top())
    assert not is_top(neg(prop("p")))


# --- free variables and closure ----------------------------------------------


def test_free_vars_examples():
    assert free_vars(And(pa("p", "a"), pa("q", "b"))) == frozenset()
    shadow = And(pa("p", "x"), Forall("x", pa("q", "x")))
    assert free_vars(shadow) == {"x"}
    assert free_vars(And(pa("reachable", "X"), pa("edge", "X", "Y"))) == {"X", "Y"}


def test_universal_closure_rule_of_sample_formula():
    body = Implies(And(pa("p", "x"), neg(pa("q", "x"))), pa("r", "x"))
    assert universal_closure(body) == Forall("x", body)


def test_universal_closure_closed_unchanged():
    f = Implies(pa("p", "a"), pa("p", "a"))
    assert universal_closure(f) == f


def test_universal_closure_lexicographic():
    f = pa("edge", "X", "Y")
    assert universal_closure(f) == Forall("X", Forall("Y", f))


@settings(max_examples=200)
@given(formulas())
def test_universal_closure_idempotent(f):
    once = universal_closure(f)
    assert universal_closure(once) == once


# --- polarity ------------------------------------------------------------------


def test_negative_on_sample_formula():
    f = sample_formula()
    assert is_negative_on(f, [Pred("s", 0)])
    assert not is_negative_on(f, [Pred("p", 1), Pred("q", 1)])


@settings(max_examples=200)
@given(formulas())
def test_negation_negative_on_everything(f):
    assert is_negative_on(neg(f), PREDS)


@settings(max_examples=200)
@given(formulas(), st.sets(st.sampled_from(PREDS)))
def test_negative_on_antitone_in_predicate_list(f, subset):
    if is_negative_on(f, PREDS):
        assert is_negative_on(f, subset)


def test_head_predicates_chain():
    p, q, r, s, t = (Pred(n, 0) for n in "pqrst")
    f = conj([Implies(Atom(p), Atom(q)), Implies(Atom(q), Atom(r)),
              Implies(And(Atom(t), neg(Atom(r))), Atom(s))])
    assert head_predicates(f) == (q, r, s)


def test_head_predicates_bot_and_sample_formula():
    assert head_predicates(Bot()) == ()
    # hand enumeration of (1): p(a), q(b) and the consequent r(x) sit under no
    # antecedent; p(x), q(x) sit under one.
    assert head_predicates(sample_formula()) == (Pred("p", 1), Pred("q", 1), Pred("r", 1))


@settings(max_examples=200)
@given(formulas())
def test_heads_subset_of_predicates(f):
    assert set(head_predicates(f)) <= set(predicates_of(f))


@settings(max_examples=300)
@given(formulas())
def test_polarity_bookkeeping_against_independent_walk(f):
    # Independent occurrence walk: track antecedent count explicitly.
    seen = []

    def walk(g, depth):
        if isinstance(g, Atom):
            seen.append((g.pred, depth))
        elif isinstance(g, (And, Or)):
            walk(g.left, depth)
            walk(g.right, depth)
        elif isinstance(g, Implies):
            walk(g.left, depth + 1)
            walk(g.right, depth)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, depth)

    walk(f, 0)
    assert seen == list(atom_occurrences(f))
    for pred, depth in seen:
        strictly_positive = depth == 0
        positive = depth % 2 == 0
        assert not strictly_positive or positive


# --- rules ----------------------------------------------------------------------


def test_rules_of_sample_formula():
    rule = Implies(And(pa("p", "x"), neg(pa("q", "x"))), pa("r", "x"))
    assert rules_of(sample_formula()) == [rule]


def test_rules_of_no_implications():
    assert rules_of(And(pa("p", "a"), pa("q", "b"))) == []


def test_rules_of_disjunctive_conjunct():
    r, p, q, s = (prop(n) for n in "rpqs")
    f = And(Implies(r, Or(p, q)), s)
    assert rules_of(f) == [Implies(r, Or(p, q))]


def test_rules_of_nested_consequent():
    a, b, c = (prop(n) for n in "abc")
    f = Implies(a, Implies(b, c))
    assert rules_of(f) == [f, Implies(b, c)]


def test_negation_is_a_rule_when_strictly_positive():
    f = And(neg(prop("p")), prop("q"))
    assert rules_of(f) == [neg(prop("p"))]


# --- symbols ---------------------------------------------------------------------


def test_symbols_of_sample_formula():
    objs, funcs, preds = symbols_of(sample_formula())
    assert objs == ("a", "b")
    assert funcs == ()
    assert preds == (Pred("p", 1), Pred("q", 1), Pred("r", 1))


def test_symbols_of_bot():
    assert symbols_of(Bot()) == ((), (), ())


# --- structural equality -----------------------------------------------------------


def test_alpha_equivalence():
    f = Forall("x", pa("p", "x"))
    g = Forall("y", pa("p", "y"))
    assert f != g
    assert formulas_equal(f, g)


def test_alpha_equivalence_shadowing():
    f = Forall("x", And(pa("p", "x"), Forall("x", pa("q", "x"))))
    g = Forall("y", And(pa("p", "y"), Forall("z", pa("q", "z"))))
    assert formulas_equal(f, g)
    h = Forall("y", And(pa("p", "y"), Forall("z", pa("q", "y"))))
    assert not formulas_equal(f, h)


def test_canonical_keeps_free_variables():
    f = pa("p", "x")
    assert canonical(f) == f


@settings(max_examples=200)
@given(formulas())
def test_canonical_idempotent(f):
    assert canonical(canonical(f)) == canonical(f)


# --- substitution ----------------------------------------------------------------


def test_substitute_simple():
    f = And(pa("p", "x"), pa("q", "y"))
    g = substitute(f, {"x": Obj("a")})
    assert g == And(pa("p", "a"), pa("q", "y"))


def test_substitute_capture_avoiding():
    f = Exists("y", pa("edge", "x", "y"))
    g = substitute(f, {"x": Var("y")})
    assert isinstance(g, Exists)
    assert g.var != "y"
    assert formulas_equal(g, Exists("z", pa("edge", "y", "z")))


# --- list helpers ----------------------------------------------------------------


def test_conj_disj_empty():
    assert is_top(conj([]))
    assert disj([]) == Bot()


def test_flatten_and_roundtrip():
    parts = [prop("p"), prop("q"), prop("r")]
    assert flatten_and(conj(parts)) == parts


# --- pretty printer -----------------------------------------------------------------


def test_fmt_sample_formula():
    assert fmt(sample_formula()) == "p(a) ∧ q(b) ∧ ∀x(p(x) ∧ ¬q(x) → r(x))"


def test_fmt_special_forms():
    assert fmt(top()) == "⊤"
    assert fmt(Bot()) == "⊥"
    assert fmt(neg(neg(prop("p")))) == "¬¬p"
    assert fmt(neg(Eq(Var("X"), Var("Y")))) == "¬(X = Y)"
    assert fmt(Or(And(prop("p"), prop("q")), prop("r"))) == "p ∧ q ∨ r"
    assert fmt(And(prop("p"), Or(prop("q"), prop("r")))) == "p ∧ (q ∨ r)"
    assert fmt(Implies(prop("p"), Implies(prop("q"), prop("r")))) == "p → (q → r)"
    assert fmt(Implies(Implies(prop("p"), prop("q")), prop("r"))) == "(p → q) → r"
    assert fmt(Forall("x", Exists("y", pa("edge", "x", "y")))) == "∀x∃y edge(x,y)"
    assert fmt(neg(And(prop("p"), prop("q")))) == "¬(p ∧ q)"
    assert fmt(Implies(prop("p"), top())) == "p → ⊤"


def test_fmt_deterministic_under_alpha():
    f = Forall("x", pa("p", "x"))
    assert fmt(f) == "∀x p(x)"
