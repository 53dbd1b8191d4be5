import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemods.errors import ArityError, SignatureError
from stablemods.sm import (
    SecondOrderSentence,
    build_sm,
    choice_formula,
    fmt_sm,
    star_transform,
    u_less_than_p,
)
from stablemods.syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Forall,
    Implies,
    Obj,
    Or,
    Pred,
    Var,
    conj,
    flatten_and,
    formulas_equal,
    is_top,
    neg,
    rules_of,
    top,
)

from helpers import sample_formula, pa, prop

P1, Q1, R1 = Pred("p", 1), Pred("q", 1), Pred("r", 1)
U1, V1, W1 = Pred("u", 1), Pred("v", 1), Pred("w", 1)


def test_star_atom_in_p():
    f = pa("p", "a")
    assert star_transform(f, (P1,), (U1,)) == Atom(U1, (Obj("a"),))


def test_star_atomic_outside_p():
    eq = Eq(Var("x"), Obj("a"))
    assert star_transform(eq, (P1,), (U1,)) == eq
    assert star_transform(Bot(), (P1,), (U1,)) == Bot()
    other = pa("q", "x")
    assert star_transform(other, (P1,), (U1,)) == other


def test_star_of_rule_expansion():
    # ((p(x) ^ -q(x)) -> r(x))* with p = (p, q, r), u = (u, v, w) is
    # ((u(x) ^ (-v(x) ^ -q'(x))) -> w(x)) ^ (p(x) ^ -q(x) -> r(x)) where the
    # starred negation contributes both the variable and the constant copy.
    rule = Implies(And(pa("p", "x"), neg(pa("q", "x"))), pa("r", "x"))
    starred = star_transform(rule, (P1, Q1, R1), (U1, V1, W1))
    neg_star = And(Implies(Atom(V1, (Var("x"),)), Bot()), neg(pa("q", "x")))
    want = And(
        Implies(And(Atom(U1, (Var("x"),)), neg_star), Atom(W1, (Var("x"),))),
        rule,
    )
    assert starred == want


def test_star_quantifiers_commute():
    f = Forall("x", pa("p", "x"))
    assert star_transform(f, (P1,), (U1,)) == Forall("x", Atom(U1, (Var("x"),)))


def test_star_requires_fresh_and_matched():
    with pytest.raises(SignatureError):
        star_transform(pa("p", "a"), (P1,), (P1,))
    with pytest.raises(ArityError):
        star_transform(pa("p", "a"), (P1,), (Pred("u", 2),))


@settings(max_examples=100)
@given(st.sampled_from(["p(a) ∧ q(b)", "∀x(p(x) → q(x))", "¬p(a) ∨ ⊥"]))
def test_star_identity_when_p_disjoint(text):
    from stablemods.programs import parse_formula

    f = parse_formula(text)
    s = Pred("s", 1)
    assert star_transform(f, (s,), (U1,)) == f


def test_u_less_than_p_unary_pair():
    got = u_less_than_p((P1, Q1), (U1, V1))
    x = (Var("x1"),)
    leq_up = And(Forall("x1", Implies(Atom(U1, x), Atom(P1, x))),
                 Forall("x1", Implies(Atom(V1, x), Atom(Q1, x))))
    leq_pu = And(Forall("x1", Implies(Atom(P1, x), Atom(U1, x))),
                 Forall("x1", Implies(Atom(Q1, x), Atom(V1, x))))
    assert got == And(leq_up, neg(leq_pu))


def test_u_less_than_p_empty_is_unsatisfiable_shape():
    got = u_less_than_p((), ())
    assert got == And(top(), neg(top()))


def test_u_less_than_p_nullary():
    p0, u0 = Pred("p", 0), Pred("u", 0)
    got = u_less_than_p((p0,), (u0,))
    assert got == And(Implies(Atom(u0), Atom(p0)), neg(Implies(Atom(p0), Atom(u0))))


def test_build_sm_sample_formula():
    f = sample_formula()
    s = build_sm(f, (P1, Q1, R1))
    assert s.base == f
    assert s.pred_vars == (Pred("u1", 1), Pred("u2", 1), Pred("u3", 1))
    expected_star = star_transform(f, (P1, Q1, R1), s.pred_vars)
    assert s.star == expected_star
    assert s.matrix == And(u_less_than_p((P1, Q1, R1), s.pred_vars), expected_star)


def test_build_sm_empty_list():
    s = build_sm(Bot(), ())
    assert s.pred_vars == ()
    assert s.base == Bot()
    assert s.matrix == And(And(top(), neg(top())), Bot())


def test_build_sm_single_nullary():
    p0 = Pred("p", 0)
    s = build_sm(Atom(p0), (p0,))
    (u0,) = s.pred_vars
    assert u0.arity == 0
    assert s.star == Atom(u0)
    assert s.matrix == And(u_less_than_p((p0,), (u0,)), Atom(u0))


def test_fresh_names_skip_collisions():
    f = And(pa("u1", "a"), pa("p", "a"))
    s = build_sm(f, (P1,))
    assert s.pred_vars == (Pred("u2", 1),)


def test_matrix_contains_each_rule_twice():
    f = sample_formula()
    s = build_sm(f, (P1, Q1, R1))
    rules = rules_of(f)
    starred_rules = rules_of(s.star)
    # each rule of F appears verbatim in the starred formula, next to its
    # starred twin
    for rule in rules:
        assert rule in starred_rules
    assert len(starred_rules) >= 2 * len(rules)


def test_choice_formula():
    q1 = Pred("q", 1)
    got = choice_formula((q1,))
    atom = Atom(q1, (Var("x1"),))
    assert got == Forall("x1", Or(atom, neg(atom)))
    assert is_top(choice_formula(()))
    t0, m0 = Pred("t", 0), Pred("m", 0)
    got0 = choice_formula((t0, m0))
    assert got0 == And(Or(Atom(t0), neg(Atom(t0))), Or(Atom(m0), neg(Atom(m0))))


def test_fmt_sm_prefix_style():
    s = build_sm(Atom(Pred("p", 0)), (Pred("p", 0),))
    text = fmt_sm(s)
    assert text.startswith("p ∧ ¬∃u1(")
    assert text.endswith(")")
