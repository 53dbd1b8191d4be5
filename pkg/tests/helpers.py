"""Shared builders for the worked examples used across the test suite."""

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
    Var,
    conj,
    neg,
)


def pa(name, *args, arity=None):
    """Atom from a predicate name and string arguments (lowercase = object,
    u-z/uppercase initial = variable)."""
    terms = tuple(Var(a) if a[0].isupper() or a[0] in "uvwxyz" else Obj(a) for a in args)
    return Atom(Pred(name, len(terms) if arity is None else arity), terms)


def prop(name):
    return Atom(Pred(name, 0))


def sample_formula():
    """p(a) ^ q(b) ^ forall x (p(x) ^ -q(x) -> r(x))"""
    rule = Forall("x", Implies(And(pa("p", "x"), neg(pa("q", "x"))), pa("r", "x")))
    return And(And(pa("p", "a"), pa("q", "b")), rule)


def sample_equivalent():
    """The first-order equivalent of SM applied to sample_formula."""

    def iff(a, b):
        return And(Implies(a, b), Implies(b, a))

    c1 = Forall("x", iff(pa("p", "x"), Eq(Var("x"), Obj("a"))))
    c2 = Forall("x", iff(pa("q", "x"), Eq(Var("x"), Obj("b"))))
    c3 = Forall("x", iff(pa("r", "x"), And(pa("p", "x"), neg(pa("q", "x")))))
    return And(And(c1, c2), c3)


def chain_formula():
    """(p -> q) ^ (q -> r) ^ (t ^ -r -> s), all atoms propositional."""
    p, q, r, s, t = map(prop, "pqrst")
    return conj([Implies(p, q), Implies(q, r), Implies(And(t, neg(r)), s)])


def projection_sample():
    """forall x (p(x) -> q(x)) ^ (q(a) ^ -p(a) -> r) ^ forall x (-q(x) ^ t(x) -> s(x))"""
    c1 = Forall("x", Implies(pa("p", "x"), pa("q", "x")))
    c2 = Implies(And(pa("q", "a"), neg(pa("p", "a"))), prop("r"))
    c3 = Forall("x", Implies(And(neg(pa("q", "x")), pa("t", "x")), pa("s", "x")))
    return conj([c1, c2, c3])


GRAPH_FACTS = """
vertex(a). vertex(b). vertex(c). vertex(d). vertex(e). vertex(f).
edge(a,a). edge(a,b). edge(b,c). edge(c,b). edge(c,c). edge(d,e).
edge(d,f). edge(e,d). edge(e,f). edge(f,d). edge(f,e). at(a).
"""

REACH_RULES = """
reachable(X) :- at(X).
reachable(Y) :- reachable(X), edge(X, Y).
"""

CLIQUE_RULES = """
{in_clique(X)} :- reachable(X).
:- in_clique(X), in_clique(Y), not edge(X,Y), X != Y.
:- not 2 {X : in_clique(X)}.
"""

VERTICES = tuple("abcdef")
EDGES = (
    ("a", "a"), ("a", "b"), ("b", "c"), ("c", "b"), ("c", "c"), ("d", "e"),
    ("d", "f"), ("e", "d"), ("e", "f"), ("f", "d"), ("f", "e"),
)
REACHABLE = (("a",), ("b",), ("c",))
IN_CLIQUE = (("b",), ("c",))


def clique_modules():
    """The graph, reachability and clique modules of the worked example."""
    from stablemods.modules import FOModule
    from stablemods.programs import parse_program, rule_formula

    vertex, edge, at = Pred("vertex", 1), Pred("edge", 2), Pred("at", 1)
    reachable, in_clique = Pred("reachable", 1), Pred("in_clique", 1)

    def conjuncts(text):
        return tuple(rule_formula(r) for r in parse_program(text).rules)

    f_g = FOModule(conjuncts(GRAPH_FACTS), (), (vertex, edge, at))
    f_r = FOModule(conjuncts(REACH_RULES), (edge, at), (reachable,))
    f_c = FOModule(conjuncts(CLIQUE_RULES), (reachable, edge), (in_clique,))
    return f_g, f_r, f_c


def clique_interpretations():
    """The three partial interpretations of the reachable-clique example."""
    from stablemods.herbrand import herbrand_interpretation

    vertex, edge, at = Pred("vertex", 1), Pred("edge", 2), Pred("at", 1)
    reachable, in_clique = Pred("reachable", 1), Pred("in_clique", 1)
    i_g = herbrand_interpretation(
        VERTICES,
        {vertex: [(v,) for v in VERTICES], edge: EDGES, at: [("a",)]},
    )
    i_r = herbrand_interpretation(
        VERTICES, {edge: EDGES, at: [("a",)], reachable: REACHABLE}
    )
    i_c = herbrand_interpretation(
        VERTICES, {edge: EDGES, reachable: REACHABLE, in_clique: IN_CLIQUE}
    )
    return i_g, i_r, i_c


__all__ = [
    "pa",
    "prop",
    "sample_formula",
    "sample_equivalent",
    "chain_formula",
    "projection_sample",
    "And",
    "Atom",
    "Bot",
    "Eq",
    "Exists",
    "Forall",
    "Implies",
    "Obj",
    "Or",
    "Pred",
    "Var",
    "conj",
    "neg",
]
