"""The SM operator as a symbolic transformation.

``build_sm(F, p)`` produces the second-order sentence F ^ -Eu((u < p) ^ F*(u))
as a value: the predicate variables u are represented by ordinary predicate
constants in an extension of the signature, and the second-order existential is
the :class:`SecondOrderSentence` wrapper itself, evaluated only by the
Herbrand engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArityError, SignatureError
from .syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    ParamAtom,
    Pred,
    PredicateList,
    Var,
    conj,
    fmt,
    neg,
    predicate_list,
    predicates_of,
    universal_closure,
)


@dataclass(frozen=True)
class SecondOrderSentence:
    """F ^ -E u1..un ((u < p) ^ F*(u)), with u fresh predicate variables."""

    base: Formula
    intensional: PredicateList
    pred_vars: PredicateList
    matrix: Formula  # (u < p) ^ F*(u)
    star: Formula  # F*(u) alone; the part the engine enumerates against

    def __str__(self) -> str:
        return fmt_sm(self)


def _closed_pointwise(antecedents: Sequence[Pred], consequents: Sequence[Pred]) -> Formula:
    """Conjunction over i of the closure of a_i(x) -> c_i(x)."""
    parts = []
    for a, c in zip(antecedents, consequents):
        variables = tuple(Var(f"x{i + 1}") for i in range(a.arity))
        body = Implies(Atom(a, variables), Atom(c, variables))
        parts.append(universal_closure(body))
    return conj(parts)


def u_less_than_p(p: Sequence[Pred], u: Sequence[Pred]) -> Formula:
    """(u <= p) ^ -(p <= u); unsatisfiable for empty lists."""
    _check_matched(p, u)
    return And(_closed_pointwise(u, p), neg(_closed_pointwise(p, u)))


def _check_matched(p: Sequence[Pred], u: Sequence[Pred]) -> None:
    if len(p) != len(u):
        raise ArityError("predicate list and variable list differ in length")
    for a, b in zip(p, u):
        if a.arity != b.arity:
            raise ArityError(f"{a} paired with {b}: arities differ")


def star_transform(f: Formula, p: Sequence[Pred], u: Sequence[Pred]) -> Formula:
    """The recursive * transform: members of p become the paired variables,
    other atomic parts stay, and each implication contributes its starred and
    its plain form."""
    _check_matched(p, u)
    mapping = dict(zip(p, u))
    clash = set(u) & set(predicates_of(f))
    if clash:
        raise SignatureError(f"predicate variables not fresh: {clash}")
    wanted = set(p)

    def mentions(g: Formula) -> bool:
        if isinstance(g, Atom):
            return g.pred in wanted
        if isinstance(g, (ParamAtom, Eq, Bot)):
            return False
        if isinstance(g, (And, Or, Implies)):
            return mentions(g.left) or mentions(g.right)
        return mentions(g.body)

    def walk(g: Formula) -> Formula:
        # a part free of p is its own transform (sound shortcut; the
        # duplicated copy of an implication would be redundant)
        if not mentions(g):
            return g
        if isinstance(g, Atom):
            return Atom(mapping[g.pred], g.args)
        if isinstance(g, And):
            return And(walk(g.left), walk(g.right))
        if isinstance(g, Or):
            return Or(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            return And(Implies(walk(g.left), walk(g.right)), g)
        if isinstance(g, Forall):
            return Forall(g.var, walk(g.body))
        if isinstance(g, Exists):
            return Exists(g.var, walk(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f)


def fresh_predicate_variables(p: Sequence[Pred], avoid: Iterable[str]) -> PredicateList:
    """Deterministic names u1, u2, ... skipping anything already in scope."""
    taken = set(avoid) | {q.name for q in p}
    out = []
    i = 1
    for q in p:
        while f"u{i}" in taken:
            i += 1
        out.append(Pred(f"u{i}", q.arity))
        taken.add(f"u{i}")
    return tuple(out)


def build_sm(f: Formula, p: Sequence[Pred]) -> SecondOrderSentence:
    """Instantiate the SM template for f with intensional predicates p."""
    p = predicate_list(p)
    occurring = {q.name for q in predicates_of(f)}
    u = fresh_predicate_variables(p, occurring)
    star = star_transform(f, p, u)
    matrix = And(u_less_than_p(p, u), star)
    return SecondOrderSentence(f, p, u, matrix, star)


def choice_formula(p: Sequence[Pred]) -> Formula:
    """Conjunction over p of the closure of p_i(x) v -p_i(x)."""
    parts = []
    for q in p:
        variables = tuple(Var(f"x{i + 1}") for i in range(q.arity))
        atom = Atom(q, variables)
        parts.append(universal_closure(Or(atom, neg(atom))))
    return conj(parts)


def fmt_sm(s: SecondOrderSentence) -> str:
    """Display in the F ^ -E u v w (matrix) style."""
    if not s.pred_vars:
        return f"{fmt(s.base)} ∧ ¬∃()({fmt(s.matrix)})"
    prefix = " ".join(q.name for q in s.pred_vars)
    return f"{fmt(s.base)} ∧ ¬∃{prefix}({fmt(s.matrix)})"
