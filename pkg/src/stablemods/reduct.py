"""Ground disjunctive programs and the reduct-based answer-set oracle.

Atoms are canonical strings (``p``, ``edge(a,b)``); this keeps the oracle
independent of the formula machinery it cross-checks.  The reduct relative to
a candidate X drops negative literals in the classical way, handles a doubly
negated atom by deleting the rule unless the atom is in X, and treats a
negated head disjunct (from desugared choice rules) as satisfied, dropping the
whole rule, when its atom is outside X.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EnumerationGuardError
from .syntax import App, Atom, Eq, Obj, atom_str, fmt
from .programs import BodyLiteral, Program, Rule, desugar_choice


@dataclass(frozen=True)
class GroundRule:
    head: tuple[tuple[str, bool], ...]  # (atom, negated-in-head?)
    pos: tuple[str, ...] = ()
    neg: tuple[str, ...] = ()
    nneg: tuple[str, ...] = ()

    def __str__(self) -> str:
        head = " ; ".join(f"not {a}" if n else a for a, n in self.head)
        body = (
            list(self.pos)
            + [f"not {a}" for a in self.neg]
            + [f"not not {a}" for a in self.nneg]
        )
        if not body:
            return f"{head}." if head else ":- ."
        return f"{head} :- {', '.join(body)}." if head else f":- {', '.join(body)}."


def atoms_of(rules: Iterable[GroundRule]) -> frozenset[str]:
    out = set()
    for r in rules:
        out.update(a for a, _ in r.head)
        out.update(r.pos)
        out.update(r.neg)
        out.update(r.nneg)
    return frozenset(out)


def reduct(
    rules: Iterable[GroundRule], candidate: frozenset[str]
) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """The positive program relative to the candidate: (head atoms, positive body)."""
    out = []
    for r in rules:
        if any(c in candidate for c in r.neg):
            continue
        if any(d not in candidate for d in r.nneg):
            continue
        heads = []
        satisfied = False
        for atom, negated in r.head:
            if negated:
                if atom not in candidate:
                    satisfied = True  # the `not a` disjunct already holds
                    break
            else:
                heads.append(atom)
        if satisfied:
            continue
        out.append((tuple(heads), r.pos))
    return out


def _models(positive: Sequence[tuple[tuple[str, ...], tuple[str, ...]]], x: frozenset[str]) -> bool:
    for heads, body in positive:
        if all(b in x for b in body) and not any(h in x for h in heads):
            return False
    return True


def is_answer_set(rules: Sequence[GroundRule], candidate: frozenset[str]) -> bool:
    """Minimal-model check of the reduct, by exhausting proper subsets."""
    positive = reduct(rules, candidate)
    if not _models(positive, candidate):
        return False
    members = sorted(candidate)
    n = len(members)
    for mask in range((1 << n) - 1):  # excludes the full set
        subset = frozenset(members[i] for i in range(n) if mask >> i & 1)
        if _models(positive, subset):
            return False
    return True


def gl_answer_sets(
    rules: Sequence[GroundRule],
    atoms: Iterable[str] | None = None,
    max_candidates: int = 2**24,
) -> frozenset[frozenset[str]]:
    """All answer sets over the given atom universe (default: atoms of the rules)."""
    universe = sorted(atoms_of(rules) if atoms is None else set(atoms))
    n = len(universe)
    if 2**n > max_candidates:
        raise EnumerationGuardError(f"{2 ** n} candidates exceed the cap of {max_candidates}")
    found = set()
    for mask in range(1 << n):
        candidate = frozenset(universe[i] for i in range(n) if mask >> i & 1)
        if is_answer_set(rules, candidate):
            found.add(candidate)
    return frozenset(found)


# ---------------------------------------------------------------------------
# Conversion from parsed programs


def ground_atom_name(atom: Atom) -> str:
    names = []
    for t in atom.args:
        if not isinstance(t, Obj):
            raise ValueError(f"not a ground function-free atom: {fmt(atom)}")
        names.append(t.name)
    return atom_str(atom.pred.name, tuple(names))


def _ground_term_name(t) -> str:
    if isinstance(t, Obj):
        return t.name
    if isinstance(t, App):
        raise ValueError("function symbols are not allowed in ground rules")
    raise ValueError("rule is not ground")


def ground_rule_of(rule: Rule) -> GroundRule | None:
    """Convert one ground rule, evaluating ground comparisons away.

    Returns None when a comparison makes the body unsatisfiable (the rule is
    vacuous).  Aggregates and parameterized atoms are rejected.
    """
    if rule.choice:
        rule = desugar_choice(rule)
    if rule.aggregates:
        raise ValueError("aggregates are not part of the ground rule format")
    head = []
    for h in rule.head:
        if not isinstance(h.atom, Atom):
            raise ValueError("parameterized atom in a ground rule; instantiate first")
        head.append((ground_atom_name(h.atom), h.negated))
    pos, neg, nneg = [], [], []
    for b in rule.body:
        assert isinstance(b, BodyLiteral)
        if isinstance(b.item, Eq):
            equal = _ground_term_name(b.item.left) == _ground_term_name(b.item.right)
            holds = not equal if b.neg == 1 else equal
            if not holds:
                return None
            continue
        if not isinstance(b.item, Atom):
            raise ValueError("parameterized atom in a ground rule; instantiate first")
        target = (pos, neg, nneg)[b.neg]
        target.append(ground_atom_name(b.item))
    return GroundRule(tuple(head), tuple(pos), tuple(neg), tuple(nneg))


def to_ground_rules(program: Program) -> tuple[GroundRule, ...]:
    out = []
    for rule in program.rules:
        ground = ground_rule_of(rule)
        if ground is not None:
            out.append(ground)
    return tuple(out)
