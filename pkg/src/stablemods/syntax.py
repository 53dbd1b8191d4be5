"""First-order formula ASTs, signatures, and the syntactic predicates built on them.

Negation is not a primitive: ``neg(F)`` builds the implication ``F -> bot``, and
truth is the derived form ``bot -> bot`` (recognized by :func:`is_top`).
Conjunction and disjunction are binary nodes; :func:`conj` / :func:`flatten_and`
give the list view used by the module machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .errors import ArityError, SignatureError

# ---------------------------------------------------------------------------
# Symbols


@dataclass(frozen=True, order=True)
class Pred:
    """A predicate constant, identified by name and arity."""

    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


PredicateList = tuple[Pred, ...]


def predicate_list(preds: Iterable[Pred]) -> PredicateList:
    """Validate and freeze a list of distinct predicate constants."""
    out = tuple(preds)
    if len(set(out)) != len(out):
        raise SignatureError(f"duplicate predicate in list: {', '.join(map(str, out))}")
    return out


@dataclass(frozen=True)
class Signature:
    """Object, function and predicate constants, each category duplicate-free."""

    objects: tuple[str, ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    predicates: tuple[Pred, ...] = ()

    def __post_init__(self):
        names = {}
        for category, members in (
            ("object", self.objects),
            ("function", [f for f, _ in self.functions]),
            ("predicate", [p.name for p in self.predicates]),
        ):
            for name in members:
                if names.get(name, category) != category:
                    raise SignatureError(f"name {name!r} used as both {names[name]} and {category}")
                names[name] = category
        if len(set(self.objects)) != len(self.objects):
            raise SignatureError("duplicate object constant")
        if len(set(self.functions)) != len(self.functions):
            raise SignatureError("duplicate function constant")
        if len(set(self.predicates)) != len(self.predicates):
            raise SignatureError("duplicate predicate constant")
        for _, arity in self.functions:
            if arity < 1:
                raise SignatureError("function constants need arity >= 1")
        for p in self.predicates:
            if p.arity < 0:
                raise SignatureError("negative predicate arity")

    def merge(self, other: "Signature") -> "Signature":
        return Signature(
            tuple(sorted(set(self.objects) | set(other.objects))),
            tuple(sorted(set(self.functions) | set(other.functions))),
            tuple(sorted(set(self.predicates) | set(other.predicates))),
        )

    def with_predicates(self, preds: Iterable[Pred]) -> "Signature":
        return self.merge(Signature(predicates=tuple(sorted(set(preds)))))


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Obj:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    func: str
    args: tuple["Term", ...]

    def __str__(self) -> str:
        return f"{self.func}({','.join(map(str, self.args))})"


Term = Union[Var, Obj, App]


# ---------------------------------------------------------------------------
# Step expressions for incrementally parameterized atoms


@dataclass(frozen=True)
class StepExpr:
    """A step expression ``t``, ``t+k``, ``t-k`` or the constant ``k``."""

    offset: int
    uses_counter: bool = True

    def evaluate(self, i: int) -> int:
        return i + self.offset if self.uses_counter else self.offset

    def __str__(self) -> str:
        if not self.uses_counter:
            return str(self.offset)
        if self.offset == 0:
            return "t"
        return f"t{self.offset:+d}"


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    pred: Pred
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if len(self.args) != self.pred.arity:
            raise ArityError(f"{self.pred} applied to {len(self.args)} argument(s)")


@dataclass(frozen=True)
class ParamAtom:
    """An incrementally parameterized atom; instantiation turns it into a plain atom."""

    base: str
    step: StepExpr
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, ParamAtom, Eq, Bot, And, Or, Implies, Forall, Exists]

BOT = Bot()


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def top() -> Formula:
    return Implies(BOT, BOT)


def is_top(f: Formula) -> bool:
    return isinstance(f, Implies) and isinstance(f.left, Bot) and isinstance(f.right, Bot)


def negated_part(f: Formula) -> Formula | None:
    """The G of a formula F -> bot, None for anything else (including top)."""
    if isinstance(f, Implies) and isinstance(f.right, Bot) and not isinstance(f.left, Bot):
        return f.left
    return None


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; the empty conjunction is top."""
    parts = list(parts)
    if not parts:
        return top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; the empty disjunction is bot."""
    parts = list(parts)
    if not parts:
        return BOT
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def flatten_and(f: Formula) -> list[Formula]:
    """The conjunct-list view of nested binary conjunctions."""
    if isinstance(f, And):
        return flatten_and(f.left) + flatten_and(f.right)
    return [f]


# ---------------------------------------------------------------------------
# Variables, substitution, alpha-equivalence


def _term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, App):
        for a in t.args:
            yield from _term_vars(a)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Atom, ParamAtom)):
        return frozenset(v for a in f.args for v in _term_vars(a))
    if isinstance(f, Eq):
        return frozenset(_term_vars(f.left)) | frozenset(_term_vars(f.right))
    if isinstance(f, Bot):
        return frozenset()
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def universal_closure(f: Formula) -> Formula:
    """Quantify the free variables of f universally, lexicographically outermost-first."""
    for v in sorted(free_vars(f), reverse=True):
        f = Forall(v, f)
    return f


def _subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.func, tuple(_subst_term(a, mapping) for a in t.args))
    return t


def fresh_name(base: str, taken: set[str]) -> str:
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables.

    Binders that would capture a variable of a substituted term are renamed
    with a numeric suffix.
    """
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_subst_term(a, mapping) for a in f.args))
    if isinstance(f, ParamAtom):
        return ParamAtom(f.base, f.step, tuple(_subst_term(a, mapping) for a in f.args))
    if isinstance(f, Eq):
        return Eq(_subst_term(f.left, mapping), _subst_term(f.right, mapping))
    if isinstance(f, Bot):
        return f
    if isinstance(f, (And, Or, Implies)):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        if not inner:
            return f
        clashing = {n for t in inner.values() for n in _term_vars(t)}
        var, body = f.var, f.body
        if var in clashing:
            taken = clashing | free_vars(body) | set(inner)
            var = fresh_name(f.var, taken)
            body = substitute(body, {f.var: Var(var)})
        return type(f)(var, substitute(body, inner))
    raise TypeError(f"not a formula: {f!r}")


def canonical(f: Formula, _env: Mapping[str, str] | None = None, _depth: int = 0) -> Formula:
    """Rename bound variables to positional names so alpha-equivalent formulas compare equal.

    Canonical names contain ``$`` and therefore cannot collide with parseable
    variable names; free variables are left untouched.
    """
    env = _env or {}

    def ct(t: Term) -> Term:
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, App):
            return App(t.func, tuple(ct(a) for a in t.args))
        return t

    if isinstance(f, Atom):
        return Atom(f.pred, tuple(ct(a) for a in f.args))
    if isinstance(f, ParamAtom):
        return ParamAtom(f.base, f.step, tuple(ct(a) for a in f.args))
    if isinstance(f, Eq):
        return Eq(ct(f.left), ct(f.right))
    if isinstance(f, Bot):
        return f
    if isinstance(f, (And, Or, Implies)):
        return type(f)(canonical(f.left, env, _depth), canonical(f.right, env, _depth))
    if isinstance(f, (Forall, Exists)):
        name = f"${_depth}"
        inner = dict(env)
        inner[f.var] = name
        return type(f)(name, canonical(f.body, inner, _depth + 1))
    raise TypeError(f"not a formula: {f!r}")


def formulas_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""
    return canonical(f) == canonical(g)


# ---------------------------------------------------------------------------
# Polarity and occurrence analysis

# An occurrence is positive when the number of implication antecedents above it
# is even, and strictly positive when that number is zero.


def _require_plain(f: Formula) -> None:
    if isinstance(f, ParamAtom):
        raise ValueError(
            f"parameterized atom {fmt(f)} has no predicate constant; instantiate first"
        )


def atom_occurrences(f: Formula, _depth: int = 0) -> Iterator[tuple[Pred, int]]:
    """Yield (predicate, antecedent-nesting count) for every atom occurrence."""
    if isinstance(f, Atom):
        yield f.pred, _depth
    elif isinstance(f, ParamAtom):
        _require_plain(f)
    elif isinstance(f, (Eq, Bot)):
        return
    elif isinstance(f, (And, Or)):
        yield from atom_occurrences(f.left, _depth)
        yield from atom_occurrences(f.right, _depth)
    elif isinstance(f, Implies):
        yield from atom_occurrences(f.left, _depth + 1)
        yield from atom_occurrences(f.right, _depth)
    elif isinstance(f, (Forall, Exists)):
        yield from atom_occurrences(f.body, _depth)
    else:
        raise TypeError(f"not a formula: {f!r}")


def predicates_of(f: Formula) -> PredicateList:
    """All predicate constants occurring in f, sorted."""
    return tuple(sorted({p for p, _ in atom_occurrences(f)}))


def head_predicates(f: Formula) -> PredicateList:
    """Predicate constants with at least one strictly positive occurrence, sorted."""
    return tuple(sorted({p for p, d in atom_occurrences(f) if d == 0}))


def is_negative_on(f: Formula, preds: Iterable[Pred]) -> bool:
    """True iff no member of preds occurs strictly positively in f."""
    wanted = set(preds)
    if not wanted:
        return True
    return not any(p in wanted for p, d in atom_occurrences(f) if d == 0)


def rules_of(f: Formula) -> list[Formula]:
    """Implication subformulas occurring strictly positively, outermost first."""
    out: list[Formula] = []

    def walk(g: Formula) -> None:
        if isinstance(g, Implies):
            out.append(g)
            walk(g.right)  # the antecedent is no longer strictly positive
        elif isinstance(g, (And, Or)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)
        elif isinstance(g, ParamAtom):
            _require_plain(g)

    walk(f)
    return out


def _term_symbols(t: Term, objs: set[str], funcs: set[tuple[str, int]]) -> None:
    if isinstance(t, Obj):
        objs.add(t.name)
    elif isinstance(t, App):
        funcs.add((t.func, len(t.args)))
        for a in t.args:
            _term_symbols(a, objs, funcs)


def symbols_of(f: Formula) -> tuple[tuple[str, ...], tuple[tuple[str, int], ...], PredicateList]:
    """The object, function and predicate constants occurring in f, each sorted."""
    objs: set[str] = set()
    funcs: set[tuple[str, int]] = set()
    preds: set[Pred] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            preds.add(g.pred)
            for a in g.args:
                _term_symbols(a, objs, funcs)
        elif isinstance(g, ParamAtom):
            _require_plain(g)
        elif isinstance(g, Eq):
            _term_symbols(g.left, objs, funcs)
            _term_symbols(g.right, objs, funcs)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return tuple(sorted(objs)), tuple(sorted(funcs)), tuple(sorted(preds))


def signature_of(f: Formula) -> Signature:
    objs, funcs, preds = symbols_of(f)
    return Signature(objs, funcs, preds)


# ---------------------------------------------------------------------------
# Pretty printer
#
# Precedence, loosest to tightest: -> , v , ^ , negation, atoms.  Chains of the
# same binary connective print flat; implication children of implications are
# always parenthesized.  F -> bot prints as negation, bot -> bot as top.

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NEG, _PREC_ATOM = 1, 2, 3, 4, 5


def fmt_term(t: Term) -> str:
    return str(t)


def _prec(f: Formula) -> int:
    if is_top(f):
        return _PREC_ATOM
    if negated_part(f) is not None:
        return _PREC_NEG
    if isinstance(f, Implies):
        return _PREC_IMP
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    return _PREC_ATOM


def fmt(f: Formula) -> str:
    """Deterministic textual form; the golden-test format."""
    if isinstance(f, Bot):
        return "⊥"
    if is_top(f):
        return "⊤"
    if isinstance(f, Atom):
        if not f.args:
            return f.pred.name
        return f"{f.pred.name}({','.join(fmt_term(a) for a in f.args)})"
    if isinstance(f, ParamAtom):
        args = f"({','.join(fmt_term(a) for a in f.args)})" if f.args else ""
        return f"{f.base}@({f.step}){args}"
    if isinstance(f, Eq):
        return f"{fmt_term(f.left)} = {fmt_term(f.right)}"
    inner = negated_part(f)
    if inner is not None:
        if _prec(inner) == _PREC_ATOM and not isinstance(inner, Eq):
            return f"¬{fmt(inner)}"
        if isinstance(inner, (Forall, Exists)) or negated_part(inner) is not None:
            return f"¬{fmt(inner)}"
        return f"¬({fmt(inner)})"
    if isinstance(f, (And, Or)):
        op = " ∧ " if isinstance(f, And) else " ∨ "
        own = _prec(f)
        parts = []
        for item in _flatten(f, type(f)):
            text = fmt(item)
            if _prec(item) < own and not isinstance(item, (Forall, Exists)):
                text = f"({text})"
            parts.append(text)
        return op.join(parts)
    if isinstance(f, Implies):
        left, right = fmt(f.left), fmt(f.right)
        if isinstance(f.left, Implies) and negated_part(f.left) is None and not is_top(f.left):
            left = f"({left})"
        if isinstance(f.right, Implies) and negated_part(f.right) is None and not is_top(f.right):
            right = f"({right})"
        return f"{left} → {right}"
    if isinstance(f, (Forall, Exists)):
        q = "∀" if isinstance(f, Forall) else "∃"
        body = f.body
        if isinstance(body, (Forall, Exists)):
            return f"{q}{f.var}{fmt(body)}"
        if isinstance(body, (And, Or, Implies)) and not is_top(body) and negated_part(body) is None:
            return f"{q}{f.var}({fmt(body)})"
        return f"{q}{f.var} {fmt(body)}"
    raise TypeError(f"not a formula: {f!r}")


def _flatten(f: Formula, node_type) -> list[Formula]:
    if isinstance(f, node_type):
        return _flatten(f.left, node_type) + _flatten(f.right, node_type)
    return [f]


def atom_str(pred_name: str, args: tuple[str, ...]) -> str:
    """Canonical string of a ground atom, e.g. ``edge(a,b)`` or ``p``."""
    return f"{pred_name}({','.join(args)})" if args else pred_name
