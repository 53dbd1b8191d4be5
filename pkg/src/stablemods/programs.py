"""Parsing of logic programs and their translation into first-order sentences.

Concrete syntax (UTF-8, ``%`` comments)::

    p(a).  q(b).                          facts
    r(x) :- p(x), not q(x).               rules; `not not a` allowed in bodies
    h1 ; h2 :- body.                      disjunctive heads; `not h` allowed
    {p(X)} :- body.                       choice rule (single atom)
    :- body.                              constraint
    X != Y   X = a                        comparisons in bodies
    2 {X : p(X), not q(X)}                count aggregate, optionally under `not`
    p@(t+1)(X)                            incrementally parameterized atom
    #base.  #cumulative t.  #volatile t.  incremental sections
    #input p/1, q.   #output r/2.         module interface headers

Identifiers starting with an uppercase letter or underscore are variables, as
is a single letter from ``u`` to ``z`` optionally followed by digits (so the
textbook-style ``x`` works alongside ``X``).  Everything else lowercase names a
constant; the category (object, function, predicate) follows from position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import InstantiationError, ParseError
from .syntax import (
    And,
    App,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Obj,
    Or,
    ParamAtom,
    Pred,
    Signature,
    StepExpr,
    Term,
    Var,
    conj,
    disj,
    flatten_and,
    fmt,
    free_vars,
    is_top,
    neg,
    negated_part,
    substitute,
    top,
    universal_closure,
)

# ---------------------------------------------------------------------------
# Rule data model


@dataclass(frozen=True)
class HeadLiteral:
    atom: Union[Atom, ParamAtom]
    negated: bool = False


@dataclass(frozen=True)
class BodyLiteral:
    """An atom or comparison under 0, 1 or 2 negations."""

    item: Union[Atom, ParamAtom, Eq]
    neg: int = 0

    def __post_init__(self):
        if self.neg not in (0, 1, 2):
            raise ValueError("negation depth must be 0, 1 or 2")


@dataclass(frozen=True)
class CountAggregate:
    bound: int
    variables: tuple[str, ...]
    literals: tuple[BodyLiteral, ...]
    negated: bool = False

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("aggregate bound must be >= 1")
        if not self.variables:
            raise ValueError("aggregate needs at least one bound variable")


BodyElement = Union[BodyLiteral, CountAggregate]


@dataclass(frozen=True)
class Rule:
    head: tuple[HeadLiteral, ...]
    body: tuple[BodyElement, ...] = ()
    choice: bool = False

    def __post_init__(self):
        if self.choice and (len(self.head) != 1 or self.head[0].negated):
            raise ValueError("choice heads are single positive atoms")

    @property
    def positive_body(self):
        return tuple(b for b in self.body if isinstance(b, BodyLiteral) and b.neg == 0)

    @property
    def negative_body(self):
        return tuple(b for b in self.body if isinstance(b, BodyLiteral) and b.neg == 1)

    @property
    def double_negative_body(self):
        return tuple(b for b in self.body if isinstance(b, BodyLiteral) and b.neg == 2)

    @property
    def aggregates(self):
        return tuple(b for b in self.body if isinstance(b, CountAggregate))


@dataclass(frozen=True)
class Program:
    signature: Signature
    rules: tuple[Rule, ...]

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], extra: Signature | None = None) -> "Program":
        rules = tuple(rules)
        sig = _collect_signature(rules)
        if extra is not None:
            sig = sig.merge(extra)
        return cls(sig, rules)


@dataclass(frozen=True)
class ParsedFile:
    """Everything a source file can carry; thin wrappers pick out what they allow."""

    base: tuple[Rule, ...]
    cumulative: tuple[Rule, ...]
    volatile: tuple[Rule, ...]
    inputs: tuple[Pred, ...]
    outputs: tuple[Pred, ...]
    signature: Signature

    @property
    def has_sections(self) -> bool:
        return bool(self.cumulative or self.volatile)

    @property
    def has_module_headers(self) -> bool:
        return bool(self.inputs or self.outputs)


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+|%[^\n]*)
      | (?P<directive>\#[a-z]+)
      | (?P<int>\d+)
      | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>:-|!=|->|[.,;:(){}=@+\-/&|])
      | (?P<uni>[∧∨→¬∀∃⊥⊤≠])
    """,
    re.VERBOSE,
)

_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*$|[u-z][0-9]*$")
_KEYWORDS = {"not", "forall", "exists"}


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME VAR INT OP DIRECTIVE KEYWORD EOF
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            line += value.count("\n")
            if "\n" in value:
                line_start = pos + value.rindex("\n") + 1
        elif kind == "word":
            if value in _KEYWORDS:
                tokens.append(_Token("KEYWORD", value, line, col))
            elif _VAR_RE.match(value):
                tokens.append(_Token("VAR", value, line, col))
            else:
                tokens.append(_Token("NAME", value, line, col))
        elif kind == "int":
            tokens.append(_Token("INT", value, line, col))
        elif kind == "directive":
            tokens.append(_Token("DIRECTIVE", value, line, col))
        else:
            tokens.append(_Token("OP", value, line, col))
        pos = m.end()
    tokens.append(_Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.param_bases: set[str] = set()

    # -- token plumbing

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind: str, text: str | None = None) -> _Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if not self.at(kind, text):
            want = text or kind.lower()
            raise ParseError(f"expected {want!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.column)
        return self.next()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    # -- terms and atoms

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
            return Var(tok.text)
        if tok.kind == "INT":
            self.next()
            return Obj(tok.text)
        if tok.kind == "NAME":
            self.next()
            if self.at("OP", "("):
                self.next()
                args = [self.parse_term()]
                while self.accept("OP", ","):
                    args.append(self.parse_term())
                self.expect("OP", ")")
                return App(tok.text, tuple(args))
            return Obj(tok.text)
        raise self.error(f"expected a term, found {tok.text!r}")

    def parse_step(self) -> StepExpr:
        if self.at("INT"):
            return StepExpr(int(self.next().text), uses_counter=False)
        tok = self.expect("NAME")
        if tok.text != "t":
            raise ParseError(f"step expressions use the counter 't', not {tok.text!r}",
                             tok.line, tok.column)
        if self.accept("OP", "+"):
            return StepExpr(int(self.expect("INT").text))
        if self.accept("OP", "-"):
            return StepExpr(-int(self.expect("INT").text))
        return StepExpr(0)

    def parse_atom(self) -> Union[Atom, ParamAtom]:
        name = self.expect("NAME")
        step = None
        if self.accept("OP", "@"):
            self.expect("OP", "(")
            step = self.parse_step()
            self.expect("OP", ")")
        args: tuple[Term, ...] = ()
        if self.accept("OP", "("):
            parts = [self.parse_term()]
            while self.accept("OP", ","):
                parts.append(self.parse_term())
            self.expect("OP", ")")
            args = tuple(parts)
        if step is not None:
            self.param_bases.add(name.text)
            return ParamAtom(name.text, step, args)
        return Atom(Pred(name.text, len(args)), args)

    def parse_atom_or_comparison(self) -> Union[Atom, ParamAtom, Eq, tuple]:
        """An atom, or ``term = term`` / ``term != term`` (the latter returned
        as ("neq", Eq) so the caller can fold the negation in)."""
        if self.at("NAME") and self.peek(1).kind == "OP" and self.peek(1).text == "@":
            return self.parse_atom()
        # name(...) could still be a function term on the left of `=`:
        # parse a term first and reinterpret when no comparison follows.
        tok = self.peek()
        term = self.parse_term()
        if self.accept("OP", "="):
            return Eq(term, self.parse_term())
        if self.accept("OP", "!=") or self.accept("OP", "≠"):
            return ("neq", Eq(term, self.parse_term()))
        if isinstance(term, Obj):
            return Atom(Pred(term.name, 0))
        if isinstance(term, App):
            return Atom(Pred(term.func, len(term.args)), term.args)
        raise ParseError("a variable is not a literal", tok.line, tok.column)

    # -- rule bodies

    def parse_body_literal(self) -> BodyElement:
        negs = 0
        while self.at("KEYWORD", "not"):
            self.next()
            negs += 1
            if negs > 2:
                raise self.error("at most two `not` allowed")
        if self.at("INT"):
            tok = self.peek()
            bound = int(self.next().text)
            self.expect("OP", "{")
            variables = [self.expect("VAR").text]
            while self.accept("OP", ","):
                variables.append(self.expect("VAR").text)
            self.expect("OP", ":")
            lits = [self.parse_aggregate_literal()]
            while self.accept("OP", ","):
                lits.append(self.parse_aggregate_literal())
            self.expect("OP", "}")
            if negs > 1:
                raise self.error("aggregates take at most one `not`")
            if bound < 1:
                raise ParseError("aggregate bound must be >= 1", tok.line, tok.column)
            return CountAggregate(bound, tuple(variables), tuple(lits), negated=negs == 1)
        item = self.parse_atom_or_comparison()
        if isinstance(item, tuple):  # X != Y sugars to one extra negation
            _, eq = item
            if negs == 2:
                raise self.error("`not not` cannot apply to a disequality")
            return BodyLiteral(eq, negs + 1)
        return BodyLiteral(item, negs)

    def parse_aggregate_literal(self) -> BodyLiteral:
        negs = 1 if self.accept("KEYWORD", "not") else 0
        item = self.parse_atom_or_comparison()
        if isinstance(item, tuple):
            _, eq = item
            return BodyLiteral(eq, negs + 1)
        return BodyLiteral(item, negs)

    # -- rules and files

    def parse_rule(self) -> Rule:
        head: tuple[HeadLiteral, ...] = ()
        choice = False
        if self.accept("OP", "{"):
            atom = self.parse_atom()
            self.expect("OP", "}")
            head = (HeadLiteral(atom),)
            choice = True
        elif not self.at("OP", ":-"):
            lits = [self.parse_head_literal()]
            while self.accept("OP", ";"):
                lits.append(self.parse_head_literal())
            head = tuple(lits)
        body: tuple[BodyElement, ...] = ()
        if self.accept("OP", ":-"):
            parts = [self.parse_body_literal()]
            while self.accept("OP", ","):
                parts.append(self.parse_body_literal())
            body = tuple(parts)
        self.expect("OP", ".")
        return Rule(head, body, choice)

    def parse_head_literal(self) -> HeadLiteral:
        negated = bool(self.accept("KEYWORD", "not"))
        return HeadLiteral(self.parse_atom(), negated)

    def parse_pred_list(self) -> list[Pred]:
        preds = []
        while True:
            name = self.expect("NAME").text
            arity = 0
            if self.accept("OP", "/"):
                arity = int(self.expect("INT").text)
            preds.append(Pred(name, arity))
            if not self.accept("OP", ","):
                break
        return preds

    def parse_file(self) -> ParsedFile:
        sections: dict[str, list[Rule]] = {"base": [], "cumulative": [], "volatile": []}
        inputs: list[Pred] = []
        outputs: list[Pred] = []
        current = "base"
        while not self.at("EOF"):
            if self.at("DIRECTIVE"):
                tok = self.next()
                name = tok.text[1:]
                if name in sections:
                    if name != "base":
                        step = self.expect("NAME")
                        if step.text != "t":
                            raise ParseError("section counter must be 't'",
                                             step.line, step.column)
                    self.expect("OP", ".")
                    current = name
                elif name == "input" or name == "output":
                    preds = self.parse_pred_list()
                    self.expect("OP", ".")
                    (inputs if name == "input" else outputs).extend(preds)
                else:
                    raise ParseError(f"unknown directive #{name}", tok.line, tok.column)
                continue
            sections[current].append(self.parse_rule())
        base, cumulative, volatile = (tuple(sections[k]) for k in ("base", "cumulative", "volatile"))
        sig = _collect_signature(base + cumulative + volatile)
        sig = sig.with_predicates(inputs + outputs)
        self._check_param_collisions(sig)
        arities: dict[str, int] = {}
        for p in sig.predicates:
            if arities.setdefault(p.name, p.arity) != p.arity:
                raise ParseError(
                    f"predicate {p.name!r} used with arities {arities[p.name]} and {p.arity}"
                )
        return ParsedFile(base, cumulative, volatile, tuple(inputs), tuple(outputs), sig)

    def _check_param_collisions(self, sig: Signature) -> None:
        patterns = [re.compile(rf"{re.escape(b)}_\d+$") for b in self.param_bases]
        for p in sig.predicates:
            for pat in patterns:
                if pat.match(p.name):
                    raise ParseError(
                        f"predicate {p.name!r} collides with instantiations of a "
                        f"parameterized atom"
                    )


def _atoms_of_rule(rule: Rule) -> Iterator[Union[Atom, ParamAtom, Eq]]:
    for h in rule.head:
        yield h.atom
    for b in rule.body:
        if isinstance(b, BodyLiteral):
            yield b.item
        else:
            for lit in b.literals:
                yield lit.item


def _collect_signature(rules: Iterable[Rule]) -> Signature:
    objs: set[str] = set()
    funcs: set[tuple[str, int]] = set()
    preds: set[Pred] = set()

    def take_term(t: Term) -> None:
        if isinstance(t, Obj):
            objs.add(t.name)
        elif isinstance(t, App):
            funcs.add((t.func, len(t.args)))
            for a in t.args:
                take_term(a)

    for rule in rules:
        for item in _atoms_of_rule(rule):
            if isinstance(item, Atom):
                preds.add(item.pred)
                for a in item.args:
                    take_term(a)
            elif isinstance(item, ParamAtom):
                for a in item.args:
                    take_term(a)
            else:
                take_term(item.left)
                take_term(item.right)
    return Signature(tuple(sorted(objs)), tuple(sorted(funcs)), tuple(sorted(preds)))


# ---------------------------------------------------------------------------
# Entry points


def parse_file(text: str) -> ParsedFile:
    return _Parser(text).parse_file()


def parse_program(text: str) -> Program:
    """Parse a plain program; section markers and module headers are rejected."""
    parsed = parse_file(text)
    if parsed.has_sections:
        raise ParseError("incremental sections are not allowed in a plain program")
    if parsed.has_module_headers:
        raise ParseError("module headers are not allowed in a plain program")
    return Program(parsed.signature, parsed.base)


def parse_module_file(text: str) -> tuple[Program, tuple[Pred, ...], tuple[Pred, ...]]:
    parsed = parse_file(text)
    if parsed.has_sections:
        raise ParseError("incremental sections are not allowed in a module file")
    return Program(parsed.signature, parsed.base), parsed.inputs, parsed.outputs


def parse_incremental_file(text: str) -> tuple[Program, Program, Program]:
    """Split an incremental file into base, cumulative and volatile programs
    sharing one signature."""
    parsed = parse_file(text)
    if parsed.has_module_headers:
        raise ParseError("module headers are not allowed in an incremental file")
    sig = parsed.signature
    return (
        Program(sig, parsed.base),
        Program(sig, parsed.cumulative),
        Program(sig, parsed.volatile),
    )


# ---------------------------------------------------------------------------
# FOL representation


def _rule_variables(rule: Rule) -> set[str]:
    out: set[str] = set()
    for item in _atoms_of_rule(rule):
        if isinstance(item, Eq):
            out |= free_vars(item)
        else:
            out |= set(free_vars(item))
    for agg in rule.aggregates:
        out |= set(agg.variables)
    return out


def expand_count(bound: int, variables: tuple[str, ...], body: Formula,
                 taken: set[str] | None = None) -> Formula:
    """The first-order expansion of a count aggregate: existentially quantified
    copies of the body over fresh variable lists, pairwise tuple-disequal."""
    if bound < 1:
        raise ValueError("aggregate bound must be >= 1")
    if not variables:
        raise ValueError("aggregate needs at least one bound variable")
    taken = set(taken or ()) | set(variables) | set(free_vars(body))
    copies: list[tuple[str, ...]] = []
    for _ in range(bound):
        fresh = []
        for v in variables:
            k = 1
            while f"{v}{k}" in taken:
                k += 1
            taken.add(f"{v}{k}")
            fresh.append(f"{v}{k}")
        copies.append(tuple(fresh))
    parts = [
        substitute(body, {v: Var(c) for v, c in zip(variables, copy)})
        for copy in copies
    ]
    for i in range(bound):
        for j in range(i + 1, bound):
            tuple_eq = conj([Eq(Var(a), Var(b)) for a, b in zip(copies[i], copies[j])])
            parts.append(neg(tuple_eq))
    out = conj(parts)
    for copy in reversed(copies):
        for v in reversed(copy):
            out = Exists(v, out)
    return out


def _literal_formula(lit: BodyLiteral) -> Formula:
    f: Formula = lit.item
    for _ in range(lit.neg):
        f = neg(f)
    return f


def _body_formula(rule: Rule) -> Formula | None:
    if not rule.body:
        return None
    taken = _rule_variables(rule)
    parts: list[Formula] = []
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            parts.append(_literal_formula(element))
        else:
            inner = conj([_literal_formula(l) for l in element.literals])
            expanded = expand_count(element.bound, element.variables, inner, taken)
            parts.append(neg(expanded) if element.negated else expanded)
    return conj(parts)


def desugar_choice(rule: Rule) -> Rule:
    """``{p} :- Body`` becomes ``p ; not p :- Body``."""
    if not rule.choice:
        raise ValueError("not a choice rule")
    atom = rule.head[0].atom
    return Rule((HeadLiteral(atom), HeadLiteral(atom, negated=True)), rule.body)


def rule_formula(rule: Rule) -> Formula:
    """Universal closure of the implication corresponding to one rule."""
    if rule.choice:
        rule = desugar_choice(rule)
    head: Formula = disj(
        [neg(h.atom) if h.negated else h.atom for h in rule.head]
    )
    body = _body_formula(rule)
    f = head if body is None else Implies(body, head)
    return universal_closure(f)


def fol_representation(program: Program) -> Formula:
    """Conjunction, in rule order, of the universal closures of the rules."""
    return conj([rule_formula(r) for r in program.rules])


# ---------------------------------------------------------------------------
# Incremental instantiation


def instantiate_at(f: Formula, i: int) -> Formula:
    """Replace every parameterized atom by the plain atom at its evaluated index."""
    if isinstance(f, ParamAtom):
        v = f.step.evaluate(i)
        if v < 0:
            raise InstantiationError(f"step {f.step} evaluates to {v} at i={i}")
        return Atom(Pred(f"{f.base}_{v}", len(f.args)), f.args)
    if isinstance(f, (Atom, Eq, Bot)):
        return f
    if isinstance(f, (And, Or, Implies)):
        return type(f)(instantiate_at(f.left, i), instantiate_at(f.right, i))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, instantiate_at(f.body, i))
    raise TypeError(f"not a formula: {f!r}")


def _instantiate_item(item, i: int):
    if isinstance(item, ParamAtom):
        v = item.step.evaluate(i)
        if v < 0:
            raise InstantiationError(f"step {item.step} evaluates to {v} at i={i}")
        return Atom(Pred(f"{item.base}_{v}", len(item.args)), item.args)
    return item


def instantiate_rule(rule: Rule, i: int) -> Rule:
    head = tuple(HeadLiteral(_instantiate_item(h.atom, i), h.negated) for h in rule.head)
    body = []
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            body.append(BodyLiteral(_instantiate_item(element.item, i), element.neg))
        else:
            lits = tuple(BodyLiteral(_instantiate_item(l.item, i), l.neg)
                         for l in element.literals)
            body.append(CountAggregate(element.bound, element.variables, lits,
                                       element.negated))
    return Rule(head, tuple(body), rule.choice)


def instantiate_program(program: Program, i: int) -> Program:
    return Program.from_rules(
        [instantiate_rule(r, i) for r in program.rules],
        Signature(program.signature.objects, program.signature.functions),
    )


# ---------------------------------------------------------------------------
# Formula text syntax (used by the CLI and round-trip tests)


class _FormulaParser(_Parser):
    def parse_formula(self) -> Formula:
        f = self.parse_implication()
        return f

    def parse_implication(self) -> Formula:
        left = self.parse_disjunction()
        if self.accept("OP", "->") or self.accept("OP", "→"):
            return Implies(left, self.parse_implication())
        return left

    def parse_disjunction(self) -> Formula:
        f = self.parse_conjunction()
        while self.accept("OP", "|") or self.accept("OP", "∨"):
            f = Or(f, self.parse_conjunction())
        return f

    def parse_conjunction(self) -> Formula:
        f = self.parse_unary()
        while self.accept("OP", "&") or self.accept("OP", "∧"):
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        if self.accept("OP", "-") or self.accept("OP", "¬") or self.accept("KEYWORD", "not"):
            return neg(self.parse_unary())
        if self.at("OP", "∀") or self.at("KEYWORD", "forall"):
            self.next()
            var = self.expect("VAR").text
            return Forall(var, self.parse_unary())
        if self.at("OP", "∃") or self.at("KEYWORD", "exists"):
            self.next()
            var = self.expect("VAR").text
            return Exists(var, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        if self.accept("OP", "("):
            f = self.parse_formula()
            self.expect("OP", ")")
            return f
        if self.accept("OP", "⊥"):
            return Bot()
        if self.accept("OP", "⊤"):
            return top()
        if self.at("DIRECTIVE"):
            tok = self.next()
            if tok.text == "#false":
                return Bot()
            if tok.text == "#true":
                return top()
            raise ParseError(f"unexpected directive {tok.text}", tok.line, tok.column)
        item = self.parse_atom_or_comparison()
        if isinstance(item, tuple):
            _, eq = item
            return neg(eq)
        return item


def parse_formula(text: str) -> Formula:
    parser = _FormulaParser(text)
    f = parser.parse_formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return f


def parse_model_line(text: str) -> tuple[Atom, ...]:
    """Parse the canonical model format: ``{p(a), q(b)}`` or ``{}``."""
    parser = _Parser(text)
    parser.expect("OP", "{")
    atoms: list[Atom] = []
    if not parser.at("OP", "}"):
        while True:
            atom = parser.parse_atom()
            if not isinstance(atom, Atom):
                raise ParseError("parameterized atoms cannot appear in models")
            atoms.append(atom)
            if not parser.accept("OP", ","):
                break
    parser.expect("OP", "}")
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return tuple(atoms)


# ---------------------------------------------------------------------------
# Rendering formulas back into rule syntax (module file emission)


def _literal_text(f: Formula, in_head: bool) -> str:
    inner = negated_part(f)
    if inner is not None:
        deeper = negated_part(inner)
        if deeper is not None and not in_head:
            if isinstance(deeper, Atom):
                return f"not not {fmt(deeper)}"
            raise _not_rule(f)
        if isinstance(inner, Atom):
            return f"not {fmt(inner)}"
        if isinstance(inner, Eq) and not in_head:
            return f"{fmt_term_pair(inner)}"
        raise _not_rule(f)
    if isinstance(f, Atom):
        return fmt(f)
    if isinstance(f, Eq) and not in_head:
        return f"{fmt(f)}"
    raise _not_rule(f)


def fmt_term_pair(eq: Eq) -> str:
    return f"{eq.left} != {eq.right}"


def _not_rule(f: Formula):
    from .errors import NotRuleShapedError

    return NotRuleShapedError(f"cannot render {fmt(f)!r} in rule syntax")


def rule_text_of(formula: Formula) -> str:
    """Render a rule-shaped conjunct back into program syntax.

    Raises NotRuleShapedError for formulas outside the rule fragment (for
    example expanded aggregates).
    """
    f = formula
    while isinstance(f, Forall):
        f = f.body
    if is_top(f):
        raise _not_rule(formula)
    if isinstance(f, Implies) and not (
        negated_part(f) is not None and isinstance(f.left, (Atom, Eq))
    ):
        body, head = f.left, f.right
        body_parts = [_literal_text(b, in_head=False) for b in flatten_and(body)]
        if isinstance(head, Bot):
            return f":- {', '.join(body_parts)}."
        head_parts = [_literal_text(h, in_head=True) for h in _flatten_or(head)]
        return f"{' ; '.join(head_parts)} :- {', '.join(body_parts)}."
    inner = negated_part(f)
    if inner is not None:
        body_parts = [_literal_text(b, in_head=False) for b in flatten_and(inner)]
        return f":- {', '.join(body_parts)}."
    head_parts = [_literal_text(h, in_head=True) for h in _flatten_or(f)]
    return f"{' ; '.join(head_parts)}."


def _flatten_or(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return _flatten_or(f.left) + _flatten_or(f.right)
    return [f]
