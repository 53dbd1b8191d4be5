"""Finite-model theory by exhaustive enumeration.

Partial interpretations cover a subset of a signature's constants; compatible
ones can be unioned.  Satisfaction is classical; the second-order existential
of an SM sentence is evaluated by enumerating candidate extents for the
predicate variables, pruned to subsets of the current extents (anything else
falsifies u <= p) with ground-atom conjuncts of the base formula forced into
every candidate.

Everything here is immutable; enumeration order is fixed by sorting atoms by
(predicate, argument tuple) and counting through subsets in binary.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

from .errors import (
    EnumerationGuardError,
    EvaluationError,
    IncompatibleError,
    SignatureError,
)
from .sm import SecondOrderSentence, build_sm
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
    Term,
    Var,
    atom_str,
    flatten_and,
    free_vars,
    signature_of,
)

if TYPE_CHECKING:  # pragma: no cover
    from .modules import FOModule

DEFAULT_MAX_CANDIDATES = 2**24

# element name used when a purely propositional signature has no object
# constants; classical first-order semantics still wants a nonempty universe
PROP_ELEMENT = "e1"


# ---------------------------------------------------------------------------
# Partial interpretations


@dataclass(frozen=True)
class PartialInterpretation:
    universe: tuple[str, ...]
    objects: tuple[tuple[str, str], ...] = ()
    extents: tuple[tuple[Pred, tuple[tuple[str, ...], ...]], ...] = ()
    functions: tuple[tuple[tuple[str, int], tuple[tuple[tuple[str, ...], str], ...]], ...] = ()

    def __post_init__(self):
        uni = tuple(sorted(set(self.universe)))
        if not uni:
            raise SignatureError("the universe must be nonempty")
        obj = tuple(sorted(set(self.objects)))
        if len({n for n, _ in obj}) != len(obj):
            raise SignatureError("object constant denoted twice")
        ext = tuple(sorted((p, tuple(sorted(set(ts)))) for p, ts in self.extents))
        if len({p for p, _ in ext}) != len(ext):
            raise SignatureError("predicate extent given twice")
        fns = tuple(sorted((k, tuple(sorted(set(g)))) for k, g in self.functions))
        object.__setattr__(self, "universe", uni)
        object.__setattr__(self, "objects", obj)
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "functions", fns)
        elements = set(uni)
        for name, value in obj:
            if value not in elements:
                raise SignatureError(f"object {name} denotes {value!r} outside the universe")
        for pred, tuples in ext:
            for t in tuples:
                if len(t) != pred.arity or any(e not in elements for e in t):
                    raise SignatureError(f"extent tuple {t} does not fit {pred}")
        for (name, arity), graph in fns:
            if len(graph) != len(elements) ** arity:
                raise SignatureError(f"function {name}/{arity} is not total")
            for args, value in graph:
                if len(args) != arity or value not in elements:
                    raise SignatureError(f"function {name}/{arity} maps outside the universe")
        object.__setattr__(self, "_obj", dict(obj))
        object.__setattr__(self, "_ext", {p: frozenset(ts) for p, ts in ext})
        object.__setattr__(self, "_fn", {k: dict(g) for k, g in fns})

    # -- coverage

    @property
    def covered_objects(self) -> frozenset[str]:
        return frozenset(self._obj)

    @property
    def covered_predicates(self) -> frozenset[Pred]:
        return frozenset(self._ext)

    @property
    def covered_functions(self) -> frozenset[tuple[str, int]]:
        return frozenset(self._fn)

    def extent(self, pred: Pred) -> frozenset[tuple[str, ...]]:
        try:
            return self._ext[pred]
        except KeyError:
            raise EvaluationError(f"predicate {pred} not covered") from None

    def object_value(self, name: str) -> str:
        try:
            return self._obj[name]
        except KeyError:
            raise EvaluationError(f"object constant {name!r} not covered") from None

    # -- compatibility and union

    def compatible(self, other: "PartialInterpretation") -> bool:
        if self.universe != other.universe:
            return False
        for name in self.covered_objects & other.covered_objects:
            if self._obj[name] != other._obj[name]:
                return False
        for key in self.covered_functions & other.covered_functions:
            if self._fn[key] != other._fn[key]:
                return False
        for pred in self.covered_predicates & other.covered_predicates:
            if self._ext[pred] != other._ext[pred]:
                return False
        return True

    def union(self, other: "PartialInterpretation") -> "PartialInterpretation":
        if not self.compatible(other):
            raise IncompatibleError("partial interpretations disagree on a shared constant")
        objects = dict(other.objects)
        objects.update(self._obj)
        extents = {p: ts for p, ts in other.extents}
        extents.update({p: ts for p, ts in self.extents})
        functions = dict(other.functions)
        functions.update(dict(self.functions))
        return PartialInterpretation(
            self.universe,
            tuple(objects.items()),
            tuple(extents.items()),
            tuple(functions.items()),
        )

    def restrict(
        self,
        predicates: Iterable[Pred] | None = None,
        objects: Iterable[str] | None = None,
        functions: Iterable[tuple[str, int]] | None = None,
    ) -> "PartialInterpretation":
        """The same interpretation covering only the named constants (None keeps
        a category untouched)."""
        preds = self.covered_predicates if predicates is None else frozenset(predicates)
        objs = self.covered_objects if objects is None else frozenset(objects)
        fns = self.covered_functions if functions is None else frozenset(functions)
        return PartialInterpretation(
            self.universe,
            tuple((n, v) for n, v in self.objects if n in objs),
            tuple((p, ts) for p, ts in self.extents if p in preds),
            tuple((k, g) for k, g in self.functions if k in fns),
        )

    def extend(self, extra: Mapping[Pred, Iterable[tuple[str, ...]]]) -> "PartialInterpretation":
        clash = self.covered_predicates & set(extra)
        if clash:
            raise SignatureError(f"already covered: {', '.join(map(str, sorted(clash)))}")
        new = self.extents + tuple((p, tuple(ts)) for p, ts in extra.items())
        return PartialInterpretation(self.universe, self.objects, new, self.functions)

    # -- display

    def true_atoms(self) -> tuple[str, ...]:
        atoms = []
        for pred, tuples in self.extents:
            for t in tuples:
                atoms.append((pred.name, pred.arity, t))
        return tuple(atom_str(n, t) for n, _, t in sorted(atoms))

    def model_line(self) -> str:
        return "{" + ", ".join(self.true_atoms()) + "}"

    def __str__(self) -> str:
        return self.model_line()


def herbrand_interpretation(
    objects: Sequence[str],
    extents: Mapping[Pred, Iterable[tuple[str, ...]]],
) -> PartialInterpretation:
    """Universe = the object constants, each denoting itself; the extent map's
    keys are exactly the covered predicates (values may be empty)."""
    universe = tuple(sorted(set(objects))) or (PROP_ELEMENT,)
    return PartialInterpretation(
        universe,
        tuple((o, o) for o in objects),
        tuple((p, tuple(ts)) for p, ts in extents.items()),
    )


def propositional_interpretation(
    true: Iterable[Pred], covered: Iterable[Pred]
) -> PartialInterpretation:
    """An interpretation of nullary predicates over a one-element universe."""
    true = set(true)
    extents = {p: ((),) if p in true else () for p in covered}
    missing = true - set(extents)
    if missing:
        raise SignatureError(f"true predicates outside coverage: {missing}")
    return PartialInterpretation((PROP_ELEMENT,), (), tuple(extents.items()))


# ---------------------------------------------------------------------------
# Classical satisfaction


def evaluate(
    interp: PartialInterpretation,
    formula: Formula,
    extra: Mapping[Pred, frozenset[tuple[str, ...]]] | None = None,
) -> bool:
    """Tarskian truth of a sentence; quantifiers range over the finite universe.

    ``extra`` overlays extents for predicate variables without building a new
    interpretation.
    """
    obj = interp._obj
    fns = interp._fn
    ext = interp._ext
    universe = interp.universe

    def term(t: Term, env: dict) -> str:
        cls = t.__class__
        if cls is Var:
            try:
                return env[t.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {t.name!r}; not a sentence") from None
        if cls is Obj:
            try:
                return obj[t.name]
            except KeyError:
                raise EvaluationError(f"object constant {t.name!r} not covered") from None
        graph = fns.get((t.func, len(t.args)))
        if graph is None:
            raise EvaluationError(f"function constant {t.func!r}/{len(t.args)} not covered")
        return graph[tuple(term(a, env) for a in t.args)]

    def ev(f: Formula, env: dict) -> bool:
        cls = f.__class__
        if cls is Atom:
            args = tuple(term(a, env) for a in f.args)
            if extra is not None:
                s = extra.get(f.pred)
                if s is not None:
                    return args in s
            s = ext.get(f.pred)
            if s is None:
                raise EvaluationError(f"predicate {f.pred} not covered")
            return args in s
        if cls is And:
            return ev(f.left, env) and ev(f.right, env)
        if cls is Implies:
            return not ev(f.left, env) or ev(f.right, env)
        if cls is Or:
            return ev(f.left, env) or ev(f.right, env)
        if cls is Bot:
            return False
        if cls is Eq:
            return term(f.left, env) == term(f.right, env)
        if cls is Forall or cls is Exists:
            name = f.var
            body = f.body
            missing = name not in env
            saved = env.get(name)
            result = cls is Forall
            for element in universe:
                env[name] = element
                if ev(body, env) != result:
                    result = not result
                    break
            if missing:
                del env[name]
            else:
                env[name] = saved
            return result
        if cls is ParamAtom:
            raise EvaluationError("parameterized atoms cannot be evaluated; instantiate first")
        raise TypeError(f"not a formula: {f!r}")

    return ev(formula, {})


# ---------------------------------------------------------------------------
# SM checking


def _ground_value(interp: PartialInterpretation, t: Term) -> str:
    if isinstance(t, Obj):
        return interp.object_value(t.name)
    if isinstance(t, App):
        graph = interp._fn.get((t.func, len(t.args)))
        if graph is None:
            raise EvaluationError(f"function constant {t.func!r} not covered")
        return graph[tuple(_ground_value(interp, a) for a in t.args)]
    raise EvaluationError("not a ground term")


def _forced_atoms(interp: PartialInterpretation, sos: SecondOrderSentence) -> dict[Pred, set]:
    """Ground-atom conjuncts of the base force their tuples into every witness:
    the starred conjunct is exactly the corresponding u-atom."""
    wanted = set(sos.intensional)
    forced: dict[Pred, set] = {p: set() for p in sos.intensional}
    for part in flatten_and(sos.base):
        if isinstance(part, Atom) and part.pred in wanted and not free_vars(part):
            forced[part.pred].add(tuple(_ground_value(interp, a) for a in part.args))
    return forced


def sm_holds(
    interp: PartialInterpretation,
    sos: SecondOrderSentence,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> bool:
    """Whether interp satisfies the SM sentence.

    True iff the base holds and no strictly smaller candidate extent satisfies
    the starred matrix; candidates run over subsets of the current intensional
    extents, in binary-counting order over atoms sorted by (predicate, tuple).
    """
    if not evaluate(interp, sos.base):
        return False
    if not sos.intensional:
        return True
    forced = _forced_atoms(interp, sos)
    variable_map = dict(zip(sos.intensional, sos.pred_vars))
    free: list[tuple[Pred, tuple[str, ...]]] = []
    for pred in sos.intensional:
        for t in sorted(interp.extent(pred) - forced[pred]):
            free.append((pred, t))
    n = len(free)
    if 2**n > max_candidates:
        raise EnumerationGuardError(
            f"{2 ** n} candidate extents exceed the cap of {max_candidates}"
        )
    full = (1 << n) - 1
    base_extents = {variable_map[p]: frozenset(ts) for p, ts in forced.items()}
    for mask in range(1 << n):
        if mask == full:
            continue  # u = p is not strictly smaller
        extra = dict(base_extents)
        for i in range(n):
            if mask >> i & 1:
                pred, t = free[i]
                u = variable_map[pred]
                extra[u] = extra[u] | {t}
        if evaluate(interp, sos.star, extra):
            return False
    return True


def satisfies_sm(
    interp: PartialInterpretation,
    formula: Formula,
    intensional: Sequence[Pred],
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> bool:
    return sm_holds(interp, build_sm(formula, intensional), max_candidates)


# ---------------------------------------------------------------------------
# Model enumeration


def _herbrand_base(sig: Signature) -> tuple[tuple[str, ...], list[tuple[Pred, tuple[str, ...]]]]:
    if sig.functions:
        raise SignatureError("model search needs a function-free signature")
    if sig.objects:
        universe = tuple(sorted(sig.objects))
    else:
        if any(p.arity > 0 for p in sig.predicates):
            raise SignatureError(
                "no object constants: cannot search models of non-nullary predicates"
            )
        universe = (PROP_ELEMENT,)
    atoms = [
        (pred, t)
        for pred in sorted(sig.predicates)
        for t in sorted(product(universe, repeat=pred.arity))
    ]
    return universe, atoms


def _interpretation_for_mask(
    universe: tuple[str, ...],
    objects: tuple[str, ...],
    atoms: list[tuple[Pred, tuple[str, ...]]],
    preds: Iterable[Pred],
    mask: int,
) -> PartialInterpretation:
    extents: dict[Pred, list] = {p: [] for p in preds}
    for i, (pred, t) in enumerate(atoms):
        if mask >> i & 1:
            extents[pred].append(t)
    return PartialInterpretation(
        universe,
        tuple((o, o) for o in objects),
        tuple((p, tuple(ts)) for p, ts in extents.items()),
    )


def _facts_fast_path(formula: Formula, preds: Iterable[Pred]) -> dict[Pred, set] | None:
    """For a conjunction of ground atoms whose predicates are all intensional,
    the unique stable model is exactly those atoms."""
    wanted = set(preds)
    extents: dict[Pred, set] = {p: set() for p in wanted}
    for part in flatten_and(formula):
        if not isinstance(part, Atom) or part.pred not in wanted or free_vars(part):
            return None
        if any(not isinstance(a, Obj) for a in part.args):
            return None
        extents[part.pred].add(tuple(a.name for a in part.args))
    return extents


def _sorted_models(models: Iterable[PartialInterpretation]) -> tuple[PartialInterpretation, ...]:
    return tuple(sorted(models, key=lambda m: m.true_atoms()))


def _answer_set_chunk(args) -> list[int]:
    formula, preds, start, stop, max_candidates = args
    sig = signature_of(formula)
    universe, atoms = _herbrand_base(sig)
    sos = build_sm(formula, preds)
    hits = []
    for mask in range(start, stop):
        interp = _interpretation_for_mask(universe, sig.objects, atoms, sig.predicates, mask)
        if sm_holds(interp, sos, max_candidates):
            hits.append(mask)
    return hits


def answer_sets(
    formula: Formula,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    jobs: int = 1,
) -> tuple[PartialInterpretation, ...]:
    """All Herbrand interpretations of the formula's signature satisfying
    SM[F; pr(F)], canonically ordered."""
    sig = signature_of(formula)
    universe, atoms = _herbrand_base(sig)
    objects = tuple((o, o) for o in sig.objects)
    fast = _facts_fast_path(formula, sig.predicates)
    if fast is not None:
        model = PartialInterpretation(
            universe, objects, tuple((p, tuple(ts)) for p, ts in fast.items())
        )
        return (model,)
    n = len(atoms)
    if 2**n > max_candidates:
        raise EnumerationGuardError(
            f"{2 ** n} candidate interpretations exceed the cap of {max_candidates}"
        )
    total = 1 << n
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        step = -(-total // jobs)
        chunks = [
            (formula, tuple(sig.predicates), lo, min(lo + step, total), max_candidates)
            for lo in range(0, total, step)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            masks = [m for hits in pool.map(_answer_set_chunk, chunks) for m in hits]
    else:
        masks = _answer_set_chunk((formula, tuple(sig.predicates), 0, total, max_candidates))
    models = [
        _interpretation_for_mask(universe, sig.objects, atoms, sig.predicates, m) for m in masks
    ]
    return _sorted_models(models)


def module_stable_models(
    module: "FOModule",
    fixed_inputs: PartialInterpretation,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> tuple[PartialInterpretation, ...]:
    """All extensions of fixed_inputs over the module's output atoms that
    satisfy SM[F; outputs]; only output atoms are enumerated."""
    formula = module.formula
    outputs = tuple(module.outputs)
    sig = signature_of(formula)
    if sig.functions:
        raise SignatureError("model search needs a function-free signature")
    clash = fixed_inputs.covered_predicates & set(outputs)
    if clash:
        raise SignatureError(f"fixed inputs already cover outputs: {sorted(map(str, clash))}")
    for pred in sig.predicates:
        if pred not in outputs and pred not in fixed_inputs.covered_predicates:
            raise EvaluationError(f"input predicate {pred} not covered by fixed_inputs")
    for name in sig.objects:
        fixed_inputs.object_value(name)  # raises when uncovered
    universe = fixed_inputs.universe

    fast = _facts_fast_path(formula, outputs)
    if fast is not None:
        return (fixed_inputs.extend({p: tuple(ts) for p, ts in fast.items()}),)

    # outputs not occurring in the formula are forced empty by minimality
    occurring = set(sig.predicates)
    atoms = [
        (pred, t)
        for pred in sorted(outputs)
        if pred in occurring
        for t in sorted(product(universe, repeat=pred.arity))
    ]
    n = len(atoms)
    if 2**n > max_candidates:
        raise EnumerationGuardError(
            f"{2 ** n} candidate extent combinations exceed the cap of {max_candidates}"
        )
    sos = build_sm(formula, outputs)
    models = []
    for mask in range(1 << n):
        extents: dict[Pred, list] = {p: [] for p in outputs}
        for i, (pred, t) in enumerate(atoms):
            if mask >> i & 1:
                extents[pred].append(t)
        candidate = fixed_inputs.extend({p: tuple(ts) for p, ts in extents.items()})
        if sm_holds(candidate, sos, max_candidates):
            models.append(candidate)
    return _sorted_models(models)


# ---------------------------------------------------------------------------
# Exhaustive interpretation spaces (for theorem harnesses)


def interpretations_over(
    sig: Signature,
    size: int,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> Iterator[PartialInterpretation]:
    """Every interpretation of a function-free signature over an abstract
    universe of the given size: all constant assignments, all extents."""
    if sig.functions:
        raise SignatureError("interpretation spaces are function-free")
    if size < 1:
        raise SignatureError("universe size must be >= 1")
    universe = tuple(f"e{i + 1}" for i in range(size))
    preds = sorted(sig.predicates)
    tuple_spaces = [sorted(product(universe, repeat=p.arity)) for p in preds]
    total = len(universe) ** len(sig.objects)
    for space in tuple_spaces:
        total *= 2 ** len(space)
        if total > max_candidates:
            raise EnumerationGuardError(f"interpretation space exceeds {max_candidates}")
    for assignment in product(universe, repeat=len(sig.objects)):
        objects = tuple(zip(sig.objects, assignment))
        for combo in product(*[_subsets(space) for space in tuple_spaces]):
            yield PartialInterpretation(
                universe,
                objects,
                tuple((p, tuple(ts)) for p, ts in zip(preds, combo)),
            )


def _subsets(space: list) -> list[tuple]:
    out = []
    for mask in range(1 << len(space)):
        out.append(tuple(space[i] for i in range(len(space)) if mask >> i & 1))
    return out


def herbrand_interpretations(
    sig: Signature, max_candidates: int = DEFAULT_MAX_CANDIDATES
) -> Iterator[PartialInterpretation]:
    """Every Herbrand interpretation of a function-free signature."""
    universe, atoms = _herbrand_base(sig)
    n = len(atoms)
    if 2**n > max_candidates:
        raise EnumerationGuardError(f"{2 ** n} interpretations exceed the cap")
    for mask in range(1 << n):
        yield _interpretation_for_mask(universe, sig.objects, atoms, sig.predicates, mask)
