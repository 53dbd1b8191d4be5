"""Predicate dependency graphs and the splitting condition checks.

An edge p -> q records that some rule G -> H has p strictly positive in the
consequent and a positive occurrence of q in the antecedent that is not buried
inside a subformula negative on the vertex list.  Strongly connected
components come from an iterative Tarjan over sorted vertices, so the
partition order is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .herbrand import (
    DEFAULT_MAX_CANDIDATES,
    interpretations_over,
    sm_holds,
)
from .sm import build_sm
from .syntax import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Or,
    Pred,
    PredicateList,
    atom_occurrences,
    fmt,
    head_predicates,
    is_negative_on,
    rules_of,
    signature_of,
)


@dataclass(frozen=True)
class DependencyGraph:
    vertices: PredicateList
    edges: frozenset[tuple[Pred, Pred]]

    def __post_init__(self):
        members = set(self.vertices)
        for a, b in self.edges:
            if a not in members or b not in members:
                raise ValueError(f"edge ({a}, {b}) leaves the vertex set")

    def successors(self, v: Pred) -> list[Pred]:
        return sorted(b for a, b in self.edges if a == v)


def _qualifying_body_predicates(body: Formula, vertices: frozenset[Pred]) -> set[Pred]:
    """Vertex predicates with a positive occurrence in the body outside every
    subformula that is negative on the vertex list.  Any such subformula on
    the path disqualifies the whole subtree, so the walk prunes there."""
    found: set[Pred] = set()

    def walk(g: Formula, parity: int) -> None:
        if is_negative_on(g, vertices):
            return
        if isinstance(g, Atom):
            if parity == 0 and g.pred in vertices:
                found.add(g.pred)
        elif isinstance(g, (And, Or)):
            walk(g.left, parity)
            walk(g.right, parity)
        elif isinstance(g, Implies):
            walk(g.left, 1 - parity)
            walk(g.right, parity)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, parity)

    walk(body, 0)
    return found


def dependency_graph(f: Formula, vertices: Sequence[Pred]) -> DependencyGraph:
    vs = frozenset(vertices)
    edges: set[tuple[Pred, Pred]] = set()
    for rule in rules_of(f):
        heads = set(head_predicates(rule.right)) & vs
        if not heads:
            continue
        for q in _qualifying_body_predicates(rule.left, vs):
            edges.update((p, q) for p in heads)
    return DependencyGraph(tuple(vertices), frozenset(edges))


def tarjan_components(vertices, successors) -> list[tuple]:
    """Tarjan's algorithm, iteratively; components ordered by smallest member.

    Works for any orderable hashable vertex type; `successors` maps a vertex to
    an iterable of neighbours.
    """
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    components: list[tuple] = []

    for root in sorted(vertices):
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, neighbours = work[-1]
            advanced = False
            for w in neighbours:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(component)))
    components.sort(key=lambda c: c[0] if c else None)
    return components


def strongly_connected_components(graph: DependencyGraph) -> list[tuple[Pred, ...]]:
    return tarjan_components(graph.vertices, graph.successors)


def to_dot(graph: DependencyGraph) -> str:
    lines = ["digraph dependencies {"]
    for v in sorted(graph.vertices):
        lines.append(f'  "{v}";')
    for a, b in sorted(graph.edges):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Split condition checks (the classic one-sided case takes H = top)


def _merge_lists(p: Sequence[Pred], q: Sequence[Pred]) -> PredicateList:
    return tuple(dict.fromkeys(tuple(p) + tuple(q)))


def _negativity_witness(f: Formula, preds: Iterable[Pred]) -> Pred | None:
    wanted = set(preds)
    for pred, depth in atom_occurrences(f):
        if depth == 0 and pred in wanted:
            return pred
    return None


@dataclass(frozen=True)
class SplitReport:
    left: Formula
    right: Formula
    shared: Formula
    left_preds: PredicateList
    right_preds: PredicateList
    graph: DependencyGraph
    components: tuple[tuple[Pred, ...], ...]
    bad_component: tuple[Pred, ...] | None
    left_witness: Pred | None  # strictly positive right-list predicate in left
    right_witness: Pred | None

    @property
    def scc_ok(self) -> bool:
        return self.bad_component is None

    @property
    def left_negative(self) -> bool:
        return self.left_witness is None

    @property
    def right_negative(self) -> bool:
        return self.right_witness is None

    @property
    def ok(self) -> bool:
        return self.scc_ok and self.left_negative and self.right_negative

    def __str__(self) -> str:
        if self.ok:
            return "split conditions hold"
        if not self.scc_ok:
            names = ", ".join(str(p) for p in self.bad_component)
            return f"condition (a) fails: component {{{names}}} straddles both lists"
        if not self.left_negative:
            return (
                f"condition (b) fails: {self.left_witness} occurs strictly "
                f"positively in {fmt(self.left)}"
            )
        return (
            f"condition (c) fails: {self.right_witness} occurs strictly "
            f"positively in {fmt(self.right)}"
        )


def check_split(
    f: Formula,
    g: Formula,
    h: Formula,
    p: Sequence[Pred],
    q: Sequence[Pred],
) -> SplitReport:
    """Condition report for splitting SM[F ^ G ^ H; pq] into
    SM[F ^ H; p] ^ SM[G ^ H; q].  The lists may overlap."""
    merged = _merge_lists(p, q)
    graph = dependency_graph(And(And(f, g), h), merged)
    components = tuple(strongly_connected_components(graph))
    pset, qset = set(p), set(q)
    bad = None
    for component in components:
        members = set(component)
        if not (members <= pset or members <= qset):
            bad = component
            break
    return SplitReport(
        left=f,
        right=g,
        shared=h,
        left_preds=tuple(p),
        right_preds=tuple(q),
        graph=graph,
        components=components,
        bad_component=bad,
        left_witness=_negativity_witness(f, q),
        right_witness=_negativity_witness(g, p),
    )


def verify_split_equivalence(
    f: Formula,
    g: Formula,
    h: Formula,
    p: Sequence[Pred],
    q: Sequence[Pred],
    bound: int,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    require_conditions: bool = True,
) -> bool:
    """Exhaustively compare both sides of the split over every interpretation
    with universe sizes 1..bound (all constant assignments, all extents)."""
    if require_conditions:
        report = check_split(f, g, h, p, q)
        if not report.ok:
            raise ValueError(str(report))
    whole = And(And(f, g), h)
    sig = signature_of(whole)
    sig = sig.with_predicates(tuple(p) + tuple(q))
    merged = _merge_lists(p, q)
    sm_whole = build_sm(whole, merged)
    sm_left = build_sm(And(f, h), tuple(p))
    sm_right = build_sm(And(g, h), tuple(q))
    for size in range(1, bound + 1):
        for interp in interpretations_over(sig, size, max_candidates):
            lhs = sm_holds(interp, sm_whole, max_candidates)
            rhs = sm_holds(interp, sm_left, max_candidates) and sm_holds(
                interp, sm_right, max_candidates
            )
            if lhs != rhs:
                return False
    return True
