"""Command-line surface: files in, text out.

Exit codes: 0 on success, 1 on domain refusals (not joinable, not acyclic,
enumeration guard) with a report on stderr, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ParseError, StableModsError
from .herbrand import (
    DEFAULT_MAX_CANDIDATES,
    PartialInterpretation,
    answer_sets,
    herbrand_interpretations,
    module_stable_models,
    satisfies_sm,
)
from .incremental import (
    IncrementalTheory,
    acyclic_check,
    assemble,
    fm_instantiate,
    fm_trace,
    incremental_solve,
)
from .modules import join, joinable, module_file_text, module_from_program
from .programs import (
    fol_representation,
    parse_formula,
    parse_model_line,
    parse_module_file,
    parse_program,
)
from .sm import build_sm, fmt_sm
from .splitting import check_split, dependency_graph, to_dot, verify_split_equivalence
from .syntax import Pred, Signature, fmt, predicates_of, signature_of
from .verify import SUITES, run_suite


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _resolve_predicates(names: str, sig: Signature, allow_new: bool = False) -> tuple[Pred, ...]:
    """Turn `p,q/2` into predicate constants, looking arities up in the signature."""
    by_name = {}
    for p in sig.predicates:
        by_name.setdefault(p.name, p)
    out = []
    for raw in names.split(","):
        raw = raw.strip()
        if not raw:
            continue
        if "/" in raw:
            name, arity = raw.split("/", 1)
            out.append(Pred(name, int(arity)))
            continue
        if raw in by_name:
            out.append(by_name[raw])
        elif allow_new:
            out.append(Pred(raw, 0))
        else:
            raise ParseError(f"predicate {raw!r} does not occur in the input")
    return tuple(out)


def _print_models(models) -> None:
    for model in models:
        print(model.model_line())


# ---------------------------------------------------------------------------
# Commands


def cmd_fol(args) -> int:
    program = parse_program(_read(args.file))
    print(fmt(fol_representation(program)))
    return 0


def cmd_sm(args) -> int:
    program = parse_program(_read(args.file))
    formula = fol_representation(program)
    sig = signature_of(formula)
    preds = (
        _resolve_predicates(args.intensional, sig)
        if args.intensional is not None
        else predicates_of(formula)
    )
    print(fmt_sm(build_sm(formula, preds)))
    return 0


def cmd_solve(args) -> int:
    program = parse_program(_read(args.file))
    formula = fol_representation(program)
    sig = signature_of(formula)
    if args.intensional is None:
        models = answer_sets(formula, args.max_candidates, jobs=args.jobs)
    else:
        preds = _resolve_predicates(args.intensional, sig)
        models = tuple(
            i
            for i in herbrand_interpretations(sig, args.max_candidates)
            if satisfies_sm(i, formula, preds, args.max_candidates)
        )
        models = tuple(sorted(models, key=lambda m: m.true_atoms()))
    _print_models(models)
    return 0


def cmd_deps(args) -> int:
    program = parse_program(_read(args.file))
    formula = fol_representation(program)
    preds = (
        _resolve_predicates(args.intensional, signature_of(formula))
        if args.intensional is not None
        else predicates_of(formula)
    )
    print(to_dot(dependency_graph(formula, preds)))
    return 0


def cmd_split(args) -> int:
    f = parse_formula(_read(args.left_file))
    g = parse_formula(_read(args.right_file))
    h = parse_formula(_read(args.shared_file))
    sig = signature_of(f).merge(signature_of(g)).merge(signature_of(h))
    p = _resolve_predicates(args.left, sig, allow_new=True)
    q = _resolve_predicates(args.right, sig, allow_new=True)
    report = check_split(f, g, h, p, q)
    print(report)
    if not report.ok:
        return 1
    if args.bound:
        agreed = verify_split_equivalence(
            f, g, h, p, q, args.bound, args.max_candidates
        )
        print(f"semantic check up to universe size {args.bound}: "
              f"{'equivalent' if agreed else 'NOT equivalent'}")
        if not agreed:
            return 1
    return 0


def cmd_modsolve(args) -> int:
    program, inputs, outputs = parse_module_file(_read(args.file))
    module = module_from_program(program, inputs, outputs)
    atoms = parse_model_line(_read(args.input_model).strip())
    objects = set(program.signature.objects)
    extents = {p: set() for p in module.inputs}
    for atom in atoms:
        if atom.pred not in extents:
            raise ParseError(f"{fmt(atom)} is not an input atom of the module")
        names = tuple(t.name for t in atom.args)  # ground per parse_model_line
        objects.update(names)
        extents[atom.pred].add(names)
    fixed = PartialInterpretation(
        tuple(sorted(objects)) or ("e1",),
        tuple((o, o) for o in sorted(objects)),
        tuple((p, tuple(ts)) for p, ts in extents.items()),
    )
    _print_models(module_stable_models(module, fixed, args.max_candidates))
    return 0


def cmd_join(args) -> int:
    modules = []
    for path in (args.first, args.second):
        program, inputs, outputs = parse_module_file(_read(path))
        modules.append(module_from_program(program, inputs, outputs))
    shared = None
    if args.shared:
        from .programs import rule_formula

        shared_program, _, _ = parse_module_file(_read(args.shared))
        shared = tuple(rule_formula(r) for r in shared_program.rules)
    report = joinable(modules[0], modules[1], shared)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    print(module_file_text(join(modules[0], modules[1], shared)), end="")
    return 0


def cmd_instantiate(args) -> int:
    formula = parse_formula(_read(args.file))
    sig = signature_of(formula)
    inputs = _resolve_predicates(args.input or "", sig, allow_new=True)
    for i, step in enumerate(fm_trace(formula, inputs)):
        print(f"F{i}: {fmt(step)}")
    print(f"module: {fm_instantiate(formula, inputs)}")
    return 0


def cmd_incr(args) -> int:
    theory = IncrementalTheory.from_source(_read(args.file))
    report = acyclic_check(theory, args.step)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    state = assemble(theory, args.step)
    for label, outputs in state.out_sets():
        names = ", ".join(str(p) for p in sorted(outputs))
        print(f"{label} outputs: {names}" if names else f"{label} outputs: (none)")
    print("models:")
    _print_models(incremental_solve(theory, args.step, args.max_candidates))
    return 0


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        kwargs = {"seed": args.seed}
        if args.count is not None:
            kwargs["count"] = args.count
        if name == "splitting" and args.bound:
            kwargs["bound"] = args.bound
        result = run_suite(name, **kwargs)
        print(result.summary())
        for failure in result.failures[:10]:
            print(f"  {failure}")
        failed = failed or not result.ok
    return 1 if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablemods",
        description="Stable models of first-order formulas: translate, split, "
        "compose and solve at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument(
            "--max-candidates",
            type=int,
            default=DEFAULT_MAX_CANDIDATES,
            help="enumeration guard (candidate cap)",
        )
        return p

    p = add("fol", cmd_fol, "print the FOL representation of a program")
    p.add_argument("file")

    p = add("sm", cmd_sm, "print SM[F; p] for a program's FOL representation")
    p.add_argument("file")
    p.add_argument("--intensional", help="comma-separated predicate names (default: all)")

    p = add("solve", cmd_solve, "enumerate answer sets")
    p.add_argument("file")
    p.add_argument("--intensional", help="comma-separated predicate names (default: all)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for enumeration")

    p = add("deps", cmd_deps, "print the predicate dependency graph in DOT format")
    p.add_argument("file")
    p.add_argument("--intensional", help="vertex predicates (default: all)")

    p = add("split", cmd_split, "check (and optionally verify) a partial split")
    p.add_argument("left_file", help="formula file F")
    p.add_argument("right_file", help="formula file G")
    p.add_argument("shared_file", help="formula file H")
    p.add_argument("--left", required=True, help="predicate list p")
    p.add_argument("--right", required=True, help="predicate list q")
    p.add_argument("--bound", type=int, default=0,
                   help="verify semantically up to this universe size")

    p = add("modsolve", cmd_modsolve, "stable models of a module for fixed inputs")
    p.add_argument("file", help="module file with #input/#output headers")
    p.add_argument("--input-model", required=True,
                   help="file holding the input atoms in {a, b} format")

    p = add("join", cmd_join, "join two module files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--shared", help="rule file declaring the shared part H explicitly")

    p = add("instantiate", cmd_instantiate, "projection fixpoint trace of a formula")
    p.add_argument("file", help="formula file")
    p.add_argument("--input", help="input predicates, comma separated")

    p = add("incr", cmd_incr, "assemble and solve an incremental program")
    p.add_argument("file")
    p.add_argument("--step", type=int, required=True)

    p = add("verify", cmd_verify, "run a named property suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--count", type=int, help="number of random cases")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--bound", type=int, default=2, help="universe bound (splitting suite)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except StableModsError as exc:
        print(str(exc), file=sys.stderr)
        return 1


def entry() -> None:  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
