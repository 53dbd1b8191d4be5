"""Stable models of first-order formulas, with modules and incremental assembly.

The package splits along the natural seams of the theory: `syntax` holds the
formula AST and polarity analysis, `programs` the rule language and its FOL
translation, `sm` the SM operator, `herbrand` the finite-model engine,
`reduct` the independent ground oracle, `splitting` and `modules` the
composition theorems, `incremental` projection and step-wise assembly, and
`verify` the randomized theorem harnesses behind the `stablemods verify` CLI.
"""

from .errors import (
    AcyclicityError,
    AssemblyError,
    EnumerationGuardError,
    EvaluationError,
    IncompatibleError,
    InstantiationError,
    NotJoinableError,
    NotRuleShapedError,
    ParseError,
    SignatureError,
    StableModsError,
)
from .herbrand import (
    PartialInterpretation,
    answer_sets,
    evaluate,
    herbrand_interpretation,
    module_stable_models,
    propositional_interpretation,
    satisfies_sm,
)
from .incremental import (
    IncrementalTheory,
    acyclic_check,
    assemble,
    dm_instantiate,
    fm_instantiate,
    fm_trace,
    ground_program,
    incremental_solve,
    k_expansion,
    project_formula,
    project_program,
)
from .modules import (
    DLPModule,
    FOModule,
    dlp_join,
    dlp_joinable,
    dlp_module_answer_sets,
    dlp_to_fo,
    join,
    joinable,
    module_theorem_check,
)
from .programs import (
    Program,
    Rule,
    desugar_choice,
    expand_count,
    fol_representation,
    instantiate_at,
    parse_formula,
    parse_program,
)
from .reduct import GroundRule, gl_answer_sets, to_ground_rules
from .sm import SecondOrderSentence, build_sm, choice_formula, star_transform, u_less_than_p
from .splitting import (
    DependencyGraph,
    check_split,
    dependency_graph,
    strongly_connected_components,
    verify_split_equivalence,
)
from .syntax import (
    Atom,
    Formula,
    Pred,
    Signature,
    fmt,
    formulas_equal,
    free_vars,
    head_predicates,
    is_negative_on,
    rules_of,
    symbols_of,
    universal_closure,
)

__version__ = "0.1.0"
