"""Four-valued decision logic for attribute-based access control."""

from .algebra import (
    NotGenerated,
    OpTable,
    Permutation,
    Term,
    UnknownOperator,
    access_ops,
    belnap_ops,
    compose,
    generated_subgroup,
    jobe_ops,
    new_unary_ops,
    registry,
    synthesize_permutation,
)
from .completeness import (
    CompletenessReport,
    SelectionOp,
    SuitabilityResult,
    UnaryFunctionSpace,
    check_canonical_completeness,
    check_canonical_suitability,
    check_functional_completeness,
    normal_form_unary_space,
    selection_op,
    totally_ordered_generators,
    unary_closure,
    unary_selection_ops,
)
from .interop import (
    ParseError,
    XacmlDecision,
    combine_kand,
    combine_kand_fold,
    emit_formula,
    emit_policy,
    emit_table,
    parse_formula,
    parse_policy,
    parse_request,
    parse_table,
)
from .lattice import (
    ALLOW,
    BOT,
    DENY,
    FOUR,
    TOP,
    Decision,
    FiniteLattice,
    chain_lattice,
    knowledge_lattice,
    parse_lattice,
    truth_lattice,
    validate_lattice,
)
from .nf_compiler import (
    Basis,
    DecisionTable,
    InvalidTable,
    compile_table,
    decision_table,
    evaluate_formula,
    knowledge_basis,
    unary_selection_word,
    validate_normal_form,
)
from .policy import (
    Atomic,
    Binary,
    Request,
    Scoped,
    Target,
    Unary,
    Var,
    eval_policy,
    eval_policy_ind,
    resolve,
)

__version__ = "0.1.0"
