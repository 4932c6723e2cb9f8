"""Polyadic modal mu-calculus on finite labeled graphs.

Evaluation of arity-d formulas, d-fold graph powers and products,
arity transforms between rooted higher-arity formulas and their
unary images over lifted signatures, component bisimulation families,
power detection and factorization, alternating parity tree automata
with game based acceptance, tree pumping, and NFA non-universality
queries together with their lifted forms.
"""

from .errors import (
    CrossCheckError,
    FormulaError,
    GraphFormatError,
    ParseError,
    PolymuError,
    ResourceLimitError,
)
from .graphs import (
    FiniteTree,
    LabeledGraph,
    Signature,
    lift_signature,
    power,
    product,
    read_graph,
    read_tree,
    split_lifted,
    unfold,
    write_graph,
)
from .logic import (
    Formula,
    check_d_rooted,
    gen_bisim_formula,
    gen_per_formula,
    gen_pow_formula,
    gen_rst_formula,
    monofy,
    parse_formula,
    polyfy,
    print_formula,
    validate_formula,
)
from .semantics import TupleSet, evaluate, models
from .bisim import (
    DBisimFamily,
    bisimilar,
    bisimulation_partition,
    detect_power,
    factor,
    factors,
    largest_bisimulation,
    largest_d_bisimulation,
    power_conditions,
    quotient,
)
from .automata import (
    Apt,
    accepts,
    acceptance_game,
    find_pumping_pair,
    formula_to_apt,
    solve_parity,
    winning_state_sets,
)
from .pumping import (
    PumpPartition,
    check_luni,
    check_relative_membership,
    gen_rword_tree,
    is_isomorphic,
    is_rword,
    partition_nodes,
    pump,
)
from .queries import (
    NonUnivVerdict,
    one_letter_non_universal,
    one_lifted_non_universal,
    reach_by_squaring,
    two_letter_non_universal,
    two_lifted_non_universal,
)
from .randgen import Xorshift
from .xcheck import CheckResult, RunConfig, format_report, run_all, run_check

__all__ = [
    "CrossCheckError",
    "FormulaError",
    "GraphFormatError",
    "ParseError",
    "PolymuError",
    "ResourceLimitError",
    "FiniteTree",
    "LabeledGraph",
    "Signature",
    "lift_signature",
    "power",
    "product",
    "read_graph",
    "read_tree",
    "split_lifted",
    "unfold",
    "write_graph",
    "Formula",
    "check_d_rooted",
    "gen_bisim_formula",
    "gen_per_formula",
    "gen_pow_formula",
    "gen_rst_formula",
    "monofy",
    "parse_formula",
    "polyfy",
    "print_formula",
    "validate_formula",
    "TupleSet",
    "evaluate",
    "models",
    "DBisimFamily",
    "bisimilar",
    "bisimulation_partition",
    "detect_power",
    "factor",
    "factors",
    "largest_bisimulation",
    "largest_d_bisimulation",
    "power_conditions",
    "quotient",
    "Apt",
    "accepts",
    "acceptance_game",
    "find_pumping_pair",
    "formula_to_apt",
    "solve_parity",
    "winning_state_sets",
    "PumpPartition",
    "check_luni",
    "check_relative_membership",
    "gen_rword_tree",
    "is_isomorphic",
    "is_rword",
    "partition_nodes",
    "pump",
    "NonUnivVerdict",
    "one_letter_non_universal",
    "one_lifted_non_universal",
    "reach_by_squaring",
    "two_letter_non_universal",
    "two_lifted_non_universal",
    "Xorshift",
    "CheckResult",
    "RunConfig",
    "format_report",
    "run_all",
    "run_check",
]

__version__ = "0.1.0"
