"""Randomized compilation and desk-scale simulation of Hamiltonian evolution.

The package compiles time evolution under a Pauli-sum Hamiltonian into
randomized gate plans (importance-sampled product formulas, their
higher-order corrected variants, and deterministic product formulas),
estimates observables by seeded Monte Carlo over those plans, and checks
everything against a dense superoperator oracle at small widths. An
analytic-bounds engine inverts the systematic-error bounds into minimal
segment and gate counts.
"""

from .bounds import (
    BoundRow,
    BoundTable,
    best_trotter_gate_count,
    eta,
    qdrift_bound,
    qswift_bound,
    solve_min_n,
    sweep_table,
    trotter_gate_count,
)
from .compiler import (
    AllOrderSegment,
    CorrectionTerm,
    GatePlan,
    SwiftOp,
    TimeOp,
    all_order_b,
    build_swift_plan,
    correction_terms,
    enumerate_g2,
    plan_from_text,
    plan_to_text,
    qdrift_plan,
    randomized_trotter_plan,
    sample_all_order_segment,
    sample_swift_plan,
    trotter_plan,
    validate_plan,
)
from .errors import (
    BudgetOverflow,
    CombinatorialCap,
    DimensionCap,
    EmptyModel,
    HamsimError,
    InconsistentWidth,
    MalformedLine,
    NoSolutionBelowCap,
    OrderExceedsSegments,
    VacuousRegion,
    WidthOverflow,
)
from .estimator import (
    AllOrderResult,
    BudgetRow,
    BudgetTable,
    EstimateReport,
    EstimatorConfig,
    all_order_stats,
    estimate_all_order,
    estimate_qdrift,
    estimate_qswift,
    estimate_trotter,
    eval_correction,
    eval_correction_exact,
    exact_qdrift_value,
    exact_qswift_value,
    plan_budget,
)
from .exact_channels import (
    Superoperator,
    channel_distance_surrogate,
    choi_matrix,
    conjugation,
    dense_hamiltonian,
    ideal_channel,
    liouvillian_term,
    mean_liouvillian,
    mixture,
    qdrift_channel,
    qswift_channel,
    random_pure_density,
    script_l_n,
    swift_unitary,
    term_unitary,
    trace_distance,
)
from .hamiltonian import (
    HamiltonianModel,
    PauliTerm,
    load_hamiltonian,
    parse_hamiltonian,
    tau,
    to_text,
)
from .statevector import (
    Observable,
    State,
    apply_pauli_rotation,
    apply_swift_op,
    apply_time_op,
    expectation,
    prepare_plus_input,
    run_plan,
    sample_shots,
)

__version__ = "0.1.0"

__all__ = [
    "AllOrderResult",
    "AllOrderSegment",
    "BoundRow",
    "BoundTable",
    "BudgetOverflow",
    "BudgetRow",
    "BudgetTable",
    "CombinatorialCap",
    "CorrectionTerm",
    "DimensionCap",
    "EmptyModel",
    "EstimateReport",
    "EstimatorConfig",
    "GatePlan",
    "HamiltonianModel",
    "HamsimError",
    "InconsistentWidth",
    "MalformedLine",
    "NoSolutionBelowCap",
    "Observable",
    "OrderExceedsSegments",
    "PauliTerm",
    "State",
    "Superoperator",
    "SwiftOp",
    "TimeOp",
    "VacuousRegion",
    "WidthOverflow",
    "all_order_b",
    "all_order_stats",
    "apply_pauli_rotation",
    "apply_swift_op",
    "apply_time_op",
    "best_trotter_gate_count",
    "build_swift_plan",
    "channel_distance_surrogate",
    "choi_matrix",
    "conjugation",
    "correction_terms",
    "dense_hamiltonian",
    "enumerate_g2",
    "estimate_all_order",
    "estimate_qdrift",
    "estimate_qswift",
    "estimate_trotter",
    "eta",
    "eval_correction",
    "eval_correction_exact",
    "exact_qdrift_value",
    "exact_qswift_value",
    "expectation",
    "ideal_channel",
    "liouvillian_term",
    "load_hamiltonian",
    "mean_liouvillian",
    "mixture",
    "parse_hamiltonian",
    "plan_budget",
    "plan_from_text",
    "plan_to_text",
    "prepare_plus_input",
    "qdrift_bound",
    "qdrift_channel",
    "qdrift_plan",
    "qswift_bound",
    "qswift_channel",
    "random_pure_density",
    "randomized_trotter_plan",
    "run_plan",
    "sample_all_order_segment",
    "sample_shots",
    "sample_swift_plan",
    "script_l_n",
    "solve_min_n",
    "swift_unitary",
    "sweep_table",
    "tau",
    "term_unitary",
    "to_text",
    "trace_distance",
    "trotter_gate_count",
    "trotter_plan",
    "validate_plan",
]
