"""Exact solver for N-player nonzero-sum stopping games on scenario trees."""

from .games import (
    Coalition,
    GameSpec,
    StrategyProfile,
    all_coalitions,
    embed_finite_horizon,
    expected_payoffs,
    realized_outcome,
    validate_game,
)
from .scheme import (
    ConvergenceError,
    EquilibriumProfile,
    SchemeConfig,
    SchemeStep,
    build_stage_reward,
    run_scheme,
    scheme_step,
)
from .snell import SnellResult, eps_optimal_rule, optimal_value, snell_envelope, solve_stopping
from .trees import (
    NEVER,
    NEVER_RULE,
    AdaptedProcess,
    Node,
    ScenarioTree,
    StoppingRule,
    canonicalize_rule,
    expectation_under_rule,
    min_of_rules,
    one_step_expectation,
    stop_everywhere_at,
    validate_tree,
)
from .verify import (
    CapExceededError,
    NepCertificate,
    best_response_value,
    certify,
    check_trace_invariants,
    count_rules,
    enumerate_rules,
    find_all_eps_neps,
)

__all__ = [
    "AdaptedProcess",
    "CapExceededError",
    "Coalition",
    "ConvergenceError",
    "EquilibriumProfile",
    "GameSpec",
    "NEVER",
    "NEVER_RULE",
    "NepCertificate",
    "Node",
    "ScenarioTree",
    "SchemeConfig",
    "SchemeStep",
    "SnellResult",
    "StoppingRule",
    "StrategyProfile",
    "all_coalitions",
    "best_response_value",
    "build_stage_reward",
    "canonicalize_rule",
    "certify",
    "check_trace_invariants",
    "count_rules",
    "embed_finite_horizon",
    "enumerate_rules",
    "eps_optimal_rule",
    "expectation_under_rule",
    "expected_payoffs",
    "find_all_eps_neps",
    "min_of_rules",
    "one_step_expectation",
    "optimal_value",
    "realized_outcome",
    "run_scheme",
    "scheme_step",
    "snell_envelope",
    "solve_stopping",
    "stop_everywhere_at",
    "validate_game",
    "validate_tree",
]
