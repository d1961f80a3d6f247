"""Solvers for two-player zero-sum games with perturbed strategy sets.

Regret matching+ over finitely generated polytopes, a perturbed variant of
CFR+ for extensive-form games, and exact evaluation of exploitability and
per-information-set regret.
"""

from .cfr import CfrConfig, CfrSolver, IterationRecord, cfr_bound
from .game_model import (
    CHANCE,
    DECISION,
    TERMINAL,
    BehavioralProfile,
    ExtensiveFormGame,
    GameBuilder,
    InfoSet,
    Perturbation,
    PolytopeGame,
    SequenceFormGame,
    ValidationReport,
    sequence_form,
)
from .games import (
    LeducConfig,
    build_game,
    build_kuhn,
    build_leduc,
    embed_matrix_game,
    load_matrix_game,
    parse_matrix_game,
)
from .metrics import (
    BestResponse,
    EvaluationReport,
    best_response,
    expected_value,
    exploitability,
    external_reach,
    max_infoset_regret,
    perturbed_game_regret,
)
from .polytope_rm import (
    NegativeBound,
    PerturbationBasis,
    PerturbationTooLarge,
    PerturbedRegretMatcherPlus,
    RegretMatcherPlus,
    basis_matrix,
    matched_action,
    measured_regret,
    perturbed_action,
    perturbed_regret_update,
    regret_bound,
    self_play,
)

__all__ = [
    "BehavioralProfile",
    "BestResponse",
    "CfrConfig",
    "CfrSolver",
    "CHANCE",
    "DECISION",
    "EvaluationReport",
    "ExtensiveFormGame",
    "GameBuilder",
    "InfoSet",
    "IterationRecord",
    "LeducConfig",
    "NegativeBound",
    "PerturbationBasis",
    "Perturbation",
    "PerturbationTooLarge",
    "PerturbedRegretMatcherPlus",
    "PolytopeGame",
    "RegretMatcherPlus",
    "SequenceFormGame",
    "TERMINAL",
    "ValidationReport",
    "basis_matrix",
    "best_response",
    "build_game",
    "build_kuhn",
    "build_leduc",
    "cfr_bound",
    "embed_matrix_game",
    "expected_value",
    "exploitability",
    "external_reach",
    "load_matrix_game",
    "matched_action",
    "max_infoset_regret",
    "measured_regret",
    "parse_matrix_game",
    "perturbed_action",
    "perturbed_game_regret",
    "perturbed_regret_update",
    "regret_bound",
    "self_play",
    "sequence_form",
]
