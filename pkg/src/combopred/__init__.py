"""Combinatorial prediction games: forecasters, adversaries, verification."""

from .action_sets import (
    ActionSet,
    AlmostSymmetryCertificate,
    check_almost_symmetric,
    make_exp2_lowerbound_set,
    make_k_subsets,
    make_pair_games_set,
    make_path_dag,
    make_simplex,
    parse_action_set,
)
from .adversaries import parse_adversary, validate_loss
from .forecasters import auto_eta, build_forecaster, init_weights, parse_forecaster
from .geometry import (
    SpannerBasis,
    VertexDistribution,
    barycentric_spanner,
    bregman_project,
    caratheodory_decompose,
    pinv_psd,
)
from .harness import (
    BoundReport,
    GameConfig,
    GameTrace,
    expected_regret_exact,
    expected_regret_mc,
    run_game,
    verify_bound,
    verify_lemma,
)
from .potentials import NegEntropy, OmegaPotential, PolyPotential, parse_potential

__version__ = "0.1.0"

__all__ = [
    "ActionSet",
    "AlmostSymmetryCertificate",
    "BoundReport",
    "GameConfig",
    "GameTrace",
    "NegEntropy",
    "OmegaPotential",
    "PolyPotential",
    "SpannerBasis",
    "VertexDistribution",
    "auto_eta",
    "barycentric_spanner",
    "bregman_project",
    "build_forecaster",
    "caratheodory_decompose",
    "check_almost_symmetric",
    "expected_regret_exact",
    "expected_regret_mc",
    "init_weights",
    "make_exp2_lowerbound_set",
    "make_k_subsets",
    "make_pair_games_set",
    "make_path_dag",
    "make_simplex",
    "parse_action_set",
    "parse_adversary",
    "parse_forecaster",
    "parse_potential",
    "pinv_psd",
    "run_game",
    "validate_loss",
    "verify_bound",
    "verify_lemma",
]
