"""Consensual opinion pooling with average and BMS baselines."""

from .core import InvalidOpinionError, check_panel, delta, gamma, validate_opinion
from .distance import UndefinedDivergenceError, kl_divergence, rmsd
from .estimators import AveragePool, BMSPool, ConsensualPool
from .evaluation import (
    GameRecord,
    absolute_error,
    overall_accuracy,
    synthetic_panel,
    wilcoxon_left_tailed,
)
from .pooling import (
    ConsensusResult,
    ConvergenceError,
    DegeneratePanelWarning,
    PoolConfig,
    average_pool,
    bms_pool,
    consensual_pool,
    consensual_step,
    consensual_weights,
    effective_weights,
    linear_pool,
)
from .scoring import (
    affine_score,
    contest_score,
    effectiveness_audit,
    expected_score,
    quadratic_score,
)

__version__ = "0.1.0"
