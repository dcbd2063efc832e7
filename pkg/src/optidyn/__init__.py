"""Optimistic learning dynamics in zero-sum matrix games.

Implements OFTRL (four regularizers), OOMD, OMWU (entropy instantiation), and
OGDA on matrix games, together with last/random/best-iterate convergence
instrumentation, regret and Lyapunov diagnostics, and lower-bound phase
analysis for the hard 2x2 instances.
"""

from ._backend import KERNEL_BACKEND
from .game import (
    Decomposition,
    GameError,
    MatrixGame,
    NashPoint2x2,
    SimplexPoint,
    canonical_game,
    compose_2x2,
    decompose_2x2,
    duality_gap,
    hard_game,
    nash_2x2,
    uniform,
)
from .regularizers import (
    ENTROPY,
    LOG_BARRIER,
    SQEUCLID,
    Regularizer,
    RegularizerError,
    bregman,
    reg_grad,
    reg_value,
    response_inverse,
    smoothed_best_response,
    stability_scale,
    tsallis,
)
from .dynamics import (
    ConfigError,
    DynamicsConfig,
    JointIterate,
    NumericError,
    OFTRL,
    OGDA,
    OOMD,
    Trajectory,
    initial_state,
    project_simplex,
    rerun_at_stride,
    run_dynamics,
    step_oftrl,
    step_oftrl_scalar_2x2,
    step_ogda,
    step_oomd,
)
from .metrics import (
    ConvergenceReport,
    LyapunovSeries,
    MinProbability,
    convergence_report,
    interval_regret,
    lyapunov_series,
    min_probability,
    social_dynamic_regret,
    validate_equilibrium,
    variation,
)
from .hardness import (
    BadRun,
    HardnessPrediction,
    PhaseReport,
    detect_phases_global,
    detect_phases_initial,
    find_bad_runs,
    longest_bad_run,
    predict_bad_block,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    # game
    "Decomposition",
    "GameError",
    "MatrixGame",
    "NashPoint2x2",
    "SimplexPoint",
    "canonical_game",
    "compose_2x2",
    "decompose_2x2",
    "duality_gap",
    "hard_game",
    "nash_2x2",
    "uniform",
    # regularizers
    "ENTROPY",
    "LOG_BARRIER",
    "SQEUCLID",
    "Regularizer",
    "RegularizerError",
    "bregman",
    "reg_grad",
    "reg_value",
    "response_inverse",
    "smoothed_best_response",
    "stability_scale",
    "tsallis",
    # dynamics
    "ConfigError",
    "DynamicsConfig",
    "JointIterate",
    "NumericError",
    "OFTRL",
    "OGDA",
    "OOMD",
    "Trajectory",
    "initial_state",
    "project_simplex",
    "rerun_at_stride",
    "run_dynamics",
    "step_oftrl",
    "step_oftrl_scalar_2x2",
    "step_ogda",
    "step_oomd",
    # metrics
    "ConvergenceReport",
    "LyapunovSeries",
    "MinProbability",
    "convergence_report",
    "interval_regret",
    "lyapunov_series",
    "min_probability",
    "social_dynamic_regret",
    "validate_equilibrium",
    "variation",
    # hardness
    "BadRun",
    "HardnessPrediction",
    "PhaseReport",
    "detect_phases_global",
    "detect_phases_initial",
    "find_bad_runs",
    "longest_bad_run",
    "predict_bad_block",
]
