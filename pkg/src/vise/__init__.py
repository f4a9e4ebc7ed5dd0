"""ViSE: voting in a stochastic environment.

A society of egoists plus one cohesive group with a claims threshold votes
on i.i.d. normal capital-increment proposals.  The package provides the
closed-form expected one-step increments per role, the society-optimal
group claims threshold, a seeded Monte Carlo simulator that serves as an
independent oracle for every formula, and sweep tooling that maps and
neutralizes the pit of losses.
"""

from .claims import (
    OptimalThresholdResult,
    StationarityDiagnostics,
    numeric_argmax_t,
    optimal_threshold,
    stationarity_check,
)
from .errors import (
    DegenerateRuleError,
    TailUnderflowError,
    ValidationError,
    ViseError,
)
from .expectations import (
    ExpectationReport,
    expected_egoist_increment,
    expected_group_increment,
    expected_society_increment,
    group_support_prob,
    mu_plus,
    support_probs,
)
from .model import (
    EnvironmentParams,
    ModelConfig,
    SocietyParams,
    VoteOutcome,
    apply_step,
    tally_votes,
    validate,
)
from .simulate import (
    MuPlusEstimate,
    RoleSummary,
    SimulationConfig,
    TrajectoryStats,
    estimate_mu_plus,
    run,
)
from .special import (
    TailSpec,
    binomial_pmf,
    binomial_upper_tail,
    binomial_upper_tail_normal_approx,
    min_votes_to_exceed,
    std_normal_cdf,
    std_normal_pdf,
    truncated_normal_mean,
)
from .sweeps import (
    MajorityClass,
    PitResult,
    SweepAxis,
    SweepRow,
    SweepSpec,
    SweepTable,
    majority_threshold_classes,
    max_delta_curve,
    pit_region,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ViseError",
    "ValidationError",
    "DegenerateRuleError",
    "TailUnderflowError",
    "TailSpec",
    "std_normal_pdf",
    "std_normal_cdf",
    "binomial_pmf",
    "binomial_upper_tail",
    "binomial_upper_tail_normal_approx",
    "truncated_normal_mean",
    "min_votes_to_exceed",
    "EnvironmentParams",
    "SocietyParams",
    "ModelConfig",
    "VoteOutcome",
    "validate",
    "tally_votes",
    "apply_step",
    "ExpectationReport",
    "mu_plus",
    "group_support_prob",
    "support_probs",
    "expected_egoist_increment",
    "expected_group_increment",
    "expected_society_increment",
    "OptimalThresholdResult",
    "StationarityDiagnostics",
    "optimal_threshold",
    "numeric_argmax_t",
    "stationarity_check",
    "SimulationConfig",
    "TrajectoryStats",
    "RoleSummary",
    "MuPlusEstimate",
    "run",
    "estimate_mu_plus",
    "SweepAxis",
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "sweep",
    "PitResult",
    "pit_region",
    "max_delta_curve",
    "MajorityClass",
    "majority_threshold_classes",
]
