"""Fixed-confidence best-arm identification for multinomial rewards.

Arms are multinomial distributions over a known value support. Three
stopping strategies share one leader-challenger loop and differ only in
how they build confidence intervals for the arm means: a mean-level
Hoeffding bracket, per-outcome Hoeffding/Bernstein brackets, and
empirical-likelihood brackets over a KL ball.
"""

from .bounds import (
    BonusContext,
    MeanInterval,
    bernstein_structured,
    combined_structured_bonus,
    hoeffding_nonstructured,
    hoeffding_structured,
    nonstructured_interval,
    structured_interval,
)
from .engine import (
    Mode,
    RunConfig,
    RunResult,
    TraceRecord,
    initialize,
    parse_mode,
    run,
    sample_choice,
    select_leader_challenger,
    should_stop,
    write_trace_csv,
)
from .harness import (
    ConfigError,
    ExperimentReport,
    ModeSummary,
    ReferenceBound,
    RunPlan,
    Scenario,
    TrialRecord,
    builtin_scenarios,
    emit_report,
    get_scenario,
    instance_config,
    load_config,
    run_experiment,
    trial_seed,
)
from .kl import (
    KlBall,
    el_lower,
    el_radius,
    el_upper,
    kl_bernoulli,
    kl_divergence,
    klinf_lower,
    klinf_upper,
)
from .lowerbound import (
    CharacteristicTime,
    characteristic_time,
    sample_complexity_bound,
)
from .model import (
    ArmStatistics,
    ProblemInstance,
    SimplexVector,
    SupportVector,
    expected_value,
    sample_outcome,
)

__version__ = "0.1.0"

__all__ = [
    "ArmStatistics",
    "BonusContext",
    "CharacteristicTime",
    "ConfigError",
    "ExperimentReport",
    "KlBall",
    "MeanInterval",
    "Mode",
    "ModeSummary",
    "ProblemInstance",
    "ReferenceBound",
    "RunConfig",
    "RunPlan",
    "RunResult",
    "Scenario",
    "SimplexVector",
    "SupportVector",
    "TraceRecord",
    "TrialRecord",
    "bernstein_structured",
    "builtin_scenarios",
    "characteristic_time",
    "combined_structured_bonus",
    "el_lower",
    "el_radius",
    "el_upper",
    "emit_report",
    "expected_value",
    "get_scenario",
    "hoeffding_nonstructured",
    "hoeffding_structured",
    "initialize",
    "instance_config",
    "kl_bernoulli",
    "kl_divergence",
    "klinf_lower",
    "klinf_upper",
    "load_config",
    "nonstructured_interval",
    "parse_mode",
    "run",
    "run_experiment",
    "sample_choice",
    "sample_complexity_bound",
    "sample_outcome",
    "select_leader_challenger",
    "should_stop",
    "structured_interval",
    "trial_seed",
    "write_trace_csv",
]
