"""Optimistic decision analysis via upper-tail utility averages."""

from .beliefs import CensoredBelief, belief_mean, censor, censored_cdf, distortion_cost
from .choice import (
    CaraSpec,
    ChoiceProblem,
    ChoiceResult,
    additive_choose,
    cara_choose,
    cara_value,
    choose,
    evaluate,
    pareto_choose,
    quantile_choose,
)
from .distributions import (
    GEV,
    GPD,
    AffineTransform,
    Degenerate,
    Distribution,
    DomainError,
    Empirical,
    Logistic,
    Normal,
    NumericError,
    NumericWarning,
    Pareto,
    StudentT,
    Triangular,
    ZeroMeanWarning,
)
from .entry import (
    EntryDecision,
    EntryProblem,
    ParetoEntryCutoff,
    entry_decision,
    entry_threshold,
    pareto_entry_cutoff,
)
from .stochastic import (
    CurveAudit,
    LuceCurve,
    MonotoneVerdict,
    curve_monotonicity_audit,
    default_grid,
    expected_excess,
    luce_curve,
    luce_probs,
    monotone_pair_check,
)
from .superquantile import (
    DEFAULT_TOL,
    ENGINES,
    Action,
    LimitReport,
    SuperquantileResult,
    action_quantile,
    check_optimism,
    limit_report,
    superquantile,
    superquantile_conditional_tail,
    superquantile_dalpha,
    superquantile_monte_carlo,
    superquantile_quantile_average,
    superquantile_rockafellar,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DomainError",
    "NumericError",
    "NumericWarning",
    "ZeroMeanWarning",
    "Distribution",
    "Normal",
    "Logistic",
    "StudentT",
    "Pareto",
    "GPD",
    "GEV",
    "Triangular",
    "Degenerate",
    "Empirical",
    "AffineTransform",
    "DEFAULT_TOL",
    "ENGINES",
    "Action",
    "SuperquantileResult",
    "LimitReport",
    "check_optimism",
    "action_quantile",
    "superquantile",
    "superquantile_quantile_average",
    "superquantile_rockafellar",
    "superquantile_conditional_tail",
    "superquantile_monte_carlo",
    "superquantile_dalpha",
    "limit_report",
    "CensoredBelief",
    "censor",
    "censored_cdf",
    "belief_mean",
    "distortion_cost",
    "ChoiceProblem",
    "ChoiceResult",
    "CaraSpec",
    "evaluate",
    "choose",
    "quantile_choose",
    "additive_choose",
    "pareto_choose",
    "cara_value",
    "cara_choose",
    "LuceCurve",
    "MonotoneVerdict",
    "CurveAudit",
    "default_grid",
    "luce_probs",
    "luce_curve",
    "expected_excess",
    "monotone_pair_check",
    "curve_monotonicity_audit",
    "EntryProblem",
    "EntryDecision",
    "ParetoEntryCutoff",
    "entry_decision",
    "entry_threshold",
    "pareto_entry_cutoff",
]
