"""Scaling-law decomposition of image-classifier progress.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    AttributionResult,
    BootstrapEnsemble,
    Branch,
    BudgetGrowth,
    ColumnMap,
    Dataset,
    DomainError,
    DoublingTime,
    ExpansionRate,
    FitConfig,
    FitResult,
    FrontierPoint,
    LooScore,
    Metric,
    ModelRecord,
    NormConstants,
    NormalizedRecord,
    Optimum,
    ParetoFrontier,
    Params,
    PlayerSet,
    PredictiveSummary,
    PriorSpec,
    Transition,
    VarianceSelection,
    attribution_table,
    bootstrap,
    budget_expansion_rate,
    build_dataset,
    chinchilla_approx,
    denormalize,
    doubling_time,
    effective_budget_growth,
    effective_compute,
    effective_data,
    ensemble_mean,
    ensemble_std,
    estimate_by_gpu_time,
    estimate_by_op_counting,
    fit_map,
    gpu_days,
    invert_for_compute,
    load_dataset,
    log_likelihood,
    log_prior,
    loo_log_score,
    neg_log_posterior,
    neg_log_posterior_grad,
    normalize,
    parse_records,
    pareto_frontier,
    percentile_ci,
    predict_accuracy,
    predicted_logit,
    predictive_distribution,
    select_prior_variance,
    serialize_records,
    sha256_hex,
    shapley,
    shapley_four_way,
    threshold_halving_time,
    threshold_halving_time_instant,
    within_dataset_hull,
)
from ._core import __version__  # noqa: F401
