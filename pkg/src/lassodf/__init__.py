"""Lasso regularization paths, unbiased degrees of freedom and model selection."""

from .data import (
    RawDataset,
    StandardizedDataset,
    expand_quadratic,
    expand_standardized,
    from_arrays,
    load_csv,
    load_diabetes,
    standardize,
)
from .exceptions import (
    ConvergenceError,
    DataError,
    DegeneracyError,
    LassodfError,
)
from .montecarlo import (
    ConjectureBiasReport,
    ConsistencyReport,
    MonteCarloReport,
    SyntheticModel,
    conjecture_bias_report,
    consistency_experiment,
    divergence_fd,
    estimate_df_mc,
    last_k_fit,
    synthesize,
    unbiasedness_report,
)
from .path import (
    FitResult,
    LassoPath,
    PathSegment,
    compute_path,
    fit_at,
    kkt_check,
    lipschitz_probe,
    segment_coefficients,
    transition_fit,
)
from .selection import (
    SelectionReport,
    aic,
    bic,
    cp,
    criterion_curve,
    df_hat,
    estimate_sigma2,
    select_optimal,
)

__version__ = "0.1.0"

__all__ = [
    "RawDataset",
    "StandardizedDataset",
    "expand_quadratic",
    "expand_standardized",
    "from_arrays",
    "load_csv",
    "load_diabetes",
    "standardize",
    "ConvergenceError",
    "DataError",
    "DegeneracyError",
    "LassodfError",
    "ConjectureBiasReport",
    "ConsistencyReport",
    "MonteCarloReport",
    "SyntheticModel",
    "conjecture_bias_report",
    "consistency_experiment",
    "divergence_fd",
    "estimate_df_mc",
    "last_k_fit",
    "synthesize",
    "unbiasedness_report",
    "FitResult",
    "LassoPath",
    "PathSegment",
    "compute_path",
    "fit_at",
    "kkt_check",
    "lipschitz_probe",
    "segment_coefficients",
    "transition_fit",
    "SelectionReport",
    "aic",
    "bic",
    "cp",
    "criterion_curve",
    "df_hat",
    "estimate_sigma2",
    "select_optimal",
    "__version__",
]
