"""Spatial correlation statistics, spatial regression, and the closed-form
decomposition of spatial regression coefficients into correlation indexes.

The working objects are standardized vectors (mean 0, population standard
deviation 1) and a globally normalized inverse-distance weight matrix; on
those, Pearson's R, Moran's I and the cross-correlation index are all
quadratic forms, the model family is fit by OLS, and the spatial
coefficients can be recovered in closed form from the statistics alone.
"""

from .advisor import (
    AdvisorDecision,
    CorrelationEvidence,
    FitQuality,
    narrative_report,
    select_model,
)
from .correlation import (
    CorrelationTest,
    SpatialCorrelationMatrix,
    cross_correlation,
    morans_index,
    pearson_matrix,
    pearson_r,
    residual_moran,
    significance_by_permutation,
    significance_by_regression,
    spatial_correlation_matrix,
    temporal_acf,
)
from .data import RawAttributeTable, StandardizedVector, log_transform, zscore
from .errors import (
    InputError,
    NumericalError,
    SingularSystem,
    SpaceregError,
    ZeroDenominator,
)
from .decomposition import (
    CollinearityCheck,
    DecompositionInput,
    DecompositionResult,
    IdentityCheckReport,
    PureCoefficients,
    collinearity_q,
    constant_term,
    cramer_system,
    decompose_canonical,
    decompose_full,
    decompose_no_error,
    identity_check,
    pure_coefficients,
)
from .io import parse_distances, read_attributes, write_weights_csv
from .regression import (
    ModelSpec,
    RegressionFit,
    VARIANTS,
    build_design_matrix,
    diagnostics,
    fit_model,
    ols_fit,
    residual_variance,
)
from .report import AnalysisConfig, AnalysisResult, run_pipeline, write_report_files
from .weights import (
    ContiguityMatrix,
    DistanceMatrix,
    SpatialWeightMatrix,
    TemporalWeightMatrix,
    inverse_distance_contiguity,
    normalize_global,
    temporal_contiguity,
    temporal_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AdvisorDecision",
    "AnalysisConfig",
    "AnalysisResult",
    "CollinearityCheck",
    "ContiguityMatrix",
    "CorrelationEvidence",
    "CorrelationTest",
    "DecompositionInput",
    "DecompositionResult",
    "DistanceMatrix",
    "FitQuality",
    "IdentityCheckReport",
    "InputError",
    "ModelSpec",
    "NumericalError",
    "PureCoefficients",
    "RawAttributeTable",
    "RegressionFit",
    "SingularSystem",
    "SpaceregError",
    "SpatialCorrelationMatrix",
    "SpatialWeightMatrix",
    "StandardizedVector",
    "TemporalWeightMatrix",
    "VARIANTS",
    "ZeroDenominator",
    "build_design_matrix",
    "collinearity_q",
    "constant_term",
    "cramer_system",
    "cross_correlation",
    "decompose_canonical",
    "decompose_full",
    "decompose_no_error",
    "diagnostics",
    "fit_model",
    "identity_check",
    "inverse_distance_contiguity",
    "log_transform",
    "morans_index",
    "narrative_report",
    "normalize_global",
    "ols_fit",
    "parse_distances",
    "pearson_matrix",
    "pearson_r",
    "pure_coefficients",
    "read_attributes",
    "residual_moran",
    "residual_variance",
    "run_pipeline",
    "select_model",
    "significance_by_permutation",
    "significance_by_regression",
    "spatial_correlation_matrix",
    "temporal_acf",
    "temporal_contiguity",
    "temporal_weights",
    "write_report_files",
    "write_weights_csv",
    "zscore",
]
