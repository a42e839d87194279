"""Coherence length diagrams, support/defect maps and threshold tuning."""

from .defect import (
    DefectMap,
    SuccessProfile,
    SuccessTable,
    coverage_table,
    defect_map,
    first_success_threshold,
    max_length_deviation,
    render_defect_map,
    resolve_coverage,
    success_balance,
    success_fraction,
    success_profile,
)
from .directional import (
    DefectTable,
    DirectionalDefectMap,
    classify_defective,
    defect_fraction,
    defect_table,
    directional_defect_map,
    exhaustion_threshold,
    partition_params,
    render_directional_map,
    resolve_defect_percentage,
    shape_mismatch,
)
from .engine import (
    N_DIRECTIONS,
    LengthProfile,
    OverallCLD,
    coherence_length,
    direction_angles,
    local_cld,
    mean_diagram_length,
    overall_cld,
    support_fraction,
    support_map,
)
from .errors import (
    CLDError,
    DecodeError,
    DegenerateCurveError,
    DegenerateImageError,
    DimensionError,
    EmptyPartitionError,
    EmptyTableError,
    NoSupportError,
    UnreachableCoverageError,
    UnreachablePercentageError,
)
from .estimators import CLDAnalyzer, CLDDescriptor
from .fixtures import SyntheticSpec, generate_fixture
from .image import ImageStats, compute_stats, load_gray
from .optimize import (
    OptimizationResult,
    QualityCurve,
    optimize_tau,
    quality_curve,
    quality_product,
)
from .session import AnalysisSession, SessionStore

__version__ = "0.1.0"

__all__ = [
    "AnalysisSession",
    "CLDAnalyzer",
    "CLDDescriptor",
    "CLDError",
    "DecodeError",
    "DefectMap",
    "DefectTable",
    "DegenerateCurveError",
    "DegenerateImageError",
    "DimensionError",
    "DirectionalDefectMap",
    "EmptyPartitionError",
    "EmptyTableError",
    "ImageStats",
    "LengthProfile",
    "N_DIRECTIONS",
    "NoSupportError",
    "OptimizationResult",
    "OverallCLD",
    "QualityCurve",
    "SessionStore",
    "SuccessProfile",
    "SuccessTable",
    "SyntheticSpec",
    "UnreachableCoverageError",
    "UnreachablePercentageError",
    "classify_defective",
    "coherence_length",
    "compute_stats",
    "coverage_table",
    "defect_fraction",
    "defect_map",
    "defect_table",
    "direction_angles",
    "directional_defect_map",
    "exhaustion_threshold",
    "first_success_threshold",
    "generate_fixture",
    "load_gray",
    "local_cld",
    "max_length_deviation",
    "mean_diagram_length",
    "optimize_tau",
    "overall_cld",
    "partition_params",
    "quality_curve",
    "quality_product",
    "render_defect_map",
    "render_directional_map",
    "resolve_coverage",
    "resolve_defect_percentage",
    "shape_mismatch",
    "success_balance",
    "success_fraction",
    "success_profile",
    "support_fraction",
    "support_map",
]
