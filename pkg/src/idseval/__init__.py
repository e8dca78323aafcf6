"""Detector-agnostic evaluation toolkit for labeled intrusion detection time series.

Load labels and alert streams, pick metrics by name, compare detectors
against trivial baselines and render alert timelines. Point-based ratio
metrics are exact rationals; a metric whose denominator vanishes reports
Undefined instead of a silent zero.
"""

from .affiliation import AffiliationZone, affiliation
from .baselines import BaselineKind, BaselineSpec, generate, is_baseline_name
from .evaluate import (
    CATALOG,
    DEFAULT_METRICS,
    EvalContext,
    MetricDefinition,
    UnknownMetricError,
    catalog_lines,
    compute_metric,
    evaluate_detector,
    parse_metric_spec,
    resolve_metric,
)
from .ingest import (
    DatasetManifest,
    IngestError,
    ValidationReport,
    load_alerts,
    load_labels,
    load_manifest,
    save_alerts,
    save_labels,
    validate_pair,
)
from .model import (
    AlertKind,
    AlertSeries,
    AlignmentError,
    AttackScenario,
    ConfusionMatrix,
    EvaluationError,
    LabeledSeries,
    MetricReport,
    MetricValue,
    ParameterError,
    alerts_to_intervals,
    collapse_multiclass,
    extract_scenarios,
    format_fraction,
    intervals_to_mask,
    mask_to_intervals,
)
from .pointwise import (
    FBetaParams,
    RocCurve,
    RocPoint,
    accuracy,
    auc,
    auc_single,
    confusion,
    f1,
    f_beta,
    fnr,
    fpr,
    npv,
    ppv,
    roc,
    scenario_normalized_recall,
    tnr,
    tpr,
)
from .report import (
    UNDEFINED_CELL,
    ComparisonTable,
    TimelineLane,
    TimelineRendering,
    build_table,
    format_cell,
    render_timeline,
    report_to_dict,
    report_to_json,
    roc_to_csv,
)
from .timeaware import (
    EtaParams,
    ScenarioDetection,
    TimeAwareScores,
    detected_scenarios,
    detection_delay,
    etapr,
    harmonic_f1,
)

__version__ = "0.1.0"

__all__ = [
    "AffiliationZone",
    "AlertKind",
    "AlertSeries",
    "AlignmentError",
    "AttackScenario",
    "BaselineKind",
    "BaselineSpec",
    "CATALOG",
    "ComparisonTable",
    "ConfusionMatrix",
    "DEFAULT_METRICS",
    "DatasetManifest",
    "EtaParams",
    "EvalContext",
    "EvaluationError",
    "FBetaParams",
    "IngestError",
    "LabeledSeries",
    "MetricDefinition",
    "MetricReport",
    "MetricValue",
    "ParameterError",
    "RocCurve",
    "RocPoint",
    "ScenarioDetection",
    "TimeAwareScores",
    "TimelineLane",
    "TimelineRendering",
    "UNDEFINED_CELL",
    "UnknownMetricError",
    "ValidationReport",
    "accuracy",
    "affiliation",
    "alerts_to_intervals",
    "auc",
    "auc_single",
    "build_table",
    "catalog_lines",
    "collapse_multiclass",
    "compute_metric",
    "confusion",
    "detected_scenarios",
    "detection_delay",
    "etapr",
    "evaluate_detector",
    "extract_scenarios",
    "f1",
    "f_beta",
    "fnr",
    "format_cell",
    "format_fraction",
    "fpr",
    "generate",
    "harmonic_f1",
    "intervals_to_mask",
    "is_baseline_name",
    "load_alerts",
    "load_labels",
    "load_manifest",
    "mask_to_intervals",
    "npv",
    "parse_metric_spec",
    "ppv",
    "render_timeline",
    "report_to_dict",
    "report_to_json",
    "resolve_metric",
    "roc",
    "roc_to_csv",
    "save_alerts",
    "save_labels",
    "scenario_normalized_recall",
    "tnr",
    "tpr",
    "validate_pair",
]
