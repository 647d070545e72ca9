from .communities import detect_communities, modularity
from .compare import (
    ATTRIBUTE_MODES,
    aggregate_by_attribute,
    attribute_label,
    attribute_partition,
    compare_partitions,
)
from .degree import DegenerateInputError, PowerLawFit, degree_distribution, fit_power_law
from .paths import (
    CentralityRow,
    CentralityTable,
    PathMetrics,
    centrality,
    group_centrality,
    path_metrics,
)
from .report import AnalysisReport, run_analysis

__all__ = [
    "ATTRIBUTE_MODES",
    "AnalysisReport",
    "CentralityRow",
    "CentralityTable",
    "DegenerateInputError",
    "PathMetrics",
    "PowerLawFit",
    "aggregate_by_attribute",
    "attribute_label",
    "attribute_partition",
    "centrality",
    "compare_partitions",
    "degree_distribution",
    "detect_communities",
    "fit_power_law",
    "group_centrality",
    "modularity",
    "path_metrics",
    "run_analysis",
]
