"""Institution-level citation networks, PageRank reputation scores, and
ranking-comparison statistics."""

__version__ = "0.1.0"

from .network import (
    CitationNetwork,
    DegreeReport,
    NetworkSummary,
    centrality_distribution,
    degree_centrality,
    degree_distribution,
    degree_report,
    in_degree,
    network_summary,
)
from .pagerank import (
    DanglingPolicy,
    PageRankConfig,
    PageRankResult,
    normalize_weights,
    pagerank,
    pagerank_oracle,
)
from .ingest import (
    PublicationRecord,
    Reference,
    SubjectProfile,
    apply_threshold,
    build_network,
    default_profiles,
    filter_records,
    load_profiles,
    parse_records,
)
from .scoring import ScoreTable, composite_score, compress, normalize_pagerank
from .rankstats import (
    ComparisonReport,
    average_rank,
    DisplacementSummary,
    PcaResult,
    compare_columns,
    correlation_matrix,
    kendall_w,
    partial_correlation,
    pca,
    pearson,
    rank_displacement,
    spearman,
    varimax,
)
from .synthnet import CartelSpec, SynthConfig, SynthResult, generate, generate_traced

__all__ = [
    "__version__",
    "CitationNetwork",
    "DegreeReport",
    "NetworkSummary",
    "centrality_distribution",
    "degree_centrality",
    "degree_distribution",
    "degree_report",
    "in_degree",
    "network_summary",
    "DanglingPolicy",
    "PageRankConfig",
    "PageRankResult",
    "normalize_weights",
    "pagerank",
    "pagerank_oracle",
    "PublicationRecord",
    "Reference",
    "SubjectProfile",
    "apply_threshold",
    "build_network",
    "default_profiles",
    "filter_records",
    "load_profiles",
    "parse_records",
    "ScoreTable",
    "composite_score",
    "compress",
    "normalize_pagerank",
    "ComparisonReport",
    "average_rank",
    "DisplacementSummary",
    "PcaResult",
    "compare_columns",
    "correlation_matrix",
    "kendall_w",
    "partial_correlation",
    "pca",
    "pearson",
    "rank_displacement",
    "spearman",
    "varimax",
    "CartelSpec",
    "SynthConfig",
    "SynthResult",
    "generate",
    "generate_traced",
]
