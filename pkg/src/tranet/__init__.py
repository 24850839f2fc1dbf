"""Cross-network transfer of node labels through transformed structural features."""

from .aggregation import AggregationConfig, aggregate_once, recursive_aggregate
from .baselines import SvdConfig, svd_transform, within_network_split
from .errors import TraNetError
from .experiment import ExperimentConfig, ExperimentReport, emit_reports, run_experiment
from .features import (
    FeatureMatrix,
    PageRankConfig,
    degree_features,
    extract_base_features,
    local_clustering,
    pagerank,
)
from .graph import EdgeListOptions, Graph, load_edge_list, neighbors, undirected_view
from .learner import (
    ForestConfig,
    TrainedModel,
    load_model,
    predict_proba,
    roc_auc,
    save_model,
    train_forest,
)
from .pipeline import PipelineConfig, run_inference_phase, run_learning_phase
from .synthetic import SyntheticConfig, generate_planted_network
from .transform import (
    PowerLawFit,
    TransformPolicy,
    fit_power_law,
    normalized_pagerank,
    power_law_transform,
    transform_features,
)
from .trust import TrustConfig, eigentrust, threshold_labels

__all__ = [
    "aggregate_once",
    "AggregationConfig",
    "degree_features",
    "EdgeListOptions",
    "eigentrust",
    "emit_reports",
    "ExperimentConfig",
    "ExperimentReport",
    "extract_base_features",
    "FeatureMatrix",
    "fit_power_law",
    "ForestConfig",
    "generate_planted_network",
    "Graph",
    "load_edge_list",
    "load_model",
    "local_clustering",
    "neighbors",
    "normalized_pagerank",
    "pagerank",
    "PageRankConfig",
    "PipelineConfig",
    "power_law_transform",
    "PowerLawFit",
    "predict_proba",
    "recursive_aggregate",
    "roc_auc",
    "run_experiment",
    "run_inference_phase",
    "run_learning_phase",
    "save_model",
    "svd_transform",
    "SvdConfig",
    "SyntheticConfig",
    "threshold_labels",
    "train_forest",
    "TrainedModel",
    "TraNetError",
    "transform_features",
    "TransformPolicy",
    "TrustConfig",
    "undirected_view",
    "within_network_split",
]

__version__ = "0.1.0"
