"""Two-phase transfer pipeline.

Learning phase: features of the labelled source network are extracted,
transformed and aggregated, then a random forest is trained on them.
Inference phase: the target network goes through the same feature steps,
with every fit computed from the target alone, and the forest scores it.

``method="none"`` skips the transformation step and is the no-transfer
baseline. :func:`run_svd` and :func:`run_trad` run the other two baselines.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .aggregation import AggregationConfig, recursive_aggregate
from .baselines import SvdConfig, svd_transform, within_network_split
from .errors import ConfigError, TrainingError
from .features import PageRankConfig, extract_base_features
from .learner import ForestConfig, predict_labels, predict_proba, roc_auc, train_forest
from .transform import TransformPolicy, transform_features

log = logging.getLogger(__name__)

METHODS = ("tranet", "none", "svd", "trad")
POSITIVE = 2


@dataclass(frozen=True)
class PipelineConfig:
    pagerank: PageRankConfig = field(default_factory=PageRankConfig)
    transform: TransformPolicy = field(default_factory=TransformPolicy)
    aggregation: AggregationConfig = field(default_factory=AggregationConfig)
    forest: ForestConfig = field(default_factory=ForestConfig)
    svd: SvdConfig = field(default_factory=SvdConfig)
    trad_fraction: float = 0.8
    trad_repeats: int = 10

    def __post_init__(self):
        if self.transform.damping != self.pagerank.damping:
            raise ConfigError("transform damping must equal the PageRank damping "
                              f"({self.transform.damping} != {self.pagerank.damping})")

    def with_seed(self, seed):
        return replace(self, forest=replace(self.forest, seed=seed))


def build_features(g, cfg=None, transform=True):
    """Feature matrix of ``g`` plus the power-law fit report (empty without transform)."""
    cfg = cfg or PipelineConfig()
    f = extract_base_features(g, cfg.pagerank)
    report = {}
    if transform:
        f, report = transform_features(f, cfg.transform)
    return recursive_aggregate(g, f, cfg.aggregation), report


def _labelled(y):
    y = np.asarray(y, dtype=np.int64)
    return np.flatnonzero(y > 0)


def _train(f, y, cfg, metadata):
    rows = _labelled(y)
    if len(rows) < len(y):
        log.info("%d of %d nodes are unlabelled and left out of training",
                 len(y) - len(rows), len(y))
    return train_forest(f.rows(rows), np.asarray(y)[rows], cfg.forest, metadata)


def run_learning_phase(source, y_source, cfg=None, method="tranet", features=None):
    """Train the node classifier on a labelled source network.

    ``y_source`` is aligned to node indices; 0 marks unlabelled nodes.
    ``features`` may carry a precomputed ``build_features`` result.
    """
    if method not in ("tranet", "none"):
        raise ConfigError(f"learning phase supports 'tranet' and 'none', not {method!r}")
    cfg = cfg or PipelineConfig()
    if len(y_source) != source.n:
        raise TrainingError(f"{len(y_source)} labels for {source.n} nodes")
    f, _ = features or build_features(source, cfg, transform=method == "tranet")
    metadata = {"method": method, "r_max": cfg.aggregation.r_max,
                "direction": cfg.aggregation.direction, "n_source": source.n}
    return _train(f, y_source, cfg, metadata)


@dataclass
class Inference:
    scores: np.ndarray       # probability of the positive class (label 2)
    labels: np.ndarray       # arg-max class, ties to the smaller class
    proba: np.ndarray
    fit_report: dict


def run_inference_phase(model, target, cfg=None, features=None):
    """Score every node of ``target`` with a trained model.

    Only the target network and the model are used; labels are not needed.
    """
    cfg = cfg or PipelineConfig()
    method = model.metadata.get("method", "tranet")
    f, report = features or build_features(target, cfg, transform=method == "tranet")
    proba = predict_proba(model, f)
    scores = proba[:, POSITIVE - 1] if model.k >= POSITIVE else np.zeros(target.n)
    return Inference(scores, predict_labels(proba), proba, report)


def labelled_auc(scores, y):
    """ROC-AUC over the labelled nodes only."""
    rows = _labelled(y)
    return roc_auc(np.asarray(scores)[rows], np.asarray(y)[rows], positive=POSITIVE)


def run_svd(source, y_source, target, cfg=None, features=None):
    """SVD baseline: raw aggregated features of both networks projected jointly.

    Returns positive-class scores for the target nodes.
    """
    cfg = cfg or PipelineConfig()
    fs, ft = features or (build_features(source, cfg, transform=False)[0],
                          build_features(target, cfg, transform=False)[0])
    ps, pt = svd_transform(fs, ft, cfg.svd)
    model = _train(ps, y_source, cfg, {"method": "svd"})
    return predict_proba(model, pt)[:, POSITIVE - 1]


def run_trad(g, y, cfg=None, seed=0, features=None):
    """Within-network learning: AUC of each stratified train/test split."""
    cfg = cfg or PipelineConfig()
    f, _ = features or build_features(g, cfg, transform=False)
    rows = _labelled(y)
    y = np.asarray(y)
    aucs = []
    for train, test in within_network_split(y[rows], cfg.trad_fraction, cfg.trad_repeats, seed):
        tr, te = rows[train], rows[test]
        model = train_forest(f.rows(tr), y[tr], cfg.forest)
        aucs.append(roc_auc(predict_proba(model, f.rows(te))[:, POSITIVE - 1], y[te],
                            positive=POSITIVE))
    return aucs
