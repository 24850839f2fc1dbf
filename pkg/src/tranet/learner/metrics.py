"""ROC-AUC as the normalized Mann-Whitney U statistic."""

import numpy as np
from scipy.stats import rankdata

from ..errors import UndefinedMetricError


def roc_auc(scores, labels, positive=2):
    """Probability that a random positive outscores a random negative.

    Ties count one half. ``labels`` equal to ``positive`` are positives,
    every other label is negative.
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    pos = np.asarray(labels).ravel() == positive
    if scores.shape != pos.shape:
        raise ValueError("scores and labels differ in length")
    n_pos = int(pos.sum())
    n_neg = len(pos) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("ROC-AUC needs both positive and negative instances")
    # midranks are half-integers, so U is exact in floating point
    u = rankdata(scores)[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
