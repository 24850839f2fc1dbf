"""Random forest classifier and ROC-AUC."""

from .forest import (
    ForestConfig,
    TrainedModel,
    Tree,
    load_model,
    predict_labels,
    predict_proba,
    save_model,
    train_forest,
)
from .metrics import roc_auc

__all__ = ["ForestConfig", "TrainedModel", "Tree", "load_model", "predict_labels",
           "predict_proba", "roc_auc", "save_model", "train_forest"]
