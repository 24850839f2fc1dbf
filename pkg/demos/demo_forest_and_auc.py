"""
The forest and its yardstick
============================

A small random forest on a toy problem, its ROC-AUC, and a model file that
loads back to the same predictions.
"""

import numpy as np

from tranet.learner import (ForestConfig, load_model, predict_labels, predict_proba, roc_auc,
                            save_model, train_forest)

rng = np.random.default_rng(0)
X = rng.normal(size=(400, 3))
# class 2 lives where the first two coordinates add up high; the third is noise
y = np.where(X[:, 0] + X[:, 1] + 0.5 * rng.normal(size=400) > 0.8, 2, 1)

train, test = np.arange(300), np.arange(300, 400)
model = train_forest(X[train], y[train], ForestConfig(n_trees=100, seed=7))
p = predict_proba(model, X[test])
print("test AUC     :", round(roc_auc(p[:, 1], y[test]), 4))
print("test accuracy:", np.mean(predict_labels(p) == y[test]))

# the AUC only cares about order
print("AUC after x**3 + 1:", round(roc_auc(p[:, 1] ** 3 + 1, y[test]), 4))

data = save_model(model)
print(f"\nmodel file: {len(data) / 1024:.0f} KiB of JSON")
print("reloaded model predicts the same:",
      np.array_equal(predict_proba(load_model(data), X[test]), p))
print("retrained with the same seed gives the same bytes:",
      save_model(train_forest(X[train], y[train], ForestConfig(n_trees=100, seed=7))) == data)
