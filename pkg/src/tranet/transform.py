"""Network-independent feature transformations.

Degree-like columns are mapped through their power-law quantile onto the
common distribution ``p(x') = x'**-2`` on ``[1, inf)``; for a fitted
exponent ``alpha`` and cutoff ``x_min`` this is ``x' = (x / x_min)**(alpha - 1)``.
PageRank is divided by its lower bound ``(1 - d) / n``. Clustering is left
as is. Each network is transformed using only its own data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DegenerateFitError, DomainError, FitError, SchemaMismatchError
from .features import BASE_KINDS, Column, FeatureMatrix

log = logging.getLogger(__name__)

FIT_METHODS = ("fixed_xmin_mle", "ks_scan_mle")


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    x_min: float
    n_tail: int
    method: str = "fixed_xmin_mle"

    def __post_init__(self):
        if not self.alpha > 1:
            raise FitError(f"alpha must exceed 1, got {self.alpha}")
        if not self.x_min >= 1:
            raise FitError(f"x_min must be >= 1, got {self.x_min}")
        if self.n_tail < 2:
            raise FitError("a fit needs at least 2 tail samples")

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return 1.0 - (x / self.x_min) ** (1.0 - self.alpha)


def _mle(tail, x_min):
    # a constant tail is a point mass: no exponent describes it
    if tail.min() == tail.max():
        raise DegenerateFitError(f"all {len(tail)} tail samples equal {tail[0]!r}")
    return 1.0 + len(tail) / np.log(tail / x_min).sum()


def _ks_distance(tail_sorted, alpha, x_min):
    n = len(tail_sorted)
    fitted = 1.0 - (tail_sorted / x_min) ** (1.0 - alpha)
    i = np.arange(n)
    return max(np.max(np.abs((i + 1) / n - fitted)), np.max(np.abs(i / n - fitted)))


def fit_power_law(samples, x_min=1.0, method="fixed_xmin_mle"):
    """Continuous maximum-likelihood power-law fit.

    ``fixed_xmin_mle`` uses every sample ``>= x_min``. ``ks_scan_mle`` tries each
    distinct sample value as cutoff and keeps the fit whose tail is closest to
    the data in Kolmogorov-Smirnov distance (ties go to the smaller cutoff).
    """
    x = np.asarray(samples, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)):
        raise FitError("samples must be finite")
    if method == "fixed_xmin_mle":
        if x_min < 1:
            raise ConfigError("x_min must be >= 1")
        tail = x[x >= x_min]
        if len(tail) < 2:
            raise FitError(f"need at least 2 samples >= x_min={x_min}, got {len(tail)}")
        return PowerLawFit(_mle(tail, x_min), float(x_min), len(tail), method)
    if method != "ks_scan_mle":
        raise ConfigError(f"unknown fit method {method!r}")

    x = np.sort(x[x >= 1])
    best = None
    for cand in np.unique(x):
        tail = x[np.searchsorted(x, cand):]
        if len(tail) < 2:
            break
        try:
            alpha = _mle(tail, cand)
        except DegenerateFitError:
            continue
        dist = _ks_distance(tail, alpha, cand)
        if best is None or dist < best[0]:
            best = (dist, alpha, float(cand), len(tail))
    if best is None:
        raise DegenerateFitError("no cutoff candidate gives a non-degenerate fit")
    return PowerLawFit(best[1], best[2], best[3], method)


def power_law_transform(values, fit):
    """Map values onto the common ``x'**-2`` power law.

    0 stays 0, values in ``(0, x_min)`` clamp to 1 and values ``>= x_min`` become
    ``(x / x_min) ** (alpha - 1)``.
    """
    x = np.asarray(values, dtype=np.float64)
    if np.any(x < 0):
        raise DomainError("power-law transform is undefined for negative values")
    out = np.ones_like(x)
    out[x == 0] = 0.0
    tail = x >= fit.x_min
    out[tail] = (x[tail] / fit.x_min) ** (fit.alpha - 1.0)
    return out


def normalized_pagerank(pr, n, d):
    """PageRank divided by its theoretical minimum ``(1 - d) / n``."""
    if not 0 < d < 1:
        raise ConfigError("damping must lie in (0, 1)")
    pr = np.asarray(pr, dtype=np.float64)
    if abs(pr.sum() - 1.0) > 1e-6:
        raise DomainError(f"PageRank vector must sum to 1, sums to {pr.sum()!r}")
    return pr * n / (1.0 - d)


DEFAULT_RULES = {
    "degree": "power_law",
    "indegree": "power_law",
    "outdegree": "power_law",
    "clustering": "identity",
    "pagerank": "normalized_pagerank",
}


@dataclass(frozen=True)
class TransformPolicy:
    rules: dict = field(default_factory=lambda: dict(DEFAULT_RULES))
    damping: float = 0.85
    x_min: float = 1.0
    fit_method: str = "fixed_xmin_mle"

    def __post_init__(self):
        if set(self.rules) != set(BASE_KINDS):
            raise ConfigError(f"transform rules must cover exactly {BASE_KINDS}")
        allowed = {"power_law", "normalized_pagerank", "identity"}
        bad = {k: v for k, v in self.rules.items() if v not in allowed}
        if bad:
            raise ConfigError(f"unknown transform rule(s): {bad}")
        if self.fit_method not in FIT_METHODS:
            raise ConfigError(f"fit_method must be one of {FIT_METHODS}")
        if not 0 < self.damping < 1:
            raise ConfigError("damping must lie in (0, 1)")


def transform_features(f, policy=None):
    """Transform the five raw base columns of a single network.

    Returns ``(transformed, report)``. ``report`` maps each power-law column
    name to ``{alpha, x_min, n_tail, method, fallback}``. A column whose fit
    fails keeps its raw values and is flagged ``fallback: True``; its schema
    entry still names the policy transform so that networks stay comparable.
    """
    policy = policy or TransformPolicy()
    expected = [Column(k).name for k in BASE_KINDS]
    if f.names != expected:
        raise SchemaMismatchError(f"expected raw base columns {expected}, got {f.names}")

    n = f.shape[0]
    out = f.values.copy()
    columns = []
    report = {}
    for j, col in enumerate(f.columns):
        rule = policy.rules[col.kind]
        new = replace(col, transform=rule)
        if rule == "power_law":
            v = f.values[:, j]
            entry = {"alpha": None, "x_min": None, "n_tail": 0,
                     "method": policy.fit_method, "fallback": True}
            try:
                fit = fit_power_law(v[v >= 1], policy.x_min, policy.fit_method)
            except FitError as exc:
                log.info("%s: power-law fit failed (%s); passing column through", col.kind, exc)
            else:
                out[:, j] = power_law_transform(v, fit)
                entry.update(alpha=fit.alpha, x_min=fit.x_min, n_tail=fit.n_tail,
                             fallback=False)
            report[new.name] = entry
        elif rule == "normalized_pagerank":
            out[:, j] = normalized_pagerank(f.values[:, j], n, policy.damping)
        columns.append(new)
    return FeatureMatrix(out, columns, f.node_ids), report
