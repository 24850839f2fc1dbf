"""Config-driven experiment grids over (source, target, method) cells."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .aggregation import AggregationConfig
from .baselines import SvdConfig
from .errors import ConfigError, TraNetError
from .features import PageRankConfig, degree_features
from .graph import EdgeListOptions, align_labels, load_edge_list, load_labels
from .learner import ForestConfig
from .pipeline import (
    METHODS,
    POSITIVE,
    PipelineConfig,
    build_features,
    labelled_auc,
    run_inference_phase,
    run_learning_phase,
    run_svd,
    run_trad,
)
from .synthetic import SyntheticConfig, generate_planted_network
from .transform import TransformPolicy, fit_power_law, power_law_transform
from .trust import TrustConfig, eigentrust, threshold_labels

log = logging.getLogger(__name__)

REPORT_VERSION = 1


# ----------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class DatasetSpec:
    name: str
    edges: str | None = None
    labels: str | None = None
    signed: bool = False
    delimiter: str | None = "\t"
    eigentrust: TrustConfig | None = None
    synthetic: SyntheticConfig | None = None

    def __post_init__(self):
        sources = [self.edges is not None, self.synthetic is not None]
        if sum(sources) != 1:
            raise ConfigError(f"dataset {self.name!r} needs exactly one of 'edges' or 'synthetic'")
        if self.edges is not None and (self.labels is None) == (self.eigentrust is None):
            raise ConfigError(f"dataset {self.name!r} needs exactly one of 'labels' or 'eigentrust'")


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: dict
    methods: tuple = ("tranet", "none", "svd", "trad")
    pairs: object = "all-pairs"
    min_positive_labels: int = 25
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    seed: int = 0
    output_dir: str | None = None

    def __post_init__(self):
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown method(s) {bad}; choose from {METHODS}")
        if self.pairs != "all-pairs":
            for p in self.pairs:
                for name in p:
                    if name not in self.datasets:
                        raise ConfigError(f"pair {list(p)} references undefined dataset {name!r}")
                if len(p) == 2 and p[0] == p[1]:
                    raise ConfigError(f"pair {list(p)} has identical source and target")
                if len(p) not in (1, 2):
                    raise ConfigError(f"pair {list(p)} must list a source and a target")


def _build(cls, obj, where):
    if obj is None:
        return cls()
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    names = {f.name for f in fields(cls)}
    unknown = set(obj) - names
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")
    try:
        return cls(**obj)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def pipeline_from_dict(obj):
    obj = dict(obj or {})
    pr = _build(PageRankConfig, obj.pop("pagerank", None), "pipeline.pagerank")
    tr = dict(obj.pop("transform", None) or {})
    tr.setdefault("damping", pr.damping)
    trad = dict(obj.pop("trad", None) or {})
    cfg = PipelineConfig(
        pagerank=pr,
        transform=_build(TransformPolicy, tr, "pipeline.transform"),
        aggregation=_build(AggregationConfig, obj.pop("aggregation", None), "pipeline.aggregation"),
        forest=_build(ForestConfig, obj.pop("forest", None), "pipeline.forest"),
        svd=_build(SvdConfig, obj.pop("svd", None), "pipeline.svd"),
        trad_fraction=trad.pop("train_fraction", 0.8),
        trad_repeats=trad.pop("repeats", 10),
    )
    if obj or trad:
        raise ConfigError(f"unknown pipeline key(s): {sorted(obj) + sorted(trad)}")
    return cfg


def config_from_dict(obj, base_dir="."):
    """Build an :class:`ExperimentConfig` from parsed JSON; relative paths resolve against ``base_dir``."""
    obj = dict(obj)
    if "datasets" not in obj or not obj["datasets"]:
        raise ConfigError("config must define at least one dataset")

    def path(p):
        return None if p is None else str(Path(base_dir, p)) if not os.path.isabs(p) else p

    datasets = {}
    for name, d in obj.pop("datasets").items():
        d = dict(d)
        et = d.pop("eigentrust", None)
        syn = d.pop("synthetic", None)
        spec = dict(
            name=name, edges=path(d.pop("edges", None)), labels=path(d.pop("labels", None)),
            signed=d.pop("signed", False), delimiter=d.pop("delimiter", "\t"),
            eigentrust=None if et is None else _build(TrustConfig, et, f"{name}.eigentrust"),
            synthetic=None if syn is None else _build(SyntheticConfig, syn, f"{name}.synthetic"),
        )
        if d:
            raise ConfigError(f"unknown key(s) in dataset {name!r}: {sorted(d)}")
        datasets[name] = DatasetSpec(**spec)
    pairs = obj.pop("pairs", "all-pairs")
    if pairs != "all-pairs":
        pairs = tuple(tuple(p) for p in pairs)
    cfg = ExperimentConfig(
        datasets=datasets,
        methods=tuple(obj.pop("methods", METHODS)),
        pairs=pairs,
        min_positive_labels=obj.pop("min_positive_labels", 25),
        pipeline=pipeline_from_dict(obj.pop("pipeline", None)),
        seed=obj.pop("seed", 0),
        output_dir=path(obj.pop("output_dir", None)),
    )
    if obj:
        raise ConfigError(f"unknown config key(s): {sorted(obj)}")
    return cfg


def load_config(path, overrides=()):
    """Read a JSON config and apply ``key.path=value`` overrides (values parsed as JSON)."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    for item in overrides:
        apply_override(obj, item)
    return config_from_dict(obj, base_dir=os.path.dirname(os.path.abspath(path)))


def apply_override(obj, item):
    key, sep, raw = item.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {item!r} must look like key.path=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    *parents, leaf = key.split(".")
    node = obj
    for p in parents:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {item!r}: {p!r} is not an object")
    node[leaf] = value


# ----------------------------------------------------------------------
# datasets

@dataclass
class Dataset:
    name: str
    graph: object
    labels: np.ndarray  # aligned to graph indices, 0 = unlabelled
    n_unlabelled: int = 0

    @property
    def n_positive(self):
        return int(np.sum(self.labels == POSITIVE))

    @property
    def positive_rate(self):
        labelled = int(np.sum(self.labels > 0))
        return self.n_positive / labelled if labelled else 0.0


def load_dataset(spec):
    if spec.synthetic is not None:
        g, y = generate_planted_network(spec.synthetic)
        return Dataset(spec.name, g, y)
    g = load_edge_list(spec.edges, EdgeListOptions(delimiter=spec.delimiter, signed=spec.signed))
    if spec.eigentrust is not None:
        scores = eigentrust(g, spec.eigentrust)
        y = threshold_labels(scores, spec.eigentrust.trusted_fraction)
        return Dataset(spec.name, g, y)
    y, missing, unknown = align_labels(g, load_labels(spec.labels))
    if missing:
        log.info("%s: %d nodes have no label and are excluded from training and AUC",
                 spec.name, missing)
    if unknown:
        log.info("%s: %d labels refer to nodes absent from the graph", spec.name, unknown)
    return Dataset(spec.name, g, y, missing)


# ----------------------------------------------------------------------
# report

ROW_KEYS = ("source", "target", "method", "roc_auc", "n_source", "n_target",
            "positive_rate_source", "positive_rate_target", "fit_summary", "error")


def summarize(values):
    v = np.asarray(values, dtype=np.float64)
    if len(v) == 0:
        return {"count": 0, "mean": None, "median": None, "min": None, "max": None}
    return {"count": int(len(v)), "mean": float(v.mean()), "median": float(np.median(v)),
            "min": float(v.min()), "max": float(v.max())}


@dataclass
class ExperimentReport:
    rows: list
    excluded: dict = field(default_factory=dict)
    seed: int = 0
    histograms: dict = field(default_factory=dict)  # dataset -> stage -> [(lo, hi, p)]
    timings: dict = field(default_factory=dict)     # "source|target|method" -> seconds

    @property
    def aggregates(self):
        methods = sorted({r["method"] for r in self.rows})
        return {m: summarize([r["roc_auc"] for r in self.rows
                              if r["method"] == m and r["roc_auc"] is not None])
                for m in methods}

    def to_dict(self):
        """Deterministic content; timings are kept out so reruns compare equal."""
        return {"format_version": REPORT_VERSION, "seed": self.seed,
                "rows": self.rows, "aggregates": self.aggregates, "excluded": self.excluded}

    @classmethod
    def from_dict(cls, obj):
        if obj.get("format_version") != REPORT_VERSION:
            raise ConfigError(f"unsupported report version {obj.get('format_version')!r}")
        rows = [{k: r.get(k) for k in ROW_KEYS} for r in obj["rows"]]
        return cls(rows, dict(obj.get("excluded", {})), obj.get("seed", 0))


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def log_binned_histogram(values, bins_per_octave=2):
    """Probability mass of positive ``values`` in logarithmic bins.

    Returns ``[(lo, hi, p), ...]``; zeros are left out and the probabilities of
    the remaining values sum to one.
    """
    v = np.asarray(values, dtype=np.float64)
    v = v[v > 0]
    if len(v) == 0:
        return []
    lo = math.floor(math.log2(v.min()) * bins_per_octave)
    hi = math.floor(math.log2(v.max()) * bins_per_octave) + 1
    edges = 2.0 ** (np.arange(lo, hi + 1) / bins_per_octave)
    counts, _ = np.histogram(v, bins=edges)
    # np.histogram drops nothing here; the last bin is closed on the right
    p = counts / counts.sum()
    return [(float(a), float(b), float(c)) for a, b, c in zip(edges[:-1], edges[1:], p) if c > 0]


def degree_histograms(g, policy):
    degree = degree_features(g)[0]
    try:
        fit = fit_power_law(degree[degree >= 1], policy.x_min, policy.fit_method)
        transformed = power_law_transform(degree, fit)
    except TraNetError:
        transformed = degree
    return {"raw": log_binned_histogram(degree),
            "transformed": log_binned_histogram(transformed)}


# ----------------------------------------------------------------------
# runner

def _cells(cfg, names):
    """(transfer pairs, trad datasets) restricted to usable dataset names."""
    ok = set(names)
    if cfg.pairs == "all-pairs":
        pairs = [(s, t) for s in names for t in names if s != t]
        trad = list(names)
    else:
        pairs = [tuple(p) for p in cfg.pairs if len(p) == 2 and p[0] in ok and p[1] in ok]
        trad = []
        for p in cfg.pairs:
            name = p[-1]
            if name in ok and name not in trad:
                trad.append(name)
    return pairs, trad


def run_experiment(cfg):
    """Run every requested (pair, method) cell and collect an :class:`ExperimentReport`."""
    pcfg = cfg.pipeline.with_seed(cfg.seed)
    needed = sorted(cfg.datasets) if cfg.pairs == "all-pairs" else \
        sorted({name for p in cfg.pairs for name in p})

    data, excluded = {}, {}
    for name in needed:
        try:
            ds = load_dataset(cfg.datasets[name])
        except TraNetError as exc:
            exc.args = (f"dataset {name!r}: {exc}",)
            raise
        except OSError as exc:
            raise OSError(f"dataset {name!r}: {exc}") from exc
        if ds.n_positive < cfg.min_positive_labels:
            reason = (f"{ds.n_positive} positive labels, fewer than "
                      f"min_positive_labels={cfg.min_positive_labels}")
            log.warning("excluding dataset %s: %s", name, reason)
            excluded[name] = reason
            continue
        data[name] = ds
    names = sorted(data)
    pairs, trad_sets = _cells(cfg, names)
    methods = [m for m in METHODS if m in cfg.methods]

    feature_cache, model_cache = {}, {}

    def features(name, transform):
        key = (name, transform)
        if key not in feature_cache:
            feature_cache[key] = build_features(data[name].graph, pcfg, transform)
        return feature_cache[key]

    def model(name, method):
        key = (name, method)
        if key not in model_cache:
            ds = data[name]
            model_cache[key] = run_learning_phase(ds.graph, ds.labels, pcfg, method,
                                                  features=features(name, method == "tranet"))
        return model_cache[key]

    rows, timings = [], {}

    def cell(source, target, method, fn):
        row = {"source": source, "target": target, "method": method, "roc_auc": None,
               "n_source": data[source].graph.n, "n_target": data[target].graph.n,
               "positive_rate_source": data[source].positive_rate,
               "positive_rate_target": data[target].positive_rate,
               "fit_summary": None, "error": None}
        t0 = time.perf_counter()
        try:
            auc, summary = fn()
            row["roc_auc"], row["fit_summary"] = float(auc), summary
        except TraNetError as exc:
            log.error("cell %s -> %s (%s) failed: %s", source, target, method, exc)
            row["error"] = f"{type(exc).__name__}: {exc}"
        timings[f"{source}|{target}|{method}"] = time.perf_counter() - t0
        rows.append(_clean(row))

    def alphas(name):
        rep = features(name, True)[1]
        return {col: e["alpha"] for col, e in sorted(rep.items())}

    for source, target in pairs:
        for method in methods:
            if method in ("tranet", "none"):
                def fn(source=source, target=target, method=method):
                    inf = run_inference_phase(model(source, method), data[target].graph, pcfg,
                                              features=features(target, method == "tranet"))
                    summary = ({"source": alphas(source), "target": alphas(target)}
                               if method == "tranet" else None)
                    return labelled_auc(inf.scores, data[target].labels), summary
            elif method == "svd":
                def fn(source=source, target=target):
                    scores = run_svd(data[source].graph, data[source].labels,
                                     data[target].graph, pcfg,
                                     features=(features(source, False)[0],
                                               features(target, False)[0]))
                    return labelled_auc(scores, data[target].labels), None
            else:
                continue
            cell(source, target, method, fn)

    if "trad" in methods:
        for name in trad_sets:
            def fn(name=name):
                aucs = run_trad(data[name].graph, data[name].labels, pcfg, cfg.seed,
                                features=features(name, False))
                return float(np.mean(aucs)), {"repeats": len(aucs), "aucs": aucs}
            cell(name, name, "trad", fn)

    rows.sort(key=lambda r: (r["source"], r["target"], r["method"]))
    hist = {name: degree_histograms(data[name].graph, pcfg.transform) for name in names}
    return ExperimentReport(rows, excluded, cfg.seed, hist, timings)


# ----------------------------------------------------------------------
# output files

def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def report_json(report):
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def emit_reports(report, outdir):
    """Write report.json, report.csv, per-method AUC files, degree histograms and timings."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "report.json", report_json(report))

    cols = [k for k in ROW_KEYS if k != "fit_summary"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in report.rows:
        w.writerow(["" if r[k] is None else r[k] for k in cols])
    _write(out / "report.csv", buf.getvalue())

    written = [out / "report.json", out / "report.csv"]
    for method in sorted({r["method"] for r in report.rows}):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "target", "roc_auc"])
        for r in report.rows:
            if r["method"] == method and r["roc_auc"] is not None:
                w.writerow([r["source"], r["target"], repr(r["roc_auc"])])
        path = out / f"auc_{method}.csv"
        _write(path, buf.getvalue())
        written.append(path)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset", "stage", "bin_low", "bin_high", "probability"])
    for name in sorted(report.histograms):
        for stage in ("raw", "transformed"):
            for lo, hi, p in report.histograms[name].get(stage, []):
                w.writerow([name, stage, repr(lo), repr(hi), repr(p)])
    _write(out / "degree_histograms.csv", buf.getvalue())
    _write(out / "timings.json", json.dumps(report.timings, indent=2, sort_keys=True) + "\n")
    written += [out / "degree_histograms.csv", out / "timings.json"]
    return written
