"""Command line interface: ``tranet <verb> ...``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numeric failure. Logs go to standard error; data goes to files or stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

import numpy as np

from .aggregation import AggregationConfig
from .errors import ConfigError, ParseError, TraNetError
from .experiment import emit_reports, load_config, run_experiment
from .features import PageRankConfig, extract_base_features, write_feature_csv
from .graph import EdgeListOptions, align_labels, load_edge_list, load_labels, write_edge_list, write_labels
from .learner import ForestConfig, load_model, roc_auc, save_model
from .pipeline import PipelineConfig, build_features, run_inference_phase, run_learning_phase
from .synthetic import SyntheticConfig, generate_planted_network
from .transform import TransformPolicy, fit_power_law
from .trust import TrustConfig, eigentrust, threshold_labels

log = logging.getLogger("tranet")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _open_out(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _graph_args(p):
    p.add_argument("graph", help="edge list file (source target [sign])")
    p.add_argument("--signed", action="store_true", help="third column holds the edge sign")
    p.add_argument("--delimiter", default="\t",
                   help="field separator (default tab; 'ws' splits on any whitespace)")
    p.add_argument("--skip-lines", type=int, default=0, help="header lines to skip")


def _load_graph(args, signed=None):
    delim = None if args.delimiter == "ws" else args.delimiter
    opts = EdgeListOptions(delimiter=delim, signed=args.signed if signed is None else signed,
                           header_lines_to_skip=args.skip_lines)
    return load_edge_list(args.graph, opts)


def _pipeline_args(p):
    p.add_argument("--rmax", type=int, default=5, help="aggregation rounds (default 5)")
    p.add_argument("--direction", choices=("all", "in", "out"), default="all")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--fit-method", choices=("fixed_xmin_mle", "ks_scan_mle"),
                   default="fixed_xmin_mle")


def _pipeline_config(args, forest=None):
    pr = PageRankConfig(damping=args.damping)
    return PipelineConfig(
        pagerank=pr,
        transform=TransformPolicy(damping=args.damping, fit_method=args.fit_method),
        aggregation=AggregationConfig(r_max=args.rmax, direction=args.direction),
        forest=forest or ForestConfig(),
    )


def _write_scores(path, ids, scores, header="score"):
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id", header])
        for u, s in zip(ids, scores):
            w.writerow([u, format(float(s), ".17g")])


def _read_scores(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows[0]) < 2:
        raise ParseError(f"{path}: expected a 'node_id,score' CSV")
    try:
        return {r[0]: float(r[1]) for r in rows[1:] if r}
    except (ValueError, IndexError) as exc:
        raise ParseError(f"{path}: {exc}") from None


# ----------------------------------------------------------------------
# verbs

def cmd_features(args):
    g = _load_graph(args)
    cfg = _pipeline_config(args)
    f, report = build_features(g, cfg, transform=args.transform)
    with _open_out(args.output) as fh:
        write_feature_csv(f, fh)
    if args.fit_report:
        with open(args.fit_report, "w", encoding="utf-8") as fh:
            json.dump(_jsonable(report), fh, indent=2, sort_keys=True)


def _jsonable(report):
    return {k: {kk: (float(vv) if isinstance(vv, np.floating) else vv) for kk, vv in v.items()}
            for k, v in report.items()}


def cmd_fit_report(args):
    g = _load_graph(args)
    f = extract_base_features(g)
    out = {}
    for kind in ("degree", "indegree", "outdegree"):
        v = f.column(f"{kind}.raw.r0")
        try:
            fit = fit_power_law(v[v >= 1], args.x_min, args.fit_method)
            out[kind] = {"alpha": fit.alpha, "x_min": fit.x_min, "n_tail": fit.n_tail,
                         "method": fit.method, "fallback": False}
        except TraNetError as exc:
            log.warning("%s: %s", kind, exc)
            out[kind] = {"alpha": None, "x_min": None, "n_tail": 0,
                         "method": args.fit_method, "fallback": True}
    with _open_out(args.output) as fh:
        fh.write(json.dumps(out, indent=2, sort_keys=True) + "\n")


def cmd_trust(args):
    g = _load_graph(args, signed=True)
    cfg = TrustConfig(pre_trust_weight=args.pre_trust_weight, trusted_fraction=args.fraction,
                      tolerance=args.tolerance, max_iterations=args.max_iterations)
    scores = eigentrust(g, cfg)
    _write_scores(args.scores, g.node_ids, scores)
    if args.labels:
        write_labels(g, threshold_labels(scores, cfg.trusted_fraction), args.labels)


def cmd_train(args):
    g = _load_graph(args)
    y, missing, _ = align_labels(g, load_labels(args.labels))
    if missing:
        log.info("%d nodes without a label are left out of training", missing)
    forest = ForestConfig(n_trees=args.trees, max_depth=args.max_depth,
                          min_samples_leaf=args.min_samples_leaf,
                          max_features=args.max_features, seed=args.seed)
    cfg = _pipeline_config(args, forest)
    model = run_learning_phase(g, y, cfg, method=args.method)
    model.metadata["source"] = args.name or args.graph
    with open(args.output, "wb") as fh:
        fh.write(save_model(model))


def cmd_predict(args):
    with open(args.model, "rb") as fh:
        model = load_model(fh.read())
    g = _load_graph(args)
    md = model.metadata
    ns = argparse.Namespace(rmax=md.get("r_max", 5), direction=md.get("direction", "all"),
                            damping=args.damping, fit_method=args.fit_method)
    inf = run_inference_phase(model, g, _pipeline_config(ns))
    _write_scores(args.output, g.node_ids, inf.scores)
    if args.labels_out:
        write_labels(g, inf.labels, args.labels_out)


def cmd_eval(args):
    scores = _read_scores(args.scores)
    labels = load_labels(args.labels)
    common = [u for u in scores if u in labels]
    if not common:
        raise ConfigError("no node appears in both the score and the label file")
    auc = roc_auc([scores[u] for u in common], [labels[u] for u in common],
                  positive=args.positive)
    print(repr(auc))


def cmd_experiment(args):
    overrides = list(args.set or []) + [f"seed={args.seed}"]
    if args.output_dir:
        overrides.append(f"output_dir={json.dumps(os.path.abspath(args.output_dir))}")
    cfg = load_config(args.config, overrides)
    if cfg.output_dir is None:
        raise ConfigError("no output directory: set output_dir in the config or pass --output-dir")
    report = run_experiment(cfg)
    for path in emit_reports(report, cfg.output_dir):
        log.info("wrote %s", path)
    for method, agg in sorted(report.aggregates.items()):
        if agg["count"]:
            log.info("%-6s mean AUC %.4f  median %.4f  (%d cells)",
                     method, agg["mean"], agg["median"], agg["count"])


def cmd_synth(args):
    cfg = SyntheticConfig(args.nodes, args.m, args.hub_fraction, args.noise, args.seed)
    g, y = generate_planted_network(cfg)
    write_edge_list(g, args.output)
    write_labels(g, y, args.labels)


# ----------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="tranet", description="Cross-network node classification with "
                                           "transformed structural features.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("features", help="graph -> feature CSV")
    _graph_args(s)
    _pipeline_args(s)
    s.add_argument("--transform", dest="transform", action="store_true", default=True)
    s.add_argument("--no-transform", dest="transform", action="store_false")
    s.add_argument("-o", "--output", help="CSV path (default stdout)")
    s.add_argument("--fit-report", help="write the power-law fit report JSON here")
    s.set_defaults(func=cmd_features)

    s = sub.add_parser("fit-report", help="power-law fits of the degree columns")
    _graph_args(s)
    s.add_argument("--fit-method", choices=("fixed_xmin_mle", "ks_scan_mle"),
                   default="fixed_xmin_mle")
    s.add_argument("--x-min", type=float, default=1.0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fit_report)

    s = sub.add_parser("trust", help="EigenTrust scores and trust labels of a signed graph")
    _graph_args(s)
    s.add_argument("--pre-trust-weight", type=float, default=0.15)
    s.add_argument("--fraction", type=float, default=0.2, help="fraction labelled trusted")
    s.add_argument("--tolerance", type=float, default=1e-10)
    s.add_argument("--max-iterations", type=int, default=1000)
    s.add_argument("--scores", help="score CSV path (default stdout)")
    s.add_argument("--labels", help="write trusted(2)/other(1) labels here")
    s.set_defaults(func=cmd_trust)

    s = sub.add_parser("train", help="learning phase: graph + labels -> model file")
    _graph_args(s)
    s.add_argument("labels", help="label file (node_id label)")
    _pipeline_args(s)
    s.add_argument("--method", choices=("tranet", "none"), default="tranet")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trees", type=int, default=100)
    s.add_argument("--max-depth", type=int, default=25)
    s.add_argument("--min-samples-leaf", type=int, default=1)
    s.add_argument("--max-features", type=int, default=None)
    s.add_argument("--name", help="source dataset name stored in the model")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("predict", help="inference phase: model + graph -> scores")
    s.add_argument("model")
    _graph_args(s)
    s.add_argument("--damping", type=float, default=0.85)
    s.add_argument("--fit-method", choices=("fixed_xmin_mle", "ks_scan_mle"),
                   default="fixed_xmin_mle")
    s.add_argument("-o", "--output", help="score CSV path (default stdout)")
    s.add_argument("--labels-out", help="write predicted labels here")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("eval", help="ROC-AUC of a score CSV against a label file")
    s.add_argument("scores")
    s.add_argument("labels")
    s.add_argument("--positive", type=int, default=2)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("experiment", help="run a JSON-configured experiment grid")
    s.add_argument("config")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--output-dir")
    s.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config field, e.g. pipeline.forest.n_trees=50")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("synth", help="planted-role synthetic network")
    s.add_argument("--nodes", type=int, required=True)
    s.add_argument("--m", type=int, default=2, help="edges sent by each new node")
    s.add_argument("--hub-fraction", type=float, default=0.1)
    s.add_argument("--noise", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", required=True, help="edge list path")
    s.add_argument("--labels", required=True, help="label file path")
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except TraNetError as exc:
        log.error("%s", exc)
        return exc.exit_code
    except BrokenPipeError:
        # reader went away (e.g. piped into head); stay quiet
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except OSError as exc:
        log.error("%s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
