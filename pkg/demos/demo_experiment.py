"""
An all-pairs grid from a config file
====================================

``experiment.json`` lists three planted networks. Every ordered pair is run
with each transfer method, plus within-network learning on each network.
The same thing from the shell::

    tranet experiment demos/experiment.json --seed 0
"""

import os

from tranet.experiment import emit_reports, load_config, run_experiment

here = os.path.dirname(os.path.abspath(__file__))
cfg = load_config(os.path.join(here, "experiment.json"), overrides=["seed=0"])
report = run_experiment(cfg)

for r in report.rows:
    print(f"{r['source']:>7s} -> {r['target']:<7s} {r['method']:7s} {r['roc_auc']:.4f}")
print()
for method, agg in report.aggregates.items():
    print(f"{method:7s} mean {agg['mean']:.4f}  median {agg['median']:.4f}  ({agg['count']} cells)")

for path in emit_reports(report, cfg.output_dir):
    print("wrote", os.path.relpath(path, here))
