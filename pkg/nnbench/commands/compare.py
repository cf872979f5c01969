# nnbench/commands/compare.py
from __future__ import annotations

import click

from ..services.evaluation import delta_table
from ._options import (
    build_config,
    experiment_options,
    load_datasets,
    merge_options,
    open_manifest,
    output_format,
    read_config_file,
)
from .run import execute, write_table

METRICS = ["hassanat", "manhattan", "euclidean"]


@click.command()
@experiment_options
@click.option("--baseline", type=click.Choice(METRICS), default="manhattan", show_default=True)
@click.option("--treatment", type=click.Choice(METRICS), default="hassanat", show_default=True)
def compare(config_path, progress, baseline, treatment, **flags):
    """兩個 metric 用完全相同的切分各跑一次，輸出 treatment - baseline。"""
    opts = merge_options(flags, read_config_file(config_path))
    output_format(opts.format, opts.out)
    datasets, _ = load_datasets(open_manifest(opts.manifest), opts.datasets, opts.extended)

    base_cfg = build_config(opts, list(datasets), metric=baseline)
    treat_cfg = base_cfg.with_metric(treatment)

    base = execute(base_cfg, datasets, progress)
    treat = execute(treat_cfg, datasets, progress)
    if opts.round_first:
        base, treat = base.rounded(), treat.rounded()

    write_table(delta_table(base, treat), opts, title=f"delta ({treatment} - {baseline})")
