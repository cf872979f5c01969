# nnbench/commands/run.py
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Optional

import click

from ..db import SessionLocal, init_db
from ..schemas import ExperimentConfig
from ..services import run_store
from ..services.dataset import Dataset
from ..services.evaluation import AccuracyTable, run_experiment
from ..services.table_export import render, write_xlsx
from ..settings import settings
from ._options import (
    Options,
    build_config,
    emit,
    experiment_options,
    load_datasets,
    merge_options,
    open_manifest,
    output_format,
    progress_bar,
    read_config_file,
)

logger = logging.getLogger(__name__)


def execute(config: ExperimentConfig, datasets: Dict[str, Dataset], progress: bool) -> AccuracyTable:
    total = len(config.datasets) * config.runs
    with progress_bar(progress, total, f"{config.metric.value}") as tick:
        return run_experiment(config, datasets, progress=tick)


def execute_recorded(
    config: ExperimentConfig,
    datasets: Dict[str, Dataset],
    paths: Dict[str, Path],
    progress: bool,
) -> AccuracyTable:
    """與 execute 相同，另外把每個 (資料集, run, 分類器) 寫進 run ledger。"""
    init_db()
    with SessionLocal() as db:
        fingerprints = {name: run_store.persist_fingerprint(db, paths[name], ds) for name, ds in datasets.items()}
        exp = run_store.start_experiment(db, config, list(config.datasets))
        try:
            table = execute(config, datasets, progress)
        except Exception as e:
            run_store.fail_experiment(db, exp, str(e))
            raise
        run_store.record_table(db, exp, table, config, fingerprints)
        click.echo(f"recorded experiment {exp.id}", err=True)
        return table


def write_table(table, opts: Options, title: Optional[str], show_spread: bool = False) -> None:
    fmt = output_format(opts.format, opts.out)
    if fmt == "xlsx":
        write_xlsx(table, opts.out)
        return
    spread = table.std() if show_spread and isinstance(table, AccuracyTable) else None
    emit(render(table, fmt, title=title, spread=spread), opts.out)


@click.command()
@experiment_options
@click.option("--metric", type=click.Choice(["hassanat", "manhattan", "euclidean"]), default=None)
@click.option("--record", is_flag=True, default=False, help="寫入 run ledger（SQLite）")
@click.option("--show-spread", "show_spread", is_flag=True, default=False, help="markdown 顯示各 run 的標準差")
@click.option("--from-ledger", "from_ledger", type=int, default=None, help="直接輸出 ledger 中已記錄的實驗")
def run(config_path, progress, record, show_spread, from_ledger, **flags):
    """對選定資料集做重複切分實驗，輸出資料集 × 分類器的平均 accuracy。"""
    opts = merge_options(flags, read_config_file(config_path))
    output_format(opts.format, opts.out)

    if from_ledger is not None:
        init_db()
        with SessionLocal() as db:
            table = run_store.load_accuracy_table(db, from_ledger)
        if opts.round_first:
            table = table.rounded()
        write_table(table, opts, title=f"experiment {from_ledger}", show_spread=show_spread)
        return

    datasets, paths = load_datasets(open_manifest(opts.manifest), opts.datasets, opts.extended)
    config = build_config(opts, list(datasets))

    if record or settings.RECORD_RUNS:
        table = execute_recorded(config, datasets, paths, progress)
    else:
        table = execute(config, datasets, progress)

    if opts.round_first:
        table = table.rounded()
    write_table(table, opts, title=f"accuracy ({config.metric.value})", show_spread=show_spread)
