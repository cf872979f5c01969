# nnbench/commands/stability.py
from __future__ import annotations

from pathlib import Path

import click

from ..services.evaluation import stability_table
from ..services.table_export import read_accuracy_csv
from ._options import Options, merge_options
from .run import write_table


@click.command()
@click.argument("table_path", type=click.Path(path_type=Path))
@click.option("--round-first", "round_first", is_flag=True, default=False,
              help="先把每格四捨五入到 2 位再計算差距")
@click.option("--format", "format", type=click.Choice(["md", "csv", "xlsx"]), default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None)
def stability(table_path, round_first, format, out):
    """讀入 accuracy CSV，輸出各分類器與每個資料集最佳結果的差距（含 Sum / Maximum）。"""
    acc = read_accuracy_csv(table_path)
    opts: Options = merge_options({"format": format, "out": out}, {})
    write_table(stability_table(acc, round_first=round_first), opts, title="stability")
