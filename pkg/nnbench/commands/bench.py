# nnbench/commands/bench.py
from __future__ import annotations

import click

from ..services.bench import run_bench
from ..settings import settings


@click.command()
@click.option("--n", "n", type=click.IntRange(min=1), default=1000, show_default=True, help="訓練點數 N")
@click.option("--m", "m", type=click.IntRange(min=1), default=16, show_default=True, help="特徵維度 m")
@click.option("--repeats", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--calls", type=click.IntRange(min=1), default=100_000, show_default=True,
              help="每次計時的 hassanat_component 呼叫數")
@click.option("--seed", type=int, default=None)
def bench(n: int, m: int, repeats: int, calls: int, seed):
    """計時 hassanat_component 與完整鄰居排序。"""
    report = run_bench(n, m, repeats=repeats, calls=calls, seed=settings.DEFAULT_SEED if seed is None else seed)
    for line in report.lines():
        click.echo(line)
