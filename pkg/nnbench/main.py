# nnbench/main.py

import click

from .commands.bench import bench
from .commands.compare import compare
from .commands.datasets import datasets_cmd
from .commands.run import run
from .commands.stability import stability
from .commands.validate import validate
from .commands._options import setup_logging
from .errors import NNBenchError


class NNBenchGroup(click.Group):
    """可預期的錯誤統一轉成 `error: ...` 與對應的結束碼（0 / 1 / 2）。"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except NNBenchError as e:
            click.echo(f"error: {e.detail}", err=True)
            ctx.exit(e.exit_code)


@click.group(cls=NNBenchGroup)
@click.option("--log-level", "log_level", default=None, help="DEBUG / INFO / WARNING / ERROR")
def cli(log_level):
    """Hassanat / Manhattan / Euclidean 距離下的 KNN、IINC、ENN 基準實驗。"""
    setup_logging(log_level)


# Commands
cli.add_command(run)
cli.add_command(compare)
cli.add_command(stability)
cli.add_command(validate)
cli.add_command(bench)
cli.add_command(datasets_cmd)


def main() -> None:
    cli(prog_name="nnbench")
