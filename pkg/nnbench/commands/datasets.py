# nnbench/commands/datasets.py
from __future__ import annotations

from pathlib import Path
from typing import Optional

import click

from ._options import open_manifest


@click.command("datasets")
@click.option("--manifest", type=click.Path(path_type=Path), default=None)
def datasets_cmd(manifest: Optional[Path]):
    """列出 manifest 中的資料集、檔案是否存在、是否只在 --extended 時執行。"""
    m = open_manifest(manifest)
    width = max((len(e.name) for e in m), default=4)
    for e in m:
        present = "present" if m.resolve_path(e).is_file() else "missing"
        tag = "  extended" if m.is_extended(e) else ""
        click.echo(
            f"{e.name.ljust(width)}  {e.expected_examples:>6} x {e.expected_features:<4} "
            f"{e.expected_classes:>3} classes  {present}{tag}"
        )
