# nnbench/commands/validate.py
from __future__ import annotations

from pathlib import Path
from typing import Optional

import click

from ..errors import ValidationFailed
from ..services.manifest import validate_entry
from ..utils import Utils
from ._options import open_manifest


@click.command()
@click.argument("manifest_path", type=click.Path(path_type=Path), required=False)
@click.option("--datasets", default=None, help="只驗證這些資料集（逗號分隔）")
def validate(manifest_path: Optional[Path], datasets: Optional[str]):
    """逐一讀取 manifest 中的資料集並與預期的筆數 / 特徵數 / 類別數 / 最小最大值比對。"""
    manifest = open_manifest(manifest_path)
    entries = manifest.select(Utils.split_list(datasets), extended=True)

    failed = 0
    for entry in entries:
        report, _ = validate_entry(manifest, entry)
        click.echo(report.summary())
        if not report.passed:
            failed += 1

    if failed:
        raise ValidationFailed(f"{failed} of {len(entries)} datasets failed validation")
