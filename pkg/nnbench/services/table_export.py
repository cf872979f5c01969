# nnbench/services/table_export.py
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape
from openpyxl import Workbook

from ..errors import ConfigError, DatasetFormatError, DatasetIOError
from ..settings import settings
from ..utils import Utils
from .evaluation import AccuracyTable, DeltaTable, StabilityTable

AnyTable = Union[AccuracyTable, DeltaTable, StabilityTable]

templates_env = Environment(
    loader=FileSystemLoader(str(settings.templates_dir)),
    autoescape=select_autoescape(["html", "xml"]),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


# ──────────────────────────────────────────────────────────────────────────────
# 共用：把三種表格攤平成 header + rows（數值仍為 float，None 表示空格）
# ──────────────────────────────────────────────────────────────────────────────

Row = List[Union[str, float, None]]


def _table_rows(table: AnyTable) -> tuple[List[str], List[Row]]:
    if isinstance(table, StabilityTable):
        header = ["dataset", "best", *table.columns]
        rows: List[Row] = [
            [name, float(table.best[i]), *map(float, table.deviations[i])]
            for i, name in enumerate(table.datasets)
        ]
        rows.append(["Sum", None, *map(float, table.sum)])
        rows.append(["Maximum", None, *map(float, table.maximum)])
        return header, rows

    header = ["dataset", *table.columns]
    rows = [[name, *map(float, table.cells[i])] for i, name in enumerate(table.datasets)]
    rows.append(["Average", *map(float, table.average)])
    return header, rows


# ──────────────────────────────────────────────────────────────────────────────
# Markdown（jinja2 模板）
# ──────────────────────────────────────────────────────────────────────────────

def to_markdown(
    table: AnyTable,
    title: Optional[str] = None,
    digits: int = 2,
    spread: Optional[np.ndarray] = None,
) -> str:
    """spread：(D, C) 標準差，給定時顯示成 0.94±0.02。"""
    header, rows = _table_rows(table)
    text_rows: List[List[str]] = []
    for i, row in enumerate(rows):
        cells = [str(row[0])]
        for j, v in enumerate(row[1:]):
            if v is None:
                cells.append("")
                continue
            s = Utils.fmt_cell(v, digits)
            if spread is not None and i < spread.shape[0]:
                s += f"±{Utils.fmt_cell(spread[i, j], digits)}"
            cells.append(s)
        text_rows.append(cells)

    widths = [max(len(header[c]), *(len(r[c]) for r in text_rows)) for c in range(len(header))]
    padded_header = [h.ljust(widths[c]) for c, h in enumerate(header)]
    padded_rows = [
        [cell.ljust(widths[0]) if c == 0 else cell.rjust(widths[c]) for c, cell in enumerate(r)]
        for r in text_rows
    ]
    tpl = templates_env.get_template("table.md.j2")
    return tpl.render(title=title, header=padded_header, widths=widths, rows=padded_rows)


# ──────────────────────────────────────────────────────────────────────────────
# CSV：完整精度（repr），可無損讀回
# ──────────────────────────────────────────────────────────────────────────────

def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return repr(float(v))


def to_csv(table: AnyTable) -> str:
    header, rows = _table_rows(table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_csv_cell(v) for v in r])
    return buf.getvalue()


def read_accuracy_csv(path: Union[str, Path]) -> AccuracyTable:
    """
    讀回 AccuracyTable CSV（第一欄為資料集名稱）。
    'Average' 列會被忽略並重新計算。
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8-sig")
    except OSError as e:
        raise DatasetIOError(f"cannot read table {p}: {e}") from e

    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise DatasetFormatError(f"{p}: need a header row and at least one data row")

    header = [c.strip() for c in rows[0]]
    columns = header[1:]
    if not columns:
        raise DatasetFormatError(f"{p}: no classifier columns in header")

    datasets: List[str] = []
    cells: List[List[float]] = []
    for lineno, r in enumerate(rows[1:], start=2):
        name = r[0].strip()
        if name.lower() == "average":
            continue
        if len(r) != len(header):
            raise DatasetFormatError(f"{p}: row {lineno} has {len(r)} columns, expected {len(header)}")
        try:
            values = [float(c) for c in r[1:]]
        except ValueError:
            raise DatasetFormatError(f"{p}: row {lineno} has a non-numeric cell") from None
        if any(not (0.0 <= v <= 1.0) for v in values):
            raise DatasetFormatError(f"{p}: row {lineno} has an accuracy outside [0, 1]")
        datasets.append(name)
        cells.append(values)

    if not datasets:
        raise DatasetFormatError(f"{p}: no data rows")
    return AccuracyTable(datasets=datasets, columns=columns, cells=np.array(cells, dtype=np.float64))


# ──────────────────────────────────────────────────────────────────────────────
# XLSX
# ──────────────────────────────────────────────────────────────────────────────

def write_xlsx(table: AnyTable, path: Union[str, Path], sheet_title: str = "results") -> Path:
    header, rows = _table_rows(table)
    wb = Workbook()
    ws = wb.active
    ws.title = sheet_title[:31]

    ws.append(header)
    for r in rows:
        ws.append([v for v in r])
    ws.freeze_panes = "A2"

    # 顯示 2 位，儲存仍是完整精度
    for row in ws.iter_rows(min_row=2, min_col=2):
        for cell in row:
            if isinstance(cell.value, float):
                cell.number_format = "0.00"
    ws.column_dimensions["A"].width = 18

    out = Path(path)
    wb.save(out)
    return out


def render(table: AnyTable, fmt: str, title: Optional[str] = None, spread: Optional[np.ndarray] = None) -> str:
    fmt = (fmt or "md").lower()
    if fmt == "csv":
        return to_csv(table)
    if fmt == "md":
        return to_markdown(table, title=title, spread=spread)
    raise ConfigError(f"unsupported format '{fmt}' for text output (use md / csv)")
