# nnbench/services/manifest.py
"""
Manifest 檔：逐行 `key = value`，每個資料集一個區塊，區塊之間以空白行分隔，
`#` 開頭為註解。欄位與 ManifestEntry 一一對應，UTF-8 編碼。

    name = iris
    path = iris.csv
    expected_examples = 150
    ...

相對路徑以 data_dir（預設 settings.DATA_DIR）為基準。
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from pydantic import ValidationError

from ..errors import ConfigError, NNBenchError
from ..schemas import ManifestEntry, ValidationCheck, ValidationReport
from ..settings import settings
from ..utils import Utils
from .dataset import Dataset, load_csv

logger = logging.getLogger(__name__)

# Min/Max 與資料表印出的精度一致
MINMAX_TOLERANCE = 0.01


class Manifest:
    def __init__(self, entries: Iterable[ManifestEntry], data_dir: Optional[Path] = None, source: Optional[Path] = None):
        self.entries: List[ManifestEntry] = list(entries)
        self.data_dir = Path(data_dir) if data_dir else settings.DATA_DIR
        self.source = source
        self._by_name: Dict[str, ManifestEntry] = {}
        for e in self.entries:
            key = Utils.canon_name(e.name)
            if key in self._by_name:
                raise ConfigError(f"duplicate dataset '{e.name}' in manifest")
            self._by_name[key] = e

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, name: str) -> ManifestEntry:
        e = self._by_name.get(Utils.canon_name(name))
        if e is None:
            raise ConfigError(f"unknown dataset '{name}' (not in manifest {self.source or ''})".rstrip())
        return e

    def resolve_path(self, entry: ManifestEntry) -> Path:
        p = Path(entry.path).expanduser()
        return p if p.is_absolute() else (self.data_dir / p)

    def is_extended(self, entry: ManifestEntry) -> bool:
        return entry.expected_examples > settings.EXTENDED_MIN_EXAMPLES

    def select(self, names: Iterable[str], extended: bool = False) -> List[ManifestEntry]:
        """
        'all'（或空清單）= 全部非 extended 資料集；extended=True 時全部。
        明確指名 extended 資料集但沒帶 extended → ConfigError。
        """
        wanted = [n for n in names if n]
        if not wanted or any(n.strip().lower() == "all" for n in wanted):
            return [e for e in self.entries if extended or not self.is_extended(e)]

        out: List[ManifestEntry] = []
        for n in Utils.unique_in_order(wanted):
            e = self.get(n)
            if self.is_extended(e) and not extended:
                raise ConfigError(
                    f"dataset '{e.name}' has {e.expected_examples} examples and requires --extended"
                )
            out.append(e)
        return out

    def load(self, entry: ManifestEntry) -> Dataset:
        return load_csv(
            self.resolve_path(entry),
            label_column=entry.label_column,
            has_header=entry.has_header,
            name=entry.name,
        )


def parse_manifest(text: str, source: str = "<manifest>") -> List[ManifestEntry]:
    blocks: List[tuple[int, Dict[str, str]]] = []
    current: Dict[str, str] = {}
    start_line = 0

    def _flush():
        nonlocal current
        if current:
            blocks.append((start_line, current))
        current = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            _flush()
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{line}'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not current:
            start_line = lineno
        if key in current:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        current[key] = value
    _flush()

    entries: List[ManifestEntry] = []
    for lineno, block in blocks:
        try:
            entries.append(ManifestEntry.model_validate(block))
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(x) for x in first.get("loc", ())) or "block"
            raise ConfigError(f"{source}:{lineno}: invalid manifest entry ({where}: {first.get('msg')})") from None
    return entries


def load_manifest(path: Union[str, Path, None] = None, data_dir: Optional[Path] = None) -> Manifest:
    p = Path(path) if path else settings.MANIFEST_PATH
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read manifest {p}: {e}") from e
    return Manifest(parse_manifest(text, source=str(p)), data_dir=data_dir, source=p)


# ─────────────────────────────────────────────────────────
# 驗證：不一致只寫進報告，不丟例外

def _fmt(v: float) -> str:
    return f"{v:g}"


def validate(dataset: Dataset, entry: ManifestEntry) -> ValidationReport:
    lo = float(dataset.features.min())
    hi = float(dataset.features.max())
    checks = [
        ValidationCheck(name="examples", expected=str(entry.expected_examples), actual=str(len(dataset)),
                        passed=len(dataset) == entry.expected_examples),
        ValidationCheck(name="features", expected=str(entry.expected_features), actual=str(dataset.feature_count),
                        passed=dataset.feature_count == entry.expected_features),
        ValidationCheck(name="classes", expected=str(entry.expected_classes), actual=str(dataset.class_count),
                        passed=dataset.class_count == entry.expected_classes),
        ValidationCheck(name="min", expected=_fmt(entry.expected_min), actual=_fmt(lo),
                        passed=math.isclose(lo, entry.expected_min, rel_tol=0.0, abs_tol=MINMAX_TOLERANCE)),
        ValidationCheck(name="max", expected=_fmt(entry.expected_max), actual=_fmt(hi),
                        passed=math.isclose(hi, entry.expected_max, rel_tol=0.0, abs_tol=MINMAX_TOLERANCE)),
    ]
    report = ValidationReport(dataset=entry.name, checks=checks)
    if not report.passed:
        logger.warning(report.summary())
    return report


def validate_entry(manifest: Manifest, entry: ManifestEntry) -> tuple[ValidationReport, Optional[Dataset]]:
    """讀檔 + 驗證；讀檔失敗也轉成報告中的 io 檢查項。"""
    try:
        ds = manifest.load(entry)
    except NNBenchError as e:
        report = ValidationReport(
            dataset=entry.name,
            checks=[ValidationCheck(name="io", actual=e.detail, passed=False)],
        )
        logger.warning(report.summary())
        return report, None
    return validate(ds, entry), ds
