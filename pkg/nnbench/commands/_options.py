# nnbench/commands/_options.py
"""
各指令共用：設定檔解析、flag 合併（flag > 設定檔 > settings）、資料集載入、輸出。
"""
from __future__ import annotations

import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple

import click
from pydantic import ValidationError
from tqdm import tqdm

from ..errors import ConfigError
from ..schemas import ExperimentConfig
from ..services.dataset import Dataset
from ..services.manifest import Manifest, load_manifest
from ..settings import settings
from ..utils import Utils

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
HANDLER_NAME = "nnbench"

CONFIG_KEYS = frozenset({
    "metric", "datasets", "runs", "test_fraction", "seed", "normalize", "extended",
    "round_first", "format", "out", "threads", "classifiers", "manifest",
})

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


# ─────────────────────────────────────────────────────────
# logging

def setup_logging(level: Optional[str]) -> None:
    name = (level or settings.LOG_LEVEL or "WARNING").upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level '{level}'")

    root = logging.getLogger()
    for h in list(root.handlers):
        if h.get_name() == HANDLER_NAME:
            root.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(HANDLER_NAME)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(numeric)


# ─────────────────────────────────────────────────────────
# 設定檔：key = value

def read_config_file(path: Optional[Path]) -> Dict[str, str]:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e

    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got '{line}'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
        out[key] = value
    return out


def _as_bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ConfigError(f"config key '{key}' expects true/false, got '{value}'")


def _as_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"config key '{key}' expects an integer, got '{value}'") from None


def _as_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"config key '{key}' expects a number, got '{value}'") from None


@dataclass(frozen=True)
class Options:
    """合併後的值；None 表示沒有任何來源提供。"""

    metric: str
    datasets: List[str]
    runs: int
    test_fraction: float
    seed: int
    normalize: str
    extended: bool
    round_first: bool
    format: Optional[str]
    out: Optional[Path]
    threads: int
    classifiers: Optional[str]
    manifest: Optional[Path]


def merge_options(flags: Mapping[str, Any], file_cfg: Mapping[str, str]) -> Options:
    def pick(key: str, cast: Callable[[str, str], Any], default: Any) -> Any:
        v = flags.get(key)
        if v is not None:
            return v
        if key in file_cfg:
            return cast(key, file_cfg[key])
        return default

    def _str(_k: str, v: str) -> str:
        return v

    def _path(_k: str, v: str) -> Path:
        return Path(v).expanduser()

    datasets = pick("datasets", _str, None)
    extended = flags.get("extended") or (_as_bool("extended", file_cfg["extended"]) if "extended" in file_cfg else False)
    round_first = flags.get("round_first") or (
        _as_bool("round_first", file_cfg["round_first"]) if "round_first" in file_cfg else False
    )
    return Options(
        metric=pick("metric", _str, "hassanat"),
        datasets=Utils.split_list(datasets),
        runs=pick("runs", _as_int, settings.DEFAULT_RUNS),
        test_fraction=pick("test_fraction", _as_float, settings.DEFAULT_TEST_FRACTION),
        seed=pick("seed", _as_int, settings.DEFAULT_SEED),
        normalize=pick("normalize", _str, "none"),
        extended=bool(extended),
        round_first=bool(round_first),
        format=pick("format", _str, None),
        out=pick("out", _path, None),
        threads=pick("threads", _as_int, settings.DEFAULT_THREADS),
        classifiers=pick("classifiers", _str, None),
        manifest=pick("manifest", _path, None),
    )


def build_config(opts: Options, dataset_names: List[str], metric: Optional[str] = None) -> ExperimentConfig:
    payload: Dict[str, Any] = {
        "datasets": dataset_names,
        "metric": metric or opts.metric,
        "runs": opts.runs,
        "test_fraction": opts.test_fraction,
        "base_seed": opts.seed,
        "normalization": opts.normalize,
        "threads": opts.threads,
    }
    if opts.classifiers:
        payload["classifiers"] = opts.classifiers
    try:
        return ExperimentConfig(**payload)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first.get("loc", ())) or "config"
        raise ConfigError(f"invalid {where}: {first.get('msg')}") from None


def experiment_options(fn: Callable) -> Callable:
    """run / compare 共用的 flag；預設 None，讓設定檔可以補值。"""
    decorators = [
        click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
                     help="key = value 設定檔"),
        click.option("--datasets", default=None, help="逗號分隔的資料集名稱，或 all"),
        click.option("--runs", type=int, default=None),
        click.option("--test-fraction", "test_fraction", type=float, default=None),
        click.option("--seed", type=int, default=None),
        click.option("--normalize", type=click.Choice(["none", "train", "all"]), default=None),
        click.option("--extended", is_flag=True, default=None),
        click.option("--round-first", "round_first", is_flag=True, default=None),
        click.option("--format", "format", type=click.Choice(["md", "csv", "xlsx"]), default=None),
        click.option("--out", type=click.Path(path_type=Path), default=None),
        click.option("--threads", type=int, default=None),
        click.option("--classifiers", default=None, help="例如 1nn,3nn,sqrtnn,iinc,enn"),
        click.option("--manifest", type=click.Path(path_type=Path), default=None),
        click.option("--progress", is_flag=True, default=False, help="在 stderr 顯示進度條"),
    ]
    for d in reversed(decorators):
        fn = d(fn)
    return fn


# ─────────────────────────────────────────────────────────
# 資料集

def open_manifest(path: Optional[Path]) -> Manifest:
    return load_manifest(path) if path else load_manifest()


def load_datasets(manifest: Manifest, names: List[str], extended: bool) -> Tuple[Dict[str, Dataset], Dict[str, Path]]:
    entries = manifest.select(names, extended=extended)
    if not entries:
        raise ConfigError("no datasets selected")
    datasets: Dict[str, Dataset] = {}
    paths: Dict[str, Path] = {}
    for e in entries:
        datasets[e.name] = manifest.load(e)
        paths[e.name] = manifest.resolve_path(e)
    return datasets, paths


@contextmanager
def progress_bar(enabled: bool, total: int, desc: str) -> Iterator[Optional[Callable[[int], None]]]:
    if not enabled:
        yield None
        return
    with tqdm(total=total, desc=desc, file=sys.stderr, leave=False) as bar:
        yield bar.update


# ─────────────────────────────────────────────────────────
# 輸出

def output_format(fmt: Optional[str], out: Optional[Path]) -> str:
    """沒指定格式時：有 --out 用 csv，否則 markdown。"""
    if fmt:
        fmt = fmt.lower()
        if fmt not in ("md", "csv", "xlsx"):
            raise ConfigError(f"unknown format '{fmt}' (use md|csv|xlsx)")
        if fmt == "xlsx" and out is None:
            raise ConfigError("--format xlsx requires --out")
        return fmt
    return "csv" if out is not None else "md"


def emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        raise ConfigError(f"cannot write {out}: {e}") from e
    logger.info("wrote %s", out)
