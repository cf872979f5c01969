# nnbench/services/dataset.py
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import (
    ConfigError,
    DatasetFormatError,
    DatasetIOError,
    DatasetParseError,
    DimensionError,
    InvalidArgumentError,
)
from ..utils import Utils

logger = logging.getLogger(__name__)


class ClassLabel(NamedTuple):
    id: int
    name: str


class Normalization(str, Enum):
    NONE = "none"
    TRAIN = "train"  # 統計量只取自訓練集（不洩漏）
    ALL = "all"      # 統計量取自 train+test，重現整體正規化的做法

    @classmethod
    def parse(cls, value: Union[str, "Normalization", None]) -> "Normalization":
        if isinstance(value, Normalization):
            return value
        try:
            return cls((value or "none").strip().lower())
        except ValueError:
            raise ConfigError(f"unknown normalization '{value}' (use none|train|all)") from None


@dataclass(frozen=True)
class Dataset:
    """
    (FeatureVector, ClassLabel) 的有序集合。
    features: (n, m) float64，唯讀；labels: (n,) int64，值為 class_names 的索引。
    由 split 產生的子集保留母集合的 class_names，類別 id 在 train/test 間一致。
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    class_names: Tuple[str, ...]

    def __post_init__(self) -> None:
        feats = np.array(self.features, dtype=np.float64, copy=True)
        labs = np.array(self.labels, dtype=np.int64, copy=True)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise DatasetFormatError(f"dataset '{self.name}' needs a non-empty (n, m) feature matrix, got {feats.shape}")
        if labs.shape != (feats.shape[0],):
            raise DimensionError(f"dataset '{self.name}': {labs.size} labels for {feats.shape[0]} examples")
        if not np.isfinite(feats).all():
            raise DatasetFormatError(f"dataset '{self.name}' contains non-finite feature values")
        if labs.min() < 0 or labs.max() >= len(self.class_names):
            raise DatasetFormatError(f"dataset '{self.name}' has labels outside 0..{len(self.class_names) - 1}")
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "class_names", tuple(self.class_names))

    def __len__(self) -> int:
        return int(self.features.shape[0])

    @property
    def feature_count(self) -> int:
        return int(self.features.shape[1])

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    def label(self, i: int) -> ClassLabel:
        lid = int(self.labels[i])
        return ClassLabel(lid, self.class_names[lid])

    @property
    def examples(self) -> Iterator[Tuple[np.ndarray, ClassLabel]]:
        for i in range(len(self)):
            yield self.features[i], self.label(i)

    def subset(self, indices: Sequence[int], name: Optional[str] = None) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            name=name or self.name,
            features=self.features[idx],
            labels=self.labels[idx],
            class_names=self.class_names,
        )

    def with_features(self, features: np.ndarray) -> "Dataset":
        return Dataset(name=self.name, features=features, labels=self.labels, class_names=self.class_names)


@dataclass(frozen=True)
class Split:
    train: Dataset
    test: Dataset
    seed: int
    test_fraction: float
    test_indices: Tuple[int, ...] = field(default=())


# ─────────────────────────────────────────────────────────
# CSV 讀取：逗號分隔、'.' 小數點、可選一行表頭、不支援引號

def load_csv(
    path: Union[str, Path],
    label_column: int,
    has_header: bool = False,
    name: Optional[str] = None,
) -> Dataset:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise DatasetIOError(f"file not found: {p}") from None
    except OSError as e:
        raise DatasetIOError(f"cannot read {p}: {e}") from e

    lines = text.splitlines()
    start = 1 if has_header else 0

    rows: List[Tuple[int, List[str]]] = []
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        rows.append((lineno, [c.strip() for c in line.split(",")]))

    if not rows:
        raise DatasetFormatError(f"{p}: no data rows")

    width = len(rows[0][1])
    if width < 2:
        raise DatasetFormatError(f"{p}: need at least one feature column and one label column")
    col = label_column + width if label_column < 0 else label_column
    if not 0 <= col < width:
        raise DatasetFormatError(f"{p}: label column {label_column} does not exist (rows have {width} columns)")

    feats = np.empty((len(rows), width - 1), dtype=np.float64)
    label_ids: List[int] = []
    names: List[str] = []
    index_of = {}

    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise DatasetFormatError(f"{p}: row {lineno} has {len(cells)} columns, expected {width}")
        j = 0
        for c, cell in enumerate(cells):
            if c == col:
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DatasetParseError(f"{p}: cannot parse '{cell}' as a number", row=lineno, column=c + 1) from None
            if not math.isfinite(v):
                raise DatasetParseError(f"{p}: non-finite value '{cell}'", row=lineno, column=c + 1)
            feats[r, j] = v
            j += 1

        # 標籤視為不透明字串，依首次出現順序編號
        token = cells[col]
        if token not in index_of:
            index_of[token] = len(names)
            names.append(token)
        label_ids.append(index_of[token])

    ds = Dataset(
        name=name or p.stem,
        features=feats,
        labels=np.asarray(label_ids, dtype=np.int64),
        class_names=tuple(names),
    )
    logger.info("loaded %s: %d examples, %d features, %d classes", ds.name, len(ds), ds.feature_count, ds.class_count)
    return ds


# ─────────────────────────────────────────────────────────
# Min-max 正規化

def normalize_minmax(
    train: Dataset,
    test: Dataset,
    fit_on: Union[str, Normalization] = Normalization.TRAIN,
) -> Tuple[Dataset, Dataset]:
    """
    每個特徵以 (v - min_j) / (max_j - min_j) 映射到 [0, 1]。
    fit_on=train：min/max 只取自訓練集，測試集超出範圍者截斷到 [0, 1]。
    fit_on=all：min/max 取自 train+test。
    常數特徵 (max_j == min_j) 一律映射為 0.0。
    """
    mode = Normalization.parse(fit_on)
    if train.feature_count != test.feature_count:
        raise DimensionError(f"train has {train.feature_count} features, test has {test.feature_count}")
    if mode is Normalization.NONE:
        return train, test

    basis = train.features if mode is Normalization.TRAIN else np.vstack([train.features, test.features])
    lo = basis.min(axis=0)
    rng = basis.max(axis=0) - lo
    constant = rng == 0.0
    safe = np.where(constant, 1.0, rng)

    def _apply(x: np.ndarray) -> np.ndarray:
        out = (x - lo) / safe
        out[:, constant] = 0.0
        return np.clip(out, 0.0, 1.0)

    return train.with_features(_apply(train.features)), test.with_features(_apply(test.features))


# ─────────────────────────────────────────────────────────
# Train/test 切分（不分層、無放回均勻抽樣）

def train_test_split(dataset: Dataset, test_fraction: float, seed: int) -> Split:
    if not (0.0 < test_fraction < 1.0):
        raise InvalidArgumentError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if seed < 0:
        raise InvalidArgumentError(f"seed must be a non-negative integer, got {seed}")

    n = len(dataset)
    n_test = Utils.round_half_up(test_fraction * n)
    if n_test < 1 or n_test >= n:
        raise InvalidArgumentError(
            f"dataset '{dataset.name}' with {n} examples cannot be split at {test_fraction}: "
            f"{n_test} test / {n - n_test} train"
        )

    rng = np.random.default_rng(seed)
    test_idx = np.sort(rng.choice(n, size=n_test, replace=False))
    mask = np.ones(n, dtype=bool)
    mask[test_idx] = False
    train_idx = np.flatnonzero(mask)

    return Split(
        train=dataset.subset(train_idx),
        test=dataset.subset(test_idx),
        seed=seed,
        test_fraction=test_fraction,
        test_indices=tuple(int(i) for i in test_idx),
    )
