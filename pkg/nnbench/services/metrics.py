# nnbench/services/metrics.py
"""
距離核心（純函式，無狀態，可在任意執行緒同時呼叫）。

- Hassanat：每一維的距離落在 [0, 1)，向量距離為各維加總。
- Manhattan (L1) / Euclidean (L2)：作為比較基準。

純量版本（hassanat_component / *_distance）給單一向量對使用；
pairwise_distances 對整個訓練矩陣一次計算，供排序鄰居使用。
"""
from __future__ import annotations

import math
from enum import Enum
from typing import Callable, Dict, Sequence, Union

import numpy as np

from ..errors import ConfigError, DimensionError, InvalidInputError

ArrayLike = Union[Sequence[float], np.ndarray]


class MetricId(str, Enum):
    HASSANAT = "hassanat"
    MANHATTAN = "manhattan"
    EUCLIDEAN = "euclidean"

    @classmethod
    def parse(cls, name: Union[str, "MetricId"]) -> "MetricId":
        if isinstance(name, MetricId):
            return name
        key = (name or "").strip().lower()
        for m in cls:
            if m.value == key:
                return m
        allowed = "|".join(m.value for m in cls)
        raise ConfigError(f"unknown metric '{name}' (use {allowed})")


# ─────────────────────────────────────────────────────────
# FeatureVector

def as_feature_vector(values: ArrayLike) -> np.ndarray:
    """轉成 1-D float64 陣列；長度 >= 1 且每個元素都必須是有限實數。"""
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"feature vector is not numeric: {e}") from e
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidInputError(f"feature vector must be 1-D with at least one value, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("feature vector contains NaN or infinite values")
    return arr


def _pair(a: ArrayLike, b: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    va = as_feature_vector(a)
    vb = as_feature_vector(b)
    if va.shape != vb.shape:
        raise DimensionError(f"dimension mismatch: {va.size} vs {vb.size}")
    return va, vb


# ─────────────────────────────────────────────────────────
# Hassanat

def hassanat_component(a: float, b: float) -> float:
    """
    單一維度的 Hassanat 距離：
      min >= 0 : 1 - (1+min)/(1+max)            = (max-min)/(1+max)
      min <  0 : 1 - (1+min+|min|)/(1+max+|min|) = (max-min)/(1+max-min)
    以「差值/分母」的形式計算，a != b 時結果必定 > 0。

    double 精度下差值超過約 2^53 時結果會捨入成 1.0，[0, 1) 只對有界的輸入成立；
    異號且差值溢位成 inf 時直接回傳 1.0（不會得到 inf/inf = NaN）。
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidInputError(f"hassanat_component needs finite inputs, got ({a}, {b})")
    lo, hi = (a, b) if a <= b else (b, a)
    span = hi - lo
    if lo >= 0.0:
        return span / (1.0 + hi)
    if math.isinf(span):
        return 1.0
    return span / (1.0 + span)


def _hassanat_components(lo_src: np.ndarray, hi_src: np.ndarray) -> np.ndarray:
    lo = np.minimum(lo_src, hi_src)
    hi = np.maximum(lo_src, hi_src)
    with np.errstate(over="ignore", invalid="ignore"):
        span = hi - lo
        out = span / np.where(lo >= 0.0, 1.0 + hi, 1.0 + span)
    # 差值溢位 -> 飽和為 1
    return np.where(np.isinf(span), 1.0, out)


def hassanat_distance(a: ArrayLike, b: ArrayLike) -> float:
    va, vb = _pair(a, b)
    return float(_hassanat_components(va, vb).sum())


def manhattan_distance(a: ArrayLike, b: ArrayLike) -> float:
    va, vb = _pair(a, b)
    return float(np.abs(va - vb).sum())


def euclidean_distance(a: ArrayLike, b: ArrayLike) -> float:
    va, vb = _pair(a, b)
    return float(np.sqrt(((va - vb) ** 2).sum()))


# ─────────────────────────────────────────────────────────
# 批次：query 對整個訓練矩陣 (N, m) -> (N,)

def _hassanat_rows(train: np.ndarray, query: np.ndarray) -> np.ndarray:
    return _hassanat_components(train, query[np.newaxis, :]).sum(axis=1)


def _manhattan_rows(train: np.ndarray, query: np.ndarray) -> np.ndarray:
    return np.abs(train - query).sum(axis=1)


def _euclidean_rows(train: np.ndarray, query: np.ndarray) -> np.ndarray:
    return np.sqrt(((train - query) ** 2).sum(axis=1))


_ROW_KERNELS: Dict[MetricId, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    MetricId.HASSANAT: _hassanat_rows,
    MetricId.MANHATTAN: _manhattan_rows,
    MetricId.EUCLIDEAN: _euclidean_rows,
}

_PAIR_KERNELS: Dict[MetricId, Callable[[ArrayLike, ArrayLike], float]] = {
    MetricId.HASSANAT: hassanat_distance,
    MetricId.MANHATTAN: manhattan_distance,
    MetricId.EUCLIDEAN: euclidean_distance,
}


def distance(metric: MetricId, a: ArrayLike, b: ArrayLike) -> float:
    return _PAIR_KERNELS[MetricId.parse(metric)](a, b)


def pairwise_distances(metric: MetricId, train: np.ndarray, query: ArrayLike) -> np.ndarray:
    """
    query 與訓練矩陣每一列的距離。train 假設已是有限值的 (N, m) float64
    （Dataset 建構時已檢查），這裡只檢查 query 與維度。
    """
    q = as_feature_vector(query)
    if train.ndim != 2 or train.shape[1] != q.size:
        raise DimensionError(f"dimension mismatch: query has {q.size} features, train has {train.shape[-1]}")
    return _ROW_KERNELS[MetricId.parse(metric)](train, q)
