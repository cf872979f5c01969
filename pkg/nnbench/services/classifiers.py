# nnbench/services/classifiers.py
"""
鄰居排序 + 三種預測規則（k-NN 多數決、IINC 倒數名次加總、ENN 加權集成）。

名次 i 一律從 1 開始：IINC 的 1/i 與 ENN 的 w(i) = 1/log2(1+i) 都以此為準。
同分時的決勝規則：在參與計分的名次範圍內，最早出現（名次最小）的類別勝出。
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigError, InvalidArgumentError
from .dataset import ClassLabel, Dataset
from .metrics import ArrayLike, MetricId, pairwise_distances

# 分數相差在此範圍內視為同分（浮點加總順序造成的誤差）
TIE_TOLERANCE = 1e-9


# ─────────────────────────────────────────────────────────
# 型別

class NeighborRecord(NamedTuple):
    distance: float
    label: ClassLabel
    train_index: int


@dataclass(frozen=True)
class RankedNeighbors:
    """依距離遞增排序的全部訓練樣本；同距離時 train_index 小者在前。"""

    distances: np.ndarray
    labels: np.ndarray
    train_indices: np.ndarray
    class_names: Tuple[str, ...]

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    @property
    def records(self) -> Iterator[NeighborRecord]:
        for d, lab, idx in zip(self.distances, self.labels, self.train_indices):
            lid = int(lab)
            yield NeighborRecord(float(d), ClassLabel(lid, self.class_names[lid]), int(idx))


@dataclass(frozen=True)
class Prediction:
    label: ClassLabel
    scores: np.ndarray  # 每個類別一個分數：票數 / S_c / WS_c

    @property
    def probabilities(self) -> np.ndarray:
        total = float(self.scores.sum())
        if total <= 0.0:
            return np.zeros_like(self.scores)
        return self.scores / total


class ClassifierKind(str, Enum):
    KNN = "knn"
    SQRT_KNN = "sqrtnn"
    IINC = "iinc"
    ENN = "enn"


@dataclass(frozen=True)
class ClassifierSpec:
    kind: ClassifierKind
    k: Optional[int] = None

    def __post_init__(self) -> None:
        kind = ClassifierKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ClassifierKind.KNN:
            if self.k is None or int(self.k) < 1:
                raise InvalidArgumentError(f"KNN needs k >= 1, got {self.k}")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None:
            raise InvalidArgumentError(f"{kind.value} takes no k")

    @classmethod
    def knn(cls, k: int) -> "ClassifierSpec":
        return cls(ClassifierKind.KNN, k)

    @property
    def name(self) -> str:
        """表格欄位名稱：1NN … 9NN / √nNN / IINC / ENN"""
        if self.kind is ClassifierKind.KNN:
            return f"{self.k}NN"
        if self.kind is ClassifierKind.SQRT_KNN:
            return "√nNN"
        return self.kind.value.upper()

    @classmethod
    def parse(cls, token: str) -> "ClassifierSpec":
        """
        接受：'1nn' / '7NN' / 'knn:7' / 'sqrtnn' / '√nnn' / 'iinc' / 'enn'
        """
        t = (token or "").strip().lower()
        if t in ("sqrtnn", "sqrtknn", "√nnn", "√nn"):
            return cls(ClassifierKind.SQRT_KNN)
        if t == "iinc":
            return cls(ClassifierKind.IINC)
        if t == "enn":
            return cls(ClassifierKind.ENN)
        digits = None
        if t.startswith("knn:"):
            digits = t[4:]
        elif t.endswith("nn"):
            digits = t[:-2]
        if digits and digits.isdigit():
            return cls.knn(int(digits))
        raise ConfigError(f"unknown classifier '{token}' (use <k>nn, knn:<k>, sqrtnn, iinc, enn)")


DEFAULT_CLASSIFIERS: Tuple[ClassifierSpec, ...] = (
    ClassifierSpec.knn(1),
    ClassifierSpec.knn(3),
    ClassifierSpec.knn(5),
    ClassifierSpec.knn(7),
    ClassifierSpec.knn(9),
    ClassifierSpec(ClassifierKind.SQRT_KNN),
    ClassifierSpec(ClassifierKind.IINC),
    ClassifierSpec(ClassifierKind.ENN),
)


# ─────────────────────────────────────────────────────────
# 排序

def rank_by_distance(
    distances: ArrayLike,
    labels: Sequence[int],
    class_names: Sequence[str],
) -> RankedNeighbors:
    """已算好的距離 -> RankedNeighbors（stable sort，同距離保留訓練集順序）。"""
    d = np.asarray(distances, dtype=np.float64)
    labs = np.asarray(labels, dtype=np.int64)
    if d.ndim != 1 or d.shape != labs.shape:
        raise InvalidArgumentError(f"{d.size} distances for {labs.size} labels")
    order = np.argsort(d, kind="stable")
    return RankedNeighbors(
        distances=d[order],
        labels=labs[order],
        train_indices=order.astype(np.int64),
        class_names=tuple(class_names),
    )


def rank_neighbors(train: Dataset, query: ArrayLike, metric: MetricId) -> RankedNeighbors:
    distances = pairwise_distances(metric, train.features, query)
    return rank_by_distance(distances, train.labels, train.class_names)


# ─────────────────────────────────────────────────────────
# k 的選擇

def sqrt_k(n_train: int) -> int:
    if n_train < 1:
        raise InvalidArgumentError(f"n_train must be >= 1, got {n_train}")
    return max(1, math.isqrt(n_train))


def enn_k_values(n_train: int) -> List[int]:
    """1, 3, 5, …, K；K 為 <= floor(sqrt(n)) 的最大奇數。"""
    top = sqrt_k(n_train)
    if top % 2 == 0:
        top -= 1
    return list(range(1, max(top, 1) + 1, 2))


# ─────────────────────────────────────────────────────────
# 預測

def _decide(scores: np.ndarray, labels_by_rank: np.ndarray, class_names: Tuple[str, ...]) -> Prediction:
    best = float(scores.max())
    tied = scores >= best - TIE_TOLERANCE
    if int(tied.sum()) == 1:
        winner = int(np.argmax(scores))
    else:
        # 名次最小者勝出；labels_by_rank 依名次排列
        hits = tied[labels_by_rank]
        winner = int(labels_by_rank[int(np.argmax(hits))])
    return Prediction(label=ClassLabel(winner, class_names[winner]), scores=scores)


def knn_predict(ranked: RankedNeighbors, k: int) -> Prediction:
    n = len(ranked)
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k must be in 1..{n}, got {k}")
    top = ranked.labels[:k]
    votes = np.bincount(top, minlength=ranked.class_count).astype(np.float64)
    return _decide(votes, top, ranked.class_names)


def iinc_scores(ranked: RankedNeighbors) -> Tuple[np.ndarray, float]:
    """S_c = Σ 1/i（i 為全域名次）；回傳 (S_c 向量, S = H_N)。"""
    inv = 1.0 / np.arange(1, len(ranked) + 1, dtype=np.float64)
    s_c = np.bincount(ranked.labels, weights=inv, minlength=ranked.class_count)
    return s_c, float(inv.sum())


def iinc_predict(ranked: RankedNeighbors) -> Prediction:
    if len(ranked) < 1:
        raise InvalidArgumentError("IINC needs at least one ranked neighbour")
    s_c, _ = iinc_scores(ranked)
    # Σ_c S_c = S，所以 Prediction.probabilities 即為 S_c / S
    return _decide(s_c, ranked.labels, ranked.class_names)


def enn_weight(i: int) -> float:
    return 1.0 / math.log2(1.0 + i)


def enn_predict(ranked: RankedNeighbors) -> Prediction:
    """
    WS_c = Σ_{k ∈ 1,3,…,K} Σ_{i=1..k} [A_i = c]·w(i)，w(i) = 1/log2(1+i)。
    名次 i 的鄰居會出現在所有 k >= i 的子分類器中，因此先算出每個名次的出現次數再加權。
    """
    n = len(ranked)
    if n < 1:
        raise InvalidArgumentError("ENN needs at least one ranked neighbour")
    ks = np.asarray(enn_k_values(n), dtype=np.int64)
    top_k = int(ks[-1])
    ranks = np.arange(1, top_k + 1, dtype=np.int64)
    multiplicity = (ks[np.newaxis, :] >= ranks[:, np.newaxis]).sum(axis=1)
    weights = multiplicity / np.log2(1.0 + ranks)
    top = ranked.labels[:top_k]
    ws = np.bincount(top, weights=weights, minlength=ranked.class_count)
    return _decide(ws, top, ranked.class_names)


def predict_ranked(ranked: RankedNeighbors, spec: ClassifierSpec) -> Prediction:
    if spec.kind is ClassifierKind.KNN:
        return knn_predict(ranked, spec.k)
    if spec.kind is ClassifierKind.SQRT_KNN:
        return knn_predict(ranked, sqrt_k(len(ranked)))
    if spec.kind is ClassifierKind.IINC:
        return iinc_predict(ranked)
    return enn_predict(ranked)


def predict(train: Dataset, query: ArrayLike, metric: MetricId, spec: ClassifierSpec) -> Prediction:
    return predict_ranked(rank_neighbors(train, query, metric), spec)
