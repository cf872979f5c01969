# nnbench/services/bench.py
"""
距離核心與鄰居排序的計時。資料用固定 seed 產生，排序結果取 SHA-256，
兩次執行的 digest 應相同（時間可以不同）。
"""
from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from ..errors import InvalidArgumentError
from .classifiers import rank_by_distance
from .metrics import MetricId, hassanat_component, pairwise_distances

logger = logging.getLogger(__name__)

PER_CALLS = 1_000_000


@dataclass(frozen=True)
class Timing:
    mean: float  # 秒
    p95: float


@dataclass(frozen=True)
class BenchReport:
    n: int
    m: int
    repeats: int
    calls: int
    component: Timing  # 換算成每 10^6 次 hassanat_component
    ranking: Timing    # 每一次完整排序 N 個訓練點
    digest: str

    def lines(self) -> List[str]:
        return [
            f"bench: N={self.n} m={self.m} repeats={self.repeats} calls={self.calls}",
            f"hassanat_component per 1e6 calls: mean {self.component.mean:.4f} s, p95 {self.component.p95:.4f} s",
            f"full ranking of {self.n} points: mean {self.ranking.mean * 1e3:.4f} ms, p95 {self.ranking.p95 * 1e3:.4f} ms",
            f"ranking digest: {self.digest}",
        ]


def _timing(samples: List[float]) -> Timing:
    arr = np.asarray(samples, dtype=np.float64)
    return Timing(mean=float(arr.mean()), p95=float(np.percentile(arr, 95)))


def _time_once(fn: Callable[[], object]) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def run_bench(n: int, m: int, repeats: int = 5, calls: int = 100_000, seed: int = 42) -> BenchReport:
    if n < 1 or m < 1:
        raise InvalidArgumentError(f"bench needs N >= 1 and m >= 1, got N={n} m={m}")
    if repeats < 1 or calls < 1:
        raise InvalidArgumentError(f"repeats and calls must be >= 1, got {repeats} / {calls}")

    rng = np.random.default_rng(seed)
    # 一半負值，兩個分支都會走到
    train = rng.uniform(-10.0, 10.0, size=(n, m))
    query = rng.uniform(-10.0, 10.0, size=m)
    labels = rng.integers(0, 3, size=n)
    pairs = rng.uniform(-10.0, 10.0, size=(calls, 2)).tolist()

    def _components():
        for a, b in pairs:
            hassanat_component(a, b)

    ranked_holder = []

    def _rank():
        d = pairwise_distances(MetricId.HASSANAT, train, query)
        ranked_holder.append(rank_by_distance(d, labels, ("a", "b", "c")))

    comp_samples = [_time_once(_components) * (PER_CALLS / calls) for _ in range(repeats)]
    rank_samples = [_time_once(_rank) for _ in range(repeats)]

    h = hashlib.sha256()
    last = ranked_holder[-1]
    h.update(last.train_indices.tobytes())
    h.update(last.distances.tobytes())

    report = BenchReport(
        n=n,
        m=m,
        repeats=repeats,
        calls=calls,
        component=_timing(comp_samples),
        ranking=_timing(rank_samples),
        digest=h.hexdigest(),
    )
    logger.info("bench done: N=%d m=%d digest=%s", n, m, report.digest[:12])
    return report
