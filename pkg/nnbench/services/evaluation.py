# nnbench/services/evaluation.py
"""
重複切分實驗 + 結果表格：
  - run_experiment  -> AccuracyTable（資料集 × 分類器，各 run 平均）
  - delta_table     -> DeltaTable（treatment - baseline）
  - stability_table -> StabilityTable（與每個資料集最佳結果的差距，含 Sum / Maximum）
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import InvalidArgumentError
from ..schemas import ExperimentConfig
from .classifiers import ClassifierSpec, predict_ranked, rank_neighbors
from .dataset import ClassLabel, Dataset, Normalization, normalize_minmax, train_test_split
from .experiment_worker import ExperimentWorker, RunJob

logger = logging.getLogger(__name__)

TABLE_TOLERANCE = 1e-12


# ─────────────────────────────────────────────────────────
# 表格型別

@dataclass(frozen=True)
class AccuracyTable:
    datasets: List[str]
    columns: List[str]
    cells: np.ndarray                          # (D, C) 各 run 的平均
    per_run: Optional[np.ndarray] = field(default=None)  # (D, C, R)

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.float64)
        if cells.shape != (len(self.datasets), len(self.columns)):
            raise InvalidArgumentError(
                f"cells shape {cells.shape} does not match {len(self.datasets)} datasets × {len(self.columns)} columns"
            )
        if cells.size and (cells.min() < 0.0 or cells.max() > 1.0):
            raise InvalidArgumentError("accuracy cells must lie in [0, 1]")
        object.__setattr__(self, "cells", cells)

    @property
    def average(self) -> np.ndarray:
        return self.cells.mean(axis=0)

    def std(self) -> Optional[np.ndarray]:
        if self.per_run is None:
            return None
        return self.per_run.std(axis=2)

    def cell(self, dataset: str, column: str) -> float:
        return float(self.cells[self.datasets.index(dataset), self.columns.index(column)])

    def rounded(self, digits: int = 2) -> "AccuracyTable":
        return AccuracyTable(list(self.datasets), list(self.columns), np.round(self.cells, digits), self.per_run)

    def reindexed(self, datasets: Sequence[str], columns: Sequence[str]) -> "AccuracyTable":
        rows = [self.datasets.index(d) for d in datasets]
        cols = [self.columns.index(c) for c in columns]
        per_run = self.per_run[np.ix_(rows, cols)] if self.per_run is not None else None
        return AccuracyTable(list(datasets), list(columns), self.cells[np.ix_(rows, cols)], per_run)


@dataclass(frozen=True)
class DeltaTable:
    datasets: List[str]
    columns: List[str]
    cells: np.ndarray     # (D, C)
    average: np.ndarray   # (C,) treatment 平均 - baseline 平均


@dataclass(frozen=True)
class StabilityTable:
    datasets: List[str]
    columns: List[str]
    best: np.ndarray        # (D,)
    deviations: np.ndarray  # (D, C) >= 0，每列至少一個 0
    sum: np.ndarray         # (C,)
    maximum: np.ndarray     # (C,)


# ─────────────────────────────────────────────────────────
# 單一 run

def accuracy(predicted: Sequence, truth: Sequence) -> float:
    if len(predicted) != len(truth):
        raise InvalidArgumentError(f"length mismatch: {len(predicted)} predictions vs {len(truth)} labels")
    if len(truth) == 0:
        raise InvalidArgumentError("accuracy needs at least one prediction")

    def _id(x):
        return x.id if isinstance(x, ClassLabel) else x

    correct = sum(1 for p, t in zip(predicted, truth) if _id(p) == _id(t))
    return correct / len(truth)


def evaluate_split(
    train: Dataset,
    test: Dataset,
    config: ExperimentConfig,
    specs: Sequence[ClassifierSpec],
) -> np.ndarray:
    """對每個測試點排序一次，所有分類器共用同一份排序；回傳每個分類器的 accuracy。"""
    predicted: List[List[int]] = [[] for _ in specs]
    for x in test.features:
        ranked = rank_neighbors(train, x, config.metric)
        for j, spec in enumerate(specs):
            predicted[j].append(predict_ranked(ranked, spec).label.id)
    truth = test.labels.tolist()
    return np.array([accuracy(p, truth) for p in predicted], dtype=np.float64)


def _run_job(job: RunJob) -> np.ndarray:
    config: ExperimentConfig = job.config
    split = train_test_split(job.dataset, config.test_fraction, job.seed)
    train, test = split.train, split.test
    if config.normalization is not Normalization.NONE:
        train, test = normalize_minmax(train, test, fit_on=config.normalization)
    logger.debug("run %s #%d (seed %d): %d train / %d test", job.dataset.name, job.run_index, job.seed, len(train), len(test))
    return evaluate_split(train, test, config, config.classifiers)


# ─────────────────────────────────────────────────────────
# 整個實驗

def run_experiment(
    config: ExperimentConfig,
    datasets: Mapping[str, Dataset],
    progress: Optional[Callable[[int], None]] = None,
) -> AccuracyTable:
    """
    每個資料集 × 每個 run（seed = base_seed + run）各是一個 job，
    job 可平行執行，結果依 (資料集順序, run index) 放回，輸出與排程無關。
    """
    names = list(config.datasets) or list(datasets.keys())
    missing = [n for n in names if n not in datasets]
    if missing:
        raise InvalidArgumentError(f"datasets not loaded: {', '.join(missing)}")

    jobs: List[RunJob] = []
    for d, name in enumerate(names):
        for r in range(config.runs):
            jobs.append(RunJob(
                dataset_index=d,
                run_index=r,
                seed=config.seed_for_run(r),
                dataset=datasets[name],
                config=config,
            ))

    worker = ExperimentWorker(max_concurrency=config.threads)
    results = worker.run_all(jobs, _run_job, progress=progress)

    per_run = np.zeros((len(names), len(config.classifiers), config.runs), dtype=np.float64)
    for job, acc in zip(jobs, results):
        per_run[job.dataset_index, :, job.run_index] = acc

    table = AccuracyTable(
        datasets=names,
        columns=config.column_names,
        cells=per_run.mean(axis=2),
        per_run=per_run,
    )
    logger.info(
        "experiment done: metric=%s datasets=%d runs=%d columns=%d",
        config.metric.value, len(names), config.runs, len(table.columns),
    )
    return table


# ─────────────────────────────────────────────────────────
# 衍生表格

def delta_table(baseline: AccuracyTable, treatment: AccuracyTable) -> DeltaTable:
    if set(baseline.datasets) != set(treatment.datasets) or set(baseline.columns) != set(treatment.columns) \
            or len(baseline.datasets) != len(treatment.datasets) or len(baseline.columns) != len(treatment.columns):
        raise InvalidArgumentError("baseline and treatment tables must have the same datasets and columns")
    aligned = treatment.reindexed(baseline.datasets, baseline.columns)
    return DeltaTable(
        datasets=list(baseline.datasets),
        columns=list(baseline.columns),
        cells=aligned.cells - baseline.cells,
        average=aligned.average - baseline.average,
    )


def stability_table(acc: AccuracyTable, round_first: bool = False) -> StabilityTable:
    """
    round_first=True：先把每格四捨五入到 2 位再計算（與印出的表格相同的算術），
    差距也取到 2 位；否則全程以完整精度計算。
    """
    if not acc.datasets or not acc.columns:
        raise InvalidArgumentError("stability table needs a non-empty accuracy table")
    cells = np.round(acc.cells, 2) if round_first else acc.cells
    best = cells.max(axis=1)
    deviations = best[:, np.newaxis] - cells
    if round_first:
        deviations = np.round(deviations, 2)
    return StabilityTable(
        datasets=list(acc.datasets),
        columns=list(acc.columns),
        best=best,
        deviations=deviations,
        sum=deviations.sum(axis=0),
        maximum=deviations.max(axis=0),
    )
