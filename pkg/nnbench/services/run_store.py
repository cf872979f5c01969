# nnbench/services/run_store.py
from __future__ import annotations

import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Optional

import numpy as np
from sqlalchemy.orm import Session

from ..errors import ConfigError
from ..models import DatasetFingerprint, ExperimentRecord, RunCell
from ..schemas import ExperimentConfig
from ..utils import Utils
from .dataset import Dataset
from .evaluation import AccuracyTable

logger = logging.getLogger(__name__)


def config_hash(config: ExperimentConfig) -> str:
    payload = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def persist_fingerprint(db: Session, path: Path, dataset: Dataset) -> str:
    file_hash = Utils.sha256_file(path)
    # upsert
    fp = db.get(DatasetFingerprint, file_hash)
    if not fp:
        fp = DatasetFingerprint(
            file_hash=file_hash,
            name=dataset.name,
            path=str(path),
            examples=len(dataset),
            features=dataset.feature_count,
            classes=dataset.class_count,
            created_at=datetime.now(timezone.utc),
        )
        db.add(fp)
        db.commit()
    return file_hash


def start_experiment(db: Session, config: ExperimentConfig, datasets: list[str]) -> ExperimentRecord:
    exp = ExperimentRecord(
        metric=config.metric.value,
        runs=config.runs,
        test_fraction=config.test_fraction,
        base_seed=config.base_seed,
        normalization=config.normalization.value,
        classifiers=config.column_names,
        datasets=list(datasets),
        config_hash=config_hash(config),
        status="running",
        created_at=datetime.now(timezone.utc),
    )
    db.add(exp)
    db.commit()
    return exp


def record_table(
    db: Session,
    exp: ExperimentRecord,
    table: AccuracyTable,
    config: ExperimentConfig,
    fingerprints: Optional[Dict[str, str]] = None,
) -> int:
    if table.per_run is None:
        raise ConfigError("only tables produced by run_experiment carry per-run results")
    fingerprints = fingerprints or {}
    n = 0
    for d, name in enumerate(table.datasets):
        for r in range(table.per_run.shape[2]):
            for c, column in enumerate(table.columns):
                db.add(RunCell(
                    experiment_id=exp.id,
                    dataset_hash=fingerprints.get(name),
                    dataset=name,
                    run_index=r,
                    seed=config.seed_for_run(r),
                    classifier=column,
                    accuracy=float(table.per_run[d, c, r]),
                ))
                n += 1
    exp.status = "succeeded"
    exp.completed_at = datetime.now(timezone.utc)
    db.commit()
    logger.info("recorded experiment %d: %d cells", exp.id, n)
    return n


def fail_experiment(db: Session, exp: ExperimentRecord, err: str) -> None:
    exp.status = "failed"
    exp.error = err
    exp.completed_at = datetime.now(timezone.utc)
    db.commit()


def load_accuracy_table(db: Session, experiment_id: int) -> AccuracyTable:
    exp: Optional[ExperimentRecord] = db.get(ExperimentRecord, experiment_id)
    if not exp:
        raise ConfigError(f"experiment {experiment_id} not found in run ledger")
    if exp.status != "succeeded":
        raise ConfigError(f"experiment {experiment_id} has status '{exp.status}'")

    datasets = list(exp.datasets)
    columns = list(exp.classifiers)
    per_run = np.zeros((len(datasets), len(columns), exp.runs), dtype=np.float64)
    for cell in exp.cells:
        per_run[datasets.index(cell.dataset), columns.index(cell.classifier), cell.run_index] = cell.accuracy
    return AccuracyTable(datasets=datasets, columns=columns, cells=per_run.mean(axis=2), per_run=per_run)
