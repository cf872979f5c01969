import logging
from pathlib import Path

import numpy as np
import pytest
from sqlalchemy.orm import sessionmaker

from nnbench.commands._options import HANDLER_NAME
from nnbench.db import init_db, make_engine
from nnbench.services.dataset import Dataset
from nnbench.settings import settings

FIXTURES = Path(__file__).parent / "fixtures"
IRIS_CSV = settings.RESOURCES_DIR / "data" / "iris.csv"


@pytest.fixture(autouse=True)
def _drop_cli_log_handler():
    yield
    root = logging.getLogger()
    for h in list(root.handlers):
        if h.get_name() == HANDLER_NAME:
            root.removeHandler(h)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def iris_csv() -> Path:
    return IRIS_CSV


@pytest.fixture
def db_session():
    engine = make_engine("sqlite://")
    init_db(bind=engine)
    Session = sessionmaker(bind=engine, autoflush=False, autocommit=False, future=True)
    with Session() as s:
        yield s
    engine.dispose()


@pytest.fixture
def memory_sessionmaker():
    engine = make_engine("sqlite://")
    init_db(bind=engine)
    yield sessionmaker(bind=engine, autoflush=False, autocommit=False, future=True)
    engine.dispose()


def make_clusters(n_per_class: int = 10, classes: int = 3, m: int = 2, spread: float = 0.0, seed: int = 0) -> Dataset:
    """Well separated clusters centred at 100·c on every axis."""
    rng = np.random.default_rng(seed)
    feats, labels = [], []
    for c in range(classes):
        centre = np.full(m, 100.0 * c)
        for _ in range(n_per_class):
            feats.append(centre + rng.uniform(-spread, spread, size=m))
            labels.append(c)
    return Dataset(
        name="clusters",
        features=np.array(feats),
        labels=np.array(labels),
        class_names=tuple(f"c{c}" for c in range(classes)),
    )


@pytest.fixture
def clusters() -> Dataset:
    return make_clusters()


def write_manifest(path: Path, data_dir: Path, blocks: list[dict]) -> Path:
    lines = []
    for b in blocks:
        for k, v in b.items():
            lines.append(f"{k} = {v}")
        lines.append("")
    path.write_text("\n".join(lines), encoding="utf-8")
    return path
