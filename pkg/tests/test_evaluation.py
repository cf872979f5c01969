import numpy as np
import pytest

from nnbench.errors import InvalidArgumentError
from nnbench.schemas import ExperimentConfig
from nnbench.services.classifiers import ClassifierSpec
from nnbench.services.dataset import ClassLabel, load_csv
from nnbench.services.evaluation import (
    AccuracyTable,
    accuracy,
    delta_table,
    run_experiment,
    stability_table,
)
from nnbench.services.manifest import load_manifest
from nnbench.services.table_export import read_accuracy_csv
from tests.conftest import make_clusters


def _table(rows, columns=("1NN", "IINC", "ENN"), names=None):
    names = names or [f"d{i}" for i in range(len(rows))]
    return AccuracyTable(list(names), list(columns), np.array(rows, dtype=float))


@pytest.fixture(scope="module")
def iris():
    return load_manifest().load(load_manifest().get("iris"))


# ── accuracy

def test_accuracy_values():
    truth = [0] * 10
    assert accuracy([0] * 9 + [1], truth) == 0.9
    assert accuracy(truth, truth) == 1.0
    assert accuracy([1] * 10, truth) == 0.0


def test_accuracy_accepts_class_labels():
    a, b = ClassLabel(0, "A"), ClassLabel(1, "B")
    assert accuracy([a, b], [a, a]) == 0.5


def test_accuracy_errors():
    with pytest.raises(InvalidArgumentError):
        accuracy([0], [0, 1])
    with pytest.raises(InvalidArgumentError):
        accuracy([], [])


# ── run_experiment

def test_zero_distance_self_match_is_perfect():
    ds = make_clusters(n_per_class=10, classes=3, spread=0.0)
    cfg = ExperimentConfig(datasets=["clusters"], classifiers=["1nn"], runs=1, metric="hassanat")
    table = run_experiment(cfg, {"clusters": ds})
    assert table.cells.tolist() == [[1.0]]


def test_run_experiment_shape_and_bounds():
    ds = make_clusters(n_per_class=15, classes=3, spread=60.0, seed=4)
    cfg = ExperimentConfig(datasets=["clusters"], runs=3)
    table = run_experiment(cfg, {"clusters": ds})
    assert table.columns == ["1NN", "3NN", "5NN", "7NN", "9NN", "√nNN", "IINC", "ENN"]
    assert table.per_run.shape == (1, 8, 3)
    assert np.all((table.cells >= 0) & (table.cells <= 1))
    assert np.allclose(table.cells, table.per_run.mean(axis=2))


def test_thread_count_does_not_change_results():
    ds = make_clusters(n_per_class=12, classes=3, spread=70.0, seed=9)
    cfg = ExperimentConfig(datasets=["clusters"], runs=4, threads=1)
    single = run_experiment(cfg, {"clusters": ds})
    multi = run_experiment(cfg.model_copy(update={"threads": 4}), {"clusters": ds})
    assert single.per_run.tobytes() == multi.per_run.tobytes()


def test_adding_a_column_keeps_existing_cells():
    ds = make_clusters(n_per_class=12, classes=2, spread=80.0, seed=3)
    base = run_experiment(ExperimentConfig(datasets=["clusters"], classifiers=["1nn", "iinc"], runs=2), {"clusters": ds})
    more = run_experiment(
        ExperimentConfig(datasets=["clusters"], classifiers=["1nn", "iinc", "enn"], runs=2), {"clusters": ds}
    )
    assert more.cells[:, :2].tolist() == base.cells.tolist()


def test_missing_dataset_is_an_error():
    with pytest.raises(InvalidArgumentError, match="iris"):
        run_experiment(ExperimentConfig(datasets=["iris"]), {})


def test_normalized_run_on_clusters():
    ds = make_clusters(n_per_class=10, classes=2, spread=0.0)
    cfg = ExperimentConfig(datasets=["clusters"], classifiers=["1nn"], runs=2, normalization="train")
    assert run_experiment(cfg, {"clusters": ds}).cells.tolist() == [[1.0]]


def test_iris_hassanat_1nn_band(iris):
    cfg = ExperimentConfig(datasets=["iris"], classifiers=[ClassifierSpec.knn(1)], metric="hassanat", runs=10)
    cell = run_experiment(cfg, {"iris": iris}).cell("iris", "1NN")
    assert 0.91 <= cell <= 0.97


def test_iris_manhattan_1nn_band(iris):
    cfg = ExperimentConfig(datasets=["iris"], classifiers=["1nn"], metric="manhattan", runs=10)
    cell = run_experiment(cfg, {"iris": iris}).cell("iris", "1NN")
    assert 0.92 <= cell <= 0.98


# ── UCI reproductions (files not bundled)

def _uci(name):
    m = load_manifest()
    entry = m.get(name)
    if not m.resolve_path(entry).is_file():
        pytest.skip(f"{entry.path} not present in {m.data_dir}")
    return m.load(entry)


def _delta_1col(ds, column):
    cfg = ExperimentConfig(datasets=[ds.name], classifiers=[column.lower()], metric="manhattan")
    base = run_experiment(cfg, {ds.name: ds})
    treat = run_experiment(cfg.with_metric("hassanat"), {ds.name: ds})
    return delta_table(base, treat).cells[0, 0]


@pytest.mark.slow
def test_banknote_all_columns_high():
    ds = _uci("banknote")
    for metric in ("manhattan", "hassanat"):
        table = run_experiment(ExperimentConfig(datasets=["banknote"], metric=metric), {"banknote": ds})
        assert table.cells.min() >= 0.97


@pytest.mark.slow
def test_wine_1nn_delta():
    assert _delta_1col(_uci("wine"), "1NN") >= 0.10


@pytest.mark.slow
def test_bcw_1nn_delta():
    assert _delta_1col(_uci("bcw"), "1NN") >= 0.25


@pytest.mark.slow
def test_heart_7nn_delta():
    assert _delta_1col(_uci("heart"), "7NN") >= 0.07


# ── delta / stability

def test_delta_of_identical_tables_is_zero():
    t = _table([[0.9, 0.8, 0.7], [0.5, 0.6, 0.7]])
    d = delta_table(t, t)
    assert not d.cells.any()
    assert not d.average.any()


def test_delta_values_and_alignment():
    base = _table([[0.69], [0.61]], columns=["1NN"], names=["australian", "bcw"])
    treat = _table([[0.96], [0.82]], columns=["1NN"], names=["bcw", "australian"])
    d = delta_table(base, treat)
    assert d.datasets == ["australian", "bcw"]
    assert d.cells[:, 0] == pytest.approx([0.13, 0.35])


def test_delta_rejects_mismatched_tables():
    with pytest.raises(InvalidArgumentError):
        delta_table(_table([[0.5, 0.5, 0.5]]), _table([[0.5, 0.5]], columns=["1NN", "IINC"]))


def test_stability_basic():
    s = stability_table(_table([[0.82, 0.86, 0.87], [0.9, 0.9, 0.8]]))
    assert s.best.tolist() == [0.87, 0.9]
    assert (s.deviations >= 0).all()
    assert (s.deviations.min(axis=1) == 0).all()
    assert s.sum == pytest.approx(s.deviations.sum(axis=0), abs=1e-12)
    assert s.maximum == pytest.approx(s.deviations.max(axis=0), abs=1e-12)
    assert s.deviations[0, 0] == pytest.approx(0.05)


def test_stability_single_row():
    s = stability_table(_table([[0.5, 0.7, 0.6]]))
    assert s.sum.tolist() == s.maximum.tolist()


def test_stability_round_first():
    t = _table([[0.874, 0.866, 0.861]])
    full = stability_table(t)
    rounded = stability_table(t, round_first=True)
    assert full.deviations[0, 2] == pytest.approx(0.013)
    assert rounded.deviations[0].tolist() == [0.0, 0.0, 0.01]


def test_stability_of_printed_hassanat_table(fixtures_dir):
    acc = read_accuracy_csv(fixtures_dir / "table3_hassanat.csv")
    assert len(acc.datasets) == 28
    s = stability_table(acc, round_first=True)
    col = acc.columns.index
    assert s.deviations[acc.datasets.index("Australian"), col("1NN")] == pytest.approx(0.05)
    assert s.maximum[col("ENN")] == pytest.approx(0.04, abs=1e-9)
    assert s.sum[col("IINC")] == pytest.approx(0.34, abs=1e-9)
    assert s.sum[col("ENN")] == pytest.approx(0.26, abs=1e-9)


def test_stability_of_best_minus_deviation_table(fixtures_dir):
    acc = read_accuracy_csv(fixtures_dir / "table5_reconstructed.csv")
    s = stability_table(acc, round_first=True)
    col = acc.columns.index
    assert s.sum[col("ENN")] == pytest.approx(0.28, abs=1e-9)
    assert s.maximum[col("ENN")] == pytest.approx(0.04, abs=1e-9)
    assert s.sum[col("IINC")] == pytest.approx(0.34, abs=1e-9)
    assert s.sum[col("√nNN")] == pytest.approx(1.19, abs=1e-9)
    assert s.maximum[col("9NN")] == pytest.approx(0.28, abs=1e-9)


def test_stability_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        stability_table(AccuracyTable([], ["1NN"], np.zeros((0, 1))))


def test_accuracy_table_validates():
    with pytest.raises(InvalidArgumentError):
        _table([[1.2, 0.5, 0.5]])
    with pytest.raises(InvalidArgumentError):
        _table([[0.5, 0.5]])
