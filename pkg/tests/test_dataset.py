import numpy as np
import pytest
from hypothesis import given, strategies as st

from nnbench.errors import (
    ConfigError,
    DatasetFormatError,
    DatasetIOError,
    DatasetParseError,
    DimensionError,
    InvalidArgumentError,
)
from nnbench.services.dataset import (
    ClassLabel,
    Dataset,
    Normalization,
    load_csv,
    normalize_minmax,
    train_test_split,
)


def _ds(features, labels=None, name="t"):
    features = np.asarray(features, dtype=float)
    if labels is None:
        labels = [0] * len(features)
    n_classes = max(labels) + 1
    return Dataset(name=name, features=features, labels=labels, class_names=tuple(f"c{i}" for i in range(n_classes)))


# ── load_csv

def test_load_small_csv(tmp_path):
    p = tmp_path / "small.csv"
    p.write_text("1,2,A\n3,4,B\n5,6,A\n")
    ds = load_csv(p, label_column=2)
    assert len(ds) == 3
    assert ds.feature_count == 2
    assert ds.class_count == 2
    assert ds.labels.tolist() == [0, 1, 0]
    assert ds.class_names == ("A", "B")
    assert ds.label(1) == ClassLabel(1, "B")
    assert ds.name == "small"


def test_load_negative_label_column_and_header(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("class,x,y\n7,0.5,1.5\n\n3,2.5,-1\n")
    ds = load_csv(p, label_column=0, has_header=True, name="hdr")
    assert ds.name == "hdr"
    assert ds.features.tolist() == [[0.5, 1.5], [2.5, -1.0]]
    # 數字標籤視為不透明字串
    assert ds.class_names == ("7", "3")

    p2 = tmp_path / "last.csv"
    p2.write_text("1,2,x\n3,4,y\n")
    assert load_csv(p2, label_column=-1).class_names == ("x", "y")


def test_load_iris(iris_csv):
    ds = load_csv(iris_csv, label_column=-1)
    assert (len(ds), ds.feature_count, ds.class_count) == (150, 4, 3)
    assert ds.features.min() == pytest.approx(0.1)
    assert ds.features.max() == pytest.approx(7.9)
    assert sorted(set(ds.labels.tolist())) == [0, 1, 2]


def test_empty_file_is_format_error(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    with pytest.raises(DatasetFormatError):
        load_csv(p, label_column=0)


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(DatasetIOError):
        load_csv(tmp_path / "nope.csv", label_column=0)


def test_ragged_row(tmp_path):
    p = tmp_path / "ragged.csv"
    p.write_text("1,2,A\n3,B\n")
    with pytest.raises(DatasetFormatError, match="row 2"):
        load_csv(p, label_column=-1)


def test_parse_error_reports_row_and_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2,A\n3,?,B\n")
    with pytest.raises(DatasetParseError) as ei:
        load_csv(p, label_column=2)
    assert (ei.value.row, ei.value.column) == (2, 2)
    assert "row 2, column 2" in ei.value.detail


def test_non_finite_cell_rejected(tmp_path):
    p = tmp_path / "inf.csv"
    p.write_text("1,inf,A\n")
    with pytest.raises(DatasetParseError):
        load_csv(p, label_column=2)


def test_label_column_out_of_range(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("1,2,A\n")
    with pytest.raises(DatasetFormatError, match="label column"):
        load_csv(p, label_column=5)


def test_dataset_is_read_only(clusters):
    with pytest.raises(ValueError):
        clusters.features[0, 0] = 1.0


def test_dataset_rejects_mismatched_labels():
    with pytest.raises(DimensionError):
        Dataset(name="x", features=np.zeros((3, 2)), labels=[0, 0], class_names=("a",))


# ── normalize_minmax

def test_minmax_examples():
    train = _ds([[0.0, 7.0], [5.0, 7.0], [10.0, 7.0]])
    test = _ds([[12.0, 7.0], [-3.0, 9.0]])
    ntrain, ntest = normalize_minmax(train, test)
    assert ntrain.features[:, 0].tolist() == [0.0, 0.5, 1.0]
    assert ntrain.features[:, 1].tolist() == [0.0, 0.0, 0.0]
    assert ntest.features[:, 0].tolist() == [1.0, 0.0]
    assert ntest.features[:, 1].tolist() == [0.0, 0.0]


def test_minmax_fit_on_all():
    train = _ds([[0.0], [10.0]])
    test = _ds([[20.0]])
    ntrain, ntest = normalize_minmax(train, test, fit_on="all")
    assert ntrain.features[:, 0].tolist() == [0.0, 0.5]
    assert ntest.features[:, 0].tolist() == [1.0]


def test_minmax_idempotent_on_unit_data():
    rng = np.random.default_rng(5)
    f = rng.uniform(0, 1, size=(20, 3))
    f[0] = 0.0
    f[1] = 1.0
    train = _ds(f)
    out, _ = normalize_minmax(train, train)
    assert np.allclose(out.features, f, atol=1e-12, rtol=0)


def test_minmax_none_is_passthrough(clusters):
    a, b = normalize_minmax(clusters, clusters, fit_on=Normalization.NONE)
    assert a is clusters and b is clusters


def test_normalization_parse():
    assert Normalization.parse("TRAIN") is Normalization.TRAIN
    with pytest.raises(ConfigError):
        Normalization.parse("zscore")


# ── train_test_split

def test_split_sizes(iris_csv):
    ds = load_csv(iris_csv, label_column=-1)
    s = train_test_split(ds, 0.3, 42)
    assert (len(s.test), len(s.train)) == (45, 105)
    assert s.train.class_count == 3


def test_split_is_deterministic(clusters):
    a = train_test_split(clusters, 0.3, 42)
    b = train_test_split(clusters, 0.3, 42)
    assert a.test_indices == b.test_indices
    assert a.train.features.tobytes() == b.train.features.tobytes()


@pytest.mark.parametrize("n", [10, 11, 150])
def test_split_partition_all_seeds(n):
    ds = _ds(np.arange(n, dtype=float).reshape(-1, 1))
    for seed in range(100):
        s = train_test_split(ds, 0.3, seed)
        test = set(int(v) for v in s.test.features[:, 0])
        train = set(int(v) for v in s.train.features[:, 0])
        assert not (test & train)
        assert test | train == set(range(n))
        assert list(s.test_indices) == sorted(s.test_indices)


@given(st.integers(min_value=2, max_value=200), st.floats(min_value=0.05, max_value=0.95), st.integers(0, 2**31))
def test_split_partition_property(n, fraction, seed):
    ds = _ds(np.arange(n, dtype=float).reshape(-1, 1))
    n_test = int(np.floor(fraction * n + 0.5))
    if n_test < 1 or n_test >= n:
        with pytest.raises(InvalidArgumentError):
            train_test_split(ds, fraction, seed)
        return
    s = train_test_split(ds, fraction, seed)
    assert len(s.test) == n_test
    assert len(s.train) + len(s.test) == n


@pytest.mark.parametrize("fraction", [0.0, 1.0, -0.1, 1.5])
def test_split_rejects_bad_fraction(clusters, fraction):
    with pytest.raises(InvalidArgumentError):
        train_test_split(clusters, fraction, 0)


def test_split_rejects_empty_side():
    ds = _ds([[0.0], [1.0]])
    with pytest.raises(InvalidArgumentError):
        train_test_split(ds, 0.1, 0)


def test_split_rejects_negative_seed(clusters):
    with pytest.raises(InvalidArgumentError):
        train_test_split(clusters, 0.3, -1)
