"""CSV schema validation errors name the offending column."""

import pytest

from vise_figures import SchemaError, read_columns
from vise_figures.schema import read_mask


def test_missing_column_named(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,egoist,society\n0.0,1.0,2.0\n")
    with pytest.raises(SchemaError, match="'group'"):
        read_columns(str(path), ("t", "egoist", "group", "society"))


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(SchemaError, match="empty"):
        read_columns(str(path), ("t",))


def test_header_only_file(tmp_path):
    path = tmp_path / "headers.csv"
    path.write_text("t,egoist,group,society\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_columns(str(path), ("t", "egoist", "group", "society"))


def test_reads_numeric_columns(tmp_path):
    path = tmp_path / "ok.csv"
    path.write_text("delta,t0,case\n0.1,-0.01,both\n0.2,-0.02,both\n")
    data = read_columns(str(path), ("delta", "t0"))
    assert list(data["delta"]) == [0.1, 0.2]
    assert list(data["t0"]) == [-0.01, -0.02]


def test_mask_reader(tmp_path):
    path = tmp_path / "mask.csv"
    path.write_text("mu_over_sigma,delta=0,delta=0.5\n-0.5,0,1\n-0.4,0,0\n")
    mu, deltas, mask = read_mask(str(path))
    assert list(mu) == [-0.5, -0.4]
    assert list(deltas) == [0.0, 0.5]
    assert mask.tolist() == [[0, 1], [0, 0]]


def test_mask_requires_mu_column(tmp_path):
    path = tmp_path / "mask.csv"
    path.write_text("x,delta=0\n1,0\n")
    with pytest.raises(SchemaError, match="'mu_over_sigma'"):
        read_mask(str(path))


def test_mask_requires_delta_columns(tmp_path):
    path = tmp_path / "mask.csv"
    path.write_text("mu_over_sigma,share\n-0.5,0\n")
    with pytest.raises(SchemaError, match="delta="):
        read_mask(str(path))
