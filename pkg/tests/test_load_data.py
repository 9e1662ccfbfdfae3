"""Tests for CSV loading."""

import numpy as np
import pytest

from nggp_mix import load_csv
from nggp_mix.core.errors import DataFormatError


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_plain_numbers(tmp_path):
    data = load_csv(write(tmp_path, "1.5,2\n-3,4e-1\n"))
    np.testing.assert_array_equal(data, [[1.5, 2.0], [-3.0, 0.4]])


def test_header_and_blank_lines(tmp_path):
    data = load_csv(write(tmp_path, "x\n\n0.1\n0.2\n\n"))
    assert data.shape == (2, 1)


def test_single_column_is_two_dimensional(tmp_path):
    assert load_csv(write(tmp_path, "1\n2\n3\n")).shape == (3, 1)


def test_empty_file(tmp_path):
    with pytest.raises(DataFormatError, match="no observations"):
        load_csv(write(tmp_path, "\n\n"))


def test_header_only(tmp_path):
    with pytest.raises(DataFormatError, match="header"):
        load_csv(write(tmp_path, "x,y\n"))


def test_ragged_row_names_line(tmp_path):
    with pytest.raises(DataFormatError, match="line 3: expected 2 values, found 1"):
        load_csv(write(tmp_path, "1,2\n3,4\n5\n"))


def test_unparseable_value_names_line(tmp_path):
    with pytest.raises(DataFormatError, match="line 2"):
        load_csv(write(tmp_path, "1\nabc\n"))


def test_non_finite_values(tmp_path):
    with pytest.raises(DataFormatError, match="non-finite"):
        load_csv(write(tmp_path, "1\nnan\n"))


def test_missing_file(tmp_path):
    with pytest.raises(DataFormatError, match="Cannot read"):
        load_csv(tmp_path / "missing.csv")
