import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxges.io import (FileFormatError, atomic_write_text, format_kets, load_doc, matrix_from_doc, matrix_to_doc,
                       parse_kets, read_matrix, write_matrix)
from maxges.linalg import ExactMatrix, GaussianRational

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
gaussians = st.builds(GaussianRational, fractions, fractions)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_exact_round_trip(rows, cols, data):
    entries = [[data.draw(gaussians) for _ in range(cols)] for _ in range(rows)]
    m = ExactMatrix(entries, cols)
    back = matrix_from_doc(matrix_to_doc(m))
    assert isinstance(back, ExactMatrix) and back == m


def test_float_round_trip_and_backend_inference(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    path = tmp_path / "m.json"
    write_matrix(path, a, kind="basis", n=None)
    back, doc = read_matrix(path)
    assert doc["backend"] == "float" and "n" not in doc
    np.testing.assert_array_equal(back, a)
    doc.pop("backend")
    np.testing.assert_array_equal(matrix_from_doc(doc), a)
    assert isinstance(matrix_from_doc({"rows": 1, "cols": 2, "entries": [["1", "-2/3"]]}), ExactMatrix)


@pytest.mark.parametrize("doc", [
    {"rows": 2, "cols": 2, "entries": [["1", "0"]]},
    {"rows": 1, "cols": 2, "entries": [["1", "x"]]},
    {"cols": 2, "entries": [["1", "0"]]},
    {"rows": 1, "cols": 1, "entries": [["1"]], "backend": "mod7"},
])
def test_malformed_docs(doc):
    with pytest.raises(FileFormatError):
        matrix_from_doc(doc)


def test_load_doc_errors(tmp_path):
    with pytest.raises(FileFormatError):
        load_doc(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(FileFormatError):
        load_doc(bad)
    bad.write_text("[1, 2]")
    with pytest.raises(FileFormatError):
        load_doc(bad)


def test_kets():
    assert parse_kets("2|001>-|010>", 2) == [0, 2, -1, 0, 0, 0, 0, 0]
    assert parse_kets("|0> + |2>", 3) == [1, 0, 1]
    assert parse_kets("|00>+|00>", 2) == [2, 0, 0, 0]
    for bad in ["|001>|010>", "", "|002>", "|01>+|001>", "2 x |01>"]:
        with pytest.raises(FileFormatError):
            parse_kets(bad, 2)
    with pytest.raises(FileFormatError):
        parse_kets("|01>", 2, n=3)


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9).filter(any))
def test_kets_round_trip(vec):
    assert parse_kets(format_kets(vec, 3, 2), 3, 2) == vec


def test_atomic_write_leaves_no_temp(tmp_path):
    path = tmp_path / "sub" / "out.txt"
    atomic_write_text(path, "one")
    atomic_write_text(path, "two")
    assert path.read_text() == "two"
    assert os.listdir(path.parent) == ["out.txt"]
