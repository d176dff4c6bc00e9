#!/usr/bin/env python3
"""
Test script for density-matrix JSON import/export
"""

import io
import json

import numpy as np
import pytest

from chsh_toolkit.core.errors import StateFormatError, StateValidationError
from chsh_toolkit.models.qstate import bell_projector, make_rng, sample_state
from chsh_toolkit.models.state_io import (
    dumps_state,
    load_schema,
    matrix_to_pairs,
    pairs_to_matrix,
    parse_state,
    read_state,
    validate_state_data,
    write_state,
)


def _identity_document():
    rho = np.eye(4) / 4.0
    return {"rho": matrix_to_pairs(rho)}


def test_schema_loads():
    schema = load_schema()
    assert schema["required"] == ["rho"]


def test_pairs_convention():
    pairs = matrix_to_pairs(np.array([[1.0 + 2.0j, 0.0], [0.0, -1.0j]]))
    assert pairs == [[[1.0, 2.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, -1.0]]]
    np.testing.assert_array_equal(pairs_to_matrix(pairs), np.array([[1.0 + 2.0j, 0.0], [0.0, -1.0j]]))


def test_parse_identity_document():
    rho = parse_state(_identity_document())
    np.testing.assert_allclose(rho.matrix, np.eye(4) / 4.0)


def test_file_round_trip(tmp_path):
    """Write a state to disk and read it back"""
    rho = sample_state(make_rng(2024, 0))
    path = tmp_path / "state.json"
    write_state(rho, path)
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    assert len(data["rho"]) == 4
    assert all(len(row) == 4 and all(len(z) == 2 for z in row) for row in data["rho"])
    back = read_state(path)
    np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-15)


def test_read_from_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(dumps_state(parse_state({"rho": matrix_to_pairs(bell_projector("phi+"))}))))
    rho = read_state("-")
    np.testing.assert_allclose(rho.matrix, bell_projector("phi+"), atol=1e-15)


def test_write_to_stdout(capsys):
    write_state(parse_state(_identity_document()), "-")
    out = capsys.readouterr().out
    assert json.loads(out) == _identity_document()


@pytest.mark.parametrize(
    "document",
    [
        {},
        {"rho": [[[0.25, 0.0]] * 4] * 3},
        {"rho": [[[0.25, 0.0]] * 3] * 4},
        {"rho": [[[0.25, 0.0, 0.0]] * 4] * 4},
        {"rho": [[["0.25", 0.0]] * 4] * 4},
        {"state": [[[0.25, 0.0]] * 4] * 4},
    ],
)
def test_malformed_documents_rejected(document):
    with pytest.raises(StateFormatError):
        validate_state_data(document)
    with pytest.raises(StateFormatError):
        parse_state(document)


def test_non_state_matrix_rejected():
    document = {"rho": matrix_to_pairs(np.diag([0.7, 0.5, 0.0, -0.2]))}
    with pytest.raises(StateValidationError):
        parse_state(document)


def test_invalid_json_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"rho\": [", encoding="utf-8")
    with pytest.raises(StateFormatError):
        read_state(path)


def test_missing_file_raises_os_error(tmp_path):
    with pytest.raises(OSError):
        read_state(tmp_path / "missing.json")
