"""
State JSON Module

Reads and writes density matrices in the toolkit's JSON format:
``{"rho": [[[re, im] x 4] x 4]}``, row-major in the basis |00>, |01>, |10>, |11>.
The format is described by density_matrix_schema.json next to this file.
"""

import json
import sys
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

import jsonschema
import numpy as np

from ..core.config import Tolerances
from ..core.errors import StateFormatError, StateValidationError
from .qstate import DensityMatrix

SCHEMA_PATH = Path(__file__).parent / "density_matrix_schema.json"

PathLike = Union[str, Path]


@lru_cache(maxsize=1)
def load_schema() -> Dict[str, Any]:
    with open(SCHEMA_PATH, "r", encoding="utf-8") as f:
        return json.load(f)


def matrix_to_pairs(matrix: np.ndarray) -> List:
    """Convert a complex matrix to nested lists of [re, im] pairs"""
    arr = np.asarray(matrix, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def pairs_to_matrix(pairs: Any, shape: Optional[tuple] = None) -> np.ndarray:
    """Convert nested [re, im] pairs back to a complex matrix"""
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise StateFormatError(f"expected rows of [re, im] pairs, got array of shape {arr.shape}")
    if shape is not None and arr.shape[:2] != tuple(shape):
        raise StateFormatError(f"expected a {shape[0]}x{shape[1]} matrix, got {arr.shape[0]}x{arr.shape[1]}")
    return arr[..., 0] + 1j * arr[..., 1]


def validate_state_data(data: Any) -> None:
    """
    Check a decoded JSON document against the density-matrix schema

    Raises:
        StateFormatError: the document does not follow the schema
    """
    try:
        jsonschema.validate(instance=data, schema=load_schema())
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise StateFormatError(f"invalid state document at {location}: {e.message}") from None


def parse_state(data: Any, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
    """
    Build a DensityMatrix from a decoded JSON document

    Args:
        data: The decoded document
        tolerances: Validation tolerances for the ingested matrix

    Returns:
        Validated DensityMatrix
    """
    validate_state_data(data)
    matrix = pairs_to_matrix(data["rho"], shape=(4, 4))
    return DensityMatrix.ingest(matrix, tolerances)


def state_to_data(rho: DensityMatrix) -> Dict[str, Any]:
    return {"rho": matrix_to_pairs(rho.matrix)}


def _open_input(path: PathLike) -> TextIO:
    if str(path) == "-":
        return sys.stdin
    return open(path, "r", encoding="utf-8")


def read_state(path: PathLike, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
    """
    Read a state JSON file (``-`` reads standard input)

    Raises:
        StateFormatError: unreadable JSON or schema violation
        StateValidationError: the matrix is not a density matrix
        OSError: the file cannot be opened
    """
    stream = _open_input(path)
    try:
        data = json.load(stream)
    except json.JSONDecodeError as e:
        raise StateFormatError(f"invalid JSON in {path}: {e}") from None
    finally:
        if stream is not sys.stdin:
            stream.close()
    return parse_state(data, tolerances)


def dumps_state(rho: DensityMatrix) -> str:
    return json.dumps(state_to_data(rho))


def write_state(rho: DensityMatrix, path: PathLike) -> None:
    """Write a state JSON file (``-`` writes standard output)"""
    text = dumps_state(rho)
    if str(path) == "-":
        sys.stdout.write(text + "\n")
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text + "\n")


__all__ = [
    "StateFormatError",
    "StateValidationError",
    "dumps_state",
    "matrix_to_pairs",
    "pairs_to_matrix",
    "parse_state",
    "read_state",
    "state_to_data",
    "validate_state_data",
    "write_state",
]
