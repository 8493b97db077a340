"""Matrix files.

A matrix file is a JSON document ``{"n": rows, "m": cols, "data": [...]}``
where ``data`` is a list of ``n`` rows, each a list of ``m`` ``[re, im]``
pairs. Python's float repr round-trips exactly, so write-then-read is
bitwise lossless. CSV is an export-only format with columns
``re_1,im_1,...,re_m,im_m``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ParseError


def matrix_to_doc(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    return {
        "n": M.shape[0],
        "m": M.shape[1],
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in M],
    }


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} in matrix file")


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ParseError(f"{where}: non-finite value")
    return float(v)


def matrix_from_doc(doc) -> np.ndarray:
    if not isinstance(doc, dict) or not {"n", "m", "data"} <= doc.keys():
        raise ParseError("matrix document needs keys n, m and data")
    n, m, data = doc["n"], doc["m"], doc["data"]
    if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
        raise DimensionMismatch(f"invalid dimensions n={n!r}, m={m!r}")
    if not isinstance(data, list) or len(data) != n:
        raise DimensionMismatch(f"expected {n} rows")
    M = np.empty((n, m), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != m:
            raise DimensionMismatch(f"row {i + 1}: expected {m} entries")
        for j, pair in enumerate(row):
            where = f"entry ({i + 1}, {j + 1})"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}: expected an [re, im] pair")
            M[i, j] = complex(_number(pair[0], where), _number(pair[1], where))
    return M


def read_matrix(path) -> np.ndarray:
    text = Path(path).read_text()
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return matrix_from_doc(doc)


def write_matrix(M, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_doc(M)) + "\n")


def write_matrix_csv(M, path) -> None:
    M = np.asarray(M, dtype=complex)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"{part}_{j + 1}" for j in range(M.shape[1]) for part in ("re", "im")])
        for row in M:
            w.writerow([repr(float(v)) for z in row for v in (z.real, z.imag)])
