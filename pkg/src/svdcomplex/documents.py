"""JSON interchange for complexes, decompositions and pseudoinverse complexes.

A complex document looks like::

    {"schema_version": "1", "field": "QQ", "ranks": [3, 5],
     "differentials": [[["1/2", "0", ...], ...]]}

``field`` is ``R53`` (numbers), ``QQ`` (strings ``"p/q"`` or ``"p"``) or ``Fp``
(integers, with an extra ``"modulus"``). Differentials are row-major; a
``0 x k`` matrix is written as ``[]`` and its shape comes from ``ranks``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .chain_complex import FIELDS, ChainComplex
from .errors import ComplexStructureError
from .matrix_kernel import PrimeFieldMatrix, RationalMatrix

SCHEMA_VERSION = "1"


class DocumentError(ValueError):
    """The input is not a well-formed document."""


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(M):
    if isinstance(M, RationalMatrix):
        return [[_fraction_str(x) for x in row] for row in M.row_lists()]
    if isinstance(M, PrimeFieldMatrix):
        return [list(row) for row in M.row_lists()]
    return [[float(x) for x in row] for row in np.asarray(M)]


def complex_to_dict(C: ChainComplex) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "field": C.field}
    if C.field == "Fp":
        doc["modulus"] = C.modulus
    doc["ranks"] = list(C.ranks)
    doc["differentials"] = [matrix_to_json(A) for A in C.differentials]
    return doc


def dumps_complex(C: ChainComplex) -> str:
    return json.dumps(complex_to_dict(C))


def save_complex(C: ChainComplex, path) -> None:
    Path(path).write_text(dumps_complex(C) + "\n", encoding="utf-8")


def _parse_entry(x, field, where):
    if isinstance(x, bool):
        raise DocumentError(f"{where}: boolean entry")
    if field == "R53":
        if not isinstance(x, (int, float)):
            raise DocumentError(f"{where}: expected a number, got {x!r}")
        return float(x)
    if field == "QQ":
        if isinstance(x, int):
            return Fraction(x)
        if not isinstance(x, str):
            raise DocumentError(f"{where}: expected a rational string, got {x!r}")
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"{where}: bad rational {x!r}") from exc
    if not isinstance(x, int):
        raise DocumentError(f"{where}: expected an integer residue, got {x!r}")
    return x


def complex_from_dict(doc) -> ChainComplex:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("schema_version", "field", "ranks", "differentials"):
        if key not in doc:
            raise DocumentError(f"missing key {key!r}")
    if str(doc["schema_version"]) != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc['schema_version']!r}")
    field = doc["field"]
    if field not in FIELDS:
        raise DocumentError(f"unknown field {field!r}")
    modulus = doc.get("modulus") if field == "Fp" else None
    if field == "Fp" and not isinstance(modulus, int):
        raise DocumentError("Fp document needs an integer modulus")
    c = doc["ranks"]
    if not isinstance(c, list) or not all(isinstance(x, int) and x >= 0 for x in c):
        raise DocumentError("ranks must be a list of non-negative integers")
    diffs = doc["differentials"]
    if not isinstance(diffs, list) or len(diffs) != len(c) - 1:
        raise DocumentError(f"expected {len(c) - 1} differentials")
    mats = []
    for i, D in enumerate(diffs, start=1):
        rows, cols = c[i - 1], c[i]
        if not isinstance(D, list) or (rows and len(D) != rows):
            raise DocumentError(f"A_{i}: expected {rows} rows")
        if rows and cols == 0 and all(r == [] for r in D):
            D = []
        if rows * cols == 0:
            if D and any(row for row in D):
                raise DocumentError(f"A_{i}: expected an empty matrix")
            mats.append(np.zeros((rows, cols)) if field == "R53" else
                        RationalMatrix.zeros(rows, cols) if field == "QQ" else
                        PrimeFieldMatrix.zeros(rows, cols, modulus))
            continue
        parsed = []
        for a, row in enumerate(D):
            if not isinstance(row, list) or len(row) != cols:
                raise DocumentError(f"A_{i} row {a}: expected {cols} entries")
            parsed.append([_parse_entry(x, field, f"A_{i}[{a}][{b}]") for b, x in enumerate(row)])
        if field == "R53":
            mats.append(np.array(parsed, dtype=np.float64))
        elif field == "QQ":
            mats.append(RationalMatrix.from_rows(parsed))
        else:
            mats.append(PrimeFieldMatrix.from_rows(parsed, modulus))
    try:
        return ChainComplex(tuple(c), mats, field=field, modulus=modulus)
    except (ComplexStructureError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc


def loads_complex(text: str) -> ChainComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return complex_from_dict(doc)


def load_complex(path) -> ChainComplex:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return loads_complex(text)


def svd_to_dict(d) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "complex_svd",
        "method": d.method,
        "dims": list(d.dims),
        "ranks": list(d.ranks),
        "homology": list(d.homology),
        "singular_values": [[float(x) for x in s] for s in d.sigma],
        "U": [matrix_to_json(U) for U in d.U],
        "normal_form_residual": d.normal_form_residual,
    }


def pinv_to_dict(P) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "pseudoinverse_complex", "field": P.field}
    if P.field == "Fp":
        doc["modulus"] = P.modulus
    doc["ranks"] = list(P.ranks)
    doc["maps"] = [matrix_to_json(M) for M in P.maps]
    return doc
