"""Machine-readable output.

Sweeps are written as JSON lines, curves as CSV. Both go to stdout unless an
explicit output file is given; diagnostics stay on stderr (see console.py).

Encoding:
    complex     → [re, im]
    Fraction    → "numerator/denominator"
    ±inf, nan   → "inf", "-inf", "nan"
    numpy types → Python scalars and lists

JSON keys are sorted, so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from collections.abc import Iterable, Mapping
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from .file import open_utf8
from .identities import IdentityReport


def to_jsonable(value: Any) -> Any:
    """Convert value to plain JSON types."""
    if isinstance(value, (bool, str)) or value is None:
        return value

    if isinstance(value, np.bool_):
        return bool(value)

    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"

    if isinstance(value, (int, np.integer)):
        return int(value)

    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)

    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]

    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]

    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}

    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))

    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]

    raise TypeError(f"Cannot serialize {type(value).__name__}.")


def report_record(report: IdentityReport) -> dict[str, Any]:
    """JSON record of an identity report."""
    return {
        "identity_id": report.identity_id,
        "params": report.params,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "prefactor": report.prefactor,
        "residual": report.residual,
        "budget": report.budget,
        "pass": report.passed,
        "notes": report.notes,
    }


def json_line(record: Mapping[str, Any]) -> str:
    """Single JSON line with sorted keys."""
    return json.dumps(to_jsonable(record), sort_keys=True)


def matrix_to_json(matrix: np.ndarray) -> str:
    """Matrix as a JSON array of rows of [re, im] pairs."""
    rows = np.asarray(matrix, dtype=complex)
    return json.dumps(to_jsonable(rows))


def _csv_cell(value: Any) -> Any:
    plain = to_jsonable(value)

    if isinstance(plain, (list, dict)):
        return json.dumps(plain, sort_keys=True)

    return plain


def _write(records: list[Mapping[str, Any]], fmt: str, stream: TextIO):
    if fmt == "json":
        for record in records:
            stream.write(json_line(record) + "\n")
        return

    if not records:
        return

    columns = list(records[0])
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)

    for record in records:
        writer.writerow([_csv_cell(record.get(column)) for column in columns])


def write_records(
    records: Iterable[Mapping[str, Any]], fmt: str, out: Path | None = None
):
    """Write records as JSON lines or CSV to out, or to stdout if out is None.

    Args:
        records (Iterable[Mapping[str, Any]]): Records; CSV columns follow the keys
            of the first one.
        fmt (str): 'json' or 'csv'.
        out (Path | None, optional): Output file. Defaults to None.
    """
    if fmt not in ("json", "csv"):
        raise ValueError(f"Unknown output format {fmt!r}.")

    records = list(records)

    if out is None:
        _write(records, fmt, sys.stdout)
        return

    Path(out).parent.mkdir(parents=True, exist_ok=True)

    with open_utf8(out, "w", newline="") as f:
        _write(records, fmt, f)
