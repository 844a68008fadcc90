"""Text formats: JSON state files, CSV counts and CSV slices.

Numbers are written as the shortest round-trip representation of the value
rounded to 12 significant digits, so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

import numpy as np

from .states import check_density
from .tomography import TomographyDataset


def round12(x: float) -> float:
    # "+ 0.0" folds -0.0 into 0.0
    return float(f"{float(x):.12g}") + 0.0


def fmt(x: float) -> str:
    return repr(round12(x))


def _rounded(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return bool(obj) if obj is not None else None
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round12(obj)
    return obj


def dumps(obj: Any) -> str:
    """JSON with rounded floats, key order preserved."""
    return json.dumps(_rounded(obj), indent=2) + "\n"


def _matrix_block(name: str, m: np.ndarray) -> str:
    rows = ",\n".join("    [" + ", ".join(fmt(v) for v in row) + "]" for row in m)
    return f'  "{name}": [\n{rows}\n  ]'


def write_state(path, rho) -> None:
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0].bit_length() - 1
    text = "{\n" + f'  "n_qubits": {n},\n'
    text += _matrix_block("matrix_re", rho.real) + ",\n"
    text += _matrix_block("matrix_im", rho.imag) + "\n}\n"
    Path(path).write_text(text)


def read_state(path) -> np.ndarray:
    doc = json.loads(Path(path).read_text())
    try:
        n = int(doc["n_qubits"])
        re = np.asarray(doc["matrix_re"], dtype=float)
        im = np.asarray(doc["matrix_im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed state file ({exc})") from None
    d = 2**n
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValueError(f"{path}: expected {d}x{d} matrices for {n} qubits")
    return check_density(re + 1j * im)


def write_counts(path, data: TomographyDataset) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["setting", "outcome", "count"])
        writer.writerows(data.records())


def read_counts(path) -> TomographyDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["setting", "outcome", "count"]:
            raise ValueError(f"{path}: expected header setting,outcome,count, got {header}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            setting, outcome, count = (field.strip() for field in row)
            try:
                value = int(count)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: count {count!r} is not an integer") from None
            if len(outcome) != len(setting):
                raise ValueError(f"{path}:{lineno}: outcome length does not match setting")
            records.append((setting, outcome, value))
    return TomographyDataset.from_records(records)


def write_slice(path, thetas, phis, values) -> None:
    values = np.asarray(values)
    with open(path, "w", newline="") as fh:
        fh.write("theta,phi,w\n")
        for i, t in enumerate(thetas):
            for j, p in enumerate(phis):
                fh.write(f"{fmt(t)},{fmt(p)},{fmt(values[i, j])}\n")


def read_slice(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(theta, phi, w)`` as flat arrays in file order."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["theta", "phi", "w"]:
            raise ValueError(f"{path}: expected header theta,phi,w, got {header}")
        rows = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    rows = rows.reshape(-1, 3)
    return rows[:, 0], rows[:, 1], rows[:, 2]
