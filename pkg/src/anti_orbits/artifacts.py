"""CSV and JSON artifacts.

Floats are written with ``repr`` so that reading a file and writing it back
reproduces it byte for byte. JSON reports are sorted, indented by two spaces
and end with a newline; non-finite floats become ``null``.
"""

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

SWEEP_COLUMNS = ("param", "converged", "residual", "rho", "contraction", "mu", "entropy_bound")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _parse(text: str) -> float | int | bool | None:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        return float(text)


def _render(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def orbit_csv(points: np.ndarray, residuals: np.ndarray) -> str:
    pts = np.asarray(points, dtype=float)
    pts = pts.reshape(len(pts), -1)
    header = ["index", *[f"x_{j}" for j in range(pts.shape[1])], "local_residual"]
    rows = ([i, *pts[i].tolist(), float(residuals[i])] for i in range(len(pts)))
    return _render(header, rows)


def write_orbit_csv(path: str | Path, points: np.ndarray, residuals: np.ndarray) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(orbit_csv(points, residuals), encoding="utf-8")
    return target


@dataclass(frozen=True)
class OrbitTable:
    index: list[int]
    points: list[list[float]]
    local_residual: list[float]

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    def to_csv(self) -> str:
        return orbit_csv(np.asarray(self.points, dtype=float), np.asarray(self.local_residual, dtype=float))


def read_orbit_csv(path: str | Path) -> OrbitTable:
    reader = csv.reader(io.StringIO(Path(path).read_text(encoding="utf-8")))
    header = next(reader)
    if header[0] != "index" or header[-1] != "local_residual":
        raise ValueError(f"not an orbit table: {path}")
    index, points, residual = [], [], []
    for row in reader:
        index.append(int(row[0]))
        points.append([float(v) for v in row[1:-1]])
        residual.append(float(row[-1]))
    return OrbitTable(index=index, points=points, local_residual=residual)


def sweep_csv(rows: Iterable[Mapping[str, Any]]) -> str:
    return _render(SWEEP_COLUMNS, ([row.get(c) for c in SWEEP_COLUMNS] for row in rows))


def write_sweep_csv(path: str | Path, rows: Iterable[Mapping[str, Any]]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(sweep_csv(rows), encoding="utf-8")
    return target


def read_sweep_csv(path: str | Path) -> list[dict[str, Any]]:
    reader = csv.reader(io.StringIO(Path(path).read_text(encoding="utf-8")))
    header = next(reader)
    if tuple(header) != SWEEP_COLUMNS:
        raise ValueError(f"not a sweep table: {path}")
    return [dict(zip(header, (_parse(v) for v in row))) for row in reader]


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    return value


def report_json(report: Mapping[str, Any]) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def write_json_report(path: str | Path, report: Mapping[str, Any]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(report_json(report), encoding="utf-8")
    return target


def read_json_report(path: str | Path) -> dict[str, Any]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"report is not a JSON object: {path}")
    return data
