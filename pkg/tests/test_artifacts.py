import math

import numpy as np
import pytest

from anti_orbits.artifacts import (
    SWEEP_COLUMNS,
    read_json_report,
    read_orbit_csv,
    read_sweep_csv,
    report_json,
    sweep_csv,
    write_json_report,
    write_orbit_csv,
    write_sweep_csv,
)


def test_orbit_csv_rewrites_byte_for_byte(tmp_path) -> None:
    points = np.array([[0.1, math.pi], [1 / 3, -2.5e-17], [7.0, 1e300]])
    residuals = np.array([math.nan, 1.2345678901234567e-13, math.nan])
    path = write_orbit_csv(tmp_path / "orbit.csv", points, residuals)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "index,x_0,x_1,local_residual"

    table = read_orbit_csv(path)
    assert table.dim == 2
    assert table.index == [0, 1, 2]
    assert table.points[1][0] == 1 / 3
    assert table.to_csv() == text


def test_orbit_csv_rejects_other_tables(tmp_path) -> None:
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="not an orbit table"):
        read_orbit_csv(path)


def test_sweep_csv_round_trip(tmp_path) -> None:
    rows = [
        {"param": 12.0, "converged": True, "residual": 3e-13, "rho": 0.12, "contraction": 0.4, "mu": 9.5, "entropy_bound": None},
        {"param": 2.0, "converged": False},
    ]
    path = write_sweep_csv(tmp_path / "sweep.csv", rows)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    assert text.splitlines()[2] == "2.0,false,,,,,"

    back = read_sweep_csv(path)
    assert back[0]["converged"] is True
    assert back[0]["mu"] == 9.5
    assert back[1]["residual"] is None
    assert sweep_csv(back) == text


def test_json_report_is_stable(tmp_path) -> None:
    report = {"b": np.float64(0.5), "a": [np.int64(3), math.inf], "flag": np.bool_(True), "arr": np.array([1.0, 2.0])}
    text = report_json(report)
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert '"a": [\n    3,\n    null\n  ]' in text

    path = write_json_report(tmp_path / "nested" / "report.json", report)
    data = read_json_report(path)
    assert data["flag"] is True
    assert data["arr"] == [1.0, 2.0]
    assert report_json(data) == text


def test_json_report_must_be_an_object(tmp_path) -> None:
    path = tmp_path / "list.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError):
        read_json_report(path)
