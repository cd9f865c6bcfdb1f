# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import csv
import json

import pytest

from wg_fem import services
from wg_fem.cli import COLUMNS, EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, emit_csv, emit_rates_csv, main
from wg_fem.exceptions import SolverError
from wg_fem.postprocess import METRICS, ErrorReport, LevelRecord


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def make_report(levels):
    report = ErrorReport(case="x")
    for level in range(levels):
        h = 2.0 ** -(level + 1)
        report.add(LevelRecord(
            level=level, h=h, n_cells=4 ** level, n_dofs=10 * 4 ** level,
            norms={metric: h ** 2 for metric in METRICS},
        ))
    return report


def test_empty_report_gives_a_header_only_csv(tmp_path):
    path = tmp_path / "x_errors.csv"

    emit_csv(ErrorReport(case="x"), path)

    assert path.read_text() == ",".join(COLUMNS) + "\n"


def test_single_level_has_no_rate_row(tmp_path):
    path = tmp_path / "x_errors.csv"

    emit_csv(make_report(1), path)

    rows = read_rows(path)
    assert len(rows) == 2
    assert rows[1][:4] == ["0", "5.00000e-01", "1", "10"]


def test_rate_row(tmp_path):
    path = tmp_path / "x_errors.csv"

    emit_csv(make_report(3), path)

    rows = read_rows(path)
    assert [row[0] for row in rows] == ["level", "0", "1", "2", "rate"]
    assert rows[-1][1:4] == ["", "", ""]
    assert all(float(value) == pytest.approx(2.0) for value in rows[-1][4:])


def test_rates_csv(tmp_path):
    path = tmp_path / "x_rates.csv"

    emit_rates_csv(make_report(3), path)

    rows = read_rows(path)
    assert rows[0] == ["metric", "rate", "pairwise"]
    assert [row[0] for row in rows[1:]] == list(METRICS)
    assert rows[1][2] == "2.00000e+00 2.00000e+00"


def test_list(capsys):
    assert main(["list"]) == EXIT_OK

    out = capsys.readouterr().out
    assert "1a" in out
    assert "Intersecting interfaces" in out


def test_unknown_case(tmp_path):
    assert main(["run", "--case", "9z", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_run_writes_the_tables(tmp_path, capsys):
    code = main(["-q", "run", "--case", "1b", "--levels", "2", "--out", str(tmp_path), "--compare", "reference"])

    assert code == EXIT_OK
    rows = read_rows(tmp_path / "1b_errors.csv")
    assert rows[0] == list(COLUMNS)
    assert [row[0] for row in rows[1:]] == ["0", "1", "rate"]
    assert [row[2] for row in rows[1:3]] == ["128", "512"]
    assert (tmp_path / "1b_rates.csv").exists()
    out = capsys.readouterr().out
    assert "reference" in out
    assert "rates" in out


def test_compare_with_the_published_tables(tmp_path, capsys):
    code = main(["-q", "run", "--case", "1a", "--levels", "1", "--out", str(tmp_path), "--compare", "paper"])

    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "level 0 (h=1.2500e-01)" in out
    assert "reference 7.1400e-01" in out


def test_runs_are_deterministic(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"

    assert main(["-q", "run", "--case", "1a", "--levels", "1", "--out", str(first)]) == EXIT_OK
    assert main(["-q", "run", "--case", "1a", "--levels", "1", "--out", str(second)]) == EXIT_OK

    assert (first / "1a_errors.csv").read_bytes() == (second / "1a_errors.csv").read_bytes()


def test_mesh_dump(tmp_path):
    code = main(["-q", "run", "--case", "rect2d", "--levels", "1", "--dump-mesh", "--out", str(tmp_path)])

    assert code == EXIT_OK
    assert (tmp_path / "rect2d_mesh_0.txt").read_text().startswith("wg-fem-mesh 1\n")


def test_case_file(tmp_path):
    path = tmp_path / "case.json"
    path.write_text(json.dumps({
        "id": "quadratic",
        "dim": 2,
        "mesh": {"family": "triangular", "sizes": [2, 4]},
        "solution": "x^2 + y^2",
        "diffusion": "1",
    }))

    code = main(["-q", "run", "--case-file", str(path), "--out", str(tmp_path)])

    assert code == EXIT_OK
    assert len(read_rows(tmp_path / "quadratic_errors.csv")) == 4


def test_case_file_with_a_bad_expression(tmp_path):
    path = tmp_path / "case.json"
    path.write_text(json.dumps({
        "id": "bad",
        "dim": 2,
        "mesh": {"family": "triangular", "sizes": [2]},
        "solution": "import(x)",
        "diffusion": "1",
    }))

    assert main(["-q", "run", "--case-file", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_bad_configuration(tmp_path):
    path = tmp_path / "bad.yml"
    path.write_text("solver:\n  tolerance: -1\n")

    argv = ["--config", str(path), "run", "--case", "1b", "--levels", "1", "--out", str(tmp_path)]

    assert main(argv) == EXIT_CONFIG


def test_bad_tolerance_on_the_command_line(tmp_path):
    assert main(["run", "--case", "1b", "--tol", "2", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_solver_failure(tmp_path, monkeypatch):
    def failing_solve(system, config):
        raise SolverError("did not converge", method="cg", iterations=5)

    monkeypatch.setattr(services, "solve", failing_solve)

    assert main(["-q", "run", "--case", "1b", "--levels", "1", "--out", str(tmp_path)]) == EXIT_FAILURE


def test_unknown_solver_is_a_usage_error():
    with pytest.raises(SystemExit) as error:
        main(["run", "--case", "1b", "--solver", "gmres"])
    assert error.value.code == 2


def test_case_and_case_file_are_exclusive():
    with pytest.raises(SystemExit):
        main(["run", "--case", "1b", "--case-file", "x.json"])


def test_kellogg_sweep(tmp_path, capsys):
    code = main(["-q", "kellogg-sweep", "--extra-levels", "0", "--levels", "2", "--out", str(tmp_path)])

    assert code == EXIT_OK
    rows = read_rows(tmp_path / "4_sweep_rates.csv")
    assert rows[0][:2] == ["extra_levels", "initial_cells"]
    assert rows[1][:2] == ["0", "200"]
    assert "extra_levels=0" in capsys.readouterr().out
