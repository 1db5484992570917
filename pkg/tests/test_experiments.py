"""Experiment harness: sanity table, motion sweeps, benchmark reports, CLI."""

import csv
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gikin.catalog import load_robot, random_motions
from gikin.cli import main as cli_main
from gikin.experiments import (
    UNITS,
    format_benchmark,
    paths_identical,
    run_benchmark,
    run_motion_units,
    sanity_table,
    write_benchmark_csv,
    write_benchmark_json,
)
from gikin.solver import IKConfig

UC_TABLE_M = np.array([
    [-0.02734497, 0.49301544],
    [-0.70647286, -1.37804070],
    [0.03514434, -1.04656388],
])


# ---------------------------------------------------------------------------
# sanity table


@pytest.fixture(scope="module")
def sanity():
    return sanity_table()


def test_sanity_uc_matches_published_values(sanity):
    assert_allclose(sanity.inverses["UC"]["m"], UC_TABLE_M, atol=1e-6)


def test_sanity_mx_equals_uc_for_planar(sanity):
    for unit in UNITS:
        assert_allclose(sanity.inverses["MX"][unit], sanity.inverses["UC"][unit],
                        atol=1e-12)


def test_sanity_consistency_flags(sanity):
    assert sanity.consistent["UC"]
    assert sanity.consistent["MX"]
    assert not sanity.consistent["MP"]
    for method in ("ED", "JF", "JD", "SD", "IED", "SVF"):
        assert not sanity.consistent[method]


def test_sanity_has_all_methods_and_units(sanity):
    assert set(sanity.inverses) == {"MP", "ED", "JF", "JD", "SD", "IED", "SVF", "UC", "MX"}
    for method in sanity.inverses:
        assert set(sanity.inverses[method]) == set(UNITS)
        for unit in UNITS:
            assert sanity.inverses[method][unit].shape == (3, 2)


# ---------------------------------------------------------------------------
# unit-sweep motions


def test_scara4_mp_paths_unit_invariant():
    model = load_robot("scara4")
    motion = random_motions(model, 3, seed=21)[0]
    results = run_motion_units(model, motion, IKConfig(inverse_method="MP"))
    same, deviation = paths_identical(results, tol_m=1e-6)
    assert same
    assert deviation <= 1e-6


def test_planar3_mp_paths_differ_between_m_and_mm():
    model = load_robot("planar3")
    motions = random_motions(model, 20, seed=22)
    diverged = 0
    for motion in motions:
        results = run_motion_units(model, motion, IKConfig(inverse_method="MP"),
                                   units=("m", "mm"))
        same, _ = paths_identical(results, units=("m", "mm"))
        diverged += not same
    assert diverged > 0


def test_stanford5_mx_paths_unit_invariant():
    model = load_robot("stanford5")
    motion = random_motions(model, 2, seed=23)[1]
    results = run_motion_units(model, motion, IKConfig(inverse_method="MX"))
    same, deviation = paths_identical(results, tol_m=1e-6)
    assert same


def test_stanford6_mx_paths_unit_invariant():
    # the square-Jacobian arm; not part of the big benchmark but the
    # identical-paths claim covers every bundled robot
    model = load_robot("stanford6")
    for motion in random_motions(model, 12, seed=24):
        results = run_motion_units(model, motion, IKConfig(inverse_method="MX"))
        same, _ = paths_identical(results)
        assert same


# ---------------------------------------------------------------------------
# benchmark


@pytest.fixture(scope="module")
def small_benchmark():
    return run_benchmark("planar3", count=20, seed=31, methods=("MP", "MX"))


def test_benchmark_report_fields(small_benchmark):
    report = small_benchmark
    assert set(report.cells) == {(m, "geometric", u) for m in ("MP", "MX") for u in UNITS}
    for stats in report.cells.values():
        assert 0.0 <= stats["solved_percent"] <= 100.0
    for pct in report.identical_paths_percent.values():
        assert 0.0 <= pct <= 100.0


def test_benchmark_headline_directions(small_benchmark):
    report = small_benchmark
    assert report.identical_paths_percent[("MX", "geometric")] == 100.0
    assert report.identical_paths_percent[("MP", "geometric")] < 50.0
    # MX solve rate does not depend on the unit; MP's does
    mx = [report.cells[("MX", "geometric", u)]["solved_percent"] for u in UNITS]
    assert len(set(mx)) == 1 and mx[0] == 100.0
    mp = [report.cells[("MP", "geometric", u)]["solved_percent"] for u in UNITS]
    assert len(set(mp)) > 1


def test_benchmark_deterministic_excluding_walltime(small_benchmark):
    again = run_benchmark("planar3", count=20, seed=31, methods=("MP", "MX"))
    for key, stats in small_benchmark.cells.items():
        for field in ("solved_percent", "mean_iterations", "mean_position_error_mm",
                      "mean_orientation_error_deg"):
            a, b = stats[field], again.cells[key][field]
            assert (np.isnan(a) and np.isnan(b)) or a == b
    assert small_benchmark.identical_paths_percent == again.identical_paths_percent


def test_benchmark_writers(tmp_path, small_benchmark):
    csv_path = tmp_path / "report.csv"
    json_path = tmp_path / "report.json"
    write_benchmark_csv(small_benchmark, csv_path)
    write_benchmark_json(small_benchmark, json_path)
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "robot"
    assert len(rows) == 1 + len(small_benchmark.cells)
    payload = json.loads(json_path.read_text())
    assert payload["robot"] == "planar3"
    assert len(payload["cells"]) == len(small_benchmark.cells)
    text = format_benchmark(small_benchmark)
    assert "MX" in text and "%IPs" in text


def test_benchmark_count_validation():
    with pytest.raises(ValueError):
        run_benchmark("planar3", count=0, seed=1)


# ---------------------------------------------------------------------------
# CLI


def test_cli_sanity_writes_reports(tmp_path, capsys):
    rc = cli_main(["sanity", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "unit-consistent methods" in out
    assert "UC" in out
    payload = json.loads((tmp_path / "sanity.json").read_text())
    assert payload["unit_consistent"]["MX"] is True
    assert payload["unit_consistent"]["MP"] is False
    assert (tmp_path / "sanity.csv").exists()


def test_cli_motion_writes_files(tmp_path):
    rc = cli_main([
        "motion", "--robot", "planar3", "--method", "MX",
        "--alpha", "1.0,0.5", "--units", "m,mm", "--seed", "3",
        "--out", str(tmp_path),
    ])
    assert rc == 0
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert len(csvs) == 4       # two units x two alphas
    svgs = sorted(p.name for p in tmp_path.glob("*.svg"))
    assert len(svgs) == 2       # one overlay per unit
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["identical_paths"]["1.0"]["identical"] is True
    header = (tmp_path / csvs[0]).read_text().splitlines()[0]
    assert header.startswith("iteration,X,Y,Z,Ro,Pi,Ya")


def test_cli_benchmark_runs(tmp_path, capsys):
    rc = cli_main([
        "benchmark", "--robot", "planar3", "--count", "5", "--seed", "2",
        "--methods", "MX", "--out", str(tmp_path),
    ])
    assert rc == 0
    assert "%IPs" in capsys.readouterr().out
    assert (tmp_path / "benchmark_planar3_seed2.csv").exists()
    assert (tmp_path / "benchmark_planar3_seed2.json").exists()


def test_cli_config_file_presets_flags(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"count": 3, "seed": 9, "methods": ["MX"]}))
    rc = cli_main(["--config", str(config), "benchmark", "--robot", "planar3"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "3 motions, seed 9" in out
    # explicit flags beat config values
    rc = cli_main(["--config", str(config), "benchmark", "--robot", "planar3",
                   "--count", "2"])
    assert rc == 0
    assert "2 motions, seed 9" in capsys.readouterr().out


def test_cli_rejects_unknown_method(capsys):
    with pytest.raises(SystemExit) as exc:
        cli_main(["benchmark", "--robot", "planar3", "--methods", "QP"])
    assert exc.value.code == 2


def test_cli_rejects_unknown_robot():
    with pytest.raises(SystemExit) as exc:
        cli_main(["benchmark", "--robot", "unknown"])
    assert exc.value.code == 2
