import json
import os
import subprocess
import sys

import numpy as np
import pytest

from s3sim.bounds import TSIRELSON, canonical_quad
from s3sim.curves import (CorrelationCurve, CurvePoint, parse_grid, read_curve_csv,
                          read_curve_json, write_curve_csv, write_curve_json)
from s3sim.experiments import (ConfigError, ExperimentConfig, chsh_monte_carlo,
                               compare_models, parse_config_file, read_rows_csv, run,
                               run_bounds, run_chsh, run_curve, run_geodesic,
                               run_probabilities)


def cfg(**kw):
    base = dict(experiment="curve", seed=42, n_per_point=2_000,
                grid=(0.0, 180.0, 30.0), format="csv")
    base.update(kw)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# grids and config plumbing

def test_parse_grid_forms():
    assert np.allclose(parse_grid("0:180:45"), [0, 45, 90, 135, 180])
    assert np.allclose(parse_grid((0.0, 10.0, 5.0)), [0, 5, 10])
    assert np.allclose(parse_grid([3.0, 7.0]), [3, 7])
    with pytest.raises(ValueError):
        parse_grid("0:200:10")
    with pytest.raises(ValueError):
        parse_grid("10:0:5")
    with pytest.raises(ValueError):
        parse_grid("0:90")


def test_config_validation():
    with pytest.raises(ConfigError):
        cfg(experiment="nonsense").validated()
    with pytest.raises(ConfigError):
        cfg(model="other").validated()
    with pytest.raises(ConfigError):
        cfg(n_per_point=0).validated()
    with pytest.raises(ConfigError):
        cfg(format="xml").validated()
    with pytest.raises(ConfigError):
        cfg(seed=None).validated()
    assert cfg().validated().seed == 42


def test_parse_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nseed = 7\nmodel=flat\nn = 500\n\ngrid = 0:90:45\n")
    values = parse_config_file(p)
    assert values == {"seed": "7", "model": "flat", "n": "500", "grid": "0:90:45"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("seed 7\n")
    with pytest.raises(ConfigError):
        parse_config_file(bad)


# ---------------------------------------------------------------------------
# curve artifacts

def test_curve_round_trips_csv_and_json(tmp_path):
    curve = run_curve(cfg())
    csv_path = tmp_path / "curve.csv"
    json_path = tmp_path / "curve.json"
    write_curve_csv(curve, csv_path)
    write_curve_json(curve, json_path)
    back_csv = read_curve_csv(csv_path)
    back_json = read_curve_json(json_path)
    for back in (back_csv, back_json):
        assert back.meta == {k: str(v) for k, v in curve.meta.items()}
        assert len(back.points) == len(curve.points)
        for mine, theirs in zip(curve.points, back.points):
            assert theirs.n == mine.n
            assert abs(theirs.e_hat - mine.e_hat) < 1e-8  # 9 significant digits


def test_curve_header_embeds_config(tmp_path):
    curve = run_curve(cfg(seed=99))
    path = tmp_path / "c.csv"
    write_curve_csv(curve, path)
    text = path.read_text()
    assert "# seed=99" in text
    assert "# model=s3" in text
    assert text.splitlines()[0].startswith("#")


def test_curve_rejects_bad_grids():
    with pytest.raises(ValueError):
        CorrelationCurve(points=(
            CurvePoint(10.0, 0.0, 0.0, 0.0, 1.0, 5),
            CurvePoint(5.0, 0.0, 0.0, 0.0, 1.0, 5)), meta={})
    with pytest.raises(ValueError):
        CorrelationCurve(points=(CurvePoint(0.0, np.nan, 0.0, 0.0, 1.0, 5),), meta={})


def test_run_curve_matches_analytic_for_each_model():
    for model, tol_kind in (("s3", "cos"), ("flat", "saw"), ("pearle-reject", "cos")):
        curve = run_curve(cfg(model=model, n_per_point=20_000))
        for p in curve.points:
            tol = 4.0 * p.stderr if p.stderr > 0 else 1e-12
            assert abs(p.e_hat - p.e_analytic) <= tol, (model, p.eta_deg)
        if model == "s3":
            assert all(p.g == 1.0 for p in curve.points)
        if model == "pearle-reject":
            assert all(p.g < 1.0 for p in curve.points)


# ---------------------------------------------------------------------------
# other experiments

def test_run_chsh_payload():
    payload = run_chsh(cfg(experiment="chsh", n_per_point=50_000))
    assert abs(abs(payload["analytic"]["s"]) - TSIRELSON) < 1e-9
    mc = payload["monte_carlo"]
    assert abs(abs(mc["s"]) - TSIRELSON) <= 4.0 * mc["s_stderr"]


def test_chsh_monte_carlo_flat_model():
    res = chsh_monte_carlo(canonical_quad(), 50_000, seed=5, mode="flat")
    assert abs(abs(res.s) - 2.0) <= 4.0 * res.s_stderr
    assert res.regime.startswith("classical")


def test_run_geodesic_rows():
    payload = run_geodesic(cfg(experiment="geodesic", steps=180))
    rows = payload["rows"]
    assert len(rows) == 181
    d2 = np.array([r["d_su2"] for r in rows])
    d3 = np.array([r["d_so3"] for r in rows])
    assert np.all(np.diff(d2) > 0) and abs(d2[-1] - np.pi) < 1e-12
    assert np.max(np.abs(d3 - np.minimum(d2, np.pi - d2))) < 1e-12
    assert rows[90]["psi_deg"] == pytest.approx(180.0)


def test_run_bounds_payload():
    payload = run_bounds(cfg(experiment="bounds"))
    assert payload["expr_single_max"] == 2
    assert payload["expr_four_max"] == 4


def test_run_probabilities_payload():
    payload = run_probabilities(cfg(experiment="probabilities", n_per_point=20_000,
                                    grid=(0.0, 180.0, 45.0)))
    tables = payload["tables"]
    assert len(tables) == 5
    for t in tables:
        assert t["p_00"] == 0.0
        assert abs(t["g"] - 1.0) < 1e-12


def test_compare_models_payload():
    payload = compare_models(cfg(experiment="flat-vs-s3", n_per_point=20_000,
                                 grid=(0.0, 180.0, 45.0)))
    assert set(payload["curves"]) == {"s3", "flat"}
    assert any("quantum" in line for line in payload["summary"] if line.startswith("s3"))
    assert any("classical" in line for line in payload["summary"] if line.startswith("flat"))
    mid = [p for p in payload["curves"]["s3"]["points"] if p["eta_deg"] == 90.0][0]
    assert abs(mid["e_hat"]) < 0.05  # both curves cross zero at 90 degrees


# ---------------------------------------------------------------------------
# the CLI

def run_cli(*args, cwd=None):
    env = dict(os.environ)
    return subprocess.run([sys.executable, "-m", "s3sim", *args],
                          capture_output=True, text=True, cwd=cwd, env=env)


def test_cli_curve_writes_csv(tmp_path):
    out = tmp_path / "curve.csv"
    res = run_cli("curve", "--model", "s3", "--n", "2000", "--seed", "42",
                  "--grid", "0:180:45", "--out", str(out))
    assert res.returncode == 0, res.stderr
    curve = read_curve_csv(out)
    assert [p.eta_deg for p in curve.points] == [0.0, 45.0, 90.0, 135.0, 180.0]
    assert curve.meta["seed"] == "42"


def test_cli_missing_seed_is_usage_error(tmp_path):
    res = run_cli("curve", "--n", "100", "--out", str(tmp_path / "x.csv"))
    assert res.returncode == 2
    assert "seed" in res.stderr


def test_cli_unknown_experiment_is_usage_error():
    res = run_cli("frobnicate", "--seed", "1")
    assert res.returncode == 2


def test_cli_bad_flag_value_is_usage_error(tmp_path):
    res = run_cli("curve", "--seed", "1", "--grid", "0:999:10",
                  "--out", str(tmp_path / "x.csv"))
    assert res.returncode == 2


def test_cli_io_error_exit_code(tmp_path):
    res = run_cli("bounds", "--seed", "1", "--format", "json",
                  "--out", str(tmp_path / "missing_dir" / "x.json"))
    assert res.returncode == 3


def test_cli_numeric_failure_exit_code(tmp_path):
    # a single emitted pair in rejection mode can leave a grid point with no
    # coincidences: the curve point is non-finite and the run must fail loudly
    res = run_cli("curve", "--model", "pearle-reject", "--n", "1", "--seed", "2",
                  "--grid", "0:180:90", "--out", str(tmp_path / "x.csv"))
    assert res.returncode == 4
    assert "numeric failure" in res.stderr


def test_cli_config_file_with_flag_override(tmp_path):
    cfg_file = tmp_path / "exp.cfg"
    cfg_file.write_text("seed=5\nn=1000\ngrid=0:90:45\nmodel=flat\n")
    out = tmp_path / "c.csv"
    res = run_cli("curve", "--config", str(cfg_file), "--out", str(out),
                  "--model", "s3")
    assert res.returncode == 0, res.stderr
    curve = read_curve_csv(out)
    assert curve.meta["model"] == "s3"  # flag overrides file
    assert curve.meta["seed"] == "5"


def test_cli_bounds_json(tmp_path):
    out = tmp_path / "bounds.json"
    res = run_cli("bounds", "--seed", "1", "--format", "json", "--out", str(out))
    assert res.returncode == 0, res.stderr
    payload = json.loads(out.read_text())
    assert payload["expr_single_max"] == 2
    assert payload["expr_four_max"] == 4
    assert payload["meta"]["seed"] == "1"


def test_cli_geodesic_csv_round_trip(tmp_path):
    out = tmp_path / "geo.csv"
    res = run_cli("geodesic", "--seed", "1", "--steps", "90", "--out", str(out))
    assert res.returncode == 0, res.stderr
    meta, rows = read_rows_csv(out)
    assert meta["steps"] == "90"
    assert len(rows) == 91
    assert float(rows[-1]["d_su2"]) == pytest.approx(np.pi)


def test_cli_probabilities_csv(tmp_path):
    out = tmp_path / "probs.csv"
    res = run_cli("probabilities", "--seed", "2", "--n", "5000",
                  "--grid", "0:90:45", "--out", str(out))
    assert res.returncode == 0, res.stderr
    meta, rows = read_rows_csv(out)
    assert len(rows) == 3
    assert all(float(r["p_00"]) == 0.0 for r in rows)


def test_cli_flat_vs_s3_csv(tmp_path):
    out = tmp_path / "cmp.csv"
    res = run_cli("flat-vs-s3", "--seed", "3", "--n", "20000",
                  "--grid", "0:180:45", "--out", str(out))
    assert res.returncode == 0, res.stderr
    meta, rows = read_rows_csv(out)
    assert {r["model"] for r in rows} == {"s3", "flat"}
    assert "quantum" in meta["s3_regime"]
    assert "classical" in meta["flat_regime"]


def test_cli_reproducible_across_worker_counts(tmp_path):
    outputs = []
    for workers in (1, 4, 8):
        out = tmp_path / f"curve_w{workers}.csv"
        res = run_cli("curve", "--n", "2000", "--seed", "77", "--grid", "0:180:45",
                      "--workers", str(workers), "--out", str(out))
        assert res.returncode == 0, res.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_cli_default_output_name(tmp_path):
    res = run_cli("bounds", "--seed", "1", cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "bounds.csv").exists()
