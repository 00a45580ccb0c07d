"""Named, seeded, reproducible experiments and their file artifacts.

Each experiment resolves a configuration, fans per-point work out over
index-keyed random substreams (so the same seed gives byte-identical
artifacts for any worker count), and writes CSV or JSON with the resolved
configuration embedded as a metadata block.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import pearle
from .algebra import geodesic_sweep
from .bounds import (CANONICAL_QUAD_DEGREES, CHSHResult, SettingsQuad, bound_report,
                     canonical_quad, chsh, classify_regime, cosine_correlation,
                     sawtooth_correlation)
from .curves import (CorrelationCurve, CurvePoint, curve_to_dict, fmt9, parse_grid,
                     write_curve_csv, write_curve_json)
from .rng import substream

EXPERIMENTS = ("curve", "chsh", "geodesic", "bounds", "probabilities", "flat-vs-s3")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid experiment configuration (a usage error, exit code 2)."""


class NumericError(RuntimeError):
    """Non-finite value produced where a finite number was required."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    model: str = "s3"
    n_per_point: int = 100_000
    grid: tuple | str | list = (0.0, 180.0, 5.0)
    kappa: int = 1
    steps: int = 180
    workers: int = 1
    out: str | None = None
    format: str = "csv"

    def validated(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.seed is None:
            raise ConfigError("seed is mandatory (no wall-clock default)")
        if self.model not in pearle.MODES:
            raise ConfigError(f"unknown model {self.model!r}; choose from {pearle.MODES}")
        if self.n_per_point < 1:
            raise ConfigError("n must be >= 1")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}; choose from {FORMATS}")
        if self.kappa < 1:
            raise ConfigError("kappa must be >= 1")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        try:
            parse_grid(self.grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self

    def grid_degrees(self) -> np.ndarray:
        return parse_grid(self.grid)

    def meta(self) -> dict:
        g = self.grid
        if isinstance(g, str):
            grid_str = g
        elif isinstance(g, tuple) and len(g) == 3:
            grid_str = f"{g[0]:g}:{g[1]:g}:{g[2]:g}"
        else:
            grid_str = ",".join(f"{x:g}" for x in parse_grid(g))
        return {
            "experiment": self.experiment, "model": self.model,
            "n": str(self.n_per_point), "seed": str(self.seed), "grid": grid_str,
            "kappa": str(self.kappa), "steps": str(self.steps), "format": self.format,
        }

    def default_out(self) -> str:
        return f"{self.experiment.replace('-', '_')}.{self.format}"


def parse_config_file(path) -> dict:
    """Flat key=value text; '#' starts a comment; keys match the CLI flags."""
    out: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line is not key=value: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def _require_finite(values, what: str) -> None:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite value in {what}")


# ---------------------------------------------------------------------------
# curve

def _curve_point_task(args) -> CurvePoint:
    mode, deg, n, seed, index, kappa = args
    return pearle.curve_point(mode, deg, n, seed, index, kappa)


def run_curve(config: ExperimentConfig) -> CorrelationCurve:
    """Correlation sweep for the configured model over the angle grid."""
    grid = config.grid_degrees()
    tasks = [(config.model, float(deg), config.n_per_point, config.seed, i, config.kappa)
             for i, deg in enumerate(grid)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            points = list(pool.map(_curve_point_task, tasks))
    else:
        points = [_curve_point_task(t) for t in tasks]
    curve = CorrelationCurve(points=tuple(points), meta=config.meta())
    _require_finite([[p.e_hat, p.e_analytic, p.stderr, p.g] for p in curve.points], "curve")
    return curve


# ---------------------------------------------------------------------------
# chsh

def chsh_monte_carlo(quad: SettingsQuad, n: int, seed: int, mode: str = "s3",
                     kappa: int = 1) -> CHSHResult:
    """CHSH from per-pair Monte Carlo estimates on substreams (seed, pair)."""
    pairs = ((quad.a, quad.b), (quad.a, quad.b_prime),
             (quad.a_prime, quad.b), (quad.a_prime, quad.b_prime))
    ests = [pearle.estimate_pair(x, y, n, substream(seed, i), mode, kappa)
            for i, (x, y) in enumerate(pairs)]
    s = ests[0].e_hat + ests[1].e_hat + ests[2].e_hat - ests[3].e_hat
    stderr = float(np.sqrt(sum(e.stderr ** 2 for e in ests)))
    return CHSHResult(e_ab=ests[0].e_hat, e_abp=ests[1].e_hat, e_apb=ests[2].e_hat,
                      e_apbp=ests[3].e_hat, s=float(s),
                      regime=classify_regime(abs(s), stderr), s_stderr=stderr)


def run_chsh(config: ExperimentConfig) -> dict:
    """Analytic and Monte Carlo CHSH at the canonical planar quad."""
    quad = canonical_quad()
    analytic_eval = sawtooth_correlation if config.model == "flat" else cosine_correlation
    analytic = chsh(analytic_eval, quad)
    mc = chsh_monte_carlo(quad, config.n_per_point, config.seed, config.model, config.kappa)
    payload = {
        "meta": config.meta(),
        "quad_degrees": list(CANONICAL_QUAD_DEGREES),
        "analytic": analytic.to_dict(),
        "monte_carlo": mc.to_dict(),
    }
    _require_finite([analytic.s, mc.s, mc.s_stderr], "chsh report")
    return payload


# ---------------------------------------------------------------------------
# geodesic

def run_geodesic(config: ExperimentConfig) -> dict:
    """SU(2) vs SO(3) geodesic distances over half angles [0, pi]."""
    points = geodesic_sweep(config.steps)
    rows = [{"half_angle_deg": np.degrees(p.half_angle),
             "psi_deg": 2.0 * np.degrees(p.half_angle),
             "d_su2": p.d_su2, "d_so3": p.d_so3} for p in points]
    _require_finite([[r["d_su2"], r["d_so3"]] for r in rows], "geodesic sweep")
    return {"meta": config.meta(), "rows": rows}


# ---------------------------------------------------------------------------
# bounds

def run_bounds(config: ExperimentConfig) -> dict:
    report = bound_report()
    return {"meta": config.meta(), **report.to_dict()}


# ---------------------------------------------------------------------------
# probabilities

def _probability_task(args) -> dict:
    mode, deg, n, seed, index, kappa = args
    a = np.array([1.0, 0.0, 0.0])
    rad = np.radians(deg)
    b = np.array([np.cos(rad), np.sin(rad), 0.0])
    run = pearle.run_pair(a, b, n, substream(seed, index), mode, kappa)
    table = pearle.probabilities_from_outcomes(rad, run.A, run.B)
    return table.to_dict()


def run_probabilities(config: ExperimentConfig) -> dict:
    """Per-angle joint/single/zero-event probability tables."""
    grid = config.grid_degrees()
    tasks = [(config.model, float(deg), config.n_per_point, config.seed, i, config.kappa)
             for i, deg in enumerate(grid)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            tables = list(pool.map(_probability_task, tasks))
    else:
        tables = [_probability_task(t) for t in tasks]
    _require_finite([list(t.values()) for t in tables], "probability tables")
    return {"meta": config.meta(), "tables": tables}


# ---------------------------------------------------------------------------
# flat-vs-s3

def compare_models(config: ExperimentConfig) -> dict:
    """Both curves on one grid plus their CHSH values at the canonical quad,
    with a summary line per model naming its bound regime."""
    s3_cfg = replace(config, model="s3")
    flat_cfg = replace(config, model="flat")
    curve_s3 = run_curve(s3_cfg)
    curve_flat = run_curve(flat_cfg)
    chsh_s3 = chsh_monte_carlo(canonical_quad(), config.n_per_point, config.seed,
                               "s3", config.kappa)
    chsh_flat = chsh_monte_carlo(canonical_quad(), config.n_per_point, config.seed, "flat")
    summary = [
        f"s3: |S| = {abs(chsh_s3.s):.6f} -> {chsh_s3.regime}",
        f"flat: |S| = {abs(chsh_flat.s):.6f} -> {chsh_flat.regime}",
    ]
    return {
        "meta": config.meta(),
        "curves": {"s3": curve_to_dict(curve_s3), "flat": curve_to_dict(curve_flat)},
        "chsh": {"s3": chsh_s3.to_dict(), "flat": chsh_flat.to_dict()},
        "summary": summary,
    }


# ---------------------------------------------------------------------------
# artifact writing

def _write_json(payload: dict, path: Path) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _meta_lines(meta: dict) -> list[str]:
    return [f"# {k}={v}" for k, v in sorted(meta.items())]


def _write_rows_csv(meta: dict, columns, rows, path: Path) -> None:
    lines = _meta_lines(meta)
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for c in columns:
            v = row[c]
            cells.append(str(v) if isinstance(v, (int, str)) else fmt9(v))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def read_rows_csv(path) -> tuple[dict, list[dict]]:
    """Parse a '# key=value' + header + rows CSV back into meta and rows."""
    meta: dict = {}
    rows: list[dict] = []
    columns: list[str] | None = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        if columns is None:
            columns = line.split(",")
            continue
        rows.append(dict(zip(columns, line.split(","))))
    if columns is None:
        raise ValueError("CSV has no header row")
    return meta, rows


def write_artifact(experiment: str, payload, path: Path, fmt: str) -> None:
    path = Path(path)
    if experiment == "curve":
        (write_curve_csv if fmt == "csv" else write_curve_json)(payload, path)
        return
    if fmt == "json":
        _write_json(payload if isinstance(payload, dict) else curve_to_dict(payload), path)
        return
    if experiment == "geodesic":
        _write_rows_csv(payload["meta"], ("half_angle_deg", "psi_deg", "d_su2", "d_so3"),
                        payload["rows"], path)
    elif experiment == "probabilities":
        cols = ("eta_deg", "n", "p_pp", "p_mm", "p_pm", "p_mp",
                "p_single_plus_1", "p_single_minus_1", "p_single_plus_2", "p_single_minus_2",
                "p_00", "p_p0", "p_m0", "p_0p", "p_0m", "g")
        _write_rows_csv(payload["meta"], cols, payload["tables"], path)
    elif experiment == "flat-vs-s3":
        meta = dict(payload["meta"])
        for model in ("s3", "flat"):
            meta[f"{model}_abs_s"] = fmt9(abs(payload["chsh"][model]["s"]))
            meta[f"{model}_regime"] = payload["chsh"][model]["regime"]
        for line in payload["summary"]:
            meta.setdefault("summary_" + line.split(":")[0], line)
        rows = []
        for model in ("s3", "flat"):
            for point in payload["curves"][model]["points"]:
                rows.append({"model": model, **point})
        _write_rows_csv(meta, ("model", "eta_deg", "e_hat", "e_analytic", "stderr", "g", "n"),
                        rows, path)
    else:
        # chsh and bounds reports flatten to key,value rows
        flat = _flatten(payload)
        rows = [{"key": k, "value": v} for k, v in flat.items()]
        _write_rows_csv(payload.get("meta", {}), ("key", "value"), rows, path)


def _flatten(obj, prefix: str = "") -> dict:
    out: dict = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            if prefix == "" and k == "meta":
                continue
            out.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = obj if isinstance(obj, str) else (
            str(obj) if isinstance(obj, (int, np.integer)) else fmt9(obj))
    return out


def run(config: ExperimentConfig) -> Path:
    """Run the configured experiment and write its artifact file.

    Returns the written path. Deterministic for a fixed (config, seed).
    """
    config = config.validated()
    runners = {
        "curve": run_curve, "chsh": run_chsh, "geodesic": run_geodesic,
        "bounds": run_bounds, "probabilities": run_probabilities,
        "flat-vs-s3": compare_models,
    }
    payload = runners[config.experiment](config)
    out = Path(config.out) if config.out else Path(config.default_out())
    write_artifact(config.experiment, payload, out, config.format)
    return out
