"""Experiment configuration, sweep execution and record serialization.

A sweep solves both schemes over a grid of channel seeds and forward-link
SNRs, emitting one flat record per (scheme, seed, snr) with the optimized
split, distortions and allocation.  Records are sorted and floats formatted
to 12 significant digits so reruns of the same configuration are
byte-identical.  The environment variable CAS_SEED_OFFSET shifts every seed
for batch farming.
"""

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import alphas_from_channel, generate_rayleigh
from .dual import (INIT_COMMUNICATION, INIT_SENSING, optimize_dual,
                   optimize_dual_best)
from .model import SystemConfig, noise_var_from_snr
from .separated import evaluate_split, optimize_separated
from .waterfilling import waterfill_capacity

SCHEMES = ("separated", "dual", "both")
DUAL_INITS = ("sensing", "communication", "best")
OUTPUT_FORMATS = ("csv", "json")
CSV_COLUMNS = ("scheme", "seed", "snr_c_db", "p_s", "d_s", "d_c", "d_sc",
               "capacity", "iterations", "converged", "alloc_summary")

SEED_OFFSET_ENV = "CAS_SEED_OFFSET"


class ConfigError(ValueError):
    """Invalid experiment configuration (bad key, value or combination)."""


@dataclass
class ExperimentConfig:
    """Full description of one experiment run."""

    system: SystemConfig
    snr_s_db: float = 20.0
    snr_c_db_list: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)
    seeds: tuple = tuple(range(20))
    scheme: str = "both"
    dual_init: str = "best"
    grid_l: int = 21
    tol: float | None = None
    eps: float | None = None
    output_path: str = "sweep.csv"
    output_format: str = "csv"
    jobs: int = 1
    curve_points: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.dual_init not in DUAL_INITS:
            raise ConfigError(f"dual_init must be one of {DUAL_INITS}, got {self.dual_init!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format must be one of {OUTPUT_FORMATS}")
        if not self.snr_c_db_list:
            raise ConfigError("snr_c_db_list must be nonempty")
        if not self.seeds:
            raise ConfigError("seeds must be nonempty")
        if self.grid_l < 3:
            raise ConfigError("grid_l must be at least 3")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive when set")
        if self.eps is not None and not self.eps > 0:
            raise ConfigError("eps must be positive when set")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.curve_points < 0:
            raise ConfigError("curve_points must be nonnegative")


@dataclass
class SweepRecord:
    """One solved point of a sweep; flagged marks numeric degeneracy out of band."""

    scheme: str
    seed: int
    snr_c_db: float
    p_s: float
    d_s: float
    d_c: float
    d_sc: float
    capacity: float
    iterations: int
    converged: bool
    alloc_summary: tuple
    flagged: bool = False


DEFAULTS = {
    "n_tx": 10,
    "m_s": 5,
    "m_c": 5,
    "n_symbols": 100,
    "var_eta": 0.1,
    "p_total": 1.0,
    "snr_s_db": 20.0,
    "snr_c_db_list": (0.0, 5.0, 10.0, 15.0, 20.0),
    "seeds": tuple(range(20)),
    "scheme": "both",
    "dual_init": "best",
    "grid_l": 21,
    "tol": None,
    "eps": None,
    "output_path": "sweep.csv",
    "output_format": "csv",
    "jobs": 1,
    "curve_points": 0,
}

_INT_KEYS = ("n_tx", "m_s", "m_c", "n_symbols", "grid_l", "jobs", "curve_points")
_FLOAT_KEYS = ("var_eta", "p_total", "snr_s_db")
_OPT_FLOAT_KEYS = ("tol", "eps")
_STR_KEYS = ("scheme", "dual_init", "output_path", "output_format")


def _coerce(key, value):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _OPT_FLOAT_KEYS:
            if value is None or (isinstance(value, str) and value.lower() in ("", "none")):
                return None
            return float(value)
        if key == "snr_c_db_list":
            if isinstance(value, str):
                value = value.split(",")
            return tuple(float(v) for v in value)
        if key == "seeds":
            if isinstance(value, str):
                value = value.split(",")
            return tuple(int(v) for v in value)
        if key in _STR_KEYS:
            return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {key}: {value!r}") from exc
    raise ConfigError(f"unknown configuration key {key!r}")


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from flat key/value settings over the defaults."""
    merged = dict(DEFAULTS)
    for key, value in mapping.items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown configuration key {key!r}")
        merged[key] = _coerce(key, value)
    try:
        base = SystemConfig(
            n_tx=merged["n_tx"], m_s=merged["m_s"], m_c=merged["m_c"],
            n_symbols=merged["n_symbols"], var_eta=merged["var_eta"],
            var_s=1.0, var_c=1.0, p_total=merged["p_total"])
        base = replace(
            base,
            var_s=noise_var_from_snr(merged["snr_s_db"], base),
            var_c=noise_var_from_snr(merged["snr_c_db_list"][0], base))
    except (ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(
        system=base,
        snr_s_db=merged["snr_s_db"],
        snr_c_db_list=merged["snr_c_db_list"],
        seeds=merged["seeds"],
        scheme=merged["scheme"],
        dual_init=merged["dual_init"],
        grid_l=merged["grid_l"],
        tol=merged["tol"],
        eps=merged["eps"],
        output_path=merged["output_path"],
        output_format=merged["output_format"],
        jobs=merged["jobs"],
        curve_points=merged["curve_points"],
    )


def parse_config_file(path: str) -> dict:
    """Read flat ``key = value`` settings; '#' starts a comment, lists use commas."""
    settings = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            settings[key.strip()] = value.strip()
    return settings


def seed_offset() -> int:
    raw = os.environ.get(SEED_OFFSET_ENV, "").strip()
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_OFFSET_ENV} must be an integer, got {raw!r}") from exc


def system_for(cfg: ExperimentConfig, snr_c_db: float) -> SystemConfig:
    """System parameters at one swept forward-link SNR."""
    return replace(cfg.system,
                   var_c=noise_var_from_snr(snr_c_db, cfg.system))


def run_point(cfg: ExperimentConfig, seed: int, snr_c_db: float) -> list:
    """Solve the configured schemes for one (seed, snr) point."""
    try:
        sys_cfg = system_for(cfg, snr_c_db)
        ch = generate_rayleigh(seed, sys_cfg.m_c, sys_cfg.n_tx)
        alphas = alphas_from_channel(ch, sys_cfg)
        dead_link = not bool(np.any(alphas > 0))
        records = []
        if cfg.scheme in ("separated", "both"):
            sol = optimize_separated(sys_cfg, alphas, grid_l=cfg.grid_l, tol=cfg.tol)
            records.append(SweepRecord(
                scheme="separated", seed=int(seed), snr_c_db=float(snr_c_db),
                p_s=sol.p_s, d_s=sol.report.d_s, d_c=sol.report.d_c,
                d_sc=sol.report.d_sc, capacity=sol.report.capacity,
                iterations=sol.grid_evals, converged=True,
                alloc_summary=tuple(sol.comm_alloc.lambdas),
                flagged=dead_link))
        if cfg.scheme in ("dual", "both"):
            if cfg.dual_init == "best":
                dsol = optimize_dual_best(sys_cfg, alphas, eps=cfg.eps)
            else:
                kind = INIT_SENSING if cfg.dual_init == "sensing" else INIT_COMMUNICATION
                dsol = optimize_dual(sys_cfg, alphas, init_kind=kind, eps=cfg.eps)
            records.append(SweepRecord(
                scheme="dual", seed=int(seed), snr_c_db=float(snr_c_db),
                p_s=dsol.alloc.total, d_s=dsol.report.d_s, d_c=dsol.report.d_c,
                d_sc=dsol.report.d_sc, capacity=dsol.report.capacity,
                iterations=dsol.iterations, converged=dsol.converged,
                alloc_summary=tuple(dsol.alloc.lambdas),
                flagged=dead_link or not dsol.converged))
        if cfg.curve_points > 0 and cfg.scheme in ("separated", "both"):
            for p in np.linspace(0.0, sys_cfg.p_total, cfg.curve_points):
                rep = evaluate_split(p, sys_cfg, alphas)
                wf = waterfill_capacity(max(sys_cfg.p_total - p, 0.0), alphas)
                records.append(SweepRecord(
                    scheme="separated_grid", seed=int(seed),
                    snr_c_db=float(snr_c_db), p_s=float(p), d_s=rep.d_s,
                    d_c=rep.d_c, d_sc=rep.d_sc, capacity=rep.capacity,
                    iterations=0, converged=True,
                    alloc_summary=tuple(wf.alloc.lambdas),
                    flagged=dead_link))
        return records
    except ConfigError:
        raise
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        raise RuntimeError(
            f"point failed (seed={seed}, snr_c_db={snr_c_db}): {exc}") from exc


def _point_task(args):
    cfg, seed, snr_c_db = args
    return run_point(cfg, seed, snr_c_db)


def _fmt(value: float) -> str:
    return f"{float(value):.12g}"


def _record_row(rec: SweepRecord) -> list:
    return [
        rec.scheme,
        str(int(rec.seed)),
        _fmt(rec.snr_c_db),
        _fmt(rec.p_s),
        _fmt(rec.d_s),
        _fmt(rec.d_c),
        _fmt(rec.d_sc),
        _fmt(rec.capacity),
        str(int(rec.iterations)),
        "true" if rec.converged else "false",
        ";".join(_fmt(v) for v in rec.alloc_summary),
    ]


def _record_obj(rec: SweepRecord) -> dict:
    return {
        "scheme": rec.scheme,
        "seed": int(rec.seed),
        "snr_c_db": float(_fmt(rec.snr_c_db)),
        "p_s": float(_fmt(rec.p_s)),
        "d_s": float(_fmt(rec.d_s)),
        "d_c": float(_fmt(rec.d_c)),
        "d_sc": float(_fmt(rec.d_sc)),
        "capacity": float(_fmt(rec.capacity)),
        "iterations": int(rec.iterations),
        "converged": bool(rec.converged),
        "alloc_summary": [float(_fmt(v)) for v in rec.alloc_summary],
    }


def sort_records(records: list) -> list:
    return sorted(records, key=lambda r: (r.scheme, r.snr_c_db, r.seed, r.p_s))


def render_records(records: list, output_format: str) -> str:
    """Serialize sorted records to CSV or JSON text, floats at 12 significant digits."""
    if output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(_record_row(rec))
        return buf.getvalue()
    if output_format == "json":
        return json.dumps([_record_obj(r) for r in records], indent=2) + "\n"
    raise ConfigError(f"output_format must be one of {OUTPUT_FORMATS}")


def collect_sweep(cfg: ExperimentConfig) -> list:
    """Solve every configured (seed, snr) point and return sorted records."""
    offset = seed_offset()
    points = [(cfg, seed + offset, snr)
              for snr in cfg.snr_c_db_list for seed in cfg.seeds]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_point_task, points))
    else:
        chunks = [_point_task(p) for p in points]
    records = [rec for chunk in chunks for rec in chunk]
    return sort_records(records)


def run_sweep(cfg: ExperimentConfig):
    """Run the full sweep and write it to cfg.output_path.

    The output file is opened before any computation so an unwritable path
    fails fast.  Returns (path, flagged_count).
    """
    with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
        records = collect_sweep(cfg)
        fh.write(render_records(records, cfg.output_format))
    return cfg.output_path, sum(1 for r in records if r.flagged)


def emit_trace(cfg: ExperimentConfig, seed: int, snr_c_db: float) -> str:
    """Write the per-iteration objective of both dual warm starts for one point."""
    sys_cfg = system_for(cfg, snr_c_db)
    eff_seed = int(seed) + seed_offset()
    with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
        ch = generate_rayleigh(eff_seed, sys_cfg.m_c, sys_cfg.n_tx)
        alphas = alphas_from_channel(ch, sys_cfg)
        rows = []
        for kind in (INIT_SENSING, INIT_COMMUNICATION):
            sol = optimize_dual(sys_cfg, alphas, init_kind=kind, eps=cfg.eps)
            for i, value in enumerate(sol.objective_trace):
                rows.append((kind, i, value))
        if cfg.output_format == "json":
            payload = [{"init_kind": k, "iteration": i, "d_sc": float(_fmt(v))}
                       for k, i, v in rows]
            fh.write(json.dumps(payload, indent=2) + "\n")
        else:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("init_kind", "iteration", "d_sc"))
            for kind, i, value in rows:
                writer.writerow((kind, str(i), _fmt(value)))
    return cfg.output_path


def compare_summary(records: list) -> str:
    """Per-SNR mean distortion of each scheme and the dual scheme's percent gain."""
    by_snr = {}
    for rec in records:
        if rec.scheme not in ("separated", "dual"):
            continue
        by_snr.setdefault(rec.snr_c_db, {"separated": [], "dual": []})
        by_snr[rec.snr_c_db][rec.scheme].append(rec.d_sc)
    lines = [f"{'snr_c_db':>9}  {'mean_d_sc_separated':>20}  "
             f"{'mean_d_sc_dual':>15}  {'gain_pct':>9}"]
    for snr in sorted(by_snr):
        sep = by_snr[snr]["separated"]
        du = by_snr[snr]["dual"]
        mean_sep = float(np.mean(sep)) if sep else float("nan")
        mean_dual = float(np.mean(du)) if du else float("nan")
        gain = 100.0 * (mean_sep - mean_dual) / mean_sep if sep and du else float("nan")
        lines.append(f"{_fmt(snr):>9}  {mean_sep:>20.6f}  {mean_dual:>15.6f}  {gain:>9.2f}")
    return "\n".join(lines)
