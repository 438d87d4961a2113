"""Power-split optimization for the separated waveform scheme.

The budget is divided between an isotropic sensing waveform (power p_s) and
a capacity-optimal communication waveform (power p_total - p_s).  The
end-to-end distortion is evaluated on a grid over p_s which is repeatedly
recentered around the incumbent best point, a derivative-free search that
needs no smoothness assumptions on the composed objective.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import (DistortionReport, PowerAllocation, SystemConfig,
                    assemble_report, sensing_distortion, source_eigenvalue)
from .waterfilling import reverse_waterfill, uniform_allocation, waterfill_capacity


@dataclass(frozen=True)
class SeparatedSolution:
    """Best split found, with the allocations realizing it on both waveforms."""

    p_s: float
    p_c: float
    report: DistortionReport
    sensing_alloc: PowerAllocation
    comm_alloc: PowerAllocation
    grid_evals: int


def evaluate_split(p_s: float, cfg: SystemConfig, alphas) -> DistortionReport:
    """End-to-end distortion of spending ``p_s`` on sensing and the rest on forwarding."""
    slack = 1e-12 * cfg.p_total
    if not (-slack <= p_s <= cfg.p_total + slack):
        raise ValueError(f"p_s must lie in [0, p_total], got {p_s!r}")
    p_s = min(max(float(p_s), 0.0), cfg.p_total)
    s_alloc = uniform_allocation(p_s, cfg.n_tx)
    d_s = sensing_distortion(s_alloc, cfg)
    eta = source_eigenvalue(s_alloc.lambdas, cfg)
    wf = waterfill_capacity(max(cfg.p_total - p_s, 0.0), alphas)
    rwf = reverse_waterfill(eta, cfg.m_s, wf.capacity)
    return assemble_report(d_s, rwf.d_c, wf.capacity, rwf.xi, eta)


def optimize_separated(cfg: SystemConfig, alphas, grid_l: int = 21,
                       tol: Optional[float] = None,
                       objective: Optional[Callable[[float], float]] = None
                       ) -> SeparatedSolution:
    """Grid-refinement search for the best sensing/communication power split.

    Each round evaluates grid_l equispaced points on the current interval and
    recenters on the best point's immediate neighbors (clamped at the
    endpoints), until the interval is narrower than tol (default
    1e-4 * p_total).  Ties go to the smaller p_s.  The returned split is the
    best point seen across all rounds, re-evaluated through the full
    pipeline; ``objective`` substitutes the scalar objective during the
    search only (used for testing the search itself).
    """
    if grid_l < 3:
        raise ValueError("grid_l must be at least 3")
    if tol is None:
        tol = 1e-4 * cfg.p_total
    if not tol > 0:
        raise ValueError("tol must be positive")
    if objective is None:
        def objective(p):
            return evaluate_split(p, cfg, alphas).d_sc

    lo, hi = 0.0, cfg.p_total
    best_p = 0.0
    best_v = np.inf
    evals = 0
    while True:
        grid = np.linspace(lo, hi, grid_l)
        vals = np.array([objective(p) for p in grid])
        evals += grid_l
        k = int(np.argmin(vals))
        if vals[k] < best_v:
            best_v = float(vals[k])
            best_p = float(grid[k])
        new_lo = float(grid[k - 1]) if k > 0 else lo
        new_hi = float(grid[k + 1]) if k < grid_l - 1 else hi
        if new_hi - new_lo >= hi - lo:
            # grid_l = 3 with an interior minimum reproduces the same
            # interval; contract around the best point to keep shrinking
            quarter = 0.25 * (hi - lo)
            new_lo = max(float(grid[k]) - quarter, lo)
            new_hi = min(float(grid[k]) + quarter, hi)
        lo, hi = new_lo, new_hi
        if hi - lo <= tol:
            break

    report = evaluate_split(best_p, cfg, alphas)
    p_c = max(cfg.p_total - best_p, 0.0)
    return SeparatedSolution(
        p_s=best_p,
        p_c=p_c,
        report=report,
        sensing_alloc=uniform_allocation(best_p, cfg.n_tx),
        comm_alloc=waterfill_capacity(p_c, alphas).alloc,
        grid_evals=evals,
    )
