"""Water-filling solvers for the forward link and its reverse (rate-distortion) dual.

Both solvers are plain bisections on the water level: capacity water-filling
bisects the level directly, reverse water-filling bisects its logarithm to
stay stable across many orders of magnitude.  Bisection is branch-free and
deterministic, and each forward solve carries a KKT residual so optimality
is certified rather than assumed.
"""

from dataclasses import dataclass

import numpy as np

from .model import PowerAllocation

_MAX_BISECT = 200
_XI_FLOOR = 1e-300


@dataclass(frozen=True)
class WaterfillResult:
    """Capacity-optimal allocation over parallel channels.

    level is the water level xi_c: active channels receive level - 1/alpha_i.
    kkt_residual is the worst relative violation among the power budget,
    stationarity on active channels and dual feasibility on inactive ones.
    degenerate marks the all-zero-gain channel with positive budget, where
    any allocation is optimal and zeros are returned.
    """

    alloc: PowerAllocation
    level: float
    capacity: float
    kkt_residual: float = 0.0
    degenerate: bool = False


@dataclass(frozen=True)
class ReverseWaterfillResult:
    """Distortion-minimal forwarding of parallel Gaussian sources at a rate budget.

    xi is the reverse water level: each component is delivered at distortion
    min(xi, eig).  d_c multiplies the per-component sum by the source
    multiplicity.  saturated marks rate targets beyond the representable
    range, where xi clamps to a tiny floor.  degenerate marks an all-zero
    source, which costs nothing to deliver at any rate.
    """

    xi: float
    per_component_d: np.ndarray
    d_c: float
    rate: float
    degenerate: bool = False
    saturated: bool = False

    def __post_init__(self):
        d = np.array(self.per_component_d, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "per_component_d", d)


def uniform_allocation(p_s: float, n: int) -> PowerAllocation:
    """Split ``p_s`` evenly over ``n`` eigenchannels (the isotropic profile)."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if p_s < 0:
        raise ValueError("power must be nonnegative")
    return PowerAllocation(np.full(int(n), float(p_s) / int(n)))


def _kkt_residual(lam: np.ndarray, level: float, alphas: np.ndarray,
                  p_c: float) -> float:
    grads = np.divide(alphas, alphas * lam + 1.0)
    mu = 1.0 / level
    r_power = abs(lam.sum() - p_c) / max(p_c, np.finfo(float).tiny)
    active = lam > 0
    r_stat = 0.0
    if active.any():
        r_stat = float(np.max(np.abs(grads[active] - mu))) / mu
    r_dual = 0.0
    if (~active).any():
        r_dual = float(np.max(np.maximum(grads[~active] - mu, 0.0))) / mu
    return max(r_power, r_stat, r_dual)


def waterfill_capacity(p_c: float, alphas) -> WaterfillResult:
    """Maximize the forward-link rate over parallel channels with budget ``p_c``.

    Args:
        p_c: power budget, >= 0.
        alphas: per-eigenchannel gains, nonnegative, zeros allowed.

    Returns:
        WaterfillResult with lam_i = max(level - 1/alpha_i, 0), the sum of
        active powers matching p_c to relative 1e-8 or tighter.

    The level is bisected between min(1/alpha) and max(1/alpha) + p_c until
    the bracket collapses to floating-point adjacency (at most 200 steps).
    """
    a = np.asarray(alphas, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("alphas must be a nonempty 1-d vector")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError("alphas must be nonnegative and finite")
    if p_c < 0:
        raise ValueError("power budget must be nonnegative")
    n = a.size
    pos = a > 0
    if not pos.any():
        zero = PowerAllocation(np.zeros(n))
        return WaterfillResult(zero, 0.0, 0.0, 0.0, degenerate=bool(p_c > 0))
    inv = 1.0 / a[pos]
    if p_c == 0:
        zero = PowerAllocation(np.zeros(n))
        return WaterfillResult(zero, float(inv.min()), 0.0, 0.0)
    lo = float(inv.min())
    hi = float(inv.max()) + float(p_c)
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if np.maximum(mid - inv, 0.0).sum() > p_c:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 4.0 * np.spacing(hi):
            break
    level = 0.5 * (lo + hi)
    lam = np.zeros(n)
    lam[pos] = np.maximum(level - inv, 0.0)
    alloc = PowerAllocation(lam)
    capacity = float(np.sum(np.log1p(a * lam)))
    return WaterfillResult(alloc, level, capacity,
                           _kkt_residual(lam, level, a, float(p_c)))


def reverse_waterfill(source_eigs, multiplicity: int,
                      target_rate: float) -> ReverseWaterfillResult:
    """Minimize total forwarding distortion of parallel sources at a rate budget.

    Args:
        source_eigs: per-component source variances, nonnegative.
        multiplicity: how many independent copies of each component are
            forwarded (receive antennas of the sensing array).
        target_rate: available rate in nats per block, >= 0.

    Returns:
        ReverseWaterfillResult with per-component distortion min(xi, eig),
        d_c = multiplicity * sum of those, and the rate actually consumed,
        which matches target_rate to relative 1e-8 whenever the target is
        attainable and positive.

    The level is bisected in log space between a tiny floor and the largest
    eigenvalue; a zero target yields xi = max(eig) and zero rate.
    """
    eigs = np.asarray(source_eigs, dtype=float)
    if eigs.ndim != 1 or eigs.size == 0:
        raise ValueError("source_eigs must be a nonempty 1-d vector")
    if np.any(eigs < 0) or not np.all(np.isfinite(eigs)):
        raise ValueError("source eigenvalues must be nonnegative and finite")
    if not isinstance(multiplicity, (int, np.integer)) or multiplicity < 1:
        raise ValueError(f"multiplicity must be a positive integer, got {multiplicity!r}")
    if target_rate < 0 or not np.isfinite(target_rate):
        raise ValueError("target rate must be nonnegative and finite")
    m = int(multiplicity)
    lmax = float(eigs.max())
    if lmax <= 0:
        return ReverseWaterfillResult(0.0, np.zeros_like(eigs), 0.0, 0.0,
                                      degenerate=True)

    def rate_at(xi):
        mask = eigs > xi
        if not mask.any():
            return 0.0
        return m * float(np.sum(np.log(eigs[mask] / xi)))

    saturated = False
    if target_rate == 0:
        xi = lmax
    elif rate_at(_XI_FLOOR) < target_rate:
        xi = _XI_FLOOR
        saturated = True
    else:
        u_lo = np.log(_XI_FLOOR)
        u_hi = np.log(lmax)
        for _ in range(_MAX_BISECT):
            u_mid = 0.5 * (u_lo + u_hi)
            if rate_at(np.exp(u_mid)) > target_rate:
                u_lo = u_mid
            else:
                u_hi = u_mid
            if u_hi - u_lo <= 1e-13:
                break
        xi = float(np.exp(0.5 * (u_lo + u_hi)))
    per = np.minimum(xi, eigs)
    return ReverseWaterfillResult(float(xi), per, m * float(per.sum()),
                                  rate_at(xi), False, saturated)
