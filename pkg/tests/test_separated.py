import math

import numpy as np
import pytest

from cas import (alphas_from_channel, evaluate_split, generate_rayleigh,
                 optimize_separated, waterfill_capacity)
from conftest import reference_system


def channel_alphas(seed, cfg):
    return alphas_from_channel(generate_rayleigh(seed, cfg.m_c, cfg.n_tx), cfg)


def test_full_sensing_split(cfg10):
    alphas = channel_alphas(0, cfg10)
    rep = evaluate_split(cfg10.p_total, cfg10, alphas)
    # everything on sensing: d_s = 2.5; zero rate costs the full source, 2.5
    assert rep.d_s == pytest.approx(2.5, rel=1e-12)
    assert rep.d_c == pytest.approx(2.5, rel=1e-12)
    assert rep.d_sc == pytest.approx(5.0, rel=1e-12)
    assert rep.capacity == 0.0


def test_zero_sensing_split(cfg10):
    alphas = channel_alphas(0, cfg10)
    rep = evaluate_split(0.0, cfg10, alphas)
    assert rep.d_s == pytest.approx(5.0, rel=1e-12)
    assert rep.d_c == 0.0
    assert rep.d_sc == pytest.approx(5.0, rel=1e-12)
    assert rep.capacity > 0


def test_split_out_of_range_raises(cfg10):
    alphas = channel_alphas(0, cfg10)
    with pytest.raises(ValueError):
        evaluate_split(-0.01, cfg10, alphas)
    with pytest.raises(ValueError):
        evaluate_split(cfg10.p_total + 0.01, cfg10, alphas)


def test_split_golden_value(cfg10):
    # frozen from two independent implementations of the same pipeline
    rep = evaluate_split(0.5, cfg10, channel_alphas(0, cfg10))
    assert rep.d_s == pytest.approx(10.0 / 3.0, rel=1e-12)
    assert rep.d_sc == pytest.approx(4.683086456039, rel=1e-9)
    assert rep.capacity == pytest.approx(10.545196005445, rel=1e-9)


def test_dead_link_makes_split_irrelevant():
    cfg = reference_system(10.0)
    alphas = np.zeros(cfg.n_tx)
    for p_s in (0.0, 0.3, 0.7, 1.0):
        rep = evaluate_split(p_s, cfg, alphas)
        assert rep.d_sc == pytest.approx(0.5 * cfg.m_s * cfg.n_tx * cfg.var_eta * 2,
                                         rel=1e-12)
    sol = optimize_separated(cfg, alphas)
    assert sol.report.d_sc == pytest.approx(5.0, rel=1e-9)


def test_optimizer_finds_hook_minimum(cfg10):
    alphas = channel_alphas(0, cfg10)
    sol = optimize_separated(cfg10, alphas, objective=lambda p: (p - 0.3) ** 2)
    assert sol.p_s == pytest.approx(0.3, abs=1e-4)
    # the reported distortion is re-evaluated through the real pipeline
    assert sol.report.d_sc == pytest.approx(
        evaluate_split(sol.p_s, cfg10, alphas).d_sc, rel=1e-12)


def test_optimizer_beats_endpoint_neighborhoods(cfg10):
    alphas = channel_alphas(0, cfg10)
    sol = optimize_separated(cfg10, alphas)
    assert sol.report.d_sc < evaluate_split(0.05, cfg10, alphas).d_sc
    assert sol.report.d_sc < evaluate_split(0.95, cfg10, alphas).d_sc
    assert 0.0 < sol.p_s < cfg10.p_total


def test_optimizer_solution_consistency(cfg10):
    alphas = channel_alphas(3, cfg10)
    sol = optimize_separated(cfg10, alphas)
    assert sol.p_s + sol.p_c == pytest.approx(cfg10.p_total, rel=1e-9)
    assert np.allclose(sol.sensing_alloc.lambdas, sol.p_s / cfg10.n_tx)
    wf = waterfill_capacity(sol.p_c, alphas)
    assert np.allclose(sol.comm_alloc.lambdas, wf.alloc.lambdas)
    assert sol.report.d_sc <= evaluate_split(0.0, cfg10, alphas).d_sc + 1e-12
    assert sol.report.d_sc <= evaluate_split(1.0, cfg10, alphas).d_sc + 1e-12


def test_optimizer_round_budget(cfg10):
    alphas = channel_alphas(1, cfg10)
    for grid_l, tol in ((21, 1e-4), (9, 1e-3), (5, 1e-2)):
        sol = optimize_separated(cfg10, alphas, grid_l=grid_l, tol=tol)
        rounds = sol.grid_evals // grid_l
        bound = math.ceil(math.log(cfg10.p_total / tol)
                          / math.log(max(grid_l, 4) / 2.0)) + 1
        assert rounds <= bound


def test_optimizer_tiny_grid_terminates(cfg10):
    alphas = channel_alphas(2, cfg10)
    sol = optimize_separated(cfg10, alphas, grid_l=3, tol=1e-3)
    full = optimize_separated(cfg10, alphas)
    assert sol.report.d_sc <= full.report.d_sc + 1e-2


def test_optimizer_validation(cfg10):
    alphas = channel_alphas(0, cfg10)
    with pytest.raises(ValueError):
        optimize_separated(cfg10, alphas, grid_l=2)
    with pytest.raises(ValueError):
        optimize_separated(cfg10, alphas, tol=0.0)
