"""Tests for the Monte Carlo harnesses.

Statistical assertions are seeded, so these tests are deterministic:
estimates must be bit-identical across repeated runs and worker counts,
and the margin checks run at fixed seeds with generous sigma budgets.
"""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from sharpmart.constants import kp
from sharpmart.extremal import resolve_params, section_ratio
from sharpmart.mc import (
    Estimate,
    SimConfig,
    _pair_chunk,
    harmonic_rectangle_check,
    random_subordinate_pair_check,
    section_chain_mc,
    strip_exit_bias_pair,
    strip_exit_moment,
    strip_exit_samples,
    weak_type_orth_check,
)

SCHEMA = json.loads(
    (Path(__file__).resolve().parents[1] / "docs" / "report.schema.json").read_text()
)


def check_schema(report):
    import jsonschema

    jsonschema.validate(report, SCHEMA)


# -------------------------------------------------------------- configuration


@pytest.mark.parametrize(
    "kwargs",
    [
        {"master_seed": 1, "n_samples": 0},
        {"master_seed": 1, "n_samples": 10, "dt": 0.0},
        {"master_seed": 1, "n_samples": 10, "dt": 0.02},
        {"master_seed": 1, "n_samples": 10, "workers": 0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


# -------------------------------------------------------------- determinism


def test_same_seed_is_bit_identical():
    cfg = SimConfig(master_seed=7, n_samples=50_000)
    a = strip_exit_moment(2.0, (0.0, 0.0), cfg)
    b = strip_exit_moment(2.0, (0.0, 0.0), cfg)
    assert a == b


def test_worker_count_does_not_change_results():
    a = strip_exit_moment(2.0, (0.0, 0.0), SimConfig(master_seed=7, n_samples=50_000))
    b = strip_exit_moment(
        2.0, (0.0, 0.0), SimConfig(master_seed=7, n_samples=50_000, workers=3)
    )
    assert a == b


def test_different_seeds_differ():
    cfg1 = SimConfig(master_seed=7, n_samples=20_000)
    cfg2 = SimConfig(master_seed=8, n_samples=20_000)
    a = strip_exit_moment(2.0, (0.0, 0.0), cfg1)
    b = strip_exit_moment(2.0, (0.0, 0.0), cfg2)
    assert a.mean != b.mean


# ------------------------------------------------------------- strip sampling


def test_strip_exit_moment_p2_matches_theory():
    # E|B_tau|^2 = 1 for exit from |y| < 1 started at the origin
    est = strip_exit_moment(2.0, (0.0, 0.0), SimConfig(master_seed=3, n_samples=100_000))
    assert abs(est.mean - 1.0) <= 4 * est.std_error
    assert est.std_error < 0.02


def test_std_error_scales_like_sqrt_n():
    small = strip_exit_moment(2.0, (0.0, 0.0), SimConfig(master_seed=5, n_samples=25_000))
    large = strip_exit_moment(2.0, (0.0, 0.0), SimConfig(master_seed=5, n_samples=100_000))
    assert small.std_error / large.std_error == pytest.approx(2.0, rel=0.2)


def test_start_near_barrier_exits_with_small_moment():
    est = strip_exit_moment(2.0, (0.0, 0.999), SimConfig(master_seed=2, n_samples=30_000))
    assert est.mean < 0.02


def test_strip_exit_samples_sides():
    cfg = SimConfig(master_seed=11, n_samples=30_000)
    xs, side = strip_exit_samples((0.0, 0.0), cfg, r_bound=5.0)
    assert xs.shape == side.shape == (30_000,)
    assert np.all(np.abs(xs) <= 5.0 + 1e-12)
    # side flags the rare |x| = R exits; nearly all paths leave through |y| = 1
    assert side.mean() < 0.05


def test_coupled_bias_pair_is_small():
    cfg = SimConfig(master_seed=13, n_samples=60_000)
    coarse, fine = strip_exit_bias_pair(2.0, (0.0, 0.0), cfg)
    # coupling cancels sampling noise, so the dt-refinement gap is far
    # below the marginal standard errors
    assert abs(coarse.mean - fine.mean) < coarse.std_error


# ------------------------------------------------------------ report checks


def test_weak_type_orth_check_p2():
    rep = weak_type_orth_check(2.0, SimConfig(master_seed=21, n_samples=80_000))
    assert rep["passed"]
    assert rep["margin_sigma"] <= 3.0
    assert rep["bound"] == 1.0
    check_schema(rep)


def test_weak_type_orth_check_p1():
    rep = weak_type_orth_check(1.0, SimConfig(master_seed=22, n_samples=80_000))
    assert rep["passed"]
    assert rep["estimate"] == pytest.approx(1.0, abs=4 * rep["std_error"])
    check_schema(rep)


def test_weak_type_orth_check_domain():
    cfg = SimConfig(master_seed=1, n_samples=10)
    with pytest.raises(ValueError):
        weak_type_orth_check(3.0, cfg)


# ------------------------------------------------------------- random pairs


def test_pair_chunk_is_deterministic_and_valid():
    a = _pair_chunk(((5, 10_001), 4_000, 3.0))
    b = _pair_chunk(((5, 10_001), 4_000, 3.0))
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    g_star, g_fin, f_pp = a
    assert np.all(g_star >= np.abs(g_fin) - 1e-15)
    assert np.all(g_star >= 1.0)  # |g_0| = 1
    assert f_pp >= 1.0  # running sup starts at E f_0^p = 1


@pytest.mark.parametrize("p, bound", [(0.5, math.sqrt(2)), (3.0, 27 / 16)])
def test_random_pairs_respect_weak_bound(p, bound):
    rep = random_subordinate_pair_check(
        p, SimConfig(master_seed=17, n_samples=4_000), n_pairs=25
    )
    assert rep["passed"]
    assert rep["bound"] == pytest.approx(bound, rel=1e-14)
    assert rep["estimate"] <= bound + 4 * rep["std_error"]
    assert rep["worst_fixed_time_ratio"] <= rep["bound"] + 4 * rep["std_error"]
    check_schema(rep)


def test_random_pairs_rejects_intermediate_exponents():
    with pytest.raises(ValueError):
        random_subordinate_pair_check(1.5, SimConfig(master_seed=1, n_samples=10))


# ------------------------------------------------------------- ladder chain


def test_section_chain_matches_exact_atoms():
    params = resolve_params(3.0, 1 / 24, 1.5)
    rep = section_chain_mc(params, SimConfig(master_seed=31, n_samples=300_000))
    exact = section_ratio(3.0, params.x0, params.delta, params.n_steps)
    assert rep["passed"]
    assert rep["bound"] == pytest.approx(exact.moment, rel=1e-14)
    assert rep["prob_exact"] == pytest.approx(exact.prob, rel=1e-14)
    assert rep["margin_sigma"] <= 3.0 and rep["prob_margin_sigma"] <= 3.0
    check_schema(rep)


# --------------------------------------------------------- rectangle check


def test_harmonic_rectangle_sampled():
    rep = harmonic_rectangle_check(
        2.0, 6.0, 1e-3, SimConfig(master_seed=41, n_samples=60_000)
    )
    assert rep["passed"]
    assert rep["bound"] == pytest.approx(1.0 / kp(2.0).value ** 2, rel=1e-14)
    assert rep["mu_v_ge_1"] >= 0.95
    check_schema(rep)


def test_harmonic_rectangle_constant_branch():
    rep = harmonic_rectangle_check(
        1.5, 10.0, 1e-3, SimConfig(master_seed=1, n_samples=10), u_const=0.7
    )
    assert rep["passed"]
    assert rep["estimate"] == 0.7**1.5
    assert rep["std_error"] == 0.0
    assert rep["exact_constant_branch"]
    check_schema(rep)


def test_harmonic_rectangle_domain():
    cfg = SimConfig(master_seed=1, n_samples=10)
    with pytest.raises(ValueError):
        harmonic_rectangle_check(2.0, 3.0, 1e-3, cfg)
    with pytest.raises(ValueError):
        harmonic_rectangle_check(3.0, 6.0, 1e-3, cfg)


# ---------------------------------------------------------------- estimates


def test_estimate_fields():
    est = strip_exit_moment(1.0, (0.0, 0.0), SimConfig(master_seed=9, n_samples=20_000))
    assert isinstance(est, Estimate)
    assert est.n == 20_000
    assert est.seed == 9
    assert est.std_error > 0
