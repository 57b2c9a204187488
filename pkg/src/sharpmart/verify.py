"""Named verification suites tying the analytic and stochastic modules
together.  Each suite returns ``(ok, report)`` where the report lists every
property with its worst observed margin."""

from __future__ import annotations

import numpy as np

from . import extremal, gfun, mc, orth, uweak, wfun
from .constants import kp

__all__ = ["SUITES", "run_suite"]


def _sample_strip(rng, n, x_hi=2.5):
    x = rng.uniform(0.0, x_hi, n)
    y = rng.uniform(-1 + 1e-6, 1 - 1e-6, n)
    return x, y


def suite_w(p=None, seed=0, n=20_000, **_):
    rng = np.random.default_rng(seed)
    x, y = _sample_strip(rng, n)
    h = rng.uniform(-1.0, 1.0, n)
    h = np.maximum(h, -x)  # keep x + h >= 0
    k = h * rng.uniform(-1.0, 1.0, n)
    tangent_ok = np.all(wfun.w_tangent_check(x, y, h, k))
    bounds_ok = np.all(wfun.w_bounds_check(x, y, p=0.5))
    report = {
        "suite": "w",
        "n": n,
        "tangent_ok": bool(tangent_ok),
        "bounds_ok": bool(bounds_ok),
    }
    return bool(tangent_ok and bounds_ok), report


def suite_u_weak(p=3.0, seed=0, n=20_000, **_):
    p = 3.0 if p is None else p
    ctx = uweak.build_context(p)
    rng = np.random.default_rng(seed)
    report = {"suite": "u-weak", "p": p, "n": n}

    gaps = []
    for ra, rb, bx, by in uweak.REGION_BOUNDARIES(ctx, max(200, n // 50)):
        va = uweak.u_branch(ctx, ra, bx, by)
        vb = uweak.u_branch(ctx, rb, bx, by)
        gaps.append(float(np.max(np.abs(va - vb))))
    report["boundary_gap_max"] = max(gaps)

    x, y = _sample_strip(rng, n, x_hi=1.8)
    h = rng.uniform(-1.0, 1.0, n)
    h = np.maximum(h, -x)
    k = h * rng.uniform(-1.0, 1.0, n)
    report["tangent_ok"] = bool(np.all(uweak.tangent_check(ctx, x, y, h, k)))

    inter = uweak.is_interior(ctx, x, y)
    xi, yi = x[inter], y[inter]
    uxx, uxy, uyy = uweak.u_second_derivs(ctx, xi, yi)
    hh = rng.uniform(-1.0, 1.0, xi.size)
    kk = hh * rng.uniform(-1.0, 1.0, xi.size)
    form = uxx * hh**2 + 2 * uxy * hh * kk + uyy * kk**2
    report["hessian_form_max"] = float(np.max(form))

    report["majorization_ok"] = bool(np.all(uweak.majorization_check(ctx, x, y)))
    xd = rng.uniform(0.0, 0.99, n // 10)
    diag = uweak.u_value(ctx, xd, xd)
    report["diagonal_nonpos_max"] = float(np.max(diag))
    phi, psi = uweak.u_gradient_ext(ctx, x, np.abs(y))
    report["u_y_min_upper_half"] = float(np.min(psi))

    ok = (
        report["boundary_gap_max"] < 1e-6
        and report["tangent_ok"]
        and report["hessian_form_max"] <= 1e-9
        and report["majorization_ok"]
        and report["diagonal_nonpos_max"] <= 1e-9
        and report["u_y_min_upper_half"] >= -1e-9
    )
    return bool(ok), report


def suite_u_orth(p=1.5, seed=7, n=60, **_):
    p = 1.5 if p is None else p
    ctx = orth.OrthContext(p)
    report = orth.orth_property_suite(ctx, n_samples=n, seed=seed)
    report["suite"] = "u-orth"
    return bool(report["passed"]), report


def suite_ode(p=3.0, **_):
    p = 3.0 if p is None else p
    rk = gfun.build_g_rk(p)
    bes = gfun.build_g_bessel(p)
    t = np.linspace(2 / p, min(rk.t_max, bes.t_max), 2000)
    cross = float(np.max(np.abs(rk.g(t) - bes.g(t))))
    resid = float(
        np.max(np.abs(rk.gprime(t) - gfun.g_rhs(p, t, rk.g(t))))
    )
    gp_min = float(np.min(rk.gprime(t)))
    h = gfun.HSolution(rk)
    s = np.linspace(1 + 1e-9, h.s_max - 1e-9, 500)
    hs = gfun.h_of(h, s)
    inv = float(np.max(np.abs(rk.g(hs) - s)))
    hp = gfun.h_prime(h, s)
    report = {
        "suite": "ode",
        "p": p,
        "cross_method_sup": cross,
        "ode_residual_max": resid,
        "gprime_min": gp_min,
        "inversion_residual_max": inv,
        "h_prime_max": float(np.max(hp)),
    }
    ok = (
        cross < 1e-6
        and resid < 1e-8
        and gp_min >= 1 - 1e-9
        and inv < 1e-9
        and report["h_prime_max"] <= 1 + 1e-9
    )
    return bool(ok), report


def suite_extremal(p=3.0, **_):
    p = 3.0 if p is None else p
    params = extremal.resolve_params(p, 1 / (8 * p), 1.5)
    X, Y = extremal.build_section_example(params)
    rep_eval = extremal.evaluate_ratio(X, Y, p)
    fast = extremal.section_ratio(p, params.x0, params.delta, params.n_steps)
    f, g, small_p = extremal.build_p_lt1_example()
    harm = extremal.harmonic_1d_example(0.5, [1.999999])
    report = {
        "suite": "extremal",
        "p": p,
        "x_martingale": X.check_martingale(),
        "y_martingale": Y.check_martingale(),
        "ratio_fast_vs_direct": abs(rep_eval.ratio - fast.ratio),
        "p_lt1_identity": all(v["identity_holds"] for v in small_p.values()),
        "harmonic_sup": harm["sup"],
    }
    ok = (
        report["x_martingale"]
        and report["y_martingale"]
        and report["ratio_fast_vs_direct"] < 1e-12
        and report["p_lt1_identity"]
        and report["harmonic_sup"] > 2 - 1e-5
        and f.check_martingale()
        and g.check_martingale()
    )
    return bool(ok), report


def suite_mc_weak_type(p=None, seed=0, n=10_000, workers=1, **_):
    cfg = mc.SimConfig(master_seed=seed, n_samples=n, workers=workers)
    ps = [p] if p is not None else [0.5, 3.0]
    reports = [mc.random_subordinate_pair_check(pv, cfg, n_pairs=50) for pv in ps]
    ok = all(r["passed"] for r in reports)
    return bool(ok), {"suite": "mc-weak-type", "checks": reports}


def suite_mc_strip(p=2.0, seed=42, n=200_000, dt=1e-2, workers=1, **_):
    p = 2.0 if p is None else p
    cfg = mc.SimConfig(master_seed=seed, n_samples=n, dt=dt, workers=workers)
    est = mc.strip_exit_moment(p, (0.0, 0.0), cfg)
    target = 1.0 / kp(p).value ** p if 1 <= p <= 2 else None
    report = {
        "suite": "mc-strip",
        "p": p,
        "n": n,
        "estimate": est.mean,
        "std_error": est.std_error,
        "seed": seed,
    }
    if target is None:
        return True, report
    report["bound"] = target
    report["margin_sigma"] = abs(est.mean - target) / est.std_error
    return bool(report["margin_sigma"] <= 4.0), report


def suite_harmonic(p=2.0, seed=13, n=100_000, dt=1e-2, workers=1, **_):
    p = 2.0 if p is None else p
    cfg = mc.SimConfig(master_seed=seed, n_samples=n, dt=dt, workers=workers)
    rect = mc.harmonic_rectangle_check(p, 20.0, 0.1, cfg)
    oned = extremal.harmonic_1d_example(0.5, [0.5, 1.0, 1.5, 1.9, 1.999])
    report = {"suite": "harmonic", "rectangle": rect, "one_dim_sup": oned["sup"]}
    ok = rect["passed"] and oned["sup"] > 1.99
    return bool(ok), report


SUITES = {
    "w": suite_w,
    "u-weak": suite_u_weak,
    "u-orth": suite_u_orth,
    "ode": suite_ode,
    "extremal": suite_extremal,
    "mc-weak-type": suite_mc_weak_type,
    "mc-strip": suite_mc_strip,
    "harmonic": suite_harmonic,
}


def run_suite(name: str, **kwargs):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
