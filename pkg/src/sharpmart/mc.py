"""Seeded Monte Carlo harnesses for the martingale inequalities.

Strip-exit Brownian motion (with Brownian-bridge barrier correction),
random non-negative martingale pairs under increment domination, pathwise
sampling of the atomic ladder chain, and the rectangle harmonic check.

Determinism contract: work is cut into fixed-size chunks; chunk i uses
``SeedSequence([master_seed, i])``, so reports are bit-identical for a
given master seed regardless of worker count or scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import kp, weak_constant_nonneg
from .extremal import ExtremalParams, _ladder_weights, section_ratio

__all__ = [
    "SimConfig",
    "Estimate",
    "strip_exit_samples",
    "strip_exit_moment",
    "strip_exit_bias_pair",
    "weak_type_orth_check",
    "random_subordinate_pair_check",
    "section_chain_mc",
    "harmonic_rectangle_check",
]

_CHUNK = 1 << 15
_MAX_TIME = 60.0


@dataclass(frozen=True)
class SimConfig:
    master_seed: int
    n_samples: int
    dt: float = 1e-2
    lambda_grid: tuple = ()
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 < self.dt <= 1e-2:
            raise ValueError("dt must lie in (0, 1e-2] for continuous schemes")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n: int
    seed: int


def _estimate(values: np.ndarray, seed: int) -> Estimate:
    n = values.size
    se = float(values.std(ddof=1)) / math.sqrt(n) if n > 1 else 0.0
    return Estimate(mean=float(values.mean()), std_error=se, n=n, seed=seed)


def _strip_chunk(args):
    """One chunk of 2-D Brownian paths started at (x0, y0), absorbed on
    |y| = 1 (bridge-corrected) and optionally on |x| = r_bound.

    Returns (x at exit, side-exit flags).
    """
    seed_pair, n, x0, y0, dt, r_bound = args
    rng = np.random.default_rng(np.random.SeedSequence(seed_pair))
    sd = math.sqrt(dt)
    x = np.full(n, x0)
    y = np.full(n, y0)
    x_out = np.empty(n)
    side_out = np.zeros(n, dtype=bool)
    filled = 0
    for _ in range(int(_MAX_TIME / dt)):
        k = x.size
        if k == 0:
            break
        dx = rng.normal(0.0, sd, k)
        dy = rng.normal(0.0, sd, k)
        u = rng.random(k)
        y1 = y + dy
        up = y1 >= 1.0
        dn = y1 <= -1.0
        crossed = up | dn
        # bridge: exit during the step even though both endpoints are inside
        p_up = np.exp(-2.0 * (1.0 - y) * (1.0 - y1) / dt)
        p_dn = np.exp(-2.0 * (1.0 + y) * (1.0 + y1) / dt)
        bridge = ~crossed & (u < p_up + p_dn)
        theta = np.full(k, 0.5)
        np.divide(1.0 - y, dy, out=theta, where=up)
        np.divide(-1.0 - y, dy, out=theta, where=dn)
        exited = crossed | bridge
        x_exit = x + theta * dx
        x1 = x + dx
        side = ~exited & (np.abs(x1) >= r_bound)
        x_exit[side] = np.sign(x1[side]) * r_bound
        exited |= side
        m = int(exited.sum())
        if m:
            x_out[filled : filled + m] = x_exit[exited]
            side_out[filled : filled + m] = side[exited]
            filled += m
            keep = ~exited
            x, y, x1, y1 = x[keep], y[keep], x1[keep], y1[keep]
        x, y = x1, y1
    if x.size:  # censored tail: probability ~ e^{-pi^2 T / 8}, negligible
        x_out[filled:] = x
    return x_out, side_out


def _run_chunks(worker, args_list, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(worker, args_list))
    return [worker(a) for a in args_list]


def _chunk_sizes(n):
    sizes = [_CHUNK] * (n // _CHUNK)
    if n % _CHUNK:
        sizes.append(n % _CHUNK)
    return sizes


def strip_exit_samples(start, cfg: SimConfig, r_bound: float = np.inf):
    """x-coordinates at exit (and side-exit flags) for cfg.n_samples paths."""
    x0, y0 = float(start[0]), float(start[1])
    if not abs(y0) < 1:
        raise ValueError("start must satisfy |y| < 1")
    args = [
        ((cfg.master_seed, i), n, x0, y0, cfg.dt, r_bound)
        for i, n in enumerate(_chunk_sizes(cfg.n_samples))
    ]
    parts = _run_chunks(_strip_chunk, args, cfg.workers)
    xs = np.concatenate([p[0] for p in parts])
    side = np.concatenate([p[1] for p in parts])
    return xs, side


def strip_exit_moment(p: float, start, cfg: SimConfig) -> Estimate:
    """p-th absolute moment of the first coordinate at the strip exit."""
    xs, _ = strip_exit_samples(start, cfg)
    return _estimate(np.abs(xs) ** p, cfg.master_seed)


def _coupled_chunk(args):
    """Coarse-dt and half-dt strip simulations driven by the same fine
    increments; used to isolate discretization bias from sampling noise."""
    seed_pair, n, x0, y0, dt = args
    rng = np.random.default_rng(np.random.SeedSequence(seed_pair))
    sdf = math.sqrt(dt / 2)
    hdt = dt / 2
    state = {}
    for tag in ("coarse", "fine"):
        state[tag] = dict(
            x=np.full(n, x0), y=np.full(n, y0), done=np.zeros(n, dtype=bool),
            out=np.zeros(n),
        )

    def advance(tag, dx, dy, u, step_dt):
        s = state[tag]
        act = ~s["done"]
        if not act.any():
            return
        x, y = s["x"][act], s["y"][act]
        dxa, dya, ua = dx[act], dy[act], u[act]
        y1 = y + dya
        up = y1 >= 1.0
        dn = y1 <= -1.0
        crossed = up | dn
        p_up = np.exp(-2.0 * (1.0 - y) * (1.0 - y1) / step_dt)
        p_dn = np.exp(-2.0 * (1.0 + y) * (1.0 + y1) / step_dt)
        exited = crossed | (~crossed & (ua < p_up + p_dn))
        theta = np.full(x.size, 0.5)
        np.divide(1.0 - y, dya, out=theta, where=up)
        np.divide(-1.0 - y, dya, out=theta, where=dn)
        idx = np.flatnonzero(act)
        s["out"][idx[exited]] = (x + theta * dxa)[exited]
        s["done"][idx[exited]] = True
        s["x"][idx[~exited]] = (x + dxa)[~exited]
        s["y"][idx[~exited]] = y1[~exited]

    for _ in range(int(_MAX_TIME / dt)):
        both_done = state["coarse"]["done"] & state["fine"]["done"]
        if both_done.all():
            break
        if both_done.any():  # joint compaction keeps the coupling aligned
            keep = ~both_done
            for tag in ("coarse", "fine"):
                s = state[tag]
                s.setdefault("final", []).append(s["out"][both_done])
                for key in ("x", "y", "done", "out"):
                    s[key] = s[key][keep]
        n_act = state["coarse"]["x"].size
        dx1 = rng.normal(0.0, sdf, n_act)
        dy1 = rng.normal(0.0, sdf, n_act)
        u1 = rng.random(n_act)
        dx2 = rng.normal(0.0, sdf, n_act)
        dy2 = rng.normal(0.0, sdf, n_act)
        u2 = rng.random(n_act)
        advance("fine", dx1, dy1, u1, hdt)
        advance("fine", dx2, dy2, u2, hdt)
        advance("coarse", dx1 + dx2, dy1 + dy2, u1, dt)
    results = []
    for tag in ("coarse", "fine"):
        s = state[tag]
        s["out"][~s["done"]] = s["x"][~s["done"]]
        pieces = s.setdefault("final", [])
        pieces.append(s["out"])
        results.append(np.concatenate(pieces))
    return tuple(results)


def strip_exit_bias_pair(p: float, start, cfg: SimConfig):
    """(coarse, fine) moment estimates at dt and dt/2 on coupled paths.

    The shared driving noise cancels most sampling variance, so the
    difference of the two means measures the discretization bias.
    """
    x0, y0 = float(start[0]), float(start[1])
    args = [
        ((cfg.master_seed, i), n, x0, y0, cfg.dt)
        for i, n in enumerate(_chunk_sizes(cfg.n_samples))
    ]
    parts = _run_chunks(_coupled_chunk, args, cfg.workers)
    coarse = np.concatenate([p_[0] for p_ in parts])
    fine = np.concatenate([p_[1] for p_ in parts])
    return (
        _estimate(np.abs(coarse) ** p, cfg.master_seed),
        _estimate(np.abs(fine) ** p, cfg.master_seed),
    )


def _margin_report(check, p, est: Estimate, bound, direction=">="):
    """Margin of an estimate against its analytic target in sigma units."""
    gap = est.mean - bound if direction == ">=" else bound - est.mean
    sigma = abs(gap) / est.std_error if est.std_error > 0 else math.inf
    return {
        "check": check,
        "p": p,
        "n": est.n,
        "estimate": est.mean,
        "std_error": est.std_error,
        "bound": bound,
        "margin_sigma": sigma,
        "seed": est.seed,
    }


def weak_type_orth_check(p: float, cfg: SimConfig) -> dict:
    """Sharpness identity for the stopped orthogonal Brownian pair:
    the maximal-function level probability equals 1 exactly, so the weak
    bound forces the scaled exit moment kp(p)^p * E|M_tau|^p to equal 1."""
    if not 1 <= p <= 2:
        raise ValueError("requires 1 <= p <= 2")
    est = strip_exit_moment(p, (0.0, 0.0), cfg)
    kpp = kp(p).value ** p
    scaled = Estimate(est.mean * kpp, est.std_error * kpp, est.n, est.seed)
    report = _margin_report("weak_type_orth", p, scaled, 1.0)
    report["crossing_prob"] = 1.0
    report["passed"] = bool(report["margin_sigma"] <= 4.0)
    report["warning"] = bool(3.0 < report["margin_sigma"] <= 4.0)
    return report


def _pair_chunk(args):
    """One random non-negative martingale f with a sign-transformed g;
    returns the data the weak-type ratio needs."""
    seed_pair, n_paths, p = args
    rng = np.random.default_rng(np.random.SeedSequence(seed_pair))
    n_steps = int(rng.integers(5, 26))
    # centered two-point step: a with prob q, -b with prob 1-q, qa = (1-q)b
    q = rng.uniform(0.2, 0.8)
    a = rng.uniform(0.2, 1.0)
    b = q * a / (1 - q)
    sigma = rng.uniform(0.1, 0.9) / max(a, b)
    f = np.ones(n_paths)
    g = np.where(rng.random(n_paths) < 0.5, 1.0, -1.0)  # g0 = +-f0
    g_final = g.copy()
    g_star = np.abs(g)
    f_moment_sup = 1.0
    for _ in range(n_steps):
        v = np.where(rng.random(n_paths) < 0.5, 1.0, -1.0)  # predictable sign
        xi = np.where(rng.random(n_paths) < q, a, -b)
        df = f * sigma * xi
        f = f + df
        if np.any(f < 0):
            raise RuntimeError("generator bug: negative martingale value")
        g_final = g_final + v * df
        np.maximum(g_star, np.abs(g_final), out=g_star)
        f_moment_sup = max(f_moment_sup, float(np.mean(f**p)))
    return g_star, np.abs(g_final), f_moment_sup


def random_subordinate_pair_check(
    p: float, cfg: SimConfig, n_pairs: int = 100
) -> dict:
    """Empirical weak-type ratios over random dominated pairs.

    For each pair the ratio lambda^p P(g* >= lambda) / ||f||_p^p is scanned
    over a lambda grid; no ratio may exceed the sharp constant by more than
    4 sigma.  Both the running-supremum and the final-time level sets are
    reported, since the two weak norms coincide only in the limit.
    """
    if not (p < 1 or p >= 2):
        raise ValueError("regime must be p < 1 or p >= 2")
    bound = weak_constant_nonneg(p).value ** p
    worst = {"ratio": -math.inf}
    worst_fixed = -math.inf
    n_warn = 0
    for j in range(n_pairs):
        g_star, g_fin, f_pp = _pair_chunk(
            ((cfg.master_seed, 10_000 + j), cfg.n_samples, p)
        )
        if cfg.lambda_grid:
            grid = np.asarray(cfg.lambda_grid)
        else:
            med = float(np.median(g_star))
            grid = np.geomspace(0.1 * med, 10 * med, 20)
        n = g_star.size
        for lam in grid:
            prob = float(np.mean(g_star >= lam))
            ratio = lam**p * prob / f_pp
            se = lam**p * math.sqrt(max(prob * (1 - prob), 1e-12) / n) / f_pp
            margin = (ratio - bound) / se
            if 3.0 < margin <= 4.0:
                n_warn += 1
            if ratio > worst["ratio"]:
                worst = {
                    "ratio": ratio,
                    "lambda": float(lam),
                    "pair": j,
                    "std_error": se,
                    "margin_sigma": margin,
                }
            worst_fixed = max(
                worst_fixed, lam**p * float(np.mean(g_fin >= lam)) / f_pp
            )
    return {
        "check": "random_subordinate_pairs",
        "p": p,
        "n": cfg.n_samples * n_pairs,
        "estimate": worst["ratio"],
        "std_error": worst["std_error"],
        "bound": bound,
        "margin_sigma": worst["margin_sigma"],
        "seed": cfg.master_seed,
        "worst_lambda": worst["lambda"],
        "worst_fixed_time_ratio": worst_fixed,
        "n_pairs": n_pairs,
        "warnings_3_4_sigma": n_warn,
        "passed": bool(worst["margin_sigma"] <= 4.0),
    }


def section_chain_mc(params: ExtremalParams, cfg: SimConfig) -> dict:
    """Pathwise sampling of the atomic ladder chain; cross-checks the exact
    exit probability and final moment from the atom bookkeeping."""
    p, delta, n_steps = params.p, params.delta, params.n_steps
    even, odd = _ladder_weights(p, delta, n_steps)
    keep_odd = odd[0] / even[0]            # 1/(1+delta)
    keep_even = even[1] / odd[0]           # q(1+delta)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, 0]))
    n = cfg.n_samples
    x = np.full(n, params.x0)
    alive = np.ones(n, dtype=bool)
    frozen = np.zeros(n, dtype=bool)
    for m in range(n_steps):
        u = rng.random(n)
        shed = alive & (u >= keep_odd)
        x[shed] = 0.0
        alive &= ~shed
        x[alive] *= 1 + delta
        u = rng.random(n)
        stay = u < keep_even
        up = alive & ~stay
        x[alive] *= (1 + 2 * delta / p) / (1 + delta)
        x[up] *= 2.0
        frozen |= up
        alive &= stay
    u = rng.random(n)
    top = alive & (u < 0.5)
    x[alive & ~top] = 0.0
    x[top] = 2 / p
    prob = _estimate(top.astype(float), cfg.master_seed)
    moment = _estimate(np.abs(x) ** p, cfg.master_seed)
    exact = section_ratio(p, params.x0, delta, n_steps)
    rep = {
        "check": "section_chain_mc",
        "p": p,
        "n": n,
        "estimate": moment.mean,
        "std_error": moment.std_error,
        "bound": exact.moment,
        "margin_sigma": abs(moment.mean - exact.moment) / moment.std_error,
        "seed": cfg.master_seed,
        "prob_estimate": prob.mean,
        "prob_std_error": prob.std_error,
        "prob_exact": exact.prob,
        "prob_margin_sigma": abs(prob.mean - exact.prob) / prob.std_error,
    }
    rep["passed"] = bool(
        rep["margin_sigma"] <= 3.0 and rep["prob_margin_sigma"] <= 3.0
    )
    return rep


def harmonic_rectangle_check(
    p: float, R: float, eps: float, cfg: SimConfig, u_const: float | None = None
) -> dict:
    """Exit sampling from the rectangle (-R, R) x (-1, 1) for the harmonic
    pair u(x,y) = x, v(x,y) = y: as R grows the u-moment tends to the strip
    value 1/kp(p)^p and almost all mass exits through |v| = 1."""
    if R < 5:
        raise ValueError("requires R >= 5")
    if not 1 <= p <= 2:
        raise ValueError("requires 1 <= p <= 2")
    if u_const is not None:
        return {
            "check": "harmonic_rectangle",
            "p": p,
            "n": 0,
            "estimate": abs(u_const) ** p,
            "std_error": 0.0,
            "bound": abs(u_const) ** p,
            "margin_sigma": 0.0,
            "seed": cfg.master_seed,
            "exact_constant_branch": True,
            "passed": True,
        }
    xs, side = strip_exit_samples((0.0, 0.0), cfg, r_bound=R)
    moment = _estimate(np.abs(xs) ** p, cfg.master_seed)
    target = 1.0 / kp(p).value ** p
    rep = _margin_report("harmonic_rectangle", p, moment, target)
    mu = _estimate(1.0 - side.astype(float), cfg.master_seed)
    rep["mu_v_ge_1"] = mu.mean
    rep["mu_std_error"] = mu.std_error
    rep["R"] = R
    rep["eps"] = eps
    rep["passed"] = bool(rep["margin_sigma"] <= 4.0 and mu.mean >= 0.95)
    return rep
