"""Construction of the monotone auxiliary function G and its inverse h.

G solves the Riccati-type initial value problem

    G'(t) = (p/2)^{p+1} t^{p-2} (t + 1 - G(t))^2,   G(2/p) = 1,

for a fixed p > 2.  Two independent constructions are provided: a
fourth-order one-step integration (the primary path) and an evaluation
through a combination of modified Bessel functions, which linearize the
equation.  The inverse h = G^{-1} is obtained from the tabulated solution
by monotone inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.interpolate import CubicHermiteSpline

__all__ = [
    "ConstructionError",
    "GSolution",
    "HSolution",
    "g_rhs",
    "build_g_rk",
    "build_g_bessel",
    "h_of",
    "h_prime",
    "default_t_max",
]


class ConstructionError(RuntimeError):
    pass


def default_t_max(p: float) -> float:
    return max(10.0, 20.0 / p)


def g_rhs(p: float, t, g):
    return (p / 2) ** (p + 1) * t ** (p - 2) * (t + 1 - g) ** 2


@dataclass(frozen=True)
class GSolution:
    """Tabulated increasing solution with a C1 cubic interpolant."""

    p: float
    grid: np.ndarray
    g_values: np.ndarray
    gprime_values: np.ndarray
    method: str
    _spline: CubicHermiteSpline = field(repr=False, default=None)

    def __post_init__(self):
        t, g, gp = self.grid, self.g_values, self.gprime_values
        if np.any(np.diff(t) <= 0):
            raise ConstructionError("grid must be strictly increasing")
        if abs(t[0] - 2 / self.p) > 1e-12 or abs(g[0] - 1.0) > 1e-12:
            raise ConstructionError("solution must start at (2/p, 1)")
        if abs(gp[0] - self.p / 2) > 1e-9:
            raise ConstructionError(f"initial slope {gp[0]} != p/2")
        bad = np.nonzero(np.diff(g) <= 0)[0]
        if bad.size:
            raise ConstructionError(f"solution not increasing at t={t[bad[0]]}")
        bad = np.nonzero(g >= t + 1)[0]
        if bad.size:
            raise ConstructionError(f"bound G < t+1 violated at t={t[bad[0]]}")
        bad = np.nonzero(gp < 1.0 - 1e-12)[0]
        if bad.size:
            raise ConstructionError(f"slope < 1 at t={t[bad[0]]}")
        object.__setattr__(self, "_spline", CubicHermiteSpline(t, g, gp))

    @property
    def t_max(self) -> float:
        return float(self.grid[-1])

    @property
    def s_max(self) -> float:
        return float(self.g_values[-1])

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 2 / self.p - 1e-12) or np.any(t > self.t_max + 1e-12):
            raise ValueError(
                f"argument outside tabulated range [{2 / self.p}, {self.t_max}]"
            )
        return np.clip(t, 2 / self.p, self.t_max)

    def g(self, t):
        return self._spline(self._check_domain(t))

    def gprime(self, t):
        return g_rhs(self.p, self._check_domain(t), self.g(t))


def build_g_rk(p: float, t_max: float | None = None, step: float = 1e-3) -> GSolution:
    """Integrate the initial value problem with the classical 4-stage scheme."""
    if not p > 2:
        raise ValueError(f"requires p > 2, got {p}")
    if t_max is None:
        t_max = default_t_max(p)
    t0 = 2 / p
    if not t_max > t0:
        raise ValueError("t_max must exceed 2/p")
    if step > 1e-3:
        raise ValueError("step must be <= 1e-3")
    n = int(math.ceil((t_max - t0) / step))
    hh = (t_max - t0) / n
    ts = t0 + hh * np.arange(n + 1)
    ts[-1] = t_max
    gs = np.empty(n + 1)
    gs[0] = 1.0
    g = 1.0
    coeff = (p / 2) ** (p + 1)
    for i in range(n):
        t = ts[i]
        # The gap t+1-G contracts at rate 2*coeff*t^(p-2)*(t+1-G); keep the
        # step well inside the stability region by local subdivision.
        rate = 2 * coeff * t ** (p - 2) * (t + 1 - g)
        m = max(1, int(math.ceil(hh * rate / 0.4)))
        sub = hh / m
        for j in range(m):
            tt = t + j * sub
            k1 = g_rhs(p, tt, g)
            k2 = g_rhs(p, tt + sub / 2, g + sub / 2 * k1)
            k3 = g_rhs(p, tt + sub / 2, g + sub / 2 * k2)
            k4 = g_rhs(p, tt + sub, g + sub * k3)
            g = g + sub / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if g >= tt + sub + 1:
                raise ConstructionError(f"G >= t+1 during integration at t={tt + sub}")
        gs[i + 1] = g
    return GSolution(p, ts, gs, g_rhs(p, ts, gs), "rk4")


def _bessel_pair(p: float, t, prec: int = 40):
    """k(t) and k'(t) for the combination fixed by k(2/p)=1, k'(2/p)=p^2/4.

    Worked in arbitrary precision: the Bessel arguments grow like t^{p/2}
    and overflow double precision well inside the tabulation range.
    """
    with mp.workdps(prec):
        pm = mp.mpf(p)
        nu = (pm - 1) / pm
        c = (pm / 2) ** ((pm - 1) / 2)

        def basis(tt):
            tt = mp.mpf(tt)
            z = c * tt ** (pm / 2)
            dz = c * (pm / 2) * tt ** (pm / 2 - 1)
            w = tt ** ((pm - 1) / 2)
            dw = ((pm - 1) / 2) * tt ** ((pm - 3) / 2)
            vals = []
            for a in (-nu, nu):
                ia = mp.besseli(a, z)
                dia = mp.besseli(a + 1, z) + a / z * ia
                vals.append((w * ia, dw * ia + w * dia * dz))
            (k1, dk1), (k2, dk2) = vals
            return k1, k2, dk1, dk2

        t0 = mp.mpf(2) / pm
        k1, k2, dk1, dk2 = basis(t0)
        det = k1 * dk2 - k2 * dk1
        if abs(det) < mp.mpf(10) ** (-prec + 5):
            raise ConstructionError("singular system for the basis coefficients")
        rhs1, rhs2 = mp.mpf(1), pm**2 / 4
        a1 = (rhs1 * dk2 - k2 * rhs2) / det
        a2 = (k1 * rhs2 - rhs1 * dk1) / det

        ks, dks = [], []
        for tt in np.asarray(t, dtype=float):
            k1, k2, dk1, dk2 = basis(tt)
            k = a1 * k1 + a2 * k2
            dk = a1 * dk1 + a2 * dk2
            if k <= 0 or dk <= 0:
                raise ConstructionError(f"non-positive linearized solution at t={tt}")
            ks.append(k)
            dks.append(dk)
        return ks, dks


def build_g_bessel(p: float, t_max: float | None = None, n_nodes: int = 300) -> GSolution:
    """Evaluate G through the Bessel linearization of the Riccati equation.

    Nodes are cubically graded towards the left endpoint, where the
    solution's curvature concentrates; interpolation error there dominates
    the uniform-grid budget by orders of magnitude.
    """
    if not p > 2:
        raise ValueError(f"requires p > 2, got {p}")
    if t_max is None:
        t_max = default_t_max(p)
    u = np.linspace(0.0, 1.0, n_nodes)
    ts = 2 / p + (t_max - 2 / p) * u**3
    ts[0] = 2 / p
    ks, dks = _bessel_pair(p, ts)
    with mp.workdps(40):
        pm = mp.mpf(p)
        coeff = (mp.mpf(2) / pm) ** (pm + 1)
        gs = np.array(
            [
                float(mp.mpf(t) + 1 - coeff * dk / (k * mp.mpf(t) ** (pm - 2)))
                for t, k, dk in zip(ts, ks, dks)
            ]
        )
    gs[0] = 1.0  # analytic value at the left endpoint; float rounding only
    return GSolution(p, ts, gs, g_rhs(p, ts, gs), "bessel")


@dataclass(frozen=True)
class HSolution:
    """Inverse of a tabulated GSolution, defined on [1, s_max]."""

    source: GSolution

    @property
    def p(self) -> float:
        return self.source.p

    @property
    def s_max(self) -> float:
        return self.source.s_max


def h_of(sol: HSolution, s):
    """t with G(t) = s, by monotone inversion refined with Newton steps."""
    src = sol.source
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 1 - 1e-12) or np.any(s_arr > src.s_max + 1e-12):
        raise ValueError(f"argument outside [1, {src.s_max}]")
    s_arr = np.clip(s_arr, 1.0, src.s_max)
    t = np.interp(s_arr, src.g_values, src.grid)
    lo, hi = 2 / src.p, src.t_max
    for _ in range(60):
        resid = src.g(t) - s_arr
        t_new = np.clip(t - resid / src.gprime(t), lo, hi)
        if np.max(np.abs(t_new - t)) < 1e-13:
            t = t_new
            break
        t = t_new
    return t if np.ndim(s) else float(t)


def h_prime(sol: HSolution, s):
    """(2/p)^{p+1} h(s)^{2-p} (h(s) - s + 1)^{-2}; lies in (0, 1]."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 1):
        raise ValueError("h' is defined for s > 1")
    p = sol.p
    h = h_of(sol, s_arr)
    val = (2 / p) ** (p + 1) * h ** (2 - p) * (h - s_arr + 1) ** (-2)
    return val if np.ndim(s) else float(val)
