"""Modified Bessel function of the first kind, by direct series summation."""

from __future__ import annotations

import math

__all__ = ["bessel_i"]


def bessel_i(alpha: float, z: float, rtol: float = 1e-12) -> float:
    """I_alpha(z) = sum_k (z/2)^{2k+alpha} / (k! Gamma(alpha+k+1)).

    The series is summed term by term with the recurrence
    term_{k+1} = term_k * (z/2)^2 / ((k+1)(alpha+k+1)); it converges for
    every z but the terms overflow for z beyond ~1400, so accuracy is
    guaranteed for z <= 50 only (see the test suite).
    """
    if not alpha > -1:
        raise ValueError(f"order must be > -1, got {alpha}")
    if z < 0:
        raise ValueError(f"argument must be >= 0, got {z}")
    if z == 0:
        if alpha == 0:
            return 1.0
        return 0.0 if alpha > 0 else math.inf
    q = z * z / 4
    term = (z / 2) ** alpha / math.gamma(alpha + 1)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (alpha + k))
        total += term
        if term < rtol * total and k > z / 2:
            return total
        if k > 100_000:
            raise RuntimeError(f"series for I_{alpha}({z}) failed to converge")
