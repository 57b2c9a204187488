"""The extremal two-phase ladder chain that makes the p > 2 constant sharp.

The pair (X, Y) is a finite Markov chain realized as piecewise-constant
functions on nested partitions of [0, 1], so every expectation is exact.
Sending the step size to zero drives the weak-type ratio to the sharp
constant p^p / (2^p (p-1)).

Run:  python3 demos/04_extremal_ladder.py
"""

from sharpmart import (
    build_p_lt1_example,
    build_section_example,
    evaluate_ratio,
    harmonic_1d_example,
    resolve_params,
    section_ratio,
)

p = 3.0
params = resolve_params(p, 1 / 24, delta_hint=1.5)
print(f"Reference chain: p = {p}, X_0 = 1/24, delta = {params.delta}, "
      f"N = {params.n_steps} ladder rounds")
X, Y = build_section_example(params)
print("  exact martingale property:", X.check_martingale() and Y.check_martingale())
rep = evaluate_ratio(X, Y, p)
print(f"  P(Y reaches 1) = {rep.prob:.6f},  E|X_final|^p = {rep.moment:.8f},  "
      f"ratio = {rep.ratio:.5f}")

print("\nStep-size sweep at X_0 = 0.01 (limit 27/16 = 1.6875 up to the start offset):")
for hint in (0.5, 0.1, 0.02, 0.004, 0.0008):
    pr = resolve_params(p, 0.01, hint)
    r = section_ratio(p, 0.01, pr.delta, pr.n_steps)
    print(f"  delta = {pr.delta:8.5f}  N = {pr.n_steps:5d}  primed ratio = {r.primed_ratio:.6f}")

print("\nTwo-step pair showing the constant 2 is sharp below p = 1:")
f, g, report = build_p_lt1_example()
for pv in (0.1, 0.5, 0.9):
    row = report[pv]
    print(f"  p = {pv}: weak norm of g = {row['g_weak_norm']:.1f} "
          f"= 2 * strong norm of f = {2 * row['f_strong_norm']:.1f}")

print("\nOne-dimensional harmonic pair u = 1+x, v = 1-x on (-1, 3):")
h = harmonic_1d_example(0.5, [1.0, 1.9, 1.99, 1.9999])
for row in h["rows"]:
    print(f"  lambda = {row['lam']:7.4f}: level measure {row['mu']:.3f}, "
          f"lambda * mu^(1/p) = {row['value']:.4f}")
print("  the supremum approaches 2 = 2 * ||u||_p as lambda -> 2")
