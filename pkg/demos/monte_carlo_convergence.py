"""Sampled sign sequences converge on the exact channel average.

Error bars shrink like 1/sqrt(M); for n small enough the 2^n-sequence
average is computed outright and matches the recurrence to roundoff.
"""

import numpy as np

from diracwalk import WalkParams, evolve, exhaustive_channel, run_ensemble

EPS, N, SEED = 0.2, 60, 2024

params = WalkParams(EPS, N)
state = evolve(params)

print(f"eps = {EPS}, n = {N} steps\n")
print(f"{'M':>8} {'worst |mc - exact|':>20} {'worst z-score':>14}")
for m in (500, 2000, 8000, 32000):
    est = run_ensemble(params, m, seed=SEED)
    resid = np.abs(est.mean_p - (state.alpha + state.beta))
    guard = np.maximum(est.stderr_p, 1e-15)
    print(f"{m:8d} {resid.max():20.3e} {float((resid / guard).max()):14.2f}")

print("\nexhaustive channel average (all 2^n sequences), small n:")
for n in (4, 8, 12):
    small = WalkParams(EPS, n)
    est = exhaustive_channel(small)
    exact = evolve(small)
    worst = max(
        np.abs(est.mean_alpha - exact.alpha).max(),
        np.abs(est.mean_beta - exact.beta).max(),
    )
    print(f"  n = {n:2d}: {est.n_realizations:5d} sequences, worst residual {worst:.2e}")

print("\nsame seed, different worker counts, identical bits:")
a = run_ensemble(params, 4000, seed=SEED, n_workers=1)
b = run_ensemble(params, 4000, seed=SEED, n_workers=4)
print(f"  means equal: {np.array_equal(a.mean_p, b.mean_p)}")
print(f"  errors equal: {np.array_equal(a.stderr_p, b.stderr_p)}")
