"""Walk through the ballistic-to-diffusive transition at eps = 0.2.

The walker starts in the right-moving internal state.  Early on nearly all
probability rides the light cone (site k = n); as noise accumulates, a
diffusing bulk takes over and the light-cone peak decays geometrically.
"""

import numpy as np

from diracwalk import (
    WalkParams,
    ballistic_peak,
    crossover,
    distribution,
    empirical_moments,
    evolve,
    exact_moments,
    classify_regime,
)

EPS = 0.2

print(f"noise strength eps = {EPS}\n")

print("light-cone peak P(n, n) = (1 + eps^2)^(-n):")
for n in (0, 10, 25, 50, 100, 200):
    state = evolve(WalkParams(EPS, n))
    peak = float(state.alpha[-1] + state.beta[-1])
    print(f"  n = {n:4d}:  recurrence {peak:.6f}   closed form {ballistic_peak(n, EPS):.6f}")

print("\nsecond moment: quadratic growth turning linear")
print(f"{'n':>6} {'S2 exact':>14} {'n^2 (ballistic)':>16} {'n/eps^2 - c (diffusive)':>24} regime")
for n in (2, 5, 10, 25, 50, 100, 400, 1600):
    _, s1, s2 = exact_moments(n, EPS)
    ballistic = float(n) ** 2
    diffusive = n / EPS**2 - (1 - EPS**4) / (2 * EPS**4)
    print(f"{n:6d} {s2:14.2f} {ballistic:16.1f} {diffusive:24.1f} {classify_regime(n, EPS)}")

n_star = crossover(EPS)
print(f"\nlog-log slope of S2 crosses 1.5 at n* = {n_star} (n*·eps^2 = {n_star*EPS**2:.2f})")

print("\nempirical moments agree with the closed form:")
state = evolve(WalkParams(EPS, 300))
emp = empirical_moments(distribution(state), 2)
_, s1, s2 = exact_moments(300, EPS)
print(f"  n = 300: S1 empirical {emp[1]:.8f} vs exact {s1:.8f}")
print(f"           S2 empirical {emp[2]:.6f} vs exact {s2:.6f}")

print("\nwhere the probability sits at a few snapshots:")
for n in (20, 200):
    dist = distribution(evolve(WalkParams(EPS, n)))
    k_mean = float(np.dot(dist.p, dist.sites))
    k_mode = int(dist.sites[np.argmax(dist.p)])
    print(
        f"  n = {n:4d}: mean site {k_mean:7.2f}, most likely site {k_mode:4d}, "
        f"light-cone mass {dist.p[-1]:.4f}"
    )
