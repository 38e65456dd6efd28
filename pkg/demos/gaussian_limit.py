"""The long-time distribution is a drifting normal.

Half the site probability, read as a density on the width-2 parity cells,
approaches exp(-eps^2 (k - k0)^2 / 2n) / sqrt(2 pi n / eps^2) with center
k0 = (1 - eps^2)/(2 eps^2); in physical units that is a diffusion with
constant D = c^2 delta / (2 eps^2) around x0 = (1 - eps^2) c delta / (2 eps^2).
"""

import math

import numpy as np

from diracwalk import (
    WalkParams,
    asymptotic_density,
    distribution,
    evolve,
    gaussian_lattice_tv,
    normal_density_lattice,
    physical_density,
)
from diracwalk.physical import dimensionless_params

EPS = 0.2

profile = asymptotic_density(epsilon=EPS)
print(f"eps = {EPS}: k0 = {profile.k0}, variance per step = {profile.variance_per_step}")
print(f"dimensionless x0 = {profile.x0}, D = {profile.diffusion}\n")

print("total-variation distance to the limiting normal:")
for n in (50, 100, 200, 400, 800):
    dist = distribution(evolve(WalkParams(EPS, n)))
    print(f"  n = {n:4d}: TV = {gaussian_lattice_tv(dist, EPS):.5f}")

n = 2000
dist = distribution(evolve(WalkParams(EPS, n)))
radius = 2.0 * math.sqrt(n) / EPS
mask = np.abs(dist.sites - profile.k0) <= radius
print(f"\ntwo-sigma containment at n = {n}: {float(dist.p[mask].sum()):.4f} (normal: 0.9545)")

print("\npointwise comparison at n = 400 near the center:")
d400 = distribution(evolve(WalkParams(EPS, 400)))
for k in (-40, 0, 12, 60, 140):
    j = int((k + 400) // 2)
    print(
        f"  k = {k:4d}: half-probability {0.5 * d400.p[j]:.6f}   "
        f"normal density {normal_density_lattice(400, EPS, float(k)):.6f}"
    )

phys = dimensionless_params(EPS)
t = 400.0
print(f"\nphysical density at t = {t} (c = delta = 1): peak near x0 = {profile.x0}")
for x in (0.0, 12.0, 100.0, 300.0):
    print(f"  x = {x:6.1f}: {physical_density(t, x, phys):.6e}")
