"""The closed-form solution as an independent check on the recurrence.

Also shows why evaluating it is numerically delicate: the inner sum
alternates in sign and cancels catastrophically, so beyond a conditioning
threshold the evaluator switches to exact big-rational arithmetic.
"""

from fractions import Fraction

import numpy as np

from diracwalk import WalkParams, evolve, p, q
from diracwalk.closedform import p_rational
from diracwalk.walk import evolve_rational

EPS = 0.5

print(f"recurrence vs closed form, eps = {EPS}:")
for n in (2, 10, 40):
    state = evolve(WalkParams(EPS, n))
    worst = max(
        abs(p(n, int(k), EPS) - float(state.alpha[j] + state.beta[j]))
        for j, k in enumerate(state.sites)
    )
    print(f"  n = {n:3d}: worst per-site |difference| = {worst:.2e}")

print("\nconditioning of the inner sum (cancellation index = sum|t| / |sum t|):")
for n, k in ((10, 0), (30, 0), (60, 0)):
    res = q(n, k, EPS)
    route = "exact rationals" if res.exact else "float"
    print(
        f"  Q({n:2d}, {k}) = {res.value:.12f}   terms {res.n_terms:2d}   "
        f"cancellation {res.cancellation_index:.2e}   evaluated in {route}"
    )

print("\nexact-arithmetic cross-check (no floating point anywhere):")
e2 = Fraction(1, 4)  # eps = 1/2 exactly
alpha, beta = evolve_rational(e2, 12)
diffs = [
    p_rational(12, -12 + 2 * j, e2) - (alpha[j] + beta[j]) for j in range(13)
]
print(f"  n = 12: closed form minus recurrence, exact rationals: all zero -> {all(d == 0 for d in diffs)}")

print("\nprobability sums from the closed form alone:")
for n in (5, 25, 60):
    total = sum(p(n, k, EPS) for k in range(-n, n + 1, 2))
    print(f"  n = {n:3d}: sum_k P(n, k) = {total:.12f}")
