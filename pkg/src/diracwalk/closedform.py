"""Closed-form solution of the noisy-walk recurrence.

The generating-function solution of the recurrence is

    Q(n, k) = (1 + eps^2)^(-n) * sum_{s=0}^{(n-|k|)/2}
              C(n-2s, (n-k-2s)/2) * C(n-s, s) * (eps^4 - 1)^s

from which the component weights and site probabilities follow:

    alpha(n, n) = Q(n, n),                  beta(n, n) = 0
    alpha(n, k) = Q(n, k) - Q(n-1, k+1) / (1 + eps^2)
    beta(n, k)  = eps^2 * Q(n-1, k+1) / (1 + eps^2)
    p(n, k)     = Q(n, k) - (1 - eps^2)/(1 + eps^2) * Q(n-1, k+1)

for k = -n, -n+2, ..., n-2.  This module is the independent oracle for the
recurrence in :mod:`diracwalk.walk`: it never runs the recurrence itself.

Numerically the sum is nasty: for eps < 1 the factor (eps^4 - 1)^s
alternates in sign while the binomial products grow combinatorially, so the
terms cancel catastrophically (the intermediate terms exceed the result by
a factor ~4^n for small eps).  The float path computes term magnitudes by
log-gamma with sign tracking and accumulates them compensated in
descending magnitude order, which is exact roundoff hygiene but cannot
recover digits the terms never carried: once sum|t| * eps_mach approaches
the target accuracy, the evaluator escalates to exact big-integer /
big-rational arithmetic (integer binomials, eps^2 taken as the exact
binary rational of the given float) and rounds once at the end.  The
cancellation index sum|t| / |sum t| is reported either way.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lgamma

__all__ = [
    "AccuracyLossError",
    "ClosedFormResult",
    "q",
    "alpha_beta",
    "p",
    "ballistic_peak",
    "q_rational",
    "alpha_beta_rational",
    "p_rational",
]

# Cancellation index above which the pure float path is declared garbage.
CANCELLATION_LIMIT = 1e12
# Escalate to exact arithmetic once the estimated absolute error of the
# float path exceeds this (well below the 1e-9 oracle tolerance).
_ESCALATE_ABS_ERR = 1e-12
# Roundoff constant for the error estimate: a few ulp per term from
# exp/lgamma plus the compensated summation itself.
_ERR_FACTOR = 8.0 * 2.0**-53

_NEGATIVE_TOL = -1e-10


class AccuracyLossError(ArithmeticError):
    """The floating-point evaluation lost too much precision to be usable."""


@dataclass(frozen=True)
class ClosedFormResult:
    """Value of Q(n, k) plus conditioning diagnostics.

    ``cancellation_index`` is sum|term| / |sum term| (1 means no
    cancellation); ``exact`` records whether the big-rational path was used
    to produce the returned value.
    """

    value: float
    n_terms: int
    cancellation_index: float
    exact: bool = False


def _check_site(n: int, k: int) -> None:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if abs(k) > n:
        raise ValueError(f"|k| must be <= n, got k={k}, n={n}")
    if (n - k) % 2 != 0:
        raise ValueError(f"k must have the parity of n, got k={k}, n={n}")


def _log_comb(a: int, b: int) -> float:
    return lgamma(a + 1) - lgamma(b + 1) - lgamma(a - b + 1)


def q(n: int, k: int, epsilon: float, *, allow_exact: bool = True) -> ClosedFormResult:
    """Evaluate Q(n, k) for noise strength ``epsilon``.

    Parameters
    ----------
    n, k:
        Step count and site; ``|k| <= n`` and ``k = n (mod 2)`` required.
    epsilon:
        Noise strength >= 0.
    allow_exact:
        When True (default) the evaluator silently escalates to exact
        rational arithmetic if the float path cannot reach ~1e-12 absolute
        accuracy, so the returned value is reliable for any n.  When False
        the pure float path is used and :class:`AccuracyLossError` is
        raised once the cancellation index exceeds ``CANCELLATION_LIMIT``.

    Raises
    ------
    ValueError
        On parity violation, |k| > n, or negative epsilon.
    AccuracyLossError
        Only with ``allow_exact=False``, when cancellation destroyed the
        float result.
    """
    _check_site(n, k)
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")

    y = epsilon**4 - 1.0
    s_max = (n - abs(k)) // 2
    n_terms = s_max + 1

    if y == 0.0 or s_max == 0:
        # Single surviving term: no cancellation possible.
        log_q = _log_comb(n, (n - k) // 2) - n * math.log1p(epsilon**2)
        return ClosedFormResult(math.exp(log_q), n_terms, 1.0)

    log_abs_y = math.log(abs(y))
    sign_y = -1.0 if y < 0.0 else 1.0
    logs = []
    signs = []
    for s in range(n_terms):
        logs.append(
            _log_comb(n - 2 * s, (n - k - 2 * s) // 2)
            + _log_comb(n - s, s)
            + s * log_abs_y
        )
        signs.append(sign_y**s)

    # Rescale by the largest magnitude, then Neumaier-sum in descending order.
    peak = max(logs)
    order = sorted(range(n_terms), key=lambda i: logs[i], reverse=True)
    total = 0.0
    comp = 0.0
    abs_total = 0.0
    for i in order:
        t = signs[i] * math.exp(logs[i] - peak)
        abs_total += abs(t)
        new = total + t
        if abs(total) >= abs(t):
            comp += (total - new) + t
        else:
            comp += (t - new) + total
        total = new
    total += comp

    log_pref = peak - n * math.log1p(epsilon**2)
    cancellation = abs_total / abs(total) if total != 0.0 else math.inf
    est_abs_err = _ERR_FACTOR * abs_total * math.exp(log_pref)

    if not allow_exact:
        if cancellation > CANCELLATION_LIMIT:
            raise AccuracyLossError(
                f"Q({n}, {k}, eps={epsilon}): cancellation index "
                f"{cancellation:.2e} exceeds {CANCELLATION_LIMIT:.0e}; "
                "fall back to the recurrence"
            )
        value = math.copysign(math.exp(log_pref + math.log(abs(total))), total) if total else 0.0
        return ClosedFormResult(value, n_terms, cancellation)

    if est_abs_err > _ESCALATE_ABS_ERR or not math.isfinite(cancellation):
        value = float(q_rational(n, k, Fraction(epsilon) ** 2))
        return ClosedFormResult(value, n_terms, cancellation, exact=True)

    value = math.copysign(math.exp(log_pref + math.log(abs(total))), total) if total else 0.0
    return ClosedFormResult(value, n_terms, cancellation)


def alpha_beta(n: int, k: int, epsilon: float) -> tuple[float, float]:
    """Component weights (alpha, beta) at site k after n steps.

    Tiny negative values from roundoff are clamped to 0; anything below
    -1e-10 means the evaluation went wrong and raises.
    """
    _check_site(n, k)
    if k == n:
        return q(n, n, epsilon).value, 0.0
    qk = q(n, k, epsilon).value
    qup = q(n - 1, k + 1, epsilon).value
    denom = 1.0 + epsilon**2
    alpha = qk - qup / denom
    beta = epsilon**2 * qup / denom
    for name, v in (("alpha", alpha), ("beta", beta)):
        if v < _NEGATIVE_TOL:
            raise AccuracyLossError(
                f"{name}({n}, {k}, eps={epsilon}) = {v:.3e} is negative beyond roundoff"
            )
    return max(alpha, 0.0), max(beta, 0.0)


def p(n: int, k: int, epsilon: float) -> float:
    """Site probability P(n, k) from the closed form."""
    _check_site(n, k)
    if k == n:
        return q(n, n, epsilon).value
    qk = q(n, k, epsilon).value
    qup = q(n - 1, k + 1, epsilon).value
    value = qk - (1.0 - epsilon**2) / (1.0 + epsilon**2) * qup
    if value < _NEGATIVE_TOL or value > 1.0 + 1e-10:
        raise AccuracyLossError(
            f"P({n}, {k}, eps={epsilon}) = {value:.3e} outside [0, 1] beyond roundoff"
        )
    return min(max(value, 0.0), 1.0)


def ballistic_peak(n: int, epsilon: float) -> float:
    """P(n, n) = (1 + eps^2)^(-n), evaluated in log space to avoid
    accumulating the powering error."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return math.exp(-n * math.log1p(epsilon**2))


def q_rational(n: int, k: int, epsilon_sq: Fraction) -> Fraction:
    """Exact Q(n, k) in big-rational arithmetic, parametrized by eps^2."""
    _check_site(n, k)
    y = epsilon_sq * epsilon_sq - 1
    total = Fraction(0)
    for s in range((n - abs(k)) // 2 + 1):
        total += comb(n - 2 * s, (n - k - 2 * s) // 2) * comb(n - s, s) * y**s
    return total / (1 + epsilon_sq) ** n


def alpha_beta_rational(n: int, k: int, epsilon_sq: Fraction) -> tuple[Fraction, Fraction]:
    """Exact (alpha, beta) at site k after n steps."""
    _check_site(n, k)
    if k == n:
        return q_rational(n, n, epsilon_sq), Fraction(0)
    qup = q_rational(n - 1, k + 1, epsilon_sq)
    denom = 1 + epsilon_sq
    return q_rational(n, k, epsilon_sq) - qup / denom, epsilon_sq * qup / denom


def p_rational(n: int, k: int, epsilon_sq: Fraction) -> Fraction:
    """Exact P(n, k) after n steps."""
    _check_site(n, k)
    if k == n:
        return q_rational(n, n, epsilon_sq)
    return q_rational(n, k, epsilon_sq) - (1 - epsilon_sq) / (1 + epsilon_sq) * q_rational(
        n - 1, k + 1, epsilon_sq
    )
