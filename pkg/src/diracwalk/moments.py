"""Moments, regime classification and the large-n normal limit.

The p-th moment of a site distribution is S(p) = sum_k P[n, k] * k^p.  The
first two are known in closed form:

    S(1) = (1 - e)/(2e) * [1 - ((1 - e)/(1 + e))^n]
    S(2) = [2ne - 1 + e^2 + (1 - e)^(n+1)/(1 + e)^(n-1)] / (2 e^2)

with e = eps^2.  The second moment grows like n^2 while n*eps^2 << 1
(ballistic) and like n/eps^2 - (1 - eps^4)/(2 eps^4) once n*eps^2 >> 1
(diffusive); the changeover sits where n*eps^2 is of order one.  For large
n the distribution approaches a normal density centered at
k0 = (1 - eps^2)/(2 eps^2) with variance n/eps^2, and on the physical axis
a diffusion with x0 = (1 - eps^2)*c*delta/(2 eps^2), D = c^2*delta/(2 eps^2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .physical import PhysicalParams, derive_epsilon, diffusion_parameters
from .walk import Distribution

__all__ = [
    "MomentReport",
    "AsymptoticDensity",
    "empirical_moments",
    "exact_moments",
    "regime_expansions",
    "asymptotic_moment",
    "crossover",
    "msd_log_slope",
    "classify_regime",
    "moment_report",
    "asymptotic_density",
    "normal_density_lattice",
    "physical_density",
    "gaussian_lattice_tv",
]

# n * eps^2 bounds separating the named regimes (the middle band is the
# crossover; the theory only pins down "order one").
_BALLISTIC_MAX = 1.0 / 3.0
_DIFFUSIVE_MIN = 3.0


def empirical_moments(dist: Distribution, p_max: int) -> np.ndarray:
    """Moments S(0..p_max) of a site distribution."""
    if p_max < 0:
        raise ValueError(f"p_max must be >= 0, got {p_max}")
    k = dist.sites.astype(float)
    return np.array([float(np.dot(dist.p, k**p)) for p in range(p_max + 1)])


def _decay_ratio_power(n: float, e: float) -> float:
    # ((1 - e)/(1 + e))^n in log space; e = eps^2 <= 1 here.
    if e >= 1.0:
        return 0.0 if n > 0 else 1.0
    return math.exp(n * (math.log1p(-e) - math.log1p(e)))


def _tail_term(n: float, e: float) -> float:
    # (1 - e)^(n+1) / (1 + e)^(n-1), log space with sign handling for e > 1.
    if e == 1.0:
        return 0.0
    if e < 1.0:
        return math.exp((n + 1) * math.log1p(-e) - (n - 1) * math.log1p(e))
    sign = -1.0 if (int(n) + 1) % 2 else 1.0
    return sign * math.exp((n + 1) * math.log(e - 1.0) - (n - 1) * math.log1p(e))


def _s1(n: float, epsilon: float) -> float:
    e = epsilon**2
    if e == 0.0:
        return float(n)
    return (1.0 - e) / (2.0 * e) * (1.0 - _decay_ratio_power(n, e))


def _s2(n: float, epsilon: float) -> float:
    e = epsilon**2
    if e == 0.0:
        return float(n) ** 2
    return (2.0 * n * e - 1.0 + e * e + _tail_term(n, e)) / (2.0 * e * e)


def exact_moments(n: int, epsilon: float) -> tuple[float, float, float]:
    """Closed-form (S0, S1, S2); the eps -> 0 limits (n, n^2) are analytic."""
    return 1.0, _s1(n, epsilon), _s2(n, epsilon)


def regime_expansions(n: int, epsilon: float) -> tuple[float, float]:
    """Leading second-moment behavior in each regime.

    Returns (ballistic, diffusive) = (n^2, n/eps^2 - (1 - eps^4)/(2 eps^4)).
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    e2 = epsilon**2
    return float(n) ** 2, n / e2 - (1.0 - e2 * e2) / (2.0 * e2 * e2)


def asymptotic_moment(n: int, epsilon: float, p: int) -> float:
    """Leading large-n moment S(p).

    Even p = 2m:  n^m (2m-1)! / ((m-1)! 2^(m-1) eps^(2m));
    odd p = 2m+1: n^m (2m+1)! / (m! 2^m eps^(2m)) * (1 - eps^2)/(2 eps^2);
    p = 0 gives 1.
    """
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if p == 0:
        return 1.0
    if p % 2 == 0:
        m = p // 2
        return (
            float(n) ** m
            * math.factorial(2 * m - 1)
            / (math.factorial(m - 1) * 2.0 ** (m - 1) * epsilon ** (2 * m))
        )
    m = (p - 1) // 2
    return (
        float(n) ** m
        * math.factorial(2 * m + 1)
        / (math.factorial(m) * 2.0**m * epsilon ** (2 * m))
        * (1.0 - epsilon**2)
        / (2.0 * epsilon**2)
    )


_HALF_DECADE = math.sqrt(10.0)


def msd_log_slope(n: float, epsilon: float) -> float:
    """Local log-log slope of S(2), centered over one decade in n."""
    lo = _s2(n / _HALF_DECADE, epsilon)
    hi = _s2(n * _HALF_DECADE, epsilon)
    return (math.log(hi) - math.log(lo)) / math.log(10.0)


def crossover(epsilon: float, slope_threshold: float = 1.5) -> int:
    """Smallest n where the local log-log slope of S(2) drops below threshold.

    Only 0 < eps < 1 has a ballistic regime to cross out of; elsewhere a
    ValueError is raised.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"crossover requires 0 < epsilon < 1, got {epsilon}")
    n_cap = max(1000, int(100.0 / epsilon**2))
    for n in range(1, n_cap + 1):
        if msd_log_slope(float(n), epsilon) < slope_threshold:
            return n
    raise ArithmeticError(f"no crossover found up to n = {n_cap} for eps = {epsilon}")


def classify_regime(n: int, epsilon: float) -> str:
    """'ballistic', 'crossover' or 'diffusive', keyed by n * eps^2."""
    x = n * epsilon**2
    if x <= _BALLISTIC_MAX:
        return "ballistic"
    if x >= _DIFFUSIVE_MIN:
        return "diffusive"
    return "crossover"


@dataclass(frozen=True)
class MomentReport:
    n: int
    empirical: np.ndarray
    closed_form_s0: float
    closed_form_s1: float
    closed_form_s2: float
    regime: str


def moment_report(dist: Distribution, epsilon: float, p_max: int = 2) -> MomentReport:
    """Empirical moments of ``dist`` next to the closed-form values."""
    s0, s1, s2 = exact_moments(dist.n, epsilon)
    return MomentReport(
        n=dist.n,
        empirical=empirical_moments(dist, p_max),
        closed_form_s0=s0,
        closed_form_s1=s1,
        closed_form_s2=s2,
        regime=classify_regime(dist.n, epsilon),
    )


@dataclass(frozen=True)
class AsymptoticDensity:
    """Parameters of the limiting normal distribution.

    ``k0`` and ``variance_per_step`` describe the lattice-coordinate
    density; ``x0`` (meters) and ``diffusion`` (m^2/s) the physical one.
    """

    k0: float
    variance_per_step: float
    x0: float
    diffusion: float


def asymptotic_density(
    epsilon: float | None = None, phys: PhysicalParams | None = None
) -> AsymptoticDensity:
    """Limit-density parameters from eps (dimensionless, c = delta = 1) or
    from physical parameters."""
    if (epsilon is None) == (phys is None):
        raise ValueError("provide exactly one of epsilon or phys")
    if phys is not None:
        eps = derive_epsilon(phys)
        x0, diff = diffusion_parameters(phys)
    else:
        eps = float(epsilon)
        if eps <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {eps}")
        x0 = (1.0 - eps**2) / (2.0 * eps**2)
        diff = 1.0 / (2.0 * eps**2)
    return AsymptoticDensity(
        k0=(1.0 - eps**2) / (2.0 * eps**2),
        variance_per_step=1.0 / eps**2,
        x0=x0,
        diffusion=diff,
    )


def normal_density_lattice(n: int, epsilon: float, k):
    """Limiting normal density in the lattice coordinate k (unit integral
    over the real line)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    k0 = (1.0 - epsilon**2) / (2.0 * epsilon**2)
    k = np.asarray(k, dtype=float)
    dens = np.exp(-(epsilon**2) * (k - k0) ** 2 / (2.0 * n)) / math.sqrt(
        2.0 * math.pi * n / epsilon**2
    )
    return dens if dens.ndim else float(dens)


def physical_density(t: float, x, phys: PhysicalParams):
    """Asymptotic position density (1/meters) at time t > 0 seconds."""
    if t <= 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    x0, diff = diffusion_parameters(phys)
    x = np.asarray(x, dtype=float)
    dens = np.exp(-((x - x0) ** 2) / (4.0 * diff * t)) / math.sqrt(4.0 * math.pi * diff * t)
    return dens if dens.ndim else float(dens)


def _normal_cdf(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.vectorize(math.erf)(z / math.sqrt(2.0)))


def gaussian_lattice_tv(dist: Distribution, epsilon: float) -> float:
    """Total-variation distance between a walk distribution and its normal limit.

    Site k owns the width-2 cell [k-1, k+1) (the parity lattice spacing),
    over which the limiting density is integrated; normal mass falling
    outside the support counts fully against the discrete distribution.
    """
    n = dist.n
    k0 = (1.0 - epsilon**2) / (2.0 * epsilon**2)
    sigma = math.sqrt(n) / epsilon
    k = dist.sites.astype(float)
    cell = _normal_cdf((k + 1.0 - k0) / sigma) - _normal_cdf((k - 1.0 - k0) / sigma)
    tail = 1.0 - cell.sum()
    return 0.5 * (float(np.abs(dist.p - cell).sum()) + abs(tail))
