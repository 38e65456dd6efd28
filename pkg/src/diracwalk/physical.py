"""Mapping between physical constants and the dimensionless walk.

All other modules work in the dimensionless system c = delta = hbar = 1;
units enter only here.  The magnetic moment ``mu`` carries rad/(s*T), so
``mu * b0`` is an angular frequency and the half coin angle
``mu * b0 * delta / 2`` is dimensionless.  The noise strength is

    epsilon = tan(mu * b0 * delta / 2)

(the sign of the field is absorbed by the random flipping, so epsilon is
taken non-negative).  The factored one-step evolution is trustworthy only
while the coin angle and the momentum phase c*<p>*delta/hbar are both
small, and for a massive particle while the magnetic energy dwarfs the
rest energy; :func:`check_validity` reports all three ratios.
"""

import math
from dataclasses import dataclass

__all__ = [
    "PhysicalParams",
    "ValidityReport",
    "derive_epsilon",
    "check_validity",
    "diffusion_parameters",
    "displacement_from_coin_angle",
    "dimensionless_params",
    "PASS_THRESHOLD",
    "FAIL_THRESHOLD",
]

# "Much less than one" has no number in the theory; these are the
# engineering levels used for the pass/warn/fail verdicts.
PASS_THRESHOLD = 0.1
FAIL_THRESHOLD = 1.0


@dataclass(frozen=True)
class PhysicalParams:
    """Physical configuration in SI units.

    c: speed of light, m/s.  hbar: J*s.  mu: magnetic moment, rad/(s*T).
    b0: field strength, tesla.  delta: field-flip interval, seconds.
    mass: kg, 0 for the massless case.
    """

    c: float
    hbar: float
    mu: float
    b0: float
    delta: float
    mass: float = 0.0

    def __post_init__(self):
        for name in ("c", "hbar", "delta"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.mass < 0.0:
            raise ValueError(f"mass must be >= 0, got {self.mass}")

    @property
    def coin_angle(self) -> float:
        """Half rotation angle mu*b0*delta/2 applied to the internal state."""
        return self.mu * self.b0 * self.delta / 2.0


@dataclass(frozen=True)
class ValidityReport:
    """Dimensionless ratios behind the factored-evolution approximation.

    Verdicts are 'pass' (< 0.1), 'warn' (< 1) or 'fail'; the mass verdict
    uses the reciprocal scale (ratio > 10 / > 1) and is 'skipped' for a
    massless particle.
    """

    epsilon: float
    coin_angle: float
    momentum_condition: float
    coin_condition: float
    mass_condition_ratio: float
    momentum_verdict: str
    coin_verdict: str
    mass_verdict: str


def derive_epsilon(phys: PhysicalParams) -> float:
    """Noise strength epsilon = |tan(coin angle)|.

    Raises ValueError when |coin angle| >= pi/2, outside the regime where
    the walk picture applies at all.
    """
    angle = phys.coin_angle
    if abs(angle) >= math.pi / 2.0:
        raise ValueError(
            f"coin angle {angle:.4f} is outside (-pi/2, pi/2); the walk mapping breaks down"
        )
    return abs(math.tan(angle))


def _small_verdict(value: float) -> str:
    if value < PASS_THRESHOLD:
        return "pass"
    if value < FAIL_THRESHOLD:
        return "warn"
    return "fail"


def check_validity(phys: PhysicalParams, p_expectation: float) -> ValidityReport:
    """Evaluate the approximation conditions for a given momentum scale.

    ``p_expectation`` (kg*m/s) is supplied by the caller, e.g. the momentum
    spread of the wavepacket under study; this module holds no state.
    """
    angle = phys.coin_angle
    momentum = abs(phys.c * p_expectation * phys.delta / phys.hbar)
    coin = abs(angle)
    if phys.mass > 0.0:
        ratio = abs(phys.hbar * phys.mu * phys.b0 / 2.0) / (phys.mass * phys.c**2)
        if ratio > 1.0 / PASS_THRESHOLD:
            mass_verdict = "pass"
        elif ratio > 1.0:
            mass_verdict = "warn"
        else:
            mass_verdict = "fail"
    else:
        ratio = math.inf
        mass_verdict = "skipped"
    epsilon = abs(math.tan(angle)) if abs(angle) < math.pi / 2.0 else math.inf
    return ValidityReport(
        epsilon=epsilon,
        coin_angle=angle,
        momentum_condition=momentum,
        coin_condition=coin,
        mass_condition_ratio=ratio,
        momentum_verdict=_small_verdict(momentum),
        coin_verdict=_small_verdict(coin),
        mass_verdict=mass_verdict,
    )


def diffusion_parameters(phys: PhysicalParams) -> tuple[float, float]:
    """Asymptotic mean displacement x0 (m) and diffusion constant D (m^2/s).

    x0 = (1 - eps^2) * c * delta / (2 eps^2),  D = c^2 * delta / (2 eps^2).
    Undefined (infinite) for the noiseless walk eps = 0.
    """
    eps = derive_epsilon(phys)
    if eps == 0.0:
        raise ValueError("diffusion parameters are undefined at epsilon = 0 (free motion)")
    e2 = eps**2
    x0 = (1.0 - e2) * phys.c * phys.delta / (2.0 * e2)
    diff = phys.c**2 * phys.delta / (2.0 * e2)
    return x0, diff


def displacement_from_coin_angle(phys: PhysicalParams) -> float:
    """x0 written directly in the field variables:
    c*delta*cos(mu*b0*delta) / (1 - cos(mu*b0*delta)).

    The denominator is evaluated as 2*sin(angle)^2 to stay accurate at
    small coin angles, where 1 - cos cancels.
    """
    half = phys.coin_angle
    return phys.c * phys.delta * math.cos(2.0 * half) / (2.0 * math.sin(half) ** 2)


def dimensionless_params(epsilon: float, mass: float = 0.0) -> PhysicalParams:
    """The documented dimensionless preset c = delta = hbar = mu = 1, with
    b0 chosen so that the coin angle gives the requested epsilon."""
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    return PhysicalParams(
        c=1.0, hbar=1.0, mu=1.0, b0=2.0 * math.atan(epsilon), delta=1.0, mass=mass
    )
