"""From laboratory numbers to walk parameters and back.

Uses neutron-like constants to show the validity diagnostics: the
magnetic interaction must beat the rest energy, and both per-step phases
must stay small, before the walk picture applies.
"""

from diracwalk import (
    PhysicalParams,
    check_validity,
    derive_epsilon,
    diffusion_parameters,
)
from diracwalk.physical import dimensionless_params

C = 2.99792458e8  # m/s
HBAR = 1.054571817e-34  # J*s
MU_NEUTRON = -1.832e8  # rad/(s*T): gyromagnetic ratio scale
M_NEUTRON = 1.67492749804e-27  # kg

print("neutron in a strong flipping field:")
for b0, delta in ((1e2, 1e-12), (1e6, 1e-15)):
    phys = PhysicalParams(c=C, hbar=HBAR, mu=MU_NEUTRON, b0=b0, delta=delta, mass=M_NEUTRON)
    rep = check_validity(phys, p_expectation=0.0)
    print(f"  B0 = {b0:8.0e} T, delta = {delta:6.0e} s:")
    print(f"    coin angle {rep.coin_angle:+.3e} ({rep.coin_verdict}), eps = {rep.epsilon:.3e}")
    print(
        f"    magnetic energy / rest energy = {rep.mass_condition_ratio:.3e} "
        f"({rep.mass_verdict})"
    )

print("\nmassless carrier, same field (mass term dropped):")
phys = PhysicalParams(c=C, hbar=HBAR, mu=MU_NEUTRON, b0=1e6, delta=1e-15)
rep = check_validity(phys, p_expectation=0.0)
print(f"  eps = {derive_epsilon(phys):.6e}  coin {rep.coin_verdict}, mass check {rep.mass_verdict}")
x0, diff = diffusion_parameters(phys)
print(f"  asymptotic drift x0 = {x0:.3e} m, diffusion D = {diff:.3e} m^2/s")

print("\ndimensionless preset (c = delta = hbar = 1):")
for eps in (0.1, 0.2, 1.0):
    phys = dimensionless_params(eps)
    rep = check_validity(phys, p_expectation=0.05)
    x0, diff = diffusion_parameters(phys)
    print(
        f"  eps = {eps}: coin angle {phys.coin_angle:.4f} ({rep.coin_verdict}), "
        f"x0 = {x0:.3f}, D = {diff:.3f}"
    )
