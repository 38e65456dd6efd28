"""Noisy-quantum-walk model of a massless spin-1/2 particle coupled to a
randomly flipping magnetic field.

Computation routes, cross-checking each other:

- :mod:`diracwalk.walk` — exact evolution of the diagonal density matrix.
- :mod:`diracwalk.closedform` — the closed-form solution, an independent oracle.
- :mod:`diracwalk.montecarlo` — sampled sign-sequence trajectories.
- :mod:`diracwalk.dirac` — per-step-exact spinor evolution vs the factored step.
- :mod:`diracwalk.moments` — moments, regimes, the normal limit.
- :mod:`diracwalk.physical` — physical units in and out of the model.
- :mod:`diracwalk.cli` — CSV front end for all of the above.
"""

from .closedform import (
    AccuracyLossError,
    ClosedFormResult,
    alpha_beta,
    ballistic_peak,
    p,
    q,
)
from .dirac import (
    BinnedDistribution,
    DiracComparison,
    GridError,
    GridSpec,
    SpinorField,
    WavepacketSpec,
    bin_to_lattice,
    ensemble_compare,
    exact_step,
    make_wavepacket,
    split_step,
)
from .moments import (
    AsymptoticDensity,
    MomentReport,
    asymptotic_density,
    asymptotic_moment,
    classify_regime,
    crossover,
    empirical_moments,
    exact_moments,
    gaussian_lattice_tv,
    moment_report,
    normal_density_lattice,
    physical_density,
    regime_expansions,
)
from .montecarlo import (
    EnsembleEstimate,
    LatticeSpinor,
    apply_step,
    exhaustive_channel,
    initial_spinor,
    run_ensemble,
    sign_sequences,
    single_trajectory,
)
from .physical import (
    PhysicalParams,
    ValidityReport,
    check_validity,
    derive_epsilon,
    diffusion_parameters,
    dimensionless_params,
)
from .walk import (
    DiagonalState,
    Distribution,
    WalkParams,
    distribution,
    evolution,
    evolve,
    initial_state,
    mixed_initial_distribution,
    pascal_distribution,
    pascal_state,
    step,
)

__version__ = "0.1.0"
