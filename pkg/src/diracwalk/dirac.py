"""Per-step-exact spinor evolution on a periodic grid, and the factored
(walk-generating) approximation next to it.

Lengths are measured in units of the light-cone cell c*delta, so lattice
site k owns the cell [k - 1/2, k + 1/2).  One exact step applies, mode by
mode in momentum space,

    V(s) = exp(-i * (theta_p * sigma3 - s*phi * sigma2))
         = cos(w) I - i sin(w)/w * (theta_p * sigma3 - s*phi * sigma2),
    w = sqrt(theta_p^2 + phi^2),   theta_p = p (dimensionless units)

which is exact because the generator squares to w^2 * I.  The factored step

    exp(-i * theta_p * sigma3) * exp(i * s*phi * sigma2)

is a rigid one-cell shift of each spin component after a position-
independent coin rotation, i.e. exactly the noisy walk on the binned
lattice.  Comparing the two, ensemble-averaged with common random numbers,
quantifies the walk approximation directly.

Both steps are diagonal per momentum mode, so ensembles evolve entirely in
momentum space (one FFT in, N mode rotations, one FFT out per realization).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import walk
from .montecarlo import resolve_workers, sign_sequences

__all__ = [
    "GridError",
    "GridSpec",
    "SpinorField",
    "WavepacketSpec",
    "BinnedDistribution",
    "DiracComparison",
    "make_wavepacket",
    "exact_step",
    "split_step",
    "bin_to_lattice",
    "ensemble_compare",
]

MIN_POINTS_PER_CELL = 32
_DIRAC_BLOCK = 128
# Mass allowed within two cells of the periodic boundary before a run is
# declared wrapped-around and rejected.
_WRAP_TOL = 1e-12


class GridError(ValueError):
    """The grid cannot support the requested run (too small or wrapped)."""


@dataclass(frozen=True)
class GridSpec:
    """Periodic grid of ``n_points`` samples covering ``extent`` cells.

    ``n_points`` must be a power of two and ``extent`` a positive integer
    dividing it with at least 32 points per cell; both conditions make the
    cell boundaries land exactly on grid points.
    """

    extent: int
    n_points: int

    def __post_init__(self):
        m, ext = self.n_points, self.extent
        if m < 1 or m & (m - 1):
            raise ValueError(f"n_points must be a power of two, got {m}")
        if ext < 1 or int(ext) != ext:
            raise ValueError(f"extent must be a positive integer, got {ext!r}")
        if m % ext:
            raise ValueError(f"extent {ext} must divide n_points {m}")
        if m // ext < MIN_POINTS_PER_CELL:
            raise ValueError(
                f"{m // ext} points per cell is below the minimum {MIN_POINTS_PER_CELL}"
            )

    @property
    def points_per_cell(self) -> int:
        return self.n_points // self.extent

    @property
    def dx(self) -> float:
        return self.extent / self.n_points

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.n_points) - self.n_points // 2) * self.dx

    @property
    def momenta(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def fits(self, n_steps: int) -> bool:
        """Whether an n-step run stays away from the periodic boundary."""
        return self.extent >= 2 * (n_steps + 4)

    @classmethod
    def for_steps(cls, n_steps: int, points_per_cell: int = MIN_POINTS_PER_CELL) -> "GridSpec":
        """Smallest valid grid for an n-step run."""
        ppc = 1
        while ppc < max(points_per_cell, MIN_POINTS_PER_CELL):
            ppc <<= 1
        extent = 1
        while extent < 2 * (n_steps + 4):
            extent <<= 1
        return cls(extent=extent, n_points=extent * ppc)


@dataclass
class SpinorField:
    """Two-component complex field on a grid (position representation)."""

    up: np.ndarray
    down: np.ndarray
    grid: GridSpec

    def norm_sq(self) -> float:
        return float(
            ((np.abs(self.up) ** 2).sum() + (np.abs(self.down) ** 2).sum()) * self.grid.dx
        )

    def position_mean(self) -> float:
        dens = np.abs(self.up) ** 2 + np.abs(self.down) ** 2
        return float((self.grid.x * dens).sum() * self.grid.dx)


@dataclass(frozen=True)
class WavepacketSpec:
    """Initial packet: a smooth bump of compact support inside one cell."""

    shape: str = "hann-bump"
    width: float = 0.5
    center: int = 0

    def __post_init__(self):
        if self.shape != "hann-bump":
            raise ValueError(f"unknown wavepacket shape {self.shape!r}")
        if not 0.0 < self.width < 1.0:
            raise ValueError(
                f"width must be in (0, 1) so the support fits one cell, got {self.width}"
            )


def make_wavepacket(spec: WavepacketSpec, grid: GridSpec) -> SpinorField:
    """Normalized packet in the up component at the requested cell."""
    if abs(spec.center) > grid.extent // 2 - 2:
        raise ValueError(f"center {spec.center} too close to the grid boundary")
    xc = grid.x - spec.center
    profile = np.where(
        np.abs(xc) < spec.width / 2.0, np.cos(math.pi * xc / spec.width) ** 2, 0.0
    )
    profile /= math.sqrt(float((profile**2).sum()) * grid.dx)
    return SpinorField(up=profile.astype(complex), down=np.zeros(grid.n_points, complex), grid=grid)


def _exact_mode_coeffs(theta: np.ndarray, phi: float):
    """Diagonal element d(p) and off-diagonal magnitude o(p) of the exact
    one-step mode matrix [[d, s*o], [-s*o, conj(d)]]."""
    omega = np.hypot(theta, phi)
    sinc = np.sinc(omega / math.pi)  # sin(w)/w with the w -> 0 limit built in
    d = np.cos(omega) - 1j * sinc * theta
    o = sinc * phi
    return d, o


def exact_step(field: SpinorField, s: int, theta_scale: float, phi: float) -> SpinorField:
    """One exact step with field sign ``s``; ``theta_scale`` multiplies the
    momentum (c*delta/hbar in physical units, 1 in dimensionless ones)."""
    if s not in (1, -1):
        raise ValueError(f"s must be +1 or -1, got {s!r}")
    theta = theta_scale * field.grid.momenta
    d, o = _exact_mode_coeffs(theta, phi)
    u = np.fft.fft(field.up)
    v = np.fft.fft(field.down)
    u2 = d * u + (s * o) * v
    v2 = -(s * o) * u + np.conj(d) * v
    return SpinorField(np.fft.ifft(u2), np.fft.ifft(v2), field.grid)


def split_step(field: SpinorField, s: int, theta_scale: float, phi: float) -> SpinorField:
    """One factored step: coin rotation by phi, then opposite unit shifts."""
    if s not in (1, -1):
        raise ValueError(f"s must be +1 or -1, got {s!r}")
    theta = theta_scale * field.grid.momenta
    shift = np.exp(-1j * theta)
    c, sn = math.cos(phi), math.sin(phi)
    u = np.fft.fft(field.up)
    v = np.fft.fft(field.down)
    u2 = shift * (c * u + (s * sn) * v)
    v2 = np.conj(shift) * (-(s * sn) * u + c * v)
    return SpinorField(np.fft.ifft(u2), np.fft.ifft(v2), field.grid)


@dataclass
class BinnedDistribution:
    """Per-cell mass of the two spin components.

    ``sites`` spans the interior cells; ``residual`` is whatever mass fell
    in the half-cells hugging the periodic boundary.
    """

    sites: np.ndarray
    up: np.ndarray
    down: np.ndarray
    residual: float

    @property
    def total(self) -> np.ndarray:
        return self.up + self.down


def _bin_density(dens: np.ndarray, grid: GridSpec) -> tuple[np.ndarray, float]:
    ppc = grid.points_per_cell
    n_cells = grid.extent - 1
    body = dens[ppc // 2 : ppc // 2 + n_cells * ppc]
    cells = body.reshape(n_cells, ppc).sum(axis=1) * grid.dx
    residual = float(dens.sum() * grid.dx - cells.sum())
    return cells, residual


def bin_to_lattice(field: SpinorField) -> BinnedDistribution:
    """Integrate |up|^2 and |down|^2 over the half-open cells [k-1/2, k+1/2)."""
    grid = field.grid
    up_cells, r1 = _bin_density(np.abs(field.up) ** 2, grid)
    down_cells, r2 = _bin_density(np.abs(field.down) ** 2, grid)
    half = grid.extent // 2
    sites = np.arange(-half + 1, half)
    return BinnedDistribution(sites=sites, up=up_cells, down=down_cells, residual=r1 + r2)


def _check_wraparound(binned: BinnedDistribution, extent: int) -> None:
    near_edge = np.abs(binned.sites) >= extent // 2 - 2
    leak = float(binned.total[near_edge].sum()) + binned.residual
    if leak > _WRAP_TOL:
        raise GridError(
            f"mass {leak:.3e} within two cells of the periodic boundary; enlarge the grid"
        )


@dataclass
class DiracComparison:
    """Ensemble-mean binned distributions of both steppers plus the walk
    prediction, with pairwise total-variation distances."""

    n_steps: int
    phi: float
    epsilon: float
    n_realizations: int
    sites: np.ndarray
    exact_up: np.ndarray
    exact_down: np.ndarray
    split_up: np.ndarray
    split_down: np.ndarray
    walk_p: np.ndarray
    tv_exact_split: float
    tv_split_walk: float
    tv_exact_walk: float

    @property
    def exact_p(self) -> np.ndarray:
        return self.exact_up + self.exact_down

    @property
    def split_p(self) -> np.ndarray:
        return self.split_up + self.split_down


def _tv(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(p - q).sum())


def ensemble_compare(
    n_steps: int,
    phi: float,
    m_realizations: int,
    seed: int,
    spec: WavepacketSpec | None = None,
    grid: GridSpec | None = None,
    theta_scale: float = 1.0,
    n_workers: int | None = None,
) -> DiracComparison:
    """Run exact and factored ensembles on shared sign streams and compare.

    Both ensembles and the walk recurrence at eps = tan(phi) are reduced to
    binned lattice distributions; the three pairwise TV distances isolate
    the factoring error (exact vs split, systematic), the sampling error
    (split vs walk, statistical only) and their combination.
    """
    if m_realizations < 1:
        raise ValueError(f"m_realizations must be >= 1, got {m_realizations}")
    spec = spec or WavepacketSpec()
    grid = grid or GridSpec.for_steps(n_steps)
    if not grid.fits(n_steps):
        raise GridError(
            f"grid extent {grid.extent} cannot hold {n_steps} steps "
            f"(needs at least {2 * (n_steps + 4)})"
        )

    packet = make_wavepacket(spec, grid)
    u0 = np.fft.fft(packet.up)
    theta = theta_scale * grid.momenta
    d_exact, o_exact = _exact_mode_coeffs(theta, phi)
    shift = np.exp(-1j * theta)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)

    def block(idx: int):
        first = idx * _DIRAC_BLOCK
        count = min(_DIRAC_BLOCK, m_realizations - first)
        signs = sign_sequences(seed, first, count, n_steps).astype(float)
        ue = np.broadcast_to(u0, (count, grid.n_points)).copy()
        ve = np.zeros((count, grid.n_points), complex)
        us = ue.copy()
        vs = np.zeros_like(ve)
        for j in range(n_steps):
            so = signs[:, j : j + 1] * o_exact
            ue, ve = d_exact * ue + so * ve, -so * ue + np.conj(d_exact) * ve
            ss = signs[:, j : j + 1] * sin_phi
            us, vs = shift * (cos_phi * us + ss * vs), np.conj(shift) * (
                -ss * us + cos_phi * vs
            )
        dens = []
        for arr in (ue, ve, us, vs):
            pos = np.fft.ifft(arr, axis=1)
            dens.append((pos.real**2 + pos.imag**2).sum(axis=0))
        return tuple(dens)

    n_blocks = (m_realizations + _DIRAC_BLOCK - 1) // _DIRAC_BLOCK
    workers = resolve_workers(n_workers)
    if workers <= 1:
        partials = [block(i) for i in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(block, range(n_blocks)))
    sums = [np.array(x, copy=True) for x in partials[0]]
    for part in partials[1:]:
        for acc, x in zip(sums, part):
            acc += x

    binned = []
    for dens_sum in sums:
        cells, residual = _bin_density(dens_sum / m_realizations, grid)
        binned.append((cells, residual))
    exact_up, exact_down = binned[0][0], binned[1][0]
    split_up, split_down = binned[2][0], binned[3][0]
    half = grid.extent // 2
    sites = np.arange(-half + 1, half)

    exact_binned = BinnedDistribution(sites, exact_up, exact_down, binned[0][1] + binned[1][1])
    split_binned = BinnedDistribution(sites, split_up, split_down, binned[2][1] + binned[3][1])
    _check_wraparound(exact_binned, grid.extent)
    _check_wraparound(split_binned, grid.extent)

    epsilon = math.tan(phi)
    state = walk.evolve(walk.WalkParams(epsilon=abs(epsilon), n_steps=n_steps))
    walk_p = np.zeros_like(exact_up)
    walk_sites = state.sites
    idx = walk_sites + half - 1  # site k sits at array position k - sites[0]
    walk_p[idx] = state.alpha + state.beta

    exact_p = exact_up + exact_down
    split_p = split_up + split_down
    return DiracComparison(
        n_steps=n_steps,
        phi=phi,
        epsilon=epsilon,
        n_realizations=m_realizations,
        sites=sites,
        exact_up=exact_up,
        exact_down=exact_down,
        split_up=split_up,
        split_down=split_down,
        walk_p=walk_p,
        tv_exact_split=_tv(exact_p, split_p),
        tv_split_walk=_tv(split_p, walk_p),
        tv_exact_walk=_tv(exact_p, walk_p),
    )
