"""Trajectory sampling of the noisy walk as an explicit physical process.

Each realization draws an i.i.d. sign sequence (each sign with probability
1/2), evolves a pure two-component amplitude state on the integer lattice
under the one-step unitary

    a'[k] = N * (a[k-1] + s*eps * b[k-1])
    b'[k] = N * (-s*eps * a[k+1] + b[k+1]),      N = 1/sqrt(1 + eps^2)

and accumulates |a|^2, |b|^2.  The ensemble mean estimates the channel
average that :mod:`diracwalk.walk` computes exactly, which makes this
module a process-level oracle for the recurrence.

Reproducibility contract
------------------------
Realization ``r`` always uses the Philox counter-based stream keyed by
``(seed, r)``, independent of scheduling, and partial sums are accumulated
in fixed-size blocks merged in realization-index order.  Results are
therefore bit-identical for a fixed ``(seed, n_realizations, n_steps,
epsilon)`` whatever the worker count.  The same keying is shared by the
wavepacket ensembles in :mod:`diracwalk.dirac` so both oracles see the
same noise.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .walk import WalkParams

__all__ = [
    "LatticeSpinor",
    "EnsembleEstimate",
    "initial_spinor",
    "apply_step",
    "single_trajectory",
    "run_ensemble",
    "exhaustive_channel",
    "sign_sequences",
    "resolve_workers",
]

_BLOCK = 4096
_MASK64 = (1 << 64) - 1
EXHAUSTIVE_MAX_STEPS = 20


@dataclass
class LatticeSpinor:
    """Pure state after ``n`` steps: complex amplitudes at k = -n ... n.

    ``a`` holds the internal +1 (right-moving) component, ``b`` the
    internal -1 component; both arrays have length 2n + 1.
    """

    n: int
    a: np.ndarray
    b: np.ndarray

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)

    def norm_sq(self) -> float:
        return float((np.abs(self.a) ** 2).sum() + (np.abs(self.b) ** 2).sum())


@dataclass
class EnsembleEstimate:
    """Ensemble-averaged site weights with per-site standard errors.

    Means live on the parity sublattice k = -n, -n+2, ..., n (length n+1)
    to match :class:`diracwalk.walk.DiagonalState`.  ``stderr_*`` are the
    standard errors of the means (sample std with Bessel correction over
    sqrt(M)); they are exactly zero for the exhaustive channel.
    """

    n: int
    n_realizations: int
    mean_alpha: np.ndarray
    mean_beta: np.ndarray
    stderr_alpha: np.ndarray
    stderr_beta: np.ndarray
    stderr_p: np.ndarray

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1, 2)

    @property
    def mean_p(self) -> np.ndarray:
        return self.mean_alpha + self.mean_beta


def initial_spinor() -> LatticeSpinor:
    """All amplitude at site 0 in the internal +1 component."""
    return LatticeSpinor(0, np.array([1.0 + 0.0j]), np.array([0.0 + 0.0j]))


def apply_step(psi: LatticeSpinor, s: int, epsilon: float) -> LatticeSpinor:
    """One unitary step with field sign ``s`` (+1 or -1)."""
    if s not in (1, -1):
        raise ValueError(f"s must be +1 or -1, got {s!r}")
    w = 1.0 / np.sqrt(1.0 + epsilon**2)
    se = s * epsilon
    a = np.zeros(2 * psi.n + 3, dtype=complex)
    b = np.zeros(2 * psi.n + 3, dtype=complex)
    a[2:] = w * (psi.a + se * psi.b)
    b[:-2] = w * (-se * psi.a + psi.b)
    return LatticeSpinor(psi.n + 1, a, b)


def single_trajectory(params: WalkParams, signs: Sequence[int]) -> LatticeSpinor:
    """Deterministic evolution under an explicit sign sequence."""
    if len(signs) != params.n_steps:
        raise ValueError(f"expected {params.n_steps} signs, got {len(signs)}")
    psi = initial_spinor()
    for s in signs:
        psi = apply_step(psi, int(s), params.epsilon)
    return psi


def sign_sequences(seed: int, first: int, count: int, n_steps: int) -> np.ndarray:
    """Signs for realizations ``first .. first+count-1`` as a (count, n_steps) array.

    Stream ``r`` is Philox keyed by the 128-bit word (seed << 64) | r, so a
    realization's sequence depends only on (seed, r).
    """
    out = np.empty((count, n_steps), dtype=np.int8)
    key_hi = (seed & _MASK64) << 64
    for i in range(count):
        gen = np.random.Generator(np.random.Philox(key=key_hi | ((first + i) & _MASK64)))
        out[i] = gen.integers(0, 2, size=n_steps, dtype=np.int8) * 2 - 1
    return out


def resolve_workers(n_workers: int | None = None) -> int:
    """Worker count, defaulting to and capped by the NDW_THREADS env var."""
    env = os.environ.get("NDW_THREADS")
    cap = int(env) if env else None
    if n_workers is None:
        n_workers = cap if cap is not None else 1
    if cap is not None:
        n_workers = min(n_workers, cap)
    return max(1, int(n_workers))


def _evolve_block_probs(signs: np.ndarray, epsilon: float, n_steps: int):
    """Evolve a block of trajectories, returning |a|^2 and |b|^2.

    Amplitudes stay real for the fixed initial state because every step
    coefficient is real, so the batch runs in float64.  Arrays are dense
    over k = -n_steps ... n_steps from the start; each step only touches
    the occupied window (it grows by one site per side), everything else
    stays zero from initialization.
    """
    m = signs.shape[0]
    width = 2 * n_steps + 1
    w = 1.0 / np.sqrt(1.0 + epsilon**2)
    a = np.zeros((m, width))
    b = np.zeros((m, width))
    a[:, n_steps] = 1.0
    a2 = np.zeros_like(a)
    b2 = np.zeros_like(b)
    se = np.empty((m, 1))
    for j in range(n_steps):
        lo = n_steps - j - 1
        hi = n_steps + j + 1
        np.multiply(signs[:, j : j + 1], epsilon, out=se)
        src_a = a[:, lo:hi]
        src_b = b[:, lo:hi]
        dst = a2[:, lo + 1 : hi + 1]
        np.multiply(se, src_b, out=dst)
        dst += src_a
        dst *= w
        src_a = a[:, lo + 1 : hi + 1]
        src_b = b[:, lo + 1 : hi + 1]
        dst = b2[:, lo:hi]
        np.multiply(se, src_a, out=dst)
        np.negative(dst, out=dst)
        dst += src_b
        dst *= w
        a, a2 = a2, a
        b, b2 = b2, b
    return a * a, b * b


def _block_stats(x: np.ndarray):
    """Per-site (count, sum, sum of squared deviations) for one block."""
    count = x.shape[0]
    s1 = x.sum(axis=0)
    m2 = ((x - s1 / count) ** 2).sum(axis=0)
    return count, s1, m2


def _merge_stats(a, b):
    # Chan's pairwise update: variance accumulation without the
    # catastrophic sum-of-squares cancellation, still merge-order exact.
    n_a, s1_a, m2_a = a
    n_b, s1_b, m2_b = b
    n = n_a + n_b
    delta = s1_b / n_b - s1_a / n_a
    m2 = m2_a + m2_b + delta * delta * (n_a * n_b / n)
    return n, s1_a + s1_b, m2


def _stderr(stats) -> np.ndarray:
    n, _, m2 = stats
    if n < 2:
        return np.zeros_like(m2)
    return np.sqrt(np.maximum(m2, 0.0) / (n - 1) / n)


def _assemble(n_steps: int, m: int, stats_a, stats_b, stats_p) -> EnsembleEstimate:
    # The walk only populates sites with the parity of n; the off-parity
    # dense entries are exactly zero.
    sel = slice(None, None, 2)
    return EnsembleEstimate(
        n=n_steps,
        n_realizations=m,
        mean_alpha=stats_a[1][sel] / m,
        mean_beta=stats_b[1][sel] / m,
        stderr_alpha=_stderr(stats_a)[sel],
        stderr_beta=_stderr(stats_b)[sel],
        stderr_p=_stderr(stats_p)[sel],
    )


def _run_blocks(block_fn, n_blocks: int, n_workers: int, merge):
    """Evaluate blocks (possibly in parallel) and merge partials in index order."""
    if n_workers <= 1:
        partials = [block_fn(i) for i in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            partials = list(pool.map(block_fn, range(n_blocks)))
    merged = partials[0]
    for part in partials[1:]:
        merged = merge(merged, part)
    return merged


def run_ensemble(
    params: WalkParams,
    n_realizations: int,
    seed: int,
    n_workers: int | None = None,
) -> EnsembleEstimate:
    """Monte Carlo estimate of the channel output from sampled sign sequences.

    Bit-identical for fixed (seed, n_realizations, n_steps, epsilon)
    regardless of ``n_workers``; see the module reproducibility contract.
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    n = params.n_steps
    eps = params.epsilon

    def block(idx: int):
        first = idx * _BLOCK
        count = min(_BLOCK, n_realizations - first)
        signs = sign_sequences(seed, first, count, n)
        pa, pb = _evolve_block_probs(signs, eps, n)
        _check_norms(pa, pb)
        return _block_stats(pa), _block_stats(pb), _block_stats(pa + pb)

    def merge(a, b):
        return tuple(_merge_stats(x, y) for x, y in zip(a, b))

    n_blocks = (n_realizations + _BLOCK - 1) // _BLOCK
    stats_a, stats_b, stats_p = _run_blocks(block, n_blocks, resolve_workers(n_workers), merge)
    return _assemble(n, n_realizations, stats_a, stats_b, stats_p)


def _check_norms(pa: np.ndarray, pb: np.ndarray) -> None:
    drift = np.abs(pa.sum(axis=1) + pb.sum(axis=1) - 1.0).max()
    if drift > 1e-9:
        raise ArithmeticError(f"per-realization norm drifted by {drift:.3e}")


def exhaustive_channel(params: WalkParams, n_workers: int | None = None) -> EnsembleEstimate:
    """Exact channel average over all 2^n sign sequences.

    Sequence ``m`` assigns step ``j`` the sign +1 when bit ``j`` of ``m``
    is 0.  Standard errors are zero by convention (nothing is sampled).
    """
    n = params.n_steps
    if n > EXHAUSTIVE_MAX_STEPS:
        raise ValueError(
            f"exhaustive channel over 2^{n} sequences refused (limit "
            f"n_steps <= {EXHAUSTIVE_MAX_STEPS})"
        )
    total = 1 << n

    def block(idx: int):
        first = idx * _BLOCK
        count = min(_BLOCK, total - first)
        ids = np.arange(first, first + count, dtype=np.uint64)[:, None]
        bits = (ids >> np.arange(n, dtype=np.uint64)[None, :]) & 1
        signs = (1 - 2 * bits.astype(np.int8)).astype(np.int8)
        pa, pb = _evolve_block_probs(signs, params.epsilon, n)
        return pa.sum(axis=0), pb.sum(axis=0)

    def merge(a, b):
        return a[0] + b[0], a[1] + b[1]

    n_blocks = (total + _BLOCK - 1) // _BLOCK
    sum_a, sum_b = _run_blocks(block, n_blocks, resolve_workers(n_workers), merge)
    sel = slice(None, None, 2)
    zeros = np.zeros(n + 1)
    return EnsembleEstimate(
        n=n,
        n_realizations=total,
        mean_alpha=sum_a[sel] / total,
        mean_beta=sum_b[sel] / total,
        stderr_alpha=zeros,
        stderr_beta=zeros.copy(),
        stderr_p=zeros.copy(),
    )
