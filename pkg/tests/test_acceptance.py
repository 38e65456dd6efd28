"""Acceptance suite: one test per release criterion, at the pinned tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion.  Criteria with a runtime budget assert it too.
"""

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from diracwalk import cli, closedform, dirac, moments, montecarlo, walk

SEED = 137


@contextmanager
def criterion(name: str, budget_s: float | None = None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"FAIL - {name}")
        raise
    elapsed = time.perf_counter() - start
    print(f"PASS - {name} ({elapsed:.2f} s)")
    if budget_s is not None:
        assert elapsed < budget_s, f"{name}: {elapsed:.2f} s exceeded the {budget_s} s budget"


def test_ballistic_peak_law():
    with criterion("ballistic peak law", budget_s=1.0):
        for eps in (0.1, 0.2, 0.5):
            expected = 1.0
            decay = 1.0 / (1.0 + eps**2)
            for state in walk.evolution(walk.WalkParams(eps, 200)):
                p_nn = float(state.alpha[-1] + state.beta[-1])
                assert abs(p_nn - expected) <= 1e-12 * expected
                assert abs(closedform.ballistic_peak(state.n, eps) - expected) <= 1e-12 * expected
                expected *= decay


def test_closed_form_oracle():
    with criterion("closed-form oracle", budget_s=30.0):
        eps_grid = (0.1, 0.2, 0.5, 0.9, 1.0)
        for eps in eps_grid:
            for state in walk.evolution(walk.WalkParams(eps, 60)):
                n = state.n
                for j, k in enumerate(state.sites):
                    p_cf = closedform.p(n, int(k), eps)
                    assert abs(p_cf - (state.alpha[j] + state.beta[j])) < 1e-9

        # Exact big-rational path: the closed form and the recurrence agree
        # as exact rationals for every site up to n = 40, so their rounded
        # doubles are bit-identical by construction.
        for eps in eps_grid:
            e2 = Fraction(eps) ** 2
            alpha = [Fraction(1)]
            beta = [Fraction(0)]
            w = 1 / (1 + e2)
            for n in range(1, 41):
                alpha, beta = (
                    [Fraction(0)] + [w * (x + e2 * y) for x, y in zip(alpha, beta)],
                    [w * (y + e2 * x) for x, y in zip(alpha, beta)] + [Fraction(0)],
                )
                for j in range(n + 1):
                    k = -n + 2 * j
                    a_cf, b_cf = closedform.alpha_beta_rational(n, k, e2)
                    assert a_cf == alpha[j] and b_cf == beta[j]
                    assert float(a_cf) == float(alpha[j])


def test_classical_random_walk_limit():
    with criterion("classical-random-walk limit"):
        for n in range(0, 101):
            state = walk.evolve(walk.WalkParams(1.0, n))
            ref_p = walk.pascal_distribution(n)
            assert np.abs((state.alpha + state.beta) - ref_p.p).max() < 1e-14
            split = walk.pascal_state(n)
            assert np.abs(state.alpha - split.alpha).max() < 1e-14
            assert np.abs(state.beta - split.beta).max() < 1e-14


def test_moments_against_closed_form():
    with criterion("moment formulas"):
        emp = moments.empirical_moments(
            walk.distribution(walk.evolve(walk.WalkParams(0.5, 2))), 2
        )
        assert emp[1] == pytest.approx(0.96, abs=1e-12)
        assert emp[2] == pytest.approx(3.2, abs=1e-12)
        for eps in (0.1, 0.2, 0.5, 1.0):
            for state in walk.evolution(walk.WalkParams(eps, 500)):
                if state.n == 0:
                    continue
                m = moments.empirical_moments(walk.distribution(state), 2)
                _, s1, s2 = moments.exact_moments(state.n, eps)
                tol = 1e-10 * max(1.0, s2)
                assert abs(m[1] - s1) < tol
                assert abs(m[2] - s2) < tol


def test_crossover_detection():
    with criterion("ballistic-diffusive crossover", budget_s=5.0):
        n_star = moments.crossover(0.2)
        assert 12 <= n_star <= 50
        assert 1.8 <= moments.msd_log_slope(3.0, 0.2) <= 2.0
        assert 1.0 <= moments.msd_log_slope(100.0 * n_star, 0.2) <= 1.2


def test_gaussian_convergence():
    with criterion("gaussian convergence"):
        tv100 = moments.gaussian_lattice_tv(
            walk.distribution(walk.evolve(walk.WalkParams(0.2, 100))), 0.2
        )
        tv300 = moments.gaussian_lattice_tv(
            walk.distribution(walk.evolve(walk.WalkParams(0.2, 300))), 0.2
        )
        assert tv300 < tv100

        dist = walk.distribution(walk.evolve(walk.WalkParams(0.2, 2000)))
        k0 = (1.0 - 0.04) / 0.08
        radius = 2.0 * math.sqrt(2000) / 0.2
        contained = float(dist.p[np.abs(dist.sites - k0) <= radius].sum())
        assert 0.945 <= contained <= 0.96


def test_channel_equivalence():
    with criterion("channel equivalence", budget_s=60.0):
        for eps in (0.0, 0.3, 0.7, 1.0):
            for n in (4, 8, 12):
                est = montecarlo.exhaustive_channel(walk.WalkParams(eps, n))
                state = walk.evolve(walk.WalkParams(eps, n))
                assert np.abs(est.mean_alpha - state.alpha).max() < 1e-12
                assert np.abs(est.mean_beta - state.beta).max() < 1e-12

        params = walk.WalkParams(0.2, 100)
        est = montecarlo.run_ensemble(params, 100_000, seed=SEED)
        state = walk.evolve(params)
        bad = 0
        checks = 0
        for mean, se, exact in (
            (est.mean_alpha, est.stderr_alpha, state.alpha),
            (est.mean_beta, est.stderr_beta, state.beta),
        ):
            resid = np.abs(mean - exact)
            bad += int(np.sum(resid > np.maximum(4.0 * se, 1e-12)))
            checks += len(resid)
        assert bad / checks < 0.01


def test_dirac_validation():
    with criterion("per-step-exact evolution vs walk", budget_s=600.0):
        phi = math.atan(0.2)
        rec = dirac.ensemble_compare(50, phi, 2000, seed=SEED)
        assert rec.tv_split_walk < 0.02

        grid = dirac.GridSpec.for_steps(50)
        tvs = [
            dirac.ensemble_compare(50, f, 400, seed=SEED, grid=grid).tv_exact_split
            for f in (0.2, 0.1, 0.05)
        ]
        assert tvs[0] > tvs[1] > tvs[2]


def test_reproducibility(tmp_path, monkeypatch):
    with criterion("byte-identical CSV reproduction"):
        mc_args = [
            "mc", "--epsilon", "0.2", "--steps", "30", "--realizations", "6000",
            "--seed", str(SEED),
        ]
        runs = {}
        for label, workers in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / f"mc_{label}.csv"
            monkeypatch.setenv("NDW_THREADS", workers)
            assert cli.main(mc_args + ["--out", str(out)]) == 0
            runs[label] = out.read_bytes()
        assert runs["a"] == runs["b"] == runs["c"]

        dirac_args = [
            "dirac", "--steps", "10", "--realizations", "256", "--phis", "0.2,0.1",
            "--seed", str(SEED),
        ]
        for label, workers in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / f"dirac_{label}.csv"
            monkeypatch.setenv("NDW_THREADS", workers)
            assert cli.main(dirac_args + ["--out", str(out)]) == 0
            runs[label] = out.read_bytes()
        assert runs["a"] == runs["b"] == runs["c"]
