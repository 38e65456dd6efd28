"""Tests for moment formulas, regimes and the normal limit."""

import math

import numpy as np
import pytest

from diracwalk import moments, physical, walk


def _dist(eps, n):
    return walk.distribution(walk.evolve(walk.WalkParams(eps, n)))


def test_empirical_moments_hand_values():
    m = moments.empirical_moments(_dist(0.5, 2), 2)
    assert m[0] == pytest.approx(1.0, abs=1e-14)
    assert m[1] == pytest.approx(0.96, abs=1e-14)
    assert m[2] == pytest.approx(3.2, abs=1e-14)


def test_empirical_moments_point_mass():
    m = moments.empirical_moments(_dist(0.0, 7), 3)
    assert m.tolist() == [1.0, 7.0, 49.0, 343.0]
    with pytest.raises(ValueError):
        moments.empirical_moments(_dist(0.0, 2), -1)


def test_exact_moments_values():
    assert moments.exact_moments(2, 0.5) == pytest.approx((1.0, 0.96, 3.2), abs=1e-14)
    # unit noise: classical random walk, zero mean, variance n
    for n in (1, 10, 333):
        s0, s1, s2 = moments.exact_moments(n, 1.0)
        assert (s0, s1, s2) == (1.0, 0.0, pytest.approx(float(n), rel=1e-13))
    assert moments.exact_moments(0, 0.7)[1:] == (0.0, pytest.approx(0.0, abs=1e-12))
    # eps -> 0 analytic limit
    assert moments.exact_moments(12, 0.0) == (1.0, 12.0, 144.0)


@pytest.mark.parametrize("eps", [0.1, 0.2, 0.5, 1.0])
def test_moment_agreement_with_recurrence(eps):
    params = walk.WalkParams(eps, 500)
    for state in walk.evolution(params):
        if state.n not in (1, 5, 50, 200, 500):
            continue
        emp = moments.empirical_moments(walk.distribution(state), 2)
        _, s1, s2 = moments.exact_moments(state.n, eps)
        tol = 1e-10 * max(1.0, s2)
        assert abs(emp[1] - s1) < tol
        assert abs(emp[2] - s2) < tol


def test_regime_expansion_examples():
    # n*eps^2 = 0.1: within 10% of the ballistic n^2 law
    exact = moments.exact_moments(10, 0.1)[2]
    assert abs(exact - 100.0) / exact < 0.10
    # n*eps^2 = 100: within 1% of the diffusive form
    exact = moments.exact_moments(2500, 0.2)[2]
    diffusive = moments.regime_expansions(2500, 0.2)[1]
    assert abs(exact - diffusive) / exact < 0.01
    # unit noise: the diffusive form is exactly n
    assert moments.regime_expansions(44, 1.0)[1] == 44.0
    with pytest.raises(ValueError):
        moments.regime_expansions(10, 0.0)


def test_regime_expansion_error_bounds():
    # Frozen from a parameter sweep: relative error of the ballistic form is
    # below 1.0 * (n eps^2) and of the diffusive form below 1.0 / (n eps^2).
    for eps in (0.05, 0.1, 0.2):
        n_max = int(0.1 / eps**2)
        for n in range(1, n_max + 1):
            exact = moments.exact_moments(n, eps)[2]
            rel = abs(exact - n**2) / exact
            assert rel < 1.0 * n * eps**2
    for eps in (0.1, 0.2, 0.5):
        for mult in (1, 3, 10):
            n = mult * int(10.0 / eps**2)
            exact = moments.exact_moments(n, eps)[2]
            diffusive = moments.regime_expansions(n, eps)[1]
            assert abs(exact - diffusive) / exact < 1.0 / (n * eps**2)


def test_asymptotic_moment_formulas():
    assert moments.asymptotic_moment(40, 0.3, 0) == 1.0
    assert moments.asymptotic_moment(40, 0.3, 1) == pytest.approx(
        (1 - 0.09) / (2 * 0.09), rel=1e-13
    )
    assert moments.asymptotic_moment(40, 0.3, 2) == pytest.approx(40 / 0.09, rel=1e-13)
    # even p = 4 reduces to 3 sigma^4, the Gaussian fourth moment
    assert moments.asymptotic_moment(50, 0.5, 4) == pytest.approx(
        3.0 * (50 / 0.25) ** 2, rel=1e-13
    )
    with pytest.raises(ValueError):
        moments.asymptotic_moment(40, 0.0, 2)
    with pytest.raises(ValueError):
        moments.asymptotic_moment(40, 0.3, -1)


def test_asymptotic_moment_matches_empirical_at_large_n():
    dist = _dist(0.5, 4000)
    for p in (3, 4):
        emp = moments.empirical_moments(dist, p)[p]
        asy = moments.asymptotic_moment(4000, 0.5, p)
        assert abs(emp / asy - 1.0) < 0.05


def test_crossover_location_and_scaling():
    n_star = moments.crossover(0.2)
    assert 12 <= n_star <= 50
    ratio = moments.crossover(0.1) / n_star
    # N* scales like 1/eps^2, i.e. 4x, within a factor 1.5
    assert 4.0 / 1.5 <= ratio <= 4.0 * 1.5
    for bad in (0.0, 1.0, 1.3):
        with pytest.raises(ValueError):
            moments.crossover(bad)


def test_log_slope_windows():
    n_star = moments.crossover(0.2)
    assert 1.8 <= moments.msd_log_slope(3.0, 0.2) <= 2.0
    assert 1.0 <= moments.msd_log_slope(100.0 * n_star, 0.2) <= 1.2


def test_classify_regime():
    assert moments.classify_regime(2, 0.1) == "ballistic"
    assert moments.classify_regime(25, 0.2) == "crossover"
    assert moments.classify_regime(1000, 0.2) == "diffusive"


def test_moment_report():
    rep = moments.moment_report(_dist(0.5, 2), 0.5)
    assert rep.n == 2
    assert rep.empirical[0] == pytest.approx(1.0, abs=1e-12)
    assert rep.closed_form_s1 == pytest.approx(0.96, abs=1e-13)
    assert rep.closed_form_s2 == pytest.approx(3.2, abs=1e-13)
    assert abs(rep.empirical[2] - rep.closed_form_s2) < 1e-10 * max(1.0, rep.closed_form_s2)
    assert rep.regime in ("ballistic", "crossover", "diffusive")


def test_normal_density_lattice():
    # unit noise: zero-centered spread with variance n
    n = 50
    ks = np.array([-4.0, 0.0, 4.0])
    dens = moments.normal_density_lattice(n, 1.0, ks)
    ref = np.exp(-(ks**2) / (2 * n)) / math.sqrt(2 * math.pi * n)
    assert np.abs(dens - ref).max() < 1e-15
    # peak at k0
    k0 = (1 - 0.04) / 0.08
    around = moments.normal_density_lattice(100, 0.2, np.array([k0 - 2, k0, k0 + 2]))
    assert around[1] == max(around)
    with pytest.raises(ValueError):
        moments.normal_density_lattice(0, 0.2, 0.0)


def test_density_sup_norm_at_large_n():
    dist = _dist(0.2, 300)
    dens = moments.normal_density_lattice(300, 0.2, dist.sites)
    assert np.abs(0.5 * dist.p - dens).max() < 5e-4


def test_gaussian_tv_decreases_with_n():
    tvs = [moments.gaussian_lattice_tv(_dist(0.2, n), 0.2) for n in (50, 100, 200, 400)]
    assert all(a > b for a, b in zip(tvs, tvs[1:]))


def test_two_sigma_containment():
    dist = _dist(0.2, 2000)
    k0 = (1 - 0.04) / 0.08
    radius = 2.0 * math.sqrt(2000) / 0.2
    mask = np.abs(dist.sites - k0) <= radius
    assert 0.945 <= float(dist.p[mask].sum()) <= 0.96


def test_asymptotic_density_profile():
    prof = moments.asymptotic_density(epsilon=0.2)
    assert prof.k0 == pytest.approx(12.0)
    assert prof.variance_per_step == pytest.approx(25.0)
    assert prof.x0 == pytest.approx(12.0)
    assert prof.diffusion == pytest.approx(12.5)
    with pytest.raises(ValueError):
        moments.asymptotic_density()
    with pytest.raises(ValueError):
        moments.asymptotic_density(epsilon=0.0)


def test_physical_density():
    phys = physical.dimensionless_params(1.0)
    # unit noise: x0 = 0 and D = c^2 delta / 2
    x0, diff = physical.diffusion_parameters(phys)
    assert x0 == pytest.approx(0.0, abs=1e-15)
    assert diff == pytest.approx(0.5, rel=1e-12)
    dens = moments.physical_density(3.0, 0.0, phys)
    assert dens == pytest.approx(1.0 / math.sqrt(4 * math.pi * 0.5 * 3.0), rel=1e-12)
    # wide quadrature integrates to one
    xs = np.linspace(-80, 80, 20001)
    vals = moments.physical_density(3.0, xs, phys)
    assert np.trapezoid(vals, xs) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        moments.physical_density(0.0, 0.0, phys)
