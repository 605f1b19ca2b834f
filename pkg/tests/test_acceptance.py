"""Acceptance criteria AC1-AC8, one test per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see conftest).
"""
import math

import numpy as np
import pytest

from mixbound import bounds as B
from mixbound import criteria as K
from mixbound import scenarios
from mixbound.divergence import chi2_closed_form, chi2_numeric
from mixbound.measures import GaussianIso, MixtureSpec, TestFunction, UniformBall, polynomial
from mixbound.verify import (Relation, check_entropy_decomposition, check_mean_diff_covariance,
                             check_pi_bound, check_variance_decomposition, lsi_lower_bound_1d, spectral_gap_1d)

P19 = np.round(np.linspace(0.05, 0.95, 19), 12)


@pytest.mark.acceptance("AC1", "equal-covariance PI formula and dominance over the CM baseline")
def test_ac1_equal_covariance_formula():
    for y in (0.0, 0.5, 1.0, 2.0):
        for p in (0.1, 0.5, 0.9):
            b = scenarios.get("gauss-equal-cov").bounds(p, {"y": y, "sigma": 1.0})
            sym = b["pi_symmetric"]["inverse_constant"]
            expected = 1 + p * (1 - p) * math.expm1(y * y)
            assert sym == pytest.approx(expected, rel=1e-12, abs=0)
            assert sym <= B.cm_baseline_equal_gaussians(y, p)


@pytest.mark.acceptance("AC2", "chi-squared closed forms against quadrature; divergence detected at sigma = 2")
def test_ac2_chi2_closed_vs_numeric():
    for n in (1, 2, 3):
        for s in (0.6, 0.8, 1.5, 1.9):
            spec = MixtureSpec(GaussianIso(np.zeros(n), 1.0), GaussianIso(np.zeros(n), s), 0.5)
            exact = chi2_closed_form(spec)
            for direction, value in ((0, exact.chi0), (1, exact.chi1)):
                est = chi2_numeric(spec, direction)
                assert abs(est.value - value) <= max(1e-6, 3 * est.error), (n, s, direction)
    for n in (1, 2, 3):
        spec = MixtureSpec(GaussianIso(np.zeros(n), 1.0), GaussianIso(np.zeros(n), 2.0), 0.5)
        assert math.isinf(chi2_numeric(spec, 0).value)


AC3_CASES = [
    ("gauss-equal-cov", {"y": 1.0}),
    ("gauss-equal-cov", {"y": 2.0}),
    ("gauss-variance", {"sigma": 0.25}),
    ("gauss-variance", {"sigma": 4.0}),
    ("uniform-gauss", {}),
]


@pytest.mark.acceptance("AC3", "spectral gap >= 1/PI-bound - 3 tol on 5 scenarios x 19 values of p")
def test_ac3_bound_validity_spectral():
    violations = []
    for name, params in AC3_CASES:
        sc = scenarios.get(name)
        for p in P19:
            rep = check_pi_bound(sc.spec(p, params))
            tol = rep.tolerance
            assert math.isfinite(rep.oracle_value), (name, params, p, rep.metadata)
            if rep.relation is Relation.VIOLATED or rep.oracle_value < 1 / rep.bound_value - tol:
                violations.append((name, params, p, rep.oracle_value, 1 / rep.bound_value))
    assert violations == []


@pytest.mark.acceptance("AC4", "equalization at s* and sandwich bracket on 1000 interpolated tuples")
def test_ac4_optimizer_identity():
    rng = np.random.default_rng(4)
    found = 0
    while found < 1000:
        r0, r1 = np.exp(rng.uniform(-3, 3, 2))
        x0, x1 = np.exp(rng.uniform(-4, 4, 2))
        p = rng.uniform(0.001, 0.999)
        res = B.pi_mixture_bound((r0, r1), (x0, x1), p)
        if res.case is not B.Case.INTERPOLATED:
            continue
        found += 1
        s = res.s_star
        assert 0 < s < 1
        a, b = B.interpolation_terms((r0, r1), (x0, x1), p, s)
        assert a == pytest.approx(b, rel=1e-12)
        assert res.inverse_constant == pytest.approx(a, rel=1e-12)
        lo, hi = B.pi_sandwich((r0, r1), (x0, x1), p)
        assert lo * (1 - 1e-12) <= res.inverse_constant <= hi * (1 + 1e-12)


@pytest.mark.acceptance("AC5", "two-point LSI holds on a 200 x 200 grid and is sharp to 0.99 for each p")
def test_ac5_two_point_lsi():
    g = np.logspace(-4, 4, 200)
    for p in np.round(np.linspace(0.1, 0.9, 9), 12):
        best = 0.0
        for g0 in g:
            for g1 in g:
                lhs, rhs = B.bernoulli_lsi_check(p, g0, g1)
                # slack of a few ulps of the data scale for rounding in the entropy sum
                assert lhs <= rhs * (1 + 1e-12) + 4 * np.finfo(float).eps * max(g0, g1)
                if rhs > 0:
                    best = max(best, lhs / rhs)
        assert best > 0.99, p


@pytest.mark.acceptance("AC6", "ball LSI constant 2/e at sigma* = 1 and ball spectral gap pi^2/4")
def test_ac6_ball_constants():
    s, value = K.ball_lsi_optimizer()
    assert abs(s - 1) <= 1e-8
    assert abs(K.ball_lsi_constant() - 2 / math.e) <= 1e-8
    assert value == K.ball_lsi_chain(s)
    assert abs(spectral_gap_1d(UniformBall(1.0, 1)).lambda1 - math.pi**2 / 4) <= 1e-3


def _decade_slopes(values):
    return np.diff(values) / math.log(10)


@pytest.mark.acceptance("AC7", "LSI bound and Bobkov-Gotze functional grow like |log p|; PI bound stays bounded")
def test_ac7_logarithmic_blowup():
    ps = [10.0**-k for k in range(2, 7)]
    cn = K.fit_combined_constant(1)
    lsi = [K.uniform_gaussian_combined_bound(p, 1, cn) for p in ps]
    lower = [lsi_lower_bound_1d(K.uniform_gaussian_mixture(p, 1)) for p in ps]
    for seq in (lsi, lower):
        slopes = _decade_slopes(seq)
        assert np.all(slopes > 0)
        drift = np.abs(np.diff(slopes)) / slopes[:-1]
        assert np.all(drift < 0.10), slopes
    sc = scenarios.get("uniform-gauss")
    pi = [sc.bounds(p)["pi_nested"]["inverse_constant"] for p in ps if p < 1e-3]
    assert (max(pi) - min(pi)) / min(pi) < 0.05


@pytest.mark.acceptance("AC8", "covariance, variance and entropy identities on 20 random instances")
def test_ac8_identity_oracles():
    rng = np.random.default_rng(8)
    for _ in range(20):
        m0 = GaussianIso([rng.uniform(-2, 2)], rng.uniform(0.5, 2.0))
        m1 = GaussianIso([rng.uniform(-2, 2)], rng.uniform(0.5, 2.0))
        spec = MixtureSpec(m0, m1, rng.uniform(0.05, 0.95))
        f = polynomial(rng.normal(size=4))
        c = rng.normal(size=3)
        h = TestFunction(lambda x, c=c: np.sqrt(1 + (c[0] + c[1] * x + c[2] * x * x) ** 2), positive=True)
        for rep in (check_mean_diff_covariance(spec, f),
                    check_variance_decomposition(spec, f),
                    check_entropy_decomposition(spec, h)):
            assert rep.relation is Relation.HOLDS, rep.to_dict()
