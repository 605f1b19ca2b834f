import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixbound import criteria as K
from mixbound.divergence import chi2_closed_form, g_constant
from mixbound.errors import NoConvexityBound
from mixbound.measures import GaussianFull, GaussianIso, Support, Tabulated1D, UniformBall


def test_bakry_emery_gaussians():
    for sigma in (0.5, 1.0, 3.0):
        h = K.HamiltonianModel.from_measure(GaussianIso(np.zeros(2), sigma))
        assert K.bakry_emery(h) == pytest.approx((1 / sigma, 1 / sigma))
    cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    h = K.HamiltonianModel.from_measure(GaussianFull(np.zeros(2), cov))
    assert K.bakry_emery(h)[0] == pytest.approx(1 / np.linalg.eigvalsh(cov).max())


def test_bakry_emery_requires_a_bound():
    with pytest.raises(NoConvexityBound):
        K.bakry_emery(K.HamiltonianModel(lambda x: 0.0, Support.ball(1)))
    with pytest.raises(NoConvexityBound):
        K.bakry_emery(K.HamiltonianModel(lambda x: 0.0, Support.ball(1), -1.0))
    with pytest.raises(NoConvexityBound):
        K.HamiltonianModel.from_measure(UniformBall(1.0, 1))
    with pytest.raises(NoConvexityBound):
        K.component_constants(Tabulated1D.normalized(np.linspace(0, 1, 3), np.zeros(3)))


def test_holley_stroock():
    assert K.holley_stroock((2.0, 3.0), K.PerturbationModel(lambda x: 0.0, 0.0)) == (2.0, 3.0)
    assert K.holley_stroock((2.0, 3.0), K.PerturbationModel(lambda x: 0.0, math.log(2))) == pytest.approx((1.0, 1.5))
    with pytest.raises(ValueError):
        K.PerturbationModel(lambda x: 0.0, -0.1)


def test_hessian_spot_check(rng):
    cov = np.array([[2.0, 0.3, 0.0], [0.3, 1.0, 0.1], [0.0, 0.1, 0.5]])
    h = K.HamiltonianModel.from_measure(GaussianFull(np.zeros(3), cov))
    worst = K.hessian_spot_check(h, rng)
    assert worst >= h.hessian_lower_bound - 1e-4
    # an overstated bound is caught
    liar = K.HamiltonianModel(h.potential, h.domain, 10.0)
    with pytest.raises(NoConvexityBound):
        K.hessian_spot_check(liar, rng, n_points=5)


def test_ball_family(rng):
    h = K.ball_family_hamiltonian(1.5, dim=2)
    assert K.bakry_emery(h) == (3.0, 3.0)
    K.hessian_spot_check(h, rng, n_points=20)
    pert = K.ball_family_perturbation(1.5)
    r = np.linspace(0, 1, 101)
    vals = [pert.psi(np.array([x])) for x in r]
    assert max(vals) - min(vals) == pytest.approx(pert.osc)
    assert K.ball_lsi_chain(1.5) == pytest.approx(3.0 * math.exp(-1.5))


def test_ball_lsi_optimizers_agree():
    s_golden, value = K.ball_lsi_optimizer()
    s_root = K.ball_lsi_optimizer_root()
    assert abs(s_golden - s_root) <= 1e-10
    assert abs(s_golden - 1) <= 1e-8
    assert value == pytest.approx(2 / math.e, abs=1e-12)
    assert K.ball_lsi_constant() == value


def test_component_constants():
    assert K.component_constants(GaussianIso([0.0], 2.0)) == (0.5, 0.5)
    rho, alpha = K.component_constants(UniformBall(1.0, 3))
    assert rho == pytest.approx(math.pi**2 / 4)
    assert alpha == pytest.approx(2 / math.e)
    rho, alpha = K.component_constants(UniformBall(2.0, 1))
    assert rho == pytest.approx(math.pi**2 / 16)
    assert alpha == pytest.approx(2 / math.e / 4)


def test_uniform_gaussian_examples():
    g1 = math.sqrt(math.pi / 2)
    assert g_constant(1) == pytest.approx(1.25331, abs=5e-6)
    assert K.uniform_gaussian_behs_bound(1.0, 1) == 1.0
    assert K.uniform_gaussian_behs_bound(0.5, 1) == pytest.approx(1 + math.sqrt(math.e) * g1, rel=1e-14)
    assert K.uniform_gaussian_behs_bound(0.5, 1) == pytest.approx(3.0664, abs=5e-5)
    assert K.uniform_gaussian_psi_osc(1.0, 1) == 0.0
    assert K.uniform_gaussian_psi_osc(0.5, 1) == pytest.approx(math.log(1 + math.sqrt(math.e) * g1), rel=1e-14)
    assert K.uniform_gaussian_psi_osc(0.5, 1) == pytest.approx(1.120493, abs=5e-7)
    assert K.uniform_gaussian_combined_bound(0.5, 1, 1.0) == pytest.approx(1 + g1, rel=1e-14)
    assert K.uniform_gaussian_combined_bound(0.5, 1, 1.0) == pytest.approx(2.2533, abs=5e-5)
    assert K.uniform_gaussian_combined_bound(1.0, 1, 1.7) == 1.7
    with pytest.raises(ValueError):
        K.uniform_gaussian_combined_bound(0.5, 1, 0.0)
    with pytest.raises(ValueError):
        K.uniform_gaussian_behs_bound(0.0, 1)


@given(p1=st.floats(0.01, 1.0), p2=st.floats(0.01, 1.0), n=st.integers(1, 4))
def test_psi_osc_decreasing(p1, p2, n):
    lo, hi = sorted((p1, p2))
    assert K.uniform_gaussian_psi_osc(hi, n) <= K.uniform_gaussian_psi_osc(lo, n)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p", [1e-4, 0.1, 0.5, 0.9])
def test_psi_within_bound(p, n):
    r = np.linspace(0, 1.5, 301)
    psi = K.uniform_gaussian_psi(p, n)(r)
    assert np.all(psi >= 0)
    assert np.all(psi <= K.uniform_gaussian_psi_osc(p, n) * (1 + 1e-14))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hamiltonian_decomposition(n):
    # log mu_p(x) + |x|^2 / 2 - psi_p(|x|) is constant on R^n
    p = 0.3
    spec = K.uniform_gaussian_mixture(p, n)
    psi = K.uniform_gaussian_psi(p, n)
    r = np.concatenate([np.linspace(0, 0.99, 50), np.linspace(1.01, 3, 20)])
    x = np.zeros((r.size, n))
    x[:, 0] = r
    resid = np.log(spec.density(x)) + r * r / 2 - psi(r)
    assert np.ptp(resid) < 1e-12
    assert resid[0] == pytest.approx(math.log(p) - n / 2 * math.log(2 * math.pi))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pi_display_dominates_nested(n):
    rhos, _ = K.uniform_gaussian_components(n)
    chi0 = chi2_closed_form(K.uniform_gaussian_mixture(0.5, n)).chi0
    for p in np.linspace(0.01, 0.99, 25):
        nested = max(1 / rhos[1], (1 + (1 - p) * chi0) / rhos[0])
        assert nested <= K.uniform_gaussian_pi_display(p, n) * (1 + 1e-12)
        assert K.uniform_gaussian_lsi_nested(p, n, chi0) <= K.uniform_gaussian_lsi_display(p, n) * (1 + 1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_combined_bound_dominates_min(n):
    cn = K.fit_combined_constant(n)
    assert 1.0 < cn < 2.0
    for p in K.default_p_grid():
        assert K.uniform_gaussian_min_bound(p, n) <= K.uniform_gaussian_combined_bound(p, n, cn) * (1 + 1e-12)
    # the fit is tight somewhere on the grid
    ratios = [K.uniform_gaussian_min_bound(p, n) / K.uniform_gaussian_combined_bound(p, n, cn)
              for p in K.default_p_grid()]
    assert max(ratios) == pytest.approx(1.0, rel=1e-12)


def test_fitted_constants_frozen():
    # computed once by fit_combined_constant on the default grid
    assert K.fit_combined_constant(1) == pytest.approx(1.6305, abs=1e-4)
    assert K.fit_combined_constant(2) == pytest.approx(1.6372, abs=1e-4)
    assert K.fit_combined_constant(3) == pytest.approx(1.6425, abs=1e-4)
