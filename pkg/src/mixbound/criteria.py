"""Convexity and perturbation criteria for component constants.

Bakry-Emery gives (kappa, kappa) from a Hessian lower bound, Holley-Stroock
scales by exp(-osc psi).  The uniform-ball and uniform+Gaussian examples are
built on top of those two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .bounds import inv_log_mean, lsi_nested_bound
from .divergence import g_constant
from .errors import NoConvexityBound
from .measures import FD_SCALE, GaussianFull, GaussianIso, MeasureModel, MixtureSpec, Support, UniformBall

GOLDEN_BRACKET = (1e-6, 5.0, 20.0)
GOLDEN_TOL = 1e-10
HESSIAN_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class HamiltonianModel:
    """mu proportional to exp(-H) on a convex domain, with an optional analytic Hessian lower bound."""

    potential: Callable[[np.ndarray], float]
    domain: Support
    hessian_lower_bound: float | None = None

    @property
    def dim(self) -> int:
        return self.domain.dim

    @classmethod
    def from_measure(cls, m: MeasureModel) -> "HamiltonianModel":
        if isinstance(m, (GaussianIso, GaussianFull)):
            return cls(lambda x: -float(m.log_density(np.asarray(x))), m.support, m.hessian_lower_bound)
        raise NoConvexityBound(f"no analytic Hessian bound for {type(m).__name__}")


@dataclass(frozen=True, eq=False)
class PerturbationModel:
    psi: Callable[[np.ndarray], float]
    osc: float

    def __post_init__(self):
        if not self.osc >= 0:
            raise ValueError("oscillation must be nonnegative")


def bakry_emery(h: HamiltonianModel) -> tuple[float, float]:
    k = h.hessian_lower_bound
    if k is None or not k > 0:
        raise NoConvexityBound("a strictly positive Hessian lower bound is required")
    return float(k), float(k)


def holley_stroock(base: tuple[float, float], pert: PerturbationModel) -> tuple[float, float]:
    f = math.exp(-pert.osc)
    return base[0] * f, base[1] * f


def fd_hessian(func: Callable, x: np.ndarray) -> np.ndarray:
    """Central-difference Hessian, symmetrized."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = FD_SCALE * max(1.0, float(np.max(np.abs(x))))
    H = np.empty((n, n))
    f0 = func(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (func(x + ei) - 2 * f0 + func(x - ei)) / h**2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = H[j, i] = (func(x + ei + ej) - func(x + ei - ej) - func(x - ei + ej) + func(x - ei - ej)) / (4 * h * h)
    return 0.5 * (H + H.T)


def hessian_spot_check(h: HamiltonianModel, rng: np.random.Generator, n_points: int = 100,
                       tol: float = HESSIAN_TOL) -> float:
    """Smallest finite-difference Hessian eigenvalue seen at random points; raises if below kappa - tol.

    Only a consistency check on the analytic bound, never a replacement for it.
    """
    kappa = bakry_emery(h)[0]
    scale = h.domain.radius if math.isfinite(h.domain.radius) else 3.0
    worst = math.inf
    for _ in range(n_points):
        x = rng.uniform(-scale, scale, size=h.dim) / math.sqrt(h.dim)
        worst = min(worst, float(np.linalg.eigvalsh(fd_hessian(h.potential, x))[0]))
    if worst < kappa - tol:
        raise NoConvexityBound(f"finite-difference Hessian eigenvalue {worst} below kappa {kappa}")
    return worst


# --------------------------------------------------------------------------
# uniform ball


def weinberger_constant(diameter: float) -> float:
    """pi^2 / diam^2, the optimal Poincare constant over convex domains of the given diameter."""
    return math.pi**2 / diameter**2


def ball_family_hamiltonian(sigma: float, dim: int = 1) -> HamiltonianModel:
    """H = sigma |x|^2 - sigma/2 on the unit ball; Hessian 2 sigma I."""
    return HamiltonianModel(lambda x: sigma * float(np.dot(x, x)) - sigma / 2, Support.ball(dim, 1.0), 2.0 * sigma)


def ball_family_perturbation(sigma: float) -> PerturbationModel:
    # psi = sigma/2 - sigma |x|^2 ranges over [-sigma/2, sigma/2] on B_1, so sup - inf = sigma
    return PerturbationModel(lambda x: sigma / 2 - sigma * float(np.dot(x, x)), float(sigma))


def ball_lsi_chain(sigma: float) -> float:
    """2 sigma e^{-sigma}: Bakry-Emery on nu_sigma followed by Holley-Stroock back to the uniform measure."""
    return holley_stroock(bakry_emery(ball_family_hamiltonian(sigma)), ball_family_perturbation(sigma))[1]


def _neg_log_chain(sigma: float) -> float:
    # -(log sigma - sigma) shifted by its optimum, written so that it is O((sigma-1)^2) near sigma = 1
    t = sigma - 1.0
    return t - math.log1p(t)


def ball_lsi_optimizer() -> tuple[float, float]:
    """(sigma*, 2 sigma* e^{-sigma*}) by golden-section search."""
    s = optimize.golden(_neg_log_chain, brack=GOLDEN_BRACKET, tol=GOLDEN_TOL)
    return float(s), ball_lsi_chain(float(s))


def ball_lsi_optimizer_root() -> float:
    """sigma* as the root of d/dsigma 2 sigma e^{-sigma} = 2 e^{-sigma}(1 - sigma)."""
    return optimize.brentq(lambda s: 2 * math.exp(-s) * (1 - s), GOLDEN_BRACKET[0], GOLDEN_BRACKET[2], xtol=1e-14)


def ball_lsi_constant() -> float:
    return ball_lsi_optimizer()[1]


def component_constants(m: MeasureModel) -> tuple[float, float]:
    """(rho, alpha) from the catalogued criteria: Bakry-Emery for Gaussians, Weinberger and the ball chain for balls."""
    if isinstance(m, (GaussianIso, GaussianFull)):
        return bakry_emery(HamiltonianModel.from_measure(m))
    if isinstance(m, UniformBall):
        r2 = m.radius**2
        return weinberger_constant(2 * m.radius), ball_lsi_constant() / r2
    raise NoConvexityBound(f"no catalogued criterion for {type(m).__name__}")


# --------------------------------------------------------------------------
# uniform ball + standard Gaussian, mu_p = p N(0, I) + q U(B_1)


def _behs_c(p: float, n: int) -> float:
    return (1.0 - p) / p * math.sqrt(math.e) * g_constant(n)


def _check_p(p: float, allow_one: bool = True) -> float:
    p = float(p)
    if not (0.0 < p < 1.0 or (allow_one and p == 1.0)):
        raise ValueError("p must lie in (0, 1]")
    return p


def uniform_gaussian_behs_bound(p: float, n: int) -> float:
    """1 + ((1-p)/p) sqrt(e) g_n, valid for both 1/rho_p and 1/alpha_p."""
    return 1.0 + _behs_c(_check_p(p), n)


def uniform_gaussian_psi_osc(p: float, n: int) -> float:
    return math.log1p(_behs_c(_check_p(p), n))


def uniform_gaussian_psi(p: float, n: int) -> Callable:
    """psi_p as a function of |x|; zero outside the unit ball."""
    c = _behs_c(_check_p(p), n)

    def psi(r):
        r = np.asarray(r, dtype=float)
        inside = np.log(np.exp(-r * r / 2 + 0.5) + c) + (r * r - 1) / 2
        return np.where(r <= 1.0, inside, 0.0)

    return psi


def uniform_gaussian_mixture(p: float, n: int) -> MixtureSpec:
    return MixtureSpec(GaussianIso(np.zeros(n), 1.0), UniformBall(1.0, n), p)


def uniform_gaussian_components(n: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """((rho0, rho1), (alpha0, alpha1)) for N(0, I) and U(B_1)."""
    return (1.0, weinberger_constant(2.0)), (1.0, ball_lsi_constant())


def uniform_gaussian_pi_display(p: float, n: int) -> float:
    """p + q sqrt(e) g_n, the closed upper estimate of the nested Poincare bound."""
    return p + (1.0 - p) * math.sqrt(math.e) * g_constant(n)


def uniform_gaussian_lsi_display(p: float, n: int) -> float:
    """max{(1 + p lambda_p) e/2, 1 + q lambda_p sqrt(e) g_n}."""
    lam = inv_log_mean(p)
    q = 1.0 - p
    return max((1 + p * lam) * math.e / 2, 1 + q * lam * math.sqrt(math.e) * g_constant(n))


def uniform_gaussian_lsi_nested(p: float, n: int, chi0: float) -> float:
    """Nested LSI bound with the exact chi0 in place of its sqrt(e) g_n - 1 upper estimate."""
    _, alphas = uniform_gaussian_components(n)
    return lsi_nested_bound(alphas, (chi0, math.inf), p, direction=0).inverse_constant


def uniform_gaussian_min_bound(p: float, n: int) -> float:
    """min of the nested-LSI display and the Bakry-Emery/Holley-Stroock bound."""
    return min(uniform_gaussian_lsi_display(p, n), uniform_gaussian_behs_bound(p, n))


def uniform_gaussian_combined_bound(p: float, n: int, C_n: float) -> float:
    """C_n (1 + q lambda_p g_n); tends to C_n as p -> 1."""
    if not C_n > 0:
        raise ValueError("C_n must be positive")
    p = _check_p(p)
    if p == 1.0:
        return C_n
    return C_n * (1.0 + (1.0 - p) * inv_log_mean(p) * g_constant(n))


def default_p_grid() -> np.ndarray:
    return np.unique(np.concatenate([np.logspace(-12, -1, 111), np.linspace(0.01, 0.99, 99), 1 - np.logspace(-12, -2, 101)]))


def fit_combined_constant(n: int, p_grid=None) -> float:
    """Smallest C_n with min-bound <= C_n (1 + q lambda_p g_n) on the grid."""
    grid = default_p_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    return max(uniform_gaussian_min_bound(p, n) / uniform_gaussian_combined_bound(p, n, 1.0) for p in grid)
