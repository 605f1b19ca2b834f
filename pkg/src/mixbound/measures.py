"""Measure models on R^n, two-component mixtures, and integration of functionals.

One-dimensional integrals use adaptive Gauss-Kronrod quadrature (QUADPACK via
scipy) on a truncated support; integrals in dimension >= 2 are plain Monte Carlo
with an attached standard error.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, stats

from .errors import (
    DimensionMismatch,
    IntegrationDidNotConverge,
    NonPositiveFunction,
    NotAbsolutelyContinuous,
    NotNested,
)

ATOL = 1e-9
RTOL = 1e-10
# Gaussian supports are cut at mean +- TAIL_Z standard deviations (tail mass ~ 1e-32).
TAIL_Z = 12.0
MC_SAMPLES = 10**6
FD_SCALE = float(np.cbrt(np.finfo(float).eps))


def ball_volume(n: int, radius: float = 1.0) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * radius**n


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n."""
    return n * ball_volume(n)


@dataclass(frozen=True)
class Support:
    """Closed support region: an interval in 1D, or the whole space / a centered ball in nD."""

    dim: int
    radius: float = math.inf
    lo: float = -math.inf
    hi: float = math.inf

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Support":
        return cls(dim=1, lo=float(lo), hi=float(hi), radius=max(abs(lo), abs(hi)))

    @classmethod
    def ball(cls, dim: int, radius: float = math.inf) -> "Support":
        if dim == 1:
            return cls.interval(-radius, radius)
        return cls(dim=dim, radius=float(radius))

    @property
    def bounded(self) -> bool:
        if self.dim == 1:
            return math.isfinite(self.lo) and math.isfinite(self.hi)
        return math.isfinite(self.radius)

    def contains(self, other: "Support") -> bool:
        if self.dim != other.dim:
            raise DimensionMismatch(f"support dims {self.dim} and {other.dim}")
        if self.dim == 1:
            return self.lo <= other.lo and other.hi <= self.hi
        return other.radius <= self.radius


def _as_points(x, dim: int) -> tuple[np.ndarray, tuple]:
    """Return points as a (k, dim) array plus the shape to give results."""
    arr = np.asarray(x, dtype=float)
    if dim == 1:
        if arr.ndim == 2 and arr.shape[1] == 1:
            return arr, arr.shape[:-1]
        return arr.reshape(-1, 1), arr.shape
    if arr.ndim == 0 or arr.shape[-1] != dim:
        raise DimensionMismatch(f"expected points with last axis {dim}, got shape {arr.shape}")
    return arr.reshape(-1, dim), arr.shape[:-1]


def _shaped(values: np.ndarray, shape: tuple):
    if shape == ():
        return float(values[0])
    return values.reshape(shape)


class MeasureModel:
    """Absolutely continuous probability measure with an evaluable log-density.

    Subclasses implement ``_logpdf`` on arrays of shape (k, dim).
    """

    dim: int

    def _logpdf(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def log_density(self, x):
        pts, shape = _as_points(x, self.dim)
        return _shaped(self._logpdf(pts), shape)

    def density(self, x):
        pts, shape = _as_points(x, self.dim)
        return _shaped(np.exp(self._logpdf(pts)), shape)

    @property
    def support(self) -> Support:
        raise NotImplementedError

    @property
    def hessian_lower_bound(self) -> float | None:
        """Certified lower bound on the Hessian of -log density, if known analytically."""
        return None

    @property
    def is_radial(self) -> bool:
        return False

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    # 1D helpers
    def integration_interval(self) -> tuple[float, float]:
        s = self.support
        return s.lo, s.hi

    def breakpoints(self) -> list[float]:
        return []

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def cdf(self, x):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class GaussianIso(MeasureModel):
    mean: np.ndarray
    variance: float

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float)).copy()
        mean.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        if not self.variance > 0:
            raise ValueError("variance must be positive")
        object.__setattr__(self, "variance", float(self.variance))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)

    def _logpdf(self, pts):
        r2 = np.sum((pts - self.mean) ** 2, axis=1)
        return -0.5 * r2 / self.variance - 0.5 * self.dim * math.log(2 * math.pi * self.variance)

    @property
    def support(self):
        return Support.ball(self.dim)

    @property
    def hessian_lower_bound(self):
        return 1.0 / self.variance

    @property
    def is_radial(self):
        return not np.any(self.mean)

    def radial_log_density(self, r):
        r = np.asarray(r, dtype=float)
        return -0.5 * r**2 / self.variance - 0.5 * self.dim * math.log(2 * math.pi * self.variance)

    def sample(self, rng, size):
        return self.mean + self.sd * rng.standard_normal((size, self.dim))

    def integration_interval(self):
        m = float(self.mean[0])
        return m - TAIL_Z * self.sd, m + TAIL_Z * self.sd

    def breakpoints(self):
        return [float(self.mean[0])]

    def cdf(self, x):
        return stats.norm.cdf(x, loc=self.mean[0], scale=self.sd)

    def sf(self, x):
        return stats.norm.sf(x, loc=self.mean[0], scale=self.sd)


@dataclass(frozen=True, eq=False)
class GaussianFull(MeasureModel):
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float)).copy()
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=float)).copy()
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise DimensionMismatch(f"covariance shape {cov.shape} vs mean length {mean.shape[0]}")
        if not np.allclose(cov, cov.T, rtol=1e-12, atol=1e-14):
            raise ValueError("covariance must be symmetric")
        eig = np.linalg.eigvalsh(cov)
        if eig[0] <= 0:
            raise ValueError("covariance must be positive definite")
        for a in (mean, cov):
            a.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "_chol", np.linalg.cholesky(cov))
        object.__setattr__(self, "_eig", eig)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def _logpdf(self, pts):
        from scipy.linalg import solve_triangular

        z = solve_triangular(self._chol, (pts - self.mean).T, lower=True)
        logdet = 2.0 * np.sum(np.log(np.diag(self._chol)))
        return -0.5 * np.sum(z**2, axis=0) - 0.5 * (self.dim * math.log(2 * math.pi) + logdet)

    @property
    def support(self):
        return Support.ball(self.dim)

    @property
    def hessian_lower_bound(self):
        return 1.0 / float(self._eig[-1])

    @property
    def is_radial(self):
        return not np.any(self.mean) and np.allclose(self.covariance, self._eig[0] * np.eye(self.dim))

    def sample(self, rng, size):
        return self.mean + rng.standard_normal((size, self.dim)) @ self._chol.T

    @property
    def _sd1(self) -> float:
        return math.sqrt(float(self.covariance[0, 0]))

    def integration_interval(self):
        m = float(self.mean[0])
        return m - TAIL_Z * self._sd1, m + TAIL_Z * self._sd1

    def breakpoints(self):
        return [float(self.mean[0])]

    def cdf(self, x):
        return stats.norm.cdf(x, loc=self.mean[0], scale=self._sd1)

    def sf(self, x):
        return stats.norm.sf(x, loc=self.mean[0], scale=self._sd1)


@dataclass(frozen=True, eq=False)
class UniformBall(MeasureModel):
    """Uniform probability measure on the centered ball of the given radius."""

    radius: float = 1.0
    dim: int = 1

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError("dim must be a positive integer")

    @property
    def volume(self) -> float:
        return ball_volume(self.dim, self.radius)

    def _logpdf(self, pts):
        inside = np.sum(pts**2, axis=1) <= self.radius**2
        return np.where(inside, -math.log(self.volume), -np.inf)

    def radial_log_density(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.radius, -math.log(self.volume), -np.inf)

    @property
    def support(self):
        return Support.ball(self.dim, self.radius)

    @property
    def hessian_lower_bound(self):
        # constant potential: convex, but no strictly positive curvature
        return 0.0

    @property
    def is_radial(self):
        return True

    def sample(self, rng, size):
        d = rng.standard_normal((size, self.dim))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = self.radius * rng.random(size) ** (1.0 / self.dim)
        return d * r[:, None]

    def breakpoints(self):
        return [-self.radius, self.radius]

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) + self.radius) / (2 * self.radius), 0.0, 1.0)

    def sf(self, x):
        return np.clip((self.radius - np.asarray(x, dtype=float)) / (2 * self.radius), 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Tabulated1D(MeasureModel):
    """1D density given by log-values on a grid, log-linearly interpolated, zero outside."""

    grid: np.ndarray
    log_density: np.ndarray = field(repr=False)

    dim = 1

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float).copy()
        logd = np.asarray(self.log_density, dtype=float).copy()
        if grid.ndim != 1 or grid.shape != logd.shape:
            raise ValueError("grid and log_density must be 1D arrays of equal length")
        if grid.size < 3:
            raise ValueError("need at least 3 grid points")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(logd)):
            raise ValueError("log_density must be finite on the grid")
        grid.setflags(write=False)
        logd.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "log_density", logd)
        masses = self._segment_masses()
        total = masses.sum()
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"density integrates to {total:.8g}, not 1; use Tabulated1D.normalized")
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(masses)]) / total)

    @classmethod
    def normalized(cls, grid, log_density) -> "Tabulated1D":
        grid = np.asarray(grid, dtype=float)
        logd = np.asarray(log_density, dtype=float)
        masses = _exp_linear_masses(grid, logd)
        return cls(grid, logd - math.log(masses.sum()))

    @classmethod
    def from_csv(cls, path, normalize: bool = True) -> "Tabulated1D":
        xs, ls = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    x, l = float(row[0]), float(row[1])
                except ValueError:
                    continue  # header
                xs.append(x)
                ls.append(l)
        return cls.normalized(xs, ls) if normalize else cls(xs, ls)

    def _segment_masses(self):
        return _exp_linear_masses(self.grid, self.log_density)

    def _logpdf(self, pts):
        x = pts[:, 0]
        inside = (x >= self.grid[0]) & (x <= self.grid[-1])
        return np.where(inside, np.interp(x, self.grid, self.log_density), -np.inf)

    @property
    def support(self):
        return Support.interval(self.grid[0], self.grid[-1])

    def breakpoints(self):
        return list(self.grid) if self.grid.size <= 100 else [self.grid[0], self.grid[-1]]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, self.grid[0], self.grid[-1])
        i = np.clip(np.searchsorted(self.grid, xc, side="right") - 1, 0, self.grid.size - 2)
        a = self.log_density[i]
        s = (self.log_density[i + 1] - a) / (self.grid[i + 1] - self.grid[i])
        t = xc - self.grid[i]
        return self._cum[i] + np.exp(a) * _expm1_over(s, t)

    def sample(self, rng, size):
        u = rng.random(size)
        i = np.clip(np.searchsorted(self._cum, u, side="right") - 1, 0, self.grid.size - 2)
        a = self.log_density[i]
        s = (self.log_density[i + 1] - a) / (self.grid[i + 1] - self.grid[i])
        m = (u - self._cum[i]) * np.exp(-a)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(np.abs(s) > 1e-12, np.log1p(s * m) / s, m)
        return (self.grid[i] + t)[:, None]


def _expm1_over(s, t):
    """(exp(s t) - 1) / s, continuous at s = 0."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(s) > 1e-12, np.expm1(s * t) / s, t)


def _exp_linear_masses(grid, logd):
    h = np.diff(grid)
    s = np.diff(logd) / h
    return np.exp(logd[:-1]) * _expm1_over(s, h)


@dataclass(frozen=True, eq=False)
class MixtureSpec:
    """The mixture p*mu0 + (1-p)*mu1 of two measures with nested supports."""

    mu0: MeasureModel
    mu1: MeasureModel
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.mu0.dim != self.mu1.dim:
            raise DimensionMismatch(f"component dims {self.mu0.dim} and {self.mu1.dim}")
        s0, s1 = self.mu0.support, self.mu1.support
        if not (s0.contains(s1) or s1.contains(s0)):
            raise NotNested("supports of mu0 and mu1 are not nested")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def dim(self) -> int:
        return self.mu0.dim

    def with_p(self, p: float) -> "MixtureSpec":
        return MixtureSpec(self.mu0, self.mu1, p)

    def swapped(self) -> "MixtureSpec":
        return MixtureSpec(self.mu1, self.mu0, self.q)

    @property
    def mu1_ll_mu0(self) -> bool:
        return self.mu0.support.contains(self.mu1.support)

    @property
    def mu0_ll_mu1(self) -> bool:
        return self.mu1.support.contains(self.mu0.support)

    def _logpdf(self, pts):
        with np.errstate(divide="ignore"):
            l0 = self.mu0._logpdf(pts) + math.log(self.p) if self.p > 0 else np.full(len(pts), -np.inf)
            l1 = self.mu1._logpdf(pts) + math.log(self.q) if self.q > 0 else np.full(len(pts), -np.inf)
        return np.logaddexp(l0, l1)

    def log_density(self, x):
        pts, shape = _as_points(x, self.dim)
        return _shaped(self._logpdf(pts), shape)

    def density(self, x):
        pts, shape = _as_points(x, self.dim)
        d = self.p * np.exp(self.mu0._logpdf(pts)) + self.q * np.exp(self.mu1._logpdf(pts))
        return _shaped(d, shape)

    @property
    def support(self) -> Support:
        return self.mu0.support if self.mu1_ll_mu0 else self.mu1.support

    def sample(self, rng, size):
        pick = rng.random(size) < self.p
        out = np.empty((size, self.dim))
        k = int(pick.sum())
        out[pick] = self.mu0.sample(rng, k)
        out[~pick] = self.mu1.sample(rng, size - k)
        return out

    def integration_interval(self):
        a0, b0 = self.mu0.integration_interval()
        a1, b1 = self.mu1.integration_interval()
        return min(a0, a1), max(b0, b1)

    def breakpoints(self):
        return sorted(set(self.mu0.breakpoints()) | set(self.mu1.breakpoints()))

    def cdf(self, x):
        return self.p * self.mu0.cdf(x) + self.q * self.mu1.cdf(x)

    def sf(self, x):
        return self.p * self.mu0.sf(x) + self.q * self.mu1.sf(x)


def density(m, x):
    """Lebesgue density of ``m`` at ``x`` (0 outside the support)."""
    return m.density(x)


def relative_density(num: MeasureModel, den: MeasureModel, x):
    """d(num)/d(den) at x; +inf where den vanishes but num does not."""
    if num.dim != den.dim:
        raise DimensionMismatch(f"dims {num.dim} and {den.dim}")
    if not den.support.contains(num.support):
        raise NotAbsolutelyContinuous("supp(num) is not contained in supp(den)")
    pts, shape = _as_points(x, num.dim)
    ln, ld = num._logpdf(pts), den._logpdf(pts)
    with np.errstate(invalid="ignore"):
        r = np.where(np.isneginf(ln), 0.0, np.where(np.isneginf(ld), np.inf, np.exp(ln - ld)))
    return _shaped(r, shape)


# --------------------------------------------------------------------------
# test functions and integration


@dataclass(frozen=True)
class TestFunction:
    """A test function with analytic or finite-difference gradient.

    Evaluators must accept numpy input: a float or a (k,) array in 1D, a
    (k, n) array in dimension n.  ``grad`` returns the derivative (1D) or a
    (k, n) array of gradients.
    """

    __test__ = False  # not a pytest class

    f: Callable
    grad: Callable | None = None
    positive: bool = False
    name: str = ""

    def __call__(self, x):
        return self.f(x)

    @property
    def fd_scale(self) -> float | None:
        """Relative central-difference step, or None for analytic gradients."""
        return None if self.grad is not None else FD_SCALE

    def gradient(self, x, dim: int = 1):
        if self.grad is not None:
            return self.grad(x)
        if dim == 1:
            x = np.asarray(x, dtype=float)
            h = FD_SCALE * np.maximum(1.0, np.abs(x))
            return (self.f(x + h) - self.f(x - h)) / (2 * h)
        x = np.asarray(x, dtype=float)
        g = np.empty_like(x)
        for j in range(dim):
            h = FD_SCALE * np.maximum(1.0, np.abs(x[:, j]))
            e = np.zeros_like(x)
            e[:, j] = h
            g[:, j] = (self.f(x + e) - self.f(x - e)) / (2 * h)
        return g


def as_test_function(f, positive: bool = False) -> TestFunction:
    if isinstance(f, TestFunction):
        return f
    if callable(f):
        return TestFunction(f, positive=positive)
    c = float(f)

    def const(x):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape[:-1] if x.ndim == 2 else x.shape, c)

    return TestFunction(const, grad=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                        positive=c > 0, name=f"const({c:g})")


@dataclass(frozen=True)
class Estimate:
    value: float
    error: float
    method: str
    n_samples: int | None = None

    def __float__(self):
        return float(self.value)


def _quad(func, lo, hi, points, tol):
    pts = sorted({float(t) for t in points if lo < t < hi})
    res = integrate.quad(func, lo, hi, points=pts or None, epsabs=tol, epsrel=RTOL,
                         limit=1000, full_output=1)
    val, err = res[0], res[1]
    if not math.isfinite(val) or err > 10 * max(tol, RTOL * abs(val)):
        raise IntegrationDidNotConverge(f"quadrature on [{lo:g}, {hi:g}]: value {val:g}, error estimate {err:g}")
    return val, err


def integrate_1d(m, g: Callable, tol: float = ATOL, interval=None, points=()) -> Estimate:
    """Integral of g against the (1D) measure or mixture m by adaptive quadrature."""
    lo, hi = interval if interval is not None else m.integration_interval()

    def integrand(x):
        d = float(np.exp(m._logpdf(np.array([[x]]))[0]))
        return 0.0 if d == 0.0 else float(g(x)) * d

    val, err = _quad(integrand, lo, hi, list(m.breakpoints()) + list(points), tol)
    if not m.support.bounded:
        # the truncated tails must not carry integrand mass
        w = 0.5 * (hi - lo)
        tail = 0.0
        if math.isinf(m.support.lo) or m.support.lo < lo:
            tail += abs(integrate.quad(integrand, lo - w, lo, limit=200)[0])
        if math.isinf(m.support.hi) or m.support.hi > hi:
            tail += abs(integrate.quad(integrand, hi, hi + w, limit=200)[0])
        if tail > 10 * max(tol, RTOL * abs(val)):
            raise IntegrationDidNotConverge(f"integrand carries mass {tail:g} beyond the truncated support")
    return Estimate(val, err, "quadrature")


def _mc_values(m, g, n_samples, seed):
    rng = np.random.default_rng(seed)
    return np.asarray(g(m.sample(rng, n_samples)), dtype=float)


def _mc(values) -> Estimate:
    n = values.size
    return Estimate(float(values.mean()), float(values.std(ddof=1) / math.sqrt(n)), "monte_carlo", n)


def mean_functional(m, f, *, tol: float = ATOL, n_samples: int = MC_SAMPLES, seed: int = 0,
                    interval=None) -> Estimate:
    """Mean of f under m; ``interval`` overrides the 1D truncation."""
    f = as_test_function(f)
    if m.dim == 1:
        return integrate_1d(m, f, tol, interval)
    return _mc(_mc_values(m, f, n_samples, seed))


def variance_functional(m, f, *, tol: float = ATOL, n_samples: int = MC_SAMPLES, seed: int = 0) -> Estimate:
    f = as_test_function(f)
    if m.dim == 1:
        mean = integrate_1d(m, f, tol)
        v = integrate_1d(m, lambda x: (f(x) - mean.value) ** 2, tol)
        return Estimate(v.value, v.error + 2 * abs(mean.value) * mean.error, "quadrature")
    vals = _mc_values(m, f, n_samples, seed)
    return _mc((vals - vals.mean()) ** 2)


def covariance_functional(m, f, g, *, tol: float = ATOL, n_samples: int = MC_SAMPLES, seed: int = 0,
                          interval=None) -> Estimate:
    f, g = as_test_function(f), as_test_function(g)
    if m.dim == 1:
        mf = integrate_1d(m, f, tol, interval)
        mg = integrate_1d(m, g, tol, interval)
        c = integrate_1d(m, lambda x: (f(x) - mf.value) * (g(x) - mg.value), tol, interval)
        return Estimate(c.value, c.error + abs(mf.value) * mg.error + abs(mg.value) * mf.error, "quadrature")
    rng = np.random.default_rng(seed)
    pts = m.sample(rng, n_samples)
    fv, gv = np.asarray(f(pts), dtype=float), np.asarray(g(pts), dtype=float)
    return _mc((fv - fv.mean()) * (gv - gv.mean()))


def _entropy_term(fx, mf, allow_zero):
    # f log(f/mf) - f + mf >= 0 pointwise; integrates to Ent[f]
    fx = np.asarray(fx, dtype=float)
    if np.any(fx < 0) or (not allow_zero and np.any(fx == 0)):
        raise NonPositiveFunction("entropy needs f > 0 on the support")
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(fx > 0, fx * np.log(fx / mf), 0.0)
    return t - fx + mf


def entropy_functional(m, f, *, allow_zero: bool = False, tol: float = ATOL,
                       n_samples: int = MC_SAMPLES, seed: int = 0) -> Estimate:
    """Ent_m[f] = E[f log f] - E[f] log E[f] for positive f."""
    if isinstance(f, TestFunction) and not f.positive:
        raise NonPositiveFunction("test function is not flagged positive")
    f = as_test_function(f, positive=True)
    if m.dim == 1:
        mf = integrate_1d(m, f, tol)
        if mf.value <= 0:
            raise NonPositiveFunction("mean of f is not positive")
        e = integrate_1d(m, lambda x: float(_entropy_term(f(x), mf.value, allow_zero)), tol)
        return Estimate(max(e.value, 0.0), e.error, "quadrature")
    vals = _mc_values(m, f, n_samples, seed)
    return _mc(_entropy_term(vals, vals.mean(), allow_zero))


def dirichlet_energy(m, f, *, tol: float = ATOL, n_samples: int = MC_SAMPLES, seed: int = 0) -> Estimate:
    """Integral of |grad f|^2; a mixture is expanded as p*(under mu0) + q*(under mu1)."""
    f = as_test_function(f)
    if isinstance(m, MixtureSpec):
        parts = [(w, dirichlet_energy(c, f, tol=tol, n_samples=n_samples, seed=seed + i))
                 for i, (w, c) in enumerate(((m.p, m.mu0), (m.q, m.mu1))) if w > 0]
        return Estimate(sum(w * e.value for w, e in parts), sum(w * e.error for w, e in parts), parts[0][1].method)
    if m.dim == 1:
        return integrate_1d(m, lambda x: float(f.gradient(x)) ** 2, tol)
    vals = _mc_values(m, lambda x: np.sum(f.gradient(x, m.dim) ** 2, axis=1), n_samples, seed)
    return _mc(vals)


# --------------------------------------------------------------------------
# serialization

_KINDS = {"gaussian_iso", "gaussian_full", "uniform_ball", "tabulated_1d"}


def measure_to_dict(m: MeasureModel) -> dict:
    if isinstance(m, GaussianIso):
        return {"kind": "gaussian_iso", "mean": m.mean.tolist(), "variance": m.variance}
    if isinstance(m, GaussianFull):
        return {"kind": "gaussian_full", "mean": m.mean.tolist(), "covariance": m.covariance.tolist()}
    if isinstance(m, UniformBall):
        return {"kind": "uniform_ball", "radius": m.radius, "dim": m.dim}
    if isinstance(m, Tabulated1D):
        return {"kind": "tabulated_1d", "grid": m.grid.tolist(), "log_density": m.log_density.tolist()}
    raise TypeError(f"cannot serialize {type(m).__name__}")


def measure_from_dict(d: dict) -> MeasureModel:
    kind = d.get("kind")
    if kind == "gaussian_iso":
        return GaussianIso(d["mean"], d["variance"])
    if kind == "gaussian_full":
        return GaussianFull(d["mean"], d["covariance"])
    if kind == "uniform_ball":
        return UniformBall(d.get("radius", 1.0), d.get("dim", 1))
    if kind == "tabulated_1d":
        if "csv" in d:
            return Tabulated1D.from_csv(d["csv"])
        return Tabulated1D.normalized(d["grid"], d["log_density"])
    raise ValueError(f"unknown measure kind {kind!r}; expected one of {sorted(_KINDS)}")


def mixture_to_dict(spec: MixtureSpec) -> dict:
    return {"mu0": measure_to_dict(spec.mu0), "mu1": measure_to_dict(spec.mu1), "p": spec.p}


def mixture_from_dict(d: dict) -> MixtureSpec:
    return MixtureSpec(measure_from_dict(d["mu0"]), measure_from_dict(d["mu1"]), float(d["p"]))


def polynomial(coeffs: Sequence[float]) -> TestFunction:
    """1D polynomial test function sum c_k x^k with exact derivative."""
    c = np.asarray(coeffs, dtype=float)
    dc = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1)
    return TestFunction(lambda x: np.polynomial.polynomial.polyval(x, c),
                        grad=lambda x: np.polynomial.polynomial.polyval(x, dc),
                        name=f"poly{tuple(np.round(c, 4))}")

