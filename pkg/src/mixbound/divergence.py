"""Chi-squared constants between mixture components.

``chi0 = Var_{mu0}[d mu1 / d mu0] = int (d mu1/d mu0) d mu1 - 1`` and ``chi1`` with the
roles exchanged.  Infinite values are plain ``math.inf`` and never NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import _json
from .errors import InfiniteChi, IntegrationDidNotConverge, NotAbsolutelyContinuous, Unsupported
from .measures import (
    MC_SAMPLES,
    Estimate,
    GaussianFull,
    GaussianIso,
    MeasureModel,
    MixtureSpec,
    UniformBall,
    ball_volume,
    integrate_1d,
    sphere_area,
)

CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"
MONTE_CARLO = "monte_carlo"

# nested-truncation divergence heuristic
GROWTH_THRESHOLD = 0.10
GROWTH_RUNS = 3
MAX_REFINEMENTS = 14
QUAD_TOL = 1e-11


@dataclass(frozen=True)
class Chi2Pair:
    chi0: float
    chi1: float
    method: str = CLOSED_FORM
    stderr: float | None = None
    chi0_interval: tuple[float, float] | None = None
    chi1_interval: tuple[float, float] | None = None

    def __post_init__(self):
        for name in ("chi0", "chi1"):
            v = float(getattr(self, name))
            if math.isnan(v) or v < 0:
                raise ValueError(f"{name} must be a nonnegative extended real, got {v}")
            object.__setattr__(self, name, v)
        if self.method == MONTE_CARLO and self.stderr is None:
            raise ValueError("Monte Carlo results must carry a standard error")
        if self.method == CLOSED_FORM and self.stderr is not None:
            raise ValueError("closed-form results carry no standard error")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.chi0) and math.isfinite(self.chi1)

    def swapped(self) -> "Chi2Pair":
        return Chi2Pair(self.chi1, self.chi0, self.method, self.stderr, self.chi1_interval, self.chi0_interval)

    def to_dict(self) -> dict:
        d = {"chi0": _json.num(self.chi0), "chi1": _json.num(self.chi1),
             "method": self.method, "stderr": _json.num(self.stderr)}
        if self.chi0_interval is not None:
            d["chi0_interval"] = [_json.num(v) for v in self.chi0_interval]
        if self.chi1_interval is not None:
            d["chi1_interval"] = [_json.num(v) for v in self.chi1_interval]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Chi2Pair":
        return cls(_json.from_num(d["chi0"]), _json.from_num(d["chi1"]), d.get("method", CLOSED_FORM),
                   _json.from_num(d.get("stderr")))


def g_constant(n: int) -> float:
    """(2 pi)^{n/2} / vol(B_1) = 2^{n/2} Gamma(n/2 + 1)."""
    return 2 ** (n / 2) * math.gamma(n / 2 + 1)


def _components(spec) -> tuple[MeasureModel, MeasureModel]:
    if isinstance(spec, MixtureSpec):
        return spec.mu0, spec.mu1
    mu0, mu1 = spec
    return mu0, mu1


def _gaussian_params(m):
    if isinstance(m, GaussianIso):
        return m.mean, m.variance * np.eye(m.dim)
    return m.mean, m.covariance


def _is_gaussian(m) -> bool:
    return isinstance(m, (GaussianIso, GaussianFull))


def _ball_radial_integral(n: int, radius: float, variance: float) -> float:
    """int_0^R r^{n-1} exp(r^2 / (2v)) dr as a power series (all terms positive)."""
    terms = []
    k = 0
    term = radius**n / n
    while True:
        terms.append(term)
        k += 1
        # ratio of consecutive terms of R^{n+2k} / ((2v)^k k! (n+2k))
        term = term * radius**2 / (2 * variance * k) * (n + 2 * k - 2) / (n + 2 * k)
        if term < 1e-18 * terms[0] or k > 500:
            break
    return math.fsum(terms)


def _directional_closed_form(den, num):
    """int (num/den)^2 d den - 1 for a catalogued ordered pair, plus an optional bracket."""
    if den.dim != num.dim:
        raise Unsupported("dimension mismatch")
    n = den.dim
    if _is_gaussian(den) and _is_gaussian(num):
        m0, c0 = _gaussian_params(den)
        m1, c1 = _gaussian_params(num)
        if np.allclose(c0, c1, rtol=1e-14, atol=0):
            d = m1 - m0
            return math.expm1(float(d @ np.linalg.solve(c0, d))), None
        if isinstance(den, GaussianIso) and isinstance(num, GaussianIso) and np.allclose(m0, m1, rtol=0, atol=0):
            s = num.variance / den.variance
            if s >= 2:
                return math.inf, None
            return (s * (2 - s)) ** (-n / 2) - 1, None
        raise Unsupported("Gaussian pair with unequal, non-isotropic or off-center covariances")
    if isinstance(den, GaussianIso) and isinstance(num, UniformBall):
        if np.any(den.mean):
            raise Unsupported("ball versus off-center Gaussian")
        v, R = den.variance, num.radius
        vol = ball_volume(n, R)
        scale = (2 * math.pi * v) ** (n / 2) * sphere_area(n) / vol**2
        value = scale * _ball_radial_integral(n, R, v) - 1
        lower = (2 * math.pi * v) ** (n / 2) / vol
        return value, (lower - 1, lower * math.exp(R**2 / (2 * v)) - 1)
    if isinstance(num, GaussianIso) and isinstance(den, UniformBall):
        return math.inf, None
    if isinstance(den, UniformBall) and isinstance(num, UniformBall):
        if num.radius > den.radius:
            return math.inf, None
        return (den.radius / num.radius) ** n - 1, None
    raise Unsupported(f"no closed form for ({type(den).__name__}, {type(num).__name__})")


def chi2_closed_form(spec) -> Chi2Pair:
    """Exact (chi0, chi1) for catalogued pairs; raises Unsupported otherwise.

    Catalogue: equal-covariance Gaussians, concentric isotropic Gaussians,
    centered uniform ball against a centered isotropic Gaussian (radial series,
    with the elementary bracket attached), and nested centered balls.
    """
    mu0, mu1 = _components(spec)
    chi0, iv0 = _directional_closed_form(mu0, mu1)
    chi1, iv1 = _directional_closed_form(mu1, mu0)
    return Chi2Pair(chi0, chi1, CLOSED_FORM, None, iv0, iv1)


def chi2_from_density_bound(kappa: float) -> float:
    """Upper bound kappa^2 - 1 on chi when the relative density is bounded by kappa."""
    if not kappa >= 1:
        raise ValueError("a relative density bounded by kappa < 1 cannot integrate to 1")
    return kappa**2 - 1


# --------------------------------------------------------------------------
# numerics


def _exp(x: float) -> float:
    # saturate instead of raising, so divergence shows up as an infinite band
    return math.exp(x) if x < 709.0 else math.inf


def _band(func, a, b):
    with np.errstate(over="ignore", invalid="ignore"):
        res = integrate.quad(func, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=1000, full_output=1)
    val, err = res[0], res[1]
    if not math.isfinite(val):
        return math.inf
    if err > 1e3 * max(QUAD_TOL, QUAD_TOL * abs(val)):
        raise IntegrationDidNotConverge(f"band [{a:g}, {b:g}]: value {val:g}, error {err:g}")
    return val


def _nested_truncation(func, center: float, half_width: float, lower: float | None = None) -> float:
    """Integral of func over R (or [lower, inf)) by doubling truncations.

    Returns inf when the last GROWTH_RUNS refinements each grow the integral by
    more than GROWTH_THRESHOLD.
    """
    lo_of = (lambda w: lower) if lower is not None else (lambda w: center - w)
    w = half_width
    total = _band(func, lo_of(w), center + w)
    growth: list[float] = []
    for _ in range(MAX_REFINEMENTS):
        w2 = 2 * w
        inc = _band(func, center + w, center + w2)
        if lower is None:
            inc += _band(func, center - w2, center - w)
        if not math.isfinite(inc):
            return math.inf
        g = inc / total if total > 0 else math.inf
        total += inc
        w = w2
        if g <= 1e-13:
            return total
        growth.append(g)
        if len(growth) >= GROWTH_RUNS and all(x > GROWTH_THRESHOLD for x in growth[-GROWTH_RUNS:]):
            return math.inf
    raise IntegrationDidNotConverge("truncation refinements neither converged nor diverged")


def _second_moment_1d(num, den) -> float:
    """int num^2 / den over supp(num) in 1D."""

    def f(x):
        pt = np.array([[x]])
        ln = num._logpdf(pt)[0]
        if ln == -np.inf:
            return 0.0
        return _exp(2 * ln - den._logpdf(pt)[0])

    lo, hi = num.integration_interval()
    if num.support.bounded:
        pts = sorted({t for t in num.breakpoints() + den.breakpoints() if lo < t < hi})
        res = integrate.quad(f, lo, hi, points=pts or None, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=1000)
        return res[0]
    return _nested_truncation(f, 0.5 * (lo + hi), 0.5 * (hi - lo))


def _radial_scale(m) -> float:
    if isinstance(m, UniformBall):
        return m.radius
    return math.sqrt(m.variance)


def _second_moment_radial(num, den) -> float:
    n = num.dim
    area = sphere_area(n)

    def f(r):
        ln = float(num.radial_log_density(r))
        if ln == -np.inf:
            return 0.0
        return area * r ** (n - 1) * _exp(2 * ln - float(den.radial_log_density(r)))

    if isinstance(num, UniformBall):
        return integrate.quad(f, 0.0, num.radius, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=1000)[0]
    half = 0.5 * 12.0 * max(_radial_scale(num), _radial_scale(den))
    return _nested_truncation(f, half, half, lower=0.0)


def _radial_ok(*ms) -> bool:
    return all(isinstance(m, (GaussianIso, UniformBall)) and m.is_radial for m in ms)


def chi2_numeric(spec, direction: int, *, n_samples: int = MC_SAMPLES, seed: int = 0) -> Estimate:
    """chi_direction by quadrature (1D or radially symmetric pairs) or Monte Carlo.

    Monte Carlo samples the numerator measure nu and averages d nu / d mu, which
    avoids squaring large density ratios.
    """
    mu0, mu1 = _components(spec)
    if direction not in (0, 1):
        raise ValueError("direction must be 0 or 1")
    den, num = (mu0, mu1) if direction == 0 else (mu1, mu0)
    if not den.support.contains(num.support):
        raise NotAbsolutelyContinuous(f"chi{direction} needs mu{1 - direction} << mu{direction}")
    if num.dim == 1:
        m2 = _second_moment_1d(num, den)
        return Estimate(max(m2 - 1.0, 0.0), QUAD_TOL * max(1.0, m2), QUADRATURE)
    if _radial_ok(num, den):
        m2 = _second_moment_radial(num, den)
        return Estimate(max(m2 - 1.0, 0.0), QUAD_TOL * max(1.0, m2), QUADRATURE)
    rng = np.random.default_rng(seed)
    x = num.sample(rng, n_samples)
    ratio = np.exp(num._logpdf(x) - den._logpdf(x))
    stderr = float(ratio.std(ddof=1) / math.sqrt(n_samples))
    return Estimate(max(float(ratio.mean()) - 1.0, 0.0), stderr, MONTE_CARLO, n_samples)


def chi2_pair_numeric(spec, *, n_samples: int = MC_SAMPLES, seed: int = 0) -> Chi2Pair:
    """Both directions numerically; a direction without absolute continuity is +inf."""
    values, errs, methods = [], [], set()
    for direction in (0, 1):
        try:
            est = chi2_numeric(spec, direction, n_samples=n_samples, seed=seed + direction)
        except NotAbsolutelyContinuous:
            values.append(math.inf)
            continue
        values.append(est.value)
        methods.add(est.method)
        if est.method == MONTE_CARLO:
            errs.append(est.error)
    method = MONTE_CARLO if MONTE_CARLO in methods else QUADRATURE
    return Chi2Pair(values[0], values[1], method, max(errs) if errs else None)


def chi2_pair(spec, *, n_samples: int = MC_SAMPLES, seed: int = 0) -> Chi2Pair:
    """Closed form when catalogued, numeric otherwise."""
    try:
        return chi2_closed_form(spec)
    except Unsupported:
        return chi2_pair_numeric(spec, n_samples=n_samples, seed=seed)


class EntropyChi2(NamedTuple):
    ent: float
    log1p_chi: float
    chi: float


def relative_entropy(spec, *, n_samples: int = MC_SAMPLES, seed: int = 0) -> Estimate:
    """Ent_{mu0}[d mu1/d mu0] = int log(d mu1/d mu0) d mu1 (needs mu1 << mu0)."""
    mu0, mu1 = _components(spec)
    if not mu0.support.contains(mu1.support):
        raise NotAbsolutelyContinuous("relative entropy needs mu1 << mu0")
    if mu1.dim == 1:
        return integrate_1d(mu1, lambda x: mu1.log_density(x) - mu0.log_density(x), tol=QUAD_TOL)
    if _radial_ok(mu0, mu1):
        n = mu1.dim
        area = sphere_area(n)

        def f(r):
            l1 = float(mu1.radial_log_density(r))
            if l1 == -np.inf:
                return 0.0
            return area * r ** (n - 1) * math.exp(l1) * (l1 - float(mu0.radial_log_density(r)))

        hi = mu1.radius if isinstance(mu1, UniformBall) else 12.0 * max(_radial_scale(mu0), _radial_scale(mu1))
        val, err = integrate.quad(f, 0.0, hi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=1000)
        return Estimate(val, err, QUADRATURE)
    rng = np.random.default_rng(seed)
    x = mu1.sample(rng, n_samples)
    vals = mu1._logpdf(x) - mu0._logpdf(x)
    return Estimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n_samples)), MONTE_CARLO, n_samples)


def entropy_chi2_comparison(spec, *, n_samples: int = MC_SAMPLES, seed: int = 0) -> EntropyChi2:
    """(Ent, log(1 + chi0), chi0), which satisfy Ent <= log(1 + chi0) <= chi0."""
    chi = chi2_pair(spec, n_samples=n_samples, seed=seed).chi0
    if not math.isfinite(chi):
        raise InfiniteChi("chi0 is infinite")
    ent = relative_entropy(spec, n_samples=n_samples, seed=seed).value
    return EntropyChi2(ent, math.log1p(chi), chi)
