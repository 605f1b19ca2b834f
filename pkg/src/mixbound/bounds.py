"""Upper bounds on inverse Poincare (1/rho) and log-Sobolev (1/alpha) constants of mixtures.

Every bound is returned as an inverse constant, so larger means worse.  All
functions are pure and accept plain floats; chi values may be ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from scipy.stats import norm

from . import _json
from .errors import InfiniteChi


class Case(str, Enum):
    CASE0_DOMINATES = "case0_dominates"
    CASE1_DOMINATES = "case1_dominates"
    INTERPOLATED = "interpolated"
    NESTED_COROLLARY = "nested_corollary"
    SYMMETRIC_SIMPLIFIED = "symmetric_simplified"
    SANDWICH = "sandwich"


@dataclass(frozen=True)
class ComponentConstants:
    """Poincare (rho0, rho1) or log-Sobolev (alpha0, alpha1) constants of the two components."""

    c0: float
    c1: float

    def __post_init__(self):
        if not (self.c0 > 0 and self.c1 > 0):
            raise ValueError("component constants must be strictly positive")

    def swapped(self) -> "ComponentConstants":
        return ComponentConstants(self.c1, self.c0)


@dataclass(frozen=True)
class ReducedConstants:
    alpha0_tilde: float
    alpha1_tilde: float
    chi0_tilde: float
    chi1_tilde: float


@dataclass(frozen=True)
class BoundResult:
    inverse_constant: float
    case: Case
    s_star: float | None = None
    inputs: dict = field(default_factory=dict)
    candidates: dict = field(default_factory=dict)
    reduced: ReducedConstants | None = None

    @property
    def constant(self) -> float:
        return 1.0 / self.inverse_constant

    def to_dict(self) -> dict:
        d = {
            "inverse_constant": _json.num(self.inverse_constant),
            "constant": _json.num(self.constant),
            "case": self.case.value,
            "s_star": self.s_star,
            "inputs": {k: _json.num(v) for k, v in self.inputs.items()},
        }
        if self.candidates:
            d["candidates"] = {k: _json.num(v) for k, v in self.candidates.items()}
        if self.reduced is not None:
            d["reduced"] = {k: _json.num(v) for k, v in self.reduced.__dict__.items()}
        return d


def _constants(c) -> tuple[float, float]:
    if isinstance(c, ComponentConstants):
        return c.c0, c.c1
    c = ComponentConstants(*c)
    return c.c0, c.c1


def _chis(chi) -> tuple[float, float]:
    if hasattr(chi, "chi0"):
        return float(chi.chi0), float(chi.chi1)
    x0, x1 = chi
    x0, x1 = float(x0), float(x1)
    if math.isnan(x0) or math.isnan(x1) or x0 < 0 or x1 < 0:
        raise ValueError("chi values must be nonnegative")
    return x0, x1


def _open_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    return p


# --------------------------------------------------------------------------
# logarithmic mean


def log_mean(p: float, q: float) -> float:
    """Logarithmic mean (p - q) / (log p - log q), equal to p on the diagonal.

    Written as ((p+q)/2) * u / atanh(u) with u = (p-q)/(p+q), which has no
    cancellation; a Taylor series covers |u| < 1e-4.
    """
    if not (p > 0 and q > 0):
        raise ValueError("logarithmic mean needs positive arguments")
    u = (p - q) / (p + q)
    if abs(u) < 1e-4:
        u2 = u * u
        ratio = 1.0 - u2 / 3.0 - 4.0 * u2 * u2 / 45.0
    else:
        ratio = u / math.atanh(u)
    return 0.5 * (p + q) * ratio


def inv_log_mean(p: float) -> float:
    """lambda_p = 1 / Lambda(p, 1 - p); diverges like |log p| at the endpoints."""
    p = _open_p(p)
    return 1.0 / log_mean(p, 1.0 - p)


# --------------------------------------------------------------------------
# two-point (Bernoulli) inequality


def _xlog_ratio(w: float, g: float, m: float) -> float:
    r = g / m
    # w log r -> 0 as g -> 0; r also underflows to 0 for subnormal g
    return w * math.log(r) if w > 0 and r > 0 else 0.0


def bernoulli_entropy(p: float, g0: float, g1: float) -> float:
    """Entropy of g under p*delta_0 + (1-p)*delta_1, with 0 log 0 = 0."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    if g0 < 0 or g1 < 0:
        raise ValueError("g must be nonnegative")
    q = 1.0 - p
    m = p * g0 + q * g1
    if m == 0.0 or g0 == g1:
        return 0.0
    # relative form: no cancellation between the x log x terms, exactly 0 when g0 == g1
    return max(_xlog_ratio(p * g0, g0, m) + _xlog_ratio(q * g1, g1, m), 0.0)


def bernoulli_lsi_check(p: float, g0: float, g1: float) -> tuple[float, float]:
    """(Ent[g], p q / Lambda(p, q) * (sqrt g0 - sqrt g1)^2); the first never exceeds the second."""
    p = _open_p(p)
    q = 1.0 - p
    lhs = bernoulli_entropy(p, g0, g1)
    rhs = p * q / log_mean(p, q) * (math.sqrt(g0) - math.sqrt(g1)) ** 2
    return lhs, rhs


# --------------------------------------------------------------------------
# Poincare


def _three_case(r0, r1, x0, x1, p, inputs) -> BoundResult:
    q = 1.0 - p
    candidates = {}
    if r1 / r0 >= 1.0 + p * x1:
        candidates[Case.CASE0_DOMINATES.value] = 1.0 / r0
    if r0 / r1 >= 1.0 + q * x0:
        candidates[Case.CASE1_DOMINATES.value] = 1.0 / r1
    if candidates:
        name = min(candidates, key=candidates.get)
        return BoundResult(candidates[name], Case(name), None, inputs, candidates)
    den = r0 * p * x1 + r1 * q * x0
    s = ((1.0 + p * x1) * r0 - r1) / den
    value = (p * x1 + p * q * x0 * x1 + q * x0) / den
    return BoundResult(value, Case.INTERPOLATED, s, inputs, {Case.INTERPOLATED.value: value})


def pi_mixture_bound(c, chi, p: float) -> BoundResult:
    """Three-case bound on 1/rho_p for mutually absolutely continuous components."""
    r0, r1 = _constants(c)
    x0, x1 = _chis(chi)
    p = _open_p(p)
    if not (math.isfinite(x0) and math.isfinite(x1)):
        raise InfiniteChi("chi is infinite; use pi_nested_bound")
    return _three_case(r0, r1, x0, x1, p, {"p": p, "chi0": x0, "chi1": x1, "c0": r0, "c1": r1})


def third_case_value(c, chi, p: float) -> float:
    """The interpolated expression evaluated regardless of which guard holds."""
    r0, r1 = _constants(c)
    x0, x1 = _chis(chi)
    q = 1.0 - p
    return (p * x1 + p * q * x0 * x1 + q * x0) / (r0 * p * x1 + r1 * q * x0)


def interpolation_terms(c, chi, p: float, s: float) -> tuple[float, float]:
    """The two competing terms (1 + s q chi0)/rho0 and (1 + (1-s) p chi1)/rho1."""
    r0, r1 = _constants(c)
    x0, x1 = _chis(chi)
    q = 1.0 - p
    return (1.0 + s * q * x0) / r0, (1.0 + (1.0 - s) * p * x1) / r1


def _nested_direction(x0: float, x1: float, direction: int | None) -> list[int]:
    if direction is not None:
        if direction not in (0, 1):
            raise ValueError("direction must be 0 (use chi0, mu1 << mu0) or 1 (use chi1, mu0 << mu1)")
        return [direction]
    dirs = [d for d, x in ((0, x0), (1, x1)) if math.isfinite(x)]
    if not dirs:
        raise InfiniteChi("both chi values are infinite; the supports are not nested")
    return dirs


def pi_nested_bound(c, chi, p: float, direction: int | None = None) -> BoundResult:
    """Nested-support bound; direction 1 uses chi1 (mu0 << mu1), direction 0 uses chi0 (mu1 << mu0).

    Without an explicit direction every finite chi is used and the smaller bound kept.
    """
    r0, r1 = _constants(c)
    x0, x1 = _chis(chi)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    q = 1.0 - p
    candidates = {}
    for d in _nested_direction(x0, x1, direction):
        if d == 1:
            candidates["mu0<<mu1"] = max(1.0 / r0, (1.0 + p * x1) / r1)
        else:
            candidates["mu1<<mu0"] = max(1.0 / r1, (1.0 + q * x0) / r0)
    value = min(candidates.values())
    return BoundResult(value, Case.NESTED_COROLLARY, None,
                       {"p": p, "chi0": x0, "chi1": x1, "c0": r0, "c1": r1}, candidates)


def pi_bound(c, chi, p: float) -> BoundResult:
    """Three-case bound when both chi are finite, otherwise the nested corollary."""
    x0, x1 = _chis(chi)
    if math.isfinite(x0) and math.isfinite(x1):
        return pi_mixture_bound(c, (x0, x1), p)
    return pi_nested_bound(c, (x0, x1), p)


def pi_sandwich(c, chi, p: float) -> tuple[float, float]:
    r0, r1 = _constants(c)
    x0, x1 = _chis(chi)
    q = 1.0 - p
    return max(1.0 / r0, 1.0 / r1), max((1.0 + q * x0) / r0, (1.0 + p * x1) / r1)


def _symmetric(simplified: float, theorem: BoundResult, inputs: dict) -> BoundResult:
    # the simplified form is the last-case expression; where a guard holds it can undercut the
    # certified value, so never report less than the theorem
    candidates = {Case.SYMMETRIC_SIMPLIFIED.value: simplified, theorem.case.value: theorem.inverse_constant}
    if simplified >= theorem.inverse_constant:
        return BoundResult(simplified, Case.SYMMETRIC_SIMPLIFIED, None, inputs, candidates)
    return BoundResult(theorem.inverse_constant, theorem.case, theorem.s_star, inputs, candidates, theorem.reduced)


def pi_symmetric_bound(c, chi: float, p: float) -> BoundResult:
    """(1 + p q chi) / (p rho0 + q rho1) for chi0 = chi1 = chi.

    Equals the theorem whenever its last case applies (always when rho0 = rho1);
    otherwise the theorem's guarded value is returned.
    """
    r0, r1 = _constants(c)
    p = _open_p(p)
    q = 1.0 - p
    value = (1.0 + p * q * chi) / (p * r0 + q * r1)
    return _symmetric(value, pi_mixture_bound((r0, r1), (chi, chi), p),
                      {"p": p, "chi0": chi, "chi1": chi, "c0": r0, "c1": r1})


# --------------------------------------------------------------------------
# log-Sobolev


def reduced_constants(c, chi, p: float) -> ReducedConstants:
    a0, a1 = _constants(c)
    x0, x1 = _chis(chi)
    p = _open_p(p)
    q = 1.0 - p
    lam = inv_log_mean(p)
    return ReducedConstants(a0 / (1 + q * lam), a1 / (1 + p * lam), x0 * lam / (1 + q * lam), x1 * lam / (1 + p * lam))


def lsi_mixture_bound(c, chi, p: float) -> BoundResult:
    """Three-case bound on 1/alpha_p: the Poincare optimizer run on the reduced constants."""
    a0, a1 = _constants(c)
    x0, x1 = _chis(chi)
    p = _open_p(p)
    if not (math.isfinite(x0) and math.isfinite(x1)):
        raise InfiniteChi("chi is infinite; use lsi_nested_bound")
    red = reduced_constants((a0, a1), (x0, x1), p)
    res = _three_case(red.alpha0_tilde, red.alpha1_tilde, red.chi0_tilde, red.chi1_tilde, p, {})
    return BoundResult(res.inverse_constant, res.case, res.s_star,
                       {"p": p, "chi0": x0, "chi1": x1, "c0": a0, "c1": a1, "lambda_p": inv_log_mean(p)},
                       res.candidates, red)


def lsi_third_case_value(c, chi, p: float) -> float:
    a0, a1 = _constants(c)
    x0, x1 = _chis(chi)
    q = 1.0 - p
    lam = inv_log_mean(p)
    num = p * (1 + q * lam) * x1 + p * q * lam * x0 * x1 + q * (1 + p * lam) * x0
    return num / (a0 * p * x1 + a1 * q * x0)


def lsi_nested_bound(c, chi, p: float, direction: int | None = None) -> BoundResult:
    """Nested-support LSI bound; same direction convention as pi_nested_bound."""
    a0, a1 = _constants(c)
    x0, x1 = _chis(chi)
    p = _open_p(p)
    q = 1.0 - p
    lam = inv_log_mean(p)
    candidates = {}
    for d in _nested_direction(x0, x1, direction):
        if d == 1:
            candidates["mu0<<mu1"] = max((1 + q * lam) / a0, (1 + p * lam * (1 + x1)) / a1)
        else:
            candidates["mu1<<mu0"] = max((1 + p * lam) / a1, (1 + q * lam * (1 + x0)) / a0)
    return BoundResult(min(candidates.values()), Case.NESTED_COROLLARY, None,
                       {"p": p, "chi0": x0, "chi1": x1, "c0": a0, "c1": a1, "lambda_p": lam}, candidates)


def lsi_bound(c, chi, p: float) -> BoundResult:
    x0, x1 = _chis(chi)
    if math.isfinite(x0) and math.isfinite(x1):
        return lsi_mixture_bound(c, (x0, x1), p)
    return lsi_nested_bound(c, (x0, x1), p)


def lsi_sandwich(c, chi, p: float) -> tuple[float, float]:
    a0, a1 = _constants(c)
    x0, x1 = _chis(chi)
    p = _open_p(p)
    q = 1.0 - p
    lam = inv_log_mean(p)
    lower = max((1 + q * lam) / a0, (1 + p * lam) / a1)
    upper = max((1 + q * lam * (1 + x0)) / a0, (1 + p * lam * (1 + x1)) / a1)
    return lower, upper


def lsi_symmetric_bound(c, chi: float, p: float) -> BoundResult:
    """(1 + lambda_p + p q lambda_p chi) / (p alpha0 + q alpha1), the simplified form for chi0 = chi1.

    For alpha0 = alpha1 it is looser than the theorem's interpolated value
    (1 + 2 p q lambda_p + p q lambda_p chi) / alpha since 2 p q <= 1/2.  With
    unequal constants it can undercut the theorem, which is then returned.
    """
    a0, a1 = _constants(c)
    p = _open_p(p)
    q = 1.0 - p
    lam = inv_log_mean(p)
    value = (1 + lam + p * q * lam * chi) / (p * a0 + q * a1)
    return _symmetric(value, lsi_mixture_bound((a0, a1), (chi, chi), p),
                      {"p": p, "chi0": chi, "chi1": chi, "c0": a0, "c1": a1, "lambda_p": lam})


# --------------------------------------------------------------------------
# one-dimensional baselines for comparison


def cm_baseline_equal_gaussians(y_norm: float, p: float) -> float:
    """Earlier 1D bound on 1/rho_p for p N(0,1) + q N(y,1)."""
    if y_norm < 0:
        raise ValueError("|y| must be nonnegative")
    q = 1.0 - p
    y = y_norm
    inner = norm.cdf(y) * math.exp(y * y) + y / math.sqrt(2 * math.pi) * math.exp(y * y / 2) + 0.5
    return 1.0 + p * q * y * y * inner


def cm_baseline_variance_gaussians(sigma: float, p: float, C: float) -> float:
    """sigma + C p^{1/(sigma-1)} for p N(0,1) + q N(0,sigma), sigma > 1, p in (0, 1/2); C is free."""
    if not sigma > 1:
        raise ValueError("sigma must exceed 1")
    if not 0 < p < 0.5:
        raise ValueError("p must lie in (0, 1/2)")
    if not C > 0:
        raise ValueError("C must be positive")
    return sigma + C * p ** (1.0 / (sigma - 1.0))
