"""Numerical oracles for the mixture bounds.

The 1D spectral gap is the optimal Poincare constant, computed from a
finite-volume discretization of the weighted Neumann problem
-(mu f')' = lambda mu f.  Log-Sobolev bounds can only be falsified here: a
trial function f gives the upper estimate alpha <= 2 D(f) / Ent[f^2].
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy import optimize
from scipy.linalg import eigh_tridiagonal
from scipy.special import roots_legendre

from . import _json
from .bounds import bernoulli_entropy, inv_log_mean, log_mean, lsi_bound, pi_bound
from .criteria import component_constants
from .divergence import chi2_pair
from .errors import GridTooCoarse, IntegrationDidNotConverge, NoConvexityBound, NotNested
from .measures import (ATOL, GaussianFull, GaussianIso, MeasureModel, MixtureSpec, TestFunction, as_test_function, covariance_functional,
                       dirichlet_energy, entropy_functional, mean_functional, relative_density, variance_functional)

GRID_N = 2000
GAP_TOL = 1e-4
TAIL_MASS = 1e-10
GAUSS_SDS = 8.0
SAFETY = 3.0
MAX_DOUBLINGS = 3


class Relation(str, Enum):
    HOLDS = "BoundHolds"
    VIOLATED = "BoundViolated"
    INCONCLUSIVE = "Inconclusive"


def classify(margin: float, error: float) -> Relation:
    if margin >= error:
        return Relation.HOLDS
    if margin < -error:
        return Relation.VIOLATED
    return Relation.INCONCLUSIVE


@dataclass(frozen=True)
class SpectralGapEstimate:
    lambda1: float
    grid_points: int
    domain: tuple[float, float]
    richardson_error: float
    coarse: float = math.nan
    fine: float = math.nan

    def to_dict(self) -> dict:
        return {"lambda1": self.lambda1, "grid_points": self.grid_points, "domain": list(self.domain),
                "richardson_error": self.richardson_error}


@dataclass(frozen=True)
class VerificationReport:
    bound_value: float
    oracle_value: float
    relation: Relation
    margin: float
    tolerance: float = 0.0
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bound_value": _json.num(self.bound_value),
            "oracle_value": _json.opt_num(self.oracle_value),
            "relation": self.relation.value,
            "margin": _json.opt_num(self.margin),
            "tolerance": _json.opt_num(self.tolerance),
            "metadata": _jsonable(self.metadata),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(_json.from_num(d["bound_value"]), _json.from_opt_num(d["oracle_value"]), Relation(d["relation"]),
                   _json.from_opt_num(d["margin"]), _json.from_opt_num(d.get("tolerance", 0.0)), d.get("metadata", {}))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, (float, np.floating)):
        return _json.opt_num(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


# --------------------------------------------------------------------------
# spectral gap


def _require_1d(m):
    if m.dim != 1:
        raise ValueError("the spectral oracle is one-dimensional")


def _mean_sd(c) -> tuple[float, float]:
    if isinstance(c, GaussianIso):
        return float(c.mean[0]), c.sd
    return float(c.mean[0]), math.sqrt(float(c.covariance[0, 0]))


def oracle_interval(m) -> tuple[float, float]:
    """Truncation interval: the support if bounded, else mean +- 8 sd widened until the tail mass is < 1e-10."""
    parts = [m.mu0, m.mu1] if isinstance(m, MixtureSpec) else [m]
    lo, hi = math.inf, -math.inf
    for c in parts:
        s = c.support
        if s.bounded:
            a, b = s.lo, s.hi
        elif isinstance(c, (GaussianIso, GaussianFull)):
            mean, sd = _mean_sd(c)
            a, b = mean - GAUSS_SDS * sd, mean + GAUSS_SDS * sd
            while float(c.cdf(a)) + float(c.sf(b)) > TAIL_MASS:
                a, b = a - sd, b + sd
        else:
            a, b = c.integration_interval()
        lo, hi = min(lo, a), max(hi, b)
    return lo, hi


def _cell_edges(domain, jumps, n: int) -> np.ndarray:
    """Piecewise-uniform edges with every density jump on an edge."""
    a, b = domain
    knots = [a] + sorted(t for t in set(jumps) if a < t < b) + [b]
    lengths = np.diff(knots)
    counts = np.maximum(4, np.round(n * lengths / (b - a)).astype(int))
    return np.concatenate([np.linspace(knots[i], knots[i + 1], counts[i] + 1)[:-1] for i in range(len(lengths))] + [[b]])


def _tridiagonal(m, edges: np.ndarray, jumps) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of M^{-1/2} K M^{-1/2}."""
    def dens(x):
        return np.exp(m._logpdf(np.asarray(x, dtype=float).reshape(-1, 1)))

    h = np.diff(edges)
    c = 0.5 * (edges[:-1] + edges[1:])
    mass = dens(c) * h
    inner = edges[1:-1]
    dist = c[1:] - c[:-1]
    w = dens(inner) / dist
    jump_set = set(jumps)
    for k, x in enumerate(inner):
        if x in jump_set:
            left, right = dens(np.nextafter(x, -math.inf))[0], dens(np.nextafter(x, math.inf))[0]
            w[k] = 1.0 / ((x - c[k]) / left + (c[k + 1] - x) / right)
    diag = np.zeros_like(mass)
    diag[:-1] += w
    diag[1:] += w
    return diag / mass, -w / np.sqrt(mass[:-1] * mass[1:])


def _gap(m, edges, jumps) -> float:
    d, e = _tridiagonal(m, edges, jumps)
    return float(eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(1, 1))[0])


def sturm_count(d: Sequence[float], e: Sequence[float], x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal (d, e) strictly below x."""
    count = 0
    q = 1.0
    for i in range(len(d)):
        off = e[i - 1] ** 2 / q if i else 0.0
        q = d[i] - x - off
        if q == 0.0:
            q = -1e-300
        if q < 0:
            count += 1
    return count


def sturm_eigenvalue(d, e, k: int, tol: float = 1e-12) -> float:
    """k-th smallest eigenvalue (0-based) by Sturm-sequence bisection."""
    d, e = list(map(float, d)), list(map(float, e))
    radius = max(abs(d[i]) + (abs(e[i - 1]) if i else 0.0) + (abs(e[i]) if i < len(e) else 0.0) for i in range(len(d)))
    lo, hi = -radius, radius
    while hi - lo > tol * max(1.0, abs(lo) + abs(hi)):
        mid = 0.5 * (lo + hi)
        if sturm_count(d, e, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def discretized_operator(m, grid_n: int = GRID_N, domain=None) -> tuple[np.ndarray, np.ndarray]:
    _require_1d(m)
    domain = oracle_interval(m) if domain is None else tuple(domain)
    jumps = list(m.breakpoints())
    return _tridiagonal(m, _cell_edges(domain, jumps, grid_n), jumps)


def spectral_gap_1d(m, grid_n: int = GRID_N, domain=None, tol: float = GAP_TOL) -> SpectralGapEstimate:
    """Second-smallest Neumann eigenvalue, Richardson-extrapolated from grids N and 2N.

    Raises GridTooCoarse when |lambda(2N) - lambda(N)| / 3 exceeds tol.
    """
    _require_1d(m)
    domain = oracle_interval(m) if domain is None else tuple(map(float, domain))
    jumps = list(m.breakpoints())
    coarse_edges = _cell_edges(domain, jumps, grid_n)
    fine_edges = np.sort(np.concatenate([coarse_edges, 0.5 * (coarse_edges[:-1] + coarse_edges[1:])]))
    lc, lf = _gap(m, coarse_edges, jumps), _gap(m, fine_edges, jumps)
    err = abs(lf - lc) / 3.0
    lam = lf + (lf - lc) / 3.0
    if err > tol:
        raise GridTooCoarse(f"Richardson error {err:.3g} exceeds tolerance {tol:.3g} at N={grid_n}")
    if not lam > 0:
        raise GridTooCoarse("non-positive spectral gap; the domain or grid is inadequate")
    return SpectralGapEstimate(lam, len(fine_edges) - 1, domain, err, lc, lf)


def refined_spectral_gap(m, grid_n: int = GRID_N, tol: float = GAP_TOL, doublings: int = MAX_DOUBLINGS) -> SpectralGapEstimate:
    for k in range(doublings + 1):
        try:
            return spectral_gap_1d(m, grid_n * 2**k, tol=tol)
        except GridTooCoarse:
            if k == doublings:
                raise


# --------------------------------------------------------------------------
# bound checks


def component_pi_constants(spec: MixtureSpec, source: str = "criteria", grid_n: int = GRID_N) -> tuple[float, float]:
    out = []
    for c in (spec.mu0, spec.mu1):
        if source == "criteria":
            try:
                out.append(component_constants(c)[0])
                continue
            except NoConvexityBound:
                pass
        elif source != "spectral":
            raise ValueError(f"unknown constants source {source!r}")
        out.append(refined_spectral_gap(c, grid_n).lambda1)
    return out[0], out[1]


def check_pi_bound(spec: MixtureSpec, constants_source: str = "criteria", *, constants=None, chi=None,
                   grid_n: int = GRID_N, tol: float = GAP_TOL, quad_tol: float = ATOL) -> VerificationReport:
    """Spectral gap of the 1D mixture against 1/bound, with component constants from criteria or the eigensolver."""
    _require_1d(spec)
    rhos = tuple(constants) if constants is not None else component_pi_constants(spec, constants_source, grid_n)
    chis = chi if chi is not None else chi2_pair(spec)
    x0, x1 = float(chis.chi0) if hasattr(chis, "chi0") else float(chis[0]), float(chis.chi1) if hasattr(chis, "chi1") else float(chis[1])
    if math.isinf(x0) and math.isinf(x1):
        raise NotNested("both chi constants are infinite")
    bound = pi_bound(rhos, (x0, x1), spec.p)
    meta = {"p": spec.p, "rho": list(rhos), "chi": [x0, x1], "case": bound.case.value}
    try:
        gap = refined_spectral_gap(spec, grid_n, tol)
    except GridTooCoarse as exc:
        meta["error"] = str(exc)
        return VerificationReport(bound.inverse_constant, math.nan, Relation.INCONCLUSIVE, math.nan, math.nan, meta)
    err = SAFETY * (gap.richardson_error + quad_tol)
    margin = gap.lambda1 - 1.0 / bound.inverse_constant
    meta["spectral"] = gap.to_dict()
    return VerificationReport(bound.inverse_constant, gap.lambda1, classify(margin, err), margin, err, meta)


def _identity_report(residuals: Sequence[float], tol: float, meta: dict) -> VerificationReport:
    worst = float(max(residuals)) if len(residuals) else 0.0
    margin = tol - worst
    rel = Relation.HOLDS if worst <= tol else Relation.VIOLATED
    return VerificationReport(tol, worst, rel, margin, tol, meta)


def check_mean_diff_covariance(spec: MixtureSpec, f, theta_grid=(0.0, 0.25, 0.5, 0.75, 1.0), *,
                               tol: float | None = None, n_samples: int = 200_000, seed: int = 0) -> VerificationReport:
    """Mean_0 f - Mean_1 f against -theta cov_0(f, dmu1/dmu0) + (1-theta) cov_1(f, dmu0/dmu1)."""
    f = as_test_function(f)
    m0, m1 = spec.mu0, spec.mu1
    kw = dict(n_samples=n_samples, seed=seed)
    a0, a1 = mean_functional(m0, f, **kw), mean_functional(m1, f, **kw)
    need0 = any(t > 0 for t in theta_grid)
    need1 = any(t < 1 for t in theta_grid)
    if spec.dim == 1:
        # f dmu1/dmu0 integrated against mu0 lives where mu1 does, so use the union of both ranges
        (a0_, b0_), (a1_, b1_) = m0.integration_interval(), m1.integration_interval()
        kw = dict(kw, interval=(min(a0_, a1_), max(b0_, b1_)))
    c0 = covariance_functional(m0, f, lambda x: relative_density(m1, m0, x), **kw) if need0 else None
    c1 = covariance_functional(m1, f, lambda x: relative_density(m0, m1, x), **kw) if need1 else None
    lhs = a0.value - a1.value
    err = a0.error + a1.error + (c0.error if c0 else 0.0) + (c1.error if c1 else 0.0)
    if tol is None:
        tol = SAFETY * err + 1e-8 * (1 + abs(lhs))
    residuals = []
    for t in theta_grid:
        rhs = (-t * c0.value if t > 0 else 0.0) + ((1 - t) * c1.value if t < 1 else 0.0)
        residuals.append(abs(lhs - rhs))
    return _identity_report(residuals, tol, {"identity": "mean_difference_covariance", "theta": list(theta_grid),
                                             "mean_difference": lhs})


def check_variance_decomposition(spec: MixtureSpec, f, *, tol: float | None = None,
                                 n_samples: int = 200_000, seed: int = 0) -> VerificationReport:
    """Var_p f = p Var_0 f + q Var_1 f + p q (Mean_0 f - Mean_1 f)^2."""
    f = as_test_function(f)
    kw = dict(n_samples=n_samples, seed=seed)
    vp = variance_functional(spec, f, **kw)
    v0, v1 = variance_functional(spec.mu0, f, **kw), variance_functional(spec.mu1, f, **kw)
    a0, a1 = mean_functional(spec.mu0, f, **kw), mean_functional(spec.mu1, f, **kw)
    p, q = spec.p, spec.q
    rhs = p * v0.value + q * v1.value + p * q * (a0.value - a1.value) ** 2
    err = vp.error + v0.error + v1.error + 2 * abs(a0.value - a1.value) * (a0.error + a1.error)
    if tol is None:
        tol = SAFETY * err + 1e-8 * (1 + abs(rhs))
    return _identity_report([abs(vp.value - rhs)], tol, {"identity": "variance_decomposition", "lhs": vp.value, "rhs": rhs})


def check_entropy_decomposition(spec: MixtureSpec, f, *, tol: float | None = None,
                                n_samples: int = 200_000, seed: int = 0) -> VerificationReport:
    """Ent_p[f^2] = p Ent_0[f^2] + q Ent_1[f^2] + Ent_{delta_p}[(Mean_0 f^2, Mean_1 f^2)]."""
    f = as_test_function(f)
    f2 = TestFunction(lambda x: f(x) ** 2, positive=True)
    kw = dict(n_samples=n_samples, seed=seed)
    ep = entropy_functional(spec, f2, **kw)
    e0, e1 = entropy_functional(spec.mu0, f2, **kw), entropy_functional(spec.mu1, f2, **kw)
    g0, g1 = mean_functional(spec.mu0, f2, **kw), mean_functional(spec.mu1, f2, **kw)
    p, q = spec.p, spec.q
    rhs = p * e0.value + q * e1.value + bernoulli_entropy(p, g0.value, g1.value)
    err = ep.error + e0.error + e1.error + (1 + abs(math.log(max(g0.value, g1.value, 1e-300)))) * (g0.error + g1.error)
    if tol is None:
        tol = SAFETY * err + 1e-8 * (1 + abs(rhs))
    return _identity_report([abs(ep.value - rhs)], tol, {"identity": "entropy_decomposition", "lhs": ep.value, "rhs": rhs})


def check_coarse_entropy(spec: MixtureSpec, f, *, tol: float | None = None,
                         n_samples: int = 200_000, seed: int = 0) -> VerificationReport:
    """Ent_{delta_p}[avg f^2] <= p q / Lambda(p, q) (Var_0 f + Var_1 f + mean difference^2).

    The intermediate step (sqrt Mean_0 f^2 - sqrt Mean_1 f^2)^2 <= Var_0 f + Var_1 f + (mean diff)^2
    is checked separately and reported in the metadata.
    """
    f = as_test_function(f)
    kw = dict(n_samples=n_samples, seed=seed)
    sq = lambda x: f(x) ** 2  # noqa: E731
    s0, s1 = mean_functional(spec.mu0, sq, **kw), mean_functional(spec.mu1, sq, **kw)
    a0, a1 = mean_functional(spec.mu0, f, **kw), mean_functional(spec.mu1, f, **kw)
    v0, v1 = variance_functional(spec.mu0, f, **kw), variance_functional(spec.mu1, f, **kw)
    p, q = spec.p, spec.q
    spread = v0.value + v1.value + (a0.value - a1.value) ** 2
    lhs = bernoulli_entropy(p, s0.value, s1.value)
    rhs = p * q / log_mean(p, q) * spread
    jensen_lhs = (math.sqrt(s0.value) - math.sqrt(s1.value)) ** 2
    err = s0.error + s1.error + v0.error + v1.error + 2 * abs(a0.value - a1.value) * (a0.error + a1.error)
    if tol is None:
        tol = SAFETY * err + 1e-10
    jensen_margin = spread - jensen_lhs
    margin = min(rhs - lhs, jensen_margin)
    meta = {"inequality": "coarse_entropy", "entropy": lhs, "bound": rhs, "jensen_lhs": jensen_lhs,
            "jensen_rhs": spread, "jensen_holds": jensen_margin >= -tol}
    rel = Relation.VIOLATED if margin < -tol else Relation.HOLDS
    return VerificationReport(rhs, lhs, rel, margin, tol, meta)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _modes(spec: MixtureSpec) -> tuple[float, float, float]:
    def centre(c):
        return float(np.ravel(getattr(c, "mean", [0.0]))[0])

    def spread(c):
        if hasattr(c, "variance"):
            return math.sqrt(float(c.variance))
        if hasattr(c, "radius"):
            return float(c.radius)
        lo, hi = c.integration_interval()
        return 0.25 * (hi - lo)

    return centre(spec.mu0), centre(spec.mu1), max(spread(spec.mu0), spread(spec.mu1))


def default_trial_family(spec: MixtureSpec) -> list[TestFunction]:
    """Twelve positive trial functions aimed at the slow directions of a two-bump measure.

    Bumps at the component modes, sigmoids across the gap between them, tilts,
    and smoothed indicators of the far tails.
    """
    m0, m1, s = _modes(spec)
    mid = 0.5 * (m0 + m1)
    fam = []
    for centre, label in ((m0, "mu0"), (m1, "mu1")):
        for amp in (1.0, 10.0):
            fam.append(TestFunction(lambda x, c=centre, a=amp: 1.0 + a * np.exp(-((x - c) / s) ** 2 / 2),
                                    positive=True, name=f"bump_{label}_{amp:g}"))
    for w in (0.25 * s, s):
        for sign in (1.0, -1.0):
            fam.append(TestFunction(lambda x, w=w, sg=sign: 0.05 + _sigmoid(sg * (x - mid) / w),
                                    positive=True, name=f"sigmoid_{sign:+g}_{w:.3g}"))
    for t in (0.5, -0.5):
        fam.append(TestFunction(lambda x, t=t: np.exp(t * (x - mid) / s), positive=True, name=f"tilt_{t:+g}"))
    edge = max(abs(m0), abs(m1)) + s
    for sign in (1.0, -1.0):
        fam.append(TestFunction(lambda x, sg=sign: 1e-3 + _sigmoid(8.0 * (sg * x - edge) / s),
                                positive=True, name=f"tail_{sign:+g}"))
    return fam


def component_lsi_constants(spec: MixtureSpec) -> tuple[float, float]:
    return component_constants(spec.mu0)[1], component_constants(spec.mu1)[1]


def check_lsi_bound_trialfunctions(spec: MixtureSpec, trial_family=None, *, constants=None, chi=None,
                                   bound_value: float | None = None, quad_tol: float = ATOL) -> VerificationReport:
    """Falsification test for an upper bound B on 1/alpha.

    Each trial gives alpha <= 2 D(f) / Ent[f^2]; the smallest such value is the
    oracle.  A violation means some trial has Ent[f^2] > 2 B D(f).
    """
    _require_1d(spec)
    if bound_value is None:
        alphas = tuple(constants) if constants is not None else component_lsi_constants(spec)
        chis = chi if chi is not None else chi2_pair(spec)
        x = (chis.chi0, chis.chi1) if hasattr(chis, "chi0") else tuple(chis)
        res = lsi_bound(alphas, x, spec.p)
        bound_value, case = res.inverse_constant, res.case.value
    else:
        case = "user"
    family = trial_family if trial_family is not None else default_trial_family(spec)
    best, best_name, best_err, ratios = math.inf, None, 0.0, {}
    for f in family:
        f2 = TestFunction(lambda x, f=f: f(x) ** 2, positive=True)
        ent = entropy_functional(spec, f2, tol=quad_tol)
        dir_ = dirichlet_energy(spec, f, tol=quad_tol)
        if ent.value <= 0:
            continue
        ratio = 2.0 * dir_.value / ent.value
        rel_err = (dir_.error + quad_tol) / max(dir_.value, 1e-300) + (ent.error + quad_tol) / ent.value
        ratios[f.name or repr(f)] = ratio
        if ratio < best:
            best, best_name, best_err = ratio, f.name, ratio * rel_err
    err = SAFETY * best_err
    margin = best - 1.0 / bound_value
    rel = Relation.VIOLATED if margin < -err else Relation.HOLDS
    return VerificationReport(bound_value, best, rel, margin, err,
                              {"p": spec.p, "case": case, "tightest_trial": best_name, "alpha_upper_estimates": ratios})


# --------------------------------------------------------------------------
# lower-bound functional


def _median(m) -> float:
    lo, hi = oracle_interval(m)
    return optimize.brentq(lambda x: float(m.cdf(x)) - 0.5, lo, hi, xtol=1e-13)


_GL_NODES, _GL_WEIGHTS = roots_legendre(20)
_GL10_NODES, _GL10_WEIGHTS = roots_legendre(10)


def _cumulative_inverse_density(m, xs: np.ndarray) -> tuple[np.ndarray, float]:
    """|int_{xs[0]}^{xs[k]} dt / density(t)| for monotone xs, accumulated outward from xs[0].

    20-point Gauss-Legendre per cell, with the 10-point rule as error proxy.
    """
    a, b = xs[:-1, None], xs[1:, None]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)

    def panel(nodes, weights):
        t = (mid + half * nodes[None, :]).ravel()
        vals = np.exp(-m._logpdf(t.reshape(-1, 1))).reshape(half.shape[0], -1)
        return (vals * weights[None, :]).sum(axis=1) * half[:, 0]

    hi_ord = panel(_GL_NODES, _GL_WEIGHTS)
    lo_ord = panel(_GL10_NODES, _GL10_WEIGHTS)
    if not np.all(np.isfinite(hi_ord)):
        raise IntegrationDidNotConverge("density vanishes inside the integration range")
    rel = float(np.max(np.abs(hi_ord - lo_ord) / np.maximum(np.abs(hi_ord), 1e-300)))
    return np.abs(np.concatenate([[0.0], np.cumsum(hi_ord)])), rel


def _bg_side(m, med: float, end: float, tails: Callable, n: int) -> float:
    jumps = [t for t in m.breakpoints() if min(med, end) < t < max(med, end)]
    xs = np.unique(np.concatenate([np.linspace(med, end, n), jumps]))
    if end < med:
        xs = xs[::-1]
    integral, rel = _cumulative_inverse_density(m, xs)
    if rel > 1e-6:
        raise IntegrationDidNotConverge(f"inverse-density panels disagree by {rel:.2g}")
    tail = np.asarray(tails(xs), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(tail > 0, tail * np.log1p(1.0 / tail) * integral, 0.0)
    return float(np.max(vals[1:]))


def lsi_lower_bound_1d(m, n_points: int = 4000) -> float:
    """Bobkov-Gotze functional B = max(B+, B-) for a 1D measure.

    B+ = sup_{x > m} mu[x, inf) log(1 + 1/mu[x, inf)) int_m^x dt / density(t), m the median,
    and B- is its mirror image.  B is comparable to 1/alpha up to universal factors.
    """
    _require_1d(m)
    lo, hi = oracle_interval(m)
    med = _median(m)
    bp = _bg_side(m, med, hi, lambda x: m.sf(x), n_points)
    bm = _bg_side(m, med, lo, lambda x: m.cdf(x), n_points)
    return max(bp, bm)


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRow:
    p: float
    bound_inv_const: float
    oracle_gap: float
    relation: Relation
    margin: float

    def to_dict(self) -> dict:
        return {"p": self.p, "bound_inv_const": _json.num(self.bound_inv_const),
                "oracle_gap": _json.opt_num(self.oracle_gap), "relation": self.relation.value,
                "margin": _json.opt_num(self.margin)}


CSV_HEADER = ("p", "bound_inv_const", "oracle_gap", "relation", "margin")


def _sweep_one(args) -> SweepRow:
    family, p, which, kw = args
    spec = family(p)
    rep = check_pi_bound(spec, **kw) if which == "PI" else check_lsi_bound_trialfunctions(spec, **kw)
    return SweepRow(float(p), rep.bound_value, rep.oracle_value, rep.relation, rep.margin)


def sweep(family: Callable[[float], MixtureSpec], p_grid: Sequence[float], which: str = "PI", *,
          jobs: int = 1, **check_kwargs) -> list[SweepRow]:
    """Run the PI (spectral) or LSI (trial-function) check over a p-grid.

    Rows come back in p-grid order for any number of jobs; with jobs > 1 the
    family must be picklable.
    """
    which = which.upper()
    if which not in ("PI", "LSI"):
        raise ValueError("which must be 'PI' or 'LSI'")
    tasks = [(family, float(p), which, check_kwargs) for p in p_grid]
    if jobs <= 1:
        return [_sweep_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_one, tasks))


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = [",".join(CSV_HEADER)]
    for r in rows:
        lines.append(",".join([repr(r.p), _fmt(r.bound_inv_const), _fmt(r.oracle_gap), r.relation.value, _fmt(r.margin)]))
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return ""
    return repr(float(x))


def lambda_p_ratio(p: float) -> float:
    """lambda_p / |log p|, which tends to 1 as p -> 0."""
    return inv_log_mean(p) / abs(math.log(p))
