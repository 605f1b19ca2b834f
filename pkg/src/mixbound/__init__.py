"""Poincare and log-Sobolev bounds for two-component mixtures, with numerical oracles."""
from .bounds import (BoundResult, Case, ComponentConstants, inv_log_mean, log_mean, lsi_bound, lsi_mixture_bound,
                     lsi_nested_bound, pi_bound, pi_mixture_bound, pi_nested_bound)
from .divergence import Chi2Pair, chi2_closed_form, chi2_pair
from .measures import GaussianFull, GaussianIso, MixtureSpec, Tabulated1D, TestFunction, UniformBall
from .verify import Relation, VerificationReport, check_pi_bound, spectral_gap_1d

__version__ = "0.1.0"
