"""Bayesian two-interval hypothesis tests with conjugate posteriors."""

__version__ = "0.1.0"

from .decision import Outcome, Verdict, bayes_factor, evaluate, posterior_ratio, prior_interval_mass
from .exceptions import NumericalError, TwoITError, ValidationError
from .hypotheses import (
    DecisionRule,
    HypothesisPair,
    IntervalHypothesis,
    Label,
    Scale,
    band_pair,
    make_pair,
    ratio_pair_from_target,
    symmetric_pair,
)
from .numerics import SeededStream
from .posteriors import (
    JEFFREYS,
    UNIFORM,
    BetaPosterior,
    BetaPrior,
    LogNormalPrior,
    NormalInvChi2Prior,
    NormalMeanPosterior,
    PosteriorSummary,
    SampleStats,
    beta_interval_mass,
    mean_diff_two_groups,
    mean_interval_mass,
    mean_posterior,
    one_prop_posterior,
    summary_log_posterior,
    two_prop_diff_posterior,
    two_prop_ratio_posterior,
)

__all__ = [
    "BetaPosterior",
    "BetaPrior",
    "DecisionRule",
    "HypothesisPair",
    "IntervalHypothesis",
    "JEFFREYS",
    "Label",
    "LogNormalPrior",
    "NormalInvChi2Prior",
    "NormalMeanPosterior",
    "NumericalError",
    "Outcome",
    "PosteriorSummary",
    "SampleStats",
    "Scale",
    "SeededStream",
    "TwoITError",
    "UNIFORM",
    "ValidationError",
    "Verdict",
    "band_pair",
    "bayes_factor",
    "beta_interval_mass",
    "evaluate",
    "make_pair",
    "mean_diff_two_groups",
    "mean_interval_mass",
    "mean_posterior",
    "one_prop_posterior",
    "posterior_ratio",
    "prior_interval_mass",
    "ratio_pair_from_target",
    "summary_log_posterior",
    "symmetric_pair",
    "two_prop_diff_posterior",
    "two_prop_ratio_posterior",
]
