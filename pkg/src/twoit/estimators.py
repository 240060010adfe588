"""scikit-learn style wrappers around the functional engines.

Hyper-parameters (intervals, threshold, prior, draws, seed) go to the
constructor; ``fit`` takes the raw observations and sets ``summary_``,
``verdict_`` and, for exact engines, ``posterior_``.

Two-group estimators take ``y`` as a 0/1 group indicator; group 1 is
``y == 1`` so differences and ratios read "group 1 versus group 0".
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .decision import evaluate
from .exceptions import ValidationError
from .hypotheses import DecisionRule, Scale, make_pair
from .numerics import SeededStream
from .posteriors import (
    DEFAULT_DRAWS,
    BetaPrior,
    NormalInvChi2Prior,
    SampleStats,
    mean_diff_two_groups,
    mean_posterior,
    one_prop_posterior,
    two_prop_diff_posterior,
    two_prop_ratio_posterior,
)

__all__ = ["MeanDifferenceTest", "MeanTest", "ProportionTest", "TwoProportionTest"]


def _as_1d(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2 and X.shape[1] != 1:
        raise ValidationError(f"expected a single column of observations, got shape {X.shape}")
    return column_or_1d(X)


def _binary(x):
    if not np.all((x == 0) | (x == 1)):
        raise ValidationError("binary outcomes must be coded 0/1")
    return x


def _split(X, y):
    x = _as_1d(X)
    g = column_or_1d(check_array(y, ensure_2d=False, dtype=float))
    if g.shape != x.shape:
        raise ValidationError("X and y must have the same length")
    if not np.all((g == 0) | (g == 1)):
        raise ValidationError("y must be a 0/1 group indicator")
    return x[g == 1], x[g == 0]


class _IntervalTest(BaseEstimator):
    def _pair(self, scale=Scale.NATURAL):
        return make_pair(tuple(self.h_p), tuple(self.h_a), pi=self.pi, rule=self.rule, cri_level=self.cri_level,
                         scale=scale)

    def _finish(self, summary, pair):
        self.pair_ = pair
        self.summary_ = summary
        self.verdict_ = evaluate(summary, pair)
        return self

    @property
    def outcome_(self):
        check_is_fitted(self, "verdict_")
        return self.verdict_.outcome


class ProportionTest(_IntervalTest):
    """Exact one-proportion test from 0/1 outcomes."""

    def __init__(self, h_p=(0.6, 0.8), h_a=(0.4, 0.6), pi=0.95, rule=DecisionRule.PROBABILITY_THRESHOLD,
                 cri_level=0.95, prior="jeffreys"):
        self.h_p = h_p
        self.h_a = h_a
        self.pi = pi
        self.rule = rule
        self.cri_level = cri_level
        self.prior = prior

    def fit(self, X, y=None):
        x = _binary(_as_1d(X))
        pair = self._pair()
        self.posterior_ = one_prop_posterior(int(x.sum()), x.size, BetaPrior.parse(self.prior))
        return self._finish(self.posterior_.summarize(pair), pair)


class TwoProportionTest(_IntervalTest):
    """Monte Carlo two-proportion test; ``measure`` is "diff", "RR" or "OR"."""

    def __init__(self, h_p=(0.1, 0.3), h_a=(-0.1, 0.1), measure="diff", pi=0.95,
                 rule=DecisionRule.PROBABILITY_THRESHOLD, cri_level=0.95, prior="jeffreys", draws=DEFAULT_DRAWS,
                 seed=0):
        self.h_p = h_p
        self.h_a = h_a
        self.measure = measure
        self.pi = pi
        self.rule = rule
        self.cri_level = cri_level
        self.prior = prior
        self.draws = draws
        self.seed = seed

    def fit(self, X, y):
        g1, g0 = (_binary(v) for v in _split(X, y))
        prior = BetaPrior.parse(self.prior)
        stream = SeededStream(self.seed, 0)
        counts = (int(g1.sum()), g1.size, int(g0.sum()), g0.size)
        if self.measure == "diff":
            pair = self._pair()
            summary = two_prop_diff_posterior(*counts, prior, pair, self.draws, stream)
        else:
            pair = self._pair(Scale.LOG)
            summary = two_prop_ratio_posterior(*counts, self.measure, prior, pair, self.draws, stream)
        return self._finish(summary, pair)


class MeanTest(_IntervalTest):
    """Exact one-sample mean test under a normal-inverse-chi2 prior."""

    def __init__(self, h_p=(0.5, 1.5), h_a=(-0.5, 0.5), pi=0.95, rule=DecisionRule.CRI_INCLUSION, cri_level=0.95,
                 mu0=0.0, kappa0=0.0, nu0=0.0, sigma02=1.0):
        self.h_p = h_p
        self.h_a = h_a
        self.pi = pi
        self.rule = rule
        self.cri_level = cri_level
        self.mu0 = mu0
        self.kappa0 = kappa0
        self.nu0 = nu0
        self.sigma02 = sigma02

    def _prior(self):
        return NormalInvChi2Prior(self.mu0, self.kappa0, self.nu0, self.sigma02)

    def fit(self, X, y=None):
        pair = self._pair()
        self.posterior_ = mean_posterior(SampleStats.from_data(_as_1d(X)), self._prior())
        return self._finish(self.posterior_.summarize(pair), pair)


class MeanDifferenceTest(MeanTest):
    """Monte Carlo test of ``mean(group 1) - mean(group 0)``; both groups share the prior."""

    def __init__(self, h_p=(-5.0, 5.0), h_a=(-10.0, -5.0), pi=0.95, rule=DecisionRule.PROBABILITY_THRESHOLD,
                 cri_level=0.95, mu0=0.0, kappa0=0.0, nu0=0.0, sigma02=1.0, draws=DEFAULT_DRAWS, seed=0):
        super().__init__(h_p, h_a, pi, rule, cri_level, mu0, kappa0, nu0, sigma02)
        self.draws = draws
        self.seed = seed

    def fit(self, X, y):
        g1, g0 = _split(X, y)
        pair = self._pair()
        prior = self._prior()
        summary = mean_diff_two_groups(
            SampleStats.from_data(g1), SampleStats.from_data(g0), prior, prior, pair, self.draws,
            SeededStream(self.seed, 0),
        )
        return self._finish(summary, pair)
