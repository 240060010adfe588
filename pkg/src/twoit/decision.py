"""Verdicts from posterior interval masses, posterior odds and Bayes factors."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .hypotheses import DecisionRule, HypothesisPair, Scale
from .posteriors import (
    BetaPrior,
    LogNormalPrior,
    NormalInvChi2Prior,
    PosteriorSummary,
    as_stream,
)
from .numerics import normal_cdf, reg_inc_beta, student_t_cdf

__all__ = [
    "Outcome",
    "Verdict",
    "bayes_factor",
    "evaluate",
    "posterior_ratio",
    "prior_interval_mass",
]


class Outcome(str, enum.Enum):
    ACCEPT_HP = "AcceptHP"
    ACCEPT_HA = "AcceptHA"
    SERENDIPITY = "Serendipity"
    INSUFFICIENT_POWER = "InsufficientPower"
    AMBIGUOUS_OVERLAP = "AmbiguousOverlap"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    mass_hp: float
    mass_ha: float
    posterior_ratio: float
    cri_length: float
    rule_used: DecisionRule
    bayes_factor: float | None = None
    ratio_infinite: bool = False
    trend: bool = False
    straddles_boundary: bool = False

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "rule": self.rule_used.value,
            "mass_hp": self.mass_hp,
            "mass_ha": self.mass_ha,
            "posterior_ratio": None if self.ratio_infinite else self.posterior_ratio,
            "posterior_ratio_infinite": self.ratio_infinite,
            "bayes_factor": self.bayes_factor,
            "cri_length": self.cri_length,
            "trend": self.trend,
            "straddles_boundary": self.straddles_boundary,
        }


def posterior_ratio(summary: PosteriorSummary) -> tuple[float, bool]:
    """``mass_hp / mass_ha`` and a flag set when ``mass_ha`` is zero.

    With both masses zero the ratio is reported as 1 (no evidence either way).
    """
    if summary.mass_ha == 0.0:
        if summary.mass_hp == 0.0:
            return 1.0, False
        return math.inf, True
    return summary.mass_hp / summary.mass_ha, False


def bayes_factor(prior_mass_hp: float, prior_mass_ha: float, summary: PosteriorSummary) -> float:
    """Posterior odds of H_P over H_A divided by their prior odds."""
    for name, m in (("prior_mass_hp", prior_mass_hp), ("prior_mass_ha", prior_mass_ha)):
        if not 0.0 < m <= 1.0:
            raise ValidationError(f"Bayes factor undefined: {name} must lie in (0, 1], got {m}")
    if summary.mass_ha == 0.0:
        return math.inf
    return (summary.mass_hp / summary.mass_ha) / (prior_mass_hp / prior_mass_ha)


def _accepts(pair, summary, hyp, mass):
    if pair.rule is DecisionRule.PROBABILITY_THRESHOLD:
        return mass >= pair.pi
    return hyp.contains_interval(*summary.cri)


def _straddles(hyp, lo, hi):
    return any(lo < edge < hi for band in hyp.bands() for edge in band)


def evaluate(summary: PosteriorSummary, pair: HypothesisPair, bf: float | None = None) -> Verdict:
    """Apply the configured decision rule, then look for serendipity.

    Serendipity needs all of: neither hypothesis accepted, a credible interval
    shorter than at least one hypothesis, a credible interval inside neither
    hypothesis, and both masses below ``pi``. Anything else that accepts
    neither is insufficient power.
    """
    if summary.scale is not pair.scale:
        raise ValidationError(
            f"summary is on the {summary.scale.value} scale but the pair is on the {pair.scale.value} scale"
        )
    accept_hp = _accepts(pair, summary, pair.h_p, summary.mass_hp)
    accept_ha = _accepts(pair, summary, pair.h_a, summary.mass_ha)
    l_s = summary.cri_length
    lo, hi = summary.cri
    if accept_hp and accept_ha:
        outcome = Outcome.AMBIGUOUS_OVERLAP
    elif accept_hp:
        outcome = Outcome.ACCEPT_HP
    elif accept_ha:
        outcome = Outcome.ACCEPT_HA
    else:
        precise = l_s < pair.h_p.length or l_s < pair.h_a.length
        outside = not pair.h_p.contains_interval(lo, hi) and not pair.h_a.contains_interval(lo, hi)
        weak = summary.mass_hp < pair.pi and summary.mass_ha < pair.pi
        outcome = Outcome.SERENDIPITY if precise and outside and weak else Outcome.INSUFFICIENT_POWER
    ratio, infinite = posterior_ratio(summary)
    return Verdict(
        outcome=outcome,
        mass_hp=summary.mass_hp,
        mass_ha=summary.mass_ha,
        posterior_ratio=ratio,
        cri_length=l_s,
        rule_used=pair.rule,
        bayes_factor=bf,
        ratio_infinite=infinite,
        trend=pair.pi / 2.0 < summary.mass_hp < pair.pi,
        straddles_boundary=_straddles(pair.h_p, lo, hi) or _straddles(pair.h_a, lo, hi),
    )


def _exact_mass(cdf, hyp):
    return sum(max(0.0, cdf(hi) - cdf(lo)) for lo, hi in hyp.bands())


def prior_interval_mass(prior, pair: HypothesisPair, draws: int = 100_000, stream=None, functional=None):
    """Prior probability of H_P and H_A.

    Closed form for a single Beta, normal-inverse-chi2 or log-normal prior.
    Pass ``functional="diff"``, ``"RR"`` or ``"OR"`` with a Beta prior (shared
    by both groups) to get the Monte Carlo prior mass of a two-group
    parameter; ``functional="mean_diff"`` does the same for two normal means.
    """
    if functional is None:
        if isinstance(prior, (BetaPrior, str, tuple)):
            prior = BetaPrior.parse(prior)
            if not prior.proper:
                raise ValidationError("prior mass undefined for an improper Beta prior")
            cdf = lambda x: reg_inc_beta(min(1.0, max(0.0, x)), prior.a, prior.b)  # noqa: E731
        elif isinstance(prior, NormalInvChi2Prior):
            if not prior.proper:
                raise ValidationError("prior mass undefined for an improper normal-inverse-chi2 prior")
            scale = math.sqrt(prior.sigma02 / prior.kappa0)
            cdf = lambda x: student_t_cdf((x - prior.mu0) / scale, prior.nu0)  # noqa: E731
        elif isinstance(prior, LogNormalPrior):
            if pair.scale is not Scale.LOG:
                raise ValidationError("a log-normal prior needs a log-scale pair")
            cdf = lambda x: normal_cdf((math.log(x) - prior.mean_log) / prior.sd_log)  # noqa: E731
        else:
            raise ValidationError(f"unsupported prior type {type(prior).__name__}")
        return _exact_mass(cdf, pair.h_p), _exact_mass(cdf, pair.h_a)

    gen = as_stream(stream).generator
    if functional == "mean_diff":
        if not isinstance(prior, NormalInvChi2Prior) or not prior.proper:
            raise ValidationError("mean_diff prior mass needs a proper NormalInvChi2Prior")
        scale = math.sqrt(prior.sigma02 / prior.kappa0)
        values = scale * (gen.standard_t(prior.nu0, draws) - gen.standard_t(prior.nu0, draws))
    else:
        prior = BetaPrior.parse(prior)
        if not prior.proper:
            raise ValidationError("prior mass undefined for an improper Beta prior")
        p1 = gen.beta(prior.a, prior.b, draws)
        p2 = gen.beta(prior.a, prior.b, draws)
        with np.errstate(divide="ignore", invalid="ignore"):
            if functional == "diff":
                values = p1 - p2
            elif functional == "RR":
                values = p1 / p2
            elif functional == "OR":
                values = (p1 / (1 - p1)) / (p2 / (1 - p2))
            else:
                raise ValidationError(f"unknown functional {functional!r}")
    masses = []
    for hyp in (pair.h_p, pair.h_a):
        inside = np.zeros(values.shape, dtype=bool)
        for lo, hi in hyp.bands():
            inside |= (values >= lo) & (values <= hi)
        masses.append(float(np.count_nonzero(inside)) / values.size)
    return masses[0], masses[1]
