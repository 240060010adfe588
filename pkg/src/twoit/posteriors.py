"""Posterior engines: one proportion, two proportions, normal means, and a
normal approximation rebuilt from a published ratio and confidence interval.

Each engine produces a :class:`PosteriorSummary` holding the point estimate,
the equal-tailed credible interval and the posterior mass of both interval
hypotheses. Exact engines use closed-form distribution functions; Monte Carlo
engines use draws from a :class:`~twoit.numerics.SeededStream` and record the
seed, stream id and draw count needed to reproduce them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalError, ValidationError
from .hypotheses import HypothesisPair, IntervalHypothesis, Scale
from .numerics import (
    SeededStream,
    beta_quantile,
    normal_cdf,
    normal_quantile,
    reg_inc_beta,
    student_t_cdf,
    student_t_quantile,
)

__all__ = [
    "BetaPosterior",
    "BetaPrior",
    "JEFFREYS",
    "LogNormalPosterior",
    "LogNormalPrior",
    "NormalInvChi2Prior",
    "NormalMeanPosterior",
    "PosteriorSummary",
    "SampleStats",
    "UNIFORM",
    "as_stream",
    "beta_interval_mass",
    "log_normal_posterior",
    "mean_diff_two_groups",
    "mean_interval_mass",
    "mean_posterior",
    "one_prop_posterior",
    "summary_log_posterior",
    "two_prop_diff_posterior",
    "two_prop_ratio_posterior",
]

DEFAULT_DRAWS = 100_000
MIN_DRAWS = 10_000
DEFAULT_PRIOR_SD_LOG = math.log(20.0) / 1.96


@dataclass(frozen=True)
class PosteriorSummary:
    point: float
    cri: tuple[float, float]
    mass_hp: float
    mass_ha: float
    scale: Scale = Scale.NATURAL
    cri_level: float = 0.95
    method: str = "exact"
    draws: int | None = None
    seed: int | None = None
    stream_id: int | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        lo, hi = self.cri
        object.__setattr__(self, "cri", (float(lo), float(hi)))
        object.__setattr__(self, "scale", Scale(self.scale))
        if not lo <= self.point <= hi:
            raise NumericalError("point estimate outside its credible interval", point=self.point, cri=self.cri)
        for name in ("mass_hp", "mass_ha"):
            m = getattr(self, name)
            if not 0.0 <= m <= 1.0:
                raise NumericalError(f"{name} outside [0, 1]", value=m)

    @property
    def cri_length(self) -> float:
        lo, hi = self.cri
        if self.scale is Scale.LOG:
            return math.log(hi) - math.log(lo)
        return hi - lo

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "cri": list(self.cri),
            "cri_level": self.cri_level,
            "mass_hp": self.mass_hp,
            "mass_ha": self.mass_ha,
            "scale": self.scale.value,
            "method": self.method,
            "draws": self.draws,
            "seed": self.seed,
            "stream_id": self.stream_id,
        }


def as_stream(stream) -> SeededStream:
    """Accept a SeededStream, a bare integer seed, or None (seed 0)."""
    if isinstance(stream, SeededStream):
        return stream
    if stream is None:
        return SeededStream(0, 0)
    return SeededStream(int(stream), 0)


def _check_pair(pair, scale):
    if not isinstance(pair, HypothesisPair):
        raise ValidationError("a HypothesisPair is required to compute interval masses")
    if pair.scale is not scale:
        raise ValidationError(f"this posterior lives on the {scale.value} scale but the pair is {pair.scale.value}")


def _tails(level):
    return (1.0 - level) / 2.0, (1.0 + level) / 2.0


def _cdf_mass(cdf, bands):
    return sum(max(0.0, cdf(hi) - cdf(lo)) for lo, hi in bands)


def _bands(interval):
    if isinstance(interval, IntervalHypothesis):
        return interval.bands()
    lo, hi = interval
    if not lo <= hi:
        raise ValidationError(f"interval bounds out of order: [{lo}, {hi}]")
    return [(float(lo), float(hi))]


# --- proportions --------------------------------------------------------------


@dataclass(frozen=True)
class BetaPrior:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a >= 0 and self.b >= 0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValidationError(f"beta prior shapes must be non-negative, got ({self.a}, {self.b})")

    @property
    def proper(self) -> bool:
        return self.a > 0 and self.b > 0

    @classmethod
    def parse(cls, spec) -> "BetaPrior":
        if isinstance(spec, BetaPrior):
            return spec
        if isinstance(spec, str):
            try:
                return _NAMED_BETA_PRIORS[spec.lower()]
            except KeyError:
                raise ValidationError(f"unknown prior {spec!r}; use jeffreys, uniform or a pair of shapes") from None
        a, b = spec
        return cls(float(a), float(b))


JEFFREYS = BetaPrior(0.5, 0.5)
UNIFORM = BetaPrior(1.0, 1.0)
_NAMED_BETA_PRIORS = {"jeffreys": JEFFREYS, "uniform": UNIFORM}


@dataclass(frozen=True)
class BetaPosterior:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValidationError(f"beta posterior needs positive shapes, got ({self.a}, {self.b})")

    def cdf(self, x):
        return reg_inc_beta(min(1.0, max(0.0, x)), self.a, self.b)

    def quantile(self, p):
        return beta_quantile(p, self.a, self.b)

    def summarize(self, pair: HypothesisPair) -> PosteriorSummary:
        _check_pair(pair, Scale.NATURAL)
        notes = []
        masses = []
        for name, hyp in (("H_P", pair.h_p), ("H_A", pair.h_a)):
            mass, clamped = _beta_mass(self, _bands(hyp))
            masses.append(mass)
            if clamped:
                notes.append(f"{name} bounds clamped to [0, 1]")
        lo_p, hi_p = _tails(pair.cri_level)
        return PosteriorSummary(
            point=self.quantile(0.5),
            cri=(self.quantile(lo_p), self.quantile(hi_p)),
            mass_hp=masses[0],
            mass_ha=masses[1],
            cri_level=pair.cri_level,
            notes=tuple(notes),
        )


def _counts(x, n, group=""):
    if int(x) != x or int(n) != n:
        raise ValidationError(f"counts must be integers{group}, got x={x}, n={n}")
    x, n = int(x), int(n)
    if n < 0 or x < 0:
        raise ValidationError(f"counts must be non-negative{group}, got x={x}, n={n}")
    if x > n:
        raise ValidationError(f"successes exceed trials{group}: x={x} > n={n}")
    return x, n


def one_prop_posterior(x, n, prior=JEFFREYS) -> BetaPosterior:
    """Conjugate Beta update for ``x`` successes in ``n`` trials."""
    x, n = _counts(x, n)
    prior = BetaPrior.parse(prior)
    a, b = prior.a + x, prior.b + n - x
    if not (a > 0 and b > 0):
        raise ValidationError(f"improper posterior Beta({a}, {b}); use a proper prior or more data")
    return BetaPosterior(a, b)


def _beta_mass(post, bands):
    clamped = False
    total = 0.0
    for lo, hi in bands:
        c_lo, c_hi = min(1.0, max(0.0, lo)), min(1.0, max(0.0, hi))
        clamped = clamped or (c_lo, c_hi) != (lo, hi)
        if c_hi > c_lo:
            total += reg_inc_beta(c_hi, post.a, post.b) - reg_inc_beta(c_lo, post.a, post.b)
    return min(1.0, max(0.0, total)), clamped


def beta_interval_mass(post: BetaPosterior, interval) -> float:
    """Posterior mass of an interval (or hypothesis), bounds clamped to [0, 1]."""
    return _beta_mass(post, _bands(interval))[0]


def _mc_summary(values, pair, scale, stream, draws, point=None, notes=()):
    lo_p, hi_p = _tails(pair.cri_level)
    cri = tuple(np.quantile(values, [lo_p, hi_p]))
    point = float(np.median(values)) if point is None else point
    masses = []
    for hyp in (pair.h_p, pair.h_a):
        inside = np.zeros(values.shape, dtype=bool)
        for lo, hi in hyp.bands():
            inside |= (values >= lo) & (values <= hi)
        masses.append(float(np.count_nonzero(inside)) / values.size)
    return PosteriorSummary(
        point=point,
        cri=cri,
        mass_hp=masses[0],
        mass_ha=masses[1],
        scale=scale,
        cri_level=pair.cri_level,
        method="monte_carlo",
        draws=draws,
        seed=stream.seed,
        stream_id=stream.stream_id,
        notes=tuple(notes),
    )


def _check_draws(draws):
    if int(draws) != draws or draws < MIN_DRAWS:
        raise ValidationError(f"draws must be an integer of at least {MIN_DRAWS}, got {draws}")
    return int(draws)


def _two_beta_draws(x1, n1, x2, n2, prior, draws, stream):
    prior = BetaPrior.parse(prior)
    post1 = one_prop_posterior(x1, n1, prior)
    post2 = one_prop_posterior(x2, n2, prior)
    gen = stream.generator
    return gen.beta(post1.a, post1.b, draws), gen.beta(post2.a, post2.b, draws)


def two_prop_diff_posterior(x1, n1, x2, n2, prior=JEFFREYS, pair=None, draws=DEFAULT_DRAWS, stream=None):
    """Monte Carlo posterior of ``p1 - p2`` from independent Beta posteriors."""
    _counts(x1, n1, " in group 1")
    _counts(x2, n2, " in group 2")
    draws = _check_draws(draws)
    _check_pair(pair, Scale.NATURAL)
    stream = as_stream(stream)
    p1, p2 = _two_beta_draws(x1, n1, x2, n2, prior, draws, stream)
    return _mc_summary(p1 - p2, pair, Scale.NATURAL, stream, draws)


def two_prop_ratio_posterior(x1, n1, x2, n2, measure="RR", prior=JEFFREYS, pair=None, draws=DEFAULT_DRAWS, stream=None):
    """Monte Carlo posterior of the risk ratio or odds ratio of group 1 to group 2."""
    _counts(x1, n1, " in group 1")
    _, n2 = _counts(x2, n2, " in group 2")
    if n2 == 0:
        raise ValidationError("group 2 needs at least one trial for a ratio")
    measure = str(measure).upper()
    if measure not in ("RR", "OR"):
        raise ValidationError(f"measure must be RR or OR, got {measure!r}")
    draws = _check_draws(draws)
    _check_pair(pair, Scale.LOG)
    stream = as_stream(stream)
    try:
        p1, p2 = _two_beta_draws(x1, n1, x2, n2, prior, draws, stream)
    except ValidationError as exc:
        raise ValidationError(f"degenerate data for a ratio: {exc}") from None
    with np.errstate(divide="ignore", invalid="ignore"):
        if measure == "RR":
            values = p1 / p2
        else:
            values = (p1 / (1.0 - p1)) / (p2 / (1.0 - p2))
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise NumericalError(
            "non-finite or zero ratio draws; the posteriors sit on a boundary",
            measure=measure,
            draws=draws,
        )
    return _mc_summary(values, pair, Scale.LOG, stream, draws)


# --- normal means ------------------------------------------------------------


@dataclass(frozen=True)
class SampleStats:
    """Sufficient statistics of a sample: size, mean, variance (divisor n - 1)."""

    n: int
    ybar: float = 0.0
    s2: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"sample size must be a non-negative integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if not (self.s2 >= 0 and math.isfinite(self.s2)):
            raise ValidationError(f"sample variance must be non-negative, got {self.s2}")
        if self.n < 2 and self.s2 != 0:
            raise ValidationError("a sample variance needs at least two observations")
        if not math.isfinite(self.ybar):
            raise ValidationError(f"sample mean must be finite, got {self.ybar}")

    @classmethod
    def from_data(cls, values) -> "SampleStats":
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            return cls(0)
        s2 = float(values.var(ddof=1)) if values.size > 1 else 0.0
        return cls(int(values.size), float(values.mean()), s2)


@dataclass(frozen=True)
class NormalInvChi2Prior:
    """Prior mean, its pseudo-count, variance pseudo-count and prior variance."""

    mu0: float = 0.0
    kappa0: float = 1.0
    nu0: float = 1.0
    sigma02: float = 1.0

    def __post_init__(self):
        if not (self.kappa0 >= 0 and self.nu0 >= 0):
            raise ValidationError(f"kappa0 and nu0 must be non-negative, got {self.kappa0}, {self.nu0}")
        if not self.sigma02 > 0:
            raise ValidationError(f"sigma02 must be positive, got {self.sigma02}")

    @property
    def proper(self) -> bool:
        return self.kappa0 > 0 and self.nu0 > 0


@dataclass(frozen=True)
class NormalMeanPosterior:
    """Normal / scaled-inverse-chi2 posterior; the mean is marginally Student-t."""

    mu_n: float
    kappa_n: float
    nu_n: float
    sigma2_n: float
    n: int = 0

    @property
    def scale(self) -> float:
        return math.sqrt(self.sigma2_n / self.kappa_n)

    def cdf(self, x):
        return student_t_cdf((x - self.mu_n) / self.scale, self.nu_n)

    def quantile(self, p):
        return self.mu_n + self.scale * student_t_quantile(p, self.nu_n)

    def summarize(self, pair: HypothesisPair) -> PosteriorSummary:
        _check_pair(pair, Scale.NATURAL)
        lo_p, hi_p = _tails(pair.cri_level)
        return PosteriorSummary(
            point=self.mu_n,
            cri=(self.quantile(lo_p), self.quantile(hi_p)),
            mass_hp=_cdf_mass(self.cdf, pair.h_p.bands()),
            mass_ha=_cdf_mass(self.cdf, pair.h_a.bands()),
            cri_level=pair.cri_level,
        )


def mean_posterior(stats: SampleStats, prior: NormalInvChi2Prior) -> NormalMeanPosterior:
    n = stats.n
    kappa_n = prior.kappa0 + n
    nu_n = prior.nu0 + n
    if kappa_n <= 0 or nu_n <= 0:
        raise ValidationError("improper posterior: no data and a flat prior on the mean or variance")
    mu_n = (prior.kappa0 * prior.mu0 + n * stats.ybar) / kappa_n
    ss = prior.nu0 * prior.sigma02
    if n > 0:
        ss += (n - 1) * stats.s2 + (prior.kappa0 * n / kappa_n) * (stats.ybar - prior.mu0) ** 2
    sigma2_n = ss / nu_n
    if not sigma2_n > 0:
        raise NumericalError("posterior variance is zero", nu_n=nu_n, s2=stats.s2, nu0=prior.nu0)
    return NormalMeanPosterior(mu_n, kappa_n, nu_n, sigma2_n, n)


def mean_interval_mass(post: NormalMeanPosterior, interval) -> float:
    return _cdf_mass(post.cdf, _bands(interval))


def mean_diff_two_groups(stats1, stats2, prior1, prior2, pair=None, draws=DEFAULT_DRAWS, stream=None):
    """Monte Carlo posterior of ``mu1 - mu2`` for two independent groups."""
    for label, st in (("group 1", stats1), ("group 2", stats2)):
        if st.n < 2:
            raise ValidationError(f"{label} needs at least two observations")
    draws = _check_draws(draws)
    _check_pair(pair, Scale.NATURAL)
    stream = as_stream(stream)
    post1 = mean_posterior(stats1, prior1)
    post2 = mean_posterior(stats2, prior2)
    gen = stream.generator
    mu1 = post1.mu_n + post1.scale * gen.standard_t(post1.nu_n, draws)
    mu2 = post2.mu_n + post2.scale * gen.standard_t(post2.nu_n, draws)
    return _mc_summary(mu1 - mu2, pair, Scale.NATURAL, stream, draws)


# --- ratio rebuilt from a published estimate and CI -------------------------------


@dataclass(frozen=True)
class LogNormalPrior:
    """Normal prior on log(ratio)."""

    sd_log: float = DEFAULT_PRIOR_SD_LOG
    mean_log: float = 0.0

    def __post_init__(self):
        if not (self.sd_log > 0 and math.isfinite(self.sd_log)):
            raise ValidationError(f"prior sd on the log scale must be positive, got {self.sd_log}")


@dataclass(frozen=True)
class LogNormalPosterior:
    mean_log: float
    sd_log: float
    likelihood_mean: float
    likelihood_sd: float

    @property
    def precision(self) -> float:
        return 1.0 / self.sd_log**2

    def cdf(self, x):
        if x <= 0:
            return 0.0
        return normal_cdf((math.log(x) - self.mean_log) / self.sd_log)

    def quantile(self, p):
        return math.exp(self.mean_log + self.sd_log * normal_quantile(p))

    @property
    def mean(self) -> float:
        return math.exp(self.mean_log + 0.5 * self.sd_log**2)

    def summarize(self, pair: HypothesisPair) -> PosteriorSummary:
        _check_pair(pair, Scale.LOG)
        lo_p, hi_p = _tails(pair.cri_level)
        cri = (self.quantile(lo_p), self.quantile(hi_p))
        point = min(max(self.mean, cri[0]), cri[1])
        return PosteriorSummary(
            point=point,
            cri=cri,
            mass_hp=_cdf_mass(self.cdf, pair.h_p.bands()),
            mass_ha=_cdf_mass(self.cdf, pair.h_a.bands()),
            scale=Scale.LOG,
            cri_level=pair.cri_level,
        )


def log_normal_posterior(point_estimate, ci, ci_level=0.95, prior=None) -> LogNormalPosterior:
    """Combine a normal likelihood on log(ratio), rebuilt from ``ci``, with a normal prior."""
    prior = prior or LogNormalPrior()
    lo, hi = (float(v) for v in ci)
    point_estimate = float(point_estimate)
    if not 0 < lo < point_estimate < hi:
        raise ValidationError(f"need 0 < lower < estimate < upper, got {lo}, {point_estimate}, {hi}")
    if not 0 < ci_level < 1:
        raise ValidationError(f"ci_level must lie in (0, 1), got {ci_level}")
    z = normal_quantile((1.0 + ci_level) / 2.0)
    like_sd = (math.log(hi) - math.log(lo)) / (2.0 * z)
    like_mean = math.log(point_estimate)
    like_prec = 1.0 / like_sd**2
    prior_prec = 1.0 / prior.sd_log**2
    post_prec = like_prec + prior_prec
    post_mean = (like_prec * like_mean + prior_prec * prior.mean_log) / post_prec
    return LogNormalPosterior(post_mean, math.sqrt(1.0 / post_prec), like_mean, like_sd)


def summary_log_posterior(point_estimate, ci, ci_level=0.95, prior_sd_log=DEFAULT_PRIOR_SD_LOG, pair=None):
    post = log_normal_posterior(point_estimate, ci, ci_level, LogNormalPrior(prior_sd_log))
    return post.summarize(pair)
