"""Operating characteristics and selection-bias simulations.

One proportion is computed exactly by summing the binomial probability of
every outcome whose verdict accepts a hypothesis. Two proportions and normal
means are simulated; replication ``r`` of cell ``c`` draws from the stream
``(seed, c * 2**20 + r)`` so the results do not depend on how replications
are split across worker processes.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .decision import Outcome, evaluate
from .exceptions import ValidationError
from .hypotheses import DecisionRule, HypothesisPair, symmetric_pair
from .posteriors import (
    JEFFREYS,
    BetaPrior,
    NormalInvChi2Prior,
    PosteriorSummary,
    SampleStats,
    mean_posterior,
    one_prop_posterior,
    two_prop_diff_posterior,
)
from .numerics import SeededStream, student_t_quantile

__all__ = [
    "BIAS_COLUMNS",
    "BiasRecord",
    "OCPoint",
    "OC_COLUMNS",
    "ScenarioGrid",
    "Situation",
    "bias_quantiles",
    "bimodality_coefficient",
    "exact_one_prop_oc",
    "mc_mean_oc",
    "mc_one_prop_oc",
    "mc_two_prop_oc",
    "mean_scenario",
    "one_prop_scenarios",
    "oc_rows",
    "two_prop_scenario",
    "write_bias_csv",
    "write_oc_csv",
]

MAX_N = 1_000_000
CELL_STRIDE = 2**20
TRUTHS = ("HA", "HP")

OC_COLUMNS = (
    "situation",
    "scenario_id",
    "n",
    "truth",
    "p_accept_hp",
    "p_accept_ha",
    "p_serendipity",
    "p_insufficient",
    "method",
    "n_sims",
    "seed",
    "p_ambiguous",
    "draws",
)
BIAS_COLUMNS = (
    "n",
    "truth",
    "accepted",
    "count",
    "mean_q025",
    "mean_q50",
    "mean_q975",
    "sd_q025",
    "sd_q50",
    "sd_q975",
    "seed",
    "n_sims",
)


class Situation(str, enum.Enum):
    ONE_PROP = "one_prop"
    TWO_PROP = "two_prop"
    MEAN = "mean"


@dataclass(frozen=True)
class ScenarioGrid:
    """One simulated design: two true values, a hypothesis pair and a sample-size grid.

    For two proportions the truths are differences ``p1 - p2`` and group 2
    is held at ``baseline``. For means, ``prior_center="truth"`` centres the
    prior on the value being simulated; a number fixes it.
    """

    situation: Situation
    truth_a: float
    truth_p: float
    pair: HypothesisPair
    n_grid: tuple[int, ...]
    n_sims: int = 2000
    data_sd: float | None = None
    prior: object = JEFFREYS
    seed: int = 0
    draws: int = 100_000
    baseline: float = 0.5
    prior_center: object = "truth"
    scenario_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "situation", Situation(self.situation))
        grid = tuple(int(n) for n in self.n_grid)
        if not grid:
            raise ValidationError("n_grid must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError("n_grid must be strictly increasing")
        if grid[0] < 1:
            raise ValidationError("sample sizes must be positive")
        if grid[-1] > MAX_N:
            raise ValidationError(f"sample size {grid[-1]} exceeds the limit of {MAX_N}")
        object.__setattr__(self, "n_grid", grid)
        if self.situation is not Situation.ONE_PROP and self.n_sims < 100:
            raise ValidationError(f"n_sims must be at least 100 for simulated situations, got {self.n_sims}")
        if self.situation is Situation.MEAN and not (self.data_sd and self.data_sd > 0):
            raise ValidationError("data_sd must be positive for the mean situation")
        if not self.scenario_id:
            object.__setattr__(
                self,
                "scenario_id",
                f"{self.situation.value}_a{self.truth_a:g}_p{self.truth_p:g}_{self.pair.rule.value}",
            )

    def truth_value(self, truth: str) -> float:
        return self.truth_a if truth == "HA" else self.truth_p

    def cells(self):
        """(cell_index, n, truth) in emission order."""
        idx = 0
        for n in self.n_grid:
            for truth in TRUTHS:
                yield idx, n, truth
                idx += 1


@dataclass(frozen=True)
class OCPoint:
    """Operating characteristics at one sample size.

    ``outcomes[truth]`` maps every outcome to its probability; the four
    headline rates are read from it.
    """

    n: int
    outcomes: dict
    method: str = "exact"
    n_sims: int | None = None

    def rate(self, accepted: str, truth: str) -> float:
        key = Outcome.ACCEPT_HP if accepted == "HP" else Outcome.ACCEPT_HA
        return self.outcomes[truth].get(key, 0.0)

    @property
    def p_hp_given_hp(self):
        return self.rate("HP", "HP")

    @property
    def p_ha_given_hp(self):
        return self.rate("HA", "HP")

    @property
    def p_hp_given_ha(self):
        return self.rate("HP", "HA")

    @property
    def p_ha_given_ha(self):
        return self.rate("HA", "HA")


@dataclass(frozen=True)
class BiasRecord:
    n: int
    truth: str
    accepted: bool
    sample_mean: float
    sample_sd: float


# --- exact, one proportion ----------------------------------------------------


def _band_mass(a, b, bands):
    total = np.zeros_like(a)
    for lo, hi in bands:
        lo, hi = min(1.0, max(0.0, lo)), min(1.0, max(0.0, hi))
        total += special.betainc(a, b, hi) - special.betainc(a, b, lo)
    return np.clip(total, 0.0, 1.0)


def _inside(lo, hi, bands):
    ok = np.zeros(lo.shape, dtype=bool)
    for b_lo, b_hi in bands:
        ok |= (lo >= b_lo) & (hi <= b_hi)
    return ok


def _classify(mass_hp, mass_ha, lo, hi, pair: HypothesisPair):
    """Vectorised counterpart of :func:`twoit.decision.evaluate` on the natural scale."""
    in_p = _inside(lo, hi, pair.h_p.bands())
    in_a = _inside(lo, hi, pair.h_a.bands())
    if pair.rule is DecisionRule.PROBABILITY_THRESHOLD:
        acc_p, acc_a = mass_hp >= pair.pi, mass_ha >= pair.pi
    else:
        acc_p, acc_a = in_p, in_a
    l_s = hi - lo
    precise = (l_s < pair.h_p.length) | (l_s < pair.h_a.length)
    weak = (mass_hp < pair.pi) & (mass_ha < pair.pi)
    neither = ~acc_p & ~acc_a
    return {
        Outcome.AMBIGUOUS_OVERLAP: acc_p & acc_a,
        Outcome.ACCEPT_HP: acc_p & ~acc_a,
        Outcome.ACCEPT_HA: acc_a & ~acc_p,
        Outcome.SERENDIPITY: neither & precise & ~in_p & ~in_a & weak,
        Outcome.INSUFFICIENT_POWER: neither & ~(precise & ~in_p & ~in_a & weak),
    }


def one_prop_outcome_table(n: int, pair: HypothesisPair, prior=JEFFREYS):
    """Outcome indicator arrays for every success count 0..n."""
    prior = BetaPrior.parse(prior)
    x = np.arange(n + 1, dtype=float)
    a = prior.a + x
    b = prior.b + n - x
    lo_p, hi_p = (1.0 - pair.cri_level) / 2.0, (1.0 + pair.cri_level) / 2.0
    lo = special.betaincinv(a, b, lo_p)
    hi = special.betaincinv(a, b, hi_p)
    return _classify(_band_mass(a, b, pair.h_p.bands()), _band_mass(a, b, pair.h_a.bands()), lo, hi, pair)


def exact_one_prop_oc(grid: ScenarioGrid) -> list[OCPoint]:
    if grid.situation is not Situation.ONE_PROP:
        raise ValidationError("exact operating characteristics exist only for one proportion")
    points = []
    for n in grid.n_grid:
        table = one_prop_outcome_table(n, grid.pair, grid.prior)
        x = np.arange(n + 1)
        outcomes = {}
        for truth in TRUTHS:
            pmf = stats.binom.pmf(x, n, grid.truth_value(truth))
            outcomes[truth] = {k: float(np.sum(pmf[v])) for k, v in table.items()}
        points.append(OCPoint(n, outcomes, "exact", None))
    return points


def mc_one_prop_oc(grid: ScenarioGrid, n_sims: int | None = None) -> list[OCPoint]:
    """Simulated one-proportion OC; the scalar posterior and decision code is the oracle.

    Each cell draws its ``n_sims`` binomial counts from one stream
    ``(seed, cell_index * 2**20)``; each distinct count is classified with
    :func:`evaluate` on an exact :class:`BetaPosterior` summary.
    """
    n_sims = n_sims or grid.n_sims
    points = []
    by_n = {}
    for idx, n, truth in grid.cells():
        gen = SeededStream(grid.seed, idx * CELL_STRIDE).generator
        xs = gen.binomial(n, grid.truth_value(truth), n_sims)
        tally = Counter()
        for x, count in zip(*np.unique(xs, return_counts=True)):
            post = one_prop_posterior(int(x), n, grid.prior)
            tally[evaluate(post.summarize(grid.pair), grid.pair).outcome] += int(count)
        by_n.setdefault(n, {})[truth] = {k: tally.get(k, 0) / n_sims for k in Outcome}
    for n in grid.n_grid:
        points.append(OCPoint(n, by_n[n], "mc", n_sims))
    return points


# --- simulated situations ----------------------------------------------------


def _two_prop_rep(grid, n, truth, stream):
    gen = stream.generator
    p1 = grid.baseline + grid.truth_value(truth)
    x1 = int(gen.binomial(n, p1))
    x2 = int(gen.binomial(n, grid.baseline))
    summary = two_prop_diff_posterior(x1, n, x2, n, grid.prior, grid.pair, grid.draws, stream)
    return evaluate(summary, grid.pair).outcome, None


def _mean_rep(grid, n, truth, stream, t_q):
    mu = grid.truth_value(truth)
    values = stream.generator.normal(mu, grid.data_sd, n)
    sample = SampleStats.from_data(values)
    prior = grid.prior
    if grid.prior_center is not None:
        mu0 = mu if grid.prior_center == "truth" else float(grid.prior_center)
        prior = NormalInvChi2Prior(mu0, prior.kappa0, prior.nu0, prior.sigma02)
    post = mean_posterior(sample, prior)
    half = post.scale * t_q
    summary = PosteriorSummary(
        point=post.mu_n,
        cri=(post.mu_n - half, post.mu_n + half),
        mass_hp=min(1.0, sum(max(0.0, post.cdf(hi) - post.cdf(lo)) for lo, hi in grid.pair.h_p.bands())),
        mass_ha=min(1.0, sum(max(0.0, post.cdf(hi) - post.cdf(lo)) for lo, hi in grid.pair.h_a.bands())),
        cri_level=grid.pair.cri_level,
    )
    outcome = evaluate(summary, grid.pair).outcome
    wanted = Outcome.ACCEPT_HA if truth == "HA" else Outcome.ACCEPT_HP
    record = BiasRecord(n, truth, outcome is wanted, sample.ybar, math.sqrt(sample.s2))
    return outcome, record


def _run_chunk(task):
    grid, idx, n, truth, start, stop = task
    tally = Counter()
    records = []
    if grid.situation is Situation.MEAN:
        nu_n = grid.prior.nu0 + n
        t_q = student_t_quantile((1.0 + grid.pair.cri_level) / 2.0, nu_n)
    for rep in range(start, stop):
        stream = SeededStream(grid.seed, idx * CELL_STRIDE + rep)
        if grid.situation is Situation.TWO_PROP:
            outcome, record = _two_prop_rep(grid, n, truth, stream)
        else:
            outcome, record = _mean_rep(grid, n, truth, stream, t_q)
        tally[outcome.value] += 1
        if record is not None:
            records.append((rep, record))
    return (idx, start), dict(tally), records


def _tasks(grid, chunk):
    for idx, n, truth in grid.cells():
        for start in range(0, grid.n_sims, chunk):
            yield grid, idx, n, truth, start, min(grid.n_sims, start + chunk)


def _simulate(grid: ScenarioGrid, workers: int, chunk: int):
    tasks = list(_tasks(grid, chunk))
    if workers <= 1:
        results = [_run_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, tasks))
    results.sort(key=lambda r: r[0])
    tallies = {}
    records = []
    for (idx, _), tally, recs in results:
        total = tallies.setdefault(idx, Counter())
        total.update(tally)
        records.extend(r for _, r in recs)
    by_n = {}
    for idx, n, truth in grid.cells():
        tally = tallies[idx]
        by_n.setdefault(n, {})[truth] = {k: tally.get(k.value, 0) / grid.n_sims for k in Outcome}
    points = [OCPoint(n, by_n[n], "mc", grid.n_sims) for n in grid.n_grid]
    return points, records


def mc_two_prop_oc(grid: ScenarioGrid, workers: int = 1, chunk: int = 250) -> list[OCPoint]:
    if grid.situation is not Situation.TWO_PROP:
        raise ValidationError("mc_two_prop_oc needs a two-proportion grid")
    return _simulate(grid, workers, chunk)[0]


def mc_mean_oc(grid: ScenarioGrid, workers: int = 1, chunk: int = 500):
    if grid.situation is not Situation.MEAN:
        raise ValidationError("mc_mean_oc needs a mean grid")
    if grid.pair.rule is not DecisionRule.CRI_INCLUSION:
        warnings.warn("mean simulations are normally run with the credible-interval inclusion rule")
    return _simulate(grid, workers, chunk)


# --- bias tables ---------------------------------------------------------------


def bias_quantiles(records, probs=(0.025, 0.5, 0.975)) -> list[dict]:
    """Quantiles of sample mean and sd, grouped by (n, truth, accepted)."""
    groups = {}
    for r in records:
        groups.setdefault((r.n, r.truth, r.accepted), []).append(r)
    rows = []
    for n in sorted({r.n for r in records}):
        for truth in TRUTHS:
            for accepted in (True, False):
                group = groups.get((n, truth, accepted))
                if not group:
                    warnings.warn(f"no records for n={n}, truth={truth}, accepted={accepted}; row omitted")
                    continue
                means = np.quantile([r.sample_mean for r in group], probs)
                sds = np.quantile([r.sample_sd for r in group], probs)
                rows.append(
                    {
                        "n": n,
                        "truth": truth,
                        "accepted": "yes" if accepted else "no",
                        "count": len(group),
                        "mean_q025": float(means[0]),
                        "mean_q50": float(means[1]),
                        "mean_q975": float(means[2]),
                        "sd_q025": float(sds[0]),
                        "sd_q50": float(sds[1]),
                        "sd_q975": float(sds[2]),
                    }
                )
    return rows


def bimodality_coefficient(values) -> float:
    """Sample bimodality coefficient; values above 5/9 suggest two modes."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 4:
        raise ValidationError("bimodality coefficient needs at least four values")
    g = stats.skew(values, bias=False)
    k = stats.kurtosis(values, bias=False)
    return (g * g + 1.0) / (k + 3.0 * (n - 1) ** 2 / ((n - 2) * (n - 3)))


# --- output --------------------------------------------------------------------


def oc_rows(grid: ScenarioGrid, points: list[OCPoint]) -> list[dict]:
    rows = []
    for p in points:
        for truth in TRUTHS:
            o = p.outcomes[truth]
            rows.append(
                {
                    "situation": grid.situation.value,
                    "scenario_id": grid.scenario_id,
                    "n": p.n,
                    "truth": truth,
                    "p_accept_hp": o[Outcome.ACCEPT_HP],
                    "p_accept_ha": o[Outcome.ACCEPT_HA],
                    "p_serendipity": o[Outcome.SERENDIPITY],
                    "p_insufficient": o[Outcome.INSUFFICIENT_POWER],
                    "method": p.method,
                    "n_sims": p.n_sims if p.n_sims is not None else "",
                    "seed": grid.seed if p.method == "mc" else "",
                    "p_ambiguous": o[Outcome.AMBIGUOUS_OVERLAP],
                    "draws": grid.draws if grid.situation is Situation.TWO_PROP else "",
                }
            )
    return rows


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _write(path_or_file, columns, rows):
    if hasattr(path_or_file, "write"):
        _write_rows(path_or_file, columns, rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        _write_rows(fh, columns, rows)


def _write_rows(fh, columns, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])


def write_oc_csv(path, rows):
    _write(path, OC_COLUMNS, rows)


def write_bias_csv(path, rows, seed="", n_sims=""):
    _write(path, BIAS_COLUMNS, [dict(row, seed=seed, n_sims=n_sims) for row in rows])


# --- published scenario configurations -----------------------------------------

ONE_PROP_CENTERS_A = (0.1, 0.3, 0.4, 0.5)
ONE_PROP_DELTAS = (0.1, 0.2, 0.3)
ONE_PROP_WIDTHS = (0.1, 0.2, 0.3)
ONE_PROP_N_GRID = tuple(range(10, 1001, 10))


def one_prop_scenarios(width, rule=DecisionRule.CRI_INCLUSION, pi=0.95, n_grid=ONE_PROP_N_GRID, prior=JEFFREYS):
    grids = []
    for a in ONE_PROP_CENTERS_A:
        for d in ONE_PROP_DELTAS:
            p = round(a + d, 10)
            pair = symmetric_pair(a, p, width, pi=pi, rule=rule)
            sid = f"one_prop_a{a:g}_p{p:g}_w{width:g}_{DecisionRule(rule).value}"
            grids.append(ScenarioGrid(Situation.ONE_PROP, a, p, pair, n_grid, prior=prior, scenario_id=sid))
    return grids


def two_prop_scenario(delta=0.2, width=0.2, n_grid=(20, 100, 400, 800), n_sims=2000, seed=0, draws=100_000,
                      prior=JEFFREYS, pi=0.95):
    pair = symmetric_pair(0.0, delta, width, pi=pi, rule=DecisionRule.PROBABILITY_THRESHOLD)
    return ScenarioGrid(
        Situation.TWO_PROP, 0.0, delta, pair, n_grid, n_sims=n_sims, prior=prior, seed=seed, draws=draws,
        scenario_id=f"two_prop_d{delta:g}_w{width:g}",
    )


def mean_scenario(n_grid=(120, 150, 200, 400), mu_a=10.0, mu_p=11.0, data_sd=3.0, width=1.0, n_sims=2000, seed=0,
                  prior=None, prior_center="truth"):
    prior = prior or NormalInvChi2Prior(mu_a, 1.0, 1.0, data_sd**2)
    pair = symmetric_pair(mu_a, mu_p, width, rule=DecisionRule.CRI_INCLUSION)
    return ScenarioGrid(
        Situation.MEAN, mu_a, mu_p, pair, n_grid, n_sims=n_sims, data_sd=data_sd, prior=prior, seed=seed,
        prior_center=prior_center, scenario_id=f"mean_a{mu_a:g}_p{mu_p:g}_sd{data_sd:g}_w{width:g}",
    )
