"""End-to-end acceptance checks, one test per criterion.

Every test records a single PASS/FAIL line (see ``conftest.py``); the lines
are repeated in a block at the end of the pytest run. All Monte Carlo
criteria use ``ACCEPTANCE_SEED``, fixed before any result was seen.
"""

import math
import time

import numpy as np
from scipy import integrate, stats

from twoit.cli import main
from twoit.decision import Outcome, evaluate
from twoit.hypotheses import DecisionRule, make_pair, symmetric_pair
from twoit.posteriors import DEFAULT_PRIOR_SD_LOG, PosteriorSummary
from twoit.replication import (
    ACCEPTANCE_DRAWS,
    OR_INPUTS,
    or_pair,
    replicate_example1,
    replicate_example2,
    replicate_example3,
    replicate_or_consistency,
)
from twoit.simulation import (
    ONE_PROP_WIDTHS,
    ScenarioGrid,
    Situation,
    bias_quantiles,
    exact_one_prop_oc,
    mc_mean_oc,
    mc_one_prop_oc,
    mc_two_prop_oc,
    mean_scenario,
    one_prop_scenarios,
    two_prop_scenario,
)

ACCEPTANCE_SEED = 1729


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def checks_text(report):
    return ", ".join(f"{c.name}={c.computed:.4g}{'' if c.passed else ' (out of band)'}" for c in report.checks)


def test_criterion_01_risk_ratio_example(report_line):
    report, secs = timed(replicate_example1, ACCEPTANCE_SEED, ACCEPTANCE_DRAWS)
    ok = report.passed and secs < 5
    report_line(1, ok, f"risk ratio example: {checks_text(report)}; {secs:.1f}s")
    assert ok


def test_criterion_02_equivalence_example(report_line):
    report, secs = timed(replicate_example2, ACCEPTANCE_SEED, ACCEPTANCE_DRAWS)
    derived = any("group sizes derived" in w for w in report.warnings)
    ok = report.passed and derived and secs < 5
    report_line(2, ok, f"mean-difference equivalence example: {checks_text(report)}; {secs:.1f}s")
    assert ok


def test_criterion_03_balance_example(report_line):
    report, secs = timed(replicate_example3, ACCEPTANCE_SEED, ACCEPTANCE_DRAWS)
    ok = report.passed and secs < 5
    report_line(3, ok, f"two-proportion balance example: {checks_text(report)}; {secs:.1f}s")
    assert ok


def quadrature_masses(est, ci, pair, prior_sd):
    """Masses of H_P and H_A by direct integration of prior x likelihood on the log scale."""
    z = stats.norm.ppf(0.975)
    like = stats.norm(math.log(est), (math.log(ci[1]) - math.log(ci[0])) / (2 * z))
    prior = stats.norm(0.0, prior_sd)
    dens = lambda t: like.pdf(t) * prior.pdf(t)  # noqa: E731
    total = integrate.quad(dens, -30, 30, epsabs=1e-14, epsrel=1e-12, points=[math.log(est)], limit=200)[0]
    out = []
    for hyp in (pair.h_p, pair.h_a):
        mass = sum(integrate.quad(dens, math.log(lo), math.log(hi), epsabs=1e-14, epsrel=1e-12)[0]
                   for lo, hi in hyp.bands())
        out.append(mass / total)
    return out


def test_criterion_04_odds_ratio_consistency(report_line):
    report = replicate_or_consistency(DEFAULT_PRIOR_SD_LOG)
    pair = or_pair()
    worst = 0.0
    for i, (est, ci, *_rest) in enumerate(OR_INPUTS):
        want = quadrature_masses(est, ci, pair, DEFAULT_PRIOR_SD_LOG)
        got = report.details["rows"][i]["posterior"]
        worst = max(worst, abs(got["mass_hp"] - want[0]), abs(got["mass_ha"] - want[1]))
    flagged = any("exchanged" in w for w in report.warnings)
    ok = report.passed and worst <= 1e-6 and flagged
    points = [round(r["posterior"]["point"], 3) for r in report.details["rows"]]
    report_line(4, ok, f"odds-ratio vignette: points {points}, max |mass - quadrature| {worst:.1e}, "
                       f"label swap flagged={flagged}")
    assert ok


def test_criterion_05_one_proportion_exact_oc(report_line):
    start = time.perf_counter()
    misclass = {}
    weak_power = []
    asym = 0.0
    for rule in DecisionRule:
        for width in ONE_PROP_WIDTHS:
            for grid in one_prop_scenarios(width, rule=rule):
                points = exact_one_prop_oc(grid)
                worst = max(max(p.p_hp_given_ha, p.p_ha_given_hp) for p in points)
                misclass[grid.scenario_id] = worst
                delta = grid.truth_p - grid.truth_a
                last = points[-1]
                if delta >= 0.2 - 1e-12 and width <= 0.2 + 1e-12:
                    if not (last.p_hp_given_hp > 0.99 and last.p_ha_given_ha > 0.99):
                        weak_power.append(grid.scenario_id)
                if abs(grid.truth_a + grid.truth_p - 1.0) < 1e-12:
                    for p in points:
                        asym = max(asym, abs(p.p_hp_given_hp - p.p_ha_given_ha), abs(p.p_hp_given_ha - p.p_ha_given_hp))
    secs = time.perf_counter() - start
    over = sorted(k for k, v in misclass.items() if v > 0.05)
    worst_id = max(misclass, key=misclass.get)
    ok = not over and not weak_power and asym <= 1e-12 and secs < 120
    report_line(5, ok, f"one-proportion exact OC: {len(over)}/{len(misclass)} configs exceed 5% misclassification "
                       f"(worst {misclass[worst_id]:.3f} at {worst_id}); {len(weak_power)} configs with power <= 0.99 "
                       f"at N=1000; symmetric-scenario mismatch {asym:.1e}; {secs:.0f}s")
    assert ok


def test_criterion_06_two_proportion_oc(report_line):
    grid = two_prop_scenario(delta=0.2, width=0.2, n_grid=(20, 100, 400, 800), n_sims=2000, seed=ACCEPTANCE_SEED)
    points, secs = timed(mc_two_prop_oc, grid, workers=1)
    slack = 0.05 + 3 * math.sqrt(0.05 * 0.95 / grid.n_sims)
    false_hp = [p.p_hp_given_ha for p in points]
    power = [p.p_hp_given_hp for p in points]
    monotone = all(b >= a for a, b in zip(power, power[1:]))
    ok = max(false_hp) <= slack and monotone and power[-1] > 0.9 and secs < 600
    report_line(6, ok, f"two-proportion OC: Pr(HP|HA) {[round(v, 4) for v in false_hp]} (limit {slack:.4f}), "
                       f"Pr(HP|HP) {[round(v, 4) for v in power]}; {secs:.0f}s")
    assert ok


def _sd_gap(records, n):
    under_a = [r for r in records if r.n == n and r.truth == "HA"]
    overall = float(np.median([r.sample_sd for r in under_a]))
    accepted = [r.sample_sd for r in under_a if r.accepted]
    return overall - float(np.median(accepted)) if accepted else math.nan


def test_criterion_07_bias_tables(report_line):
    start = time.perf_counter()
    grid = mean_scenario(n_grid=(120, 400), n_sims=2000, seed=ACCEPTANCE_SEED)
    _, records = mc_mean_oc(grid)
    rows = {(r["n"], r["truth"], r["accepted"]): r for r in bias_quantiles(records)}
    r400, r120 = rows[(400, "HA", "yes")], rows[(120, "HA", "yes")]
    table_ok = (
        1618 <= r400["count"] <= 1738
        and abs(r400["sd_q50"] - 2.99) <= 0.05
        and all(abs(r400[q] - ref) <= 0.04 for q, ref in zip(("mean_q025", "mean_q50", "mean_q975"),
                                                              (9.81, 10.00, 10.19)))
        and 5 <= r120["count"] <= 35
        and abs(r120["sd_q50"] - 2.66) <= 0.10
    )
    direction = []
    for seed in (ACCEPTANCE_SEED, 1, 2, 3):
        recs = records if seed == ACCEPTANCE_SEED else mc_mean_oc(
            mean_scenario(n_grid=(120, 400), n_sims=2000, seed=seed))[1]
        g120, g400 = _sd_gap(recs, 120), _sd_gap(recs, 400)
        direction.append(g120 >= 0 and g400 >= 0 and g400 < g120)
    secs = time.perf_counter() - start
    ok = table_ok and all(direction) and secs < 300
    report_line(7, ok, f"bias tables: N=400 count {r400['count']}, sd median {r400['sd_q50']:.3f}, mean quantiles "
                       f"[{r400['mean_q025']:.2f}, {r400['mean_q50']:.2f}, {r400['mean_q975']:.2f}]; N=120 count "
                       f"{r120['count']}, sd median {r120['sd_q50']:.3f}; bias direction on 4 seeds {direction}; "
                       f"{secs:.0f}s")
    assert ok


SPOT_CELLS = [
    (0.1, 0.3, 0.2, DecisionRule.CRI_INCLUSION, 50),
    (0.3, 0.5, 0.2, DecisionRule.PROBABILITY_THRESHOLD, 120),
    (0.4, 0.6, 0.1, DecisionRule.CRI_INCLUSION, 400),
    (0.5, 0.8, 0.3, DecisionRule.PROBABILITY_THRESHOLD, 30),
    (0.4, 0.7, 0.2, DecisionRule.CRI_INCLUSION, 250),
]


def test_criterion_08_exact_vs_simulated_one_proportion(report_line):
    n_sims = 100_000
    worst_z = 0.0
    for i, (a, p, width, rule, n) in enumerate(SPOT_CELLS):
        grid = ScenarioGrid(Situation.ONE_PROP, a, p, symmetric_pair(a, p, width, rule=rule), (n,),
                            seed=ACCEPTANCE_SEED + i)
        (exact,) = exact_one_prop_oc(grid)
        (mc,) = mc_one_prop_oc(grid, n_sims=n_sims)
        for truth in ("HA", "HP"):
            for outcome in (Outcome.ACCEPT_HP, Outcome.ACCEPT_HA):
                q = exact.outcomes[truth][outcome]
                sigma = math.sqrt(q * (1 - q) / n_sims)
                diff = abs(mc.outcomes[truth][outcome] - q)
                worst_z = max(worst_z, diff / sigma if sigma > 0 else (math.inf if diff > 0 else 0.0))
    ok = worst_z <= 3
    report_line(8, ok, f"exact vs 1e5-replication one-proportion OC on {len(SPOT_CELLS)} cells: "
                       f"largest deviation {worst_z:.2f} sigma")
    assert ok


def _cli_output(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return captured.out


def test_criterion_09_determinism(report_line, capsys, tmp_path):
    commands = [
        ["test-two-prop", "--x1", "131", "--n1", "181", "--x2", "119", "--n2", "181", "--hp", "0.1", "0.3",
         "--ha", "-0.1", "0.1", "--prior", "uniform"],
        ["test-ratio", "--x1", "79", "--n1", "438", "--x2", "44", "--n2", "446", "--target", "1.7",
         "--prior", "uniform"],
        ["test-mean-diff", "--n1", "242", "--mean1", "99.08", "--sd1", "18.35", "--n2", "205", "--mean2", "98.97",
         "--sd2", "19.66", "--hp", "-5", "5", "--ha", "-100", "100", "--ha-gap", "-5", "5", "--mu0", "100",
         "--kappa0", "1", "--nu0", "1", "--sigma02", "225"],
    ]
    same = [
        _cli_output(capsys, c + ["--seed", str(ACCEPTANCE_SEED)]) == _cli_output(capsys, c + ["--seed",
                                                                                          str(ACCEPTANCE_SEED)])
        for c in commands
    ]
    two_prop = tmp_path / "two_prop.cfg"
    two_prop.write_text("situation = two_prop\ntruth_a = 0\ntruth_p = 0.2\nwidth = 0.2\nn_grid = 20, 100\n"
                        "n_sims = 120\ndraws = 10000\n")
    mean = tmp_path / "mean.cfg"
    mean.write_text("situation = mean\ntruth_a = 10\ntruth_p = 11\nwidth = 1\ndata_sd = 3\nn_grid = 120, 400\n"
                    "n_sims = 400\n")
    csv_same = []
    for command, cfg in (("simulate-oc", two_prop), ("simulate-bias", mean)):
        outs = []
        for workers in (1, 8):
            out_dir = tmp_path / f"{command}_{workers}"
            _cli_output(capsys, [command, "--config", str(cfg), "--seed", str(ACCEPTANCE_SEED), "--workers",
                                 str(workers), "--output", str(out_dir)])
            outs.append({p.name: p.read_bytes() for p in sorted(out_dir.iterdir())})
        csv_same.append(outs[0] == outs[1] and len(outs[0]) >= 1)
    ok = all(same) and all(csv_same)
    report_line(9, ok, f"determinism: repeated MC commands identical {same}; CSVs identical for 1 vs 8 workers "
                       f"{csv_same}")
    assert ok


def _definitions_met(s, pair):
    """Outcomes whose defining conditions hold, written out independently of ``evaluate``."""
    if pair.rule is DecisionRule.PROBABILITY_THRESHOLD:
        acc_p, acc_a = s.mass_hp >= pair.pi, s.mass_ha >= pair.pi
    else:
        acc_p = pair.h_p.lower <= s.cri[0] and s.cri[1] <= pair.h_p.upper
        acc_a = pair.h_a.lower <= s.cri[0] and s.cri[1] <= pair.h_a.upper
    inside_p = pair.h_p.lower <= s.cri[0] and s.cri[1] <= pair.h_p.upper
    inside_a = pair.h_a.lower <= s.cri[0] and s.cri[1] <= pair.h_a.upper
    length = s.cri[1] - s.cri[0]
    serendipity = (not acc_p and not acc_a and (length < pair.h_p.length or length < pair.h_a.length)
                   and not inside_p and not inside_a and s.mass_hp < pair.pi and s.mass_ha < pair.pi)
    met = set()
    if acc_p and acc_a:
        met.add(Outcome.AMBIGUOUS_OVERLAP)
    if acc_p and not acc_a:
        met.add(Outcome.ACCEPT_HP)
    if acc_a and not acc_p:
        met.add(Outcome.ACCEPT_HA)
    if serendipity:
        met.add(Outcome.SERENDIPITY)
    if not acc_p and not acc_a and not serendipity:
        met.add(Outcome.INSUFFICIENT_POWER)
    return met


def test_criterion_10_decision_exhaustiveness(report_line):
    rng = np.random.default_rng(ACCEPTANCE_SEED)
    trials = 10_000
    counts = dict.fromkeys(Outcome, 0)
    bad = 0
    for _ in range(trials):
        lo = rng.uniform(-10, 10)
        l_a, l_p, gap = rng.uniform(0.05, 5), rng.uniform(0.05, 5), rng.choice([0.0, rng.uniform(0, 2)])
        if rng.random() < 0.5:
            h_a = (lo, lo + l_a)
            h_p = (h_a[1] + gap, h_a[1] + gap + l_p)
        else:
            h_p = (lo, lo + l_p)
            h_a = (h_p[1] + gap, h_p[1] + gap + l_a)
        pair = make_pair(h_p, h_a, pi=rng.uniform(0.5 + 1e-9, 0.999), rule=list(DecisionRule)[rng.integers(2)])
        a = rng.uniform(lo - 5, lo + 15)
        b = a + rng.exponential(2.0) + 1e-6
        hp = rng.choice([rng.uniform(0, 1), rng.uniform(0.9, 1), 0.0, 1.0])
        ha = rng.uniform(0, 1 - hp)
        s = PosteriorSummary(point=rng.uniform(a, b), cri=(a, b), mass_hp=hp, mass_ha=ha)
        outcome = evaluate(s, pair).outcome
        met = _definitions_met(s, pair)
        counts[outcome] += 1
        if outcome is Outcome.AMBIGUOUS_OVERLAP or met != {outcome}:
            bad += 1
    ok = bad == 0 and counts[Outcome.AMBIGUOUS_OVERLAP] == 0
    summary = ", ".join(f"{k.value} {v}" for k, v in counts.items())
    report_line(10, ok, f"decision exhaustiveness over {trials} random disjoint inputs: {bad} violations ({summary})")
    assert ok
