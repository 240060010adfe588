"""Command-line front end.

Exit codes: 0 a verdict or table was produced, 1 a replication check fell
outside its tolerance, 2 invalid input, 3 numerical failure. Errors are
written to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys

from . import __version__
from .decision import bayes_factor, evaluate, prior_interval_mass
from .exceptions import NumericalError, ValidationError
from .hypotheses import (
    DecisionRule,
    HypothesisPair,
    IntervalHypothesis,
    Label,
    Scale,
    ratio_pair_from_target,
    symmetric_pair,
)
from .numerics import SeededStream
from .posteriors import (
    DEFAULT_DRAWS,
    DEFAULT_PRIOR_SD_LOG,
    BetaPrior,
    LogNormalPrior,
    NormalInvChi2Prior,
    SampleStats,
    log_normal_posterior,
    mean_diff_two_groups,
    mean_posterior,
    one_prop_posterior,
    two_prop_diff_posterior,
    two_prop_ratio_posterior,
)
from . import replication
from .simulation import (
    ScenarioGrid,
    Situation,
    bias_quantiles,
    exact_one_prop_oc,
    mc_mean_oc,
    mc_two_prop_oc,
    oc_rows,
    write_bias_csv,
    write_oc_csv,
)

SEED_ENV = "TWOIT_SEED"
EXIT_OK, EXIT_TOLERANCE, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# --- argument helpers ----------------------------------------------------------


def _add_pair_args(p, log_scale=False):
    p.add_argument("--hp", nargs=2, type=float, metavar=("LOWER", "UPPER"), help="interval where the effect is present")
    p.add_argument("--ha", nargs=2, type=float, metavar=("LOWER", "UPPER"), help="interval where the effect is absent")
    p.add_argument("--hp-gap", nargs=2, type=float, metavar=("G0", "G1"), help="open sub-interval removed from H_P")
    p.add_argument("--ha-gap", nargs=2, type=float, metavar=("G0", "G1"), help="open sub-interval removed from H_A")
    if log_scale:
        p.add_argument("--target", type=float, help="build both intervals from a target ratio")
    p.add_argument("--pi", type=float, default=0.95, help="acceptance threshold, must exceed 0.5 (default 0.95)")
    p.add_argument("--rule", choices=[r.value for r in DecisionRule], default=DecisionRule.PROBABILITY_THRESHOLD.value)
    p.add_argument("--cri-level", type=float, default=0.95)


def _add_run_args(p, mc=True):
    if mc:
        p.add_argument("--draws", type=int, default=DEFAULT_DRAWS)
        p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV}, then 0")
    p.add_argument("--output", help="write the JSON result to this file instead of stdout")


def _add_beta_prior(p):
    p.add_argument("--prior", default="jeffreys", help="jeffreys, uniform, or two shapes as A,B")


def _add_normal_prior(p):
    p.add_argument("--mu0", type=float, default=0.0)
    p.add_argument("--kappa0", type=float, default=0.0)
    p.add_argument("--nu0", type=float, default=0.0)
    p.add_argument("--sigma02", type=float, default=1.0)


def _beta_prior(text):
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValidationError(f"prior shapes must be given as A,B, got {text!r}")
        try:
            return BetaPrior(float(parts[0]), float(parts[1]))
        except ValueError:
            raise ValidationError(f"prior shapes must be numbers, got {text!r}") from None
    return BetaPrior.parse(text)


def _pair(args, scale=Scale.NATURAL) -> HypothesisPair:
    if getattr(args, "target", None) is not None:
        if args.hp or args.ha:
            raise ValidationError("give either --target or --hp/--ha, not both")
        return ratio_pair_from_target(args.target, pi=args.pi, rule=args.rule, cri_level=args.cri_level)
    if not (args.hp and args.ha):
        raise ValidationError("both --hp and --ha are required")
    h_p = IntervalHypothesis(Label.PRESENT, *args.hp, scale=scale, gap=tuple(args.hp_gap) if args.hp_gap else None)
    h_a = IntervalHypothesis(Label.ABSENT, *args.ha, scale=scale, gap=tuple(args.ha_gap) if args.ha_gap else None)
    return HypothesisPair(h_p, h_a, pi=args.pi, rule=args.rule, cri_level=args.cri_level)


def resolve_seed(value) -> int:
    if value is None:
        env = os.environ.get(SEED_ENV)
        if env is None or env == "":
            return 0
        try:
            value = int(env)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    if not 0 <= value < 2**64:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {value}")
    return int(value)


def _clean(obj, warnings, path="result"):
    """Replace non-finite floats with None, noting each replacement."""
    if isinstance(obj, dict):
        return {k: _clean(v, warnings, f"{path}.{k}") for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, warnings, f"{path}[{i}]") for i, v in enumerate(obj)]
    if isinstance(obj, float) and not math.isfinite(obj):
        warnings.append(f"{path} is {obj!r}; written as null")
        return None
    return obj


def _emit(doc, output):
    warnings = doc.setdefault("warnings", [])
    doc = _clean(doc, warnings)
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _result(command, inputs, pair, prior, summary, prior_masses, warnings):
    bf = None
    if prior_masses is not None:
        try:
            bf = bayes_factor(prior_masses[0], prior_masses[1], summary)
        except ValidationError as exc:
            warnings.append(str(exc))
    verdict = evaluate(summary, pair, bf=bf)
    warnings = list(warnings) + list(summary.notes)
    if verdict.straddles_boundary:
        warnings.append("credible interval straddles a hypothesis boundary")
    return {
        "command": command,
        "inputs": inputs,
        "pair": pair.to_dict(),
        "prior": prior,
        "posterior": summary.to_dict(),
        "verdict": verdict.to_dict(),
        "prior_mass": None if prior_masses is None else {"hp": prior_masses[0], "ha": prior_masses[1]},
        "warnings": warnings,
    }


def _beta_prior_masses(prior, pair, functional, draws, seed, warnings):
    if not prior.proper:
        warnings.append("prior is improper; Bayes factor not computed")
        return None
    if functional is None:
        return prior_interval_mass(prior, pair)
    # a separate stream so the posterior draws are unaffected
    return prior_interval_mass(prior, pair, draws, SeededStream(seed, 1), functional=functional)


# --- test-* commands -----------------------------------------------------------


def cmd_test_prop(args):
    pair = _pair(args)
    prior = _beta_prior(args.prior)
    post = one_prop_posterior(args.x, args.n, prior)
    summary = post.summarize(pair)
    warnings = []
    masses = _beta_prior_masses(prior, pair, None, None, None, warnings)
    doc = _result(
        "test-prop", {"x": args.x, "n": args.n}, pair, {"family": "beta", "a": prior.a, "b": prior.b},
        summary, masses, warnings,
    )
    _emit(doc, args.output)
    return EXIT_OK


def cmd_test_two_prop(args):
    pair = _pair(args)
    prior = _beta_prior(args.prior)
    seed = resolve_seed(args.seed)
    summary = two_prop_diff_posterior(
        args.x1, args.n1, args.x2, args.n2, prior, pair, args.draws, SeededStream(seed, 0)
    )
    warnings = []
    masses = _beta_prior_masses(prior, pair, "diff", args.draws, seed, warnings)
    inputs = {"x1": args.x1, "n1": args.n1, "x2": args.x2, "n2": args.n2}
    doc = _result("test-two-prop", inputs, pair, {"family": "beta", "a": prior.a, "b": prior.b}, summary, masses, warnings)
    _emit(doc, args.output)
    return EXIT_OK


def cmd_test_ratio(args):
    pair = _pair(args, Scale.LOG)
    prior = _beta_prior(args.prior)
    seed = resolve_seed(args.seed)
    summary = two_prop_ratio_posterior(
        args.x1, args.n1, args.x2, args.n2, args.measure, prior, pair, args.draws, SeededStream(seed, 0)
    )
    warnings = []
    masses = _beta_prior_masses(prior, pair, args.measure.upper(), args.draws, seed, warnings)
    inputs = {"x1": args.x1, "n1": args.n1, "x2": args.x2, "n2": args.n2, "measure": args.measure.upper()}
    doc = _result("test-ratio", inputs, pair, {"family": "beta", "a": prior.a, "b": prior.b}, summary, masses, warnings)
    _emit(doc, args.output)
    return EXIT_OK


def _read_values(path):
    if not os.path.isfile(path):
        raise ValidationError(f"data file not found: {path}")
    values = []
    with open(path) as fh:
        for token in fh.read().replace(",", " ").split():
            try:
                values.append(float(token))
            except ValueError:
                raise ValidationError(f"non-numeric value {token!r} in {path}") from None
    return values


def _stats(n, mean, sd, data, label=""):
    if data is not None:
        if any(v is not None for v in (n, mean, sd)):
            raise ValidationError(f"give either a data file or --n/--mean/--sd{label}, not both")
        return SampleStats.from_data(_read_values(data))
    if n is None or mean is None or sd is None:
        raise ValidationError(f"--n, --mean and --sd{label} are required without a data file")
    if sd < 0:
        raise ValidationError(f"standard deviation must be non-negative, got {sd}")
    return SampleStats(n, mean, sd * sd)


def _normal_prior(args):
    return NormalInvChi2Prior(args.mu0, args.kappa0, args.nu0, args.sigma02)


def _normal_prior_dict(prior):
    return {"family": "normal_inv_chi2", "mu0": prior.mu0, "kappa0": prior.kappa0, "nu0": prior.nu0,
            "sigma02": prior.sigma02}


def cmd_test_mean(args):
    pair = _pair(args)
    prior = _normal_prior(args)
    stats = _stats(args.n, args.mean, args.sd, args.data)
    summary = mean_posterior(stats, prior).summarize(pair)
    warnings = []
    masses = None
    if prior.proper:
        masses = prior_interval_mass(prior, pair)
    else:
        warnings.append("prior is improper; Bayes factor not computed")
    inputs = {"n": stats.n, "mean": stats.ybar, "sd": math.sqrt(stats.s2)}
    _emit(_result("test-mean", inputs, pair, _normal_prior_dict(prior), summary, masses, warnings), args.output)
    return EXIT_OK


def cmd_test_mean_diff(args):
    pair = _pair(args)
    prior = _normal_prior(args)
    seed = resolve_seed(args.seed)
    s1 = _stats(args.n1, args.mean1, args.sd1, args.data1, "1")
    s2 = _stats(args.n2, args.mean2, args.sd2, args.data2, "2")
    summary = mean_diff_two_groups(s1, s2, prior, prior, pair, args.draws, SeededStream(seed, 0))
    warnings = []
    masses = None
    if prior.proper:
        masses = prior_interval_mass(prior, pair, args.draws, SeededStream(seed, 1), functional="mean_diff")
    else:
        warnings.append("prior is improper; Bayes factor not computed")
    inputs = {
        "n1": s1.n, "mean1": s1.ybar, "sd1": math.sqrt(s1.s2),
        "n2": s2.n, "mean2": s2.ybar, "sd2": math.sqrt(s2.s2),
    }
    _emit(_result("test-mean-diff", inputs, pair, _normal_prior_dict(prior), summary, masses, warnings), args.output)
    return EXIT_OK


def cmd_test_summary_ratio(args):
    pair = _pair(args, Scale.LOG)
    prior = LogNormalPrior(args.prior_sd_log)
    post = log_normal_posterior(args.estimate, args.ci, args.ci_level, prior)
    summary = post.summarize(pair)
    masses = prior_interval_mass(prior, pair)
    inputs = {"estimate": args.estimate, "ci": list(args.ci), "ci_level": args.ci_level}
    prior_doc = {"family": "log_normal", "mean_log": prior.mean_log, "sd_log": prior.sd_log}
    _emit(_result("test-summary-ratio", inputs, pair, prior_doc, summary, masses, []), args.output)
    return EXIT_OK


# --- simulations -----------------------------------------------------------------

CONFIG_KEYS = {
    "situation", "truth_a", "truth_p", "width", "hp", "ha", "pi", "rule", "cri_level", "n_grid", "n_sims",
    "data_sd", "prior", "mu0", "kappa0", "nu0", "sigma02", "prior_center", "seed", "draws", "baseline",
    "workers", "scenario_id",
}


def read_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    if not os.path.isfile(path):
        raise ValidationError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    with open(path) as fh:
        try:
            parser.read_string("[run]\n" + fh.read())
        except configparser.Error as exc:
            raise ValidationError(f"malformed config {path}: {exc.message.splitlines()[0]}") from None
    cfg = dict(parser["run"])
    unknown = sorted(set(cfg) - CONFIG_KEYS)
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    return cfg


def _floats(text, count, key):
    try:
        values = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(f"{key} must be numeric, got {text!r}") from None
    if len(values) != count:
        raise ValidationError(f"{key} needs {count} values, got {text!r}")
    return values


def parse_n_grid(text) -> tuple[int, ...]:
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (int(v) for v in text.split(":"))
            if step <= 0:
                raise ValidationError("n_grid step must be positive")
            return tuple(range(start, stop + 1, step))
        return tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ValidationError(f"n_grid must be start:stop:step or a list of integers, got {text!r}") from None


def _get(cfg, key, cast, default=None):
    if key not in cfg:
        if default is None:
            raise ValidationError(f"config key {key!r} is required")
        return default
    try:
        return cast(cfg[key])
    except ValueError:
        raise ValidationError(f"config key {key!r} has invalid value {cfg[key]!r}") from None


def grids_from_config(cfg, seed) -> tuple[list[ScenarioGrid], int]:
    situation = Situation(_get(cfg, "situation", str)) if cfg.get("situation") in {s.value for s in Situation} else None
    if situation is None:
        raise ValidationError(f"situation must be one of one_prop, two_prop, mean, got {cfg.get('situation')!r}")
    truth_a = _get(cfg, "truth_a", float)
    truth_p = _get(cfg, "truth_p", float)
    pi = _get(cfg, "pi", float, 0.95)
    cri_level = _get(cfg, "cri_level", float, 0.95)
    default_rule = {
        Situation.ONE_PROP: "both",
        Situation.TWO_PROP: DecisionRule.PROBABILITY_THRESHOLD.value,
        Situation.MEAN: DecisionRule.CRI_INCLUSION.value,
    }[situation]
    rule_text = cfg.get("rule", default_rule)
    rules = list(DecisionRule) if rule_text == "both" else [rule_text]
    n_grid = parse_n_grid(_get(cfg, "n_grid", str))
    workers = _get(cfg, "workers", int, 1)
    if situation is Situation.MEAN:
        data_sd = _get(cfg, "data_sd", float)
        prior = NormalInvChi2Prior(
            _get(cfg, "mu0", float, truth_a), _get(cfg, "kappa0", float, 1.0), _get(cfg, "nu0", float, 1.0),
            _get(cfg, "sigma02", float, data_sd**2),
        )
        center = cfg.get("prior_center", "truth")
        prior_center = None if center == "fixed" else ("truth" if center == "truth" else _get(cfg, "prior_center", float))
    else:
        data_sd = None
        prior = _beta_prior(cfg.get("prior", "jeffreys"))
        prior_center = None
    grids = []
    for rule in rules:
        rule = DecisionRule(rule)
        if "hp" in cfg or "ha" in cfg:
            hp = _floats(_get(cfg, "hp", str), 2, "hp")
            ha = _floats(_get(cfg, "ha", str), 2, "ha")
            pair = HypothesisPair(
                IntervalHypothesis(Label.PRESENT, *hp), IntervalHypothesis(Label.ABSENT, *ha),
                pi=pi, rule=rule, cri_level=cri_level,
            )
        else:
            width = _get(cfg, "width", float)
            pair = symmetric_pair(truth_a, truth_p, width, pi=pi, rule=rule, cri_level=cri_level)
        sid = cfg.get("scenario_id") or f"{situation.value}_a{truth_a:g}_p{truth_p:g}"
        if len(rules) > 1:
            sid = f"{sid}_{rule.value}"
        grids.append(
            ScenarioGrid(
                situation, truth_a, truth_p, pair, n_grid,
                n_sims=_get(cfg, "n_sims", int, 2000), data_sd=data_sd, prior=prior, seed=seed,
                draws=_get(cfg, "draws", int, DEFAULT_DRAWS), baseline=_get(cfg, "baseline", float, 0.5),
                prior_center=prior_center, scenario_id=sid,
            )
        )
    return grids, workers


def _sim_seed(args, cfg):
    if args.seed is not None:
        return resolve_seed(args.seed)
    if "seed" in cfg:
        return resolve_seed(_get(cfg, "seed", int))
    return resolve_seed(None)


def _run_grid(grid, workers):
    if grid.situation is Situation.ONE_PROP:
        return exact_one_prop_oc(grid), []
    if grid.situation is Situation.TWO_PROP:
        return mc_two_prop_oc(grid, workers=workers), []
    return mc_mean_oc(grid, workers=workers)


def cmd_simulate(args):
    cfg = read_config(args.config)
    seed = _sim_seed(args, cfg)
    grids, workers = grids_from_config(cfg, seed)
    if args.workers is not None:
        workers = args.workers
    if args.command == "simulate-bias" and grids[0].situation is not Situation.MEAN:
        raise ValidationError("simulate-bias needs situation = mean")
    rows, records = [], []
    for grid in grids:
        points, recs = _run_grid(grid, workers)
        rows += oc_rows(grid, points)
        records += recs
    if args.output:
        os.makedirs(args.output, exist_ok=True)
        write_oc_csv(os.path.join(args.output, "oc.csv"), rows)
        if args.command == "simulate-bias":
            write_bias_csv(os.path.join(args.output, "bias.csv"), bias_quantiles(records), seed, grids[0].n_sims)
    elif args.command == "simulate-bias":
        write_bias_csv(sys.stdout, bias_quantiles(records), seed, grids[0].n_sims)
    else:
        write_oc_csv(sys.stdout, rows)
    return EXIT_OK


# --- replicate -------------------------------------------------------------------


def cmd_replicate(args):
    seed = resolve_seed(args.seed)
    out = args.output
    which = args.which
    if which == "example1":
        report = replication.replicate_example1(seed, args.draws)
    elif which == "example2":
        report = replication.replicate_example2(seed, args.draws)
    elif which == "example3":
        report = replication.replicate_example3(seed, args.draws)
    elif which == "or-consistency":
        report = replication.replicate_or_consistency(args.prior_sd_log)
    elif which == "tables":
        ns = tuple(args.n) if args.n else (120, 150, 200, 400)
        report = replication.replicate_tables(ns, seed, args.n_sims, args.workers, out)
    else:
        report = replication.replicate_figures(seed, args.n_sims, args.workers, out)
    doc = report.to_dict()
    doc["seed"] = seed
    if which in ("example1", "example2", "example3"):
        doc["draws"] = args.draws
    if out:
        os.makedirs(out, exist_ok=True)
        _emit(doc, os.path.join(out, f"report_{which}.json"))
    else:
        _emit(doc, None)
    for check in report.failures():
        sys.stderr.write(
            f"FAIL {which} {check.name}: computed {check.computed!r}, allowed [{check.lower!r}, {check.upper!r}]\n"
        )
    return EXIT_OK if report.passed else EXIT_TOLERANCE


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twoit", description="Bayesian two-interval hypothesis tests.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test-prop", help="one proportion, exact Beta posterior")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_beta_prior(p)
    _add_pair_args(p)
    _add_run_args(p, mc=False)
    p.set_defaults(func=cmd_test_prop)

    for name, func, log_scale in (("test-two-prop", cmd_test_two_prop, False), ("test-ratio", cmd_test_ratio, True)):
        p = sub.add_parser(name, help="difference of two proportions" if not log_scale else "risk or odds ratio")
        for arg in ("--x1", "--n1", "--x2", "--n2"):
            p.add_argument(arg, type=int, required=True)
        if log_scale:
            p.add_argument("--measure", type=str.upper, choices=["RR", "OR"], default="RR")
        _add_beta_prior(p)
        _add_pair_args(p, log_scale=log_scale)
        _add_run_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("test-mean", help="one normal mean, exact Student-t posterior")
    p.add_argument("--n", type=int)
    p.add_argument("--mean", type=float)
    p.add_argument("--sd", type=float)
    p.add_argument("--data", help="file of whitespace- or comma-separated observations")
    _add_normal_prior(p)
    _add_pair_args(p)
    _add_run_args(p, mc=False)
    p.set_defaults(func=cmd_test_mean)

    p = sub.add_parser("test-mean-diff", help="difference of two normal means")
    for g in ("1", "2"):
        p.add_argument(f"--n{g}", type=int)
        p.add_argument(f"--mean{g}", type=float)
        p.add_argument(f"--sd{g}", type=float)
        p.add_argument(f"--data{g}")
    _add_normal_prior(p)
    _add_pair_args(p)
    _add_run_args(p)
    p.set_defaults(func=cmd_test_mean_diff)

    p = sub.add_parser("test-summary-ratio", help="ratio rebuilt from a reported estimate and CI")
    p.add_argument("--estimate", type=float, required=True)
    p.add_argument("--ci", nargs=2, type=float, required=True, metavar=("LOWER", "UPPER"))
    p.add_argument("--ci-level", type=float, default=0.95)
    p.add_argument("--prior-sd-log", type=float, default=DEFAULT_PRIOR_SD_LOG)
    _add_pair_args(p, log_scale=True)
    _add_run_args(p, mc=False)
    p.set_defaults(func=cmd_test_summary_ratio)

    for name, help_text in (("simulate-oc", "operating characteristics from a config file"),
                            ("simulate-bias", "selection-bias tables from a mean config file")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True)
        p.add_argument("--output", help="directory for the CSV files (stdout when omitted)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replicate", help="rerun a worked example or simulation table and check it")
    p.add_argument("which", choices=["example1", "example2", "example3", "or-consistency", "tables", "figures"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--draws", type=int, default=replication.ACCEPTANCE_DRAWS)
    p.add_argument("--n", type=int, action="append", help="table sample size (repeatable)")
    p.add_argument("--n-sims", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--prior-sd-log", type=float, default=DEFAULT_PRIOR_SD_LOG)
    p.add_argument("--output", help="directory for the report and CSV files")
    p.set_defaults(func=cmd_replicate)
    return parser


def _fail(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        return _fail("usage", str(exc), EXIT_INVALID)
    except ValidationError as exc:
        return _fail("validation", str(exc), EXIT_INVALID)
    except NumericalError as exc:
        return _fail("numerical", str(exc), EXIT_NUMERICAL)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_INVALID)


def run(argv=None) -> int:
    return main(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
