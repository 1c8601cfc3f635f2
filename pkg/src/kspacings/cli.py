"""Command-line interface.

Subcommands: gamma (cdf / quantile / tail-bounds / tk), beta-plus,
sample-spacings, modulus, verify, conditions, experiment.  Numeric output is
plain text or JSON on stdout; tabular output is CSV.  Exit codes: 0 success,
2 usage error (argparse), 1 runtime error (domain violations, bad configs,
resource limits).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import experiment, gammaint, maps, modulus, regimes, sampling
from .errors import DomainError, KspacingsError


def _g(x: float) -> str:
    return "%.17g" % x


# ---------------------------------------------------------------- gamma


def _cmd_gamma_cdf(args: argparse.Namespace) -> int:
    value = gammaint.log_cdf(args.k, args.x) if args.log else gammaint.cdf(args.k, args.x)
    print(_g(value))
    return 0


def _cmd_gamma_quantile(args: argparse.Namespace) -> int:
    print(_g(gammaint.quantile(args.k, args.p)))
    return 0


def _cmd_gamma_tail_bounds(args: argparse.Namespace) -> int:
    lower, upper = gammaint.tail_bounds(args.k, args.x)
    print(
        json.dumps(
            {
                "k": args.k,
                "x": args.x,
                "lower": lower,
                "survival": gammaint.survival(args.k, args.x),
                "upper": upper,
            }
        )
    )
    return 0


def _cmd_gamma_tk(args: argparse.Namespace) -> int:
    gate = gammaint.tail_threshold(args.k, args.delta)
    print(
        json.dumps(
            {
                "k": gate.k,
                "delta": gate.delta,
                "log_value": gate.log_value,
                "value": gate.value,
            }
        )
    )
    return 0


# ---------------------------------------------------------------- beta-plus


def _cmd_beta_plus(args: argparse.Namespace) -> int:
    beta = regimes.erdos_renyi_beta(args.c)
    print(json.dumps({"beta": beta, "residual": regimes.beta_residual(beta, args.c)}))
    return 0


# ---------------------------------------------------------------- sampling


def _cmd_sample_spacings(args: argparse.Namespace) -> int:
    sample = sampling.sample_spacings(args.k, args.n, args.seed, replicate=args.replicate)
    header = {
        "k": sample.k,
        "N": sample.N,
        "n": sample.n,
        "mu": sample.mu,
        "seed": sample.seed,
    }
    w = gammaint.cdf_array(sample.k, (sample.N * sample.k) * sample.d)
    print(json.dumps(header))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["i", "Y", "D", "W"])
        for i in range(sample.N):
            writer.writerow([i + 1, _g(sample.y[i]), _g(sample.d[i]), _g(w[i])])
    finally:
        if args.out:
            out.close()
    return 0


# ---------------------------------------------------------------- modulus


def _read_path_values(source: str) -> np.ndarray:
    """Accept either one value per line or sample-spacings CSV output.

    A leading JSON header line is skipped; an i,Y,D,W table contributes its
    W column.  Values are sorted before the path is built.
    """
    stream = sys.stdin if source == "-" else open(source)
    try:
        lines = [ln.strip() for ln in stream if ln.strip()]
    finally:
        if source != "-":
            stream.close()
    if lines and lines[0].startswith("{"):
        lines = lines[1:]
    if not lines:
        raise DomainError(f"no path values found in {source!r}")
    if lines[0].replace(" ", "") == "i,Y,D,W":
        values = [float(ln.split(",")[3]) for ln in lines[1:]]
    else:
        values = [float(ln.split(",")[-1]) for ln in lines]
    return np.sort(np.asarray(values, dtype=np.float64))


def _window_json(window: tuple) -> list:
    return [str(window[0]), *map(int, window[1:])] if window and isinstance(window[0], str) else list(map(int, window))


def _cmd_modulus(args: argparse.Namespace) -> int:
    values = _read_path_values(args.path)
    path = modulus.EmpiricalPath(values)
    report = modulus.oscillation_modulus(path, args.a)
    payload: dict = {
        "N": path.N,
        "a": report.a,
        "lambda": report.lam,
        "pos_window": _window_json(report.pos_window),
        "neg_window": _window_json(report.neg_window),
    }
    if args.normalized:
        payload["b_n"] = report.b_n
        payload["k_n"] = report.k_n
    if args.theta:
        payload["theta"] = report.theta
    print(json.dumps(payload))
    return 0


# ---------------------------------------------------------------- verify


def _parse_mu(text: str | None):
    if text is None:
        return None
    parts = text.split(":")
    if parts[0] == "fixed" and len(parts) == 2:
        return maps.FixedMu(float(parts[1]))
    if parts[0] == "sim" and len(parts) == 3:
        return maps.SimulatedMu(seed=int(parts[1]), N=int(parts[2]))
    raise DomainError(
        f"bad --mu value {text!r}: expected fixed:<value> or sim:<seed>:<N>"
    )


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise DomainError(f"bad numeric list {text!r}") from exc


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise DomainError(f"bad integer list {text!r}") from exc


def _cmd_verify(args: argparse.Namespace) -> int:
    rows = maps.lemma_diagnostics(
        args.lemma,
        _parse_int_list(args.k),
        _parse_float_list(args.a_grid),
        mu_source=_parse_mu(args.mu),
        delta=args.delta,
    )
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(
        [
            "lemma",
            "k",
            "a",
            "log_a",
            "sup",
            "log_sup",
            "ratio",
            "argmax_h",
            "argmax_end",
            "alt_scale_log",
            "alt_ratio",
        ]
    )
    for k, a, rep in rows:
        writer.writerow(
            [
                args.lemma.upper(),
                k,
                _g(a),
                _g(rep.log_a),
                _g(rep.sup_value),
                _g(rep.log_sup),
                _g(rep.ratio),
                _g(rep.argmax_h),
                rep.argmax_end,
                "NA" if rep.alt_scale_log is None else _g(rep.alt_scale_log),
                "NA" if rep.alt_ratio is None else _g(rep.alt_ratio),
            ]
        )
    return 0


# ---------------------------------------------------------------- conditions


def _spec_from_flags(args: argparse.Namespace) -> regimes.RegimeSpec:
    k_mode, k, k_rule = "fixed", None, None
    if args.k == "grow":
        k_mode = "growing"
        k_rule = args.k_rule
    elif args.k.startswith("fixed:"):
        k = int(args.k.split(":", 1)[1])
    else:
        raise DomainError(f"bad --k value {args.k!r}: expected fixed:<k> or grow")
    return regimes.RegimeSpec(
        variant=args.regime,
        c=args.c,
        c_schedule=args.c_schedule,
        a_rule=args.a_rule,
        k_mode=k_mode,
        k=k,
        k_rule=k_rule,
        delta=args.delta,
    )


def _cmd_conditions(args: argparse.Namespace) -> int:
    spec = _spec_from_flags(args)
    reports = regimes.check_conditions(spec, _parse_int_list(args.n_grid))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(experiment.CONDITION_COLUMNS)
    for rep in reports:
        for n_spacings, value in zip(rep.n_grid, rep.values):
            writer.writerow(
                [
                    rep.condition,
                    n_spacings,
                    "NA" if math.isnan(value) else _g(value),
                    rep.required,
                    rep.verdict,
                ]
            )
    return 0


# ---------------------------------------------------------------- experiment


def _cmd_experiment(args: argparse.Namespace) -> int:
    config = experiment.load_config(args.config)
    result = experiment.run_experiment(config, threads=args.threads)
    out_dir = args.out_dir if args.out_dir else config.out_dir
    if out_dir is not None:
        for path in experiment.persist(result, out_dir):
            print(path)
    else:
        experiment.write_summary_csv(sys.stdout, result.summary)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kspacings",
        description="k-spacings empirical processes: gamma kernels, "
        "oscillation moduli, and Monte Carlo trend campaigns.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    gamma = sub.add_parser("gamma", help="integer-shape gamma distribution kernels")
    gsub = gamma.add_subparsers(dest="gamma_command", required=True)

    g_cdf = gsub.add_parser("cdf", help="P(Gamma(k) <= x)")
    g_cdf.add_argument("--k", type=int, required=True)
    g_cdf.add_argument("--x", type=float, required=True)
    g_cdf.add_argument("--log", action="store_true", help="emit log cdf")
    g_cdf.set_defaults(func=_cmd_gamma_cdf)

    g_q = gsub.add_parser("quantile", help="x with P(Gamma(k) <= x) = p")
    g_q.add_argument("--k", type=int, required=True)
    g_q.add_argument("--p", type=float, required=True)
    g_q.set_defaults(func=_cmd_gamma_quantile)

    g_tb = gsub.add_parser("tail-bounds", help="survival sandwich at x > k")
    g_tb.add_argument("--k", type=int, required=True)
    g_tb.add_argument("--x", type=float, required=True)
    g_tb.set_defaults(func=_cmd_gamma_tail_bounds)

    g_tk = gsub.add_parser("tk", help="deep-tail bandwidth threshold t_k(delta)")
    g_tk.add_argument("--k", type=int, required=True)
    g_tk.add_argument("--delta", type=float, required=True)
    g_tk.set_defaults(func=_cmd_gamma_tk)

    bp = sub.add_parser("beta-plus", help="increment-rate root beta+(c)")
    bp.add_argument("--c", type=float, required=True)
    bp.set_defaults(func=_cmd_beta_plus)

    ss = sub.add_parser("sample-spacings", help="simulate one spacings replicate")
    ss.add_argument("--k", type=int, required=True)
    ss.add_argument("--n", type=int, required=True, help="number of spacings N")
    ss.add_argument("--seed", type=int, required=True)
    ss.add_argument("--replicate", type=int, default=0)
    ss.add_argument("--out", help="write the CSV here instead of stdout")
    ss.set_defaults(func=_cmd_sample_spacings)

    mo = sub.add_parser("modulus", help="exact oscillation modulus of a sorted path")
    mo.add_argument("--path", default="-", help="CSV file of values, or - for stdin")
    mo.add_argument("--a", type=float, required=True, help="bandwidth")
    mo.add_argument("--normalized", action="store_true", help="include k_n and b_n")
    mo.add_argument("--theta", action="store_true", help="include the one-sided theta")
    mo.set_defaults(func=_cmd_modulus)

    ve = sub.add_parser("verify", help="increment-supremum diagnostics for the maps")
    ve.add_argument("--lemma", required=True, choices=["a1", "a2", "a3", "a4", "p1"])
    ve.add_argument("--k", required=True, help="comma-separated orders, e.g. 2,3")
    ve.add_argument("--a-grid", required=True, help="decreasing bandwidths, e.g. 1e-2,1e-4")
    ve.add_argument("--delta", type=float, help="deep-tail exponent (a3/a4/p1)")
    ve.add_argument("--mu", help="fixed:<value> or sim:<seed>:<N> (a1/a3)")
    ve.set_defaults(func=_cmd_verify)

    co = sub.add_parser("conditions", help="growth-condition trend verdicts")
    co.add_argument("--regime", required=True, choices=["I", "II", "III", "IV"])
    co.add_argument("--c", type=float)
    co.add_argument("--c-schedule", dest="c_schedule")
    co.add_argument("--a-rule", dest="a_rule", help="variant I schedule, pow:<exponent>")
    co.add_argument("--k", required=True, help="fixed:<k> or grow")
    co.add_argument("--k-rule", dest="k_rule")
    co.add_argument("--delta", type=float)
    co.add_argument("--n-grid", dest="n_grid", required=True, help="e.g. 1000,10000")
    co.set_defaults(func=_cmd_conditions)

    ex = sub.add_parser("experiment", help="run a Monte Carlo campaign from JSON config")
    ex.add_argument("--config", required=True)
    ex.add_argument("--threads", type=int, default=0, help="worker cap, 0 = auto")
    ex.add_argument("--out-dir", dest="out_dir", help="override the config out_dir")
    ex.set_defaults(func=_cmd_experiment)

    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KspacingsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
