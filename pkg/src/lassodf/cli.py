"""Command-line interface.

Subcommands: path, select, df-curve, verify-df, conjecture-bias.  Each writes
a delimited report (floats serialized with full round-trip precision) and a
companion PNG figure next to it.

Exit codes: 0 success, 2 input/data error, 3 path degeneracy, 4 convergence
failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import data, montecarlo, plots, selection
from .exceptions import ConvergenceError, DataError, DegeneracyError, RankDeficiencyError
from .path import compute_path, fit_at

EXIT_OK = 0
EXIT_DATA = 2
EXIT_DEGENERATE = 3
EXIT_CONVERGENCE = 4


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path_out, header, rows):
    with open(path_out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _load_design(args) -> data.StandardizedDataset:
    raw = data.load_csv(args.input, args.response)
    if args.expand_quadratic:
        ds = data.expand_standardized(raw)
    else:
        ds = data.standardize(raw)
    data.check_full_rank(ds)
    return ds


def _sigma2(args, ds) -> float:
    if args.sigma2 is not None:
        if args.sigma2 <= 0:
            raise DataError("--sigma2 must be positive")
        return args.sigma2
    return selection.estimate_sigma2(ds.X, ds.y)


def _lambda_grid(spec: str, path) -> np.ndarray:
    if spec == "transitions":
        return path.transition_lambdas.copy()
    try:
        vals = np.array([float(tok) for tok in spec.split(",") if tok.strip()])
    except ValueError:
        raise DataError(f"bad --lambdas value {spec!r}") from None
    if vals.size == 0 or np.any(vals < 0):
        raise DataError("--lambdas must be nonnegative numbers or 'transitions'")
    return np.sort(vals)[::-1]


def _synthetic_model(args, ds) -> montecarlo.SyntheticModel:
    beta_ols, *_ = np.linalg.lstsq(ds.X, ds.y, rcond=None)
    sigma = float(np.sqrt(selection.estimate_sigma2(ds.X, ds.y))) * args.sigma_scale
    return montecarlo.SyntheticModel(X=ds.X, beta_true=beta_ols, sigma=sigma)


def cmd_path(args) -> int:
    ds = _load_design(args)
    path = compute_path(ds.X, ds.y, max_steps=args.max_steps)
    out = Path(args.output)
    sizes = montecarlo.transition_active_sizes(path)
    rows = []
    for m, lam in enumerate(path.transition_lambdas):
        if m < len(path.events):
            kind, idx = path.events[m]
        else:
            kind, idx = "end", -1
        rows.append((m, float(lam), kind, idx, int(sizes[m])))
    _write_csv(out, ["m", "lambda", "event_type", "event_index", "active_size"], rows)

    coef_rows = []
    for lam in path.transition_lambdas:
        beta = fit_at(path, float(lam)).beta
        coef_rows.append([float(lam)] + [float(b) for b in beta])
    coef_path = out.with_name(out.stem + "_coefficients" + out.suffix)
    _write_csv(coef_path, ["lambda"] + list(ds.names), coef_rows)
    plots.plot_coefficient_paths(path, ds.names, out.with_suffix(".png"))
    print(f"{len(path.transition_lambdas)} transition values, lambda_max={_fmt(path.lambda_max)}")
    print(f"wrote {out}, {coef_path}, {out.with_suffix('.png')}")
    return EXIT_OK


def _criterion_rows(path, n, sigma2):
    from .path import transition_fit

    rows = []
    for m in range(path.n_transitions):
        fit = transition_fit(path, m)
        rows.append(
            (
                m,
                float(path.transition_lambdas[m]),
                fit.rss,
                fit.df_hat,
                selection.cp(fit.rss, fit.df_hat, n, sigma2),
                selection.aic(fit.rss, fit.df_hat, n, sigma2),
                selection.bic(fit.rss, fit.df_hat, n, sigma2),
            )
        )
    return rows


def cmd_select(args) -> int:
    ds = _load_design(args)
    path = compute_path(ds.X, ds.y, max_steps=args.max_steps)
    sigma2 = _sigma2(args, ds)
    report = selection.select_optimal(path, args.criterion, sigma2)

    rows = _criterion_rows(path, ds.n, sigma2)
    argmins = {
        crit: int(np.argmin([r[col] for r in rows]))
        for crit, col in (("cp", 4), ("aic", 5), ("bic", 6))
    }
    out_rows = [
        tuple(r) + tuple(int(argmins[c] == r[0]) for c in ("cp", "aic", "bic"))
        for r in rows
    ]
    out = Path(args.output)
    _write_csv(
        out,
        ["m", "lambda", "rss", "df_hat", "cp", "aic", "bic", "chosen_cp", "chosen_aic", "chosen_bic"],
        out_rows,
    )
    plots.plot_criterion_curve(report, out.with_suffix(".png"))

    nonzero = [ds.names[j] for j in np.nonzero(report.chosen_beta)[0]]
    print(f"criterion={args.criterion} sigma2={_fmt(sigma2)}")
    print(f"chosen lambda={_fmt(report.chosen_lambda)} df={report.chosen_df}")
    print(f"{report.chosen_df} nonzero coefficients: {', '.join(nonzero)}")
    return EXIT_OK


def cmd_df_curve(args) -> int:
    ds = _load_design(args)
    path = compute_path(ds.X, ds.y, max_steps=args.max_steps)
    sigma2 = _sigma2(args, ds)
    grid = _lambda_grid(args.lambdas, path)
    rows = []
    for lam in grid:
        fit = fit_at(path, float(lam))
        rows.append(
            (
                float(lam),
                fit.rss,
                fit.df_hat,
                selection.cp(fit.rss, fit.df_hat, ds.n, sigma2),
                selection.aic(fit.rss, fit.df_hat, ds.n, sigma2),
                selection.bic(fit.rss, fit.df_hat, ds.n, sigma2),
            )
        )
    out = Path(args.output)
    _write_csv(out, ["lambda", "rss", "df_hat", "cp", "aic", "bic"], rows)
    plots.plot_df_curve(rows, out.with_suffix(".png"))
    print(f"wrote {out} ({len(rows)} grid points)")
    return EXIT_OK


def cmd_verify_df(args) -> int:
    ds = _load_design(args)
    model = _synthetic_model(args, ds)
    grid = montecarlo.pilot_lambda_grid(model, args.seed)
    report = montecarlo.estimate_df_mc(model, grid, args.replications, args.seed)
    summary = montecarlo.unbiasedness_report(report)
    out = Path(args.output)
    rows = [
        (
            float(report.lambdas[i]),
            float(report.df_mc[i]),
            float(report.e_active[i]),
            float(report.bias[i]),
            float(report.se[i]),
            float(summary.ci_lo[i]),
            float(summary.ci_hi[i]),
        )
        for i in range(len(report.lambdas))
    ]
    _write_csv(out, ["lambda", "df_mc", "e_active", "bias", "se", "ci_lo", "ci_hi"], rows)
    plots.plot_unbiasedness(report, summary, out.with_suffix(".png"))
    print(f"replications={report.B} skipped={report.skipped}")
    print(f"coverage fraction of zero by 95% intervals: {summary.coverage_fraction}")
    return EXIT_OK


def cmd_conjecture_bias(args) -> int:
    ds = _load_design(args)
    model = _synthetic_model(args, ds)
    report = montecarlo.conjecture_bias_report(model, args.replications, args.seed)
    out = Path(args.output)
    _write_csv(
        out,
        ["k", "df_mc", "bias", "se", "n_valid_replications"],
        report.rows,
    )
    plots.plot_conjecture_bias(report, out.with_suffix(".png"))
    finite = [r for r in report.rows if np.isfinite(r[2])]
    if finite:
        worst = max(finite, key=lambda r: abs(r[2]))
        print(f"max |bias| = {_fmt(abs(worst[2]))} at k={worst[0]}")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lassodf", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, mc=False):
        p.add_argument("--input", required=True, help="CSV file with a header row")
        p.add_argument("--response", default="y", help="response column name")
        p.add_argument("--output", required=True, help="output CSV path")
        p.add_argument("--expand-quadratic", action="store_true",
                       help="use the quadratic/interaction expansion of the predictors")
        p.add_argument("--max-steps", type=int, default=None)
        p.add_argument("--sigma2", type=float, default=None,
                       help="known noise variance (default: estimate from the full OLS fit)")
        if mc:
            p.add_argument("--replications", type=int, default=2000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--sigma-scale", type=float, default=1.0,
                           help="multiply the OLS noise level (0.1 gives the high signal/noise regime)")

    p = sub.add_parser("path", help="export the full regularization path")
    common(p)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("select", help="pick the optimal model by Cp/AIC/BIC")
    common(p)
    p.add_argument("--criterion", choices=selection.CRITERIA, default="cp")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("df-curve", help="criterion and df curves on a lambda grid")
    common(p)
    p.add_argument("--lambdas", default="transitions",
                   help="comma-separated lambda values, or 'transitions'")
    p.set_defaults(func=cmd_df_curve)

    p = sub.add_parser("verify-df", help="Monte Carlo unbiasedness report")
    common(p, mc=True)
    p.set_defaults(func=cmd_verify_df)

    p = sub.add_parser("conjecture-bias", help="per-k bias of df=k at the last k-predictor step")
    common(p, mc=True)
    p.set_defaults(func=cmd_conjecture_bias)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DataError, RankDeficiencyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DegeneracyError as exc:
        print(f"degenerate path: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
