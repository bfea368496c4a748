"""Command-line front end.

Verbs: analyze, bound, compare, simulate, transport, and apps with the
sub-verbs regress, portfolio, covgeo and median.  Every verb writes one
key-ordered document to stdout (and to ``--out`` when given).

Exit codes: 0 success, 1 input error, 2 bound-domination failure,
3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import apps, bounds, montecarlo
from .diffeo import BoxCox, Identity, Log, parse_transform, push
from .errors import InsufficientData, InvalidArgument, NumericalError, ParseError, PsiConcError
from .measure import EmpiricalMeasure, SupportInterval
from .optimize import Estimator, concentration_functional, select_optimal_transform
from .report import ReportDocument
from .transport import psi_wasserstein

EXIT_OK, EXIT_INPUT, EXIT_DOMINATION, EXIT_NUMERIC = 0, 1, 2, 3


# input files

def read_columns(path, names=None) -> dict:
    """Read numeric columns from a headed UTF-8 CSV.

    Any empty or non-numeric cell in a requested column raises
    :class:`ParseError` naming its line; rows are never skipped.
    """
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open {path}: {exc.strerror}")
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(f"{path} is empty", line=1)
        if names is None:
            names = header[:1]
        missing = [n for n in names if n not in header]
        if missing:
            raise ParseError(f"column(s) {missing} not in header {header}", line=1)
        idx = {n: header.index(n) for n in names}
        cols = {n: [] for n in names}
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            for n, i in idx.items():
                cell = row[i].strip() if i < len(row) else ""
                if not cell:
                    raise ParseError(f"missing value in column {n!r}", line=line)
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(f"non-numeric value {cell!r} in column {n!r}", line=line)
                if not math.isfinite(v):
                    raise ParseError(f"non-finite value {cell!r} in column {n!r}", line=line)
                cols[n].append(v)
    return {n: np.asarray(v) for n, v in cols.items()}


def _read_one(path, column) -> np.ndarray:
    cols = read_columns(path, None if column is None else [column])
    return next(iter(cols.values()))


# verbs

def cmd_analyze(args) -> ReportDocument:
    x = _read_one(args.input, args.column)
    if x.size < 10:
        raise InsufficientData(f"analyze needs at least 10 rows, got {x.size}")
    m = EmpiricalMeasure.from_samples(x)
    est = Estimator(args.estimator)
    sel = select_optimal_transform([m], estimator=est)
    best = sel.best
    doc = ReportDocument("analyze", seed=args.seed,
                         inputs={"file": str(args.input), "column": args.column, "rows": int(x.size),
                                 "estimator": est.value})
    res = {
        "transform": best.label,
        "lambda_hat": sel.lam_hat if isinstance(best.base, BoxCox) else None,
        "boxcox_equivalent_lambda": sel.lam_hat,
        "selection_score": sel.value,
        "functional": {
            "range": concentration_functional(m, best, "range"),
            "mgf": concentration_functional(m, best, "mgf"),
        },
        "functional_identity": {
            "range": concentration_functional(m, Identity(), "range"),
            "mgf": concentration_functional(m, Identity(), "mgf"),
        },
        "candidates": [{"transform": t.label, "score": v} for t, v in sel.table],
    }
    lo, hi = float(x.min()), float(x.max())
    if lo > 0 and hi > lo:
        rec = bounds.recommend_coordinate(SupportInterval(lo, hi))
        res["recommendation"] = {
            "support": [lo, hi],
            "choice": rec.choice.label,
            "normalized_ratio": rec.ratio,
            "identity_constant": rec.identity_constant,
            "log_constant": rec.log_constant,
            "raw_ratio": rec.raw_ratio,
            "threshold_choice": rec.threshold_choice.label,
            "stated_threshold": rec.stated_threshold,
        }
        if rec.choice != rec.threshold_choice:
            doc.warnings.append(
                f"formula prefers {rec.choice.label} (ratio {rec.ratio:.6g}) but the published "
                f"cut-off b/a > e^2 picks {rec.threshold_choice.label}")
    doc.results = res
    doc.formulas = {
        "selection_score": "sup-Gaussian estimate of psi(X) divided by Var psi(X); argmin over candidates",
        "range": "(max psi(x) - min psi(x))^2 / 4",
        "mgf": "max over lambda*range in +-logspace(-2, 2, 41) of 2 log E exp(lambda (psi(X) - E psi(X))) / lambda^2",
        "normalized_ratio": "((r - 1) / log r)^2, r = max/min (identity vs log Hoeffding constant at a = 1)",
    }
    return doc


def cmd_compare(args) -> ReportDocument:
    a, b = args.a, args.b
    if not 0 < a < b:
        raise InvalidArgument("compare needs 0 < a < b")
    iv = SupportInterval(a, b)
    rho = bounds.improvement_factor(iv)
    rec = bounds.recommend_coordinate(iv)
    r = b / a
    doc = ReportDocument("compare", seed=args.seed, inputs={"a": a, "b": b})
    doc.results = {
        "ratio_b_over_a": r,
        "identity_hoeffding_constant": rec.identity_constant,
        "log_hoeffding_constant": rec.log_constant,
        "improvement_factor": rho,
        "normalized_ratio": rec.ratio,
        "recommendation": rec.choice.label,
        "threshold_recommendation": rec.threshold_choice.label,
    }
    doc.formulas = {
        "hoeffding_constant": "(psi(b) - psi(a))^2 / 4",
        "improvement_factor": "rho(a, b) = (b - a)^2 / log(b / a)^2",
        "normalized_ratio": "((r - 1) / log r)^2, the improvement factor with a = 1",
    }
    claimed = bounds.claimed_improvement(r)
    if claimed is not None:
        rel = abs(rho - claimed) / claimed
        doc.results["claimed_improvement"] = claimed
        doc.results["claimed_relative_difference"] = rel
        verdict = "consistent within 1%" if rel <= 0.01 else "DISCREPANCY"
        doc.warnings.append(
            f"published value for b/a = {r:.6g} is approximately {claimed:g}; "
            f"formula gives {rho:.6g} ({verdict})")
        if a != 1:
            doc.warnings.append("published values assume a = 1; rho scales with a^2 at fixed b/a")
    if rec.choice != rec.threshold_choice:
        doc.warnings.append(
            "published cut-off b/a > e^2 disagrees with the formula comparison; "
            "(r - 1) / log r > 1 for every r > 1")
    return doc


def cmd_bound(args) -> ReportDocument:
    t = parse_transform(args.transform)
    iv = SupportInterval(args.a, args.b)
    stat = args.statistic
    doc = ReportDocument("bound", seed=args.seed,
                         inputs={"transform": t.label, "a": args.a, "b": args.b, "n": args.n,
                                 "statistic": stat, "t": args.t})
    rows = []
    if stat == "sum":
        rep = bounds.hoeffding_report(t, iv, args.n)
        doc.results["hoeffding_constant"] = bounds.hoeffding_constant(t, iv)
        doc.results["sigma_sq"] = rep.sigma_sq
        for x in args.t:
            rows.append({"t": x, "bound": rep.bound_at(x)})
        doc.formulas["bound"] = "min(1, 2 exp(-2 t^2 / (n (psi(b) - psi(a))^2)))"
    elif stat == "product":
        for x in args.t:
            lb, cb = bounds.product_tail_bound([iv] * args.n, x)
            rows.append({"t": x, "log_bound": lb, "classical_bound": cb})
        doc.formulas["log_bound"] = "min(1, 2 exp(-2 t^2 / sum log^2(b_i / a_i)))"
        doc.formulas["classical_bound"] = "min(1, 2 exp(-2 t^2 / sum (b_i - a_i)^2 / a_i^2))"
    else:
        mode = "log" if isinstance(t.base, Log) else "identity"
        for x in args.t:
            rows.append({"t": x,
                         "published_bound": bounds.max_tail_bound(args.n, iv, x, mode),
                         "bounded_differences_bound": bounds.max_tail_bound_mcdiarmid(args.n, iv, x, mode)})
        doc.formulas["published_bound"] = "min(1, exp(-2 n t^2 / w^2))"
        doc.formulas["bounded_differences_bound"] = "min(1, exp(-2 t^2 / (n w^2)))"
        doc.warnings.append("the published maximum bound is not implied by bounded differences; "
                            "it can fail for heavy-tailed laws (see bounded_differences_bound)")
    doc.results["rows"] = rows
    return doc


def cmd_simulate(args) -> ReportDocument:
    spec = montecarlo.make_spec(args.dist, *args.params)
    t = parse_transform(args.transform)
    res = montecarlo.verify_bound(spec, args.n_vars, args.statistic, t, t_grid=args.t_grid,
                                  n_reps=args.reps, seed=args.seed, workers=args.workers)
    doc = ReportDocument("simulate", seed=args.seed,
                         inputs={"dist": args.dist, "params": list(args.params), "n_vars": args.n_vars,
                                 "statistic": res.statistic, "transform": res.transform,
                                 "reps": args.reps, "t_grid": res.t_grid})
    doc.results = {
        "rows": [{"t": t_, "empirical": p, "bound": b, "stderr": s, "dominated": ok}
                 for t_, p, b, s, ok in zip(res.t_grid, res.empirical_tail, res.bound,
                                            res.stderr, res.dominated)],
        "center": res.center,
        "center_stderr": res.center_stderr,
        "sigma_sq_hat": res.sigma_sq_hat,
        "status": "PASS" if res.passed else "FAIL",
    }
    doc.formulas = {
        "empirical": "fraction of replications with |T - center| >= t",
        "dominated": "empirical <= bound + 3 sqrt(p (1 - p) / reps)",
        "center": "replication median for max, replication mean otherwise",
    }
    if not res.passed:
        doc.warnings.append(res.summary())
    return doc


def cmd_transport(args) -> ReportDocument:
    t = parse_transform(args.transform)
    mu = EmpiricalMeasure.from_samples(_read_one(args.file_a, args.column))
    nu = EmpiricalMeasure.from_samples(_read_one(args.file_b, args.column))
    d = psi_wasserstein(mu, nu, t, args.p)
    d_check = psi_wasserstein(push(mu, t), push(nu, t), Identity(), args.p)
    doc = ReportDocument("transport", seed=args.seed,
                         inputs={"file_a": str(args.file_a), "file_b": str(args.file_b),
                                 "transform": t.label, "p": args.p})
    doc.results = {"distance": d, "pushforward_check": d_check,
                   "pushforward_difference": abs(d - d_check)}
    doc.formulas = {"distance": "(int_0^1 |psi(Q_mu(u)) - psi(Q_nu(u))|^p du)^(1/p)",
                    "pushforward_check": "W_p of the pushed-forward samples in identity coordinates"}
    return doc


def cmd_apps(args) -> ReportDocument:
    sub = args.app
    doc = ReportDocument(f"apps {sub}", seed=args.seed)
    if sub == "regress":
        names = [args.response] + list(args.predictors or [])
        cols = read_columns(args.input, names if args.predictors else None)
        if not args.predictors:
            raise InvalidArgument("regress needs --predictors")
        y = cols[args.response]
        X = np.column_stack([cols[p] for p in args.predictors])
        labels = list(args.predictors)
        if args.intercept:
            X = np.column_stack([np.ones(y.size), X])
            labels = ["intercept"] + labels
        fit = apps.log_linear_fit(X, y)
        doc.inputs = {"file": str(args.input), "response": args.response, "predictors": labels}
        doc.results = {"beta_hat": dict(zip(labels, fit.beta_hat.tolist())),
                       "sigma_sq_hat": fit.sigma_sq_hat, "lambda_min": fit.lambda_min}
        if args.t is not None and fit.sigma_sq_hat > 0:
            doc.results["deviation_bound"] = apps.regression_deviation_bound(
                X.shape[1], y.size, fit.lambda_min, fit.sigma_sq_hat, args.t)
        doc.formulas = {"beta_hat": "argmin sum (log y_i - <x_i, beta>)^2 via Cholesky of X^T X",
                        "deviation_bound": "min(1, 2 p exp(-n t^2 lambda_min / (2 sigma^2)))"}
    elif sub == "portfolio":
        b, cap = apps.portfolio_bound(args.delta, args.n, args.t, args.sigma_log_sq)
        doc.inputs = {"delta": args.delta, "n": args.n, "t": args.t, "sigma_log_sq": args.sigma_log_sq}
        doc.results = {"bound": b, "sigma_cap": cap}
        doc.formulas = {"sigma_cap": "delta^2 / (1 - delta)^2",
                        "bound": "min(1, exp(-t^2 / (2 sigma_log^2)))"}
    elif sub == "covgeo":
        try:
            mats = json.loads(Path(args.input).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read matrices from {args.input}: {exc}")
        G = apps.geometric_mean_covariance([np.asarray(m, dtype=float) for m in mats])
        doc.inputs = {"file": str(args.input), "count": len(mats)}
        doc.results = {"geometric_mean": G}
        doc.formulas = {"geometric_mean": "exp((1/n) sum log Sigma_i), symmetric Jacobi eigensolver"}
    elif sub == "median":
        t = parse_transform(args.transform)
        x = _read_one(args.input, args.column)
        doc.inputs = {"file": str(args.input), "column": args.column, "transform": t.label}
        doc.results = {"psi_median": apps.psi_median(x, t), "median_identity": apps.psi_median(x, Identity())}
        doc.formulas = {"psi_median": "psi^-1(median psi(x_i)), midpoint of middle pair for even n"}
    return doc


# argument parsing

def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(42), help="random seed (default 42)")
    p.add_argument("--reps", type=int, default=d(100_000), help="Monte Carlo replications")
    p.add_argument("--out", type=Path, default=d(None), help="also write the report here")
    p.add_argument("--format", choices=("json", "table"), default=d("json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psiconc", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", parents=[common], help="choose coordinates for a data column")
    p.add_argument("input", type=Path)
    p.add_argument("--column")
    p.add_argument("--estimator", choices=("mgf", "range"), default="mgf")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bound", parents=[common], help="closed-form tail bounds")
    p.add_argument("--transform", default="identity")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--t", type=float, nargs="+", default=[0.0, 1.0])
    p.add_argument("--statistic", choices=montecarlo.STATISTICS, default="sum")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("compare", parents=[common], help="identity vs log Hoeffding constants")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of a bound")
    p.add_argument("--dist", required=True)
    p.add_argument("--params", type=float, nargs="+", required=True)
    p.add_argument("--n-vars", type=int, default=50)
    p.add_argument("--statistic", choices=montecarlo.STATISTICS, default="sum")
    p.add_argument("--transform", default="identity")
    p.add_argument("--t-grid", type=float, nargs="+")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("transport", parents=[common], help="psi-Wasserstein distance of two files")
    p.add_argument("file_a", type=Path)
    p.add_argument("file_b", type=Path)
    p.add_argument("--column")
    p.add_argument("--transform", default="identity")
    p.add_argument("--p", type=float, default=1.0)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("apps", parents=[common], help="applied estimators")
    apps_sub = p.add_subparsers(dest="app", required=True)
    q = apps_sub.add_parser("regress", parents=[common])
    q.add_argument("input", type=Path)
    q.add_argument("--response", required=True)
    q.add_argument("--predictors", nargs="+")
    q.add_argument("--intercept", action="store_true")
    q.add_argument("--t", type=float)
    q = apps_sub.add_parser("portfolio", parents=[common])
    q.add_argument("--delta", type=float, required=True)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--t", type=float, default=0.0)
    q.add_argument("--sigma-log-sq", type=float)
    q = apps_sub.add_parser("covgeo", parents=[common])
    q.add_argument("input", type=Path, help="JSON list of square matrices")
    q = apps_sub.add_parser("median", parents=[common])
    q.add_argument("input", type=Path)
    q.add_argument("--column")
    q.add_argument("--transform", default="log")
    p.set_defaults(func=cmd_apps)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PsiConcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"internal numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = doc.render(args.format)
    sys.stdout.write(text)
    if args.out is not None:
        Path(args.out).write_text(text, encoding="utf-8")
    if doc.results.get("status") == "FAIL":
        return EXIT_DOMINATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
