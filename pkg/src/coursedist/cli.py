"""Command-line front end.

Every subcommand computes through the library and emits plot-ready,
byte-reproducible CSV or JSON; --plot additionally renders a matplotlib
figure to a file alongside the delimited output.  Floats are written with
17 significant digits so the text output round-trips doubles exactly and
golden files double as numerical regressions.

Exit codes: 0 success, 1 validation/budget/file failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import mixture
from .asymptotic import EpsSchedule, binomial_pmf, convergence_study
from .chain import (
    BRUTE_FORCE_MAX_N,
    EnumerationBudgetError,
    ModelParams,
    ValidationError,
    brute_force_pmf,
    exact_marginals,
    exact_pmf,
    validate,
)
from .initial import InitialDistribution, TableFormatError, load_cdf_table, uniform01
from .montecarlo import sample_paths, tv_distance

__all__ = ["run", "main"]

SELF_CHECK_MAX_N = 12
SELF_CHECK_TOL = 1e-12


def _fmt(value) -> str:
    """One CSV cell: 17 significant digits for floats, plain text otherwise.

    Text cells containing a comma, quote, or newline are quoted per RFC 4180.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    text = str(value)
    if any(c in text for c in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def emit_csv(columns: list[str], rows: list[tuple]) -> str:
    """Header plus data rows, LF line endings, '.' decimal separator."""
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def emit_json(params: dict, columns: list[str], rows: list[tuple]) -> str:
    """Single JSON object with schema_version, params, rows; stable key order."""
    payload = {
        "schema_version": 1,
        "params": params,
        "rows": [dict(zip(columns, row)) for row in rows],
    }
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _comma_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")


def _comma_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_dist(spec: str) -> InitialDistribution:
    if spec in ("uniform", "uniform01"):
        return uniform01()
    with open(spec, "r") as fh:
        return load_cdf_table(fh.read())


def _model_args(p: argparse.ArgumentParser, eps_required: bool = True):
    p.add_argument("--n", type=int, required=True, help="number of sessions")
    p.add_argument("--q", type=float, required=True, help="quality parameter in (0,1)")
    p.add_argument("--eps", type=float, required=eps_required,
                   help="dependence parameter (>= 0)")


def _io_args(p: argparse.ArgumentParser, plot: bool = True):
    p.add_argument("--dist", default="uniform",
                   help="'uniform' or path to a CDF knot table (default: uniform)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    if plot:
        p.add_argument("--plot", default=None, metavar="FILE",
                       help="also render a figure to FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coursedist",
        description="Distribution of the number of understood sessions in a "
                    "course with session-to-session comprehension dependence.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("exact", help="exact pmf by dynamic programming")
    _model_args(p)
    _io_args(p)
    p.add_argument("--relaxed", action="store_true",
                   help="skip regime validation; clamp out-of-support thresholds")
    p.add_argument("--self-check", action="store_true",
                   help=f"cross-check against the enumeration oracle (n <= {SELF_CHECK_MAX_N})")

    p = sub.add_parser("oracle", help="exhaustive path-enumeration pmf (n <= 20)")
    _model_args(p)
    _io_args(p)

    p = sub.add_parser("marginals", help="per-session understanding probabilities")
    _model_args(p)
    _io_args(p)
    p.add_argument("--method", choices=("exact", "mixture", "theorem1", "closed"),
                   default="exact")
    p.add_argument("--relaxed", action="store_true",
                   help="skip regime validation (method=exact only)")

    p = sub.add_parser("approx", help="exact pmf against its binomial reference")
    _model_args(p)
    _io_args(p)

    p = sub.add_parser("converge", help="binomial-approximation study over a (q, n) grid")
    p.add_argument("--q", type=_comma_floats, required=True, metavar="Q1,Q2,...")
    p.add_argument("--n", type=_comma_ints, required=True, metavar="N1,N2,...")
    p.add_argument("--c", type=float, default=1.0, help="eps schedule scale (default 1)")
    p.add_argument("--eta", type=float, default=0.0,
                   help="eps schedule decay beyond n^-2 (default 0)")
    _io_args(p)

    p = sub.add_parser("simulate", help="seeded Monte Carlo estimate of the pmf")
    _model_args(p)
    _io_args(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("validate", help="check regime conditions for the parameters")
    _model_args(p)
    p.add_argument("--mode", choices=("strict", "hypothesis1", "relaxed"),
                   default="strict")
    _io_args(p, plot=False)
    return parser


def _pmf_rows(pmf: np.ndarray) -> list[tuple]:
    return [(k, float(v)) for k, v in enumerate(pmf)]


def _cmd_exact(args) -> int:
    d = _load_dist(args.dist)
    params = ModelParams(args.n, args.q, args.eps)
    pmf = exact_pmf(params, d, relaxed=args.relaxed)
    if args.self_check and args.n <= SELF_CHECK_MAX_N:
        oracle = brute_force_pmf(params, d)
        err = float(np.max(np.abs(pmf - oracle)))
        if err > SELF_CHECK_TOL:
            print(
                f"error: self-check failed: dynamic program and enumeration "
                f"oracle disagree by {err:.3e} (> {SELF_CHECK_TOL:.0e})",
                file=sys.stderr,
            )
            return 1
    meta = {"subcommand": "exact", "n": args.n, "q": args.q, "eps": args.eps,
            "dist": args.dist, "relaxed": args.relaxed}
    _emit_payload(args, meta, ["k", "probability"], _pmf_rows(pmf))
    if args.plot:
        from .figures import save_pmf_figure

        save_pmf_figure(args.plot, pmf,
                        f"exact pmf (n={args.n}, q={args.q:g}, eps={args.eps:g})")
    return 0


def _cmd_oracle(args) -> int:
    d = _load_dist(args.dist)
    params = ModelParams(args.n, args.q, args.eps)
    pmf = brute_force_pmf(params, d)
    meta = {"subcommand": "oracle", "n": args.n, "q": args.q, "eps": args.eps,
            "dist": args.dist}
    _emit_payload(args, meta, ["k", "probability"], _pmf_rows(pmf))
    if args.plot:
        from .figures import save_pmf_figure

        save_pmf_figure(args.plot, pmf,
                        f"enumeration pmf (n={args.n}, q={args.q:g}, eps={args.eps:g})")
    return 0


def _cmd_marginals(args) -> int:
    d = _load_dist(args.dist)
    params = ModelParams(args.n, args.q, args.eps)
    if args.method == "exact":
        values = exact_marginals(params, d, relaxed=args.relaxed)
    elif args.method == "closed":
        if d.kind != "uniform01":
            raise ValidationError(
                "--method closed requires the uniform distribution (--dist uniform)"
            )
        values = np.array(
            [mixture.uniform_marginal_closed(params, m) for m in range(1, args.n + 1)]
        )
    else:
        lattice = mixture.build_lattice(params, d)
        if args.method == "mixture":
            values = np.array(lattice.marginals)
        else:  # theorem1
            values = np.array(
                [mixture.theorem1_marginal(params, d, m, lattice)
                 for m in range(1, args.n + 1)]
            )
    rows = [(m, float(v)) for m, v in enumerate(values, start=1)]
    meta = {"subcommand": "marginals", "method": args.method, "n": args.n,
            "q": args.q, "eps": args.eps, "dist": args.dist}
    _emit_payload(args, meta, ["m", "probability"], rows)
    if args.plot:
        from .figures import save_marginals_figure

        save_marginals_figure(
            args.plot, values,
            f"{args.method} marginals (n={args.n}, q={args.q:g}, eps={args.eps:g})",
        )
    return 0


def _cmd_approx(args) -> int:
    d = _load_dist(args.dist)
    params = ModelParams(args.n, args.q, args.eps)
    exact = exact_pmf(params, d)
    ref = binomial_pmf(args.n, d.sf(1.0 - args.q))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = exact / ref
    rows = [(k, float(exact[k]), float(ref[k]), float(ratio[k]))
            for k in range(args.n + 1)]
    meta = {"subcommand": "approx", "n": args.n, "q": args.q, "eps": args.eps,
            "dist": args.dist, "p": d.sf(1.0 - args.q)}
    _emit_payload(args, meta, ["k", "exact", "binomial", "ratio"], rows)
    if args.plot:
        from .figures import save_comparison_figure

        save_comparison_figure(
            args.plot, exact, ref,
            f"exact vs binomial (n={args.n}, q={args.q:g}, eps={args.eps:g})",
        )
    return 0


def _cmd_converge(args) -> int:
    d = _load_dist(args.dist)
    schedule = EpsSchedule(c=args.c, eta=args.eta)
    report = convergence_study(args.q, args.n, schedule, d)
    columns = ["n", "q", "eps", "min_ratio", "max_abs_log_ratio", "tv",
               "min_ratio_central", "max_abs_log_ratio_central", "status"]
    rows = [
        (r.n, r.q, r.eps, r.min_ratio, r.max_abs_log_ratio, r.tv,
         r.min_ratio_central, r.max_abs_log_ratio_central,
         "ok" if r.ok else "invalid")
        for r in report.rows
    ]
    meta = {"subcommand": "converge", "q": args.q, "n": args.n,
            "c": args.c, "eta": args.eta, "dist": args.dist}
    _emit_payload(args, meta, columns, rows)
    if args.plot:
        from .figures import save_convergence_figure

        save_convergence_figure(
            args.plot, report,
            f"binomial approximation quality (eps = {args.c:g} * n^-{2 + args.eta:g})",
        )
    return 0


def _cmd_simulate(args) -> int:
    d = _load_dist(args.dist)
    params = ModelParams(args.n, args.q, args.eps)
    exact = exact_pmf(params, d)
    result = sample_paths(params, d, args.samples, args.seed, exact=exact)
    meta = {"subcommand": "simulate", "n": args.n, "q": args.q, "eps": args.eps,
            "dist": args.dist, "samples": args.samples, "seed": args.seed,
            "tv_to_exact": result.tv_to_exact}
    _emit_payload(args, meta, ["k", "probability"], _pmf_rows(result.empirical))
    if args.plot:
        from .figures import save_comparison_figure

        save_comparison_figure(
            args.plot, result.empirical, exact,
            f"empirical vs exact (n={args.n}, q={args.q:g}, eps={args.eps:g}, "
            f"samples={args.samples})",
        )
    return 0


def _cmd_validate(args) -> int:
    d = _load_dist(args.dist)
    params = ModelParams(args.n, args.q, args.eps)
    report = validate(params, args.mode, d)
    columns = ["mode", "ok", "violations", "notes"]
    rows = [(args.mode, report.ok,
             "; ".join(report.violations), "; ".join(report.notes))]
    meta = {"subcommand": "validate", "mode": args.mode, "n": args.n,
            "q": args.q, "eps": args.eps, "dist": args.dist}
    _emit_payload(args, meta, columns, rows)
    return 0 if report.ok else 1


def _emit_payload(args, meta: dict, columns: list[str], rows: list[tuple]) -> None:
    if args.format == "json":
        text = emit_json(meta, columns, rows)
    else:
        text = emit_csv(columns, rows)
    _write(text, args.out)


_HANDLERS = {
    "exact": _cmd_exact,
    "oracle": _cmd_oracle,
    "marginals": _cmd_marginals,
    "approx": _cmd_approx,
    "converge": _cmd_converge,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
}


def run(argv: list[str] | None = None) -> int:
    """Parse argv, dispatch, and return the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.subcommand](args)
    except (ValidationError, EnumerationBudgetError, TableFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
