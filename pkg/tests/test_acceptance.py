"""Acceptance suite: one test per contract-level guarantee.

Each test prints a single PASS/FAIL line (visible with pytest -s) plus the
measurements backing it.  test_binomial_ratio_threshold is expected to
fail: it asserts a 0.95 lower bound on the pointwise probability ratio that
the measurements show holds only for q near 1/2 under the eps = 1/n^2
schedule; the test documents the measured minima rather than weakening the
bound.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from coursedist.asymptotic import EpsSchedule, binomial_pmf, convergence_study
from coursedist.chain import (
    ModelParams,
    brute_force_pmf,
    exact_marginals,
    exact_pmf,
)
from coursedist.cli import run
from coursedist.mixture import (
    build_lattice,
    theorem1_marginal,
    uniform_marginal_closed,
    uniform_sf_closed,
)
from coursedist.montecarlo import sample_paths

from test_cli import GOLDEN_INVOCATIONS, GOLDEN

QS = [round(0.1 * i, 1) for i in range(1, 10)]


def _report(name: str, ok: bool, detail: str = ""):
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}{' - ' if detail else ''}{detail}")


def _eps_values(n: int, q: float, q2: float | None = None) -> list[float]:
    """eps grid {0, a fifth of the regime bound, the bound itself}.

    The boundary value is nudged down by ulps until (n-1)*eps <= bound holds
    in floating point (division then remultiplication can round one ulp
    high), for every quality value that will share this eps.
    """
    bounds = [min(q, 1 - q)]
    if q2 is not None:
        bounds.append(min(q2, 1 - q2))
    b = min(bounds)
    if n == 1:
        return [0.0, 0.2 * b, b]
    eps = b / (n - 1)
    while any((n - 1) * eps > bb for bb in bounds):
        eps = math.nextafter(eps, 0.0)
    return [0.0, 0.2 * b / (n - 1), eps]


def test_oracle_equivalence_grid(uniform, table_dist):
    """Dynamic program equals exhaustive enumeration to 1e-12 on the grid."""
    start = time.monotonic()
    worst = 0.0
    cells = 0
    for d in (uniform, table_dist):
        for q in QS:
            for n in range(1, 13):
                for eps in _eps_values(n, q):
                    params = ModelParams(n, q, eps)
                    gap = float(
                        np.max(np.abs(exact_pmf(params, d) - brute_force_pmf(params, d)))
                    )
                    worst = max(worst, gap)
                    cells += 1
    elapsed = time.monotonic() - start
    ok = worst <= 1e-12 and elapsed < 30.0
    _report(
        "oracle-equivalence",
        ok,
        f"max|diff| = {worst:.2e} over {cells} cells in {elapsed:.1f}s",
    )
    assert worst <= 1e-12
    assert elapsed < 30.0


def test_boundary_recursion_products(uniform, table_dist):
    """All-miss and all-understand masses equal their closed products (n <= 50)."""
    worst = 0.0
    for d in (uniform, table_dist):
        for q in (0.3, 0.62):
            for n in range(1, 51):
                eps = 0.9 * min(q, 1 - q) / max(n - 1, 1)
                pmf = exact_pmf(ModelParams(n, q, eps), d)
                prod_fail = math.prod(d.cdf(1 - q + j * eps) for j in range(n))
                prod_succ = math.prod(d.sf(1 - q - j * eps) for j in range(n))
                worst = max(worst, abs(pmf[0] - prod_fail), abs(pmf[n] - prod_succ))
    ok = worst <= 1e-12
    _report("boundary-recursions", ok, f"max|diff| = {worst:.2e}")
    assert ok


def test_uniform_closed_forms(uniform):
    """Closed form = mixture = telescoped formula = exact marginals (n <= 50)."""
    n = 50
    worst_marginal = 0.0
    worst_lattice = 0.0
    for q in (0.2, 0.5, 0.7):
        bound = min(q, 1 - q) / (n - 1)
        for eps in (0.0, 0.5 * bound, 0.999 * bound):
            params = ModelParams(n, q, eps)
            lattice = build_lattice(params, uniform)
            exact = exact_marginals(params, uniform)
            for m in range(1, n + 1):
                closed = uniform_marginal_closed(params, m)
                worst_marginal = max(
                    worst_marginal,
                    abs(closed - lattice.marginal(m)),
                    abs(closed - exact[m - 1]),
                    abs(closed - theorem1_marginal(params, uniform, m, lattice)),
                )
            for i in range(1, n + 1):
                for m in range(-(n - i), n - i + 1):
                    worst_lattice = max(
                        worst_lattice,
                        abs(uniform_sf_closed(params, i, m) - lattice.sf_value(i, -m)),
                    )
        # at the exact regime boundary the telescoped route is out of scope
        # (it needs the strict inequality); the other three must still agree
        params = ModelParams(n, q, bound)
        lattice = build_lattice(params, uniform)
        exact = exact_marginals(params, uniform)
        for m in range(1, n + 1):
            closed = uniform_marginal_closed(params, m)
            worst_marginal = max(
                worst_marginal,
                abs(closed - lattice.marginal(m)),
                abs(closed - exact[m - 1]),
            )
    ok = worst_marginal <= 1e-10 and worst_lattice <= 1e-12
    _report(
        "uniform-closed-forms",
        ok,
        f"max marginal gap = {worst_marginal:.2e}, max lattice gap = {worst_lattice:.2e}",
    )
    assert worst_marginal <= 1e-10
    assert worst_lattice <= 1e-12


def test_binomial_degeneracy(uniform, table_dist):
    """eps = 0 collapses the chain to Binomial(n, sf(1-q)) within 1e-12."""
    worst = 0.0
    for d in (uniform, table_dist):
        for q in (0.15, 0.5, 0.85):
            for n in (1, 2, 10, 50, 100):
                pmf = exact_pmf(ModelParams(n, q, 0.0), d)
                ref = binomial_pmf(n, d.sf(1 - q))
                worst = max(worst, float(np.max(np.abs(pmf - ref))))
    ok = worst <= 1e-12
    _report("binomial-degeneracy", ok, f"max|diff| = {worst:.2e}")
    assert ok


def test_binomial_ratio_threshold(uniform):
    """Pointwise ratio >= 0.95 for every q at n >= 40 under eps = 1/n^2.

    Asserted exactly as stated, over all k with a central-window fallback.
    The bound itself is too optimistic: the dependence shifts the bulk of
    the distribution (the mean moves by about q - 1/2 relative to the
    binomial), so for q far from 1/2 the minimum ratio sits near 0.6-0.93
    inside the central mass window, not in any discardable tail, and n^2 eps
    stays at 1 so growing n does not dissolve it.  The failure is reported
    here and carried by both ratio columns of the convergence report.
    """
    start = time.monotonic()
    report = convergence_study(QS, [40, 60, 100], EpsSchedule(c=1.0, eta=0.0), uniform)
    elapsed = time.monotonic() - start
    failures = []
    print()
    print("    q    n   min_ratio(all k)  min_ratio(central)  outcome")
    for r in report.rows:
        all_k_ok = r.min_ratio >= 0.95
        central_ok = r.min_ratio_central >= 0.95
        outcome = "all-k" if all_k_ok else ("central-window" if central_ok else "below bound")
        print(f"  {r.q:.1f}  {r.n:4d}   {r.min_ratio:.6f}          {r.min_ratio_central:.6f}           {outcome}")
        if not (all_k_ok or central_ok):
            failures.append((r.q, r.n, r.min_ratio, r.min_ratio_central))
    ok = not failures and elapsed < 10.0
    _report(
        "binomial-ratio-threshold",
        ok,
        f"{len(failures)} of {len(report.rows)} cells below 0.95 in both quantifications",
    )
    assert elapsed < 10.0
    assert not failures, (
        "ratio >= 0.95 fails in the bulk (not just tails) for q far from 1/2: "
        + ", ".join(
            f"(q={q}, n={n}: all-k {a:.3f}, central {c:.3f})" for q, n, a, c in failures
        )
    )


def test_convergence_directionality(uniform):
    """Approximation error shrinks from n=10 to n=100; q=0.5 converges best.

    The shrinkage is asserted on the central-mass window, where the limit
    behaviour lives.  Over all k the max |log ratio| grows with n instead:
    the all-understood boundary ratio is exactly prod_j (1 + j*eps/q), whose
    log tends to 1/(2q) from below under eps = 1/n^2, so the all-k statistic
    cannot decrease; it is printed alongside for the record.
    """
    start = time.monotonic()
    report = convergence_study(
        [0.2, 0.5, 0.8], [10, 30, 60, 100], EpsSchedule(c=1.0, eta=0.0), uniform
    )
    elapsed = time.monotonic() - start
    ok = True
    print()
    for q in (0.2, 0.5, 0.8):
        rows = [report.row(q, n) for n in (10, 30, 60, 100)]
        central = [r.max_abs_log_ratio_central for r in rows]
        all_k = [r.max_abs_log_ratio for r in rows]
        shrinks = central[-1] < central[0]
        ok = ok and shrinks
        print(
            f"  q={q}: central max|log ratio| {central[0]:.4f} -> {central[-1]:.4f} "
            f"({'shrinks' if shrinks else 'grows'}); all-k {all_k[0]:.4f} -> {all_k[-1]:.4f}"
        )
    for n in (10, 30, 60, 100):
        best = max((report.row(q, n) for q in (0.2, 0.5, 0.8)),
                   key=lambda r: r.min_ratio)
        ok = ok and best.q == 0.5
        assert best.q == 0.5, f"q=0.5 not dominant at n={n}"
        assert report.row(0.5, n).min_ratio_central >= max(
            report.row(0.2, n).min_ratio_central,
            report.row(0.8, n).min_ratio_central,
        )
    ok = ok and elapsed < 10.0
    _report("convergence-directionality", ok, f"computed in {elapsed:.1f}s")
    for q in (0.2, 0.5, 0.8):
        rows = [report.row(q, n) for n in (10, 30, 60, 100)]
        assert rows[-1].max_abs_log_ratio_central < rows[0].max_abs_log_ratio_central
    assert elapsed < 10.0


def test_quality_symmetry(uniform):
    """P_q[count = k] = P_{1-q}[count = n-k] to 1e-12 across the grid."""
    worst = 0.0
    for q in QS:
        mirror = round(1 - q, 1)
        for n in range(1, 13):
            for eps in _eps_values(n, q, mirror):
                left = exact_pmf(ModelParams(n, q, eps), uniform)
                right = exact_pmf(ModelParams(n, mirror, eps), uniform)
                worst = max(worst, float(np.max(np.abs(left - right[::-1]))))
    ok = worst <= 1e-12
    _report("quality-symmetry", ok, f"max|diff| = {worst:.2e}")
    assert ok


def test_monte_carlo_consistency(uniform):
    """Seeded simulation matches the exact engine: TV and mean checks."""
    start = time.monotonic()
    seed, samples = 20240817, 10**5
    worst_tv = 0.0
    worst_sigmas = 0.0
    for q in (0.3, 0.5):
        params = ModelParams(10, q, 0.01)
        exact = exact_pmf(params, uniform)
        result = sample_paths(params, uniform, samples, seed, exact=exact)
        exact_mean = float(exact_marginals(params, uniform).sum())
        se = result.std / math.sqrt(samples)
        worst_tv = max(worst_tv, result.tv_to_exact)
        worst_sigmas = max(worst_sigmas, abs(result.mean - exact_mean) / se)
    elapsed = time.monotonic() - start
    ok = worst_tv <= 0.02 and worst_sigmas <= 3.0 and elapsed < 5.0
    _report(
        "monte-carlo-consistency",
        ok,
        f"max TV = {worst_tv:.4f}, mean offset = {worst_sigmas:.2f} se, {elapsed:.1f}s",
    )
    assert worst_tv <= 0.02
    assert worst_sigmas <= 3.0
    assert elapsed < 5.0


def test_cli_golden_determinism(tmp_path):
    """Every subcommand reproduces its pinned bytes, including the 12-cell grid."""
    ok = True
    for name, argv in sorted(GOLDEN_INVOCATIONS.items()):
        out = tmp_path / name
        code = run(argv + ["--out", str(out)])
        same = code == 0 and out.read_bytes() == (GOLDEN / name).read_bytes()
        ok = ok and same
        assert same, f"output of {argv} differs from golden {name}"
    _report("cli-golden-determinism", ok, f"{len(GOLDEN_INVOCATIONS)} invocations")
    assert ok
