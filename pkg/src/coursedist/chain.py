"""Exact distribution of the number of understood sessions.

The model: a course of n sessions taught at constant quality q in (0, 1).
Session 1 is understood with probability sf(1 - q) under the initial
distribution F.  Each understood session lowers the next threshold argument
by the dependence parameter eps, each missed session raises it by eps, so
after j - 1 sessions of which k were understood the success probability for
session j is

    sf(1 - q - (2k - (j - 1)) * eps).

The running count of understood sessions is therefore a (time-inhomogeneous)
Markov chain on {0..j}, even though the per-session indicators alone are
not, and its distribution is computed exactly by a forward dynamic program.
An exhaustive path-enumeration oracle over all 2^n outcome sequences
validates the recursion.

All operations are pure functions of immutable inputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .initial import InitialDistribution

__all__ = [
    "ModelParams",
    "OutcomePath",
    "ValidationReport",
    "ValidationError",
    "EnumerationBudgetError",
    "BRUTE_FORCE_MAX_N",
    "validate",
    "session_success_prob",
    "exact_pmf",
    "exact_marginals",
    "brute_force_pmf",
    "transition_row",
    "apply_transition",
    "boundary_log_masses",
]

VALIDATION_MODES = ("strict", "hypothesis1", "relaxed")

#: 2^n path enumeration budget for the brute-force oracle.
BRUTE_FORCE_MAX_N = 20


class ValidationError(ValueError):
    """Parameters fail the validation mode required by an operation."""


class EnumerationBudgetError(ValueError):
    """Brute-force enumeration refused: 2^n exceeds the budget."""


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: session count n, quality q, dependence eps.

    Construction checks only the basic domains (n >= 1, 0 < q < 1,
    eps >= 0).  Regime conditions relating the three are reported by
    validate(), not raised here.
    """

    n: int
    q: float
    eps: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q!r}")
        if self.eps < 0.0:
            raise ValueError(f"eps must be nonnegative, got {self.eps!r}")

    @property
    def max_shift(self) -> float:
        """Largest cumulative threshold shift, (n - 1) * eps."""
        return (self.n - 1) * self.eps


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation pass: violated conditions, plus notes."""

    mode: str
    violations: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(
    params: ModelParams,
    mode: str = "strict",
    d: InitialDistribution | None = None,
) -> ValidationReport:
    """Check the regime conditions for the given mode.

    strict      : (n - 1) * eps <  min(q, 1 - q)
    hypothesis1 : (n - 1) * eps <= min(q, 1 - q), i.e. the threshold interval
                  [1 - q - (n-1) eps, 1 - q + (n-1) eps] stays inside [0, 1]
    relaxed     : always passes; thresholds that would leave the support are
                  flagged as notes (probabilities clamp to 0/1 downstream)

    When a table distribution is supplied, strict and hypothesis1 also check
    that the threshold interval stays inside the table's knot span.
    Violations are reported, never raised.
    """
    if mode not in VALIDATION_MODES:
        raise ValueError(f"unknown validation mode {mode!r}")
    shift = params.max_shift
    bound = min(params.q, 1.0 - params.q)
    violations: list[str] = []
    notes: list[str] = []
    lo = 1.0 - params.q - shift
    hi = 1.0 - params.q + shift
    if mode == "strict":
        if not shift < bound:
            violations.append(
                f"(n-1)*eps = {shift:.6g} must be < min(q, 1-q) = {bound:.6g}"
            )
    elif mode == "hypothesis1":
        if not shift <= bound:
            violations.append(
                f"(n-1)*eps = {shift:.6g} must be <= min(q, 1-q) = {bound:.6g}"
            )
    else:  # relaxed
        if shift > bound:
            notes.append(
                "threshold arguments leave [0, 1]; probabilities clamp to 0/1"
            )
    if d is not None and d.kind == "table" and mode != "relaxed":
        s_lo, s_hi = d.support
        if lo < s_lo or hi > s_hi:
            violations.append(
                f"threshold interval [{lo:.6g}, {hi:.6g}] leaves the table "
                f"support [{s_lo:.6g}, {s_hi:.6g}]"
            )
    return ValidationReport(mode=mode, violations=tuple(violations), notes=tuple(notes))


def _require_valid(params: ModelParams, mode: str, d: InitialDistribution | None = None):
    report = validate(params, mode, d)
    if not report.ok:
        raise ValidationError(
            f"parameters fail {mode} validation: " + "; ".join(report.violations)
        )


def session_success_prob(
    params: ModelParams, d: InitialDistribution, k: int, j: int
) -> float:
    """Success probability for session j after k understood among j - 1.

    Equals sf(1 - q - (2k - (j - 1)) * eps); for j = 1 this is sf(1 - q).
    """
    if not 1 <= j <= params.n:
        raise ValueError(f"session index j={j} out of range 1..{params.n}")
    if not 0 <= k <= j - 1:
        raise ValueError(f"prior-success count k={k} out of range 0..{j - 1}")
    return d.sf(1.0 - params.q - (2 * k - (j - 1)) * params.eps)


def _success_prob_row(params: ModelParams, d: InitialDistribution, j: int) -> np.ndarray:
    """Success probabilities for session j over all k = 0..j-1, vectorized."""
    k = np.arange(j, dtype=float)
    args = 1.0 - params.q - (2.0 * k - (j - 1)) * params.eps
    return d.sf_vec(args)


def _forward(params: ModelParams, d: InitialDistribution):
    """Run the forward DP; return (final row, per-session marginals).

    Row j holds P[count after j sessions = k] for k = 0..j.  The update from
    row j-1 uses the per-state success probabilities s(k, j):

        new[k] = old[k] * (1 - s(k, j)) + old[k-1] * s(k-1, j)

    with base row [cdf(1-q), sf(1-q)].  The marginal understanding
    probability of session j falls out as sum_k old[k] * s(k, j).
    """
    n = params.n
    p1 = d.sf(1.0 - params.q)
    row = np.array([1.0 - p1, p1])
    marginals = np.empty(n)
    marginals[0] = p1
    for j in range(2, n + 1):
        s = _success_prob_row(params, d, j)  # length j, indexed by k
        marginals[j - 1] = float(row @ s)
        new = np.zeros(j + 1)
        new[:j] = row * (1.0 - s)
        new[1:] += row * s
        row = new
    return row, marginals


def exact_pmf(
    params: ModelParams, d: InitialDistribution, *, relaxed: bool = False
) -> np.ndarray:
    """Exact pmf of the number of understood sessions, indexed k = 0..n.

    Computed by the forward dynamic program; requires hypothesis1 validation
    unless relaxed=True, in which case out-of-support thresholds clamp
    probabilities to 0/1 and the recursion continues.
    """
    if not relaxed:
        _require_valid(params, "hypothesis1", d)
    row, _ = _forward(params, d)
    return row


def exact_marginals(
    params: ModelParams, d: InitialDistribution, *, relaxed: bool = False
) -> np.ndarray:
    """Exact per-session understanding probabilities p_1..p_n.

    p_1 = sf(1 - q); p_j aggregates the session-j success probability over
    the distribution of the prior understood count.
    """
    if not relaxed:
        _require_valid(params, "hypothesis1", d)
    _, marginals = _forward(params, d)
    return marginals


@dataclass(frozen=True)
class OutcomePath:
    """One binary outcome sequence (y_1..y_n), y_j = 1 iff understood.

    Net shift before session j is 2 * (ones among y_1..y_{j-1}) - (j - 1);
    it is 0 for session 1 and bounded by j - 1 in absolute value.  The
    current threshold argument is 1 - q - net_shift * eps.
    """

    outcomes: tuple[int, ...]

    def __post_init__(self):
        if any(y not in (0, 1) for y in self.outcomes):
            raise ValueError("outcomes must be 0/1")

    def net_shift(self, j: int) -> int:
        """2 * (# understood among sessions 1..j-1) - (j - 1)."""
        if not 1 <= j <= len(self.outcomes):
            raise ValueError(f"session index j={j} out of range")
        ones = sum(self.outcomes[: j - 1])
        return 2 * ones - (j - 1)

    def probability(self, params: ModelParams, d: InitialDistribution) -> float:
        """Probability of observing exactly this outcome sequence."""
        if len(self.outcomes) != params.n:
            raise ValueError("path length differs from session count n")
        prob = 1.0
        k = 0
        for j, y in enumerate(self.outcomes, start=1):
            s = session_success_prob(params, d, k, j)
            prob *= s if y else (1.0 - s)
            k += y
        return prob


def brute_force_pmf(params: ModelParams, d: InitialDistribution) -> np.ndarray:
    """Exhaustive oracle: sum path probabilities over all 2^n sequences.

    Each path's probability is the product of per-session success/failure
    factors; paths aggregate by their total count of understood sessions.
    Refuses n > BRUTE_FORCE_MAX_N.  Independent of the dynamic program and
    expected to agree with exact_pmf to within 1e-12.
    """
    n = params.n
    if n > BRUTE_FORCE_MAX_N:
        raise EnumerationBudgetError(
            f"2^{n} paths exceed the enumeration budget (n <= {BRUTE_FORCE_MAX_N})"
        )
    # Success probabilities tabulated once: s_table[j-1][k] for session j.
    s_table = [
        [session_success_prob(params, d, k, j) for k in range(j)]
        for j in range(1, n + 1)
    ]
    acc = [0.0] * (n + 1)
    for outcomes in itertools.product((0, 1), repeat=n):
        prob = 1.0
        k = 0
        for j in range(n):
            s = s_table[j][k]
            if outcomes[j]:
                prob *= s
                k += 1
            else:
                prob *= 1.0 - s
        acc[k] += prob
    return np.array(acc)


def transition_row(
    params: ModelParams, d: InitialDistribution, step: int
) -> list[list[tuple[int, float]]]:
    """Sparse coefficients of one DP step, mapping row step-1 to row step.

    Entry [k] lists (k_prev, weight) pairs; the structure is bidiagonal:
    k_prev = k carries the failure weight cdf(arg(k)) and k_prev = k - 1 the
    success weight sf(arg(k - 1)), where arg(k) = 1 - q - (2k - (step-1)) eps.
    The two weights leaving any k_prev sum to 1 (cdf + sf at one argument).
    Step 1 maps the trivial row [1.0] to [cdf(1-q), sf(1-q)].
    """
    if not 1 <= step <= params.n:
        raise ValueError(f"step {step} out of range 1..{params.n}")
    s = _success_prob_row(params, d, step)  # success prob per k_prev
    rows: list[list[tuple[int, float]]] = []
    for k in range(step + 1):
        entries: list[tuple[int, float]] = []
        if k <= step - 1:
            entries.append((k, 1.0 - float(s[k])))
        if k >= 1:
            entries.append((k - 1, float(s[k - 1])))
        rows.append(entries)
    return rows


def apply_transition(
    coeffs: list[list[tuple[int, float]]], row: np.ndarray
) -> np.ndarray:
    """Apply transition_row coefficients to a probability row vector."""
    out = np.zeros(len(coeffs))
    for k, entries in enumerate(coeffs):
        out[k] = sum(row[k_prev] * w for k_prev, w in entries)
    return out


def boundary_log_masses(params: ModelParams, d: InitialDistribution) -> tuple[float, float]:
    """(log P[count = 0], log P[count = n]) via the closed products.

    All-failure and all-success paths multiply n factors whose arguments
    step by eps, so the log masses are plain sums of log cdf / log sf
    values: stable even when the products underflow double precision.
    Returns -inf where a factor is exactly 0.
    """
    q, eps, n = params.q, params.eps, params.n
    j = np.arange(n, dtype=float)
    f_vals = d.cdf_vec(1.0 - q + j * eps)
    s_vals = d.sf_vec(1.0 - q - j * eps)
    with np.errstate(divide="ignore"):
        log_all_fail = float(np.sum(np.log(f_vals)))
        log_all_succeed = float(np.sum(np.log(s_vals)))
    return log_all_fail, log_all_succeed
