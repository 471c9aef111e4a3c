"""Initial comprehension distribution: CDF and survival evaluation.

The model's success probabilities are survival-function values of a single
initial distribution F evaluated at shifted threshold arguments.  Two kinds
are supported: the analytic uniform distribution on [0, 1] and a continuous
piecewise-linear CDF given by a knot table.  Both are immutable after
construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["InitialDistribution", "TableFormatError", "uniform01", "load_cdf_table"]


class TableFormatError(ValueError):
    """A CDF knot table violates the format contract."""


@dataclass(frozen=True)
class InitialDistribution:
    """Initial comprehension distribution F.

    kind is either "uniform01" (CDF clamp(x, 0, 1)) or "table" (continuous
    piecewise-linear interpolation of the knots).  Table knots must have
    strictly increasing x, nondecreasing F, first F exactly 0 and last
    exactly 1, so the CDF is total: 0 below the first knot, 1 above the last.
    """

    kind: str
    knots_x: tuple[float, ...] = field(default=())
    knots_f: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind == "uniform01":
            if self.knots_x or self.knots_f:
                raise ValueError("uniform01 takes no knots")
            return
        if self.kind != "table":
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        xs, fs = self.knots_x, self.knots_f
        if len(xs) != len(fs):
            raise TableFormatError("knot x and F lists differ in length")
        if len(xs) < 2:
            raise TableFormatError("a CDF table needs at least 2 knots")
        for i in range(1, len(xs)):
            if not xs[i] > xs[i - 1]:
                raise TableFormatError(
                    f"knot x values must be strictly increasing (knot {i + 1})"
                )
            if fs[i] < fs[i - 1]:
                raise TableFormatError(
                    f"knot F values must be nondecreasing (knot {i + 1})"
                )
        if any(f < 0.0 or f > 1.0 for f in fs):
            raise TableFormatError("knot F values must lie in [0, 1]")
        # A total CDF: anything below the first knot has mass 0, anything
        # above the last has mass 1.  Rejecting partial tables at load time
        # keeps every later query well-defined.
        if fs[0] != 0.0:
            raise TableFormatError("first F value must be 0")
        if fs[-1] != 1.0:
            raise TableFormatError("last F value must be 1")

    @property
    def support(self) -> tuple[float, float]:
        """Interval outside which the CDF is constant 0 or 1."""
        if self.kind == "uniform01":
            return (0.0, 1.0)
        return (self.knots_x[0], self.knots_x[-1])

    def cdf(self, x: float) -> float:
        """F(x), clamped to the support (0 below it, 1 above it)."""
        if self.kind == "uniform01":
            return float(min(1.0, max(0.0, x)))
        return float(np.interp(x, self.knots_x, self.knots_f))

    def sf(self, x: float) -> float:
        """Survival function 1 - F(x); complement holds bit-exactly."""
        return 1.0 - self.cdf(x)

    def cdf_vec(self, x: np.ndarray) -> np.ndarray:
        """Vectorized cdf for threshold arrays."""
        x = np.asarray(x, dtype=float)
        if self.kind == "uniform01":
            return np.clip(x, 0.0, 1.0)
        return np.interp(x, self.knots_x, self.knots_f)

    def sf_vec(self, x: np.ndarray) -> np.ndarray:
        """Vectorized survival function, 1 - cdf_vec(x)."""
        return 1.0 - self.cdf_vec(x)


def uniform01() -> InitialDistribution:
    """The uniform initial distribution on [0, 1]."""
    return InitialDistribution(kind="uniform01")


def load_cdf_table(text: str) -> InitialDistribution:
    """Parse a knot table: one "x F(x)" pair per line, '#' comments allowed.

    Whitespace-separated decimal numbers (exponent notation accepted), LF or
    CRLF line endings.  Raises TableFormatError naming the offending line on
    malformed input; the resulting distribution satisfies every knot
    invariant checked by InitialDistribution.
    """
    xs: list[float] = []
    fs: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TableFormatError(
                f"line {lineno}: expected two columns 'x F(x)', got {len(parts)}"
            )
        try:
            x, f = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise TableFormatError(f"line {lineno}: {exc}") from None
        if xs and not x > xs[-1]:
            raise TableFormatError(f"line {lineno}: x not increasing")
        if fs and f < fs[-1]:
            raise TableFormatError(f"line {lineno}: F not nondecreasing")
        if f < 0.0 or f > 1.0:
            raise TableFormatError(f"line {lineno}: F outside [0, 1]")
        xs.append(x)
        fs.append(f)
    if len(xs) < 2:
        raise TableFormatError("a CDF table needs at least 2 knots")
    if fs[0] != 0.0:
        raise TableFormatError("first F value must be 0 (incomplete CDF)")
    if fs[-1] != 1.0:
        raise TableFormatError("last F value must be 1 (incomplete CDF)")
    return InitialDistribution(kind="table", knots_x=tuple(xs), knots_f=tuple(fs))
