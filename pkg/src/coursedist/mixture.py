"""Recursive mixture view of the per-session understanding probabilities.

Averaging the conditional distributions over the previous session's outcome
gives a family of mixed survival functions, built from the initial
distribution by

    sf_j(x) = sf_{j-1}(x - eps) * p_{j-1} + sf_{j-1}(x + eps) * (1 - p_{j-1})

with sf_1 = sf, and marginals p_j = sf_j(1 - q).  Everything the recursion
touches lives on the argument lattice 1 - q + m * eps, so one triangular
table indexed by (session j, offset m) carries the whole computation.

Note the recursion weights by the marginal p_{j-1}, not by path-conditional
probabilities, so for a non-uniform initial distribution the marginals
computed here generally differ from chain.exact_marginals from session 3 on.
For the uniform initial distribution the survival function is affine where
it matters and the construction is exact, with closed forms below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ModelParams, ValidationError, _require_valid
from .initial import InitialDistribution

__all__ = [
    "MixtureLattice",
    "build_lattice",
    "mixture_marginal",
    "theorem1_marginal",
    "uniform_sf_closed",
    "uniform_marginal_closed",
]


@dataclass(frozen=True)
class MixtureLattice:
    """Triangular table of mixed survival values plus the marginals.

    rows[j - 1] holds sf_j(1 - q + m * eps) for integer offsets
    m = -(n - j) .. (n - j); row 1 is the initial survival function itself,
    evaluated analytically, and each later row shrinks by one offset on each
    side because the recursion consumes its neighbours.  marginals[j - 1] is
    p_j = sf_j(1 - q), the centre entry of row j.  Immutable once built.
    """

    params: ModelParams
    rows: tuple[tuple[float, ...], ...]
    marginals: tuple[float, ...]

    def max_offset(self, j: int) -> int:
        """Largest stored |m| for session j."""
        return self.params.n - j

    def sf_value(self, j: int, m: int) -> float:
        """sf_j(1 - q + m * eps) from the table."""
        n = self.params.n
        if not 1 <= j <= n:
            raise ValueError(f"session index j={j} out of range 1..{n}")
        half = self.max_offset(j)
        if abs(m) > half:
            raise ValueError(f"offset m={m} out of range |m| <= {half} for j={j}")
        return self.rows[j - 1][m + half]

    def marginal(self, m: int) -> float:
        """p_m, the probability that session m is understood."""
        if not 1 <= m <= self.params.n:
            raise ValueError(f"session index m={m} out of range 1..{self.params.n}")
        return self.marginals[m - 1]


def build_lattice(params: ModelParams, d: InitialDistribution) -> MixtureLattice:
    """Build the full lattice of mixed survival values, O(n^2) work.

    Row 1 evaluates sf directly on the widest argument range; row j follows
    from row j - 1 by

        value(j, m) = value(j-1, m-1) * p_{j-1} + value(j-1, m+1) * (1 - p_{j-1})

    and p_j is the centre value(j, 0).  Requires hypothesis1 validation,
    which keeps every argument inside the distribution's support.
    """
    _require_valid(params, "hypothesis1", d)
    n, q, eps = params.n, params.q, params.eps
    m0 = np.arange(-(n - 1), n, dtype=float)
    row = d.sf_vec(1.0 - q + m0 * eps)
    rows = [tuple(float(v) for v in row)]
    marginals = [float(row[n - 1])]  # centre entry, sf(1 - q)
    for j in range(2, n + 1):
        p_prev = marginals[-1]
        row = row[:-2] * p_prev + row[2:] * (1.0 - p_prev)
        rows.append(tuple(float(v) for v in row))
        marginals.append(float(row[(n - j)]))
    return MixtureLattice(params=params, rows=tuple(rows), marginals=tuple(marginals))


def mixture_marginal(
    params: ModelParams,
    d: InitialDistribution,
    m: int,
    lattice: MixtureLattice | None = None,
) -> float:
    """p_m from the iterated mixture recursion (lattice built on demand)."""
    if lattice is None:
        lattice = build_lattice(params, d)
    return lattice.marginal(m)


def theorem1_marginal(
    params: ModelParams,
    d: InitialDistribution,
    m: int,
    lattice: MixtureLattice | None = None,
) -> float:
    """p_m by the telescoped explicit formula over the mixed survival values.

    p_m = sf_1(1-q) * prod_{j=1}^{m-1} D_j
          + sum_{i=1}^{m-1} sf_i(1-q+eps) * prod_{j=i+1}^{m-1} D_j,

    where D_j = sf_j(1-q-eps) - sf_j(1-q+eps).  Algebraically identical to
    mixture_marginal; numerically it cancels more, so agreement is expected
    to ~1e-10 rather than 1e-12.  Requires strict validation.
    """
    _require_valid(params, "strict", d)
    if lattice is None:
        lattice = build_lattice(params, d)
    if not 1 <= m <= params.n:
        raise ValueError(f"session index m={m} out of range 1..{params.n}")
    diffs = [lattice.sf_value(j, -1) - lattice.sf_value(j, +1) for j in range(1, m)]
    # Suffix products: prod_{j>i} D_j for i = 0..m-1.
    suffix = [1.0] * (m)
    for i in range(m - 2, -1, -1):
        suffix[i] = diffs[i] * suffix[i + 1]
    total = lattice.sf_value(1, 0) * suffix[0]
    for i in range(1, m):
        total += lattice.sf_value(i, +1) * suffix[i]
    return total


def _require_uniform(d: InitialDistribution | None):
    if d is not None and d.kind != "uniform01":
        raise ValidationError("closed forms hold only for the uniform01 distribution")


def uniform_sf_closed(
    params: ModelParams, i: int, m: int, d: InitialDistribution | None = None
) -> float:
    """Closed form of the mixed survival value for the uniform distribution.

    sf_i(1 - q - m * eps) = (1 + 2 eps)^(i-1) * (q - 1/2) + 1/2 + m * eps.
    Note the sign: offset m here shifts the argument downward, so this
    matches the lattice entry at offset -m.  Requires hypothesis1.
    """
    _require_uniform(d)
    _require_valid(params, "hypothesis1")
    if not 1 <= i <= params.n:
        raise ValueError(f"session index i={i} out of range 1..{params.n}")
    q, eps = params.q, params.eps
    return (1.0 + 2.0 * eps) ** (i - 1) * (q - 0.5) + 0.5 + m * eps


def uniform_marginal_closed(
    params: ModelParams, m: int, d: InitialDistribution | None = None
) -> float:
    """Closed-form marginal for the uniform distribution.

    p_m = 1/2 + (1 + 2 eps)^(m-1) * (q - 1/2); the drift away from 1/2
    compounds geometrically with rate 1 + 2 eps.  Requires hypothesis1.
    """
    _require_uniform(d)
    _require_valid(params, "hypothesis1")
    if not 1 <= m <= params.n:
        raise ValueError(f"session index m={m} out of range 1..{params.n}")
    q, eps = params.q, params.eps
    return 0.5 + (1.0 + 2.0 * eps) ** (m - 1) * (q - 0.5)
