import pytest

from coursedist.initial import InitialDistribution, uniform01

# Piecewise-linear CDF on [0, 1] with varied slopes; used wherever a
# nontrivial non-uniform initial distribution is needed.
TABLE_KNOTS = ((0.0, 0.0), (0.2, 0.05), (0.45, 0.35), (0.7, 0.8), (1.0, 1.0))

TABLE_TEXT = "".join(f"{x} {f}\n" for x, f in TABLE_KNOTS)


@pytest.fixture(scope="session")
def uniform():
    return uniform01()


@pytest.fixture(scope="session")
def table_dist():
    return InitialDistribution(
        kind="table",
        knots_x=tuple(x for x, _ in TABLE_KNOTS),
        knots_f=tuple(f for _, f in TABLE_KNOTS),
    )
