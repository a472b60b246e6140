"""Shared helpers for the test suite.

Exact expected values in the tests were produced by independent oracles
(symbolic expansion, Lagrange inversion, brute-force enumeration) and are
frozen as literals; property tests state the algebraic laws directly.
"""

from fractions import Fraction

import pytest

from germkit.series import QQi, TruncatedSeries


def qi(re, im=0) -> QQi:
    return QQi(re, im)


def ser(values, order=None, exact=None) -> TruncatedSeries:
    """Series from low-order coefficients, zero-padded to ``order``."""
    return TruncatedSeries.from_coefficients(values, order=order, exact=exact)


def coeff_list(f: TruncatedSeries):
    return [f.coefficient(j) for j in range(1, f.order + 1)]


def assert_series_equal(f: TruncatedSeries, g: TruncatedSeries):
    assert f.order == g.order
    assert f.exact == g.exact
    assert coeff_list(f) == coeff_list(g)


def random_invertible(rng, order: int, max_den: int = 6) -> TruncatedSeries:
    """Random exact series with a1 != 0 and small rational parts."""
    def part():
        den = rng.randint(1, max_den)
        return Fraction(rng.randint(-4, 4), den)

    coeffs = [QQi(part(), part()) for _ in range(order)]
    while not coeffs[0]:
        coeffs[0] = QQi(part(), part())
    return TruncatedSeries.from_coefficients(coeffs, order=order)


@pytest.fixture
def rng():
    import random

    return random.Random(20260814)
