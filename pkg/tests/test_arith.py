from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twistfilt.arith import (
    ModeIndex,
    half_partitions,
    partitions_of,
    product_series_coefficients,
    rational_binomial,
)

rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)


def test_binomial_base_cases():
    assert rational_binomial(Fraction(5), 0) == 1
    assert rational_binomial(Fraction(5), 1) == 5
    assert rational_binomial(Fraction(4), 2) == 6
    assert rational_binomial(Fraction(-1), 2) == 1
    assert rational_binomial(Fraction(-1, 2), 1) == Fraction(-1, 2)
    assert rational_binomial(Fraction(3), 5) == 0  # integer top, deeper index


def test_binomial_rejects_negative_index():
    with pytest.raises(ValueError):
        rational_binomial(Fraction(1), -1)


@given(rationals, st.integers(min_value=0, max_value=8))
def test_binomial_pascal_identity(a, i):
    # C(a, i) + C(a, i+1) == C(a+1, i+1)
    assert rational_binomial(a, i) + rational_binomial(a, i + 1) == rational_binomial(
        a + 1, i + 1
    )


@given(st.integers(min_value=0, max_value=10), st.integers(min_value=0, max_value=10))
def test_binomial_matches_factorial_form(n, i):
    from math import comb

    assert rational_binomial(Fraction(n), i) == comb(n, i) if i <= n else True


def test_mode_index_roundtrip():
    m = ModeIndex.from_value(Fraction(-3, 2), 2)
    assert (m.base, m.sector) == (-2, 1)
    assert m.value == Fraction(-3, 2)
    assert (m + 1).value == Fraction(-1, 2)
    assert ModeIndex.from_value(Fraction(-1, 2), 2) == ModeIndex(-1, 1, 2)


def test_mode_index_rejects_off_grid():
    with pytest.raises(ValueError):
        ModeIndex.from_value(Fraction(1, 3), 2)


def test_partitions_descending_lex_order():
    got = list(partitions_of(4))
    assert got == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


@given(st.integers(min_value=0, max_value=12))
def test_partition_count_matches_series_oracle(n):
    counts = product_series_coefficients(range(1, n + 1), Fraction(n), 1)
    assert len(list(partitions_of(n))) == counts[Fraction(n)]


def test_half_partitions_match_series_oracle():
    parts = [Fraction(2 * k - 1, 2) for k in range(1, 10)]
    cutoff = Fraction(9, 2)
    counts = product_series_coefficients(parts, cutoff, 2)
    for i in range(0, 10):
        w = Fraction(i, 2)
        assert len(half_partitions(w, parts)) == counts[w]


def test_half_partitions_canonical_order():
    parts = [Fraction(1, 2), Fraction(3, 2)]
    got = half_partitions(Fraction(3, 2), parts)
    assert got == [
        (Fraction(3, 2),),
        (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
    ]
