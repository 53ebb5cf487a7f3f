from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonadditive.combinat import (
    asymptotic_fraction,
    binom,
    codespace_size,
    codespace_size_n,
    codespace_sum,
    from_bitstring,
    kl_from_n,
    to_bitstring,
    weight_strings,
)


def brute_count(n: int) -> int:
    k, l = kl_from_n(n)
    weights = {2 * i + l for i in range(k + 1)}
    return sum(1 for w in range(2**n) if w.bit_count() in weights)


def test_binom_edges():
    assert binom(5, 2) == 10
    assert binom(5, -1) == 0
    assert binom(5, 6) == 0
    assert binom(0, 0) == 1


def test_weight_strings_order():
    assert weight_strings(5, 1) == [16, 8, 4, 2, 1]
    assert weight_strings(3, 0) == [0]
    assert weight_strings(4, 2) == [12, 10, 9, 6, 5, 3]


@given(st.integers(1, 12), st.data())
def test_weight_strings_complete(n, data):
    w = data.draw(st.integers(0, n))
    words = weight_strings(n, w)
    assert len(words) == math.comb(n, w)
    assert words == sorted(words, reverse=True)
    assert all(x.bit_count() == w for x in words)


@given(st.integers(1, 20), st.data())
def test_bitstring_roundtrip(n, data):
    word = data.draw(st.integers(0, 2**n - 1))
    text = to_bitstring(word, n)
    assert len(text) == n
    assert from_bitstring(text) == word


def test_from_bitstring_rejects_junk():
    with pytest.raises(ValueError):
        from_bitstring("10a1")


@pytest.mark.parametrize("n, m", [(3, 1), (5, 5), (7, 22), (9, 93), (11, 386), (13, 1586), (15, 6476)])
def test_known_sizes(n, m):
    assert codespace_size_n(n) == m


@pytest.mark.parametrize("n", range(3, 16, 2))
def test_size_matches_enumeration(n):
    assert codespace_size_n(n) == brute_count(n)


@given(st.integers(0, 40), st.integers(0, 1))
def test_closed_form_matches_sum(k, l):
    n = 4 * k + 2 * l + 3
    assert codespace_size((k, l)) == codespace_sum(k, l) == 2 ** (n - 2) - math.comb(n - 1, (n - 1) // 2) // 2


@given(st.integers(0, 500), st.integers(0, 1))
def test_kl_roundtrip(k, l):
    assert kl_from_n(4 * k + 2 * l + 3) == (k, l)


@pytest.mark.parametrize("n", [4, 2, 1, 0, -3])
def test_kl_rejects(n):
    with pytest.raises(ValueError):
        kl_from_n(n)


def test_asymptotic_fraction_tracks_estimate():
    frac = asymptotic_fraction(2001)
    assert abs(frac.value - frac.approx) < 1e-4
    assert frac.exact == 1 - Fraction(math.comb(2000, 1000), 2**2000)


@given(st.integers(1, 200))
def test_fraction_is_size_ratio(h):
    n = 2 * h + 1
    assert asymptotic_fraction(n).exact * 2 ** (n - 2) == codespace_size_n(n)

