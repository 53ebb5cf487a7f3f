from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadditive import _kernels
from nonadditive.classical import (
    ClassicalCode,
    CodeParams,
    build_generators,
    closest_pair,
    complement_pairs,
    full_code,
    is_self_complementary,
    lemma1_admissible,
    min_distance,
    read_code,
    weight_profile,
)
from conftest import FAMILY


def brute_min_distance(words: list[int]) -> int:
    return min((a ^ b).bit_count() for a, b in itertools.combinations(words, 2))


def test_params_n_and_weights():
    p = CodeParams(1, 1)
    assert p.n == 9
    assert p.weights == [1, 3]
    assert CodeParams.from_n(11) == CodeParams(2, 0)
    assert CodeParams.from_n(5, D=3).D == 3


@pytest.mark.parametrize("k, l, D", [(-1, 0, 2), (0, 2, 2), (0, 0, 1)])
def test_params_reject(k, l, D):
    with pytest.raises(ValueError):
        CodeParams(k, l, D)


def test_n5_words(fixtures):
    code = full_code(CodeParams(0, 1))
    assert code.bitstrings() == (fixtures / "n5_codewords.txt").read_text().split()


def test_n3_words():
    assert full_code(CodeParams(0, 0)).bitstrings() == ["000", "111"]


def test_n7_generators():
    gens = build_generators(CodeParams(1, 0))
    assert len(gens) == 1 + 21
    assert gens[0] == 0
    assert weight_profile(gens) == [0, 2]


@pytest.mark.parametrize("k, l", FAMILY)
def test_family_admissible(k, l):
    code = full_code(CodeParams(k, l))
    ok, diag = lemma1_admissible(code)
    assert ok and diag.self_complementary
    assert diag.min_distance == (3 if (k, l) == (0, 0) else 2)
    assert is_self_complementary(code)
    assert len(set(code.words)) == len(code)


@pytest.mark.parametrize("k, l", FAMILY[:4])
def test_family_distance_matches_brute_force(k, l):
    code = full_code(CodeParams(k, l))
    assert min_distance(code) == brute_min_distance(code.words)


def test_degenerate_pair_accepted():
    ok, diag = lemma1_admissible(ClassicalCode.from_bitstrings(["000", "111"]))
    assert ok and diag.degenerate and diag.min_distance == 3


def test_single_word_rejected():
    ok, diag = lemma1_admissible(ClassicalCode.from_bitstrings(["000"]))
    assert not ok
    assert "undefined" in diag.message or "missing" in diag.message
    with pytest.raises(ValueError, match="undefined"):
        min_distance(ClassicalCode.from_bitstrings(["000"]))


def test_distance_one_witness(fixtures):
    code = read_code(fixtures / "bad_code.txt")
    ok, diag = lemma1_admissible(code)
    assert not ok
    assert diag.witness == ("00000", "00001", 1)


def test_missing_complement(fixtures):
    ok, diag = lemma1_admissible(read_code(fixtures / "open_code.txt"))
    assert not ok and not diag.self_complementary
    assert diag.missing_complements == ["10111"]


def test_text_roundtrip():
    code = full_code(CodeParams(0, 1))
    assert ClassicalCode.from_bitstrings(code.to_text().splitlines()).words == code.words


def test_complement_pairs_uses_generators():
    code = full_code(CodeParams(1, 0))
    assert complement_pairs(code) == build_generators(CodeParams(1, 0))
    plain = ClassicalCode.from_bitstrings(code.bitstrings())
    assert len(complement_pairs(plain)) == len(code) // 2


word_lists = st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 2**n - 1), min_size=2, max_size=40, unique=True))
)


@given(word_lists)
@settings(max_examples=60)
def test_min_distance_property(data):
    n, words = data
    code = ClassicalCode(n, words)
    d = min_distance(code)
    assert d == brute_min_distance(words)
    i, j, dd = closest_pair(code)
    assert dd == d and (words[i] ^ words[j]).bit_count() == d


@given(word_lists)
@settings(max_examples=60)
def test_min_distance_backends_agree(data):
    _, words = data
    arr = np.asarray(words, dtype=np.int64)
    assert _kernels.min_distance_nb(arr) == _kernels.min_distance_np(arr, block=3)


@given(word_lists)
@settings(max_examples=60)
def test_closing_under_complement_is_self_complementary(data):
    n, words = data
    mask = (1 << n) - 1
    closed = sorted(set(words) | {w ^ mask for w in words})
    assert is_self_complementary(ClassicalCode(n, closed))
