"""Exact combinatorics: binomials, weight classes and codespace sizes."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

MAX_ENUM_N = 63


def binom(n: int, m: int) -> int:
    """Exact binomial coefficient, zero when ``m`` is outside ``[0, n]``."""
    if n < 0:
        raise ValueError(f"binom needs n >= 0, got {n}")
    if m < 0 or m > n:
        return 0
    return math.comb(n, m)


def weight_strings(n: int, w: int) -> list[int]:
    """All length-``n`` bitstrings of weight ``w`` as packed ints.

    Position 0 is the leftmost character, stored as bit ``n - 1``. The order
    is decreasing integer value, so for ``n=5, w=1`` the first string is
    ``10000``.
    """
    if not 0 <= n <= MAX_ENUM_N:
        raise ValueError(f"string length must be in [0, {MAX_ENUM_N}], got {n}")
    if not 0 <= w <= n:
        raise ValueError(f"weight must be in [0, {n}], got {w}")
    # lexicographic position tuples, leftmost position = highest bit, gives decreasing values
    out = []
    for positions in itertools.combinations(range(n), w):
        word = 0
        for p in positions:
            word |= 1 << (n - 1 - p)
        out.append(word)
    return out


def to_bitstring(word: int, n: int) -> str:
    return format(word, f"0{n}b") if n else ""


def from_bitstring(text: str) -> int:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a binary string: {text!r}")
    return int(text, 2)


def codespace_sum(k: int, l: int) -> int:
    n = 4 * k + 2 * l + 3
    return sum(binom(n, 2 * i + l) for i in range(k + 1))


def codespace_size(params) -> int:
    """Number of basis kets, ``2^(4k+2l+1) - C(4k+2l+2, 2k+l+1)/2``.

    Accepts a :class:`~nonadditive.classical.CodeParams` or a ``(k, l)`` pair.
    The closed form is checked against the defining sum on every call.
    """
    k, l = _kl(params)
    closed = 2 ** (4 * k + 2 * l + 1) - binom(4 * k + 2 * l + 2, 2 * k + l + 1) // 2
    explicit = codespace_sum(k, l)
    if closed != explicit:  # pragma: no cover - would mean the identity is wrong
        raise ArithmeticError(f"closed form {closed} != sum {explicit} for k={k}, l={l}")
    return closed


def codespace_size_n(n: int) -> int:
    """Codespace size indexed by the odd block length instead of ``(k, l)``."""
    k, l = kl_from_n(n)
    return codespace_size((k, l))


def kl_from_n(n: int) -> tuple[int, int]:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"block length must be odd and >= 3, got {n}")
    l = ((n - 3) // 2) % 2
    k = (n - 3 - 2 * l) // 4
    return k, l


def _kl(params) -> tuple[int, int]:
    if hasattr(params, "k"):
        return params.k, params.l
    k, l = params
    if k < 0 or l not in (0, 1):
        raise ValueError(f"need k >= 0 and l in (0, 1), got k={k}, l={l}")
    return k, l


class AsymptoticFraction(NamedTuple):
    exact: Fraction
    value: float
    approx: float


def asymptotic_fraction(n: int) -> AsymptoticFraction:
    """Fill fraction ``M / 2^(n-2)`` exactly and via the Stirling estimate."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    exact = 1 - Fraction(binom(n - 1, (n - 1) // 2), 2 ** (n - 1))
    approx = 1.0 - math.sqrt(2.0 / (math.pi * (n - 1)))
    return AsymptoticFraction(exact, float(exact), approx)
