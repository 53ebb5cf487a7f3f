"""Exact arithmetic in Z[w], w = exp(2 pi i / D).

Elements are coefficient vectors ``(a_0, ..., a_{D-1})`` meaning
``sum_j a_j w^j``. The vector form is not unique (``1 + w + ... + w^{D-1} = 0``
for prime D), so equality and zero tests go through the remainder modulo the
D-th cyclotomic polynomial, which is exact for every D.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # ascending coefficients; den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for d in range(len(num) - len(den), -1, -1):
        c = num[d + len(den) - 1]
        out[d] = c
        if c:
            for i, b in enumerate(den):
                num[d + i] -= c * b
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(D: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the D-th cyclotomic polynomial."""
    if D < 1:
        raise ValueError(f"D must be positive, got {D}")
    poly = [-1] + [0] * (D - 1) + [1]  # x^D - 1
    for d in range(1, D):
        if D % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def reduce_coeffs(coeffs, D: int) -> np.ndarray:
    """Canonical form along the last axis: remainder modulo the cyclotomic polynomial."""
    arr = np.array(coeffs, dtype=object if _needs_object(coeffs) else np.int64, copy=True)
    if arr.shape[-1] != D:
        raise ValueError(f"expected {D} coefficients, got {arr.shape[-1]}")
    phi = cyclotomic_poly(D)
    deg = len(phi) - 1
    for top in range(D - 1, deg - 1, -1):
        c = arr[..., top].copy()
        shift = top - deg
        for i, b in enumerate(phi):
            if b:
                arr[..., shift + i] -= c * b
    return arr


def _needs_object(coeffs) -> bool:
    return isinstance(coeffs, np.ndarray) and coeffs.dtype == object


def is_zero_coeffs(coeffs, D: int) -> np.ndarray:
    """Exact zero test along the last axis."""
    return ~np.any(reduce_coeffs(coeffs, D) != 0, axis=-1)


def root_power_coeffs(e: int, D: int) -> np.ndarray:
    out = np.zeros(D, dtype=np.int64)
    out[e % D] = 1
    return out


@dataclass(frozen=True, eq=False)
class CycInt:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ValueError("CycInt needs D >= 2 coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def D(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_int(cls, value: int, D: int) -> "CycInt":
        return cls((int(value),) + (0,) * (D - 1))

    @classmethod
    def root(cls, e: int, D: int) -> "CycInt":
        """``w ** e``."""
        return cls(tuple(root_power_coeffs(e, D)))

    @classmethod
    def zero(cls, D: int) -> "CycInt":
        return cls((0,) * D)

    def _check(self, other: "CycInt") -> None:
        if other.D != self.D:
            raise ValueError(f"mixing Z[w] for D={self.D} and D={other.D}")

    def __add__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other, self.D)
        self._check(other)
        return CycInt(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other, self.D)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(tuple(a * other for a in self.coeffs))
        self._check(other)
        D = self.D
        out = [0] * D
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % D] += a * b
        return CycInt(tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        D = self.D
        return CycInt(tuple(self.coeffs[(-j) % D] for j in range(D)))

    def reduced(self) -> tuple[int, ...]:
        return tuple(int(c) for c in reduce_coeffs(np.array(self.coeffs, dtype=object), self.D))

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other, self.D)
        if not isinstance(other, CycInt) or other.D != self.D:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.D, self.reduced()))

    def to_complex(self) -> complex:
        D = self.D
        return sum(a * cmath.exp(2j * cmath.pi * j / D) for j, a in enumerate(self.coeffs))

    def as_int(self) -> int:
        """Integer value; only defined when the element is rational."""
        red = self.reduced()
        if any(red[1:]):
            raise ValueError(f"{self} is not an integer")
        return red[0]

    def __repr__(self):
        return f"CycInt({list(self.coeffs)})"
