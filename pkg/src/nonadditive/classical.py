"""Self-complementary classical codes that seed the quantum construction."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .combinat import MAX_ENUM_N, codespace_size, kl_from_n, to_bitstring, from_bitstring, weight_strings


@dataclass(frozen=True)
class CodeParams:
    """Family index ``(k, l)`` plus local dimension ``D``; block length ``n = 4k + 2l + 3``."""

    k: int
    l: int
    D: int = 2

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.l not in (0, 1):
            raise ValueError(f"l must be 0 or 1, got {self.l}")
        if self.D < 2:
            raise ValueError(f"D must be >= 2, got {self.D}")

    @property
    def n(self) -> int:
        return 4 * self.k + 2 * self.l + 3

    @property
    def weights(self) -> list[int]:
        return [2 * i + self.l for i in range(self.k + 1)]

    @classmethod
    def from_n(cls, n: int, D: int = 2) -> "CodeParams":
        k, l = kl_from_n(n)
        return cls(k, l, D)

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "l": self.l, "D": self.D}


@dataclass
class ClassicalCode:
    """Ordered list of distinct codewords packed as ints (MSB = leftmost bit)."""

    n: int
    words: list[int]
    generators: list[int] = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise ValueError("codewords must be distinct")
        top = 1 << self.n
        for w in self.words:
            if not 0 <= w < top:
                raise ValueError(f"codeword {w} does not fit in {self.n} bits")

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, word: int) -> bool:
        return word in self._wordset

    @cached_property
    def _wordset(self) -> frozenset[int]:
        return frozenset(self.words)

    def complement(self, word: int) -> int:
        return word ^ ((1 << self.n) - 1)

    def bitstrings(self) -> list[str]:
        return [to_bitstring(w, self.n) for w in self.words]

    @classmethod
    def from_bitstrings(cls, lines: Iterable[str]) -> "ClassicalCode":
        rows = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows:
            raise ValueError("no codewords given")
        lengths = {len(r) for r in rows}
        if len(lengths) != 1:
            raise ValueError(f"codewords have mixed lengths {sorted(lengths)}")
        n = lengths.pop()
        if n > MAX_ENUM_N:
            raise ValueError(f"codeword length {n} exceeds {MAX_ENUM_N}")
        return cls(n, [from_bitstring(r) for r in rows])

    def to_text(self) -> str:
        return "".join(s + "\n" for s in self.bitstrings())


def read_code(path: str | Path) -> ClassicalCode:
    return ClassicalCode.from_bitstrings(Path(path).read_text().splitlines())


def build_generators(params: CodeParams) -> list[int]:
    """All strings of weight ``l, l+2, ..., 2k+l``, by weight then canonical order."""
    if params.n > MAX_ENUM_N:
        raise ValueError(f"n={params.n} exceeds the enumeration cap {MAX_ENUM_N}")
    gens: list[int] = []
    for w in params.weights:
        gens.extend(weight_strings(params.n, w))
    assert len(gens) == codespace_size(params)
    return gens


def full_code(params: CodeParams) -> ClassicalCode:
    """Generators followed by their complements, in the same order."""
    gens = build_generators(params)
    mask = (1 << params.n) - 1
    return ClassicalCode(params.n, gens + [g ^ mask for g in gens], generators=list(gens))


def is_self_complementary(code: ClassicalCode) -> bool:
    words = code._wordset
    return all(code.complement(w) in words for w in code.words)


def min_distance(code: ClassicalCode) -> int:
    if len(code) < 2:
        raise ValueError("minimum distance undefined; K=1 degenerate code")
    return int(_kernels.min_distance(np.asarray(code.words, dtype=np.int64)))


def closest_pair(code: ClassicalCode) -> tuple[int, int, int]:
    """First pair (in code order) achieving the minimum distance: ``(i, j, d)``."""
    d = min_distance(code)
    words = np.asarray(code.words, dtype=np.int64)
    for i in range(len(words) - 1):
        dist = np.bitwise_count(words[i] ^ words[i + 1 :])
        hit = np.flatnonzero(dist == d)
        if hit.size:
            return i, i + 1 + int(hit[0]), d
    raise AssertionError("unreachable")


@dataclass
class Lemma1Diagnostic:
    admissible: bool
    self_complementary: bool
    min_distance: int | None
    size: int
    degenerate: bool = False
    missing_complements: list[str] = field(default_factory=list)
    witness: tuple[str, str, int] | None = None
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "self_complementary": self.self_complementary,
            "min_distance": self.min_distance,
            "size": self.size,
            "degenerate": self.degenerate,
            "missing_complements": self.missing_complements,
            "witness": list(self.witness) if self.witness else None,
            "message": self.message,
        }


def lemma1_admissible(code: ClassicalCode) -> tuple[bool, Lemma1Diagnostic]:
    """Can ``code`` be lifted by pairing words with their complements?

    Needs self-complementarity and minimum distance at least 2. A lone
    complement pair (``K = 2``) is accepted and flagged as degenerate; its
    distance is ``n`` anyway.
    """
    n = code.n
    missing = [to_bitstring(code.complement(w), n) for w in code.words if code.complement(w) not in code]
    selfcomp = not missing
    dist = min_distance(code) if len(code) >= 2 else None
    degenerate = len(code) == 2 and selfcomp
    witness = None
    if dist is not None and dist < 2:
        i, j, d = closest_pair(code)
        witness = (to_bitstring(code.words[i], n), to_bitstring(code.words[j], n), d)
    ok = selfcomp and dist is not None and (dist >= 2 or degenerate)
    if ok:
        msg = "degenerate single complement pair" if degenerate else "self-complementary, distance >= 2"
    elif not selfcomp:
        msg = f"{len(missing)} codeword complement(s) missing"
    elif dist is None:
        msg = "minimum distance undefined; K=1 degenerate code"
    else:
        msg = f"minimum distance {dist} < 2"
    diag = Lemma1Diagnostic(ok, selfcomp, dist, len(code), degenerate, missing[:10], witness, msg)
    return ok, diag


def complement_pairs(code: ClassicalCode) -> list[int]:
    """One representative per complement pair, in first-seen order.

    Uses the stored generator list when present so lifted indices match the
    construction order.
    """
    if code.generators:
        return list(code.generators)
    seen: set[int] = set()
    reps = []
    for w in code.words:
        if w in seen:
            continue
        reps.append(w)
        seen.add(w)
        seen.add(code.complement(w))
    return reps


def weight_profile(words: Sequence[int]) -> list[int]:
    return sorted({int(w).bit_count() for w in words})
