"""Code-size benchmarks for odd block lengths, evaluated exactly."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .combinat import codespace_size_n

CSV_COLUMNS = ["n", "M", "rains_bound_floor", "additive", "rains_family", "winner"]


def _require_odd(n: int, minimum: int = 3) -> None:
    if n < minimum or n % 2 == 0:
        raise ValueError(f"n must be odd and >= {minimum}, got {n}")


def rains_bound(n: int) -> tuple[Fraction, int]:
    """Upper bound ``2^(n-2) (1 - 1/(n-1))`` on distance-2 code dimension, with its floor."""
    _require_odd(n)
    bound = Fraction(2 ** (n - 2)) * (1 - Fraction(1, n - 1))
    return bound, math.floor(bound)


def additive_best(n: int) -> int:
    """Largest additive distance-2 code: ``2^(n-2)`` for even n, ``2^(n-3)`` for odd n."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    return 2 ** (n - 2) if n % 2 == 0 else 2 ** (n - 3)


def rains_family_size(n: int) -> int:
    """``3 * 2^(n-4)``, the earlier nonadditive family."""
    if n < 5:
        raise ValueError(f"n must be >= 5, got {n}")
    return 3 * 2 ** (n - 4)


@dataclass
class BoundsRow:
    n: int
    M: int
    rains_bound: Fraction
    rains_bound_floor: int
    additive: int
    rains_family: int
    winner: str

    def as_dict(self) -> dict:
        d = asdict(self)
        d["rains_bound"] = str(self.rains_bound)
        return d

    def csv_row(self) -> list:
        return [self.n, self.M, self.rains_bound_floor, self.additive, self.rains_family, self.winner]


def bounds_row(n: int) -> BoundsRow:
    _require_odd(n, 5)
    m = codespace_size_n(n)
    bound, floor = rains_bound(n)
    fam = rains_family_size(n)
    winner = "M" if m > fam else "rains_family" if m < fam else "tie"
    return BoundsRow(n, m, bound, floor, additive_best(n), fam, winner)


def crossover_table(n_max: int) -> list[BoundsRow]:
    """Rows for odd ``n`` in ``[5, n_max]``; formula-only, so large ``n_max`` is cheap."""
    if n_max < 5:
        raise ValueError(f"n_max must be >= 5, got {n_max}")
    return [bounds_row(n) for n in range(5, n_max + 1, 2)]


def table_csv(rows: list[BoundsRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def encoded_qubits(n: int) -> tuple[float, float]:
    """``(log2 M, n - 2 - sqrt(2 / (pi (n-1))) / ln 2)``."""
    _require_odd(n)
    m = codespace_size_n(n)
    estimate = n - 2 - math.sqrt(2 / (math.pi * (n - 1))) / math.log(2)
    return math.log2(m), estimate


def gap(n: int) -> Fraction:
    """``1 - M / 2^(n-2)``."""
    _require_odd(n)
    return 1 - Fraction(codespace_size_n(n), 2 ** (n - 2))


def check_table(rows: list[BoundsRow]) -> list[dict]:
    """Invariant violations in a table: Rains bound, additive record, crossover at 11."""
    problems = []
    for r in rows:
        if r.M > r.rains_bound_floor:
            problems.append({"n": r.n, "reason": "M exceeds the Rains bound"})
        if r.M <= r.additive:
            problems.append({"n": r.n, "reason": "M does not beat the additive record"})
        expect = "rains_family" if r.n <= 9 else "M"
        if r.winner != expect:
            problems.append({"n": r.n, "reason": f"winner {r.winner}, expected {expect}"})
    return problems
