"""The code projector as an exact Pauli sum.

The projector lives in the span of ``(I + X^n) Z^x`` with ``|x|`` even, and
the coefficient of each term depends only on ``|x|``. It is built from the
weight-class character sums

    K(2s, m) = sum_{|w| = m} (-1)^{x.w}      for any |x| = 2s
             = sum_t (-1)^t C(2s, t) C(n - 2s, m - t).

A second closed form for the per-weight coefficients, with a factor
``(s - t)`` in place of the sign, is kept only for the audit table because it
does not reproduce the character sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import _kernels
from .classical import CodeParams, build_generators
from .combinat import binom, to_bitstring
from .lift import QuantumCodeBasis, SparseKet, WeylOp, build_basis, apply_to_basis
from .verifier import weight_one_ops

MAX_PROJECTOR_N = 15
_INT64_SAFE = 2**62


def derived_coeff(s: int, m: int, n: int) -> int:
    """``sum_{|w|=m} (-1)^{x.w}`` for a fixed ``x`` of weight ``2s``."""
    if not 0 <= 2 * s <= n or not 0 <= m <= n:
        raise ValueError(f"need 0 <= 2s <= n and 0 <= m <= n, got s={s}, m={m}, n={n}")
    return sum((-1) ** t * binom(2 * s, t) * binom(n - 2 * s, m - t) for t in range(m + 1))


def printed_coeff(s: int, i: int, l: int, n: int) -> int:
    """Literal value of ``2 sum_t C(2s,t) C(n-2s, 2i+l-t) (s-t)``; ``C(n, 2i+l)`` at ``s = 0``."""
    m = 2 * i + l
    if s == 0:
        return binom(n, m)
    return 2 * sum(binom(2 * s, t) * binom(n - 2 * s, m - t) * (s - t) for t in range(m + 1))


def weight_coefficients(params: CodeParams) -> list[int]:
    """``K(2s) = sum_i K(2s, 2i+l)`` for ``s = 0 .. (n-1)/2``."""
    n = params.n
    return [sum(derived_coeff(s, m, n) for m in params.weights) for s in range((n - 1) // 2 + 1)]


# ---------------------------------------------------------------------------
# generic exact Pauli sums


def _parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass
class PauliSumOperator:
    """``sum (num / den) X^x Z^z`` over qubits, keyed by packed ``(x, z)`` masks.

    Products multiply the denominators; equality compares the rationals.
    """

    n: int
    den: int
    terms: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: v for k, v in sorted(self.terms.items()) if v != 0}

    def coefficient(self, x: int, z: int) -> Fraction:
        return Fraction(self.terms.get((x, z), 0), self.den)

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        for key, num in self.terms.items():
            yield key, Fraction(num, self.den)

    def __len__(self) -> int:
        return len(self.terms)

    def __matmul__(self, other: "PauliSumOperator") -> "PauliSumOperator":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out: dict[tuple[int, int], int] = {}
        for (x1, z1), a in self.terms.items():
            for (x2, z2), b in other.terms.items():
                # Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1
                key = (x1 ^ x2, z1 ^ z2)
                val = a * b if not _parity(z1 & x2) else -a * b
                out[key] = out.get(key, 0) + val
        return PauliSumOperator(self.n, self.den * other.den, out)

    def adjoint(self) -> "PauliSumOperator":
        # (X^x Z^z)^dag = Z^z X^x = (-1)^{x.z} X^x Z^z; coefficients are real
        return PauliSumOperator(self.n, self.den, {(x, z): (-v if _parity(x & z) else v) for (x, z), v in self.terms.items()})

    def trace(self) -> Fraction:
        return Fraction(2**self.n * self.terms.get((0, 0), 0), self.den)

    def __eq__(self, other):
        if not isinstance(other, PauliSumOperator):
            return NotImplemented
        if other.n != self.n:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(*k) == other.coefficient(*k) for k in keys)

    def apply(self, ket: SparseKet) -> dict[int, Fraction]:
        """Exact image of a qubit ket, term by term."""
        if ket.D != 2 or ket.n != self.n:
            raise ValueError("dimension mismatch")
        out: dict[int, Fraction] = {}
        for (x, z), num in self.terms.items():
            for lab, amp in ket.terms.items():
                val = num * amp.as_int()
                if _parity(z & lab):
                    val = -val
                out[lab ^ x] = out.get(lab ^ x, 0) + val
        return {lab: Fraction(v, self.den) for lab, v in out.items() if v}

    def conjugate_by(self, sign_and_map) -> "PauliSumOperator":
        """Apply ``(x, z) -> (sign, x', z')`` term by term."""
        out = {}
        for (x, z), v in self.terms.items():
            sign, x2, z2 = sign_and_map(x, z)
            out[(x2, z2)] = out.get((x2, z2), 0) + sign * v
        return PauliSumOperator(self.n, self.den, out)

    def to_json_terms(self) -> list[dict]:
        full = (1 << self.n) - 1
        rows = []
        for (x, z), v in self.terms.items():
            if x not in (0, full):
                raise ValueError("JSON export covers only I and X^n shift parts")
            rows.append({"x": to_bitstring(z, self.n), "withXn": x == full, "num": v, "den": self.den})
        return rows

    def weyl_terms(self) -> list[tuple[Fraction, WeylOp]]:
        return [(c, WeylOp.xz(self.n, x, z)) for (x, z), c in self.items()]


# ---------------------------------------------------------------------------
# the X^n sector: terms (X^n)^b Z^x, b in {0, 1}


def _popcount_array(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2**n, dtype=np.int64)).astype(np.int64)


def sector_arrays(op: PauliSumOperator) -> tuple[np.ndarray, np.ndarray]:
    """Numerators of ``Z^x`` and ``X^n Z^x`` indexed by ``x``."""
    full = (1 << op.n) - 1
    c0 = np.zeros(2**op.n, dtype=object)
    c1 = np.zeros(2**op.n, dtype=object)
    for (x, z), v in op.terms.items():
        if x == 0:
            c0[z] += v
        elif x == full:
            c1[z] += v
        else:
            raise ValueError(f"term with shift part {to_bitstring(x, op.n)} outside the X^n sector")
    return _compact(c0), _compact(c1)


def _compact(arr: np.ndarray) -> np.ndarray:
    if arr.size == 0 or max(abs(int(v)) for v in arr) < _INT64_SAFE:
        return arr.astype(np.int64)
    return arr


def from_sector(n: int, c0, c1, den: int) -> PauliSumOperator:
    full = (1 << n) - 1
    terms = {}
    for z in np.flatnonzero(np.asarray(c0) != 0):
        terms[(0, int(z))] = int(c0[z])
    for z in np.flatnonzero(np.asarray(c1) != 0):
        terms[(full, int(z))] = int(c1[z])
    return PauliSumOperator(n, den, terms)


def _xor_conv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    size = u.shape[0]
    bound = int(np.abs(u.astype(object)).sum()) * int(np.abs(v.astype(object)).sum()) * size
    if bound >= _INT64_SAFE:
        u, v = u.astype(object), v.astype(object)
    full = _kernels.fwht(_kernels.fwht(u) * _kernels.fwht(v))
    return full // size


def sector_product(a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray], n: int):
    """Numerators of ``A @ B`` (over the product of denominators) for two sector sums."""
    a0, a1 = a
    b0, b1 = b
    par = 1 - 2 * (_popcount_array(n) & 1)
    r0 = _xor_conv(a0, b0) + _xor_conv(a1 * par, b1)
    r1 = _xor_conv(a0 * par, b1) + _xor_conv(a1, b0)
    return r0, r1


def sector_apply(c: tuple[np.ndarray, np.ndarray], labels: np.ndarray, amps: np.ndarray, n: int):
    """Image of padded qubit kets under a sector sum, as numerators over its denominator.

    ``(X^n)^b Z^x |u> = (-1)^{x.u} |u xor b*1...1>``, so the operator acts on
    ``|u>`` through the Walsh transforms of the two coefficient arrays.
    Returns ``(labels (..., 2S), values (..., 2S))`` with duplicates unmerged.
    """
    h0 = _kernels.fwht(c[0])
    h1 = _kernels.fwht(c[1])
    full = (1 << n) - 1
    valid = labels >= 0
    u = np.where(valid, labels, 0)
    ints = amps[..., 0] - amps[..., 1]
    keep = np.where(valid, ints, 0)
    out_labels = np.concatenate([np.where(valid, u, -1), np.where(valid, u ^ full, -1)], axis=-1)
    out_vals = np.concatenate([h0[u] * keep, h1[u] * keep], axis=-1)
    return out_labels, out_vals


def _merge_rows(labels: np.ndarray, values: np.ndarray) -> list[dict[int, int]]:
    rows = []
    for lab_row, val_row in zip(labels.tolist(), values.tolist()):
        acc: dict[int, int] = {}
        for lab, v in zip(lab_row, val_row):
            if lab >= 0 and v:
                acc[lab] = acc.get(lab, 0) + v
        rows.append({k: v for k, v in acc.items() if v})
    return rows


def build_projector(params: CodeParams) -> PauliSumOperator:
    """``2^-n (I + X^n) sum_s K(2s) sum_{|x|=2s} Z^x`` with denominator ``2^n``."""
    if params.D != 2:
        raise ValueError("the projector is built for qubit codes only")
    n = params.n
    if n > MAX_PROJECTOR_N:
        raise ValueError(f"n={n} exceeds the projector limit {MAX_PROJECTOR_N}")
    K = weight_coefficients(params)
    weights = _popcount_array(n)
    c = np.zeros(2**n, dtype=np.int64)
    even = weights % 2 == 0
    c[even] = np.asarray(K, dtype=np.int64)[weights[even] // 2]
    return from_sector(n, c, c, 2**n)


def oracle_coefficients(params: CodeParams) -> np.ndarray:
    """Numerator of ``(I + X^n) Z^x`` for every ``x``, summed directly over generators.

    ``2^-n sum_w (-1)^{x.w}``, with no weight-class formula involved.
    """
    n = params.n
    gens = np.asarray(build_generators(params), dtype=np.int64)
    xs = np.arange(2**n, dtype=np.int64)
    out = np.zeros(2**n, dtype=np.int64)
    for chunk in np.array_split(gens, max(1, gens.size // 256)):
        par = np.bitwise_count(xs[:, None] & chunk[None, :]) & 1
        out += (1 - 2 * par.astype(np.int64)).sum(axis=1)
    out[np.bitwise_count(xs) % 2 == 1] = 0
    return out


# ---------------------------------------------------------------------------
# self-check


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witness: dict | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail, "witness": self.witness}


@dataclass
class ProjectorReport:
    n: int
    M: int
    term_count: int
    coefficients: list[int]
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "term_count": self.term_count,
            "den": 2**self.n,
            "weight_coefficients": self.coefficients,
            "pass": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


def _first_diff(a: np.ndarray, b: np.ndarray):
    bad = np.flatnonzero(np.asarray(a != b))
    return None if bad.size == 0 else int(bad[0])


def projector_selfcheck(params: CodeParams, proj: PauliSumOperator | None = None,
                        basis: QuantumCodeBasis | None = None) -> ProjectorReport:
    """Idempotence, hermiticity, trace, code fixing, error annihilation and term structure.

    Pass ``proj`` to audit a modified operator against the same code.
    """
    n = params.n
    proj = build_projector(params) if proj is None else proj
    basis = build_basis(params) if basis is None else basis
    den = proj.den
    checks: list[CheckResult] = []
    try:
        c0, c1 = sector_arrays(proj)
    except ValueError as exc:
        checks.append(CheckResult("structure", False, str(exc)))
        return ProjectorReport(n, len(basis), len(proj), weight_coefficients(params), checks)
    weights = _popcount_array(n)

    # (a) P @ P == P
    r0, r1 = sector_product((c0, c1), (c0, c1), n)
    bad0, bad1 = _first_diff(r0, den * c0), _first_diff(r1, den * c1)
    wit = None
    if bad0 is not None or bad1 is not None:
        b, x = (0, bad0) if bad0 is not None else (1, bad1)
        got = (r0 if b == 0 else r1)[x]
        want = den * (c0 if b == 0 else c1)[x]
        wit = {"withXn": bool(b), "x": to_bitstring(x, n), "P2": str(Fraction(int(got), den * den)),
               "P": str(Fraction(int(want), den * den))}
    checks.append(CheckResult("idempotent", wit is None, "P @ P == P via XOR convolution", wit))

    # (b) P^dag == P: X^n Z^x picks up (-1)^{|x|}
    odd_c1 = np.flatnonzero((weights % 2 == 1) & (c1 != 0))
    checks.append(CheckResult(
        "hermitian", odd_c1.size == 0, "coefficients real; X^n Z^x self-adjoint for even |x|",
        None if odd_c1.size == 0 else {"withXn": True, "x": to_bitstring(int(odd_c1[0]), n)},
    ))

    # (c) trace
    tr = proj.trace()
    checks.append(CheckResult("trace", tr == len(basis), f"trace {tr} vs M {len(basis)}",
                              None if tr == len(basis) else {"trace": str(tr)}))

    # (d) P psi = psi
    labels, vals = sector_apply((c0, c1), basis.labels, basis.amps, n)
    images = _merge_rows(labels, vals)
    wit = None
    for a, (img, ket) in enumerate(zip(images, basis.kets)):
        want = {lab: den * amp.as_int() for lab, amp in ket.terms.items()}
        if img != want:
            wit = {"ket": a}
            break
    checks.append(CheckResult("fixes_code", wit is None, f"P psi_a = psi_a for all {len(basis)} kets", wit))

    # (e) P E psi = 0
    wit = None
    ops = weight_one_ops(n, 2)
    for E in ops:
        il, ia = apply_to_basis(E, basis)
        labels, vals = sector_apply((c0, c1), il, ia, n)
        for a, img in enumerate(_merge_rows(labels, vals)):
            if img:
                wit = {"op": E.name, "ket": a}
                break
        if wit:
            break
    checks.append(CheckResult("kills_errors", wit is None,
                              f"P E psi_a = 0 for {len(ops)} errors x {len(basis)} kets", wit))

    # (f) only (I + X^n) Z^x with |x| even, coefficient a function of |x|
    problems = []
    if _first_diff(c0, c1) is not None:
        problems.append({"reason": "I and X^n parts differ", "x": to_bitstring(_first_diff(c0, c1), n)})
    odd = np.flatnonzero((weights % 2 == 1) & ((c0 != 0) | (c1 != 0)))
    if odd.size:
        problems.append({"reason": "odd-weight Z term", "x": to_bitstring(int(odd[0]), n)})
    for w in range(n + 1):
        vals_w = c0[weights == w]
        if vals_w.size and np.any(vals_w != vals_w[0]):
            x = int(np.flatnonzero(weights == w)[np.flatnonzero(vals_w != vals_w[0])[0]])
            problems.append({"reason": "coefficient not a function of |x|", "x": to_bitstring(x, n)})
            break
    checks.append(CheckResult("structure", not problems, "(I + X^n) Z^x, |x| even, permutation covariant",
                              problems[0] if problems else None))
    return ProjectorReport(n, len(basis), len(proj), weight_coefficients(params), checks)


# ---------------------------------------------------------------------------
# audit of the alternative closed form


@dataclass
class AuditRow:
    s: int
    i: int
    m: int
    derived: int
    printed: int

    @property
    def equal(self) -> bool:
        return self.derived == self.printed


@dataclass
class AuditTable:
    n: int
    k: int
    l: int
    rows: list[AuditRow]

    def sums(self) -> list[dict]:
        out = []
        for s in sorted({r.s for r in self.rows}):
            d = sum(r.derived for r in self.rows if r.s == s)
            p = sum(r.printed for r in self.rows if r.s == s)
            out.append({"s": s, "derived": d, "printed": p, "equal": d == p})
        return out

    @property
    def mismatches(self) -> list[AuditRow]:
        return [r for r in self.rows if not r.equal]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "rows": [{"s": r.s, "i": r.i, "m": r.m, "derived": r.derived, "printed": r.printed, "equal": r.equal}
                     for r in self.rows],
            "sums": self.sums(),
            "mismatch_count": len(self.mismatches),
        }


def audit_printed_formula(params: CodeParams) -> AuditTable:
    """Compare the ``(s - t)`` closed form with the character sums, entry by entry.

    Mismatches are data, not errors.
    """
    n = params.n
    rows = []
    for s in range((n - 1) // 2 + 1):
        for i in range(params.k + 1):
            m = 2 * i + params.l
            rows.append(AuditRow(s, i, m, derived_coeff(s, m, n), printed_coeff(s, i, params.l, n)))
    return AuditTable(n, params.k, params.l, rows)
