"""Quantum code bases built from classical codes, and the Weyl operators acting on them.

Basis labels are length-n strings over Z_D packed big-endian in radix D
(position 0 is the most significant digit), so for qubits the packed label
of ``10000`` is 16. Amplitudes are exact elements of Z[w] stored as integer
coefficient vectors of length D (see :mod:`nonadditive.cycint`).
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .classical import ClassicalCode, CodeParams, build_generators, complement_pairs, full_code, lemma1_admissible
from .cycint import CycInt, reduce_coeffs

_DIGITS = string.digits + string.ascii_lowercase
_LABEL_LIMIT = 2**63 - 1


def check_label_space(n: int, D: int) -> None:
    if D < 2:
        raise ValueError(f"D must be >= 2, got {D}")
    if D**n > _LABEL_LIMIT:
        raise ValueError(f"D^n = {D}^{n} does not fit in a 63-bit label")


def pack_digits(digits, D: int) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    n = digits.shape[-1]
    weights = D ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (digits * weights).sum(axis=-1)


def unpack_labels(labels, n: int, D: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    weights = D ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (labels[..., None] // weights) % D


def label_to_str(label: int, n: int, D: int) -> str:
    if D > len(_DIGITS):
        raise ValueError(f"no text form for D={D}")
    return "".join(_DIGITS[d] for d in unpack_labels(label, n, D).tolist())


def str_to_label(text: str, D: int) -> int:
    digits = []
    for ch in text:
        d = _DIGITS.find(ch.lower())
        if d < 0 or d >= D:
            raise ValueError(f"bad digit {ch!r} for D={D} in {text!r}")
        digits.append(d)
    return int(pack_digits(digits, D))


def _global_phase(c: int, D: int) -> tuple[int, int]:
    """Write exp(i pi c / D) as ``sign * w**e``; returns ``(sign, e)``."""
    c %= 2 * D
    if c % 2 == 0:
        return 1, c // 2
    if D % 2 == 0:
        raise ValueError(f"phase exp(i pi {c}/{D}) is not in Z[w] for even D")
    # exp(i pi / D) = -w^((D+1)/2) for odd D
    return (-1) ** c, (c * (D + 1) // 2) % D


# ---------------------------------------------------------------------------
# Weyl operators


@dataclass(frozen=True)
class WeylOp:
    """``exp(i pi c / D) X^x Z^z``: Z acts first, then the shift.

    For qubits ``x = z = 1`` on a site is the real matrix ``XZ``, not the
    Hermitian Pauli Y (they differ by a factor of i).
    """

    n: int
    D: int
    x: tuple[int, ...]
    z: tuple[int, ...]
    c: int = 0

    def __post_init__(self):
        if len(self.x) != self.n or len(self.z) != self.n:
            raise ValueError("x and z must have length n")
        object.__setattr__(self, "x", tuple(int(v) % self.D for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % self.D for v in self.z))
        object.__setattr__(self, "c", int(self.c) % (2 * self.D))

    @classmethod
    def identity(cls, n: int, D: int = 2) -> "WeylOp":
        return cls(n, D, (0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, site: int, a: int, b: int, D: int = 2) -> "WeylOp":
        """``X^a Z^b`` on one site."""
        if not 0 <= site < n:
            raise ValueError(f"site {site} out of range for n={n}")
        x = [0] * n
        z = [0] * n
        x[site] = a
        z[site] = b
        return cls(n, D, tuple(x), tuple(z))

    @classmethod
    def from_pauli_string(cls, text: str) -> "WeylOp":
        """Qubit operator from letters I, X, Z, Y (Y meaning XZ)."""
        table = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
        try:
            pairs = [table[ch] for ch in text.upper()]
        except KeyError as exc:
            raise ValueError(f"bad Pauli letter in {text!r}") from exc
        return cls(len(text), 2, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def xz(cls, n: int, x: int, z: int) -> "WeylOp":
        """Qubit ``X^x Z^z`` from packed bit masks."""
        bits = lambda m: tuple((m >> (n - 1 - i)) & 1 for i in range(n))
        return cls(n, 2, bits(x), bits(z))

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    @property
    def x_label(self) -> int:
        return int(pack_digits(self.x, self.D))

    @property
    def z_label(self) -> int:
        return int(pack_digits(self.z, self.D))

    def compose(self, other: "WeylOp") -> "WeylOp":
        """``self @ other`` (other acts first)."""
        self._check(other)
        # Z^a X^b = w^(a.b) X^b Z^a
        twist = sum(a * b for a, b in zip(self.z, other.x))
        x = tuple(a + b for a, b in zip(self.x, other.x))
        z = tuple(a + b for a, b in zip(self.z, other.z))
        return WeylOp(self.n, self.D, x, z, self.c + other.c + 2 * twist)

    __matmul__ = compose

    def adjoint(self) -> "WeylOp":
        xz = sum(a * b for a, b in zip(self.x, self.z))
        return WeylOp(self.n, self.D, tuple(-a for a in self.x), tuple(-b for b in self.z), -self.c + 2 * xz)

    def _check(self, other) -> None:
        if (self.n, self.D) != (other.n, other.D):
            raise ValueError(f"dimension mismatch: (n={self.n}, D={self.D}) vs (n={other.n}, D={other.D})")

    @property
    def name(self) -> str:
        if self.D == 2:
            letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
            body = "".join(letters[p] for p in zip(self.x, self.z))
        else:
            parts = [f"X{a}Z{b}@{i}" for i, (a, b) in enumerate(zip(self.x, self.z)) if a or b]
            body = ".".join(parts) or "I"
        return body if self.c == 0 else f"e^(i pi {self.c}/{self.D}) {body}"

    def __repr__(self):
        return f"WeylOp({self.name!r}, D={self.D})"


def apply_weyl_arrays(op: WeylOp, labels: np.ndarray, amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Apply ``op`` to padded support arrays ``labels (..., S)``, ``amps (..., S, D)``."""
    n, D = op.n, op.D
    valid = labels >= 0
    digits = unpack_labels(np.where(valid, labels, 0), n, D)
    x = np.asarray(op.x, dtype=np.int64)
    z = np.asarray(op.z, dtype=np.int64)
    new_labels = np.where(valid, pack_digits((digits + x) % D, D), -1)
    sign, e0 = _global_phase(op.c, D)
    shift = ((digits * z).sum(axis=-1) + e0) % D
    # multiply by w^shift: rotate coefficient vectors
    idx = (np.arange(D)[None, :] - shift.reshape(-1, 1)) % D
    flat = amps.reshape(-1, D)
    new_amps = np.take_along_axis(flat, idx, axis=1).reshape(amps.shape) * sign
    return new_labels, new_amps


# ---------------------------------------------------------------------------
# sparse kets


@dataclass(frozen=True)
class SparseKet:
    """Finitely supported, unnormalized ket with exact Z[w] amplitudes."""

    n: int
    D: int
    terms: Mapping[int, CycInt]

    def __post_init__(self):
        check_label_space(self.n, self.D)
        clean = {}
        for lab, amp in self.terms.items():
            if not isinstance(amp, CycInt):
                amp = CycInt.from_int(amp, self.D)
            if amp.D != self.D:
                raise ValueError("amplitude ring does not match D")
            if not amp.is_zero():
                clean[int(lab)] = amp
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_strings(cls, mapping: Mapping[str, int | CycInt], D: int = 2) -> "SparseKet":
        lengths = {len(s) for s in mapping}
        if len(lengths) != 1:
            raise ValueError("labels must share one length")
        n = lengths.pop()
        return cls(n, D, {str_to_label(s, D): a for s, a in mapping.items()})

    @classmethod
    def from_arrays(cls, n: int, D: int, labels, amps) -> "SparseKet":
        terms: dict[int, CycInt] = {}
        for lab, amp in zip(np.asarray(labels).tolist(), np.asarray(amps).tolist()):
            if lab < 0:
                continue
            prev = terms.get(lab)
            amp = CycInt(tuple(amp))
            terms[lab] = amp if prev is None else prev + amp
        return cls(n, D, terms)

    def arrays(self, width: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        width = len(self.terms) if width is None else width
        labels = np.full(width, -1, dtype=np.int64)
        amps = np.zeros((width, self.D), dtype=np.int64)
        for q, (lab, amp) in enumerate(self.terms.items()):
            labels[q] = lab
            amps[q] = amp.coeffs
        return labels, amps

    @property
    def support(self) -> list[int]:
        return list(self.terms)

    def amplitude(self, label: int | str) -> CycInt:
        if isinstance(label, str):
            label = str_to_label(label, self.D)
        return self.terms.get(label, CycInt.zero(self.D))

    def __add__(self, other: "SparseKet") -> "SparseKet":
        _match(self, other)
        terms = dict(self.terms)
        for lab, amp in other.terms.items():
            terms[lab] = terms[lab] + amp if lab in terms else amp
        return SparseKet(self.n, self.D, terms)

    def __neg__(self) -> "SparseKet":
        return SparseKet(self.n, self.D, {lab: -a for lab, a in self.terms.items()})

    def __sub__(self, other: "SparseKet") -> "SparseKet":
        return self + (-other)

    def scale(self, factor: int | CycInt) -> "SparseKet":
        return SparseKet(self.n, self.D, {lab: a * factor for lab, a in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseKet):
            return NotImplemented
        if (self.n, self.D) != (other.n, other.D):
            return False
        return not (self - other).terms

    def __hash__(self):
        return hash((self.n, self.D, tuple(sorted((lab, a.reduced()) for lab, a in self.terms.items()))))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "terms": [{"label": label_to_str(lab, self.n, self.D), "amp": list(a.coeffs)} for lab, a in self.terms.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "SparseKet":
        n, D = int(data["n"]), int(data["D"])
        terms: dict[int, CycInt] = {}
        for t in data["terms"]:
            lab = t["label"]
            if len(lab) != n:
                raise ValueError(f"label {lab!r} does not have length {n}")
            amp = t["amp"]
            amp = CycInt.from_int(amp, D) if isinstance(amp, int) else CycInt(tuple(amp))
            key = str_to_label(lab, D)
            terms[key] = terms[key] + amp if key in terms else amp
        return cls(n, D, terms)

    @classmethod
    def from_json(cls, text: str) -> "SparseKet":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        """``|10000> + |01111>`` style; falls back to explicit amplitudes."""
        parts = []
        for lab, amp in self.terms.items():
            s = label_to_str(lab, self.n, self.D)
            red = amp.reduced()
            if red == (1,) + (0,) * (self.D - 1):
                parts.append(f"+ |{s}>")
            elif red == (-1,) + (0,) * (self.D - 1):
                parts.append(f"- |{s}>")
            else:
                parts.append(f"+ {list(amp.coeffs)}|{s}>")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    def __repr__(self):
        return f"SparseKet({self.to_text()})"


def _match(a, b) -> None:
    if (a.n, a.D) != (b.n, b.D):
        raise ValueError(f"dimension mismatch: (n={a.n}, D={a.D}) vs (n={b.n}, D={b.D})")


def apply_weyl(op: WeylOp, ket: SparseKet) -> SparseKet:
    _match(op, ket)
    labels, amps = ket.arrays()
    new_labels, new_amps = apply_weyl_arrays(op, labels, amps)
    return SparseKet.from_arrays(ket.n, ket.D, new_labels, new_amps)


def inner(a: SparseKet, b: SparseKet) -> CycInt:
    """``<a|b>``, conjugating the amplitudes of ``a``."""
    _match(a, b)
    total = CycInt.zero(a.D)
    small, large = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    for lab in small.terms:
        if lab in large.terms:
            total = total + a.terms[lab].conj() * b.terms[lab]
    return total


# ---------------------------------------------------------------------------
# code bases


@dataclass
class QuantumCodeBasis:
    """Ordered basis kets stored as padded arrays.

    ``labels`` has shape ``(M, S)`` with ``-1`` padding and ``amps`` has shape
    ``(M, S, D)``. ``index`` maps the family index ``(i, j)`` (weight class
    ``2i+l``, position ``j`` within it) to the basis position when the basis
    came from :func:`build_basis`.
    """

    n: int
    D: int
    labels: np.ndarray
    amps: np.ndarray
    params: CodeParams | None = None
    index: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        check_label_space(self.n, self.D)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.amps = np.asarray(self.amps, dtype=np.int64)
        if self.labels.ndim != 2 or self.amps.shape != self.labels.shape + (self.D,):
            raise ValueError(f"bad basis array shapes {self.labels.shape} / {self.amps.shape}")

    def __len__(self) -> int:
        return self.labels.shape[0]

    @property
    def M(self) -> int:
        return len(self)

    @classmethod
    def from_kets(cls, kets: Sequence[SparseKet], params: CodeParams | None = None) -> "QuantumCodeBasis":
        if not kets:
            raise ValueError("empty basis: pass n and D explicitly via QuantumCodeBasis.empty")
        n, D = kets[0].n, kets[0].D
        for k in kets:
            _match(kets[0], k)
        width = max(len(k.terms) for k in kets)
        labels = np.full((len(kets), width), -1, dtype=np.int64)
        amps = np.zeros((len(kets), width, D), dtype=np.int64)
        for a, k in enumerate(kets):
            labels[a], amps[a] = k.arrays(width)
        return cls(n, D, labels, amps, params)

    @classmethod
    def empty(cls, n: int, D: int = 2) -> "QuantumCodeBasis":
        return cls(n, D, np.zeros((0, 0), np.int64), np.zeros((0, 0, D), np.int64))

    @cached_property
    def kets(self) -> list[SparseKet]:
        return [SparseKet.from_arrays(self.n, self.D, self.labels[a], self.amps[a]) for a in range(len(self))]

    def orbits_disjoint(self) -> bool:
        """No basis label appears in two kets or twice in one ket."""
        flat = self.labels[self.labels >= 0]
        return np.unique(flat).size == flat.size

    def gram(self) -> np.ndarray:
        """Exact Gram matrix as ``(M, M, D)`` reduced coefficient vectors."""
        return overlap_matrix(self, self.labels, self.amps)

    def to_dict(self) -> dict:
        out = {"n": self.n, "D": self.D, "M": len(self), "kets": [k.to_dict()["terms"] for k in self.kets]}
        if self.params is not None:
            out["params"] = self.params.as_dict()
        return out


def overlap_matrix(basis: QuantumCodeBasis, img_labels: np.ndarray, img_amps: np.ndarray) -> np.ndarray:
    """Dense ``<basis_a | image_b>`` as ``(M, B, D)`` canonical coefficients."""
    rows, cols, coeffs = _kernels.overlap_coo(basis.labels, basis.amps, img_labels, img_amps)
    out = np.zeros((len(basis), img_labels.shape[0], basis.D), dtype=np.int64)
    np.add.at(out, (rows, cols), coeffs)
    return reduce_coeffs(out, basis.D)


def lift_qubit(code: ClassicalCode) -> QuantumCodeBasis:
    """One ket ``|v> + |~v>`` per complement pair, in generator order."""
    ok, diag = lemma1_admissible(code)
    if not ok:
        raise ValueError(f"inadmissible code: {diag.message}")
    reps = complement_pairs(code)
    mask = (1 << code.n) - 1
    labels = np.array([[v, v ^ mask] for v in reps], dtype=np.int64)
    amps = np.zeros(labels.shape + (2,), dtype=np.int64)
    amps[..., 0] = 1
    return QuantumCodeBasis(code.n, 2, labels, amps)


def lift_qudit(generators: Sequence[int], D: int, n: int | None = None) -> QuantumCodeBasis:
    """One ket ``sum_c |v + c*(1...1) mod D>`` per binary generator ``v``.

    Raises ``ValueError`` when two generators share an orbit under the
    all-ones shift, since their kets would then coincide.
    """
    gens = list(generators)
    if n is None:
        if not gens:
            raise ValueError("cannot infer n from an empty generator list")
        n = max(int(g).bit_length() for g in gens)
    check_label_space(n, D)
    bits = unpack_labels(np.asarray(gens, dtype=np.int64), n, 2)
    if bits.size and bits.max() > 1:
        raise ValueError("generators must be binary strings")
    shifts = np.arange(D, dtype=np.int64)
    orbit_digits = (bits[:, None, :] + shifts[None, :, None]) % D
    labels = pack_digits(orbit_digits, D).reshape(len(gens), D)
    amps = np.zeros(labels.shape + (D,), dtype=np.int64)
    amps[..., 0] = 1
    basis = QuantumCodeBasis(n, D, labels, amps)
    if not basis.orbits_disjoint():
        flat = labels.ravel()
        vals, counts = np.unique(flat, return_counts=True)
        dup = int(vals[counts > 1][0])
        raise ValueError(f"orbit collision at label {label_to_str(dup, n, D)}")
    return basis


def build_basis(params: CodeParams) -> QuantumCodeBasis:
    """The family code for ``params`` with its ``(i, j)`` index map."""
    gens = build_generators(params)
    if params.D == 2:
        basis = lift_qubit(full_code(params))
    else:
        basis = lift_qudit(gens, params.D, params.n)
    basis.params = params
    pos = 0
    for i, w in enumerate(params.weights):
        count = sum(1 for g in gens if g.bit_count() == w)
        for j in range(count):
            basis.index[(i, j)] = pos
            pos += 1
    return basis


def apply_to_basis(op: WeylOp, basis: QuantumCodeBasis) -> tuple[np.ndarray, np.ndarray]:
    _match(op, basis)
    return apply_weyl_arrays(op, basis.labels, basis.amps)


def kets_equal(a: QuantumCodeBasis, b: QuantumCodeBasis) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a.kets, b.kets))
