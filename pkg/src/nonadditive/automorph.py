"""Symmetries of the qubit codes: ``(X^n)^b Z^f`` after a site permutation.

Within this family a candidate preserves the codespace exactly when ``|f|``
is even. The sweep below checks that split exhaustively over ``(b, f)`` for
a seeded set of permutations, with exact integer arithmetic. Local unitaries
outside the family are only probed by a fixed set of counterexamples in
floating point; nothing here covers the full continuum of local unitaries.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .classical import CodeParams
from .lift import QuantumCodeBasis, SparseKet, build_basis, overlap_matrix
from .linalg import projected_norm2
from .projector import PauliSumOperator, _parity

log = logging.getLogger(__name__)

MAX_SWEEP_N = 11
MAX_DENSE_N = 7
DEFECT_THRESHOLD = 1e-6

SCOPE_NOTE = (
    "Exhaustive over b in {0,1} and every f in {0,1}^n for the listed permutations, "
    "exact arithmetic. Local unitaries outside this family are only tested through the "
    "counterexample suite (floating point); the full converse is not machine-checked."
)


@dataclass(frozen=True)
class AutomorphismCandidate:
    """``(X^n)^b Z^f`` composed after the site permutation ``perm``.

    ``perm[i]`` is where the content of site ``i`` goes; ``f`` is a packed
    mask with site 0 as the most significant bit.
    """

    n: int
    b: int = 0
    f: int = 0
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        perm = tuple(range(self.n)) if self.perm is None else tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(self.n)):
            raise ValueError(f"not a permutation of {self.n} sites: {perm}")
        if self.b not in (0, 1):
            raise ValueError("b must be 0 or 1")
        if not 0 <= self.f < (1 << self.n):
            raise ValueError("f does not fit in n bits")
        object.__setattr__(self, "perm", perm)

    @property
    def f_weight(self) -> int:
        return self.f.bit_count()

    def permute_mask(self, mask: int) -> int:
        out = 0
        n = self.n
        for i in range(n):
            if (mask >> (n - 1 - i)) & 1:
                out |= 1 << (n - 1 - self.perm[i])
        return out

    def describe(self) -> dict:
        return {"b": self.b, "f": format(self.f, f"0{self.n}b"), "perm": list(self.perm)}


def compose(c2: AutomorphismCandidate, c1: AutomorphismCandidate) -> tuple[int, AutomorphismCandidate]:
    """``c2 after c1`` as ``(sign, candidate)``.

    Moving ``Z^{f2}`` past ``(X^n)^{b1}`` costs ``(-1)^{b1 |f2|}``; permutations
    carry ``f1`` along with them.
    """
    if c1.n != c2.n:
        raise ValueError("dimension mismatch")
    sign = -1 if (c1.b and c2.f_weight % 2) else 1
    f = c2.f ^ c2.permute_mask(c1.f)
    perm = tuple(c2.perm[c1.perm[i]] for i in range(c1.n))
    return sign, AutomorphismCandidate(c1.n, c1.b ^ c2.b, f, perm)


def apply_candidate_arrays(c: AutomorphismCandidate, labels: np.ndarray, amps: np.ndarray):
    """Images of padded qubit support arrays: permute, then phase, then flip."""
    if amps.shape[-1] != 2:
        raise ValueError("candidates act on qubit codes only")
    perm = np.asarray(c.perm, dtype=np.int64)
    moved = _kernels.permute_bits(labels, perm, c.n)
    valid = moved >= 0
    signs = 1 - 2 * (np.bitwise_count(np.where(valid, moved, 0) & c.f).astype(np.int64) & 1)
    out_labels = np.where(valid, moved ^ (((1 << c.n) - 1) * c.b), -1)
    return out_labels, amps * signs[..., None]


def apply_candidate(c: AutomorphismCandidate, ket: SparseKet) -> SparseKet:
    if ket.D != 2 or ket.n != c.n:
        raise ValueError(f"dimension mismatch: ket (n={ket.n}, D={ket.D}), candidate n={c.n}")
    labels, amps = ket.arrays()
    new_labels, new_amps = apply_candidate_arrays(c, labels, amps)
    return SparseKet.from_arrays(ket.n, 2, new_labels, new_amps)


def _gram_scale(basis: QuantumCodeBasis) -> int | None:
    """The ``g`` in ``Gram = g I`` (qubit integer amplitudes), or None."""
    gram = basis.gram()[..., 0]
    g = int(gram[0, 0]) if len(basis) else 0
    if np.array_equal(gram, g * np.eye(len(basis), dtype=np.int64)):
        return g
    return None


def _norms2(labels: np.ndarray, amps: np.ndarray) -> list[int]:
    out = []
    ints = (amps[..., 0] - amps[..., 1]).tolist()
    for lab_row, amp_row in zip(labels.tolist(), ints):
        acc: dict[int, int] = {}
        for lab, v in zip(lab_row, amp_row):
            if lab >= 0:
                acc[lab] = acc.get(lab, 0) + v
        out.append(sum(v * v for v in acc.values()))
    return out


def preserves_codespace(c: AutomorphismCandidate, basis: QuantumCodeBasis, *, gram_scale: int | None = -1) -> bool:
    """Exact test that every basis image stays in the span of the basis."""
    if basis.D != 2 or basis.n != c.n:
        raise ValueError("dimension mismatch")
    if gram_scale == -1:
        gram_scale = _gram_scale(basis)
    img_labels, img_amps = apply_candidate_arrays(c, basis.labels, basis.amps)
    overlaps = overlap_matrix(basis, img_labels, img_amps)[..., 0]
    norms = _norms2(img_labels, img_amps)
    if gram_scale:
        proj = (overlaps * overlaps).sum(axis=0)
        return all(int(p) == gram_scale * nm for p, nm in zip(proj.tolist(), norms))
    gram = basis.gram()[..., 0].tolist()
    for b, nm in enumerate(norms):
        if projected_norm2(gram, overlaps[:, b].tolist()) != Fraction(nm):
            return False
    return True


def sample_permutations(n: int, samples: int, seed: int) -> list[tuple[int, ...]]:
    """Identity, the cyclic shift, then ``samples`` seeded random permutations."""
    rng = np.random.default_rng(seed)
    perms = [tuple(range(n)), tuple((i + 1) % n for i in range(n))]
    perms += [tuple(int(p) for p in rng.permutation(n)) for _ in range(samples)]
    return perms


@dataclass
class Lemma2Report:
    n: int
    seed: int
    permutations: list[list[int]]
    passes_per_permutation: list[int] = field(default_factory=list)
    candidates_per_permutation: int = 0
    violations: list[dict] = field(default_factory=list)
    scope: str = SCOPE_NOTE

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "permutations": self.permutations,
            "candidates_per_permutation": self.candidates_per_permutation,
            "passes_per_permutation": self.passes_per_permutation,
            "parity_law_holds": self.passed,
            "violations": self.violations,
            "scope": self.scope,
        }


def verify_lemma2(params: CodeParams, perm_samples: int = 10, seed: int = 0, jobs: int = 1,
                  basis: QuantumCodeBasis | None = None) -> Lemma2Report:
    """Sweep all ``(b, f)`` for each sampled permutation; preserved iff ``|f|`` even."""
    if params.D != 2:
        raise ValueError("automorphism sweep is for qubit codes")
    n = params.n
    if n > MAX_SWEEP_N:
        raise ValueError(f"n={n} exceeds the exhaustive sweep limit {MAX_SWEEP_N}")
    basis = build_basis(params) if basis is None else basis
    scale = _gram_scale(basis)
    perms = sample_permutations(n, perm_samples, seed)
    log.info("lemma2 sweep n=%d seed=%d permutations=%s", n, seed, perms)
    report = Lemma2Report(n, seed, [list(p) for p in perms], candidates_per_permutation=2 * 2**n)

    def run(perm):
        passes, bad = 0, []
        for b in (0, 1):
            for f in range(2**n):
                c = AutomorphismCandidate(n, b, f, perm)
                ok = preserves_codespace(c, basis, gram_scale=scale)
                passes += ok
                if ok != (f.bit_count() % 2 == 0):
                    bad.append({**c.describe(), "preserves": ok})
        return passes, bad

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, perms))
    else:
        results = [run(p) for p in perms]
    for passes, bad in results:
        report.passes_per_permutation.append(passes)
        report.violations.extend(bad)
    return report


def conjugate_pauli_sum(c: AutomorphismCandidate, op: PauliSumOperator) -> PauliSumOperator:
    """``C P C^dag`` term by term.

    Permuting sites relabels ``(x, z)``; ``Z^f`` contributes ``(-1)^{f.x}`` and
    ``X^n`` contributes ``(-1)^{|z|}``.
    """
    if op.n != c.n:
        raise ValueError("dimension mismatch")

    def move(x, z):
        x2, z2 = c.permute_mask(x), c.permute_mask(z)
        flips = _parity(c.f & x2) ^ (c.b & _parity(z2))
        return (-1 if flips else 1), x2, z2

    return op.conjugate_by(move)


# ---------------------------------------------------------------------------
# dense counterexamples


def _dense_basis(basis: QuantumCodeBasis) -> np.ndarray:
    dim = 2**basis.n
    out = np.zeros((dim, len(basis)), dtype=complex)
    for a, ket in enumerate(basis.kets):
        for lab, amp in ket.terms.items():
            out[lab, a] = amp.to_complex()
    q, _ = np.linalg.qr(out)
    return q


def single_site_unitary(gate: np.ndarray, site: int, n: int) -> np.ndarray:
    """``gate`` on ``site`` (site 0 is the most significant qubit)."""
    return np.kron(np.kron(np.eye(2**site), gate), np.eye(2 ** (n - site - 1)))


COUNTEREXAMPLES = {
    "hadamard_site0": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "phase_site0": np.diag([1, 1j]),
    "x_site0": np.array([[0, 1], [1, 0]], dtype=complex),
}


def projection_defect(q: np.ndarray, unitary: np.ndarray) -> float:
    """Largest norm of the out-of-code component of ``U q_a`` over the columns."""
    img = unitary @ q
    resid = img - q @ (q.conj().T @ img)
    return float(np.linalg.norm(resid, axis=0).max()) if resid.size else 0.0


@dataclass
class CounterexampleReport:
    n: int
    defects: dict[str, float]
    control_defect: float
    threshold: float = DEFECT_THRESHOLD

    @property
    def all_fail(self) -> bool:
        return all(d > self.threshold for d in self.defects.values())

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "threshold": self.threshold,
            "defects": self.defects,
            "all_fail_preservation": self.all_fail,
            "control_X_all_sites_defect": self.control_defect,
            "scope": SCOPE_NOTE,
        }


def counterexample_suite(params: CodeParams) -> CounterexampleReport:
    """Out-of-family single-site unitaries, each expected to leave the codespace."""
    n = params.n
    if params.D != 2 or n > MAX_DENSE_N:
        raise ValueError(f"counterexamples need a qubit code with n <= {MAX_DENSE_N}")
    q = _dense_basis(build_basis(params))
    defects = {name: projection_defect(q, single_site_unitary(g, 0, n)) for name, g in COUNTEREXAMPLES.items()}
    xall = np.array([[1.0]])
    for _ in range(n):
        xall = np.kron(xall, np.array([[0, 1], [1, 0]]))
    return CounterexampleReport(n, defects, projection_defect(q, xall))
