from __future__ import annotations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadditive.classical import CodeParams
from nonadditive.cycint import CycInt, reduce_coeffs
from nonadditive.lift import QuantumCodeBasis, SparseKet, WeylOp, apply_weyl, build_basis
from nonadditive.linalg import bareiss_rank, sparse_rank
from nonadditive.verifier import error_span_rank, kl_matrix, verify_distance2, weight_one_ops
from conftest import FAMILY
from test_lift import dense_ket, dense_weyl


def test_weight_one_op_count():
    assert len(weight_one_ops(5)) == 15
    assert len(weight_one_ops(5, 3)) == 40
    assert [op.name for op in weight_one_ops(1)] == ["X", "Z", "Y"]
    assert all(op.weight == 1 for op in weight_one_ops(4, 4))


def test_kl_examples(basis5, bad_basis):
    assert not kl_matrix(basis5, WeylOp.from_pauli_string("IIZII")).any()
    assert not kl_matrix(basis5, WeylOp.from_pauli_string("XIIII")).any()
    m = kl_matrix(bad_basis, WeylOp.from_pauli_string("XIIII"))[..., 0]
    assert m[0, 1] == 2 and m[1, 0] == 2


@pytest.mark.parametrize("D", [2, 3])
def test_identity_kl_is_gram(D):
    basis = build_basis(CodeParams(0, 1, D))
    m = kl_matrix(basis, WeylOp.identity(5, D))
    want = np.zeros_like(m)
    want[np.arange(5), np.arange(5), 0] = D
    assert np.array_equal(m, reduce_coeffs(want, D))


def test_kl_matches_dense(basis5):
    vecs = np.array([dense_ket(k) for k in basis5.kets]).T
    for op in weight_one_ops(5):
        dense = vecs.conj().T @ dense_weyl(op) @ vecs
        got = kl_matrix(basis5, op)[..., 0]
        np.testing.assert_allclose(got, dense.real, atol=1e-12)


@pytest.mark.parametrize("k, l", FAMILY)
def test_family_passes(k, l):
    report = verify_distance2(build_basis(CodeParams(k, l)))
    assert report.passed and report.nondegenerate
    assert all(c.c_E == [0, 0] for c in report.checks)
    assert len(report.checks) == 3 * (4 * k + 2 * l + 3)


@pytest.mark.parametrize("n", [5, 7])
def test_qutrit_family_passes(n):
    report = verify_distance2(build_basis(CodeParams.from_n(n, 3)))
    assert report.passed and report.nondegenerate
    assert len(report.checks) == 8 * n


@pytest.mark.parametrize("D", [4, 5, 6])
def test_other_dimensions(D):
    assert verify_distance2(build_basis(CodeParams(0, 1, D))).passed


def test_bad_basis_witness(bad_basis):
    report = verify_distance2(bad_basis)
    assert not report.passed
    first = report.witnesses[0]
    assert (first["op"], first["a"], first["b"]) == ("XIIII", 0, 1)


def test_parallel_matches_serial():
    basis = build_basis(CodeParams(1, 1))
    a = verify_distance2(basis, jobs=1).as_dict()
    b = verify_distance2(basis, jobs=4).as_dict()
    assert a == b


def test_report_json_shape(basis5):
    d = verify_distance2(basis5).as_dict()
    assert {"pass", "all_c_E_zero", "exact", "checks", "witnesses", "erasure_corollary"} <= d.keys()


def test_nonzero_c_E_still_passes():
    # Z on |00> has c_E = 1: a valid detection condition, but not the nondegenerate kind
    basis = QuantumCodeBasis.from_kets([SparseKet.from_strings({"00": 1})])
    report = verify_distance2(basis)
    assert report.passed and not report.nondegenerate


@pytest.mark.parametrize("site", range(5))
def test_perturbation_breaks_code(basis5, site):
    # replace ket `site` by one whose first word sits at distance 1 from another codeword
    kets = list(basis5.kets)
    other = (site + 1) % 5
    v = 1 << (4 - other) | 1 << (4 - site)  # distance 1 from x^(other)
    kets[site] = SparseKet(5, 2, {v: CycInt.from_int(1, 2), v ^ 31: CycInt.from_int(1, 2)})
    report = verify_distance2(QuantumCodeBasis.from_kets(kets))
    assert not report.passed


# --- ranks ---


def test_span_rank_n5(basis5):
    assert error_span_rank(basis5) == 32


def test_span_rank_single_ket():
    basis = QuantumCodeBasis.from_kets([SparseKet.from_strings({"000": 1, "111": 1})])
    assert error_span_rank(basis) == 8


def test_span_rank_empty():
    assert error_span_rank(QuantumCodeBasis.empty(5)) == 0


def test_span_rank_n7_against_sympy():
    basis = build_basis(CodeParams(1, 0))
    vecs = [dense_ket(k).real for k in basis.kets]
    for op in weight_one_ops(7):
        vecs += [dense_ket(apply_weyl(op, k)).real for k in basis.kets]
    want = sympy.Matrix(np.rint(vecs).astype(int).tolist()).rank()
    assert error_span_rank(basis) == want


matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=0, max_size=7)
)


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_bareiss_matches_sympy(rows):
    want = sympy.Matrix(rows).rank() if rows else 0
    assert bareiss_rank(rows) == want


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_sparse_rank_matches_dense(rows):
    vecs = [{j: v for j, v in enumerate(r) if v} for r in rows]
    assert sparse_rank(vecs) == bareiss_rank(rows)
