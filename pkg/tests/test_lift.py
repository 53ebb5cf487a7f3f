from __future__ import annotations

import cmath
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadditive.classical import ClassicalCode, CodeParams, build_generators
from nonadditive.cycint import CycInt, cyclotomic_poly, reduce_coeffs
from nonadditive.lift import (
    QuantumCodeBasis,
    SparseKet,
    WeylOp,
    apply_weyl,
    build_basis,
    check_label_space,
    inner,
    kets_equal,
    label_to_str,
    lift_qubit,
    lift_qudit,
    str_to_label,
)

DIMS = [2, 3, 4, 5, 6]


def dense_weyl(op: WeylOp) -> np.ndarray:
    """Reference matrix: phase * X^x Z^z built as a Kronecker product."""
    D = op.D
    w = cmath.exp(2j * cmath.pi / D)
    X = np.roll(np.eye(D), 1, axis=0)
    Z = np.diag([w**j for j in range(D)])
    out = np.array([[1.0 + 0j]])
    for a, b in zip(op.x, op.z):
        out = np.kron(out, np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b))
    return cmath.exp(1j * cmath.pi * op.c / D) * out


def dense_ket(ket: SparseKet) -> np.ndarray:
    v = np.zeros(ket.D**ket.n, dtype=complex)
    for lab, amp in ket.terms.items():
        v[lab] = amp.to_complex()
    return v


def weyl_ops(n: int, D: int):
    digits = st.lists(st.integers(0, D - 1), min_size=n, max_size=n)
    # even-D phases must stay in Z[w]
    phase = st.integers(0, D - 1).map(lambda c: 2 * c) if D % 2 == 0 else st.integers(0, 2 * D - 1)
    return st.builds(lambda x, z, c: WeylOp(n, D, tuple(x), tuple(z), c), digits, digits, phase)


def cyc(D: int):
    return st.lists(st.integers(-5, 5), min_size=D, max_size=D).map(lambda c: CycInt(tuple(c)))


# --- cyclotomic integers ---


@pytest.mark.parametrize("D, phi", [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1))])
def test_cyclotomic_poly(D, phi):
    assert cyclotomic_poly(D) == phi


@pytest.mark.parametrize("D", DIMS)
def test_root_sum_vanishes(D):
    total = CycInt.zero(D)
    for e in range(D):
        total = total + CycInt.root(e, D)
    assert total.is_zero() == (D > 1)


@pytest.mark.parametrize("D", DIMS)
@given(data=st.data())
@settings(max_examples=30)
def test_cycint_ring_matches_complex(D, data):
    a, b = data.draw(cyc(D)), data.draw(cyc(D))
    for got, want in [(a + b, a.to_complex() + b.to_complex()),
                      (a * b, a.to_complex() * b.to_complex()),
                      (a.conj(), a.to_complex().conjugate())]:
        assert abs(got.to_complex() - want) < 1e-9
    assert (a - a).is_zero()
    assert (abs(a.to_complex()) < 1e-9) == a.is_zero()


def test_composite_zero_is_exact():
    # 1 + w^2 = 0 for D = 4; 1 + w^3 = 0 and w^2 - w + 1 = 0 for D = 6
    assert CycInt((1, 0, 1, 0)).is_zero()
    assert CycInt((1, 0, 0, 1, 0, 0)).is_zero()
    assert CycInt((1, -1, 1, 0, 0, 0)).is_zero()
    assert not CycInt((1, 1, 0, 0, 0, 0)).is_zero()


def test_reduce_coeffs_vectorized():
    arr = np.array([[1, 1, 1], [2, 0, 0]])
    assert reduce_coeffs(arr, 3).tolist() == [[0, 0, 0], [2, 0, 0]]


# --- labels ---


def test_label_strings():
    assert str_to_label("10000", 2) == 16
    assert label_to_str(16, 5, 2) == "10000"
    assert str_to_label("21", 3) == 7
    with pytest.raises(ValueError):
        check_label_space(64, 2)


# --- Weyl operators ---


def test_pauli_names():
    assert WeylOp.from_pauli_string("XIZIY").name == "XIZIY"
    assert WeylOp.single(5, 0, 1, 0).name == "XIIII"


@pytest.mark.parametrize("D", DIMS)
@given(data=st.data())
@settings(max_examples=20, deadline=None)
def test_compose_matches_dense(D, data):
    n = 2
    a, b = data.draw(weyl_ops(n, D)), data.draw(weyl_ops(n, D))
    np.testing.assert_allclose(dense_weyl(a @ b), dense_weyl(a) @ dense_weyl(b), atol=1e-9)
    np.testing.assert_allclose(dense_weyl(a.adjoint()), dense_weyl(a).conj().T, atol=1e-9)


@pytest.mark.parametrize("D", DIMS)
@given(data=st.data())
@settings(max_examples=20, deadline=None)
def test_apply_matches_dense(D, data):
    n = 3
    op = data.draw(weyl_ops(n, D))
    mapping = data.draw(st.dictionaries(st.integers(0, D**n - 1), st.integers(-3, 3), min_size=1, max_size=6))
    ket = SparseKet(n, D, {k: CycInt.from_int(v, D) for k, v in mapping.items()})
    np.testing.assert_allclose(dense_ket(apply_weyl(op, ket)), dense_weyl(op) @ dense_ket(ket), atol=1e-9)


def test_x_error_on_n5_ket():
    ket = SparseKet.from_strings({"10000": 1, "01111": 1})
    out = apply_weyl(WeylOp.from_pauli_string("XIIII"), ket)
    assert out == SparseKet.from_strings({"00000": 1, "11111": 1})


def test_y_sign_convention():
    # XZ|1> = -|0>
    out = apply_weyl(WeylOp.from_pauli_string("Y"), SparseKet.from_strings({"1": 1}))
    assert out.amplitude("0").as_int() == -1


# --- kets ---


def test_ket_text_and_json_roundtrip():
    ket = SparseKet.from_strings({"10000": 1, "01111": 1})
    assert ket.to_text() == "|10000> + |01111>"
    assert SparseKet.from_json(ket.to_json()) == ket
    data = json.loads(ket.to_json())
    assert data["n"] == 5 and data["D"] == 2 and len(data["terms"]) == 2


def test_zero_terms_dropped():
    a = SparseKet.from_strings({"00": 1, "11": 1})
    assert not (a - a).terms


def test_inner_products():
    a = SparseKet.from_strings({"00": 1, "11": 1})
    b = SparseKet.from_strings({"00": 1, "11": -1})
    assert inner(a, a).as_int() == 2
    assert inner(a, b).is_zero()


# --- bases ---


def test_n5_basis_text(fixtures, basis5):
    lines = [k.to_text() for k in basis5.kets]
    assert "\n".join(lines) + "\n" == (fixtures / "n5_kets.txt").read_text()
    assert basis5.index[(0, 3)] == 3


def test_n3_basis():
    basis = build_basis(CodeParams(0, 0))
    assert [k.to_text() for k in basis.kets] == ["|000> + |111>"]


@pytest.mark.parametrize("k, l", [(0, 1), (1, 0), (1, 1)])
def test_qubit_gram_is_2I(k, l):
    basis = build_basis(CodeParams(k, l))
    gram = basis.gram()[..., 0]
    assert np.array_equal(gram, 2 * np.eye(len(basis), dtype=np.int64))


@pytest.mark.parametrize("D", [3, 4, 5])
@pytest.mark.parametrize("n", [5, 7])
def test_qudit_gram_is_DI(D, n):
    basis = build_basis(CodeParams.from_n(n, D))
    assert basis.orbits_disjoint()
    want = np.zeros((len(basis), len(basis), D), dtype=np.int64)
    want[np.arange(len(basis)), np.arange(len(basis)), 0] = D
    assert np.array_equal(basis.gram(), reduce_coeffs(want, D))


def test_qudit_n5_kets():
    basis = build_basis(CodeParams(0, 1, 3))
    assert basis.kets[0].to_text() == "|10000> + |21111> + |02222>"
    assert all(len(k.terms) == 3 for k in basis.kets)


def test_qudit_orbit_collision():
    # 00000 and 11111 share an orbit for any D
    with pytest.raises(ValueError, match="collision"):
        lift_qudit([0, 31], 3, 5)


def test_lift_rejects_inadmissible():
    with pytest.raises(ValueError, match="inadmissible"):
        lift_qubit(ClassicalCode.from_bitstrings(["00000", "11111", "00001", "11110"]))


def test_qudit_generators_are_binary():
    gens = build_generators(CodeParams(1, 0))
    basis = lift_qudit(gens, 3, 7)
    assert len(basis) == len(gens)


def test_empty_basis():
    basis = QuantumCodeBasis.empty(5)
    assert len(basis) == 0
    assert basis.gram().shape == (0, 0, 2)


@pytest.mark.parametrize("k, l", [(0, 1), (1, 0), (1, 1)])
def test_qudit_lift_at_D2_is_qubit_lift(k, l):
    params = CodeParams(k, l)
    assert kets_equal(lift_qudit(build_generators(params), 2, params.n), build_basis(params))


@pytest.mark.parametrize("D", [2, 3, 5])
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_inner_conjugate_symmetry(D, data):
    def ket():
        m = data.draw(st.dictionaries(st.integers(0, D**2 - 1), cyc(D), min_size=1, max_size=4))
        return SparseKet(2, D, m)

    a, b = ket(), ket()
    assert inner(b, a) == inner(a, b).conj()
