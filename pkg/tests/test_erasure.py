from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadditive.classical import CodeParams
from nonadditive.erasure import (
    broken_control_basis,
    build_recovery,
    build_recovery_basis,
    channel_fidelities,
    encode,
    erase,
    fidelity_experiment,
    fidelity_experiment_basis,
    random_logical_states,
    site_operator,
)


def test_encode_first_logical_state():
    state = encode(CodeParams(0, 1), [1, 0, 0, 0, 0])
    nz = {i: v for i, v in enumerate(state.amplitudes) if abs(v) > 1e-12}
    assert set(nz) == {16, 15}
    assert all(abs(v - 2**-0.5) < 1e-12 for v in nz.values())


def test_encode_rejects_bad_input():
    with pytest.raises(ValueError):
        encode(CodeParams(0, 1), [1, 0])
    with pytest.raises(ValueError):
        encode(CodeParams(0, 1), [0] * 5)


@given(st.integers(0, 2**31), st.integers(0, 4))
@settings(max_examples=20, deadline=None)
def test_erase_trace_preserving_and_idempotent(seed, site):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    out = erase(rho, site, 5)
    assert abs(np.trace(out) - 1) < 1e-12
    np.testing.assert_allclose(out, out.conj().T, atol=1e-12)
    np.testing.assert_allclose(erase(out, site, 5), out, atol=1e-12)
    # four-Pauli average
    avg = sum(site_operator(p, site, 5) @ rho @ site_operator(p, site, 5).conj().T for p in "IXYZ") / 4
    np.testing.assert_allclose(out, avg, atol=1e-12)


@pytest.mark.parametrize("site", range(5))
def test_recovery_structure(site):
    rec = build_recovery(CodeParams(0, 1), site)
    assert rec.images_orthogonal
    assert rec.image_dims == {"I": 5, "X": 5, "Y": 5, "Z": 5}
    assert rec.completeness_error < 1e-10


@pytest.mark.parametrize("n", [3, 5, 7])
def test_fidelity_is_one(n):
    report = fidelity_experiment(CodeParams.from_n(n), trials=25, seed=42)
    assert report.min_fidelity >= 1 - 1e-9
    assert len(report.fidelities) == n and len(report.fidelities[0]) == 25


def test_fidelity_seeded():
    a = fidelity_experiment(CodeParams(0, 1), trials=5, seed=3).as_dict()
    b = fidelity_experiment(CodeParams(0, 1), trials=5, seed=3).as_dict()
    assert a == b
    assert np.array_equal(random_logical_states(5, 3, 1), random_logical_states(5, 3, 1))


def test_channel_fidelity_matches_density_path():
    params = CodeParams(0, 1)
    rec = build_recovery(params, 2)
    psi = encode(params, [1, 1j, 0, 2, -1])
    rho = rec.apply(erase(psi, 2))
    dense = float(np.real(psi.amplitudes.conj() @ rho @ psi.amplitudes))
    fast = channel_fidelities(rec, psi.amplitudes[:, None])[0]
    assert abs(dense - fast) < 1e-12
    assert abs(dense - 1) < 1e-12


def test_broken_control():
    basis = broken_control_basis()
    with pytest.raises(ValueError, match="overlap"):
        build_recovery_basis(basis, 0, strict=True)
    report = fidelity_experiment_basis(basis, trials=25, seed=42, sites=[0], strict=False)
    assert report.min_fidelity < 0.99
    assert not report.images_orthogonal
