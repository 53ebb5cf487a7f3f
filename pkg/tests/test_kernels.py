"""Both kernel backends must give identical answers."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonadditive import _accel, _kernels
from nonadditive.cycint import reduce_coeffs


def _coo_dense(rows, cols, coeffs, shape, D):
    out = np.zeros(shape + (D,), dtype=np.int64)
    np.add.at(out, (rows, cols), coeffs)
    return reduce_coeffs(out, D)


@st.composite
def padded_sets(draw, D):
    space = D**3
    m = draw(st.integers(1, 5))
    s = draw(st.integers(1, 4))
    labels = np.full((m, s), -1, dtype=np.int64)
    amps = np.zeros((m, s, D), dtype=np.int64)
    for a in range(m):
        k = draw(st.integers(1, s))
        labels[a, :k] = draw(st.lists(st.integers(0, space - 1), min_size=k, max_size=k, unique=True))
        amps[a, :k] = draw(st.lists(st.lists(st.integers(-2, 2), min_size=D, max_size=D), min_size=k, max_size=k))
    return labels, amps


@pytest.mark.parametrize("D", [2, 3, 4])
@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_overlap_backends_agree(D, data):
    cl, ca = data.draw(padded_sets(D))
    il, ia = data.draw(padded_sets(D))
    shape = (cl.shape[0], il.shape[0])
    fast = _coo_dense(*_kernels.overlap_coo_nb(cl, ca, il, ia), shape, D)
    slow = _coo_dense(*_kernels.overlap_coo_np(cl, ca, il, ia), shape, D)
    assert np.array_equal(fast, slow)


def test_overlap_against_loops():
    D = 3
    cl = np.array([[0, 5, -1]])
    ca = np.array([[[1, 0, 0], [0, 1, 0], [0, 0, 0]]])
    il = np.array([[5, 0, 7]])
    ia = np.array([[[0, 1, 0], [2, 0, 0], [1, 0, 0]]])
    rows, cols, coeffs = _kernels.overlap_coo_np(cl, ca, il, ia)
    total = _coo_dense(rows, cols, coeffs, (1, 1), D)[0, 0]
    # conj(w) * w + 1 * 2 = 3
    assert total.tolist() == reduce_coeffs([3, 0, 0], 3).tolist()


def test_backend_flag():
    assert _accel.BACKEND in ("numba", "numpy")
    code = "from nonadditive import _accel; print(_accel.BACKEND)"
    env = {**os.environ, "NONADDITIVE_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_end_to_end():
    env = {**os.environ, "NONADDITIVE_DISABLE_NUMBA": "1"}
    cmd = [sys.executable, "-m", "nonadditive", "verify", "--n", "7"]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    report = json.loads(out.stdout)
    assert report["provenance"]["backend"] == "numpy"
    assert report["pass"]
