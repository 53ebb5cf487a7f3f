"""Numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Kernel timings call the paired ``*_nb`` / ``*_np`` functions directly on the
same inputs and check that the results agree. ``--end-to-end`` also times
``nonadditive verify --n 13`` in subprocesses with and without
``NONADDITIVE_DISABLE_NUMBA=1``.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from nonadditive import _kernels
from nonadditive.classical import CodeParams, full_code
from nonadditive.lift import WeylOp, apply_to_basis, build_basis


def best_of(fn, repeat: int) -> float:
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases():
    words = np.asarray(full_code(CodeParams.from_n(13)).words, dtype=np.int64)
    yield "min_distance n=13 (3172 words)", _kernels.min_distance_nb, _kernels.min_distance_np, (words,)

    basis = build_basis(CodeParams.from_n(13))
    il, ia = apply_to_basis(WeylOp.single(13, 6, 1, 1), basis)
    args = (basis.labels, basis.amps, il, ia)
    yield "overlap_coo n=13 Y error", _kernels.overlap_coo_nb, _kernels.overlap_coo_np, args

    q3 = build_basis(CodeParams.from_n(11, 3))
    il, ia = apply_to_basis(WeylOp.single(11, 4, 1, 2, 3), q3)
    yield "overlap_coo n=11 D=3", _kernels.overlap_coo_nb, _kernels.overlap_coo_np, (q3.labels, q3.amps, il, ia)

    vec = np.random.default_rng(0).integers(-50, 50, 2**18).astype(np.int64)
    yield "fwht 2^18", _kernels.fwht_nb, _kernels.fwht_np, (vec,)

    labels = np.random.default_rng(1).integers(0, 2**15, (4096, 2)).astype(np.int64)
    perm = np.random.default_rng(2).permutation(15).astype(np.int64)
    yield "permute_bits 8192 labels n=15", _kernels.permute_bits_nb, _kernels.permute_bits_np, (labels, perm, 15)


def end_to_end(repeat: int) -> None:
    cmd = [sys.executable, "-m", "nonadditive", "verify", "--n", "13", "--output", os.devnull]
    for label, extra in [("numba", {}), ("numpy", {"NONADDITIVE_DISABLE_NUMBA": "1"})]:
        env = {**os.environ, **extra}
        t = best_of(lambda: subprocess.run(cmd, env=env, check=True), repeat)
        print(f"{'verify --n 13 (' + label + ')':<34} {t * 1e3:10.1f} ms")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()

    print(f"{'kernel':<34} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  agree")
    ok = True
    for name, fast, slow, inputs in cases():
        t_nb = best_of(lambda: fast(*[a.copy() if isinstance(a, np.ndarray) else a for a in inputs]), args.repeat)
        t_np = best_of(lambda: slow(*[a.copy() if isinstance(a, np.ndarray) else a for a in inputs]), args.repeat)
        r_nb = fast(*[a.copy() if isinstance(a, np.ndarray) else a for a in inputs])
        r_np = slow(*[a.copy() if isinstance(a, np.ndarray) else a for a in inputs])
        if name.startswith("overlap"):
            # COO output order may differ; compare the dense sums
            shape = (inputs[0].shape[0], inputs[2].shape[0], inputs[1].shape[-1])
            dense = []
            for rows, cols, coeffs in (r_nb, r_np):
                m = np.zeros(shape, dtype=np.int64)
                np.add.at(m, (rows, cols), coeffs)
                dense.append(m)
            agree = np.array_equal(*dense)
        else:
            agree = same(r_nb, r_np)
        ok &= agree
        print(f"{name:<34} {t_nb * 1e3:10.2f} {t_np * 1e3:10.2f} {t_np / t_nb:8.1f}x  {agree}")
    if args.end_to_end:
        end_to_end(max(1, args.repeat // 2))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
