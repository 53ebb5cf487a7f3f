"""Hot inner loops, each in two flavours.

``*_nb`` functions are written as plain loops and compiled by numba; ``*_np``
functions are vectorized numpy. The public names at the bottom pick one of
the two according to :data:`nonadditive._accel.BACKEND`. Both flavours are
exact on int64 input and must agree bit for bit.
"""

from __future__ import annotations

import numpy as np

from ._accel import BACKEND, njit

# ---------------------------------------------------------------------------
# popcount / minimum pairwise Hamming distance


@njit
def _popcount64(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    # no multiply trick: it would overflow signed int64
    x = x + (x >> 8)
    x = x + (x >> 16)
    x = x + (x >> 32)
    return x & 0x7F


@njit
def min_distance_nb(words):
    k = words.shape[0]
    best = 64
    for i in range(k):
        wi = words[i]
        for j in range(i + 1, k):
            d = _popcount64(wi ^ words[j])
            if d < best:
                best = d
                if best == 0:
                    return 0
    return best


def min_distance_np(words, block=512):
    w = np.asarray(words, dtype=np.int64)
    k = w.shape[0]
    best = 64
    for start in range(0, k, block):
        rows = w[start : start + block]
        # upper triangle only: compare each row with every later word
        tail = w[start:]
        d = np.bitwise_count(rows[:, None] ^ tail[None, :]).astype(np.int64)
        i, j = np.indices(d.shape)
        d = np.where(j > i, d, 64)
        if d.size:
            best = min(best, int(d.min()))
    return best


# ---------------------------------------------------------------------------
# sparse matrix elements <code_a | image_b>


@njit
def _overlap_loop_nb(keys, order, s, code_amps, img_labels, img_amps):
    dim = code_amps.shape[2]
    nb, sb = img_labels.shape
    lo = np.empty((nb, sb), dtype=np.int64)
    hi = np.empty((nb, sb), dtype=np.int64)
    total = 0
    for b in range(nb):
        for t in range(sb):
            lab = img_labels[b, t]
            if lab < 0:
                lo[b, t] = 0
                hi[b, t] = 0
                continue
            lo[b, t] = np.searchsorted(keys, lab, side="left")
            hi[b, t] = np.searchsorted(keys, lab, side="right")
            total += hi[b, t] - lo[b, t]

    rows = np.empty(total, dtype=np.int64)
    cols = np.empty(total, dtype=np.int64)
    coeffs = np.zeros((total, dim), dtype=np.int64)
    pos = 0
    for b in range(nb):
        for t in range(sb):
            for q in range(lo[b, t], hi[b, t]):
                idx = order[q]
                a = idx // s
                u = idx % s
                rows[pos] = a
                cols[pos] = b
                # conj(code amplitude) * image amplitude in Z[w], w^dim = 1
                for j in range(dim):
                    ca = code_amps[a, u, j]
                    if ca == 0:
                        continue
                    for r in range(dim):
                        ib = img_amps[b, t, r]
                        if ib != 0:
                            coeffs[pos, (r - j) % dim] += ca * ib
                pos += 1
    return rows, cols, coeffs


def overlap_coo_nb(code_labels, code_amps, img_labels, img_amps):
    """COO entries of ``<code_a | image_b>``; the sort stays in numpy, the merge loop is compiled."""
    flat = code_labels.ravel()
    order = np.argsort(flat, kind="stable")
    return _overlap_loop_nb(flat[order], order, code_labels.shape[1], code_amps, img_labels, img_amps)


def _conj_product_tensor(dim):
    j, r = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    tensor = np.zeros((dim, dim, dim), dtype=np.int64)
    tensor[j, r, (r - j) % dim] = 1
    return tensor


def overlap_coo_np(code_labels, code_amps, img_labels, img_amps):
    m, s = code_labels.shape
    dim = code_amps.shape[2]
    flat = code_labels.ravel()
    order = np.argsort(flat, kind="mergesort")
    keys = flat[order]

    b_idx, t_idx = np.nonzero(img_labels >= 0)
    labs = img_labels[b_idx, t_idx]
    lo = np.searchsorted(keys, labs, side="left")
    hi = np.searchsorted(keys, labs, side="right")
    mult = hi - lo
    if mult.size == 0 or mult.max() == 0:
        return (np.empty(0, np.int64), np.empty(0, np.int64), np.zeros((0, dim), np.int64))

    # expand every image term into one entry per matching code term
    rep = np.repeat(np.arange(labs.size), mult)
    offset = np.arange(rep.size) - np.repeat(np.cumsum(mult) - mult, mult)
    idx = order[lo[rep] + offset]
    a, u = np.divmod(idx, s)
    b, t = b_idx[rep], t_idx[rep]
    coeffs = np.einsum("kj,kr,jrq->kq", code_amps[a, u], img_amps[b, t], _conj_product_tensor(dim))
    return a.astype(np.int64), b.astype(np.int64), coeffs.astype(np.int64)


# ---------------------------------------------------------------------------
# Walsh-Hadamard transform (unnormalized), used for XOR convolutions


@njit
def fwht_nb(a):
    out = a.copy()
    n = out.shape[0]
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            for i in range(start, start + h):
                x = out[i]
                y = out[i + h]
                out[i] = x + y
                out[i + h] = x - y
        h *= 2
    return out


def fwht_np(a):
    out = np.array(a, copy=True)
    n = out.shape[0]
    h = 1
    while h < n:
        blocks = out.reshape(n // (2 * h), 2, h)
        top = blocks[:, 0, :] + blocks[:, 1, :]
        bot = blocks[:, 0, :] - blocks[:, 1, :]
        out = np.stack([top, bot], axis=1).reshape(n)
        h *= 2
    return out


# ---------------------------------------------------------------------------
# site permutation on packed bit labels (position i from the left = bit n-1-i)


@njit
def permute_bits_nb(labels, perm, n):
    flat = labels.ravel()
    out = np.empty_like(flat)
    for q in range(flat.shape[0]):
        lab = flat[q]
        if lab < 0:
            out[q] = lab
            continue
        res = 0
        for i in range(n):
            if (lab >> (n - 1 - i)) & 1:
                res |= 1 << (n - 1 - perm[i])
        out[q] = res
    return out.reshape(labels.shape)


def permute_bits_np(labels, perm, n):
    labels = np.asarray(labels, dtype=np.int64)
    shifts = n - 1 - np.arange(n, dtype=np.int64)
    bits = (labels[..., None] >> shifts) & 1
    targets = n - 1 - np.asarray(perm, dtype=np.int64)
    out = (bits << targets).sum(axis=-1)
    return np.where(labels < 0, labels, out)


# ---------------------------------------------------------------------------

# Small inputs always take the numpy path: the first compiled call loads the
# JIT cache and numba's array support, which costs more than a tiny loop saves.
SMALL_INPUT = 1024
_JIT = BACKEND == "numba"


def min_distance(words):
    return min_distance_nb(words) if _JIT and len(words) >= SMALL_INPUT // 2 else min_distance_np(words)


def overlap_coo(code_labels, code_amps, img_labels, img_amps):
    fn = overlap_coo_nb if _JIT and img_labels.size >= SMALL_INPUT else overlap_coo_np
    return fn(code_labels, code_amps, img_labels, img_amps)


def permute_bits(labels, perm, n):
    return permute_bits_nb(labels, perm, n) if _JIT and labels.size >= SMALL_INPUT else permute_bits_np(labels, perm, n)


def fwht(a):
    """Unnormalized Walsh-Hadamard transform; object arrays stay on the numpy path."""
    a = np.asarray(a)
    if a.dtype == object or not _JIT or a.size < SMALL_INPUT:
        return fwht_np(a)
    return fwht_nb(a.astype(np.int64, copy=False))
