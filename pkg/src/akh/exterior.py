"""Exterior-algebra combinatorics over a finite set of coframe labels.

Everything downstream (bigraded complex frames, invariant Lie-algebra
complexes, periodic grids) stores a k-form as a coefficient vector over the
strictly increasing k-index words of a label set {0, ..., m-1}.  This module
owns the index bookkeeping: word enumeration, shuffle signs, wedge tables,
derivation extension, compound (induced) maps on each degree, and Gram
matrices of induced inner products.

Coefficients may live in trailing or leading array axes; the helpers below
operate on the last axis so that batched (grid) data works unchanged.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


class DegreeRangeError(ValueError):
    """Requested form degree outside 0..m for the label set."""


Word = tuple[int, ...]


@lru_cache(maxsize=None)
def words(m: int, k: int) -> tuple[Word, ...]:
    """All strictly increasing k-words over range(m), lexicographic order."""
    if not 0 <= k <= m:
        raise DegreeRangeError(f"degree {k} out of range for {m} labels")
    return tuple(itertools.combinations(range(m), k))


@lru_cache(maxsize=None)
def word_index(m: int, k: int) -> dict[Word, int]:
    return {w: i for i, w in enumerate(words(m, k))}


def dim(m: int, k: int) -> int:
    return len(words(m, k))


def merge_sign(a: Word, b: Word) -> tuple[int, Word] | None:
    """Shuffle sign and merged word for a ^ b; None when labels collide.

    The sign is (-1)^inv where inv counts pairs (x in a, y in b) with x > y,
    i.e. the parity of the permutation sorting the concatenation a + b.
    """
    if set(a) & set(b):
        return None
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    merged = tuple(sorted(a + b))
    return (-1) ** inv, merged


@lru_cache(maxsize=None)
def wedge_table(m: int, k1: int, k2: int) -> tuple[tuple[int, int, int, int], ...]:
    """Sparse wedge structure constants (ia, ib, iout, sign) for k1 ^ k2."""
    if k1 + k2 > m:
        return ()
    out_index = word_index(m, k1 + k2)
    table = []
    for ia, wa in enumerate(words(m, k1)):
        for ib, wb in enumerate(words(m, k2)):
            ms = merge_sign(wa, wb)
            if ms is None:
                continue
            sign, merged = ms
            table.append((ia, ib, out_index[merged], sign))
    return tuple(table)


def wedge_apply(m: int, k1: int, k2: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Wedge two coefficient arrays along their last axis (broadcasting)."""
    table = wedge_table(m, k1, k2)
    shape = np.broadcast_shapes(u.shape[:-1], v.shape[:-1]) + (dim(m, k1 + k2),)
    out = np.zeros(shape, dtype=np.result_type(u, v, np.float64))
    for ia, ib, iout, sign in table:
        out[..., iout] += sign * u[..., ia] * v[..., ib]
    return out


@lru_cache(maxsize=None)
def wedge_matrix_basis(m: int, a: int, k: int) -> np.ndarray:
    """Matrix of (e_a ^ .) from degree k to k+1, for a single label a."""
    W = np.zeros((dim(m, k + 1), dim(m, k)))
    if k + 1 > m:
        return W
    out_index = word_index(m, k + 1)
    for i, w in enumerate(words(m, k)):
        ms = merge_sign((a,), w)
        if ms is None:
            continue
        sign, merged = ms
        W[out_index[merged], i] = sign
    return W


def wedge_matrix(m: int, k1: int, k2: int, a: np.ndarray) -> np.ndarray:
    """Matrix (possibly batched) of wedging by the k1-form a on degree k2."""
    table = wedge_table(m, k1, k2)
    W = np.zeros(a.shape[:-1] + (dim(m, k1 + k2), dim(m, k2)), dtype=a.dtype)
    for ia, ib, iout, sign in table:
        W[..., iout, ib] += sign * a[..., ia]
    return W


@lru_cache(maxsize=None)
def derivation_entries(m: int, k: int) -> tuple[tuple[int, int, int, int, int], ...]:
    """Sparse index pattern of a degree-(+1) derivation on degree k.

    Entries (label, i2, itgt, isrc, sign) mean: a derivation sending the
    degree-1 basis element `label` to the 2-form with coefficients
    images[label] contributes sign * images[label, i2] to matrix entry
    (itgt, isrc).  The pattern is value-independent, so it serves both the
    constant-coefficient matrices below and pointwise-varying grid fields.
    """
    if k + 1 > m:
        return ()
    out_index = word_index(m, k + 1)
    entries = []
    for i, w in enumerate(words(m, k)):
        for pos, label in enumerate(w):
            rest = w[:pos] + w[pos + 1 :]
            # D e_label wedged back into the removed slot
            for i2, w2 in enumerate(words(m, 2)):
                ms = merge_sign(w2, rest)
                if ms is None:
                    continue
                sign, merged = ms
                entries.append((label, i2, out_index[merged], i,
                                (-1) ** pos * sign))
    return tuple(entries)


def derivation_matrices(m: int, images: np.ndarray) -> dict[int, np.ndarray]:
    """Degree-(+1) derivation from its action on the degree-1 basis.

    `images[a]` is the 2-form coefficient vector assigned to label a; the
    derivation kills degree 0 and extends by the graded Leibniz rule
    D(x ^ y) = Dx ^ y + (-1)^|x| x ^ Dy.  Returns one matrix per degree.
    """
    images = np.asarray(images)
    mats: dict[int, np.ndarray] = {}
    for k in range(m + 1):
        M = np.zeros((dim(m, min(k + 1, m)), dim(m, k)), dtype=images.dtype)
        for label, i2, itgt, isrc, sign in derivation_entries(m, k):
            M[itgt, isrc] += sign * images[label, i2]
        mats[k] = M
    return mats


def compound_apply(m: int, k: int, M: np.ndarray) -> np.ndarray:
    """Induced (compound) matrix of a degree-1 coefficient map M on degree k.

    If degree-1 coefficients transform as u' = M u, degree-k coefficients
    transform by the k-th compound, i.e. the matrix of k x k minors of M.
    """
    ws = words(m, k)
    out = np.empty((len(ws), len(ws)), dtype=M.dtype)
    for j, wj in enumerate(ws):
        for i, wi in enumerate(ws):
            out[i, j] = np.linalg.det(M[np.ix_(wi, wj)]) if k else 1.0
    return out


def gram(m: int, k: int, g1: np.ndarray) -> np.ndarray:
    """Gram matrix on degree k induced by a degree-1 Gram g1 (batched ok).

    Entries are determinants det g1[w_i, w_j] over index words, the usual
    extension of an inner product to the exterior power.
    """
    ws = words(m, k)
    nk = len(ws)
    if k == 0:
        return np.ones(g1.shape[:-2] + (1, 1), dtype=g1.dtype)
    out = np.empty(g1.shape[:-2] + (nk, nk), dtype=g1.dtype)
    for i, wi in enumerate(ws):
        for j, wj in enumerate(ws):
            sub = g1[..., list(wi), :][..., :, list(wj)]
            out[..., i, j] = np.linalg.det(sub)
    return out


@lru_cache(maxsize=None)
def top_pairing(m: int, k: int) -> np.ndarray:
    """P[i, j] = coefficient of the top word in e_i^(k) ^ e_j^(m-k)."""
    P = np.zeros((dim(m, k), dim(m, m - k)))
    for ia, ib, _, sign in wedge_table(m, k, m - k):
        P[ia, ib] = sign
    return P
