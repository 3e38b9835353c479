"""Bigraded exterior algebra of (p,q)-forms over a complex coframe.

A point (or an invariant frame) carries a complex coframe phi_1..phi_n of
(1,0)-forms with Hermitian Gram matrix h.  A (p,q)-form is a coefficient
vector over the basis phi^I ^ conj(phi)^J, I and J strictly increasing index
words, ordered lexicographically by (I, J).  Internally the pair (I, J) is
the single word I + (J + n) over 2n labels, so all wedge and sign bookkeeping
reuses :mod:`akh.exterior` verbatim.

Conventions fixed here and relied on everywhere else:

* the Hermitian inner product is conjugate-linear in its second argument,
  <phi^I ^ conj(phi)^J, phi^K ^ conj(phi)^L> = det h[I,K] * conj(det h[J,L]);
* J acts on a (p,q) block as i^(q-p), so J^2 = (-1)^(p+q);
* omega = i * sum_{jk} conj(h^{-1})_{jk} phi_j ^ conj(phi_k), which reduces to
  i * sum_k phi_k ^ conj(phi_k) for an orthonormal coframe and makes
  Lambda(omega) = n exact;
* the volume form is dV = omega^n / n!, and the Hodge star is defined by
  a ^ star(c) = <a, conj(c)> dV, mapping (p,q) to (n-q, n-p) with
  star(star(a)) = (-1)^(p+q) a.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import exterior as ext
from .errors import (ArgumentError, ConsistencyError, DimensionMismatchError,
                     FrameError)
from .exterior import DegreeRangeError

Block = tuple[int, int]


# ---------------------------------------------------------------------------
# basis bookkeeping
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _block_pairs(n: int, p: int, q: int) -> tuple[tuple[ext.Word, ext.Word], ...]:
    if not (0 <= p <= n and 0 <= q <= n):
        raise DegreeRangeError(f"bidegree ({p},{q}) out of range for n={n}")
    return tuple(itertools.product(ext.words(n, p), ext.words(n, q)))


def basis_enumerate(n: int, p: int, q: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Basis of the (p,q) block as (I, J) pairs with 1-based frame labels."""
    return [(tuple(i + 1 for i in I), tuple(j + 1 for j in J))
            for I, J in _block_pairs(n, p, q)]


def block_dim(n: int, p: int, q: int) -> int:
    return len(_block_pairs(n, p, q))


def _word_of_pair(n: int, I: ext.Word, J: ext.Word) -> ext.Word:
    # holomorphic labels come first, so concatenation is already sorted
    return I + tuple(j + n for j in J)


@lru_cache(maxsize=None)
def _block_word_indices(n: int, p: int, q: int) -> tuple[int, ...]:
    """Positions of the (p,q) basis inside words(2n, p+q), in block order."""
    wi = ext.word_index(2 * n, p + q)
    return tuple(wi[_word_of_pair(n, I, J)] for I, J in _block_pairs(n, p, q))


@lru_cache(maxsize=None)
def _degree_block_layout(n: int, k: int) -> tuple[tuple[Block, tuple[int, ...]], ...]:
    """For each block of total degree k, its word positions in words(2n, k)."""
    out = []
    for p in range(max(0, k - n), min(n, k) + 1):
        q = k - p
        out.append(((p, q), _block_word_indices(n, p, q)))
    return tuple(out)


@lru_cache(maxsize=None)
def _bigraded_wedge_table(n: int, b1: Block, b2: Block):
    """Wedge structure constants in block-local indices."""
    p1, q1 = b1
    p2, q2 = b2
    if p1 + p2 > n or q1 + q2 > n:
        return ()
    out_local = {w: i for i, w in enumerate(
        _word_of_pair(n, I, J) for I, J in _block_pairs(n, p1 + p2, q1 + q2))}
    table = []
    for ia, (I1, J1) in enumerate(_block_pairs(n, p1, q1)):
        wa = _word_of_pair(n, I1, J1)
        for ib, (I2, J2) in enumerate(_block_pairs(n, p2, q2)):
            wb = _word_of_pair(n, I2, J2)
            ms = ext.merge_sign(wa, wb)
            if ms is None:
                continue
            sign, merged = ms
            table.append((ia, ib, out_local[merged], sign))
    return tuple(table)


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

@dataclass
class BigradedForm:
    """A complex form stored blockwise: blocks[(p, q)] is a coefficient vector."""

    n: int
    blocks: dict[Block, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[Block, np.ndarray] = {}
        for (p, q), v in self.blocks.items():
            v = np.asarray(v, dtype=complex)
            want = block_dim(self.n, p, q)
            if v.shape != (want,):
                raise DimensionMismatchError(
                    f"block ({p},{q}) expects length {want}, got {v.shape}")
            clean[(p, q)] = v
        self.blocks = clean

    @classmethod
    def zero(cls, n: int) -> "BigradedForm":
        return cls(n, {})

    @classmethod
    def basis_element(cls, n: int, p: int, q: int, index: int) -> "BigradedForm":
        v = np.zeros(block_dim(n, p, q), dtype=complex)
        v[index] = 1.0
        return cls(n, {(p, q): v})

    def block(self, p: int, q: int) -> np.ndarray:
        return self.blocks.get(
            (p, q), np.zeros(block_dim(self.n, p, q), dtype=complex))

    def degrees(self) -> set[int]:
        return {p + q for (p, q), v in self.blocks.items() if np.any(v)}

    def pure_bidegree(self) -> Block | None:
        live = [(pq, v) for pq, v in self.blocks.items() if np.any(v)]
        return live[0][0] if len(live) == 1 else None

    def __add__(self, other: "BigradedForm") -> "BigradedForm":
        self._check(other)
        keys = set(self.blocks) | set(other.blocks)
        return BigradedForm(self.n, {k: self.block(*k) + other.block(*k) for k in keys})

    def __sub__(self, other: "BigradedForm") -> "BigradedForm":
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "BigradedForm":
        return BigradedForm(self.n, {k: c * v for k, v in self.blocks.items()})

    def __neg__(self) -> "BigradedForm":
        return (-1.0) * self

    def _check(self, other: "BigradedForm"):
        if self.n != other.n:
            raise DimensionMismatchError(f"forms over n={self.n} and n={other.n}")

    def norm_sup(self) -> float:
        """Max absolute coefficient (frame-independent quick gauge)."""
        if not self.blocks:
            return 0.0
        return max(np.max(np.abs(v)) for v in self.blocks.values())


@lru_cache(maxsize=None)
def conj_block_matrix(n: int, p: int, q: int) -> np.ndarray:
    """Signed permutation C with conj_form(a).block(q,p) = C @ conj(a.block(p,q))."""
    tgt = {pair: i for i, pair in enumerate(_block_pairs(n, q, p))}
    C = np.zeros((block_dim(n, q, p), block_dim(n, p, q)))
    for i, (I, J) in enumerate(_block_pairs(n, p, q)):
        C[tgt[(J, I)], i] = (-1) ** (p * q)
    return C


def conj_form(a: BigradedForm) -> BigradedForm:
    """Complex conjugate: (p,q) -> (q,p) with the (-1)^(pq) reordering sign."""
    out: dict[Block, np.ndarray] = {}
    for (p, q), v in a.blocks.items():
        w = conj_block_matrix(a.n, p, q) @ np.conj(v)
        key = (q, p)
        out[key] = out.get(key, 0.0) + w
    return BigradedForm(a.n, out)


def wedge(a: BigradedForm, b: BigradedForm) -> BigradedForm:
    a._check(b)
    n = a.n
    out: dict[Block, np.ndarray] = {}
    for (p1, q1), u in a.blocks.items():
        for (p2, q2), v in b.blocks.items():
            if p1 + p2 > n or q1 + q2 > n:
                continue
            table = _bigraded_wedge_table(n, (p1, q1), (p2, q2))
            key = (p1 + p2, q1 + q2)
            w = out.setdefault(key, np.zeros(block_dim(n, *key), dtype=complex))
            for ia, ib, iout, sign in table:
                w[iout] += sign * u[ia] * v[ib]
    return BigradedForm(n, out)


def apply_J(a: BigradedForm) -> BigradedForm:
    """The almost complex structure acting as i^(q-p) on each block."""
    return BigradedForm(a.n, {(p, q): (1j) ** ((q - p) % 4) * v
                              for (p, q), v in a.blocks.items()})


def apply_J_inverse(a: BigradedForm) -> BigradedForm:
    return BigradedForm(a.n, {(p, q): (1j) ** ((p - q) % 4) * v
                              for (p, q), v in a.blocks.items()})


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------

class HermitianFrame:
    """Complex coframe metadata: dimension n, Gram matrix h, volume scale.

    h[j, k] = <phi_j, phi_k> must be Hermitian positive definite.  All the
    metric machinery (block Grams, omega, dV, star and Lefschetz matrices) is
    derived lazily from h and cached on the instance.
    """

    def __init__(self, n: int, h: np.ndarray | None = None, vol_scale: float = 1.0):
        if n < 1:
            raise FrameError(f"need n >= 1, got {n}")
        h = np.eye(n, dtype=complex) if h is None else np.asarray(h, dtype=complex)
        if h.shape != (n, n):
            raise FrameError(f"Gram matrix must be {n}x{n}, got {h.shape}")
        if not np.allclose(h, h.conj().T, atol=1e-12):
            raise FrameError("Gram matrix is not Hermitian")
        if np.linalg.eigvalsh(h).min() <= 1e-12:
            raise FrameError("Gram matrix is not positive definite")
        if vol_scale <= 0:
            raise FrameError("volume scale must be positive")
        self.n = int(n)
        self.h = h
        self.vol_scale = float(vol_scale)
        self._cache: dict = {}

    # -- block metric data ---------------------------------------------------

    def gram(self, p: int, q: int) -> np.ndarray:
        """Gram matrix G[c, d] = <e_c, e_d> of the (p,q) basis."""
        key = ("gram", p, q)
        if key not in self._cache:
            Gp = ext.gram(self.n, p, self.h)
            Gq = ext.gram(self.n, q, self.h)
            self._cache[key] = np.kron(Gp, np.conj(Gq))
        return self._cache[key]

    def gram_second_slot(self, p: int, q: int) -> np.ndarray:
        """GH with <u, v> = v^H GH u; equals the transpose of gram(p, q)."""
        key = ("gramT", p, q)
        if key not in self._cache:
            self._cache[key] = self.gram(p, q).T.copy()
        return self._cache[key]

    # -- canonical forms -----------------------------------------------------

    @property
    def omega(self) -> BigradedForm:
        """The fundamental (1,1)-form of the frame metric."""
        if "omega" not in self._cache:
            W = 1j * np.conj(np.linalg.inv(self.h))
            self._cache["omega"] = BigradedForm(self.n, {(1, 1): W.reshape(-1)})
        return self._cache["omega"]

    @property
    def volume_form(self) -> BigradedForm:
        """dV = omega^n / n!."""
        if "dV" not in self._cache:
            v = self.omega
            for _ in range(self.n - 1):
                v = wedge(v, self.omega)
            import math
            self._cache["dV"] = (1.0 / math.factorial(self.n)) * v
        return self._cache["dV"]

    # -- operator matrices ---------------------------------------------------

    def lefschetz_matrix(self, p: int, q: int) -> np.ndarray:
        """Matrix of omega ^ . from block (p,q) to (p+1,q+1)."""
        key = ("L", p, q)
        if key not in self._cache:
            w = self.omega.block(1, 1)
            M = np.zeros((block_dim(self.n, p + 1, q + 1), block_dim(self.n, p, q)),
                         dtype=complex) if p + 1 <= self.n and q + 1 <= self.n else \
                np.zeros((0, block_dim(self.n, p, q)), dtype=complex)
            if M.shape[0]:
                for ia, ib, iout, sign in _bigraded_wedge_table(self.n, (1, 1), (p, q)):
                    M[iout, ib] += sign * w[ia]
            self._cache[key] = M
        return self._cache[key]

    def lambda_matrix(self, p: int, q: int) -> np.ndarray:
        """Matrix of the Lefschetz dual from block (p,q) to (p-1,q-1)."""
        key = ("Lam", p, q)
        if key not in self._cache:
            if p < 1 or q < 1:
                self._cache[key] = np.zeros((0, block_dim(self.n, p, q)), dtype=complex)
            else:
                L = self.lefschetz_matrix(p - 1, q - 1)
                Gd = self.gram_second_slot(p - 1, q - 1)
                Gr = self.gram_second_slot(p, q)
                self._cache[key] = np.linalg.solve(Gd, L.conj().T @ Gr)
        return self._cache[key]

    def star_matrix(self, p: int, q: int) -> np.ndarray:
        """Matrix of the Hodge star from block (p,q) to (n-q,n-p)."""
        key = ("star", p, q)
        if key not in self._cache:
            n = self.n
            dv = self.volume_form.block(n, n)[0]
            src = _block_pairs(n, p, q)
            dual = _block_pairs(n, q, p)
            tgt = _block_pairs(n, n - q, n - p)
            # pairing P[a, f]: top coefficient of e_a^(q,p) ^ e_f^(n-q,n-p)
            P = np.zeros((len(dual), len(tgt)))
            for ia, (I, J) in enumerate(dual):
                wa = _word_of_pair(n, I, J)
                for ifx, (K, L) in enumerate(tgt):
                    ms = ext.merge_sign(wa, _word_of_pair(n, K, L))
                    if ms is not None:
                        P[ia, ifx] = ms[0]
            # right side R[a, c] = <e_a, conj(e_c)> * dv
            Gqp = self.gram(q, p)
            dual_index = {pair: i for i, pair in enumerate(dual)}
            R = np.zeros((len(dual), len(src)), dtype=complex)
            for ic, (I, J) in enumerate(src):
                R[:, ic] = (-1) ** (p * q) * Gqp[:, dual_index[(J, I)]] * dv
            self._cache[key] = np.linalg.solve(P, R)
        return self._cache[key]


def inner_product(a: BigradedForm, b: BigradedForm, f: HermitianFrame) -> complex:
    """Hermitian inner product, conjugate-linear in b, scaled by the volume."""
    a._check(b)
    total = 0.0 + 0.0j
    for (p, q), u in a.blocks.items():
        v = b.blocks.get((p, q))
        if v is None:
            continue
        total += np.conj(v) @ (f.gram_second_slot(p, q) @ u)
    return complex(total * f.vol_scale)


def norm(a: BigradedForm, f: HermitianFrame) -> float:
    return float(np.sqrt(max(inner_product(a, a, f).real, 0.0)))


def hodge_star(a: BigradedForm, f: HermitianFrame) -> BigradedForm:
    out = BigradedForm.zero(a.n)
    for (p, q), v in a.blocks.items():
        S = f.star_matrix(p, q)
        out += BigradedForm(a.n, {(a.n - q, a.n - p): S @ v})
    return out


def lefschetz_L(a: BigradedForm, f: HermitianFrame) -> BigradedForm:
    return wedge(f.omega, a)


def dual_lambda(a: BigradedForm, f: HermitianFrame) -> BigradedForm:
    out: dict[Block, np.ndarray] = {}
    for (p, q), v in a.blocks.items():
        if p < 1 or q < 1:
            continue
        w = f.lambda_matrix(p, q) @ v
        key = (p - 1, q - 1)
        out[key] = out.get(key, 0.0) + w
    return BigradedForm(a.n, out)


def lambda_star_route(a: BigradedForm, f: HermitianFrame) -> BigradedForm:
    """Lefschetz dual computed as (-1)^k star L star, blockwise."""
    out = BigradedForm.zero(a.n)
    for (p, q), v in a.blocks.items():
        piece = BigradedForm(a.n, {(p, q): v})
        out += (-1.0) ** (p + q) * hodge_star(lefschetz_L(hodge_star(piece, f), f), f)
    return out


# ---------------------------------------------------------------------------
# primitive decomposition
# ---------------------------------------------------------------------------

@dataclass
class PrimitiveDecomposition:
    """a = sum_j L^j beta_j with Lambda beta_j = 0; beta_j sits in (p-j, q-j)."""

    n: int
    bidegree: Block
    components: dict[int, BigradedForm]
    residual: float

    def reconstruct(self, f: HermitianFrame) -> BigradedForm:
        out = BigradedForm.zero(self.n)
        for j, beta in self.components.items():
            term = beta
            for _ in range(j):
                term = lefschetz_L(term, f)
            out += term
        return out


def _primitive_basis(f: HermitianFrame, p: int, q: int) -> np.ndarray:
    """Orthonormal basis (columns) of ker Lambda inside block (p,q)."""
    M = f.lambda_matrix(p, q)
    if M.shape[0] == 0:
        return np.eye(block_dim(f.n, p, q), dtype=complex)
    _, s, Vh = np.linalg.svd(M)
    tol = (s.max() if s.size else 0.0) * max(M.shape) * np.finfo(float).eps * 10
    rank = int(np.sum(s > tol))
    return Vh[rank:].conj().T


def primitive_decompose(a: BigradedForm, f: HermitianFrame,
                        tol: float = 1e-10) -> PrimitiveDecomposition:
    pq = a.pure_bidegree()
    if pq is None:
        raise ArgumentError("primitive decomposition requires a pure-bidegree form")
    p, q = pq
    n, k = a.n, p + q
    js = range(max(0, k - n), min(p, q) + 1)
    columns, slices = [], []
    pos = 0
    for j in js:
        B = _primitive_basis(f, p - j, q - j)
        M = B
        for step in range(j):
            Lm = f.lefschetz_matrix(p - j + step, q - j + step)
            M = Lm @ M
        columns.append(M)
        slices.append((j, pos, pos + B.shape[1], B))
        pos += B.shape[1]
    A = np.hstack(columns) if columns else np.zeros((block_dim(n, p, q), 0))
    x, *_ = np.linalg.lstsq(A, a.block(p, q), rcond=None)
    resid = float(np.linalg.norm(A @ x - a.block(p, q)))
    scale = max(float(np.linalg.norm(a.block(p, q))), 1.0)
    if resid > tol * scale:
        raise ConsistencyError(
            f"primitive decomposition residual {resid:.3e} exceeds tolerance")
    comps = {}
    for j, lo, hi, B in slices:
        beta = B @ x[lo:hi]
        comps[j] = BigradedForm(n, {(p - j, q - j): beta})
    return PrimitiveDecomposition(n, (p, q), comps, resid)


# ---------------------------------------------------------------------------
# commutator of a real (1,1)-form against the Lefschetz dual
# ---------------------------------------------------------------------------

def _is_real_one_one(r: BigradedForm) -> bool:
    if set(k for k, v in r.blocks.items() if np.any(v)) - {(1, 1)}:
        return False
    c = conj_form(r)
    diff = r - c
    return diff.norm_sup() <= 1e-10 * max(r.norm_sup(), 1.0)


def xi_lambda_commutator(r: BigradedForm, a: BigradedForm, f: HermitianFrame,
                         tol: float = 1e-10) -> BigradedForm:
    """[wedge-by-r, Lambda] a, computed two independent ways.

    Route one is the direct operator composition r ^ (Lambda a) - Lambda(r ^ a).
    Route two diagonalizes r against the frame metric (congruence through the
    Cholesky factor of h, then a Hermitian eigendecomposition), rescales each
    basis coefficient u_{IJ} by sum_{j in I} e_j + sum_{j in J} e_j - sum_j e_j
    in the eigencoframe, and transforms back.  Disagreement beyond `tol` times
    the data scale raises ConsistencyError.
    """
    direct, out = xi_lambda_routes(r, a, f)
    gauge = max(direct.norm_sup(), out.norm_sup(), 1.0)
    mismatch = (direct - out).norm_sup()
    if mismatch > tol * gauge:
        raise ConsistencyError(
            f"eigen and direct routes disagree by {mismatch:.3e}")
    return direct


def xi_lambda_routes(r: BigradedForm, a: BigradedForm,
                     f: HermitianFrame) -> tuple:
    """Both routes of xi_lambda_commutator, returned without comparison."""
    if not _is_real_one_one(r):
        raise ArgumentError("r must be a real (1,1)-form")
    direct = wedge(r, dual_lambda(a, f)) - dual_lambda(wedge(r, a), f)

    n = f.n
    # r = i sum R_{jk} phi_j ^ conj(phi_k): recover the Hermitian matrix R
    R = (r.block(1, 1).reshape(n, n)) / 1j
    B = np.linalg.cholesky(f.h)               # h = B B^H
    Rp = B.T @ R @ np.conj(B)                 # r in an orthonormal coframe
    evals, U = np.linalg.eigh(Rp)
    M = U.conj().T @ B.T                      # degree-1 coefficient map to eigencoframe
    Minv = np.linalg.inv(M)

    out = BigradedForm.zero(n)
    esum = evals.sum()
    for (p, q), v in a.blocks.items():
        Tp = ext.compound_apply(n, p, M)
        Tq = ext.compound_apply(n, q, np.conj(M))
        vv = (np.kron(Tp, Tq) @ v)
        scale = np.empty(vv.shape, dtype=float)
        for i, (I, J) in enumerate(_block_pairs(n, p, q)):
            scale[i] = evals[list(I)].sum() + evals[list(J)].sum() - esum
        vv *= scale
        Sp = ext.compound_apply(n, p, Minv)
        Sq = ext.compound_apply(n, q, np.conj(Minv))
        out += BigradedForm(n, {(p, q): np.kron(Sp, Sq) @ vv})
    return direct, out


# ---------------------------------------------------------------------------
# adapted coframes and real-basis conversion
# ---------------------------------------------------------------------------

def adapted_frame(g: np.ndarray, J: np.ndarray) -> np.ndarray:
    """g-orthonormal vector frame as columns (a_1, J a_1, ..., a_n, J a_n).

    Deterministic Gram-Schmidt over the standard basis; each accepted vector
    brings its J-image along, which keeps the span J-invariant and the frame
    orthonormal (g is J-invariant, so J a is automatically unit and normal to
    a).
    """
    g = np.asarray(g, dtype=float)
    J = np.asarray(J, dtype=float)
    m = g.shape[0]
    if m % 2:
        raise FrameError("real dimension must be even")
    if not np.allclose(J @ J, -np.eye(m), atol=1e-10):
        raise FrameError("J*J != -identity")
    if not np.allclose(J.T @ g @ J, g, atol=1e-10):
        raise FrameError("metric is not J-invariant")
    frame: list[np.ndarray] = []
    for c in range(m):
        v = np.zeros(m)
        v[c] = 1.0
        for u in frame:
            v = v - (u @ g @ v) * u
        nv = np.sqrt(v @ g @ v)
        if nv < 1e-10:
            continue
        a = v / nv
        frame.extend([a, J @ a])
        if len(frame) == m:
            break
    return np.column_stack(frame)


def adapted_coframe(g: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Rows phi_1..phi_n of a (1,0)-coframe, in real-coframe coordinates.

    Dualizes :func:`adapted_frame` and returns
    phi_k = (alpha_k + i beta_k)/sqrt(2) where (alpha_k, beta_k) is the dual
    coframe of the pair (a_k, J a_k).  The resulting coframe has identity
    Gram matrix and reproduces omega = g(J., .) as i sum phi_k ^ conj(phi_k).
    """
    F = adapted_frame(g, J)
    D = np.linalg.inv(F)                      # rows: dual coframe alpha1, beta1, ...
    C = (D[0::2] + 1j * D[1::2]) / np.sqrt(2.0)
    return C


class ComplexFrameMap:
    """Coefficient conversion between a real coframe and a complex coframe.

    `C` holds the (1,0)-coframe rows in real-coframe coordinates; the full
    complex coframe is (phi_1..phi_n, conj(phi_1)..conj(phi_n)).  Degree-k
    coefficient vectors convert through the k-th compound of the degree-1
    change-of-basis matrix, then split into (p,q) blocks by counting
    holomorphic labels in each index word.
    """

    def __init__(self, C: np.ndarray):
        C = np.asarray(C, dtype=complex)
        self.n = C.shape[0]
        if C.shape != (self.n, 2 * self.n):
            raise FrameError(f"coframe rows must be n x 2n, got {C.shape}")
        S = np.vstack([C, np.conj(C)])        # complex coframe in real coordinates
        self._fwd1 = np.linalg.inv(S.T)       # real coeffs -> complex coeffs
        self._bwd1 = S.T

    @lru_cache(maxsize=None)
    def _fwd(self, k: int) -> np.ndarray:
        return ext.compound_apply(2 * self.n, k, self._fwd1)

    @lru_cache(maxsize=None)
    def _bwd(self, k: int) -> np.ndarray:
        return ext.compound_apply(2 * self.n, k, self._bwd1)

    def to_bigraded(self, k: int, coeffs: np.ndarray) -> BigradedForm:
        """Real-coframe degree-k coefficients -> blockwise complex form."""
        v = self._fwd(k) @ np.asarray(coeffs, dtype=complex)
        blocks = {}
        for (p, q), positions in _degree_block_layout(self.n, k):
            blocks[(p, q)] = v[list(positions)]
        return BigradedForm(self.n, blocks)

    def from_bigraded(self, a: BigradedForm) -> dict[int, np.ndarray]:
        """Blockwise form -> real-coframe coefficients, one vector per degree."""
        out: dict[int, np.ndarray] = {}
        for k in sorted(a.degrees()):
            v = np.zeros(ext.dim(2 * self.n, k), dtype=complex)
            for (p, q), positions in _degree_block_layout(self.n, k):
                v[list(positions)] = a.block(p, q)
            out[k] = self._bwd(k) @ v
        return out
