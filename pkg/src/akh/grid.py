"""Periodic finite-difference testbed on the 4-torus with varying (g, J, omega).

The flat Lie-algebra models keep everything invariant; this module supplies
the complementary regime, non-constant structures and genuinely non-constant
functions, on a sampled T^4 = [0,1)^4 with second-order central differences.
Distinct-axis differences commute, so the discrete exterior derivative
squares to zero exactly, and the codifferential is built from the discrete
inner product so that the adjoint (Stokes) identity is also exact.  Pointwise
structure operators (bidegree projections, J, the Lefschetz pair, the Hodge
star) act through a per-point adapted unitary coframe: transform coefficients,
apply the constant identity-metric matrices, transform back.  Identities that
mix differences with pointwise structure hold only up to the O(h^2) defect of
the difference stencil, which is what convergence_study measures.

Recipes are deliberately narrow: a constant compatible background plus
band-limited trigonometric perturbations, with omega perturbed by a discrete
exact form (so d omega = 0 to machine precision at every resolution) and
(J, g) repaired to exact pointwise compatibility by a polar construction.
"""
from __future__ import annotations

import copy
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

try:
    import tomllib
except ImportError:                           # Python < 3.11
    import tomli as tomllib

from . import bigraded as bg
from . import exterior as ext
from .errors import ArgumentError, ModelValidationError

M = 4            # real dimension / number of coframe labels
NC = 2           # complex dimension
DIMS = tuple(ext.dim(M, k) for k in range(M + 1))      # (1, 4, 6, 4, 1)
SHIFTS = {"mu": (2, -1), "del": (1, 0), "delbar": (0, 1), "mubar": (-1, 2)}
_CHUNK = 1 << 15
# compound matrices are the cost centre of every frame transform; keep the
# computed ones around per degree, but never let the cache outgrow this
_COMP_CAP_BYTES = 1_800_000_000


# ---------------------------------------------------------------------------
# index patterns and constant adapted-frame matrices
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _d_pattern(k: int) -> tuple[tuple[int, int, int, int], ...]:
    """(axis, itgt, isrc, sign) entries of d on degree k: dx^axis ^ (word)."""
    if k + 1 > M:
        return ()
    out_index = ext.word_index(M, k + 1)
    entries = []
    for isrc, w in enumerate(ext.words(M, k)):
        for a in range(M):
            ms = ext.merge_sign((a,), w)
            if ms is None:
                continue
            sign, merged = ms
            entries.append((a, out_index[merged], isrc, sign))
    return tuple(entries)


def _compound_of(W: np.ndarray, k: int) -> np.ndarray:
    """Batched k-th compound (matrix of k x k minors) of (pts, 4, 4) maps."""
    if k == 0:
        return np.ones(W.shape[:-2] + (1, 1), dtype=W.dtype)
    if k == 1:
        return W
    if k == 2:
        return _compound2(W)
    ws = ext.words(M, k)
    out = np.empty(W.shape[:-2] + (len(ws),) * 2, dtype=W.dtype)
    for a, wa in enumerate(ws):
        Wa = W[..., wa, :]
        for b, wb in enumerate(ws):
            out[..., a, b] = np.linalg.det(Wa[..., :, wb])
    return out


def _slot_apply(W: np.ndarray, comps: np.ndarray, k: int) -> np.ndarray:
    """Apply per-point degree-1 coefficient maps W to degree-k coefficients.

    W has shape (pts, 4, 4), comps (dim_k, pts); the action is the k-th
    compound of W at every point.
    """
    if k == 0:
        return comps.copy()
    return _slot_apply_c(_compound_of(W, k), comps)


def _slot_apply_c(C: np.ndarray, comps: np.ndarray) -> np.ndarray:
    """Apply precomputed per-point compound matrices to coefficients."""
    return np.einsum("pab,bp->ap", C, comps)


@lru_cache(maxsize=None)
def _const_matrices():
    """Identity-metric structure matrices in complex word order, per degree.

    In the adapted coframe every point carries the same standard Hermitian
    structure, so J, L, Lambda and the star are fixed matrices assembled once
    from the bigraded blocks.
    """
    f0 = bg.HermitianFrame(NC)
    layout = {k: bg._degree_block_layout(NC, k) for k in range(M + 1)}
    jdiag, lef, lam, star = {}, {}, {}, {}
    for k in range(M + 1):
        jd = np.zeros(DIMS[k], dtype=complex)
        for (p, q), pos in layout[k]:
            jd[list(pos)] = 1j ** ((q - p) % 4)
        jdiag[k] = jd
        if k + 2 <= M:
            Lk = np.zeros((DIMS[k + 2], DIMS[k]), dtype=complex)
            for (p, q), spos in layout[k]:
                if p + 1 > NC or q + 1 > NC:
                    continue
                tpos = dict(layout[k + 2])[(p + 1, q + 1)]
                Lk[np.ix_(list(tpos), list(spos))] = f0.lefschetz_matrix(p, q)
            lef[k] = Lk
        if k - 2 >= 0:
            Gk = np.zeros((DIMS[k - 2], DIMS[k]), dtype=complex)
            for (p, q), spos in layout[k]:
                if p >= 1 and q >= 1:
                    tpos = dict(layout[k - 2])[(p - 1, q - 1)]
                    Gk[np.ix_(list(tpos), list(spos))] = f0.lambda_matrix(p, q)
            lam[k] = Gk
        Sk = np.zeros((DIMS[M - k], DIMS[k]), dtype=complex)
        for (p, q), spos in layout[k]:
            tpos = dict(layout[M - k])[(NC - q, NC - p)]
            Sk[np.ix_(list(tpos), list(spos))] = f0.star_matrix(p, q)
        star[k] = Sk
    blockpos = {k: {blk: np.array(pos) for blk, pos in layout[k]}
                for k in range(M + 1)}
    return jdiag, lef, lam, star, blockpos


def blocks_of_degree(k: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((p, k - p) for p in range(max(0, k - NC),
                                                  min(NC, k) + 1)))


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class GridForm:
    """Degree-k form as complex coefficients over the coordinate coframe.

    `comps` has shape (dim_k, N, N, N, N), components indexed by the sorted
    index words of dx^1..dx^4.
    """

    degree: int
    comps: np.ndarray

    def __post_init__(self):
        self.comps = np.asarray(self.comps, dtype=complex)
        k = self.degree
        if not 0 <= k <= M or self.comps.shape[0] != DIMS[k]:
            raise ArgumentError(f"bad component shape for a degree-{k} grid form")

    def __add__(self, other: "GridForm") -> "GridForm":
        if other.degree != self.degree:
            raise ArgumentError("cannot add forms of different degree")
        return GridForm(self.degree, self.comps + other.comps)

    def __sub__(self, other: "GridForm") -> "GridForm":
        if other.degree != self.degree:
            raise ArgumentError("cannot subtract forms of different degree")
        return GridForm(self.degree, self.comps - other.comps)

    def __rmul__(self, c: complex) -> "GridForm":
        return GridForm(self.degree, c * self.comps)

    def __neg__(self) -> "GridForm":
        return GridForm(self.degree, -self.comps)

    def norm_sup(self) -> float:
        return float(np.max(np.abs(self.comps))) if self.comps.size else 0.0


def _central_diff(arr: np.ndarray, axis: int, N: int) -> np.ndarray:
    return (np.roll(arr, -1, axis=axis) - np.roll(arr, 1, axis=axis)) * (N / 2.0)


# ---------------------------------------------------------------------------
# the model
# ---------------------------------------------------------------------------

class GridModel:
    """Sampled compatible triple (g, J, omega) on an N^4 periodic grid.

    `J` and `g` are (N,N,N,N,4,4) point fields, `omega` a degree-2 component
    array.  All operator methods take and return GridForm.  Operators that
    would leave degrees 0..4 raise ArgumentError; the module-level helpers
    `laplacian` and `lambda_l_commutator` wrap them with the usual
    zero-form conventions.
    """

    def __init__(self, N: int, J: np.ndarray, g: np.ndarray,
                 omega: np.ndarray, f: np.ndarray | None = None,
                 theta: np.ndarray | None = None, name: str = "grid",
                 bands: dict | None = None,
                 f_bounds: tuple | None = None, validate: bool = True):
        self.N = int(N)
        self.h = 1.0 / self.N
        self.name = str(name)
        shape = (self.N,) * M
        self.J = np.asarray(J, dtype=float)
        self.g = np.asarray(g, dtype=float)
        self.omega = np.asarray(omega, dtype=float)
        self.f = None if f is None else np.asarray(f, dtype=float)
        self.theta = None if theta is None else np.asarray(theta, dtype=float)
        self.bands = dict(bands or {})
        self.f_bounds = (None if f_bounds is None
                         else (float(f_bounds[0]), float(f_bounds[1])))
        if (self.N < 4 or self.N % 2 or self.J.shape != shape + (M, M)
                or self.g.shape != shape + (M, M)
                or self.omega.shape != (DIMS[2],) + shape
                or (self.f is not None and self.f.shape != shape)
                or (self.theta is not None and self.theta.shape != (M,) + shape)):
            raise ModelValidationError(
                "format", f"inconsistent grid field shapes for N={N}")
        self.shape = shape
        self.pts = self.N ** M
        self._cache: dict = {}
        if validate:
            self.validate()

    # -- validation -----------------------------------------------------

    def _worst(self, field: np.ndarray) -> tuple[tuple[int, ...], float]:
        flat = field.reshape(self.pts, -1)
        resid = np.max(np.abs(flat), axis=1)
        i = int(np.argmax(resid))
        return np.unravel_index(i, self.shape), float(resid[i])

    def validate(self):
        dw = self.d(GridForm(2, self.omega))
        point, r = self._worst(np.moveaxis(dw.comps, 0, -1))
        if r > 1e-12:
            raise ModelValidationError(
                "omega-closed", f"discrete d(omega) = {r:.3e} at point {point}")
        JJ = np.einsum("...ab,...bc->...ac", self.J, self.J) + np.eye(M)
        point, r = self._worst(JJ)
        if r > 1e-10:
            raise ModelValidationError(
                "acs-square", f"J*J + id = {r:.3e} at point {point}")
        sym = self.g - np.swapaxes(self.g, -1, -2)
        point, r = self._worst(sym)
        if r > 1e-10:
            raise ModelValidationError(
                "metric", f"g asymmetry {r:.3e} at point {point}")
        low = np.linalg.eigvalsh(self.g)[..., 0].reshape(-1)
        i = int(np.argmin(low))
        if low[i] <= 1e-10:
            raise ModelValidationError(
                "metric", f"g not positive-definite at point "
                f"{np.unravel_index(i, self.shape)} (lowest eigenvalue "
                f"{low[i]:.3e})")
        compat = np.einsum("...ba,...bc,...cd->...ad",
                           self.J, self.g, self.J) - self.g
        point, r = self._worst(compat)
        if r > 1e-10:
            raise ModelValidationError(
                "compatibility", f"J^T g J - g = {r:.3e} at point {point}")
        W = np.einsum("...ba,...bc->...ac", self.J, self.g)  # omega = g(J.,.)
        triple = np.stack([W[..., i, j] for i, j in ext.words(M, 2)], axis=-1) \
            - np.moveaxis(self.omega, 0, -1)
        point, r = self._worst(triple)
        if r > 1e-10:
            raise ModelValidationError(
                "compatibility", f"omega - g(J.,.) = {r:.3e} at point {point}")

    # -- basic fields -----------------------------------------------------

    @property
    def rho(self) -> np.ndarray:
        """Pointwise Riemannian volume density sqrt(det g), flattened."""
        if "rho" not in self._cache:
            self._cache["rho"] = np.sqrt(np.linalg.det(self.g)).reshape(-1)
        return self._cache["rho"]

    @property
    def _wbwd(self) -> np.ndarray:
        """Per-point matrix sending adapted complex coefficients to real ones.

        Built from a smooth adapted coframe field: the first unitary pair is
        seeded from dx^1, the second from dx^3.  Fixed seeds keep the frame
        field smooth in the sampled structures; a greedy per-point pivot
        choice would branch between neighbouring points.
        """
        if "wbwd" not in self._cache:
            g = self.g.reshape(-1, M, M)
            J = self.J.reshape(-1, M, M)
            out = np.empty((self.pts, M, M), dtype=complex)
            for lo in range(0, self.pts, _CHUNK):
                hi = min(lo + _CHUNK, self.pts)
                out[lo:hi] = self._coframe_chunk(g[lo:hi], J[lo:hi])
            self._cache["wbwd"] = out
        return self._cache["wbwd"]

    @staticmethod
    def _coframe_chunk(g: np.ndarray, J: np.ndarray) -> np.ndarray:
        def normalize(v):
            nv = np.sqrt(np.einsum("pi,pij,pj->p", v, g, v))
            if nv.min() < 1e-8:
                i = int(np.argmin(nv))
                raise ModelValidationError(
                    "frame", f"adapted frame degenerates (norm {nv[i]:.3e})")
            return v / nv[:, None]

        pts = g.shape[0]
        e = np.eye(M)
        a1 = normalize(np.tile(e[0], (pts, 1)))
        b1 = np.einsum("pij,pj->pi", J, a1)
        v = np.tile(e[2], (pts, 1))
        for u in (a1, b1):
            v = v - np.einsum("pi,pij,pj->p", u, g, v)[:, None] * u
        a2 = normalize(v)
        b2 = np.einsum("pij,pj->pi", J, a2)
        F = np.stack([a1, b1, a2, b2], axis=-1)
        D = np.linalg.inv(F)
        C = (D[:, 0::2] + 1j * D[:, 1::2]) / math.sqrt(2.0)
        S = np.concatenate([C, np.conj(C)], axis=1)
        return np.swapaxes(S, 1, 2)               # S^T per point

    @property
    def _wfwd(self) -> np.ndarray:
        if "wfwd" not in self._cache:
            W = self._wbwd
            out = np.empty_like(W)
            for lo in range(0, self.pts, _CHUNK):
                out[lo:lo + _CHUNK] = np.linalg.inv(W[lo:lo + _CHUNK])
            self._cache["wfwd"] = out
        return self._cache["wfwd"]

    def _wfwd_chunk(self, lo: int, hi: int) -> np.ndarray:
        return self._wfwd[lo:hi]

    def _comp_chunk(self, k: int, lo: int, hi: int,
                    inverse: bool = False) -> np.ndarray:
        """Chunk [lo:hi] of the degree-k compound of the frame map.

        Whole-grid compound arrays are retained per degree while the cache
        stays under _COMP_CAP_BYTES; beyond that the chunk is recomputed.
        """
        W = self._wbwd if inverse else self._wfwd
        if k == 1:
            return W[lo:hi]
        key = ("comp", k, inverse)
        if key not in self._cache:
            dim = DIMS[k]
            nbytes = self.pts * dim * dim * 16
            used = self._cache.get("comp_bytes", 0)
            if k == 0 or used + nbytes > _COMP_CAP_BYTES:
                self._cache[key] = None
            else:
                full = np.empty((self.pts, dim, dim), dtype=complex)
                for clo in range(0, self.pts, _CHUNK):
                    chi = min(clo + _CHUNK, self.pts)
                    full[clo:chi] = _compound_of(W[clo:chi], k)
                self._cache[key] = full
                self._cache["comp_bytes"] = used + nbytes
        cached = self._cache[key]
        if cached is not None:
            return cached[lo:hi]
        return _compound_of(W[lo:hi], k)

    # -- differential -----------------------------------------------------

    def zero(self, k: int) -> GridForm:
        return GridForm(k, np.zeros((DIMS[k],) + self.shape, dtype=complex))

    def d(self, a: GridForm) -> GridForm:
        if a.degree >= M:
            raise ArgumentError("d would leave the top degree")
        out = self.zero(a.degree + 1)
        for axis, itgt, isrc, sign in _d_pattern(a.degree):
            out.comps[itgt] += sign * _central_diff(a.comps[isrc], axis, self.N)
        return out

    def _d_transpose(self, b: GridForm) -> GridForm:
        """Coefficient transpose of d: central differences are antisymmetric
        and the insertion pattern transposes entry by entry."""
        k = b.degree
        if k == 0:
            raise ArgumentError("transpose of d undefined below degree 1")
        out = self.zero(k - 1)
        for axis, itgt, isrc, sign in _d_pattern(k - 1):
            out.comps[isrc] += -sign * _central_diff(b.comps[itgt], axis, self.N)
        return out

    # -- adapted-frame transforms -------------------------------------------

    def to_adapted(self, a: GridForm) -> np.ndarray:
        """Coefficients over the pointwise unitary coframe, word order,
        shape (dim_k, pts)."""
        k = a.degree
        flat = a.comps.reshape(DIMS[k], self.pts)
        if k == 0:
            return flat.copy()
        out = np.empty_like(flat, dtype=complex)
        for lo in range(0, self.pts, _CHUNK):
            hi = min(lo + _CHUNK, self.pts)
            out[:, lo:hi] = _slot_apply_c(self._comp_chunk(k, lo, hi),
                                          flat[:, lo:hi])
        return out

    def from_adapted(self, k: int, comps: np.ndarray) -> GridForm:
        if k == 0:
            return GridForm(k, comps.reshape((1,) + self.shape).copy())
        out = np.empty_like(comps, dtype=complex)
        for lo in range(0, self.pts, _CHUNK):
            hi = min(lo + _CHUNK, self.pts)
            out[:, lo:hi] = _slot_apply_c(
                self._comp_chunk(k, lo, hi, inverse=True), comps[:, lo:hi])
        return GridForm(k, out.reshape((DIMS[k],) + self.shape))

    def _metric(self, a: GridForm, inverse: bool = False) -> GridForm:
        """Pointwise positive pairing rho * A^H A (A = adapted transform), the
        operator behind the discrete inner product, or its inverse."""
        k = a.degree
        flat = a.comps.reshape(DIMS[k], self.pts)
        out = np.empty_like(flat, dtype=complex)
        rho = self.rho
        for lo in range(0, self.pts, _CHUNK):
            hi = min(lo + _CHUNK, self.pts)
            if inverse:
                C = self._comp_chunk(k, lo, hi, inverse=True)
                mid = np.einsum("pba,bp->ap", np.conj(C), flat[:, lo:hi])
                out[:, lo:hi] = np.einsum("pab,bp->ap", C, mid) / rho[lo:hi]
            else:
                C = self._comp_chunk(k, lo, hi)
                mid = np.einsum("pab,bp->ap", C, flat[:, lo:hi])
                out[:, lo:hi] = np.einsum("pba,bp->ap",
                                          np.conj(C), mid) * rho[lo:hi]
        return GridForm(k, out.reshape(a.comps.shape))

    def codifferential(self, b: GridForm) -> GridForm:
        """Metric adjoint of d; (d a, b) = (a, codifferential b) exactly."""
        if b.degree == 0:
            raise ArgumentError("codifferential undefined on functions; "
                                "use the laplacian helper")
        return self._metric(self._d_transpose(self._metric(b)), inverse=True)

    def inner(self, a: GridForm, b: GridForm) -> complex:
        """Discrete L2 pairing: both arguments move to the unitary coframe,
        where the metric is the volume density alone."""
        if a.degree != b.degree:
            raise ArgumentError("inner product needs equal degrees")
        k = a.degree
        fa = a.comps.reshape(DIMS[k], self.pts)
        fb = b.comps.reshape(DIMS[k], self.pts)
        rho = self.rho
        acc = 0.0j
        for lo in range(0, self.pts, _CHUNK):
            hi = min(lo + _CHUNK, self.pts)
            if k == 0:
                ah, bh = fa[:, lo:hi], fb[:, lo:hi]
            else:
                C = self._comp_chunk(k, lo, hi)
                ah = _slot_apply_c(C, fa[:, lo:hi])
                bh = _slot_apply_c(C, fb[:, lo:hi])
            acc += np.sum(ah * np.conj(bh) * rho[lo:hi])
        return complex(acc * self.h ** M)

    def norm(self, a: GridForm) -> float:
        return math.sqrt(max(self.inner(a, a).real, 0.0))

    # -- pointwise structure operators ----------------------------------------

    def project(self, a: GridForm, p: int, q: int) -> GridForm:
        """Bidegree projection; zero when (p, q) is off the degree diagonal."""
        if p + q != a.degree or not (0 <= p <= NC and 0 <= q <= NC):
            return self.zero(a.degree)
        blockpos = _const_matrices()[4]
        hat = self.to_adapted(a)
        keep = np.zeros_like(hat)
        pos = blockpos[a.degree][(p, q)]
        keep[pos] = hat[pos]
        return self.from_adapted(a.degree, keep)

    def apply_J(self, a: GridForm, inverse: bool = False) -> GridForm:
        jdiag = _const_matrices()[0][a.degree]
        hat = self.to_adapted(a)
        fac = np.conj(jdiag) if inverse else jdiag
        return self.from_adapted(a.degree, fac[:, None] * hat)

    def wedge(self, a: GridForm, b: GridForm) -> GridForm:
        """Pointwise exterior product in the coordinate coframe."""
        if a.degree + b.degree > M:
            raise ArgumentError("wedge product would leave the top degree")
        out = self.zero(a.degree + b.degree)
        for ia, ib, iout, sign in ext.wedge_table(M, a.degree, b.degree):
            out.comps[iout] += sign * a.comps[ia] * b.comps[ib]
        return out

    def lefschetz(self, a: GridForm) -> GridForm:
        """Wedge with omega, computed natively in the coordinate coframe."""
        if a.degree + 2 > M:
            raise ArgumentError("wedge with omega would leave the top degree")
        return self.wedge(GridForm(2, self.omega), a)

    def dual_lambda(self, a: GridForm) -> GridForm:
        if a.degree < 2:
            raise ArgumentError("interior product with omega needs degree >= 2")
        lam = _const_matrices()[2][a.degree]
        hat = self.to_adapted(a)
        return self.from_adapted(a.degree - 2, lam @ hat)

    def star(self, a: GridForm) -> GridForm:
        st = _const_matrices()[3][a.degree]
        hat = self.to_adapted(a)
        return self.from_adapted(M - a.degree, st @ hat)

    def d_component(self, a: GridForm, name: str) -> GridForm:
        """One bidegree component of d: project, differentiate, project.

        In real dimension 4 the four components recover d exactly, since
        every bidegree of degree k+1 is reachable from some bidegree of
        degree k by one of the four shifts.
        """
        if name not in SHIFTS:
            raise ArgumentError(f"unknown component {name!r}")
        if a.degree >= M:
            raise ArgumentError("d would leave the top degree")
        dp, dq = SHIFTS[name]
        out = self.zero(a.degree + 1)
        for (p, q) in blocks_of_degree(a.degree):
            tp, tq = p + dp, q + dq
            if not (0 <= tp <= NC and 0 <= tq <= NC):
                continue
            piece = self.d(self.project(a, p, q))
            out = out + self.project(piece, tp, tq)
        return out

    def d_component_adjoint(self, b: GridForm, name: str) -> GridForm:
        """Metric adjoint of one component (projections are self-adjoint)."""
        if name not in SHIFTS:
            raise ArgumentError(f"unknown component {name!r}")
        if b.degree == 0:
            raise ArgumentError("adjoint components vanish on functions")
        dp, dq = SHIFTS[name]
        out = self.zero(b.degree - 1)
        for (p, q) in blocks_of_degree(b.degree - 1):
            tp, tq = p + dp, q + dq
            if not (0 <= tp <= NC and 0 <= tq <= NC):
                continue
            piece = self.codifferential(self.project(b, tp, tq))
            out = out + self.project(piece, p, q)
        return out

    # -- Nijenhuis -----------------------------------------------------------

    def nijenhuis_field(self) -> np.ndarray:
        """N[..., i, j, k] = component k of N(e_i, e_j), finite differences.

        Coordinate fields commute, so only derivatives of J contribute to
        N(X,Y) = [X,Y] + J[X,JY] + J[JX,Y] - [JX,JY].
        """
        if "nijenhuis" not in self._cache:
            J = self.J
            dJ = np.stack([_central_diff(J, a, self.N) for a in range(M)],
                          axis=-3)                 # (..., a, k, l) = D_a J_kl
            t2 = np.einsum("...ikj->...ijk", dJ)          # [e_i, J e_j]
            t3 = -np.einsum("...jki->...ijk", dJ)         # [J e_i, e_j]
            t4 = (np.einsum("...ai,...akj->...ijk", J, dJ)
                  - np.einsum("...bj,...bki->...ijk", J, dJ))   # [J e_i, J e_j]
            jt = np.einsum("...kl,...ijl->...ijk", J, t2 + t3)
            self._cache["nijenhuis"] = jt - t4
        return self._cache["nijenhuis"]

    def _nijenhuis_images(self) -> np.ndarray:
        """(label, word2, pts) coefficients: alpha -> alpha(N(e_i, e_j))."""
        N = self.nijenhuis_field()
        imgs = np.stack([np.stack([N[..., i, j, lab]
                                   for (i, j) in ext.words(M, 2)], axis=0)
                         for lab in range(M)], axis=0)
        return imgs.reshape(M, DIMS[2], self.pts)

    def apply_nijenhuis_dual(self, a: GridForm) -> GridForm:
        """The derivation dual N^* (degree +1, zeroth order), pointwise."""
        if a.degree >= M:
            raise ArgumentError("the dual derivation would leave the top degree")
        imgs = self._nijenhuis_images().reshape((M, DIMS[2]) + self.shape)
        out = self.zero(a.degree + 1)
        for label, i2, itgt, isrc, sign in ext.derivation_entries(M, a.degree):
            out.comps[itgt] += sign * imgs[label, i2] * a.comps[isrc]
        return out

    def sup_nijenhuis(self) -> float:
        """Largest pointwise metric operator norm of (1/4) N^* on 1-forms,
        the zeroth-order part of d."""
        imgs = self._nijenhuis_images()
        sup = 0.0
        for lo in range(0, self.pts, _CHUNK):
            hi = min(lo + _CHUNK, self.pts)
            mats = np.zeros((hi - lo, DIMS[2], DIMS[1]), dtype=complex)
            for label, i2, itgt, isrc, sign in ext.derivation_entries(M, 1):
                mats[:, itgt, isrc] += sign * imgs[label, i2, lo:hi]
            hatmats = np.einsum("pab,pbc,pcd->pad",
                                self._comp_chunk(2, lo, hi), mats,
                                self._wbwd[lo:hi])
            sv = np.linalg.svd(hatmats, compute_uv=False)
            sup = max(sup, 0.25 * float(sv[:, 0].max()))
        return sup


def _compound2(W: np.ndarray) -> np.ndarray:
    """Batched second compound (6x6 of 2x2 minors) of (pts,4,4) matrices."""
    ws = ext.words(M, 2)
    out = np.empty(W.shape[:-2] + (DIMS[2], DIMS[2]), dtype=W.dtype)
    for a, (i, j) in enumerate(ws):
        for b, (k, l) in enumerate(ws):
            out[..., a, b] = (W[..., i, k] * W[..., j, l]
                              - W[..., i, l] * W[..., j, k])
    return out


# ---------------------------------------------------------------------------
# degree-guard helpers
# ---------------------------------------------------------------------------

def laplacian(gm: GridModel, a: GridForm, component: str | None = None) -> GridForm:
    """d delta + delta d (or the same for one bidegree component of d)."""
    k = a.degree
    if component is None:
        up_op, down_op = gm.d, gm.codifferential
    else:
        up_op = lambda x: gm.d_component(x, component)
        down_op = lambda x: gm.d_component_adjoint(x, component)
    up = down_op(up_op(a)) if k < M else gm.zero(k)
    down = up_op(down_op(a)) if k > 0 else gm.zero(k)
    return up + down


def lambda_l_commutator(gm: GridModel, a: GridForm) -> GridForm:
    """[Lambda, L] a, with wedge/contraction treated as zero out of range."""
    k = a.degree
    t1 = gm.dual_lambda(gm.lefschetz(a)) if k + 2 <= M else gm.zero(k)
    t2 = gm.lefschetz(gm.dual_lambda(a)) if k >= 2 else gm.zero(k)
    return t1 - t2


# ---------------------------------------------------------------------------
# recipes
# ---------------------------------------------------------------------------

_J0 = np.zeros((M, M))
_J0[1, 0], _J0[0, 1], _J0[3, 2], _J0[2, 3] = 1.0, -1.0, 1.0, -1.0
_OMEGA0 = np.zeros(DIMS[2])
_OMEGA0[0] = 1.0      # dx^1 ^ dx^2
_OMEGA0[5] = 1.0      # dx^3 ^ dx^4


def _reject_unknown(table, allowed: set, where: str):
    if not isinstance(table, dict):
        raise ModelValidationError("format", f"{where} must be a table")
    extra = set(table) - allowed
    if extra:
        raise ModelValidationError(
            "format", f"unknown key(s) {sorted(extra)} in {where}")


def _mode_vector(value, where: str) -> np.ndarray:
    arr = np.asarray(value)
    if arr.shape != (M,) or not np.all(arr == arr.astype(int)):
        raise ModelValidationError(
            "format", f"{where} mode must be 4 integers, got {value!r}")
    return arr.astype(int)


def _phase(N: int, mode: np.ndarray) -> np.ndarray:
    xs = np.arange(N) / N
    grids = np.meshgrid(*([xs] * M), indexing="ij")
    return 2.0 * math.pi * sum(int(m) * x for m, x in zip(mode, grids))


def _scalar_recipe(N: int, cfg: dict, where: str) -> tuple[np.ndarray, int]:
    _reject_unknown(cfg, {"offset", "amplitude", "mode"}, where)
    offset = float(cfg.get("offset", 0.0))
    amplitude = float(cfg.get("amplitude", 0.0))
    mode = _mode_vector(cfg.get("mode", [1, 0, 0, 0]), where)
    return offset + amplitude * np.sin(_phase(N, mode)), int(np.abs(mode).max())


def _polar_chunk(Om: np.ndarray, Jhat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exactly compatible (J, g) from a symplectic matrix and a guess J.

    g_aux = sym(Omega Jhat) anchors the construction; the candidate operator
    A with omega(X, Y) = g_aux(A X, Y) is A = -g_aux^{-1} Omega, and J is its
    polar unitary factor computed in g_aux-orthonormal coordinates.  Then
    g = Omega J is symmetric positive and omega(X, Y) = g(J X, Y) holds
    exactly pointwise.
    """
    gaux = 0.5 * (Om @ Jhat + np.swapaxes(Om @ Jhat, -1, -2))
    eig = np.linalg.eigvalsh(gaux)
    if eig[..., 0].min() <= 1e-10:
        raise ModelValidationError(
            "metric", "perturbations too large: auxiliary metric loses "
            f"positivity (lowest eigenvalue {eig[..., 0].min():.3e})")
    L = np.linalg.cholesky(gaux)
    E = np.swapaxes(L, -1, -2)                # gaux = E^T E
    A = -np.linalg.solve(gaux, Om)
    At = E @ A @ np.linalg.inv(E)
    At = 0.5 * (At - np.swapaxes(At, -1, -2))
    S = -At @ At
    w, V = np.linalg.eigh(0.5 * (S + np.swapaxes(S, -1, -2)))
    Sinvhalf = V @ (np.swapaxes(V, -1, -2) / np.sqrt(w)[..., :, None])
    Jt = At @ Sinvhalf
    J = np.linalg.solve(E, Jt) @ E
    g = Om @ J
    return J, 0.5 * (g + np.swapaxes(g, -1, -2))


def build_grid(source) -> GridModel:
    """Recipe (dict or TOML path) -> validated GridModel."""
    if isinstance(source, dict):
        data = source
    else:
        path = Path(source)
        if not path.exists():
            raise ModelValidationError("format", f"no such recipe file {source!r}")
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise ModelValidationError("format", f"TOML parse error: {e}")

    _reject_unknown(data, {"grid", "fields"}, "top level")
    if "grid" not in data:
        raise ModelValidationError("format", "missing [grid] section")
    _reject_unknown(data["grid"], {"N"}, "[grid]")
    raw = data["grid"].get("N")
    try:
        N = int(raw)
    except (TypeError, ValueError):
        raise ModelValidationError("format", "[grid] needs an integer N")
    if isinstance(raw, bool) or N != raw:
        raise ModelValidationError("format", "[grid] needs an integer N")
    if N < 4 or N % 2:
        raise ModelValidationError("format", f"N must be even and >= 4, got {N}")
    fields = data.get("fields", {})
    _reject_unknown(fields, {"j_perturbation", "omega_perturbation", "f",
                             "theta"}, "[fields]")
    shape = (N,) * M
    bands = {}

    # J guess: rotate the constant structure pointwise in a coordinate plane
    Jhat = np.broadcast_to(_J0, shape + (M, M)).copy()
    if "j_perturbation" in fields:
        cfg = fields["j_perturbation"]
        _reject_unknown(cfg, {"axis_pair", "amplitude", "mode"},
                        "j_perturbation")
        pair = cfg.get("axis_pair", [2, 3])
        if (len(pair) != 2 or not all(1 <= int(a) <= M for a in pair)
                or int(pair[0]) == int(pair[1])):
            raise ModelValidationError(
                "format",
                f"axis_pair must be two distinct axes in 1..4, got {pair!r}")
        a, b = int(pair[0]) - 1, int(pair[1]) - 1
        amplitude = float(cfg.get("amplitude", 0.0))
        mode = _mode_vector(cfg.get("mode", [1, 0, 0, 0]), "j_perturbation")
        angle = amplitude * np.sin(_phase(N, mode))
        R = np.broadcast_to(np.eye(M), shape + (M, M)).copy()
        R[..., a, a] = np.cos(angle)
        R[..., b, b] = np.cos(angle)
        R[..., a, b] = -np.sin(angle)
        R[..., b, a] = np.sin(angle)
        Jhat = R @ Jhat @ np.swapaxes(R, -1, -2)
        bands["j"] = int(np.abs(mode).max())

    # omega: constant form plus the discrete d of a sampled potential, so the
    # discrete closedness is exact at every resolution
    omega = np.broadcast_to(_OMEGA0[:, None, None, None, None],
                            (DIMS[2],) + shape).copy()
    if "omega_perturbation" in fields:
        cfg = fields["omega_perturbation"]
        _reject_unknown(cfg, {"amplitude", "mode"}, "omega_perturbation")
        amplitude = float(cfg.get("amplitude", 0.0))
        mode = _mode_vector(cfg.get("mode", [1, 0, 0, 0]), "omega_perturbation")
        pot = np.zeros((DIMS[1],) + shape)
        pot[1] = amplitude * np.cos(_phase(N, mode))       # dx^2 component
        pot[3] = amplitude * np.cos(_phase(N, mode))       # dx^4 component
        for axis, itgt, isrc, sign in _d_pattern(1):
            omega[itgt] += sign * _central_diff(pot[isrc], axis, N)
        bands["omega"] = int(np.abs(mode).max())

    Om = np.zeros(shape + (M, M))
    for pos, (i, j) in enumerate(ext.words(M, 2)):
        Om[..., i, j] = omega[pos]
        Om[..., j, i] = -omega[pos]

    J = np.empty(shape + (M, M))
    g = np.empty(shape + (M, M))
    flatO = Om.reshape(-1, M, M)
    flatJh = Jhat.reshape(-1, M, M)
    for lo in range(0, N ** M, _CHUNK):
        hi = min(lo + _CHUNK, N ** M)
        Jc, gc = _polar_chunk(flatO[lo:hi], flatJh[lo:hi])
        J.reshape(-1, M, M)[lo:hi] = Jc
        g.reshape(-1, M, M)[lo:hi] = gc

    f = None
    f_bounds = None
    if "f" in fields:
        f, band = _scalar_recipe(N, fields["f"], "f")
        bands["f"] = band
        # declared gradient-domination constants for this sampled family:
        # |df| <= 2 pi |amplitude| |mode| exactly in flat coordinates, and
        # the factor 1.5 absorbs the (validated, small) metric perturbation
        amp = float(fields["f"].get("amplitude", 0.0))
        mode = _mode_vector(fields["f"].get("mode", [1, 0, 0, 0]), "f")
        f_bounds = ((2.0 * math.pi * amp) ** 2 * float(mode @ mode) * 1.5, 0.0)
    theta = None
    if "theta" in fields:
        cfg = fields["theta"]
        _reject_unknown(cfg, {"components"}, "theta")
        comps = cfg.get("components", {})
        _reject_unknown(comps, {"c1", "c2", "c3", "c4"}, "theta.components")
        theta = np.zeros((M,) + shape)
        band = 0
        for idx in range(M):
            key = f"c{idx + 1}"
            if key in comps:
                theta[idx], b = _scalar_recipe(N, comps[key], f"theta.{key}")
                band = max(band, b)
        bands["theta"] = band

    return GridModel(N, J, g, omega, f=f, theta=theta,
                     name=f"grid-N{N}", bands=bands, f_bounds=f_bounds)


# ---------------------------------------------------------------------------
# operator suite
# ---------------------------------------------------------------------------

@dataclass
class DiscreteOperator:
    """Named matrix-free operator acting on GridForm."""

    name: str
    shift: object
    func: object

    def __call__(self, a: GridForm) -> GridForm:
        return self.func(a)


def grid_operator_suite(gm: GridModel) -> dict[str, DiscreteOperator]:
    """The bidegree components of d, the Lefschetz pair, the star, and all
    metric adjoints, as named operators over this grid."""
    ops = {}
    for nm, shift in SHIFTS.items():
        ops[nm] = DiscreteOperator(nm, shift,
                                   lambda a, nm=nm: gm.d_component(a, nm))
        ops[nm + "_adj"] = DiscreteOperator(
            nm + "_adj", (-shift[0], -shift[1]),
            lambda a, nm=nm: gm.d_component_adjoint(a, nm))
    ops["d"] = DiscreteOperator("d", 1, gm.d)
    ops["d_adj"] = DiscreteOperator("d_adj", -1, gm.codifferential)
    ops["L"] = DiscreteOperator("L", (1, 1), gm.lefschetz)
    ops["Lambda"] = DiscreteOperator("Lambda", (-1, -1), gm.dual_lambda)
    ops["star"] = DiscreteOperator("star", 0, gm.star)
    return ops


# ---------------------------------------------------------------------------
# constant-structure harmonic dimensions
# ---------------------------------------------------------------------------

def harmonic_dims(gm: GridModel, band: int | None = None,
                  tol: float = 1e-9) -> tuple[int, ...]:
    """Joint kernel dimensions of (d, d*) per degree, constant grids only.

    Works mode-by-mode on the Fourier symbols of the central differences,
    restricted to |k_a| <= band (default N/4): central differences are blind
    at the Nyquist frequency, so the count is taken over the resolvable
    band-limited subspace, where it reproduces the continuum answer.
    """
    for field, nm in ((gm.J, "J"), (gm.g, "g"),
                      (np.moveaxis(gm.omega, 0, -1), "omega")):
        flat = field.reshape(gm.pts, -1)
        if np.max(np.abs(flat - flat[0])) > 1e-12:
            raise ArgumentError(
                f"harmonic dimensions need a constant-structure grid ({nm} varies)")
    if band is None:
        band = gm.N // 4
    if band < 1 or 2 * band >= gm.N:
        raise ArgumentError(f"band must satisfy 1 <= band < N/2, got {band}")
    g0 = gm.g.reshape(gm.pts, M, M)[0]
    rho0 = math.sqrt(np.linalg.det(g0))
    grams = {k: ext.gram(M, k, np.linalg.inv(g0)) * rho0 for k in range(M + 1)}

    def symbol(k, sigma):
        D = np.zeros((DIMS[k + 1], DIMS[k]), dtype=complex)
        for axis, itgt, isrc, sign in _d_pattern(k):
            D[itgt, isrc] += sign * 1j * sigma[axis]
        return D

    dims = [0] * (M + 1)
    rng = range(-band, band + 1)
    for mode in itertools.product(rng, repeat=M):
        sigma = np.array([math.sin(2 * math.pi * kk / gm.N) * gm.N
                          for kk in mode])
        for k in range(M + 1):
            rows = []
            if k < M:
                rows.append(symbol(k, sigma))
            if k > 0:
                Dprev = symbol(k - 1, sigma)
                rows.append(np.linalg.solve(grams[k - 1],
                                            Dprev.conj().T @ grams[k]))
            stack = np.vstack(rows)
            sv = np.linalg.svd(stack, compute_uv=False)
            top = sv[0] if sv.size else 0.0
            dims[k] += int(np.sum(sv <= tol * max(top, 1.0))) \
                + DIMS[k] - len(sv)
    return tuple(dims)


# ---------------------------------------------------------------------------
# test forms and convergence
# ---------------------------------------------------------------------------

def band_limited_form(gm: GridModel, k: int, band: int = 1,
                      seed: int = 7) -> GridForm:
    """Deterministic trigonometric k-form, the same analytic form at any N.

    Fourier coefficients depend only on (k, band, seed), never on N, so
    residuals measured at different resolutions sample one smooth object.
    """
    if not 0 <= k <= M:
        raise ArgumentError(f"no degree-{k} forms in dimension {M}")
    if 2 * band >= gm.N:
        raise ArgumentError(f"band {band} is not resolvable at N={gm.N}")
    rng = np.random.default_rng(seed * 100 + k)
    comps = np.empty((DIMS[k],) + gm.shape, dtype=complex)
    side = 2 * band + 1
    for w in range(DIMS[k]):
        cfg = np.zeros(gm.shape, dtype=complex)
        for mv in np.ndindex(*(side,) * M):
            m = np.array(mv) - band
            c = (rng.normal() + 1j * rng.normal()) / side ** M
            cfg[tuple(m % gm.N)] += c
        comps[w] = np.fft.ifftn(cfg) * gm.pts
    return GridForm(k, comps)


def _default_recipe(N: int) -> dict:
    return {
        "grid": {"N": N},
        "fields": {
            "j_perturbation": {"axis_pair": [2, 3], "amplitude": 0.15,
                               "mode": [1, 0, 0, 0]},
            "omega_perturbation": {"amplitude": 0.08, "mode": [0, 1, 0, 0]},
            "f": {"offset": 2.0, "amplitude": 1.0, "mode": [0, 1, 0, 0]},
            "theta": {"components": {
                "c1": {"offset": 0.4, "amplitude": 0.3, "mode": [0, 0, 1, 0]},
                "c3": {"offset": -0.2, "amplitude": 0.25, "mode": [1, 0, 0, 0]},
            }},
        },
    }


def _res_d2(gm: GridModel) -> float:
    a = band_limited_form(gm, 1)
    return gm.norm(gm.d(gm.d(a))) / gm.norm(a)


def _res_stokes(gm: GridModel) -> float:
    a = band_limited_form(gm, 1, seed=3)
    b = band_limited_form(gm, 2, seed=4)
    lhs = gm.inner(gm.d(a), b)
    rhs = gm.inner(a, gm.codifferential(b))
    scale = max(gm.norm(gm.d(a)) * gm.norm(b), 1e-30)
    return abs(lhs - rhs) / scale


def _res_lefschetz_commutator(gm: GridModel) -> float:
    worst = 0.0
    for k in range(M + 1):
        a = band_limited_form(gm, k, seed=5)
        comm = lambda_l_commutator(gm, a)
        worst = max(worst, gm.norm(comm - float(NC - k) * a) / gm.norm(a))
    return worst


def _res_partial_squared(gm: GridModel) -> float:
    a = band_limited_form(gm, 1, seed=11)
    out = (gm.d_component(gm.d_component(a, "del"), "del")
           + gm.d_component(gm.d_component(a, "delbar"), "mu")
           + gm.d_component(gm.d_component(a, "mu"), "delbar"))
    return gm.norm(out) / gm.norm(a)


def _res_mu_del(gm: GridModel) -> float:
    a = band_limited_form(gm, 1, seed=12)
    out = (gm.d_component(gm.d_component(a, "del"), "mu")
           + gm.d_component(gm.d_component(a, "mu"), "del"))
    return gm.norm(out) / gm.norm(a)


def _res_nijenhuis_dual(gm: GridModel) -> float:
    a = band_limited_form(gm, 1, seed=13)
    zero_order = gm.d_component(a, "mu") + gm.d_component(a, "mubar")
    return gm.norm(zero_order + 0.25 * gm.apply_nijenhuis_dual(a)) / gm.norm(a)


def _res_six_term(gm: GridModel) -> float:
    """Integration-by-parts expansion of ((d theta)^{1,1} ^ a, omega ^ a).

    Six right-hand terms: wedge-Leibniz moves the derivative off theta, the
    exact discrete adjoint moves it across the pairing, and the commutator
    [del*, L] = -i delbar (and its conjugate) eliminates the mixed term.
    The Leibniz and commutator steps each carry the O(h^2) stencil defect.
    """
    if gm.theta is None:
        raise ArgumentError("recipe provides no 1-form theta")
    th = GridForm(1, gm.theta)
    th10 = gm.project(th, 1, 0)
    th01 = gm.project(th, 0, 1)
    a = band_limited_form(gm, 1, seed=17)
    dth11 = gm.project(gm.d(th), 1, 1)
    lhs = gm.inner(gm.wedge(dth11, a), gm.lefschetz(a))
    terms = [
        gm.inner(gm.wedge(th01, a), -1j * gm.d_component(a, "delbar")),
        gm.inner(gm.wedge(th01, a),
                 gm.lefschetz(gm.d_component_adjoint(a, "del"))),
        gm.inner(gm.wedge(th01, gm.d_component(a, "del")), gm.lefschetz(a)),
        gm.inner(gm.wedge(th10, a), 1j * gm.d_component(a, "del")),
        gm.inner(gm.wedge(th10, a),
                 gm.lefschetz(gm.d_component_adjoint(a, "delbar"))),
        gm.inner(gm.wedge(th10, gm.d_component(a, "delbar")), gm.lefschetz(a)),
    ]
    scale = abs(lhs) + sum(abs(t) for t in terms)
    return abs(lhs - sum(terms)) / max(scale, 1e-30)


def _res_djdf(gm: GridModel) -> float:
    if gm.f is None:
        raise ArgumentError("recipe provides no scalar field f")
    f0 = GridForm(0, gm.f[None])
    df = gm.d(f0)
    lhs = gm.d(gm.apply_J(df))
    delbar_f = gm.d_component(f0, "delbar")
    del_f = gm.d_component(f0, "del")
    rhs = (2j * gm.d_component(delbar_f, "mu")
           + 2j * gm.d_component(delbar_f, "del")
           - 2j * gm.d_component(del_f, "mubar"))
    return gm.norm(lhs - rhs) / max(gm.norm(df), 1e-30)


def _res_djdf_terms(gm: GridModel) -> float:
    """Expansions of the two halves of the pairing ([2i del delbar f, Lam]a, a).

    Each half is unwound by the product rule, adjointness, and the
    commutation rules [del, Lam] = -i delbar_adj and [del_adj, L] =
    -i delbar, all of which hold only to truncation order on a grid.
    """
    if gm.f is None:
        raise ArgumentError("recipe provides no scalar field f")
    f0 = GridForm(0, gm.f[None])
    t01 = gm.project(gm.d(f0), 0, 1)
    xi = 2j * gm.d_component(t01, "del")
    a = band_limited_form(gm, 2, seed=21)
    la = gm.dual_lambda(a)
    da = gm.d_component(a, "del")
    dba = gm.d_component(a, "delbar")
    ds_a = gm.d_component_adjoint(a, "del")
    dbs_a = gm.d_component_adjoint(a, "delbar")
    one_lhs = gm.inner(gm.wedge(xi, la), a)
    one_rhs = (gm.inner(2j * gm.wedge(t01, la), ds_a)
               + gm.inner(2.0 * gm.wedge(t01, dbs_a), a)
               + gm.inner(2j * gm.wedge(t01, gm.dual_lambda(da)), a))
    two_lhs = -gm.inner(gm.wedge(xi, a), gm.lefschetz(a))
    two_rhs = (gm.inner(2.0 * gm.wedge(t01, a), dba)
               - gm.inner(2j * gm.wedge(t01, a), gm.lefschetz(ds_a))
               - gm.inner(2j * gm.wedge(t01, da), gm.lefschetz(a)))
    scale = (abs(one_lhs) + abs(one_rhs) + abs(two_lhs) + abs(two_rhs) + 1.0)
    return (abs(one_lhs - one_rhs) + abs(two_lhs - two_rhs)) / scale


IDENTITIES = {
    "d2": _res_d2,
    "stokes-adjoint": _res_stokes,
    "lefschetz-commutator": _res_lefschetz_commutator,
    "partial-squared": _res_partial_squared,
    "mu-del-anticommutator": _res_mu_del,
    "nijenhuis-dual": _res_nijenhuis_dual,
    "six-term-pairing": _res_six_term,
    "djdf-expansion": _res_djdf,
    "djdf-terms": _res_djdf_terms,
}

EXACT_CUTOFF = 1e-12


def convergence_study(identity_id: str, resolutions,
                      recipe: dict | None = None) -> dict:
    """Residuals of one identity over increasing N, with the observed order.

    Residuals below 1e-12 everywhere report "exact"; a residual sequence
    that fails to decrease monotonically reports "unstable"; otherwise the
    order is the slope of log(residual) over the finest resolution pair.
    """
    return convergence_suite([identity_id], resolutions, recipe)[0]


def convergence_suite(identity_ids, resolutions,
                      recipe: dict | None = None) -> list:
    """Like convergence_study for several identities, building each grid once.

    The grids (and their cached frame data) dominate the cost, so running
    a batch of identities over shared models is much cheaper than separate
    studies.  Returns one study dict per identity, in input order.
    """
    ids = list(identity_ids)
    for ident in ids:
        if ident not in IDENTITIES:
            raise ArgumentError(
                f"unknown identity {ident!r}; have {sorted(IDENTITIES)}")
    if len(set(ids)) != len(ids):
        raise ArgumentError("identity ids repeat")
    res_list = [int(N) for N in resolutions]
    if len(res_list) < 3 or any(b <= a for a, b in zip(res_list, res_list[1:])):
        raise ArgumentError("need at least 3 strictly increasing resolutions")
    table: dict = {ident: [] for ident in ids}
    for N in res_list:
        data = _default_recipe(N) if recipe is None else _with_resolution(recipe, N)
        gm = build_grid(data)
        for ident in ids:
            table[ident].append(float(IDENTITIES[ident](gm)))
        del gm
    return [_study_summary(ident, res_list, table[ident]) for ident in ids]


def _study_summary(identity_id: str, res_list, residuals) -> dict:
    out = {"identity": identity_id, "resolutions": list(res_list),
           "residuals": list(residuals)}
    if all(r < EXACT_CUTOFF for r in residuals):
        out["order"] = "exact"
        out["pair_orders"] = []
    elif any(b >= a for a, b in zip(residuals, residuals[1:])):
        out["order"] = "unstable"
        out["pair_orders"] = []
    else:
        pairs = [math.log(residuals[i] / residuals[i + 1])
                 / math.log(res_list[i + 1] / res_list[i])
                 for i in range(len(res_list) - 1)]
        out["pair_orders"] = [float(p) for p in pairs]
        # the finest pair sits closest to the asymptotic regime
        out["order"] = float(pairs[-1])
    return out


def _with_resolution(recipe: dict, N: int) -> dict:
    data = copy.deepcopy(recipe)
    data.setdefault("grid", {})["N"] = N
    return data
