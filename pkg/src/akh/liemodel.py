"""Left-invariant almost Hermitian models from Lie structure constants.

A model is a real 2n-dimensional Lie algebra with a compatible triple
(g, J, omega), omega(X,Y) = g(JX,Y) closed under the Chevalley-Eilenberg
differential.  Invariant forms make every operator an exact finite matrix:
d and its bidegree components, the Nijenhuis coupling, the Levi-Civita
connection and curvature, all live here.

Structure data is stored as the coefficients of the differential,
d eps^k = sum_{i<j} dcoeffs[k,(i,j)] eps^i ^ eps^j, which fixes the bracket
convention [e_i, e_j] = sum_k c^k_ij e_k with c = -dcoeffs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ImportError:                           # Python < 3.11
    import tomli as tomllib

from . import bigraded as bg
from . import exterior as ext
from .bigraded import BigradedForm, HermitianFrame
from .errors import ArgumentError, ConsistencyError, ModelValidationError
from .operators import Operator

SHIFT_NAMES = {"mu": (2, -1), "del": (1, 0), "delbar": (0, 1), "mubar": (-1, 2)}


class LieModel:
    """Invariant almost Hermitian structure on a Lie algebra.

    ``images[a]`` holds the 2-form coefficients of d eps^(a+1); ``g`` and
    ``J`` are the metric and almost complex structure on vectors in the same
    basis.  All derived objects (complex coframe, operators, curvature) are
    cached lazily.
    """

    def __init__(self, name: str, images: np.ndarray, g: np.ndarray,
                 J: np.ndarray, validate: bool = True):
        self.name = str(name)
        self.images = np.asarray(images, dtype=float)
        self.g = np.asarray(g, dtype=float)
        self.J = np.asarray(J, dtype=float)
        m = self.g.shape[0]
        if self.images.shape != (m, ext.dim(m, 2)) or self.g.shape != (m, m) \
                or self.J.shape != (m, m) or m % 2:
            raise ModelValidationError(
                "format", f"inconsistent shapes for dim {m}: images "
                f"{self.images.shape}, g {self.g.shape}, J {self.J.shape}")
        self.m = m
        self.n = m // 2
        self._cache: dict = {}
        if validate:
            self.validate()

    # -- structure tensors -----------------------------------------------------

    @property
    def brackets(self) -> np.ndarray:
        """c[i,j,:] = coordinates of [e_i, e_j]; c^k_ij = -dcoeff^k_ij."""
        if "c" not in self._cache:
            m = self.m
            c = np.zeros((m, m, m))
            widx = ext.words(m, 2)
            for k in range(m):
                for pos, (i, j) in enumerate(widx):
                    c[i, j, k] = -self.images[k, pos]
                    c[j, i, k] = self.images[k, pos]
            self._cache["c"] = c
        return self._cache["c"]

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("ijk,i,j->k", self.brackets, x, y)

    @property
    def omega_real(self) -> np.ndarray:
        """Coefficients of omega = g(J.,.) over the real coframe basis."""
        W = self.J.T @ self.g
        return np.array([W[i, j] for i, j in ext.words(self.m, 2)])

    def d_real(self) -> dict[int, np.ndarray]:
        """Chevalley-Eilenberg differential, one matrix per form degree."""
        if "d_real" not in self._cache:
            self._cache["d_real"] = ext.derivation_matrices(self.m, self.images)
        return self._cache["d_real"]

    # -- validation --------------------------------------------------------------

    def validate(self):
        m = self.m
        sym = np.max(np.abs(self.g - self.g.T))
        if sym > 1e-12 or np.linalg.eigvalsh((self.g + self.g.T) / 2).min() <= 0:
            raise ModelValidationError("metric", "g is not symmetric positive-definite")
        if np.max(np.abs(self.J @ self.J + np.eye(m))) > 1e-10:
            raise ModelValidationError("acs-square", "J*J != -identity")
        if np.max(np.abs(self.J.T @ self.g @ self.J - self.g)) > 1e-10:
            raise ModelValidationError("compatibility", "metric is not J-invariant")
        c = self.brackets
        jac = np.einsum("ijl,lkm->ijkm", c, c)
        jacobi = jac + np.einsum("jkl,lim->ijkm", c, c) + np.einsum("kil,ljm->ijkm", c, c)
        if np.max(np.abs(jacobi)) > 1e-12:
            raise ModelValidationError("jacobi", f"Jacobi residual {np.max(np.abs(jacobi)):.3e}")
        d = self.d_real()
        dd = np.max(np.abs(d[2] @ d[1]))
        if dd > 1e-13:
            raise ModelValidationError("d-squared", f"d^2 residual {dd:.3e}")
        dw = np.max(np.abs(d[2] @ self.omega_real))
        if dw > 1e-12:
            raise ModelValidationError("omega-closed", f"d(omega) residual {dw:.3e}")
        wtop = self.volume_coefficient()
        if abs(wtop) < 1e-12:
            raise ModelValidationError("nondegenerate", "omega^n has zero top coefficient")

    def volume_coefficient(self) -> float:
        """Coefficient of eps^1^...^eps^m in omega^n / n!."""
        w = self.omega_real
        acc = w
        for k in range(2, self.n + 1):
            acc = ext.wedge_apply(self.m, 2 * (k - 1), 2, acc, w)
        return float(np.real(acc[0])) / math.factorial(self.n)

    # -- complex frame ----------------------------------------------------------

    @property
    def frame_vectors(self) -> np.ndarray:
        """g-orthonormal adapted vector frame, columns (a_1, J a_1, ...)."""
        if "F" not in self._cache:
            self._cache["F"] = bg.adapted_frame(self.g, self.J)
        return self._cache["F"]

    @property
    def coframe(self) -> np.ndarray:
        if "C" not in self._cache:
            self._cache["C"] = bg.adapted_coframe(self.g, self.J)
        return self._cache["C"]

    @property
    def fmap(self) -> bg.ComplexFrameMap:
        if "fmap" not in self._cache:
            self._cache["fmap"] = bg.ComplexFrameMap(self.coframe)
        return self._cache["fmap"]

    @property
    def frame(self) -> HermitianFrame:
        """Hermitian frame of the adapted coframe (orthonormal, unit volume)."""
        if "frame" not in self._cache:
            self._cache["frame"] = HermitianFrame(self.n)
        return self._cache["frame"]

    def to_form(self, k: int, coeffs: np.ndarray) -> BigradedForm:
        """Real-coframe degree-k coefficients -> blockwise complex form."""
        return self.fmap.to_bigraded(k, coeffs)

    def from_form(self, a: BigradedForm) -> dict[int, np.ndarray]:
        return self.fmap.from_bigraded(a)

    # -- differential as a block operator ----------------------------------------

    def _complex_operator(self, mats: dict[int, np.ndarray], cut: float = 1e-14) -> Operator:
        """Real degree-(+1) matrices -> bidegree-block Operator via the coframe."""
        blocks = {}
        for k in range(self.m):
            D = mats.get(k)
            if D is None or not D.size or k + 1 > self.m:
                continue
            Dc = self.fmap._fwd(k + 1) @ D.astype(complex) @ self.fmap._bwd(k)
            for src, spos in bg._degree_block_layout(self.n, k):
                for dst, dpos in bg._degree_block_layout(self.n, k + 1):
                    sub = Dc[np.ix_(list(dpos), list(spos))]
                    if np.max(np.abs(sub)) > cut:
                        blocks[(src, dst)] = sub
        return Operator(self.n, blocks)

    def split_differential(self) -> dict[str, Operator]:
        """The four bidegree components of d: mu, del, delbar, mubar.

        Their sum reproduces d exactly; any block of the complexified d
        falling outside the four shifts is a consistency failure, not a
        rounding artifact, and raises.
        """
        if "split" not in self._cache:
            full = self._complex_operator(self.d_real(), cut=0.0)
            parts = {name: {} for name in SHIFT_NAMES}
            for (src, dst), M in full.blocks.items():
                shift = (dst[0] - src[0], dst[1] - src[1])
                name = next((nm for nm, sh in SHIFT_NAMES.items() if sh == shift), None)
                if name is None:
                    if np.max(np.abs(M)) > 1e-12:
                        raise ConsistencyError(
                            f"d has a bidegree component with shift {shift}")
                    continue
                if np.max(np.abs(M)) > 1e-14:
                    parts[name][(src, dst)] = M
            self._cache["split"] = {nm: Operator(self.n, blk) for nm, blk in parts.items()}
        return self._cache["split"]

    def d_operator(self) -> Operator:
        if "d_op" not in self._cache:
            s = self.split_differential()
            self._cache["d_op"] = s["mu"] + s["del"] + s["delbar"] + s["mubar"]
        return self._cache["d_op"]

    # -- Nijenhuis ---------------------------------------------------------------

    def nijenhuis_tensor(self) -> tuple[np.ndarray, float]:
        """(N, sup): N[i,j,:] = N(e_i,e_j); sup = frame norm of mu + mubar.

        N(X,Y) = [X,Y] + J[X,JY] + J[JX,Y] - [JX,JY].
        """
        if "N" not in self._cache:
            c = self.brackets
            J = self.J
            t1 = c
            t2 = np.einsum("ilk,lj->ijk", c, J)         # [e_i, J e_j]
            t3 = np.einsum("ljk,li->ijk", c, J)         # [J e_i, e_j]
            t4 = np.einsum("lmk,li,mj->ijk", c, J, J)   # [J e_i, J e_j]
            self._cache["N"] = t1 + np.einsum("kl,ijl->ijk", J, t2 + t3) - t4
        if "sup_nj" not in self._cache:
            s = self.split_differential()
            self._cache["sup_nj"] = (s["mu"] + s["mubar"]).norm(self.frame)
        return self._cache["N"], self._cache["sup_nj"]

    def nijenhuis_operator(self) -> Operator:
        """-(1/4) of the derivation dual of N, as a bidegree-block Operator.

        The dual assigns to eps^k the 2-form with values N^k_ij and extends as
        a degree-(+1) derivation killing functions; this is the zeroth-order
        operator that the mu + mubar part of d must reproduce.
        """
        if "N_op" not in self._cache:
            N, _ = self.nijenhuis_tensor()
            m = self.m
            images = np.zeros((m, ext.dim(m, 2)))
            for pos, (i, j) in enumerate(ext.words(m, 2)):
                images[:, pos] = N[i, j, :]
            mats = ext.derivation_matrices(m, images)
            self._cache["N_op"] = (-0.25) * self._complex_operator(mats)
        return self._cache["N_op"]

    # -- connection and curvature -------------------------------------------------

    def levi_civita(self) -> np.ndarray:
        """Gamma[i,j,:] = coordinates of nabla_{e_i} e_j (Koszul formula)."""
        if "gamma" not in self._cache:
            c, g = self.brackets, self.g
            # 2 g(nabla_i e_j, e_l) = g([i,j],l) - g([j,l],i) + g([l,i],j)
            rhs = (np.einsum("ijk,kl->ijl", c, g)
                   - np.einsum("jlk,ki->ijl", c, g)
                   + np.einsum("lik,kj->ijl", c, g))
            self._cache["gamma"] = 0.5 * np.einsum("lm,ijl->ijm",
                                                   np.linalg.inv(g), rhs)
        return self._cache["gamma"]

    def orthonormalized(self) -> "LieModel":
        """Equivalent model expressed in the adapted g-orthonormal frame."""
        if np.allclose(self.g, np.eye(self.m), atol=1e-14):
            return self
        if "ortho_model" not in self._cache:
            B = self.frame_vectors
            Binv = np.linalg.inv(B)
            # chat[a,b,:] = coordinates of [F_a, F_b] in the F basis
            chat = np.einsum("ia,jb,ijk,lk->abl", B, B, self.brackets, Binv,
                             optimize=True)
            m = self.m
            images = np.zeros((m, ext.dim(m, 2)))
            for pos, (i, j) in enumerate(ext.words(m, 2)):
                images[:, pos] = -chat[i, j, :]
            Jhat = Binv @ self.J @ B
            self._cache["ortho_model"] = LieModel(
                self.name + "-orthonormal", images, np.eye(m), Jhat)
        return self._cache["ortho_model"]

    def curvature(self) -> "CurvatureData":
        if "curv" not in self._cache:
            self._cache["curv"] = _curvature_data(self)
        return self._cache["curv"]


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

@dataclass
class CurvatureData:
    """Connection, curvature tensor and derived evaluators for one model.

    Conventions: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
    nabla_[X,Y] Z, riemann[i,j,k,l] = g(R(e_i,e_j)e_k, e_l), and the pairing
    on 2-vectors is (R(x^y), z^w) = riemann contracted as (x,y,w,z), which
    makes (R(x^y), x^y) the unnormalized sectional curvature.
    """

    g: np.ndarray
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    residuals: dict[str, float]

    def sec(self, x: np.ndarray, y: np.ndarray) -> float:
        num = np.einsum("ijkl,i,j,k,l->", self.riemann, x, y, y, x)
        xx, yy, xy = x @ self.g @ x, y @ self.g @ y, x @ self.g @ y
        den = xx * yy - xy * xy
        if den < 1e-12:
            raise ArgumentError("degenerate 2-plane")
        return float(num / den)

    def pairing(self, X, Y, Z, W) -> complex:
        """(R(X^Y), Z^W), complex-bilinear in all four slots."""
        return complex(np.einsum("ijkl,i,j,k,l->", self.riemann.astype(complex),
                                 X, Y, W, Z))

    def complex_sec(self, X: np.ndarray, Y: np.ndarray) -> float:
        """K^C of the decomposable complex 2-vector X ^ Y."""
        gc = self.g.astype(complex)
        Xb, Yb = np.conj(X), np.conj(Y)
        den = ((X @ gc @ Xb) * (Y @ gc @ Yb) - (X @ gc @ Yb) * (Y @ gc @ Xb)).real
        if den < 1e-12:
            raise ArgumentError("degenerate complex 2-plane")
        num = self.pairing(X, Y, Xb, Yb).real
        return float(num / den)


def _curvature_data(model: LieModel) -> CurvatureData:
    m, g, c = model.m, model.g, model.brackets
    gamma = model.levi_civita()
    A = np.transpose(gamma, (0, 2, 1))        # A[i] @ v = nabla_{e_i} (v^j e_j)
    R = np.einsum("iab,jbc->ijac", A, A)
    R = R - np.transpose(R, (1, 0, 2, 3))
    R = R - np.einsum("ijk,kab->ijab", c, A)
    # R[i,j,a,k]: component a of R(e_i,e_j) e_k; lower with g on the output slot
    riem = np.einsum("ijak,al->ijkl", R, g)
    ginv = np.linalg.inv(g)
    ric = np.einsum("il,ijkl->jk", ginv, riem)
    tor = gamma - np.transpose(gamma, (1, 0, 2)) - c
    mc = (np.einsum("ijl,lk->ijk", gamma, g) + np.einsum("ikl,lj->ijk", gamma, g))
    residuals = {
        "torsion": float(np.max(np.abs(tor))),
        "metric_compat": float(np.max(np.abs(mc))),
        "antisym_12": float(np.max(np.abs(riem + np.transpose(riem, (1, 0, 2, 3))))),
        "antisym_34": float(np.max(np.abs(riem + np.transpose(riem, (0, 1, 3, 2))))),
        "pair_symmetry": float(np.max(np.abs(riem - np.transpose(riem, (2, 3, 0, 1))))),
        "bianchi_first": float(np.max(np.abs(
            riem + np.transpose(riem, (1, 2, 0, 3)) + np.transpose(riem, (2, 0, 1, 3))))),
    }
    return CurvatureData(g=g, gamma=gamma, riemann=riem, ricci=ric,
                         residuals=residuals)


def curvature_report(model: LieModel, samples: int = 200, seed: int = 0) -> dict:
    """Curvature survey: sampled sectional ranges, complex sectional ranges,
    pinching data and the split of a real-vector complex plane into two real
    sectional terms."""
    cd = model.curvature()
    m = model.m
    rng = np.random.default_rng(seed)

    secs = []
    for i in range(m):
        for j in range(i + 1, m):
            x, y = np.zeros(m), np.zeros(m)
            x[i], y[j] = 1.0, 1.0
            secs.append(cd.sec(x, y))
    drawn = 0
    while drawn < samples:
        x, y = rng.normal(size=m), rng.normal(size=m)
        try:
            secs.append(cd.sec(x, y))
        except ArgumentError:
            continue
        drawn += 1
    secs = np.array(secs)

    kcs = []
    drawn = 0
    while drawn < samples:
        X = rng.normal(size=m) + 1j * rng.normal(size=m)
        Y = rng.normal(size=m) + 1j * rng.normal(size=m)
        try:
            kcs.append(cd.complex_sec(X, Y))
        except ArgumentError:
            continue
        drawn += 1
    kcs = np.array(kcs)

    # a complex plane containing the real vector x splits as two real planes
    split_res = 0.0
    for _ in range(32):
        x = rng.normal(size=m)
        a = rng.normal(size=m)
        b = rng.normal(size=m)
        Z = a + 1j * b
        lhs = cd.pairing(x.astype(complex), Z, np.conj(x.astype(complex)), np.conj(Z))
        rhs = cd.pairing(x, a, x, a) + cd.pairing(x, b, x, b)
        split_res = max(split_res, abs(lhs - rhs))

    sec_min, sec_max = float(secs.min()), float(secs.max())
    report = {
        "model": model.name,
        "sec_min": sec_min,
        "sec_max": sec_max,
        "complex_sec_min": float(kcs.min()),
        "complex_sec_max": float(kcs.max()),
        "real_plane_split_residual": float(split_res),
        "residuals": dict(cd.residuals),
    }
    if sec_max < 0:
        report["pinching"] = {"K": -sec_max, "delta": sec_min / sec_max}
    else:
        report["pinching"] = None
    return report


def nabla_j_identity_check(model: LieModel) -> dict:
    """Couplings between nabla J, the Nijenhuis tensor and curvature.

    Computes |nabla J|^2 and (1/4)|N|^2 by independent contractions, the
    curvature sum -8 sum_{i != j} (R(Z_i ^ Z_j), conj) over a unitary (1,0)
    vector frame, the pointwise coupling g(N(X,Y), JZ) = 2 g((nabla_Z J)Y, X)
    over all basis triples, and the pinched-curvature bound
    |nabla J|^2 <= 10 n^2 delta K when the sampled sectional range is
    negative (vacuous otherwise).
    """
    mo = model.orthonormalized()
    m, n = mo.m, mo.n
    gamma = mo.levi_civita()
    J = mo.J
    N, _ = mo.nijenhuis_tensor()
    cd = mo.curvature()

    # (nabla_{e_i} J) e_j = nabla_i (J e_j) - J nabla_i e_j
    nabJ = np.einsum("kj,ikl->ijl", J, gamma) - np.einsum("lk,ijk->ijl", J, gamma)
    nabJ2 = float(np.sum(nabJ * nabJ))
    N2 = float(np.sum(N * N))

    # coupling residual over all basis triples (orthonormal frame)
    lhs = np.einsum("ijl,lk->ijk", N, J)          # g(N(e_i,e_j), J e_k)
    rhs = 2.0 * np.transpose(nabJ, (2, 1, 0))     # 2 g((nabla_{e_k} J) e_j, e_i)
    coupling = float(np.max(np.abs(lhs - rhs)))

    # curvature sum over the unitary (1,0) frame Z_k = (a_k - i J a_k)/sqrt(2),
    # ordered pairs (the pairing is symmetric under swapping the pair)
    F = mo.frame_vectors
    Z = (F[:, 0::2] - 1j * F[:, 1::2]) / np.sqrt(2.0)
    csum = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                csum += cd.pairing(Z[:, i], Z[:, j],
                                   np.conj(Z[:, i]), np.conj(Z[:, j])).real
    csum *= -8.0

    report = {
        "model": model.name,
        "nabla_j_sq": nabJ2,
        "quarter_nijenhuis_sq": 0.25 * N2,
        "curvature_sum": csum,
        "residual_nabla_vs_nijenhuis": abs(nabJ2 - 0.25 * N2),
        "residual_nabla_vs_curvature_sum": abs(nabJ2 - csum),
        "coupling_residual": coupling,
    }
    curv = curvature_report(model, samples=100, seed=1)
    if curv["pinching"] is not None:
        K, delta = curv["pinching"]["K"], curv["pinching"]["delta"]
        bound = 10.0 * n * n * delta * K
        report["pinching_bound"] = {"bound": bound, "holds": bool(nabJ2 <= bound),
                                    "K": K, "delta": delta}
    else:
        report["pinching_bound"] = None
    return report


def weitzenbock_residual(model: LieModel) -> dict:
    """Delta_d = nabla*nabla + Ric on invariant 1-forms (orthonormal frame).

    Returns the three matrices and the max-entry residual of the identity.
    """
    mo = model.orthonormalized()
    m = mo.m
    d = mo.d_real()
    D1 = d[1]
    lap = D1.T @ D1                      # d Lambda^0 -> Lambda^1 vanishes here
    gamma = mo.levi_civita()
    grad = -np.transpose(gamma, (0, 2, 1)).reshape(m * m, m)
    rough = grad.T @ grad
    ric = mo.curvature().ricci
    total = rough + ric
    return {
        "model": model.name,
        "laplacian": lap,
        "rough_laplacian": rough,
        "ricci": ric,
        "residual": float(np.max(np.abs(lap - total))),
    }


# ---------------------------------------------------------------------------
# catalog and loading
# ---------------------------------------------------------------------------

def _images_from_entries(m: int, entries) -> np.ndarray:
    images = np.zeros((m, ext.dim(m, 2)))
    widx = ext.word_index(m, 2)
    for row in entries:
        if len(row) != 4:
            raise ModelValidationError("format", f"dcoeffs row {row!r} needs 4 entries")
        k, i, j, coeff = row
        if any(float(x) != int(x) for x in (k, i, j)):
            raise ModelValidationError("format", f"non-integer index in {row!r}")
        ki, ii, jj = int(k), int(i), int(j)
        if not (1 <= ki <= m and 1 <= ii < jj <= m):
            raise ModelValidationError(
                "format", f"dcoeffs row {row!r} out of range for dim {m} (need i<j)")
        images[ki - 1, widx[(ii - 1, jj - 1)]] += float(coeff)
    return images


def _catalog_builders() -> dict:
    def torus4():
        J = np.zeros((4, 4))
        J[1, 0], J[0, 1], J[3, 2], J[2, 3] = 1, -1, 1, -1
        return LieModel("torus4", np.zeros((4, ext.dim(4, 2))), np.eye(4), J)

    def kodaira_thurston():
        J = np.zeros((4, 4))
        J[3, 0], J[0, 3], J[2, 1], J[1, 2] = 1, -1, 1, -1
        images = _images_from_entries(4, [[4, 1, 2, 1.0]])
        return LieModel("kodaira-thurston", images, np.eye(4), J)

    def nilpotent6():
        J = np.zeros((6, 6))
        J[5, 0], J[0, 5] = 1, -1
        J[4, 1], J[1, 4] = 1, -1
        J[3, 2], J[2, 3] = 1, -1
        images = _images_from_entries(6, [
            [5, 1, 3, 1.0], [5, 2, 4, -1.0],
            [6, 1, 4, 1.0], [6, 2, 3, 1.0],
        ])
        return LieModel("nilpotent6", images, np.eye(6), J)

    return {"torus4": torus4, "kodaira-thurston": kodaira_thurston,
            "nilpotent6": nilpotent6}


CATALOG = tuple(sorted(_catalog_builders()))


def _reject_unknown(table: dict, allowed: set, where: str):
    extra = set(table) - allowed
    if extra:
        raise ModelValidationError(
            "format", f"unknown key(s) {sorted(extra)} in {where}")


def _matrix_field(value, m: int, what: str) -> np.ndarray:
    if isinstance(value, str):
        if value == "identity":
            return np.eye(m)
        raise ModelValidationError("format", f"{what} must be 'identity' or a matrix")
    arr = np.asarray(value, dtype=float)
    if arr.shape == (m * m,):
        arr = arr.reshape(m, m)
    if arr.shape != (m, m):
        raise ModelValidationError("format", f"{what} must be {m}x{m}, got {arr.shape}")
    return arr


def model_from_dict(data: dict) -> LieModel:
    _reject_unknown(data, {"model", "structure", "metric", "acs"}, "top level")
    for section in ("model", "structure", "metric", "acs"):
        if section not in data:
            raise ModelValidationError("format", f"missing [{section}] section")
    _reject_unknown(data["model"], {"name", "dim"}, "[model]")
    _reject_unknown(data["structure"], {"dcoeffs"}, "[structure]")
    _reject_unknown(data["metric"], {"g"}, "[metric]")
    _reject_unknown(data["acs"], {"J"}, "[acs]")
    try:
        name = str(data["model"]["name"])
        m = int(data["model"]["dim"])
    except KeyError as e:
        raise ModelValidationError("format", f"missing key {e} in [model]")
    if m < 2 or m % 2:
        raise ModelValidationError("format", f"dim must be even and >= 2, got {m}")
    images = _images_from_entries(m, data["structure"].get("dcoeffs", []))
    g = _matrix_field(data["metric"].get("g", "identity"), m, "metric g")
    if "J" not in data["acs"]:
        raise ModelValidationError("format", "missing J in [acs]")
    J = _matrix_field(data["acs"]["J"], m, "acs J")
    return LieModel(name, images, g, J)


def load_model(source) -> LieModel:
    """Catalog name, TOML path, or parsed dict -> validated LieModel."""
    if isinstance(source, dict):
        return model_from_dict(source)
    builders = _catalog_builders()
    if isinstance(source, str) and source in builders:
        return builders[source]()
    path = Path(source)
    if not path.exists():
        raise ModelValidationError(
            "format", f"{source!r} is neither a catalog model {CATALOG} nor a file")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ModelValidationError("format", f"TOML parse error: {e}")
    return model_from_dict(data)
