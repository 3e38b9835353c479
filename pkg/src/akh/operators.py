"""Block-graded linear operators on bigraded forms.

An :class:`Operator` is a sparse collection of dense matrix blocks keyed by
``(source bidegree, destination bidegree)``.  Composition, linear combination
and metric adjoints stay inside this representation; norms, kernels and
least-squares solves go through an assembled matrix in coordinates that are
orthonormal for the frame inner product, so every spectral quantity reported
here is frame-true rather than coefficient-relative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bigraded as bg
from .bigraded import BigradedForm, Block, HermitianFrame
from .errors import ArgumentError, DimensionMismatchError, SolvabilityError


def all_blocks(n: int) -> list[Block]:
    return [(p, q) for p in range(n + 1) for q in range(n + 1)]


def degree_blocks(n: int, k: int) -> list[Block]:
    return [(p, k - p) for p in range(max(0, k - n), min(n, k) + 1)]


def _ortho_factor(f: HermitianFrame, p: int, q: int) -> np.ndarray:
    """Cholesky factor L with ||u||_f = ||L^H u||_2 on block (p,q)."""
    key = ("ortho", p, q)
    if key not in f._cache:
        GH = f.gram_second_slot(p, q) * f.vol_scale
        f._cache[key] = np.linalg.cholesky(GH)
    return f._cache[key]


def _ortho_inverse(f: HermitianFrame, p: int, q: int) -> np.ndarray:
    key = ("ortho_inv", p, q)
    if key not in f._cache:
        f._cache[key] = np.linalg.inv(_ortho_factor(f, p, q))
    return f._cache[key]


class Operator:
    """Linear map on bigraded forms stored as matrix blocks.

    ``blocks[(src, dst)]`` has shape ``(dim dst, dim src)``; absent blocks act
    as zero.  Out-of-range destinations must simply be omitted.
    """

    __slots__ = ("n", "blocks")

    def __init__(self, n: int, blocks: dict[tuple[Block, Block], np.ndarray] | None = None):
        self.n = int(n)
        self.blocks: dict[tuple[Block, Block], np.ndarray] = {}
        for (src, dst), M in (blocks or {}).items():
            M = np.asarray(M, dtype=complex)
            want = (bg.block_dim(n, *dst), bg.block_dim(n, *src))
            if M.shape != want:
                raise DimensionMismatchError(
                    f"block {src}->{dst} expects shape {want}, got {M.shape}")
            self.blocks[(src, dst)] = M

    # -- factories -----------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Operator":
        return cls(n)

    @classmethod
    def identity(cls, n: int) -> "Operator":
        return cls(n, {(b, b): np.eye(bg.block_dim(n, *b), dtype=complex)
                       for b in all_blocks(n)})

    @classmethod
    def block_scalars(cls, n: int, value) -> "Operator":
        """Diagonal operator acting as the scalar ``value(p, q)`` per block."""
        return cls(n, {(b, b): complex(value(*b)) * np.eye(bg.block_dim(n, *b), dtype=complex)
                       for b in all_blocks(n)})

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int | None:
        """Total degree shift when it is uniform across blocks, else None."""
        shifts = {(d[0] + d[1]) - (s[0] + s[1]) for s, d in self.blocks}
        return shifts.pop() if len(shifts) == 1 else (0 if not shifts else None)

    @property
    def shift(self) -> tuple[int, int] | None:
        """Bidegree shift when uniform across blocks, else None."""
        shifts = {(d[0] - s[0], d[1] - s[1]) for s, d in self.blocks}
        return shifts.pop() if len(shifts) == 1 else ((0, 0) if not shifts else None)

    def restrict_source_degree(self, k: int) -> "Operator":
        return Operator(self.n, {(s, d): M for (s, d), M in self.blocks.items()
                                 if s[0] + s[1] == k})

    def drop_small(self, tol: float = 0.0) -> "Operator":
        return Operator(self.n, {k: M for k, M in self.blocks.items()
                                 if np.max(np.abs(M)) > tol})

    def max_entry(self) -> float:
        if not self.blocks:
            return 0.0
        return max(float(np.max(np.abs(M))) for M in self.blocks.values())

    # -- algebra ---------------------------------------------------------------

    def _check(self, other: "Operator"):
        if self.n != other.n:
            raise DimensionMismatchError(f"operators over n={self.n} and n={other.n}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        out = {k: M.copy() for k, M in self.blocks.items()}
        for k, M in other.blocks.items():
            out[k] = out[k] + M if k in out else M
        return Operator(self.n, out)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "Operator":
        return Operator(self.n, {k: c * M for k, M in self.blocks.items()})

    def __neg__(self) -> "Operator":
        return (-1.0) * self

    def __matmul__(self, other: "Operator") -> "Operator":
        """Composition: (A @ B) x = A(B x)."""
        self._check(other)
        out: dict[tuple[Block, Block], np.ndarray] = {}
        for (sb, db), MB in other.blocks.items():
            for (sa, da), MA in self.blocks.items():
                if sa != db:
                    continue
                key = (sb, da)
                acc = MA @ MB
                out[key] = out[key] + acc if key in out else acc
        return Operator(self.n, out)

    def apply(self, a: BigradedForm) -> BigradedForm:
        if a.n != self.n:
            raise DimensionMismatchError(f"form over n={a.n}, operator over n={self.n}")
        out: dict[Block, np.ndarray] = {}
        for (src, dst), M in self.blocks.items():
            v = a.blocks.get(src)
            if v is None:
                continue
            w = M @ v
            out[dst] = out[dst] + w if dst in out else w
        return BigradedForm(self.n, out)

    __call__ = apply

    # -- metric-dependent pieces ----------------------------------------------

    def adjoint(self, f: HermitianFrame) -> "Operator":
        """Adjoint for the frame inner product: <A u, v> = <u, A* v>."""
        out = {}
        for (src, dst), M in self.blocks.items():
            GHs = f.gram_second_slot(*src)
            GHd = f.gram_second_slot(*dst)
            out[(dst, src)] = np.linalg.solve(GHs, M.conj().T @ GHd)
        return Operator(self.n, out)

    def assembled(self, f: HermitianFrame | None = None,
                  src_blocks: list[Block] | None = None,
                  dst_blocks: list[Block] | None = None):
        """Dense matrix over stacked blocks, plus the two block layouts.

        With a frame, the matrix is expressed in orthonormal coordinates so
        its singular values are the frame-true ones.  Layouts are lists of
        ``(block, offset, dim)``.
        """
        order = lambda b: (b[0] + b[1], b[0])
        if src_blocks is None:
            src_blocks = sorted({s for s, _ in self.blocks}, key=order)
        if dst_blocks is None:
            dst_blocks = sorted({d for s, d in self.blocks if s in set(src_blocks)},
                                key=order)
        src_layout, pos = [], 0
        for b in src_blocks:
            d = bg.block_dim(self.n, *b)
            src_layout.append((b, pos, d))
            pos += d
        dst_layout, dpos = [], 0
        for b in dst_blocks:
            d = bg.block_dim(self.n, *b)
            dst_layout.append((b, dpos, d))
            dpos += d
        S = np.zeros((dpos, pos), dtype=complex)
        src_at = {b: (o, d) for b, o, d in src_layout}
        dst_at = {b: (o, d) for b, o, d in dst_layout}
        for (src, dst), M in self.blocks.items():
            if src not in src_at or dst not in dst_at:
                continue
            so, sd = src_at[src]
            do, dd = dst_at[dst]
            if f is not None:
                M = _ortho_factor(f, *dst).conj().T @ M @ _ortho_inverse(f, *src).conj().T
            S[do:do + dd, so:so + sd] += M
        return S, src_layout, dst_layout

    def norm(self, f: HermitianFrame) -> float:
        """Operator norm with respect to the frame inner product."""
        if not self.blocks:
            return 0.0
        S, _, _ = self.assembled(f)
        return float(np.linalg.norm(S, 2)) if S.size else 0.0


def operator_residual(lhs: Operator, rhs: Operator, f: HermitianFrame) -> float:
    """Frame operator norm of (lhs - rhs), relative past unit scale."""
    scale = max(1.0, lhs.norm(f), rhs.norm(f))
    return (lhs - rhs).norm(f) / scale


def conjugated_operator(T: Operator) -> Operator:
    """C T C with C the form conjugation; swaps holomorphic/antiholomorphic roles."""
    out: dict[tuple[Block, Block], np.ndarray] = {}
    for ((p, q), (r, s)), M in T.blocks.items():
        Cs = bg.conj_block_matrix(T.n, q, p)
        Cd = bg.conj_block_matrix(T.n, r, s)
        key = ((q, p), (s, r))
        acc = Cd @ np.conj(M) @ Cs
        out[key] = out[key] + acc if key in out else acc
    return Operator(T.n, out)


def graded_commutator(A: Operator, B: Operator) -> Operator:
    """[A, B] = A B - (-1)^{|A||B|} B A with |.| the total degree shift."""
    da, db = A.degree, B.degree
    if da is None or db is None:
        raise ArgumentError("graded commutator needs uniform-degree operators")
    sign = (-1.0) ** (da * db)
    return A @ B - sign * (B @ A)


def anticommutator(A: Operator, B: Operator) -> Operator:
    return A @ B + B @ A


def laplacian_of(T: Operator, f: HermitianFrame) -> Operator:
    Ts = T.adjoint(f)
    return T @ Ts + Ts @ T


# ---------------------------------------------------------------------------
# fixed operators of a frame
# ---------------------------------------------------------------------------

def identity_operator(n: int) -> Operator:
    return Operator.identity(n)


def J_operator(n: int) -> Operator:
    return Operator.block_scalars(n, lambda p, q: (1j) ** ((q - p) % 4))


def J_inverse_operator(n: int) -> Operator:
    return Operator.block_scalars(n, lambda p, q: (1j) ** ((p - q) % 4))


def wedge_operator(a: BigradedForm, side: str = "left") -> Operator:
    """Wedge by the fixed form ``a`` as an Operator (left or right factor)."""
    if side not in ("left", "right"):
        raise ArgumentError(f"side must be 'left' or 'right', got {side!r}")
    n = a.n
    out: dict[tuple[Block, Block], np.ndarray] = {}
    for (r, s), u in a.blocks.items():
        for src in all_blocks(n):
            p, q = src
            dst = (p + r, q + s)
            if dst[0] > n or dst[1] > n:
                continue
            M = np.zeros((bg.block_dim(n, *dst), bg.block_dim(n, *src)), dtype=complex)
            if side == "left":
                table = bg._bigraded_wedge_table(n, (r, s), src)
                for ia, ib, iout, sign in table:
                    M[iout, ib] += sign * u[ia]
            else:
                table = bg._bigraded_wedge_table(n, src, (r, s))
                for ia, ib, iout, sign in table:
                    M[iout, ia] += sign * u[ib]
            key = (src, dst)
            out[key] = out[key] + M if key in out else M
    return Operator(n, out).drop_small(0.0)

def lefschetz_operator(f: HermitianFrame) -> Operator:
    return wedge_operator(f.omega)


def lambda_operator(f: HermitianFrame) -> Operator:
    n = f.n
    out = {}
    for (p, q) in all_blocks(n):
        if p < 1 or q < 1:
            continue
        out[((p, q), (p - 1, q - 1))] = f.lambda_matrix(p, q)
    return Operator(n, out)


def star_operator(f: HermitianFrame) -> Operator:
    n = f.n
    return Operator(n, {((p, q), (n - q, n - p)): f.star_matrix(p, q)
                        for (p, q) in all_blocks(n)})


def d_lambda_operator(d: Operator, f: HermitianFrame) -> Operator:
    """Degree-lowering partner of d: J star d star J^{-1}.

    Coincides with the graded commutator of the omega-contraction with d,
    which the duality verification suite checks on every model.
    """
    n = f.n
    st = star_operator(f)
    return J_operator(n) @ st @ d @ st @ J_inverse_operator(n)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@dataclass
class HarmonicSpace:
    """Joint kernel of a family of operators on a degree or single block.

    ``basis`` is orthonormal for the frame inner product.  ``gap_ratio`` is
    the smallest rejected singular value over the detection threshold; when
    it drops below 10 the result is flagged ``ill_separated`` but still
    returned.
    """

    n: int
    domain: tuple[Block, ...]
    dim: int
    basis: list[BigradedForm]
    singular_values: np.ndarray
    threshold: float
    gap_ratio: float
    ill_separated: bool


def joint_kernel(ops: list[Operator], f: HermitianFrame,
                 degree: int | None = None, block: Block | None = None,
                 tol_rel: float = 1e-9) -> HarmonicSpace:
    """Orthonormal basis of the common kernel restricted to a degree or block."""
    if (degree is None) == (block is None):
        raise ArgumentError("pass exactly one of degree= or block=")
    if not ops:
        raise ArgumentError("need at least one operator")
    n = ops[0].n
    domain = degree_blocks(n, degree) if block is None else [block]
    dom_dim = sum(bg.block_dim(n, *b) for b in domain)

    rows = []
    for T in ops:
        sub = Operator(n, {(s, d): M for (s, d), M in T.blocks.items() if s in set(domain)})
        if not sub.blocks:
            continue
        S, _, _ = sub.assembled(f, src_blocks=domain)
        rows.append(S)
    if rows:
        S = np.vstack(rows)
        U, sv, Vh = np.linalg.svd(S)
        smax = sv[0] if sv.size else 0.0
    else:
        S = np.zeros((0, dom_dim))
        sv = np.zeros(0)
        Vh = np.eye(dom_dim, dtype=complex)
        smax = 0.0

    threshold = tol_rel * smax
    if smax == 0.0:
        kernel_cols = np.eye(dom_dim, dtype=complex)
        gap = float("inf")
    else:
        # Vh is always dom_dim x dom_dim; singular values past sv.size are zero
        sv_full = np.zeros(dom_dim)
        sv_full[:min(sv.size, dom_dim)] = sv[:dom_dim]
        mask = sv_full <= threshold
        kernel_cols = Vh.conj().T[:, mask]
        kept = sv_full[~mask]
        gap = float(kept.min() / threshold) if kept.size else float("inf")

    basis = []
    for j in range(kernel_cols.shape[1]):
        blocks, pos = {}, 0
        for b in domain:
            d = bg.block_dim(n, *b)
            x = kernel_cols[pos:pos + d, j]
            pos += d
            if np.any(x):
                blocks[b] = _ortho_inverse(f, *b).conj().T @ x
        basis.append(BigradedForm(n, blocks))
    return HarmonicSpace(
        n=n, domain=tuple(domain), dim=len(basis), basis=basis,
        singular_values=sv, threshold=float(threshold),
        gap_ratio=gap, ill_separated=bool(np.isfinite(gap) and gap < 10.0))


def harmonic_space(T: Operator, f: HermitianFrame, degree: int,
                   tol_rel: float = 1e-9) -> HarmonicSpace:
    """Kernel of the Laplacian of T on a degree, as ker T intersect ker T*."""
    return joint_kernel([T, T.adjoint(f)], f, degree=degree, tol_rel=tol_rel)


# ---------------------------------------------------------------------------
# solving T x = target
# ---------------------------------------------------------------------------

def solve_in_image(T: Operator, target: BigradedForm, f: HermitianFrame,
                   tol: float = 1e-8) -> tuple[BigradedForm, float]:
    """Minimum-norm solution of T x = target, or SolvabilityError.

    The defect reported (and compared against ``tol``) is the frame norm of
    T x - target relative to the frame norm of the target.
    """
    n = T.n
    tdegs = target.degrees()
    src = sorted({s for (s, d) in T.blocks if d[0] + d[1] in tdegs},
                 key=lambda b: (b[0] + b[1], b[0]))
    if not src:
        raise SolvabilityError("operator has no blocks mapping into the target degree",
                               defect=1.0)
    dst = sorted({d for (s, d) in T.blocks if s in set(src)} |
                 {b for b, v in target.blocks.items() if np.any(v)},
                 key=lambda b: (b[0] + b[1], b[0]))
    S, src_layout, dst_layout = T.assembled(f, src_blocks=src, dst_blocks=dst)
    beta = np.zeros(S.shape[0], dtype=complex)
    for b, off, d in dst_layout:
        beta[off:off + d] = _ortho_factor(f, *b).conj().T @ target.block(*b)
    x, *_ = np.linalg.lstsq(S, beta, rcond=None)
    bnorm = np.linalg.norm(beta)
    defect = float(np.linalg.norm(S @ x - beta) / bnorm) if bnorm > 0 else 0.0
    if defect > tol:
        raise SolvabilityError("target is not in the image of the operator", defect=defect)
    blocks = {}
    for b, off, d in src_layout:
        u = _ortho_inverse(f, *b).conj().T @ x[off:off + d]
        if np.any(u):
            blocks[b] = u
    return BigradedForm(n, blocks), defect
