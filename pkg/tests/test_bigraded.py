import numpy as np
import pytest

from akh import bigraded as bg
from akh import exterior as ext
from akh.errors import ArgumentError, ConsistencyError, DimensionMismatchError, FrameError


def rand_form(n, p, q, rng, real=False):
    d = bg.block_dim(n, p, q)
    v = rng.normal(size=d) + (0 if real else 1j * rng.normal(size=d))
    return bg.BigradedForm(n, {(p, q): v})


def rand_mixed(n, k, rng):
    out = bg.BigradedForm.zero(n)
    for p in range(max(0, k - n), min(n, k) + 1):
        out += rand_form(n, p, k - p, rng)
    return out


# ---------------------------------------------------------------- basis

def test_basis_enumerate_order_and_labels():
    basis = bg.basis_enumerate(2, 1, 1)
    assert basis == [((1,), (1,)), ((1,), (2,)), ((2,), (1,)), ((2,), (2,))]
    assert bg.block_dim(3, 2, 1) == 9
    with pytest.raises(ext.DegreeRangeError):
        bg.basis_enumerate(2, 3, 0)
    with pytest.raises(ext.DegreeRangeError):
        bg.basis_enumerate(2, -1, 1)


# ---------------------------------------------------------------- wedge / J

def test_wedge_signs_and_type_crossing():
    n = 2
    dz1 = bg.BigradedForm(n, {(1, 0): [1, 0]})
    dz2 = bg.BigradedForm(n, {(1, 0): [0, 1]})
    dzb1 = bg.BigradedForm(n, {(0, 1): [1, 0]})
    w = bg.wedge(dz1, dz2)
    assert np.allclose(w.block(2, 0), [1.0])
    assert np.allclose(bg.wedge(dz2, dz1).block(2, 0), [-1.0])
    # crossing an antiholomorphic factor past a holomorphic one flips sign
    a = bg.wedge(dzb1, dz1)
    b = bg.wedge(dz1, dzb1)
    assert np.allclose(a.block(1, 1), -b.block(1, 1))
    assert np.allclose(bg.wedge(dz1, dz1).block(2, 0), [0.0])


def test_wedge_associativity_random():
    rng = np.random.default_rng(0)
    n = 3
    a, b, c = rand_form(n, 1, 0, rng), rand_form(n, 0, 1, rng), rand_form(n, 1, 1, rng)
    lhs = bg.wedge(bg.wedge(a, b), c)
    rhs = bg.wedge(a, bg.wedge(b, c))
    assert (lhs - rhs).norm_sup() < 1e-13


def test_apply_J_block_scalars():
    n = 2
    f11 = rand_form(n, 1, 1, np.random.default_rng(1))
    f01 = rand_form(n, 0, 1, np.random.default_rng(2))
    f20 = rand_form(n, 2, 0, np.random.default_rng(3))
    assert (bg.apply_J(f11) - f11).norm_sup() < 1e-15
    assert (bg.apply_J(f01) - 1j * f01).norm_sup() < 1e-15
    assert (bg.apply_J(f20) - (-1.0) * f20).norm_sup() < 1e-15
    # J^2 = (-1)^k and J_inverse undoes J
    for form, k in [(f11, 2), (f01, 1), (f20, 2)]:
        twice = bg.apply_J(bg.apply_J(form))
        assert (twice - (-1.0) ** k * form).norm_sup() < 1e-15
        assert (bg.apply_J_inverse(bg.apply_J(form)) - form).norm_sup() < 1e-15


def test_conj_form_involution_and_reality():
    rng = np.random.default_rng(4)
    a = rand_form(3, 2, 1, rng)
    assert (bg.conj_form(bg.conj_form(a)) - a).norm_sup() < 1e-15
    # a + conj(a) is fixed by conjugation
    r = a + bg.conj_form(a)
    assert (bg.conj_form(r) - r).norm_sup() < 1e-15


# ---------------------------------------------------------------- frames

def test_frame_validation():
    with pytest.raises(FrameError):
        bg.HermitianFrame(2, np.array([[1, 1j], [1j, 1]]))  # not Hermitian
    with pytest.raises(FrameError):
        bg.HermitianFrame(2, np.array([[1, 0], [0, -1]]))   # not positive
    with pytest.raises(FrameError):
        bg.HermitianFrame(2, np.eye(3))
    f = bg.HermitianFrame(2)
    assert f.vol_scale == 1.0


def random_frame(n, rng):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return bg.HermitianFrame(n, A @ A.conj().T + n * np.eye(n))


def test_inner_product_orthonormal_cases():
    f = bg.HermitianFrame(2)
    e0 = bg.BigradedForm.basis_element(2, 1, 1, 0)   # dz1 ^ dzb1
    e1 = bg.BigradedForm.basis_element(2, 1, 1, 1)   # dz1 ^ dzb2
    assert bg.inner_product(e0, e0, f) == pytest.approx(1.0)
    assert bg.inner_product(e0, e1, f) == pytest.approx(0.0)
    # conjugate symmetry and positivity on random data
    rng = np.random.default_rng(5)
    a, b = rand_mixed(2, 2, rng), rand_mixed(2, 2, rng)
    assert bg.inner_product(a, b, f) == pytest.approx(np.conj(bg.inner_product(b, a, f)))
    assert bg.inner_product(a, a, f).real > 0


def test_inner_product_general_h_against_orthonormalization():
    # transform coefficients into an orthonormal coframe through the Cholesky
    # factor and compare with the determinant-Gram evaluation
    rng = np.random.default_rng(6)
    n = 2
    f = random_frame(n, rng)
    B = np.linalg.cholesky(f.h)
    M = B.T  # phi-coefficients -> orthonormal-coframe coefficients
    fI = bg.HermitianFrame(n)
    for (p, q) in [(1, 0), (1, 1), (2, 1)]:
        a, b = rand_form(n, p, q, rng), rand_form(n, p, q, rng)
        T = np.kron(ext.compound_apply(n, p, M), ext.compound_apply(n, q, np.conj(M)))
        a2 = bg.BigradedForm(n, {(p, q): T @ a.block(p, q)})
        b2 = bg.BigradedForm(n, {(p, q): T @ b.block(p, q)})
        assert bg.inner_product(a, b, f) == pytest.approx(bg.inner_product(a2, b2, fI))


def test_omega_and_volume_normalization():
    for n in (1, 2, 3):
        f = bg.HermitianFrame(n)
        w = f.omega
        assert bg.inner_product(w, w, f) == pytest.approx(n)
        dv = f.volume_form
        assert bg.inner_product(dv, dv, f) == pytest.approx(1.0)
        assert (bg.conj_form(w) - w).norm_sup() < 1e-14     # omega is real
        assert (bg.conj_form(dv) - dv).norm_sup() < 1e-14
    # general frame: volume form still unit, omega real
    rng = np.random.default_rng(7)
    f = random_frame(2, rng)
    assert bg.inner_product(f.volume_form, f.volume_form, f) == pytest.approx(1.0)
    assert (bg.conj_form(f.omega) - f.omega).norm_sup() < 1e-12


# ---------------------------------------------------------------- star

def test_star_unit_and_volume():
    for n in (1, 2, 3):
        f = bg.HermitianFrame(n)
        one = bg.BigradedForm(n, {(0, 0): [1.0]})
        assert (bg.hodge_star(one, f) - f.volume_form).norm_sup() < 1e-13
        assert (bg.hodge_star(f.volume_form, f) - one).norm_sup() < 1e-13


def test_star_hand_values():
    # n=1: star phi = -i phi; n=2: star phi1 = phi1 ^ phi2 ^ conj(phi2)
    f1 = bg.HermitianFrame(1)
    phi = bg.BigradedForm(1, {(1, 0): [1.0]})
    assert (bg.hodge_star(phi, f1) - (-1j) * phi).norm_sup() < 1e-14
    f2 = bg.HermitianFrame(2)
    phi1 = bg.BigradedForm(2, {(1, 0): [1, 0]})
    phi2 = bg.BigradedForm(2, {(1, 0): [0, 1]})
    phib2 = bg.BigradedForm(2, {(0, 1): [0, 1]})
    want = bg.wedge(phi1, bg.wedge(phi2, phib2))
    assert (bg.hodge_star(phi1, f2) - want).norm_sup() < 1e-14


def test_star_defining_pairing_and_involution():
    rng = np.random.default_rng(8)
    for frame in (bg.HermitianFrame(2), random_frame(2, rng)):
        n = 2
        dv = frame.volume_form.block(n, n)[0]
        for p in range(n + 1):
            for q in range(n + 1):
                c = rand_form(n, p, q, rng)
                sc = bg.hodge_star(c, frame)
                assert set(k for k, v in sc.blocks.items() if np.any(v)) <= {(n - q, n - p)}
                a = rand_form(n, q, p, rng)
                top = bg.wedge(a, sc).block(n, n)
                want = bg.inner_product(a, bg.conj_form(c), frame) * dv
                assert np.allclose(top[0] if top.size else 0.0, want, atol=1e-11)
                ss = bg.hodge_star(sc, frame)
                assert (ss - (-1.0) ** (p + q) * c).norm_sup() < 1e-11
                # isometry
                b = rand_form(n, p, q, rng)
                lhs = bg.inner_product(bg.hodge_star(b, frame), sc, frame)
                rhs = bg.inner_product(bg.conj_form(c), bg.conj_form(b), frame)
                assert np.allclose(lhs, rhs, atol=1e-11)


def test_star_matches_real_star_through_adapted_coframe():
    # real 4d Hodge star on an orthonormal oriented coframe, complexified,
    # must agree with the blockwise star after the change of basis
    m, n = 4, 2
    J = np.zeros((m, m))
    J[1, 0], J[0, 1], J[3, 2], J[2, 3] = 1, -1, 1, -1   # e1->e2, e3->e4
    C = bg.adapted_coframe(np.eye(m), J)
    fmap = bg.ComplexFrameMap(C)
    frame = bg.HermitianFrame(n)
    rng = np.random.default_rng(9)
    for k in range(m + 1):
        coeffs = rng.normal(size=ext.dim(m, k)) + 1j * rng.normal(size=ext.dim(m, k))
        # real star: e_w -> sign * e_complement
        star_real = np.zeros(ext.dim(m, m - k), dtype=complex)
        for i, w in enumerate(ext.words(m, k)):
            comp = tuple(sorted(set(range(m)) - set(w)))
            sign, _ = ext.merge_sign(w, comp)
            star_real[ext.word_index(m, m - k)[comp]] += sign * coeffs[i]
        got = bg.hodge_star(fmap.to_bigraded(k, coeffs), frame)
        want = fmap.to_bigraded(m - k, star_real)
        assert (got - want).norm_sup() < 1e-12


# ---------------------------------------------------------------- L, Lambda

def test_lefschetz_commutator_identity():
    # [Lambda, L] = (n - k) id, the normalization anchor for everything else
    rng = np.random.default_rng(10)
    for n in (1, 2, 3):
        for frame in (bg.HermitianFrame(n), random_frame(n, rng)):
            for k in range(2 * n + 1):
                a = rand_mixed(n, k, rng)
                lhs = bg.dual_lambda(bg.lefschetz_L(a, frame), frame) \
                    - bg.lefschetz_L(bg.dual_lambda(a, frame), frame)
                assert (lhs - float(n - k) * a).norm_sup() < 1e-12


def test_lambda_omega_equals_n():
    for n in (1, 2, 3):
        f = bg.HermitianFrame(n)
        lam = bg.dual_lambda(f.omega, f)
        assert np.allclose(lam.block(0, 0), [n])


def test_lambda_adjointness_and_star_route():
    rng = np.random.default_rng(11)
    for frame in (bg.HermitianFrame(2), random_frame(2, rng)):
        a = rand_mixed(2, 2, rng)
        b = rand_mixed(2, 4, rng)
        lhs = bg.inner_product(bg.lefschetz_L(a, frame), b, frame)
        rhs = bg.inner_product(a, bg.dual_lambda(b, frame), frame)
        assert np.allclose(lhs, rhs, atol=1e-11)
        for k in range(5):
            c = rand_mixed(2, k, rng)
            assert (bg.dual_lambda(c, frame) - bg.lambda_star_route(c, frame)).norm_sup() < 1e-10


# ---------------------------------------------------------------- primitive

def test_primitive_decompose_omega():
    f = bg.HermitianFrame(2)
    dec = bg.primitive_decompose(f.omega, f)
    assert set(dec.components) == {0, 1}
    assert np.allclose(dec.components[1].block(0, 0), [1.0])
    assert dec.components[0].norm_sup() < 1e-12
    assert (dec.reconstruct(f) - f.omega).norm_sup() < 1e-12


def test_primitive_decompose_random_blocks():
    rng = np.random.default_rng(12)
    for n, p, q in [(2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 1), (3, 2, 2)]:
        f = bg.HermitianFrame(n)
        a = rand_form(n, p, q, rng)
        dec = bg.primitive_decompose(a, f)
        assert (dec.reconstruct(f) - a).norm_sup() < 1e-10
        # components are primitive and mutually orthogonal after L^j
        pieces = []
        for j, beta in dec.components.items():
            assert bg.dual_lambda(beta, f).norm_sup() < 1e-10
            term = beta
            for _ in range(j):
                term = bg.lefschetz_L(term, f)
            pieces.append(term)
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                ip = bg.inner_product(pieces[i], pieces[j], f)
                assert abs(ip) < 1e-10


def test_primitive_decompose_requires_pure_block():
    f = bg.HermitianFrame(2)
    mixed = bg.BigradedForm(2, {(1, 0): [1, 0], (0, 1): [1, 0]})
    with pytest.raises(ArgumentError):
        bg.primitive_decompose(mixed, f)


# ---------------------------------------------------------------- Xi commutator

def test_xi_lambda_commutator_omega_case():
    rng = np.random.default_rng(13)
    for n in (2, 3):
        f = bg.HermitianFrame(n)
        for k in range(2 * n + 1):
            a = rand_mixed(n, k, rng)
            got = bg.xi_lambda_commutator(f.omega, a, f)
            assert (got - float(k - n) * a).norm_sup() < 1e-10


def test_xi_lambda_commutator_diagonal_example():
    # r with frame eigenvalues (1, 2) acting on phi1 ^ conj(phi1):
    # scale factor is 1 + 1 - (1 + 2) = -1
    f = bg.HermitianFrame(2)
    r = bg.BigradedForm(2, {(1, 1): 1j * np.array([1, 0, 0, 2.0])})
    a = bg.BigradedForm.basis_element(2, 1, 1, 0)
    got = bg.xi_lambda_commutator(r, a, f)
    assert (got - (-1.0) * a).norm_sup() < 1e-12


def test_xi_lambda_commutator_two_routes_random():
    rng = np.random.default_rng(14)
    for n in (2, 3):
        for frame in (bg.HermitianFrame(n), random_frame(n, rng)):
            R = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            R = R + R.conj().T
            r = bg.BigradedForm(n, {(1, 1): (1j * R).reshape(-1)})
            for p in range(n + 1):
                for q in range(n + 1):
                    a = rand_form(n, p, q, rng)
                    bg.xi_lambda_commutator(r, a, frame)  # raises on disagreement


def test_xi_lambda_commutator_rejects_non_real():
    f = bg.HermitianFrame(2)
    bad = bg.BigradedForm(2, {(1, 1): np.array([1j, 0.5, 0, 2j])})  # not Hermitian
    with pytest.raises(ArgumentError):
        bg.xi_lambda_commutator(bad, bg.BigradedForm.basis_element(2, 1, 1, 0), f)


# ---------------------------------------------------------------- misc

def test_wedge_norm_binomial_bound():
    # |a ^ b|^2 <= C(r+s, r) |a|^2 |b|^2 pointwise
    from math import comb
    rng = np.random.default_rng(15)
    n = 3
    f = bg.HermitianFrame(n)
    for r, s in [(1, 1), (1, 2), (2, 2), (2, 1)]:
        for _ in range(25):
            a, b = rand_mixed(n, r, rng), rand_mixed(n, s, rng)
            lhs = bg.inner_product(bg.wedge(a, b), bg.wedge(a, b), f).real
            rhs = comb(r + s, r) * bg.inner_product(a, a, f).real * bg.inner_product(b, b, f).real
            assert lhs <= rhs * (1 + 1e-12)


def test_dimension_mismatch_rejected():
    a = bg.BigradedForm(2, {(1, 0): [1, 0]})
    b = bg.BigradedForm(3, {(1, 0): [1, 0, 0]})
    with pytest.raises(DimensionMismatchError):
        bg.wedge(a, b)
    with pytest.raises(DimensionMismatchError):
        a + b


def test_adapted_coframe_properties():
    m = 4
    J = np.zeros((m, m))
    J[1, 0], J[0, 1], J[3, 2], J[2, 3] = 1, -1, 1, -1
    g = np.eye(m)
    C = bg.adapted_coframe(g, J)
    # rows are (1,0): phi(J X) = i phi(X) for all X, i.e. C J = i C
    assert np.allclose(C @ J, 1j * C, atol=1e-12)
    # orthonormal w.r.t. the covector metric: C g^{-1} C^H = I/1 with the
    # 1/sqrt(2) normalization built in
    assert np.allclose(C @ np.linalg.inv(g) @ C.conj().T, np.eye(2), atol=1e-12)
    # omega reconstruction: i sum phi ^ conj(phi) = coordinate omega
    fmap = bg.ComplexFrameMap(C)
    frame = bg.HermitianFrame(2)
    om = fmap.from_bigraded(frame.omega)[2]
    want = np.zeros(ext.dim(m, 2))
    want[ext.word_index(m, 2)[(0, 1)]] = 1.0
    want[ext.word_index(m, 2)[(2, 3)]] = 1.0
    assert np.allclose(om, want, atol=1e-12)


def test_frame_map_roundtrip_and_reality():
    m = 4
    J = np.zeros((m, m))
    J[3, 0], J[0, 3], J[2, 1], J[1, 2] = 1, -1, 1, -1   # e1->e4, e2->e3
    C = bg.adapted_coframe(np.eye(m), J)
    fmap = bg.ComplexFrameMap(C)
    rng = np.random.default_rng(16)
    for k in range(5):
        coeffs = rng.normal(size=ext.dim(m, k))
        a = fmap.to_bigraded(k, coeffs)
        assert (bg.conj_form(a) - a).norm_sup() < 1e-12   # real forms stay real
        back = fmap.from_bigraded(a)
        if k in back:
            assert np.allclose(back[k], coeffs, atol=1e-12)
    # inner product in blocks equals the coefficient sum over the real
    # orthonormal coframe (sesquilinear extension)
    frame = bg.HermitianFrame(2)
    u = rng.normal(size=ext.dim(m, 2)) + 1j * rng.normal(size=ext.dim(m, 2))
    v = rng.normal(size=ext.dim(m, 2)) + 1j * rng.normal(size=ext.dim(m, 2))
    got = bg.inner_product(fmap.to_bigraded(2, u), fmap.to_bigraded(2, v), frame)
    assert np.allclose(got, u @ np.conj(v), atol=1e-12)
