import numpy as np
import pytest

from liouv import oracle
from liouv.errors import TooLarge
from liouv.lyapunov import solve_lyapunov
from liouv.model import (
    build_bath_matrices,
    build_structure_matrix,
    build_X,
    validate_model,
)
from liouv.normal_modes import build_V
from liouv.randmodel import random_model
from liouv.rapidity import jordan_decompose
from liouv.spectra import classify_ness, enumerate_spectrum, ness_covariance

from conftest import ising_pair_model, single_qubit_model


def full_stage(model):
    bath = build_bath_matrices(model)
    X = build_X(model, bath)
    sm = build_structure_matrix(model, bath)
    jf = jordan_decompose(X)
    ds = solve_lyapunov(X, bath.M_i, jf)
    return bath, X, sm, jf, ds


@pytest.mark.parametrize("n", [1, 2, 3])
def test_majorana_car_exact(n):
    rep = oracle.majorana_ops(n)
    assert len(rep.w) == 2 * n
    eye = np.eye(2**n)
    for j, wj in enumerate(rep.w):
        np.testing.assert_array_equal(wj, wj.conj().T)
        for k, wk in enumerate(rep.w):
            anti = wj @ wk + wk @ wj
            np.testing.assert_allclose(anti, 2 * (j == k) * eye, atol=1e-15)


def test_majorana_size_limit():
    with pytest.raises(TooLarge):
        oracle.majorana_ops(7)


def test_fock_maps_car_and_adjointness():
    maps = oracle.build_fock_maps(2)
    dim = 16
    for c, cd in zip(maps.c, maps.c_dag):
        np.testing.assert_allclose(cd, c.conj().T, atol=1e-15)
    for p, ap in enumerate(maps.a):
        for q, aq in enumerate(maps.a):
            anti = ap @ aq + aq @ ap
            np.testing.assert_allclose(anti, (p == q) * np.eye(dim), atol=1e-14)


def test_fock_maps_single_mode():
    maps = oracle.build_fock_maps(1)
    assert maps.a[0].shape == (4, 4)
    anti = maps.a[0] @ maps.a[2] + maps.a[2] @ maps.a[0]
    np.testing.assert_allclose(anti, np.zeros((4, 4)), atol=1e-15)


def test_fock_basis_transform_unitary():
    T = oracle.fock_basis_transform(2)
    np.testing.assert_allclose(T.conj().T @ T, np.eye(16), atol=1e-14)


def test_zero_model_superoperator():
    m = validate_model(1, np.zeros((2, 2)), [])
    sup = oracle.build_superoperator(m)
    assert np.abs(sup.matrix).max() == 0.0


def test_superoperator_trace_preservation():
    m = random_model(2, seed=0)
    sup = oracle.build_superoperator(m)
    assert sup.trace_preservation_residual < 1e-14


def test_qubit_superoperator_eigenvalues():
    m = single_qubit_model(h=np.cos(np.pi / 3) + 0.4)
    bath, X, sm, jf, ds = full_stage(m)
    sup = oracle.build_superoperator(m)
    betas = [b.rapidity for b in jf.blocks]
    expected = np.array([0, -2 * betas[0], -2 * betas[1], -2 * (betas[0] + betas[1])])
    actual = np.linalg.eigvals(sup.matrix)
    assert oracle.match_multisets(expected, actual) < 1e-8


def test_ising_pair_kernel_dimension():
    m = ising_pair_model()
    sup = oracle.build_superoperator(m)
    assert sup.matrix.shape == (16, 16)
    s = np.linalg.svd(sup.matrix, compute_uv=False)
    assert int(np.sum(s < 1e-9)) == 2


def test_quadratic_form_zero_model():
    m = validate_model(1, np.zeros((2, 2)), [])
    rep = oracle.verify_quadratic_form(m)
    assert rep.residual == 0.0


def test_quadratic_form_fixtures():
    for m in (single_qubit_model(), ising_pair_model()):
        rep = oracle.verify_quadratic_form(m)
        assert rep.residual < 1e-10
        assert rep.parity_leak < 1e-14


@pytest.mark.parametrize("seed", range(20))
def test_quadratic_form_random_models(seed):
    n = 1 + seed % 3
    m = random_model(n, seed=seed, n_vectors=max(1, n - 1))
    rep = oracle.verify_quadratic_form(m)
    assert rep.residual < 1e-9
    assert rep.parity_leak < 1e-12


def test_single_structure_matrix_fails_on_odd_sector():
    """Documents why the parity split is required: with the even-sector A used
    on the whole space, the residual is O(coupling), not numerical noise."""
    m = validate_model(1, np.zeros((2, 2)), [np.array([1.0, 0.0])])
    bath = build_bath_matrices(m)
    sm = build_structure_matrix(m, bath)
    sup = oracle.build_superoperator(m)
    T = oracle.fock_basis_transform(1)
    S_fock = T.conj().T @ sup.matrix @ T
    maps = oracle.build_fock_maps(1)
    form = oracle.quadratic_form_matrix(sm.A, sm.A0, maps)
    assert np.abs(S_fock - form).max() > 1.0


def test_oracle_ness_unique_stable():
    m = random_model(2, seed=12)
    bath, X, sm, jf, ds = full_stage(m)
    on = oracle.oracle_ness(m)
    assert on.kernel_dim == 1
    assert on.positive_witness_found
    assert on.hermiticity_residual < 1e-10
    assert on.min_eigenvalue >= -1e-9
    np.testing.assert_allclose(on.covariance, ness_covariance(ds.Z), atol=1e-7)


def test_oracle_ness_ising_pair_denegerate():
    m = ising_pair_model()
    bath, X, sm, jf, ds = full_stage(m)
    on = oracle.oracle_ness(m)
    assert on.kernel_dim == 2
    assert on.positive_witness_found
    np.testing.assert_allclose(on.covariance, ness_covariance(ds.Z), atol=1e-8)


def test_oracle_ness_even_correlators_insensitive():
    """Even monomial expectations do not depend on the degeneracy parameter."""
    m = ising_pair_model()
    on = oracle.oracle_ness(m)
    rep = oracle.majorana_ops(2)
    kernel = on.kernel_vectors
    # rebuild the one-parameter family rho(alpha) from the kernel
    rhos = [kernel[:, i].reshape(4, 4, order="F") for i in range(2)]
    herm = [(r + r.conj().T) / 2 for r in rhos] + [(r - r.conj().T) / 2j for r in rhos]
    herm = [h for h in herm if np.abs(h).max() > 1e-12]
    traceful = next(h for h in herm if abs(np.trace(h)) > 1e-9)
    base = traceful / np.trace(traceful).real
    traceless = next(h for h in herm if abs(np.trace(h)) < 1e-9 and np.abs(h).max() > 1e-6)
    for alpha in (0.0, 0.05, -0.05):
        rho = base + alpha * traceless
        C = np.array(
            [[np.trace(rep.w[j] @ rep.w[k] @ rho) for k in range(4)] for j in range(4)]
        )
        np.testing.assert_allclose(C, on.covariance, atol=1e-9)


def test_oracle_ness_zero_model_full_kernel():
    m = validate_model(1, np.zeros((2, 2)), [])
    on = oracle.oracle_ness(m)
    assert on.kernel_dim == 4


def test_spectrum_multiset_fixtures():
    for m in (single_qubit_model(), ising_pair_model()):
        bath, X, sm, jf, ds = full_stage(m)
        spec = enumerate_spectrum(jf)
        sup = oracle.build_superoperator(m)
        dev = oracle.match_multisets(
            oracle.eigenvalue_multiset_from_enumeration(spec.entries),
            np.linalg.eigvals(sup.matrix),
        )
        assert dev < 1e-7


def test_defective_superoperator_jordan_block():
    m = single_qubit_model()  # rapidity 2 with a size-2 block
    sup = oracle.build_superoperator(m)
    assert oracle.largest_jordan_block_at(sup.matrix, -4.0, 2) == 2
    assert oracle.largest_jordan_block_at(sup.matrix, 0.0, 1) == 1
    assert oracle.largest_jordan_block_at(sup.matrix, -8.0, 1) == 1


def _fock_vector_to_operator(n, coeff):
    T = oracle.fock_basis_transform(n)
    return (T @ coeff).reshape(2**n, 2**n, order="F")


def _form_vacuum(form, parity, trace_dual):
    """Even-parity kernel element of a quadratic-form matrix, trace-normalized
    when possible, otherwise unit-norm."""
    _, s, vh = np.linalg.svd(form)
    kern = vh[s < 1e-8 * max(s[0], 1.0)].conj().T
    proj = kern.copy()
    proj[parity < 0, :] = 0
    coe = trace_dual @ proj
    if np.linalg.norm(coe) > 1e-8:
        vac = proj @ coe.conj()
        return vac / (trace_dual @ vac)
    u, _, _ = np.linalg.svd(proj, full_matrices=False)
    return u[:, 0]


def test_zero_mode_descriptor_realizes_dense_kernel_direction():
    """The zero-rapidity stationary direction is odd parity, so the dense
    generator realizes it through the driving-flipped quadratic form: the
    flipped-form creation mode applied to the flipped-form vacuum must span
    the odd part of the true kernel exactly."""
    from liouv.model import odd_sector_structure_matrix

    m = ising_pair_model()
    bath, X, sm, jf, ds = full_stage(m)
    assert classify_ness(jf).zero_rapidity_modes == ((1, 1),)
    zero_row = jf.blocks[0].chain_start  # j=1 sorts first

    nmb = build_V(jf, ds.Z)
    maps = oracle.build_fock_maps(2)
    T = oracle.fock_basis_transform(2)
    sup = oracle.build_superoperator(m)
    S_fock = T.conj().T @ sup.matrix @ T
    parity = np.diag(maps.parity).real
    trace_dual = np.zeros(16)
    trace_dual[0] = 2.0

    # the even-sector form annihilates its own descriptor as a matrix identity
    F_even = oracle.quadratic_form_matrix(sm.A, sm.A0, maps)
    b_ops = [sum(nmb.V[i, p] * maps.a[p] for p in range(8)) for i in range(8)]
    vac_even = _form_vacuum(F_even, parity, trace_dual)
    dir_form = b_ops[4 + zero_row] @ vac_even
    assert np.linalg.norm(dir_form) > 1e-3
    assert np.linalg.norm(F_even @ dir_form) < 1e-10

    # the true generator needs the flipped form on the odd sector
    D = np.kron(np.diag([1.0, -1.0]), np.eye(4))
    V_odd = nmb.V @ D
    b_odd = [sum(V_odd[i, p] * maps.a[p] for p in range(8)) for i in range(8)]
    F_odd = oracle.quadratic_form_matrix(odd_sector_structure_matrix(sm), sm.A0, maps)
    vac_odd = _form_vacuum(F_odd, parity, trace_dual)
    dir_true = b_odd[4 + zero_row] @ vac_odd
    assert np.linalg.norm(dir_true) > 1e-3
    assert np.linalg.norm(S_fock @ dir_true) < 1e-10

    on = oracle.oracle_ness(m)
    odd_kernel = (T.conj().T @ on.kernel_vectors)
    odd_kernel[parity > 0, :] = 0
    u, s, _ = np.linalg.svd(odd_kernel, full_matrices=False)
    assert s[0] > 1e-3  # the dense kernel has one odd direction
    overlap = abs(np.vdot(u[:, 0], dir_true)) / np.linalg.norm(dir_true)
    assert overlap > 1 - 1e-9  # and it is exactly the flipped-form direction

    op = _fock_vector_to_operator(2, dir_true)
    assert abs(np.trace(op)) < 1e-10  # odd operators are traceless


def test_imaginary_pair_combination_is_stationary_trace_zero():
    """For a multiplicity-1 conjugate imaginary pair the symmetric Hermitian
    combination reduces to 2 b'_+ b'_- |NESS> (the antisymmetric one vanishes
    identically when k = k'); it is even parity, so the plain form governs it
    and it must be a stationary trace-zero direction of the dense generator."""
    from importlib.resources import files

    from liouv.io import load_model

    model, _ = load_model(str(files("liouv") / "models" / "ising_chain_3.json"))
    bath, X, sm, jf, ds = full_stage(model)
    report = classify_ness(jf)
    assert len(report.imaginary_pair_modes) == 2
    j, jp, k, kp, _ = report.imaginary_pair_modes[0]
    assert (k, kp) == (1, 1)

    nmb = build_V(jf, ds.Z)
    maps = oracle.build_fock_maps(3)
    T = oracle.fock_basis_transform(3)
    sup = oracle.build_superoperator(model)
    S_fock = T.conj().T @ sup.matrix @ T
    parity = np.diag(maps.parity).real
    trace_dual = np.zeros(64)
    trace_dual[0] = 2**1.5
    half = 6

    F_even = oracle.quadratic_form_matrix(sm.A, sm.A0, maps)
    vac = _form_vacuum(F_even, parity, trace_dual)
    rows = {b.j: b.chain_start for b in jf.blocks}
    b_ops = [sum(nmb.V[i, p] * maps.a[p] for p in range(12)) for i in range(12)]
    combo = b_ops[half + rows[j]] @ (b_ops[half + rows[jp]] @ vac)

    assert np.linalg.norm(combo) > 1e-3
    assert np.linalg.norm(F_even @ combo) < 1e-10
    assert np.linalg.norm(S_fock @ combo) < 1e-10
    op = _fock_vector_to_operator(3, combo)
    assert abs(np.trace(op)) < 1e-10


def test_merged_collision_blocks_match_dense():
    """Eigenvalue collisions across occupation sectors: the merged view's max
    block is reported as a lower bound, but the invariant subspaces direct-sum
    the whole space, so it actually equals the dense largest block."""
    G, th = 1.0, np.pi / 3
    h = G * np.cos(th)
    K = np.zeros((4, 4))
    K[0, 1], K[1, 0] = h, -h
    vecs = [
        np.sqrt(G) * np.array([1, np.exp(1j * th), 0, 0]),
        np.sqrt(2 * G) * np.array([0, 0, 1, 0]),
        np.sqrt(2 * G) * np.array([0, 0, 0, 1]),
    ]
    m = validate_model(2, K, vecs)
    bath, X, sm, jf, ds = full_stage(m)
    spec = enumerate_spectrum(jf)
    sup = oracle.build_superoperator(m)
    collisions = [e for e in spec.merged if e.contributors > 1]
    assert collisions, "model must produce cross-sector collisions"
    assert any(e.max_jordan_block > 1 for e in collisions)
    for e in collisions:
        dense = oracle.largest_jordan_block_at(sup.matrix, e.lam, e.total_dim)
        assert dense == e.max_jordan_block


def test_normal_master_modes_almost_car_and_vacua():
    m = random_model(2, seed=21)
    bath, X, sm, jf, ds = full_stage(m)
    nmb = build_V(jf, ds.Z)
    maps = oracle.build_fock_maps(2)
    dim = 16
    b_ops = [sum(nmb.V[i, p] * maps.a[p] for p in range(8)) for i in range(8)]
    # almost-CAR: {b_i, b_j} = J_ij
    for i in range(8):
        for j in range(8):
            anti = b_ops[i] @ b_ops[j] + b_ops[j] @ b_ops[i]
            want = 1.0 if abs(i - j) == 4 else 0.0
            np.testing.assert_allclose(anti, want * np.eye(dim), atol=1e-9)

    # vacua: every annihilation mode kills |NESS>, every creation mode kills <1|
    on = oracle.oracle_ness(m)
    T = oracle.fock_basis_transform(2)
    ness_coeff = T.conj().T @ on.rho.reshape(-1, order="F")
    one_dual = np.zeros(dim)
    one_dual[0] = 2 ** (2 / 2)  # <1| = 2^{n/2} <P_0|
    for i in range(4):
        assert np.linalg.norm(b_ops[i] @ ness_coeff) < 1e-8
        assert np.linalg.norm(one_dual @ b_ops[4 + i]) < 1e-8


def test_normal_form_matrix_identity():
    """The quadratic form equals the normal form -2 sum(beta b'b + b'_{l+1} b_l)
    as a full matrix identity on the operator space."""
    for m in (single_qubit_model(), random_model(2, seed=33)):
        bath, X, sm, jf, ds = full_stage(m)
        nmb = build_V(jf, ds.Z)
        n4 = 2 * jf.dim
        maps = oracle.build_fock_maps(m.n)
        dim = 4**m.n
        b_ops = [sum(nmb.V[i, p] * maps.a[p] for p in range(n4)) for i in range(n4)]
        half = jf.dim
        form = oracle.quadratic_form_matrix(sm.A, sm.A0, maps)
        normal = np.zeros((dim, dim), dtype=complex)
        for blk in jf.blocks:
            for l in range(blk.size):
                row = blk.chain_start + l
                normal += -2 * blk.rapidity * (b_ops[half + row] @ b_ops[row])
            for l in range(blk.size - 1):
                row = blk.chain_start + l
                normal += -2 * (b_ops[half + row + 1] @ b_ops[row])
        np.testing.assert_allclose(normal, form, atol=1e-8)


def test_nmax_env_override(monkeypatch):
    monkeypatch.setenv("LIOUV_NMAX", "1")
    with pytest.raises(TooLarge):
        oracle.majorana_ops(2)
    monkeypatch.delenv("LIOUV_NMAX")
    oracle.majorana_ops(2)
