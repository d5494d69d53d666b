"""Brute-force ground truth at small fermion number.

Explicit Jordan-Wigner Majorana matrices on the 2^n Hilbert space, the dense
4^n x 4^n Lindblad superoperator (column-stacked vec convention), the
creation/annihilation maps on the operator Fock basis P_alpha, and the
comparisons that pin the fast path: the quadratic-form identity per parity
sector, spectrum multisets, and steady-state correlators.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .errors import BuildInvariantViolated, TooLarge
from .model import (
    BathMatrices,
    QuadraticLindbladModel,
    StructureMatrix,
    build_bath_matrices,
    build_structure_matrix,
    odd_sector_structure_matrix,
)

DEFAULT_NMAX = 5

_SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


def resolve_nmax(n_max: int | None = None) -> int:
    if n_max is not None:
        return n_max
    env = os.environ.get("LIOUV_NMAX")
    return int(env) if env else DEFAULT_NMAX


def _check_size(n: int, n_max: int | None):
    limit = resolve_nmax(n_max)
    if n > limit:
        raise TooLarge(f"n = {n} exceeds the oracle limit n_max = {limit}")


@dataclass(frozen=True)
class MajoranaRep:
    """2n Hermitian anticommuting matrices on the 2^n-dimensional Hilbert space."""

    n: int
    w: tuple[np.ndarray, ...]


def majorana_ops(n: int, n_max: int | None = None) -> MajoranaRep:
    """Jordan-Wigner Majoranas: w_{2j-1}, w_{2j} act on site j with sigma^3
    strings on the sites before it."""
    _check_size(n, n_max)
    ws = []
    for j in range(n):
        string = [_SIGMA3] * j
        for op in (_SIGMA1, _SIGMA2):
            factors = string + [op] + [np.eye(2, dtype=complex)] * (n - j - 1)
            mat = factors[0]
            for f in factors[1:]:
                mat = np.kron(mat, f)
            ws.append(mat)
    return MajoranaRep(n, tuple(ws))


def hamiltonian_matrix(model: QuadraticLindbladModel, rep: MajoranaRep) -> np.ndarray:
    """H = w . (iK) w on the Hilbert space."""
    d = model.dim
    H = np.zeros((2**model.n, 2**model.n), dtype=complex)
    iK = 1j * model.K
    for j in range(d):
        for k in range(d):
            if iK[j, k] != 0:
                H += iK[j, k] * (rep.w[j] @ rep.w[k])
    return H


def lindblad_operators(model: QuadraticLindbladModel, rep: MajoranaRep) -> list[np.ndarray]:
    return [
        sum(l[j] * rep.w[j] for j in range(model.dim))
        for l in model.lindblad_vectors
    ]


@dataclass(frozen=True)
class Superoperator:
    """Dense matrix of rho -> L rho in the column-stacked vec basis."""

    n: int
    matrix: np.ndarray
    trace_preservation_residual: float


def build_superoperator(model: QuadraticLindbladModel, n_max: int | None = None) -> Superoperator:
    """Assemble the Lindblad generator as a 4^n x 4^n matrix.

    vec is column stacking, so A rho B maps to kron(B^T, A).  The trace
    functional must annihilate the generator from the left (machine
    precision); a violation means the assembly is broken.
    """
    _check_size(model.n, n_max)
    rep = majorana_ops(model.n, n_max)
    dim = 2**model.n
    eye = np.eye(dim, dtype=complex)
    H = hamiltonian_matrix(model, rep)
    S = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for L in lindblad_operators(model, rep):
        LdL = L.conj().T @ L
        S += 2 * np.kron(L.conj(), L) - np.kron(eye, LdL) - np.kron(LdL.T, eye)
    tr_vec = eye.reshape(-1, order="F").conj()
    scale = max(np.abs(S).max(), 1.0)
    residual = float(np.abs(tr_vec @ S).max() / scale)
    if residual > 1e-10:
        raise BuildInvariantViolated(
            f"superoperator is not trace-preserving: residual {residual:.3e}"
        )
    return Superoperator(model.n, S, residual)


def _alpha_tuples(n: int) -> list[tuple[int, ...]]:
    """Occupation multi-indices alpha, alpha_1 the least significant bit."""
    d = 2 * n
    return [tuple((idx >> j) & 1 for j in range(d)) for idx in range(4**n)]


def pauli_basis_matrices(n: int, n_max: int | None = None) -> list[np.ndarray]:
    """Orthonormal Majorana monomials P_alpha = 2^{-n/2} w_1^a1 ... w_2n^a2n."""
    _check_size(n, n_max)
    rep = majorana_ops(n, n_max)
    dim = 2**n
    out = []
    for alpha in _alpha_tuples(n):
        mat = np.eye(dim, dtype=complex) * 2 ** (-n / 2)
        for j, bit in enumerate(alpha):
            if bit:
                mat = mat @ rep.w[j]
        out.append(mat)
    return out


def fock_basis_transform(n: int, n_max: int | None = None) -> np.ndarray:
    """Unitary T with columns vec(P_alpha): maps P_alpha coefficients to vec."""
    mats = pauli_basis_matrices(n, n_max)
    return np.column_stack([m.reshape(-1, order="F") for m in mats])


@dataclass(frozen=True)
class FockMaps:
    """Creation/annihilation maps over the operator Fock space.

    a lists the 4n Hermitian Majorana maps, first the (c+c')/sqrt2 block then
    the i(c-c')/sqrt2 block, matching the structure-matrix ordering.  parity
    is diag((-1)^{|alpha|}).
    """

    n: int
    c: tuple[np.ndarray, ...]
    c_dag: tuple[np.ndarray, ...]
    a: tuple[np.ndarray, ...]
    parity: np.ndarray


def build_fock_maps(n: int, n_max: int | None = None) -> FockMaps:
    _check_size(n, n_max)
    d = 2 * n
    dim = 4**n
    alphas = _alpha_tuples(n)
    index = {a: i for i, a in enumerate(alphas)}
    cs = []
    cds = []
    for j in range(d):
        c = np.zeros((dim, dim), dtype=complex)
        cd = np.zeros((dim, dim), dtype=complex)
        for a, col in index.items():
            sign = (-1) ** sum(a[:j])
            flipped = list(a)
            flipped[j] ^= 1
            row = index[tuple(flipped)]
            if a[j]:
                c[row, col] = sign
            else:
                cd[row, col] = sign
        cs.append(c)
        cds.append(cd)
    a_maps = [(c + cd) / np.sqrt(2) for c, cd in zip(cs, cds)] + [
        1j * (c - cd) / np.sqrt(2) for c, cd in zip(cs, cds)
    ]
    parity = np.diag([(-1.0) ** sum(a) for a in alphas]).astype(complex)
    return FockMaps(n, tuple(cs), tuple(cds), tuple(a_maps), parity)


def quadratic_form_matrix(sm_A: np.ndarray, A0: float, maps: FockMaps) -> np.ndarray:
    """sum_pq A_pq a_p a_q - A_0 on the P_alpha basis."""
    dim = 4**maps.n
    out = -A0 * np.eye(dim, dtype=complex)
    for p, ap in enumerate(maps.a):
        combo = np.zeros((dim, dim), dtype=complex)
        for q, aq in enumerate(maps.a):
            if sm_A[p, q] != 0:
                combo += sm_A[p, q] * aq
        out += ap @ combo
    return out


@dataclass(frozen=True)
class QuadraticFormReport:
    """Residuals of the quadratic-form identity against the dense generator.

    The identity holds on the even-parity sector with the structure matrix A,
    and on the odd sector with the driving-flipped matrix; `residual` is the
    max of the two.  parity_leak measures how well the dense generator itself
    preserves parity (machine precision).
    """

    residual_even: float
    residual_odd: float
    parity_leak: float

    @property
    def residual(self) -> float:
        return max(self.residual_even, self.residual_odd)


def verify_quadratic_form(
    model: QuadraticLindbladModel,
    n_max: int | None = None,
    bath: BathMatrices | None = None,
    structure: StructureMatrix | None = None,
) -> QuadraticFormReport:
    """Compare the dense generator, rotated to the P_alpha basis, with the
    quadratic form in the Fock maps, per parity sector."""
    _check_size(model.n, n_max)
    bath = bath if bath is not None else build_bath_matrices(model)
    structure = structure if structure is not None else build_structure_matrix(model, bath)
    sup = build_superoperator(model, n_max)
    T = fock_basis_transform(model.n, n_max)
    S_fock = T.conj().T @ sup.matrix @ T
    maps = build_fock_maps(model.n, n_max)
    even = np.diag(maps.parity).real > 0
    odd = ~even

    form_even = quadratic_form_matrix(structure.A, structure.A0, maps)
    form_odd = quadratic_form_matrix(
        odd_sector_structure_matrix(structure), structure.A0, maps
    )
    res_even = float(np.abs((S_fock - form_even)[np.ix_(even, even)]).max())
    res_odd = float(np.abs((S_fock - form_odd)[np.ix_(odd, odd)]).max())
    leak = float(
        max(
            np.abs(S_fock[np.ix_(even, odd)]).max(initial=0.0),
            np.abs(S_fock[np.ix_(odd, even)]).max(initial=0.0),
        )
    )
    return QuadraticFormReport(res_even, res_odd, leak)


@dataclass(frozen=True)
class OracleNess:
    """Kernel of the dense generator and a stationary density matrix.

    rho is the unique steady state when kernel_dim == 1, otherwise a positive
    trace-one witness found by a coarse grid scan over the traceless kernel
    directions (positive_witness_found False when the scan fails; not fatal).
    covariance is tr(w_j w_k rho) for the returned rho.
    """

    kernel_dim: int
    rho: np.ndarray | None
    covariance: np.ndarray | None
    positive_witness_found: bool
    hermiticity_residual: float
    min_eigenvalue: float
    kernel_vectors: np.ndarray


def _hermitian_kernel_basis(kernel: np.ndarray, dim: int) -> list[np.ndarray]:
    """Real-orthonormal basis of Hermitian matrices spanning the kernel."""
    k = kernel.shape[1]
    candidates = []
    for i in range(k):
        rho = kernel[:, i].reshape(dim, dim, order="F")
        candidates.append((rho + rho.conj().T) / 2)
        candidates.append((rho - rho.conj().T) / 2j)
    stacked = np.column_stack(
        [np.concatenate([m.real.reshape(-1), m.imag.reshape(-1)]) for m in candidates]
    )
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    basis = []
    for i in range(k):
        if s[i] <= s[0] * 1e-10:
            break
        v = u[:, i]
        m = v[: dim * dim].reshape(dim, dim) + 1j * v[dim * dim:].reshape(dim, dim)
        basis.append((m + m.conj().T) / 2)
    return basis


def oracle_ness(
    model: QuadraticLindbladModel,
    n_max: int | None = None,
    tol_kernel: float = 1e-9,
    tol_pos: float = 1e-9,
    grid_points: int = 41,
) -> OracleNess:
    """Kernel basis of the generator and a trace-one positive element.

    For a degenerate kernel the scan covers up to two traceless Hermitian
    directions on a coarse grid, positivity-checked; with more directions
    only the trace-normalized base point is tried.
    """
    _check_size(model.n, n_max)
    sup = build_superoperator(model, n_max)
    dim = 2**model.n
    _, s, vh = np.linalg.svd(sup.matrix)
    null_mask = s <= tol_kernel * max(s[0], 1.0)
    kernel = vh[null_mask].conj().T
    kdim = kernel.shape[1]
    if kdim == 0:
        raise BuildInvariantViolated("generator has no kernel; impossible for a Lindbladian")

    basis = _hermitian_kernel_basis(kernel, dim)
    traces = np.array([np.trace(b).real for b in basis])
    norm2 = float(traces @ traces)
    if norm2 < 1e-20:
        return OracleNess(kdim, None, None, False, np.inf, -np.inf, kernel)
    base = sum(t / norm2 * b for t, b in zip(traces, basis))
    # traceless kernel directions: project the trace component out and SVD-reduce
    projected = [b - t * base for t, b in zip(traces, basis)]
    stacked = np.column_stack(
        [np.concatenate([m.real.reshape(-1), m.imag.reshape(-1)]) for m in projected]
    )
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    traceless = []
    for i in range(kdim - 1):
        if i < len(s) and s[i] > max(s[0], 1.0) * 1e-10:
            v = u[:, i]
            m = v[: dim * dim].reshape(dim, dim) + 1j * v[dim * dim:].reshape(dim, dim)
            traceless.append((m + m.conj().T) / 2)

    def herm_residual(m):
        return float(np.abs(m - m.conj().T).max())

    def try_rho(rho):
        eigs = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        return float(eigs.min())

    candidates = [base]
    if 1 <= len(traceless) <= 2:
        spread = np.abs(np.linalg.eigvalsh(base)).max() + tol_pos
        axes = []
        for t in traceless:
            tmax = np.abs(np.linalg.eigvalsh(t)).max()
            axes.append(np.linspace(-2 * spread / tmax, 2 * spread / tmax, grid_points))
        for coeffs in itertools.product(*axes):
            candidates.append(base + sum(c * t for c, t in zip(coeffs, traceless)))

    rho_found = None
    best_min = -np.inf
    for rho in candidates:
        mn = try_rho(rho)
        best_min = max(best_min, mn)
        if mn >= -tol_pos:
            rho_found = rho
            break

    if rho_found is None:
        return OracleNess(kdim, None, None, False, herm_residual(base), best_min, kernel)

    rho_found = rho_found / np.trace(rho_found).real
    rep = majorana_ops(model.n, n_max)
    d = model.dim
    C = np.array(
        [[np.trace(rep.w[j] @ rep.w[k] @ rho_found) for k in range(d)] for j in range(d)]
    )
    return OracleNess(
        kdim,
        rho_found,
        C,
        True,
        herm_residual(rho_found),
        try_rho(rho_found),
        kernel,
    )


def eigenvalue_multiset_from_enumeration(entries) -> np.ndarray:
    """Expand (lambda, subspace_dim) pairs to a flat eigenvalue multiset."""
    out = []
    for e in entries:
        out.extend([e.lam] * e.subspace_dim)
    return np.array(sorted(out, key=lambda z: (z.real, z.imag)))


def match_multisets(a: np.ndarray, b: np.ndarray) -> float:
    """Max deviation under minimal-weight perfect matching of two multisets."""
    from scipy.optimize import linear_sum_assignment

    if len(a) != len(b):
        raise ValueError(f"multiset sizes differ: {len(a)} vs {len(b)}")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def largest_jordan_block_at(
    S: np.ndarray, lam: complex, multiplicity: int, tol_rank: float = 1e-7
) -> int:
    """Size of the largest Jordan block of S in the eigenvalue cluster at lam.

    Rank staircase of (S - lam)^k with relative SVD thresholding; stops when
    the nullity stops growing or reaches the algebraic multiplicity.
    """
    d = S.shape[0]
    Y = S - lam * np.eye(d)
    prev = 0
    power = np.eye(d, dtype=complex)
    for k in range(1, multiplicity + 1):
        power = power @ Y
        sv = np.linalg.svd(power, compute_uv=False)
        rank = int(np.sum(sv > tol_rank * max(sv[0], 1.0)))
        nullity = d - rank
        if nullity == prev:
            return k - 1
        if nullity >= multiplicity:
            return k
        prev = nullity
    return multiplicity
