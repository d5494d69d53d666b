"""Model input and the derived matrices of the quadratic Liouvillean.

A model is the real antisymmetric Hamiltonian kernel K (the Hamiltonian is
H = w.(iK)w in Majorana operators) together with the Lindblad coupling
vectors l_mu (L_mu = l_mu.w).  From these the bath matrices M, M_r, M_i, the
real matrix X = 2K + 2M_r and the antisymmetric 4n x 4n structure matrix A
with its scalar A_0 are assembled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BuildInvariantViolated, DimensionMismatch, NotAntisymmetric

TOL_INPUT = 1e-10
TOL_BUILD = 1e-12
TOL_PSD = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadraticLindbladModel:
    """Validated input: fermion count, Hamiltonian kernel, coupling vectors."""

    n: int
    K: np.ndarray
    lindblad_vectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return 2 * self.n


@dataclass(frozen=True)
class BathMatrices:
    """M = sum_mu l_mu (x) conj(l_mu) and its real/imaginary parts."""

    M: np.ndarray
    M_r: np.ndarray
    M_i: np.ndarray


@dataclass(frozen=True)
class StructureMatrix:
    """Antisymmetric 4n x 4n quadratic-form matrix A and the scalar A_0 = 2 tr M_r."""

    A: np.ndarray
    A0: float


def validate_model(
    n: int,
    K: np.ndarray,
    lindblad_vectors,
    tol_input: float = TOL_INPUT,
) -> QuadraticLindbladModel:
    """Check shapes and antisymmetry; return the model with K antisymmetrized.

    tol_input is relative to max|K|.  Raises DimensionMismatch or
    NotAntisymmetric on bad input.
    """
    if n < 1:
        raise DimensionMismatch(f"n must be a positive integer, got {n}")
    K = np.asarray(K, dtype=float)
    d = 2 * n
    if K.shape != (d, d):
        raise DimensionMismatch(f"K must be {d}x{d}, got {K.shape}")
    scale = max(np.abs(K).max(), 1.0)
    asym = np.abs(K + K.T).max()
    if asym > tol_input * scale:
        raise NotAntisymmetric(
            f"max|K + K^T| = {asym:.3e} exceeds {tol_input:.1e} * max|K|"
        )
    vectors = []
    for mu, l in enumerate(lindblad_vectors):
        l = np.asarray(l, dtype=complex)
        if l.shape != (d,):
            raise DimensionMismatch(
                f"Lindblad vector {mu} must have length {d}, got shape {l.shape}"
            )
        vectors.append(_frozen(l))
    return QuadraticLindbladModel(n, _frozen((K - K.T) / 2), tuple(vectors))


def build_bath_matrices(model: QuadraticLindbladModel, tol_psd: float = TOL_PSD) -> BathMatrices:
    """Assemble M = sum_mu l_mu (x) conj(l_mu); PSD by construction, asserted anyway."""
    d = model.dim
    M = np.zeros((d, d), dtype=complex)
    for l in model.lindblad_vectors:
        M += np.outer(l, l.conj())
    M_r = (M + M.conj()).real / 2
    M_i = ((M - M.conj()) / 2j).real
    if model.lindblad_vectors:
        scale = max(np.abs(M).max(), 1.0)
        lam_min = np.linalg.eigvalsh(M).min()
        if lam_min < -tol_psd * scale:
            raise BuildInvariantViolated(
                f"bath matrix not PSD: min eigenvalue {lam_min:.3e}"
            )
    return BathMatrices(_frozen(M), _frozen(M_r), _frozen(M_i))


def build_X(model: QuadraticLindbladModel, bath: BathMatrices) -> np.ndarray:
    """X = 2K + 2M_r; real, with X + X^T = 4 M_r >= 0."""
    return _frozen(2 * model.K + 2 * bath.M_r)


def skew_unit(n: int) -> np.ndarray:
    """J = sigma^1 (x) 1_{2n}."""
    d = 2 * n
    J = np.zeros((2 * d, 2 * d))
    J[:d, d:] = np.eye(d)
    J[d:, :d] = np.eye(d)
    return J


def tilde_unitary(n: int) -> np.ndarray:
    """U = (1/sqrt2) [[1, -i], [1, i]] (x) 1_{2n}; maps A to block-triangular form."""
    d = 2 * n
    u2 = np.array([[1, -1j], [1, 1j]]) / np.sqrt(2)
    return np.kron(u2, np.eye(d))


def build_structure_matrix(
    model: QuadraticLindbladModel,
    bath: BathMatrices,
    tol_build: float = TOL_BUILD,
) -> StructureMatrix:
    """Assemble A blockwise and check antisymmetry and self-conjugation.

    A = [[2K + 2i M_i, 2i M], [-2i M^T, 2K - 2i M_i]] (equivalently the
    block form in -2iH with H = iK) and A_0 = 2 tr M_r.  Residuals above
    tol_build * max|A| indicate an internal bug, not bad input.
    """
    d = model.dim
    twoK = 2 * model.K
    A = np.zeros((2 * d, 2 * d), dtype=complex)
    A[:d, :d] = twoK + 2j * bath.M_i
    A[:d, d:] = 2j * bath.M
    A[d:, :d] = -2j * bath.M.T
    A[d:, d:] = twoK - 2j * bath.M_i
    A0 = 2 * np.trace(bath.M_r)
    scale = max(np.abs(A).max(), 1.0)
    J = skew_unit(model.n)
    asym = np.abs(A + A.T).max()
    conj_res = np.abs(A.conj() - J @ A @ J).max()
    if asym > tol_build * scale or conj_res > tol_build * scale:
        raise BuildInvariantViolated(
            f"structure matrix invariants failed: |A+A^T|={asym:.3e}, "
            f"|conj(A)-JAJ|={conj_res:.3e} at scale {scale:.3e}"
        )
    return StructureMatrix(_frozen(A), float(A0))


def odd_sector_structure_matrix(sm: StructureMatrix) -> np.ndarray:
    """Driving-flipped structure matrix (sigma^3 (x) 1) A (sigma^3 (x) 1).

    The quadratic form with this matrix generates the Liouvillean on the
    odd-parity operator sector; it is similar to A, so all spectral data agree.
    """
    d = sm.A.shape[0] // 2
    A = sm.A.copy()
    A[:d, d:] *= -1
    A[d:, :d] *= -1
    return A
