"""Continuous Lyapunov equation X^T Z + Z X = M_i for antisymmetric real Z.

The regular path solves the dense vectorized system directly.  When rapidity
pairs sum to (numerically) zero the system is singular and the solve switches
to the Jordan basis, where the operator Delta^T (x) 1 + 1 (x) Delta^T is lower
triangular: forward substitution, with each vanishing diagonal entry checked
against the vanishing of its right-hand side (the omega coefficients, which
are analytically zero for a genuine PSD bath) and the corresponding free
coefficient fixed to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentSingularSystem,
    NontrivialImaginaryBlock,
)
from .rapidity import JordanForm

TOL_LYAP = 1e-8
TOL_OMEGA = 1e-8


@dataclass(frozen=True)
class ZeroModeDiagnostics:
    """Solvability certificate for the zero-rapidity null space: K must vanish, Q >= 0."""

    positions: tuple[int, ...]
    K: np.ndarray
    Q: np.ndarray


@dataclass(frozen=True)
class ImaginaryPairDiagnostics:
    """Solvability certificate for a conjugate imaginary rapidity pair +-ib."""

    b: float
    positions_plus: tuple[int, ...]
    positions_minus: tuple[int, ...]
    K: np.ndarray
    Q_plus: np.ndarray
    Q_minus: np.ndarray


@dataclass(frozen=True)
class DrivingSolution:
    """Antisymmetric real solution Z with uniqueness and residual metadata."""

    Z: np.ndarray
    unique: bool
    free_parameter_count: int
    residual: float
    omega_checks: tuple[tuple[int, float], ...]
    method: str
    asymmetry_preprojection: float
    imag_residue: float
    zero_diagnostics: ZeroModeDiagnostics | None = None
    imaginary_diagnostics: tuple[ImaginaryPairDiagnostics, ...] = ()


def lyapunov_residual(X: np.ndarray, Z: np.ndarray, M_i: np.ndarray) -> float:
    """max |X^T Z + Z X - M_i|."""
    return float(np.abs(X.T @ Z + Z @ X - M_i).max())


def _delta_diagonal(jf: JordanForm) -> tuple[np.ndarray, np.ndarray]:
    """Per-position rapidity along the diagonal of Delta, and the chain links:
    link[i] True when Delta[i-1, i] = 1 (position i continues a chain)."""
    d = jf.dim
    beta = np.zeros(d, dtype=complex)
    link = np.zeros(d, dtype=bool)
    for b in jf.blocks:
        for i in range(b.size):
            beta[b.chain_start + i] = b.rapidity
            if i > 0:
                link[b.chain_start + i] = True
    return beta, link


def _pair_diagnostics(X, M_i, jf, tol, scale):
    """K and Q matrices certifying solvability at the singular rapidities.

    K collects the driving matrix elements between null-space eigenvectors
    and must vanish whenever the bath matrix is PSD; Q is the bath quadratic
    form reduced to the same vectors (PSD, equal to +-iK).
    """
    Mr = (X + X.T) / 4
    zero_diag = None
    imag_diag = []
    groups = jf.rapidities()
    for j, beta, idxs in groups:
        if abs(beta) <= tol * scale:
            pos = tuple(jf.blocks[i].chain_start for i in idxs)
            U = jf.P[:, list(pos)].real
            K = U.T @ M_i @ U
            Q = U.T @ (Mr + 1j * M_i) @ U
            zero_diag = ZeroModeDiagnostics(pos, K, Q)
        elif abs(beta.real) <= tol * scale and beta.imag > 0:
            partner = next(
                (jp, idxp) for jp, bp, idxp in groups if abs(bp - beta.conjugate()) <= tol * scale
            )
            pos_p = tuple(jf.blocks[i].chain_start for i in idxs)
            pos_m = tuple(jf.blocks[i].chain_start for i in partner[1])
            Up = jf.P[:, list(pos_p)]
            Um = jf.P[:, list(pos_m)]
            K = Up.T @ M_i @ Um
            Qp = Up.T @ (Mr + 1j * M_i) @ Um
            Qm = Up.T @ (Mr - 1j * M_i) @ Um
            imag_diag.append(
                ImaginaryPairDiagnostics(beta.imag, pos_p, pos_m, K, Qp, Qm)
            )
    return zero_diag, tuple(imag_diag)


def solve_lyapunov(
    X: np.ndarray,
    M_i: np.ndarray,
    jf: JordanForm,
    tol: float = TOL_LYAP,
    tol_omega: float = TOL_OMEGA,
    method: str = "auto",
) -> DrivingSolution:
    """Solve X^T Z + Z X = M_i for real antisymmetric Z.

    method: "auto" picks the dense vectorized solve unless some pair of
    rapidities sums to ~0 (relative tol * ||X||_2), in which case the
    Jordan-basis forward substitution is used; "dense"/"jordan" force a path.
    The Jordan path zeroes every free coefficient, counts the independent ones
    (unordered off-diagonal pairs), and verifies the omega conditions.
    """
    X = np.asarray(X, dtype=float)
    M_i = np.asarray(M_i, dtype=float)
    d = X.shape[0]
    scale = max(jf.x_norm, np.finfo(float).tiny)
    beta, link = _delta_diagonal(jf)
    sums = np.abs(beta[:, None] + beta[None, :])
    has_singular_pair = bool((sums <= tol * scale).any())

    if method == "auto":
        method = "jordan" if has_singular_pair else "dense"
    if method == "dense" and has_singular_pair:
        raise np.linalg.LinAlgError(
            "dense path requested but the Lyapunov operator is singular"
        )

    if method == "dense":
        op = np.kron(X.T, np.eye(d)) + np.kron(np.eye(d), X.T)
        z = np.linalg.solve(op, M_i.reshape(-1))
        Z_raw = z.reshape(d, d)
        asym = float(np.abs(Z_raw + Z_raw.T).max())
        Z = (Z_raw - Z_raw.T) / 2
        Z.setflags(write=False)
        return DrivingSolution(
            Z=Z,
            unique=True,
            free_parameter_count=0,
            residual=lyapunov_residual(X, Z, M_i),
            omega_checks=(),
            method="dense",
            asymmetry_preprojection=asym,
            imag_residue=0.0,
        )

    # Jordan-basis path
    F = jf.P.T @ M_i @ jf.P
    f_scale = max(np.abs(F).max(), np.finfo(float).tiny)
    G = np.zeros((d, d), dtype=complex)
    omega_checks = []
    free_pairs = set()
    for i in range(d):
        for j in range(d):
            s = F[i, j]
            if link[i]:
                s -= G[i - 1, j]
            if link[j]:
                s -= G[i, j - 1]
            denom = beta[i] + beta[j]
            if abs(denom) > tol * scale:
                G[i, j] = s / denom
            else:
                in_big_i = link[i] or (i + 1 < d and link[i + 1])
                in_big_j = link[j] or (j + 1 < d and link[j + 1])
                if in_big_i or in_big_j:
                    raise NontrivialImaginaryBlock(
                        "vanishing diagonal inside a nontrivial Jordan block"
                    )
                omega_checks.append((i * d + j, float(abs(s))))
                if abs(s) > tol_omega * f_scale:
                    raise InconsistentSingularSystem(
                        f"omega_{i * d + j} = {abs(s):.3e} does not vanish "
                        f"(relative to |P^T M_i P| = {f_scale:.3e}); the bath "
                        "matrix cannot be PSD or tolerances are inconsistent"
                    )
                G[i, j] = 0.0
                if i != j:
                    free_pairs.add((min(i, j), max(i, j)))

    Z_raw = jf.P_inv.T @ G @ jf.P_inv
    imag_residue = float(np.abs(Z_raw.imag).max())
    Z_raw = Z_raw.real
    asym = float(np.abs(Z_raw + Z_raw.T).max())
    Z = (Z_raw - Z_raw.T) / 2
    Z.setflags(write=False)

    zero_diag, imag_diag = _pair_diagnostics(X, M_i, jf, tol, scale)
    count = len(free_pairs)
    return DrivingSolution(
        Z=Z,
        unique=count == 0,
        free_parameter_count=count,
        residual=lyapunov_residual(X, Z, M_i),
        omega_checks=tuple(omega_checks),
        method="jordan",
        asymmetry_preprojection=asym,
        imag_residue=imag_residue,
        zero_diagnostics=zero_diag,
        imaginary_diagnostics=imag_diag,
    )
