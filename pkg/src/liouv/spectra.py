"""Many-body Liouvillean spectrum, NESS classification, steady-state covariance.

Every eigenvalue is an integer combination lambda_m = -2 sum m_{j,k} beta_j
with m_{j,k} in {0..l_{j,k}}; the invariant subspace for m has dimension
prod C(l_{j,k}, m_{j,k}) and its largest Jordan block is
1 + sum (l_{j,k} - m_{j,k}) m_{j,k}.  The NESS is unique iff every rapidity
has a strictly positive real part; otherwise the zero and imaginary rapidities
generate Hermitian trace-zero stationary directions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import SpectrumTooLarge
from .rapidity import JordanForm, StabilityReport, spectral_gap, stability_check

DEFAULT_LIMIT = 10**6
TOL_MERGE = 1e-8
TOL_NESS = 1e-8


@dataclass(frozen=True)
class LiouvilleanEigenvalue:
    """One occupation vector's eigenvalue and invariant-subspace data."""

    lam: complex
    occupation: tuple[tuple[tuple[int, int], int], ...]  # ((j, k), m) pairs
    subspace_dim: int
    max_jordan_block: int

    def occupation_map(self) -> dict[tuple[int, int], int]:
        return dict(self.occupation)


@dataclass(frozen=True)
class MergedEigenvalue:
    """Numerically coincident eigenvalues, dims summed.

    max_jordan_block is the max over contributors: for collisions across
    different occupation vectors it is only a lower bound on the true block
    size (flagged by lower_bound).
    """

    lam: complex
    total_dim: int
    max_jordan_block: int
    contributors: int
    lower_bound: bool


@dataclass(frozen=True)
class SpectrumEnumeration:
    entries: tuple[LiouvilleanEigenvalue, ...]
    merged: tuple[MergedEigenvalue, ...]
    total_dim: int


def enumerate_spectrum(
    jf: JordanForm,
    limit: int = DEFAULT_LIMIT,
    tol_merge: float = TOL_MERGE,
) -> SpectrumEnumeration:
    """All occupation vectors, sorted by (Re, Im, occupation), plus a merged view.

    Raises SpectrumTooLarge when prod(l_{j,k}+1) exceeds `limit`; the gap and
    stationary dimension remain available without full enumeration.
    """
    blocks = jf.blocks
    count = math.prod(b.size + 1 for b in blocks)
    if count > limit:
        raise SpectrumTooLarge(
            f"{count} occupation vectors exceed the limit {limit}"
        )
    n2 = jf.dim
    entries = []
    for occ in itertools.product(*(range(b.size + 1) for b in blocks)):
        lam = -2 * sum(m * b.rapidity for m, b in zip(occ, blocks))
        dim = math.prod(math.comb(b.size, m) for m, b in zip(occ, blocks))
        blk = 1 + sum((b.size - m) * m for m, b in zip(occ, blocks))
        entries.append(
            LiouvilleanEigenvalue(
                lam=complex(lam),
                occupation=tuple(((b.j, b.k), m) for b, m in zip(blocks, occ)),
                subspace_dim=dim,
                max_jordan_block=blk,
            )
        )
    entries.sort(key=lambda e: (e.lam.real, e.lam.imag, tuple(m for _, m in e.occupation)))
    total = sum(e.subspace_dim for e in entries)
    if total != 2**n2:
        raise AssertionError("dimension sum rule violated")  # unreachable

    scale = max((abs(e.lam) for e in entries), default=0.0)
    tol = tol_merge * max(scale, 1.0)
    merged = []
    group: list[LiouvilleanEigenvalue] = []
    for e in entries:
        if group and abs(e.lam - group[-1].lam) > tol:
            merged.append(_merge(group))
            group = []
        group.append(e)
    if group:
        merged.append(_merge(group))
    return SpectrumEnumeration(tuple(entries), tuple(merged), total)


def _merge(group: list[LiouvilleanEigenvalue]) -> MergedEigenvalue:
    lam = sum(e.lam * e.subspace_dim for e in group) / sum(e.subspace_dim for e in group)
    return MergedEigenvalue(
        lam=lam,
        total_dim=sum(e.subspace_dim for e in group),
        max_jordan_block=max(e.max_jordan_block for e in group),
        contributors=len(group),
        lower_bound=len(group) > 1,
    )


@dataclass(frozen=True)
class NessReport:
    """Uniqueness of the steady state and the degenerate-direction descriptors.

    zero_rapidity_modes lists (j, k) of stationary Hermitian trace-zero
    directions b'_{j,k,1}|NESS>, imaginary_pair_modes the Hermitian +-
    combinations for conjugate imaginary pairs.  covariance is 1 + 4iZ once
    attached; covariance_unique mirrors the Lyapunov uniqueness flag.
    """

    unique: bool
    gap: float
    zero_rapidity_modes: tuple[tuple[int, int], ...]
    imaginary_pair_modes: tuple[tuple[int, int, int, int, str], ...]
    stationary_dim: int
    covariance: np.ndarray | None = None
    covariance_unique: bool | None = None
    physicality_margin: float | None = None


def classify_ness(
    jf: JordanForm,
    tol: float = TOL_NESS,
    stability: StabilityReport | None = None,
    enumeration_cap: int = 2**22,
) -> NessReport:
    """Uniqueness iff all rapidities lie strictly off the imaginary axis.

    stationary_dim counts occupation vectors with lambda_m = 0, enumerated
    over the zero/imaginary rapidities only (all their blocks are trivial, so
    occupations are 0/1); strictly stable modes must stay empty.
    """
    report = stability if stability is not None else stability_check(jf, tol)
    zero_modes = []
    imag_modes = []
    axis_betas = []
    for cls in report.classes:
        blocks_jk = [(b.j, b.k) for b in jf.blocks if b.j == cls.j]
        if cls.kind == "zero":
            zero_modes.extend(blocks_jk)
            axis_betas.extend([0.0 + 0.0j] * len(blocks_jk))
        elif cls.kind == "imaginary":
            axis_betas.extend([cls.rapidity] * len(blocks_jk))
            if cls.rapidity.imag > 0:
                partner = next(
                    c for c in report.classes
                    if c.kind == "imaginary"
                    and abs(c.rapidity - cls.rapidity.conjugate()) <= report.tol * max(jf.x_norm, 1.0)
                )
                partner_blocks = [(b.j, b.k) for b in jf.blocks if b.j == partner.j]
                for (j, k) in blocks_jk:
                    for (jp, kp) in partner_blocks:
                        imag_modes.append((j, jp, k, kp, "+"))
                        imag_modes.append((j, jp, k, kp, "-"))

    if 2 ** len(axis_betas) > enumeration_cap:
        raise SpectrumTooLarge(
            f"{len(axis_betas)} axis modes exceed the stationary-dim enumeration cap"
        )
    scale = max(jf.x_norm, 1.0)
    stationary = 0
    for bits in itertools.product((0, 1), repeat=len(axis_betas)):
        s = sum(m * b for m, b in zip(bits, axis_betas))
        if abs(s) <= tol * scale:
            stationary += 1

    return NessReport(
        unique=report.all_strictly_stable,
        gap=spectral_gap(jf),
        zero_rapidity_modes=tuple(zero_modes),
        imaginary_pair_modes=tuple(imag_modes),
        stationary_dim=stationary,
    )


def ness_covariance(Z: np.ndarray) -> np.ndarray:
    """Quadratic NESS correlators C_{jk} = tr(w_j w_k rho) = delta_{jk} + 4i (Z^T)_{jk}.

    The transpose matters: expanding the Majorana maps in master modes and
    using the vacuum conditions gives C = P^{-T} [(1+4iZ) P]^T = 1 - 4iZ,
    verified against the brute-force steady state.
    """
    Z = np.asarray(Z)
    return np.eye(Z.shape[0]) + 4j * Z.T


def physicality_margin(Z: np.ndarray) -> float:
    """Largest singular value of 4Z; must be <= 1 for a fermionic covariance."""
    s = np.linalg.svd(4 * np.asarray(Z), compute_uv=False)
    return float(s.max()) if len(s) else 0.0


def attach_covariance(report: NessReport, Z: np.ndarray, unique_Z: bool) -> NessReport:
    """Fill the covariance fields of a NESS report from a Lyapunov solution."""
    from dataclasses import replace

    return replace(
        report,
        covariance=ness_covariance(Z),
        covariance_unique=unique_Z,
        physicality_margin=physicality_margin(Z),
    )
