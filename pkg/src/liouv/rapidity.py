"""Numerical Jordan canonical form of the real matrix X and its stability data.

The rapidities are the eigenvalues of X = 2K + 2M_r.  A numerical Jordan form
is ill-posed, so the decomposition is tolerance-parameterized: eigenvalues are
clustered, block sizes come from an SVD rank staircase of powers of
(X - beta 1), and generalized-eigenvector chains are built top-down from seeds
in ker(X-beta)^l that are independent of ker(X-beta)^(l-1) and of the taller
chains.  Borderline rank decisions are surfaced via an ill_conditioned flag
rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalInvariantViolated, StabilityViolated

TOL_CLUSTER = 1e-7
TOL_RANK = 1e-9
TOL_STABILITY = 1e-8


@dataclass(frozen=True)
class JordanBlockDescriptor:
    """One Jordan block: rapidity, size, column offset of its chain in P.

    j, k are 1-based: j indexes the distinct rapidity in the deterministic
    sort order, k the block within that rapidity.
    """

    rapidity: complex
    size: int
    chain_start: int
    j: int
    k: int


@dataclass(frozen=True)
class JordanForm:
    """X = P Delta P^-1 with Delta assembled from `blocks`.

    conjugate_pairing maps each block index to the block of the conjugate
    rapidity (itself for real rapidities); paired chains are entrywise
    conjugate by construction.
    """

    P: np.ndarray
    P_inv: np.ndarray
    blocks: tuple[JordanBlockDescriptor, ...]
    conjugate_pairing: tuple[tuple[int, int], ...]
    x_norm: float
    cond_P: float
    reconstruction_residual: float
    ill_conditioned: bool

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    def delta(self) -> np.ndarray:
        d = self.dim
        out = np.zeros((d, d), dtype=complex)
        for b in self.blocks:
            s = b.chain_start
            for i in range(b.size):
                out[s + i, s + i] = b.rapidity
                if i + 1 < b.size:
                    out[s + i, s + i + 1] = 1.0
        return out

    def rapidities(self) -> list[tuple[int, complex, list[int]]]:
        """Distinct rapidities as (j, beta, block indices), in sort order."""
        groups: list[tuple[int, complex, list[int]]] = []
        for idx, b in enumerate(self.blocks):
            if groups and groups[-1][0] == b.j:
                groups[-1][2].append(idx)
            else:
                groups.append((b.j, b.rapidity, [idx]))
        return groups

    def pairing_map(self) -> dict[int, int]:
        return dict(self.conjugate_pairing)


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    """Transitive-closure clustering of complex values within tol."""
    m = len(values)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(values[i] - values[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _svd_rank(mat: np.ndarray, threshold: float) -> tuple[int, bool]:
    """Rank by singular-value thresholding; flags borderline decisions."""
    s = np.linalg.svd(mat, compute_uv=False)
    if not len(s) or s[0] == 0.0:
        return 0, False
    borderline = bool(np.any((s > threshold / 10) & (s < threshold * 10)))
    return int(np.sum(s > threshold)), borderline


def _nullspace(mat: np.ndarray, nullity: int) -> np.ndarray:
    """Orthonormal basis (columns) of the nullspace, given its known dimension."""
    _, _, vh = np.linalg.svd(mat)
    if nullity == 0:
        return np.zeros((mat.shape[1], 0), dtype=mat.dtype)
    return vh[-nullity:, :].conj().T


def _block_sizes_from_nullities(nullities: list[int]) -> list[int]:
    """Block sizes (with multiplicity) from the nullity staircase nu_1 <= nu_2 <= ..."""
    nu = [0] + nullities
    nu.append(nu[-1])
    sizes = []
    for p in range(1, len(nu) - 1):
        count = 2 * nu[p] - nu[p - 1] - nu[p + 1]
        if count < 0:
            raise InternalInvariantViolated("rank staircase is not a Jordan profile")
        sizes.extend([p] * count)
    return sorted(sizes, reverse=True)


def _chains_for_rapidity(X: np.ndarray, beta: complex, multiplicity: int, tol_rank: float):
    """Block sizes and generalized-eigenvector chains for one clustered rapidity.

    Returns (sizes, chains, borderline) where chains[i] is a matrix whose
    columns v_1..v_l satisfy X v_1 = beta v_1, X v_i = beta v_i + v_{i-1}.
    """
    d = X.shape[0]
    real_case = abs(complex(beta).imag) == 0.0
    if real_case:
        Y = X - float(np.real(beta)) * np.eye(d)
    else:
        Y = X - complex(beta) * np.eye(d, dtype=complex)

    x_norm = float(np.linalg.norm(X, 2))
    y_norm = float(np.linalg.norm(Y, 2))
    nullities = []
    borderline = False
    power = np.eye(d, dtype=Y.dtype)
    powers = []
    for k in range(1, multiplicity + 1):
        power = power @ Y
        powers.append(power)
        # noise floor of the k-th power: one factor carries the absolute
        # O(||X||) uncertainty of the clustered shift, the rest scale as ||Y||
        threshold = tol_rank * max(y_norm, x_norm, 1e-300) * max(y_norm, 1e-300) ** (k - 1)
        r, bl = _svd_rank(power, threshold)
        borderline = borderline or bl
        nullities.append(d - r)
        if nullities[-1] >= multiplicity:
            break
    if nullities[-1] != multiplicity:
        raise InternalInvariantViolated(
            f"staircase nullity {nullities[-1]} != algebraic multiplicity "
            f"{multiplicity} for rapidity {beta}; tolerances inconsistent"
        )
    sizes = _block_sizes_from_nullities(nullities)

    smax = len(nullities)
    nullbases = {k: _nullspace(powers[k - 1], nullities[k - 1]) for k in range(1, smax + 1)}
    per_size = {k: sizes.count(k) for k in set(sizes)}

    chains: list[np.ndarray] = []  # each (d, length), columns v_1..v_length
    eps = np.finfo(float).eps
    for k in range(smax, 0, -1):
        want = per_size.get(k, 0)
        if want == 0:
            continue
        # height-k members of the taller chains already built (column k-1 is v_k)
        height_k = [c[:, k - 1] for c in chains if c.shape[1] >= k]
        Qk = nullbases[k]
        obstacles = []
        if k > 1 and nullbases[k - 1].shape[1]:
            obstacles.append(nullbases[k - 1])
        if height_k:
            obstacles.append(np.column_stack(height_k))
        if obstacles:
            B = np.column_stack(obstacles)
            coords = Qk.conj().T @ B
            u, s, _ = np.linalg.svd(coords, full_matrices=False)
            rank_b = int(np.sum(s > max(s[0], 1.0) * eps * max(coords.shape) * 10)) if len(s) else 0
            QB = u[:, :rank_b]
            proj = np.eye(Qk.shape[1], dtype=Qk.dtype) - QB @ QB.conj().T
        else:
            proj = np.eye(Qk.shape[1], dtype=Qk.dtype)
        uu, ss, _ = np.linalg.svd(proj)
        seeds = Qk @ uu[:, :want]
        for t in range(want):
            seed = seeds[:, t]
            vecs = [seed]
            for _ in range(k - 1):
                vecs.append(Y @ vecs[-1])
            vecs.reverse()  # v_1 (proper) first
            chain = np.column_stack(vecs)
            norm1 = np.linalg.norm(chain[:, 0])
            if norm1 < 1e3 * eps * max(1.0, np.linalg.norm(seed)):
                borderline = True
                norm1 = max(norm1, np.finfo(float).tiny)
            chains.append(chain / norm1)
    # order chains by descending length to match `sizes`
    chains.sort(key=lambda c: -c.shape[1])
    return sizes, chains, borderline


def jordan_decompose(
    X: np.ndarray,
    tol_cluster: float = TOL_CLUSTER,
    tol_rank: float = TOL_RANK,
) -> JordanForm:
    """Jordan canonical form X = P Delta P^-1 of a real square matrix.

    Eigenvalues within tol_cluster * ||X||_2 are merged into one rapidity.
    Real rapidities get real chains; non-real rapidities are computed for
    Im beta > 0 only and mirrored by conjugation, so conjugate pairing holds
    by construction.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    if X.shape != (d, d):
        raise ValueError("X must be square")
    x_norm = float(np.linalg.norm(X, 2)) if d else 0.0
    scale = max(x_norm, 1.0)

    eigvals = np.linalg.eigvals(X)
    clusters = _cluster(eigvals, tol_cluster * scale)
    means = [complex(np.mean(eigvals[idx])) for idx in clusters]

    ill = False
    # inter-cluster separation close to the merge threshold is itself fragile
    for i in range(len(means)):
        for j in range(i + 1, len(means)):
            if abs(means[i] - means[j]) < 10 * tol_cluster * scale:
                ill = True

    entries = []  # (beta, sizes, chains) for real and Im>0 representatives
    mirrored = []  # (beta_conj, sizes, conj chains)
    seen_pos = {}
    for idx, mean in zip(clusters, means):
        if abs(mean.imag) <= tol_cluster * scale:
            beta = complex(mean.real)
            sizes, chains, bl = _chains_for_rapidity(X, beta.real, len(idx), tol_rank)
            chains = [c.astype(complex) for c in chains]
            entries.append((beta, sizes, chains))
            ill = ill or bl
        elif mean.imag > 0:
            beta = mean
            sizes, chains, bl = _chains_for_rapidity(X, beta, len(idx), tol_rank)
            entries.append((beta, sizes, chains))
            seen_pos[beta] = (sizes, chains)
            mirrored.append((beta.conjugate(), sizes, [c.conj() for c in chains]))
            ill = ill or bl
        else:
            continue  # handled by the conjugate representative
    # sanity: every Im<0 cluster must have had an Im>0 partner of equal size
    n_neg = sum(1 for m in means if m.imag < -tol_cluster * scale)
    if n_neg != len(mirrored):
        raise InternalInvariantViolated("conjugate cluster pairing failed")

    entries.extend(mirrored)

    flat = []  # (beta, size, chain, pair_token)
    for beta, sizes, chains in entries:
        for size, chain in zip(sizes, chains):
            flat.append([beta, size, chain])
    order = sorted(
        range(len(flat)),
        key=lambda i: (flat[i][0].real, flat[i][0].imag, -flat[i][1]),
    )

    blocks = []
    columns = []
    start = 0
    j_label = 0
    k_label = 0
    prev_beta = None
    for rank_pos, i in enumerate(order):
        beta, size, chain = flat[i]
        if prev_beta is None or beta != prev_beta:
            j_label += 1
            k_label = 1
            prev_beta = beta
        else:
            k_label += 1
        blocks.append(JordanBlockDescriptor(beta, size, start, j_label, k_label))
        columns.append(chain)
        start += size
    if start != d:
        raise InternalInvariantViolated(f"block sizes sum to {start}, expected {d}")

    by_key: dict[tuple[complex, int], list[int]] = {}
    for idx, b in enumerate(blocks):
        by_key.setdefault((b.rapidity, b.size), []).append(idx)
    pairing = []
    for (beta, size), idxs in by_key.items():
        partners = by_key.get((beta.conjugate(), size))
        if partners is None or len(partners) != len(idxs):
            raise InternalInvariantViolated("conjugate pairing incomplete")
        pairing.extend(zip(idxs, partners))
    pairing.sort()

    P = np.column_stack(columns) if columns else np.zeros((d, 0))
    cond_P = float(np.linalg.cond(P))
    P_inv = np.linalg.inv(P)
    P.setflags(write=False)
    P_inv.setflags(write=False)

    delta = np.zeros((d, d), dtype=complex)
    for b in blocks:
        s = b.chain_start
        for i in range(b.size):
            delta[s + i, s + i] = b.rapidity
            if i + 1 < b.size:
                delta[s + i, s + i + 1] = 1.0
    recon = np.abs(P @ delta @ P_inv - X).max() / max(np.abs(X).max(), 1.0)

    return JordanForm(
        P=P,
        P_inv=P_inv,
        blocks=tuple(blocks),
        conjugate_pairing=tuple(pairing),
        x_norm=x_norm,
        cond_P=cond_P,
        reconstruction_residual=float(recon),
        ill_conditioned=bool(ill),
    )


@dataclass(frozen=True)
class RapidityClass:
    j: int
    rapidity: complex
    kind: str  # "stable" | "zero" | "imaginary"
    block_sizes: tuple[int, ...]


@dataclass(frozen=True)
class StabilityReport:
    min_re: float
    classes: tuple[RapidityClass, ...]
    tol: float

    @property
    def zero(self) -> tuple[RapidityClass, ...]:
        return tuple(c for c in self.classes if c.kind == "zero")

    @property
    def imaginary(self) -> tuple[RapidityClass, ...]:
        return tuple(c for c in self.classes if c.kind == "imaginary")

    @property
    def strictly_stable(self) -> tuple[RapidityClass, ...]:
        return tuple(c for c in self.classes if c.kind == "stable")

    @property
    def all_strictly_stable(self) -> bool:
        return all(c.kind == "stable" for c in self.classes)


def stability_check(jf: JordanForm, tol: float = TOL_STABILITY) -> StabilityReport:
    """Classify rapidities and enforce the two stability guarantees.

    For X + X^T >= 0 every rapidity must satisfy Re beta >= 0 and every
    rapidity on the imaginary axis must have only trivial Jordan blocks;
    violations raise StabilityViolated (bad bath matrix or tolerances).
    Thresholds are relative to ||X||_2.
    """
    scale = max(jf.x_norm, np.finfo(float).tiny)
    classes = []
    min_re = np.inf
    for j, beta, idxs in jf.rapidities():
        sizes = tuple(jf.blocks[i].size for i in idxs)
        min_re = min(min_re, beta.real)
        if beta.real < -tol * scale:
            raise StabilityViolated(
                f"rapidity {beta} has negative real part beyond tolerance"
            )
        if abs(beta.real) <= tol * scale:
            kind = "zero" if abs(beta.imag) <= tol * scale else "imaginary"
            if any(s > 1 for s in sizes):
                raise StabilityViolated(
                    f"rapidity {beta} on the imaginary axis has a Jordan block "
                    f"of size {max(sizes)} > 1"
                )
        else:
            kind = "stable"
        classes.append(RapidityClass(j, beta, kind, sizes))
    if not classes:
        min_re = 0.0
    return StabilityReport(float(min_re), tuple(classes), tol)


def spectral_gap(jf: JordanForm) -> float:
    """2 min_j Re beta_j, clamped at zero (requires a passed stability check)."""
    if not jf.blocks:
        return 0.0
    return max(0.0, 2 * min(b.rapidity.real for b in jf.blocks))
