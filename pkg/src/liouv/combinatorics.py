"""Exact combinatorics of Jordan structure on tensor and Fock spaces.

Everything here is integer arithmetic: restricted binomial symbols, the Jordan
decomposition of a sum of Jordan blocks on a tensor product, the seed vectors
of its generalized-eigenvector chains, and the Jordan structure of the
many-body nilpotent hopping map restricted to a fixed particle number,
verified against exact rank staircases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from ._intlinalg import (
    IntMatrix,
    blocks_from_staircase,
    int_matmul,
    int_rank,
    nilpotent_staircase,
)
from .errors import IdentityViolated, TooLarge

DEFAULT_DIMENSION_LIMIT = 200_000


@dataclass(frozen=True)
class JordanBlockMultiset:
    """Multiset of Jordan block sizes, as ((size, count), ...) sorted by size desc."""

    blocks: tuple[tuple[int, int], ...]

    @property
    def total_dimension(self) -> int:
        return sum(size * count for size, count in self.blocks)

    @property
    def block_count(self) -> int:
        return sum(count for _, count in self.blocks)

    @property
    def largest(self) -> int:
        return self.blocks[0][0] if self.blocks else 0

    def __str__(self) -> str:
        return " ".join(
            " ".join([str(size)] * count) for size, count in self.blocks
        )


@lru_cache(maxsize=None)
def restricted_binomial(l: int, m: int, r: int) -> int:
    """Number of m-subsets of {1..l} whose weight exceeds the minimum by exactly r.

    Computed from the recursion (l m)_r = (l-1 m)_r + (l-1 m-1)_{r-l+m} with
    base (0 m)_r = delta_{m,0} delta_{r,0}; exact integers.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    if m < 0 or r < 0 or m > l or r > m * (l - m):
        return 0
    if l == 0:
        return 1 if (m == 0 and r == 0) else 0
    return restricted_binomial(l - 1, m, r) + restricted_binomial(l - 1, m - 1, r - l + m)


def restricted_binomial_row(l: int, m: int) -> list[int]:
    """All values (l m)_r for r = 0..m(l-m)."""
    return [restricted_binomial(l, m, r) for r in range(m * (l - m) + 1)]


def tensor_sum_blocks(k: int, l: int) -> JordanBlockMultiset:
    """Jordan blocks of Delta_k(a) (+) Delta_l(b) on the tensor product.

    Sizes k+l-1, k+l-3, ..., |k-l|+1, one block each (eigenvalue a+b).
    """
    if k < 1 or l < 1:
        raise ValueError("block sizes must be >= 1")
    sizes = [k + l - 2 * r + 1 for r in range(1, min(k, l) + 1)]
    return JordanBlockMultiset(tuple((s, 1) for s in sizes))


def delta_matrix(size: int) -> IntMatrix:
    """Nilpotent upper-shift Jordan block of the given size, exact integers."""
    return [[1 if j == i + 1 else 0 for j in range(size)] for i in range(size)]


def tensor_sum_matrix(k: int, l: int) -> IntMatrix:
    """Delta_k (x) 1_l + 1_k (x) Delta_l as an exact kl x kl integer matrix."""
    dim = k * l
    mat = [[0] * dim for _ in range(dim)]
    for i in range(k):
        for j in range(l):
            row = i * l + j
            if i + 1 < k:
                mat[row][(i + 1) * l + j] += 1
            if j + 1 < l:
                mat[row][i * l + (j + 1)] += 1
    return mat


def _comb0(n: int, k: int) -> int:
    """Binomial coefficient with the out-of-range-is-zero convention."""
    return math.comb(n, k) if 0 <= k <= n else 0


def seed_coefficients(k: int, l: int, r: int) -> list[int]:
    """Coefficients c_q, q=1..r, of the r-th chain seed on C^k (x) C^l.

    c_q = (-1)^(r-q) C(k'+r-q, r-q) C(l'+q-1, q-1) with k'=k-r, l'=l-r.  The
    homogeneous identities making the chain terminate after k+l-2r+1 steps and
    the non-termination condition one step earlier are both checked exactly;
    a failure would falsify the implementation, not the input.
    """
    if not (1 <= r <= min(k, l)):
        raise ValueError("need 1 <= r <= min(k, l)")
    kp, lp = k - r, l - r
    c = [(-1) ** (r - q) * math.comb(kp + r - q, r - q) * math.comb(lp + q - 1, q - 1)
         for q in range(1, r + 1)]
    for j in range(1, r):
        s = sum(_comb0(kp + lp + 1, lp - j + q) * c[q - 1] for q in range(1, r + 1))
        if s != 0:
            raise IdentityViolated(f"termination identity failed at j={j} for (k,l,r)=({k},{l},{r})")
    if not any(
        sum(_comb0(kp + lp, lp - j + q) * c[q - 1] for q in range(1, r + 1)) != 0
        for j in range(1, r + 1)
    ):
        raise IdentityViolated(f"chain-length identity failed for (k,l,r)=({k},{l},{r})")
    return c


def seed_vector(k: int, l: int, r: int) -> list[int]:
    """The r-th chain seed as an exact vector on the |i,j> basis (i*l+j indexing)."""
    c = seed_coefficients(k, l, r)
    vec = [0] * (k * l)
    for q in range(1, r + 1):
        # basis vector |k-q+1, l-r+q> with 1-based labels
        i, j = k - q, l - r + q - 1
        vec[i * l + j] = c[q - 1]
    return vec


def _subset_states(l: int, m: int) -> list[tuple[int, ...]]:
    """Occupation tuples with m particles on l sites, ordered by (weight, lex)."""
    states = []
    for sites in itertools.combinations(range(l), m):
        nu = [0] * l
        for s in sites:
            nu[s] = 1
        states.append(tuple(nu))
    return sorted(states, key=lambda nu: (weight(nu), nu))


def weight(nu: tuple[int, ...]) -> int:
    """Weight of an occupation tuple: potential energy above the minimal packing."""
    m = sum(nu)
    return sum((k + 1) * v for k, v in enumerate(nu)) - m * (m + 1) // 2


def nilpotent_map_matrix(l: int, m: int, limit: int = DEFAULT_DIMENSION_LIMIT) -> IntMatrix:
    """Matrix of the hopping map sum_k b'_{k+1} b_k on the m-particle sector.

    Basis: occupation tuples ordered by (weight, lexicographic).  All entries
    are 0 or 1; the fermionic signs of the adjacent hop cancel identically
    (the map raises the weight by exactly 1).
    """
    if not (0 <= m <= l):
        raise ValueError("need 0 <= m <= l")
    dim = math.comb(l, m)
    if dim > limit:
        raise TooLarge(f"sector dimension C({l},{m}) = {dim} exceeds limit {limit}")
    states = _subset_states(l, m)
    index = {nu: i for i, nu in enumerate(states)}
    mat = [[0] * dim for _ in range(dim)]
    for col, nu in enumerate(states):
        for k in range(l - 1):
            if nu[k] == 1 and nu[k + 1] == 0:
                hopped = list(nu)
                hopped[k], hopped[k + 1] = 0, 1
                mat[index[tuple(hopped)]][col] = 1
    return mat


def _level_matrices(l: int, m: int) -> tuple[list[int], list[IntMatrix]]:
    """Dimensions of the weight levels and the hop blocks B_r: level r -> r+1."""
    states = _subset_states(l, m)
    rmax = m * (l - m)
    level_states: list[list[tuple[int, ...]]] = [[] for _ in range(rmax + 1)]
    for nu in states:
        level_states[weight(nu)].append(nu)
    dims = [len(s) for s in level_states]
    blocks = []
    for r in range(rmax):
        idx = {nu: i for i, nu in enumerate(level_states[r + 1])}
        b = [[0] * dims[r] for _ in range(dims[r + 1])]
        for col, nu in enumerate(level_states[r]):
            for k in range(l - 1):
                if nu[k] == 1 and nu[k + 1] == 0:
                    hopped = list(nu)
                    hopped[k], hopped[k + 1] = 0, 1
                    b[idx[tuple(hopped)]][col] = 1
        blocks.append(b)
    return dims, blocks


@dataclass(frozen=True)
class NilpotentBlocksReport:
    """Exact Jordan structure of the m-particle hopping map, with the conjectured form."""

    l: int
    m: int
    staircase: JordanBlockMultiset
    conjectured: JordanBlockMultiset
    agree: bool


def conjectured_blocks(l: int, m: int) -> JordanBlockMultiset:
    """Block multiset implied by the restricted-binomial formula."""
    w = m * (l - m)
    blocks = []
    for r in range(w // 2 + 1):
        count = restricted_binomial(l, m, r) - restricted_binomial(l, m, r - 1)
        if count > 0:
            blocks.append((w + 1 - 2 * r, count))
    return JordanBlockMultiset(tuple(sorted(blocks, reverse=True)))


def nilpotent_blocks(l: int, m: int, limit: int = DEFAULT_DIMENSION_LIMIT) -> NilpotentBlocksReport:
    """Ground-truth Jordan blocks of the m-particle hopping map.

    Computed from the exact rank staircase, block by weight level (the map is
    strictly weight-graded, so rank(M^p) decomposes over the level chains).
    """
    dim = math.comb(l, m)
    if dim > limit:
        raise TooLarge(f"sector dimension C({l},{m}) = {dim} exceeds limit {limit}")
    dims, level_blocks = _level_matrices(l, m)
    rmax = m * (l - m)
    ranks = []
    # chains[r] accumulates B_{r+p-1} ... B_r while p grows
    chains: dict[int, IntMatrix] = {r: level_blocks[r] for r in range(rmax)}
    for p in range(1, rmax + 2):
        if p > 1:
            chains = {
                r: int_matmul(level_blocks[r + p - 1], c)
                for r, c in chains.items()
                if r + p - 1 < rmax
            }
        total = sum(int_rank(c) for c in chains.values())
        ranks.append(total)
        if total == 0:
            break
    staircase = JordanBlockMultiset(tuple(blocks_from_staircase(dim, ranks)))
    conj = conjectured_blocks(l, m)
    return NilpotentBlocksReport(l, m, staircase, conj, staircase == conj)


@dataclass(frozen=True)
class LevelCheck:
    m: int
    r: int
    dim_from: int
    dim_to: int
    rank: int
    injective: bool
    surjective: bool
    required_injective: bool
    required_surjective: bool

    @property
    def ok(self) -> bool:
        return (self.injective or not self.required_injective) and (
            self.surjective or not self.required_surjective
        )


@dataclass(frozen=True)
class ConjectureReport:
    l: int
    checks: tuple[LevelCheck, ...]
    monotone_ok: bool

    @property
    def all_pass(self) -> bool:
        return self.monotone_ok and all(c.ok for c in self.checks)


def verify_conjecture(l: int, limit: int = DEFAULT_DIMENSION_LIMIT) -> ConjectureReport:
    """Check injectivity/surjectivity of the level maps for every m and weight r.

    The hop map restricted V^r_m -> V^{r+1}_m must be injective for
    r <= floor((w-1)/2) and surjective for r >= floor(w/2), w = (l-m)m; also
    checks the monotone growth of the restricted binomials up to the middle.
    A failed level is reported, not raised.
    """
    if math.comb(l, l // 2) > limit:
        raise TooLarge(f"middle sector of l={l} exceeds limit {limit}")
    checks = []
    monotone_ok = True
    for m in range(l + 1):
        w = m * (l - m)
        row = restricted_binomial_row(l, m)
        if any(row[r] > row[r + 1] for r in range(0, w // 2)):
            monotone_ok = False
        dims, level_blocks = _level_matrices(l, m)
        for r in range(w):
            rk = int_rank(level_blocks[r])
            checks.append(
                LevelCheck(
                    m=m,
                    r=r,
                    dim_from=dims[r],
                    dim_to=dims[r + 1],
                    rank=rk,
                    injective=rk == dims[r],
                    surjective=rk == dims[r + 1],
                    required_injective=r <= (w - 1) // 2,
                    required_surjective=r >= w // 2,
                )
            )
    return ConjectureReport(l, tuple(checks), monotone_ok)


def jordan_blocks_of_nilpotent(mat: IntMatrix) -> JordanBlockMultiset:
    """Exact Jordan block multiset of an arbitrary nilpotent integer matrix."""
    ranks = nilpotent_staircase(mat)
    return JordanBlockMultiset(tuple(blocks_from_staircase(len(mat), ranks)))
