"""Exact linear algebra over the integers (Python bigints, no floating point).

Only what the combinatorial Jordan-structure computations need: matrix
products, Bareiss fraction-free rank, and the rank staircase of a nilpotent
matrix.
"""

from __future__ import annotations

IntMatrix = list[list[int]]


def int_matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a or not b:
        return []
    if len(a[0]) != len(b):
        raise ValueError(f"incompatible shapes {len(a)}x{len(a[0])} @ {len(b)}x{len(b[0])}")
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def int_rank(mat: IntMatrix) -> int:
    """Exact rank via Bareiss fraction-free elimination."""
    if not mat or not mat[0]:
        return 0
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def nilpotent_staircase(mat: IntMatrix, max_power: int | None = None) -> list[int]:
    """Ranks of mat^1, mat^2, ... of a nilpotent integer matrix, until zero.

    Raises if the matrix is not nilpotent within dim (or max_power) steps.
    """
    dim = len(mat)
    limit = dim if max_power is None else max_power
    ranks = []
    power = mat
    for _ in range(limit):
        r = int_rank(power)
        ranks.append(r)
        if r == 0:
            return ranks
        power = int_matmul(power, mat)
    if int_rank(power) != 0:
        raise ValueError("matrix is not nilpotent within the allowed power")
    return ranks


def blocks_from_staircase(dim: int, ranks: list[int]) -> list[tuple[int, int]]:
    """Jordan block multiset (size, count) of a nilpotent map from its rank staircase.

    ranks[p-1] = rank(N^p); nullities nu_p = dim - rank(N^p); the number of
    blocks of size >= p is nu_p - nu_{p-1}, so blocks of size exactly p number
    2*nu_p - nu_{p-1} - nu_{p+1}.
    """
    if ranks and ranks[-1] != 0:
        raise ValueError("staircase must end at rank zero")
    nullity = [0] + [dim - r for r in ranks]
    # after nilpotency index the nullity stays at dim
    nullity.append(dim)
    out = []
    for p in range(1, len(nullity) - 1):
        count = 2 * nullity[p] - nullity[p - 1] - nullity[p + 1]
        if count < 0:
            raise ValueError("staircase is not monotone-concave; not a nilpotent rank profile")
        if count > 0:
            out.append((p, count))
    return sorted(out, reverse=True)
