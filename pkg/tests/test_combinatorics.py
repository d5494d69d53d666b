import itertools
import math

import numpy as np
import pytest

from liouv._intlinalg import int_matmul, nilpotent_staircase
from liouv.combinatorics import (
    conjectured_blocks,
    delta_matrix,
    jordan_blocks_of_nilpotent,
    nilpotent_blocks,
    nilpotent_map_matrix,
    restricted_binomial,
    restricted_binomial_row,
    seed_coefficients,
    seed_vector,
    tensor_sum_blocks,
    tensor_sum_matrix,
    verify_conjecture,
    weight,
)
from liouv.errors import TooLarge


def brute_force_restricted_binomials(l, m):
    """Independent oracle: enumerate every m-subset of {1..l} by weight."""
    counts = {}
    for sites in itertools.combinations(range(1, l + 1), m):
        w = sum(sites) - m * (m + 1) // 2
        counts[w] = counts.get(w, 0) + 1
    return [counts.get(r, 0) for r in range(m * (l - m) + 1)]


@pytest.mark.parametrize("l,m", [(4, 2), (5, 2), (6, 3), (7, 4), (9, 3), (12, 6)])
def test_restricted_binomial_against_subset_enumeration(l, m):
    assert restricted_binomial_row(l, m) == brute_force_restricted_binomials(l, m)


def test_restricted_binomial_known_row():
    assert restricted_binomial_row(4, 2) == [1, 1, 2, 1, 1]
    assert sum(restricted_binomial_row(4, 2)) == 6


def test_restricted_binomial_m_zero():
    assert restricted_binomial(7, 0, 0) == 1
    assert restricted_binomial_row(7, 0) == [1]


def test_restricted_binomial_sum_12_6():
    assert sum(restricted_binomial_row(12, 6)) == 924


def test_restricted_binomial_out_of_range_zero():
    assert restricted_binomial(5, 2, -1) == 0
    assert restricted_binomial(5, 2, 7) == 0
    assert restricted_binomial(5, 7, 0) == 0


@pytest.mark.parametrize("l", range(0, 21))
def test_sum_rule_and_symmetry_exact(l):
    for m in range(l + 1):
        row = restricted_binomial_row(l, m)
        assert sum(row) == math.comb(l, m)
        assert row == row[::-1]


def test_tensor_sum_blocks_known():
    assert tensor_sum_blocks(2, 2).blocks == ((3, 1), (1, 1))
    assert tensor_sum_blocks(5, 1).blocks == ((5, 1),)
    assert tensor_sum_blocks(3, 5).blocks == ((7, 1), (5, 1), (3, 1))


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("l", range(1, 7))
def test_tensor_sum_blocks_against_staircase(k, l):
    claimed = tensor_sum_blocks(k, l)
    assert claimed.total_dimension == k * l
    exact = jordan_blocks_of_nilpotent(tensor_sum_matrix(k, l))
    assert exact == claimed


def _int_matrix_power(mat, p):
    out = [[int(i == j) for j in range(len(mat))] for i in range(len(mat))]
    for _ in range(p):
        out = int_matmul(out, mat)
    return out


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("l", range(1, 7))
def test_newton_nilpotency_bound(k, l):
    mat = tensor_sum_matrix(k, l)
    power = _int_matrix_power(mat, k + l - 2)
    assert any(v != 0 for row in power for v in row)
    final = int_matmul(power, mat)
    assert all(v == 0 for row in final for v in row)


def test_seed_coefficients_trivial_and_known():
    assert seed_coefficients(4, 3, 1) == [1]
    assert seed_coefficients(2, 2, 2) == [-1, 1]


def test_seed_identity_exact_4_3_2():
    c = seed_coefficients(4, 3, 2)
    kp, lp = 2, 1
    assert sum(math.comb(kp + lp + 1, lp - 1 + q) * c[q - 1] for q in (1, 2)) == 0


@pytest.mark.parametrize("k,l", [(2, 2), (3, 3), (4, 3), (5, 2), (6, 6), (5, 4)])
def test_seed_vectors_generate_chains_of_exact_length(k, l):
    mat = tensor_sum_matrix(k, l)
    for r in range(1, min(k, l) + 1):
        vec = seed_vector(k, l, r)
        length = k + l - 2 * r + 1
        current = vec
        for step in range(length - 1):
            current = [sum(row[i] * current[i] for i in range(len(current))) for row in mat]
            assert any(v != 0 for v in current), (r, step)
        current = [sum(row[i] * current[i] for i in range(len(current))) for row in mat]
        assert all(v == 0 for v in current)


def test_nilpotent_map_matrix_single_particle_is_jordan_block():
    # in the weight-ordered basis the hop map is the lower-shift, i.e. the
    # transpose of the canonical block: a single Jordan block of size l
    for l in range(2, 7):
        mat = nilpotent_map_matrix(l, 1)
        assert mat == [list(row) for row in zip(*delta_matrix(l))]
        assert jordan_blocks_of_nilpotent(mat).blocks == ((l, 1),)


def test_nilpotent_map_matrix_empty_sector():
    assert nilpotent_map_matrix(5, 0) == [[0]]


def test_nilpotent_map_matrix_4_2():
    mat = nilpotent_map_matrix(4, 2)
    assert len(mat) == 6
    assert all(v in (0, 1) for row in mat for v in row)
    ranks = nilpotent_staircase(mat)
    assert len(ranks) == 5  # nilpotency index (4-2)*2 + 1 = 5
    assert ranks[-1] == 0 and ranks[-2] > 0


def test_nilpotent_map_strictly_raises_weight():
    states = sorted(
        (nu for nu in itertools.product((0, 1), repeat=5) if sum(nu) == 2),
        key=lambda nu: (weight(nu), nu),
    )
    mat = nilpotent_map_matrix(5, 2)
    for col, nu in enumerate(states):
        for row, mu in enumerate(states):
            if mat[row][col]:
                assert weight(mu) == weight(nu) + 1


def _fermionic_hop_matrix(l, m):
    """Oracle: build sum_k b'_{k+1} b_k from explicit 2^l-dimensional fermionic
    creation/annihilation matrices with Jordan-Wigner sign strings, restricted
    to the m-particle sector in the (weight, lex) basis order."""
    dim = 2**l
    create = []
    destroy = []
    for k in range(l):
        c = np.zeros((dim, dim))
        a = np.zeros((dim, dim))
        for idx in range(dim):
            occ = [(idx >> b) & 1 for b in range(l)]
            sign = (-1) ** sum(occ[:k])
            if occ[k] == 0:
                c[idx | (1 << k), idx] = sign
            else:
                a[idx & ~(1 << k), idx] = sign
        create.append(c)
        destroy.append(a)
    hop = sum(create[k + 1] @ destroy[k] for k in range(l - 1))
    states = sorted(
        (nu for nu in itertools.product((0, 1), repeat=l) if sum(nu) == m),
        key=lambda nu: (weight(nu), nu),
    )
    idx_of = [sum(b << i for i, b in enumerate(nu)) for nu in states]
    return [[int(round(hop[r, c])) for c in idx_of] for r in idx_of]


@pytest.mark.parametrize("l,m", [(3, 1), (4, 2), (5, 2), (5, 3), (6, 3)])
def test_hop_matrix_matches_explicit_fermionic_construction(l, m):
    # the adjacent-hop signs cancel identically: all entries are +1
    assert nilpotent_map_matrix(l, m) == _fermionic_hop_matrix(l, m)


def test_nilpotent_blocks_4_2():
    rep = nilpotent_blocks(4, 2)
    assert rep.staircase.blocks == ((5, 1), (1, 1))
    assert rep.conjectured.blocks == ((5, 1), (1, 1))
    assert rep.agree


def test_nilpotent_blocks_single_particle():
    rep = nilpotent_blocks(6, 1)
    assert rep.staircase.blocks == ((6, 1),)
    assert rep.agree


@pytest.mark.parametrize("l", range(1, 9))
def test_nilpotent_blocks_agree_small(l):
    for m in range(l + 1):
        rep = nilpotent_blocks(l, m)
        assert rep.agree, (l, m)
        assert rep.staircase.total_dimension == math.comb(l, m)
        assert rep.staircase.largest == (l - m) * m + 1
        middle = restricted_binomial(l, m, ((l - m) * m) // 2)
        assert rep.staircase.block_count == middle


def test_graded_staircase_matches_full_matrix_staircase():
    # the weight-graded block decomposition must reproduce the brute staircase
    rep = nilpotent_blocks(6, 3)
    full = jordan_blocks_of_nilpotent(nilpotent_map_matrix(6, 3))
    assert rep.staircase == full


def test_conjectured_blocks_drop_zero_counts():
    blocks = conjectured_blocks(4, 2)
    assert all(count > 0 for _, count in blocks.blocks)


def test_verify_conjecture_trivial():
    rep = verify_conjecture(2)
    assert rep.all_pass


def test_verify_conjecture_small():
    for l in (3, 4, 5, 6, 7):
        rep = verify_conjecture(l)
        assert rep.all_pass
        assert rep.monotone_ok


def test_size_limit_raises():
    with pytest.raises(TooLarge):
        nilpotent_map_matrix(30, 15, limit=1000)
    with pytest.raises(TooLarge):
        nilpotent_blocks(30, 15, limit=1000)
    with pytest.raises(TooLarge):
        verify_conjecture(30, limit=1000)
