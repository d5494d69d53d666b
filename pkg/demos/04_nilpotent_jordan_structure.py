#!/usr/bin/env python3
"""Exact integer combinatorics behind the many-body Jordan blocks.

Three layers, all in exact arithmetic: restricted binomial symbols counting
occupation states by weight; the Jordan decomposition of a sum of Jordan
blocks on a tensor product; and the block structure of the number-conserving
hopping map, whose conjectured injectivity/surjectivity pattern is verified
level by level with exact ranks.
"""

from liouv import (
    nilpotent_blocks,
    restricted_binomial_row,
    tensor_sum_blocks,
    verify_conjecture,
)
from liouv.combinatorics import jordan_blocks_of_nilpotent, tensor_sum_matrix

print("restricted binomial triangle for l = 6 (rows m = 0..6, entries by weight):")
for m in range(7):
    print(f"  m={m}: {restricted_binomial_row(6, m)}")

print("\ntensor sums of Jordan blocks  Delta_k (+) Delta_l  ->  block sizes:")
for k, l in [(2, 2), (3, 5), (4, 4), (6, 1)]:
    claimed = tensor_sum_blocks(k, l)
    exact = jordan_blocks_of_nilpotent(tensor_sum_matrix(k, l))
    mark = "ok" if exact == claimed else "MISMATCH"
    print(f"  ({k},{l}): {claimed}   [exact staircase: {exact}] {mark}")

print("\nhopping map on m of l fermionic modes -> Jordan blocks "
      "(exact vs restricted-binomial formula):")
for l, m in [(4, 2), (6, 3), (8, 4), (10, 5)]:
    rep = nilpotent_blocks(l, m)
    mark = "ok" if rep.agree else "MISMATCH"
    print(f"  (l={l}, m={m}): sizes {rep.staircase}  "
          f"largest {(l-m)*m + 1}  blocks {rep.staircase.block_count}  {mark}")

print("\nlevel-map injectivity/surjectivity check (exact ranks):")
for l in (8, 10):
    rep = verify_conjecture(l)
    status = "PASS" if rep.all_pass else "FAIL"
    print(f"  l = {l}: {len(rep.checks)} level maps checked -> {status}")
