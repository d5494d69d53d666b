#!/usr/bin/env python3
"""A single dissipative qubit whose generator stops being diagonalizable.

One fermion, Hamiltonian kernel K = [[0, h], [-h, 0]], one bath coupling
sqrt(Gamma) (1, e^{i theta}).  Sweeping h through Gamma cos(theta) merges the
two decay rapidities into a single size-2 Jordan block: relaxation picks up a
t * exp(-2 Gamma t) term that no eigenbasis can remove.
"""

import numpy as np

from liouv import analyze, jordan_decompose, spectral_gap, validate_model
from liouv.model import build_bath_matrices, build_X

GAMMA = 1.0
THETA = np.pi / 3
H_CRITICAL = GAMMA * np.cos(THETA)


def model_at(h):
    K = [[0.0, h], [-h, 0.0]]
    return validate_model(1, K, [np.sqrt(GAMMA) * np.array([1.0, np.exp(1j * THETA)])])


print(f"critical coupling: h* = Gamma cos(theta) = {H_CRITICAL:.4f}\n")
print(f"{'h':>8} {'rapidities':>34} {'block sizes':>12} {'gap':>8}")
for h in [0.0, 0.25, H_CRITICAL - 0.05, H_CRITICAL, H_CRITICAL + 0.05, 0.9]:
    m = model_at(h)
    X = build_X(m, build_bath_matrices(m))
    jf = jordan_decompose(X)
    raps = ", ".join(f"{b.rapidity:.3f}" for b in jf.blocks)
    sizes = ",".join(str(b.size) for b in jf.blocks)
    print(f"{h:8.3f} {raps:>34} {sizes:>12} {spectral_gap(jf):8.3f}")

print("\nat the critical point the many-body spectrum keeps its eigenvalues but")
print("the middle invariant subspace carries a 2x2 Jordan block:\n")
m = model_at(H_CRITICAL)
result = analyze(m)
for e in result.spectrum.entries:
    occ = ", ".join(f"m({j},{k})={mm}" for (j, k), mm in e.occupation)
    print(f"  lambda = {e.lam:+.3f}   dim {e.subspace_dim}   "
          f"largest block {e.max_jordan_block}   [{occ}]")
print(f"\nreport warnings: {list(result.warnings) or 'none'}")
