"""Seeded random model generation with a pinned, documented draw order.

Generator: numpy PCG64 seeded with the 64-bit seed.  Draws, in order:
a (2n x 2n) standard-normal matrix G giving K = (G - G^T)/2, then for each of
the n_vectors coupling vectors 2n real and 2n imaginary standard normals,
combined as (re + i*im)/sqrt(2).  This sequence is frozen so that seeds are
portable across implementations of the suite.
"""

from __future__ import annotations

import numpy as np

from .model import QuadraticLindbladModel, validate_model


def random_model(n: int, seed: int, n_vectors: int | None = None) -> QuadraticLindbladModel:
    if n_vectors is None:
        n_vectors = n
    rng = np.random.default_rng(seed)
    d = 2 * n
    G = rng.standard_normal((d, d))
    K = (G - G.T) / 2
    vectors = []
    for _ in range(n_vectors):
        re = rng.standard_normal(d)
        im = rng.standard_normal(d)
        vectors.append((re + 1j * im) / np.sqrt(2))
    return validate_model(n, K, vectors)


def random_axis_model(n: int, seed: int, decoupled: int = 2) -> QuadraticLindbladModel:
    """Random model with engineered zero/imaginary rapidities.

    The last `decoupled` Majorana coordinates carry only an antisymmetric
    Hamiltonian block and no bath coupling, so X acquires a purely
    antisymmetric diagonal block: a conjugate imaginary rapidity pair per two
    decoupled coordinates, plus a zero rapidity when `decoupled` is odd.
    """
    d = 2 * n
    if not (1 <= decoupled < d):
        raise ValueError("decoupled coordinates must leave a driven block")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d))
    K = (G - G.T) / 2
    keep = d - decoupled
    K[:keep, keep:] = 0.0
    K[keep:, :keep] = 0.0
    vectors = []
    for _ in range(max(1, n)):
        re = rng.standard_normal(d)
        im = rng.standard_normal(d)
        v = (re + 1j * im) / np.sqrt(2)
        v[keep:] = 0.0
        vectors.append(v)
    return validate_model(n, K, vectors)
