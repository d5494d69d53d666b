import numpy as np
import pytest

from liouv.model import (
    build_bath_matrices,
    build_structure_matrix,
    build_X,
    validate_model,
)

GAMMA1, GAMMA2, J_COUPLING = 0.3, 0.5, 0.7
GAMMA_P = GAMMA2 + GAMMA1
GAMMA_M = GAMMA2 - GAMMA1


def single_qubit_model(gamma=1.0, theta=np.pi / 3, h=None):
    """Single fermion with one bath vector sqrt(G)(1, e^{i theta}); h defaults
    to the non-diagonalizable point G cos(theta)."""
    if h is None:
        h = gamma * np.cos(theta)
    K = np.array([[0.0, h], [-h, 0.0]])
    l = np.sqrt(gamma) * np.array([1.0, np.exp(1j * theta)])
    return validate_model(1, K, [l])


def ising_pair_model(g1=GAMMA1, g2=GAMMA2, j=J_COUPLING):
    """Ising-coupled pair, bath on the first qubit, pinned to the golden X and
    the closed-form driving solution."""
    gp, gm = g2 + g1, g2 - g1
    K = np.zeros((4, 4))
    K[1, 2], K[2, 1] = -j / 2, j / 2
    # M = (gp/2) 1 - 2 gm sigma^2 on the first qubit's Majorana pair
    c1sq = gp / 4 - gm  # sigma+ channel weight
    c2sq = gp / 4 + gm
    if c1sq < -1e-12:
        raise ValueError("parameters leave the PSD region of the golden fixture")
    vecs = []
    if c1sq > 1e-15:
        vecs.append(np.sqrt(c1sq) * np.array([1, 1j, 0, 0]))
    vecs.append(np.sqrt(c2sq) * np.array([1, -1j, 0, 0]))
    return validate_model(2, K, vecs)


def ising_pair_display_model(g1=GAMMA1, g2=GAMMA2, j=J_COUPLING):
    """Same X, but with the weaker driving M_i = (Gamma_-/4)-pattern, realized
    by the plain sigma+/sigma- fermionization."""
    gp, gm = g2 + g1, g2 - g1
    K = np.zeros((4, 4))
    K[1, 2], K[2, 1] = -j / 2, j / 2
    c1sq = gp - gm / 2
    c2sq = gp + gm / 2
    l1 = np.sqrt(c1sq) / 2 * np.array([1, 1j, 0, 0])
    l2 = np.sqrt(c2sq) / 2 * np.array([1, -1j, 0, 0])
    return validate_model(2, K, [l1, l2])


def pipeline_stage(model):
    bath = build_bath_matrices(model)
    X = build_X(model, bath)
    sm = build_structure_matrix(model, bath)
    return bath, X, sm


@pytest.fixture
def qubit_defective():
    return single_qubit_model()


@pytest.fixture
def ising_pair():
    return ising_pair_model()
