import numpy as np
import pytest

from clifford_threshold.sampling import chunk_rng, haar_rotations


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def haar_1000():
    return haar_rotations(1000, chunk_rng(11, 0))


def bell_coefficients_oracle(u):
    """c_ij = Tr(s_i^T U^dagger s_j U) / 2, from <Phi|A (x) B|Phi> = Tr(A^T B) / 2."""
    from clifford_threshold.so3 import PAULIS

    c = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            c[i, j] = (np.trace(PAULIS[i].T @ u.conj().T @ PAULIS[j] @ u) / 2).real
    return c


def lp_threshold_oracle(rotation, tol=1e-11):
    """Smallest p with (1 - p) R a convex mixture of Cliffords, by bisection on LP feasibility."""
    from clifford_threshold.decomposition import decompose

    if decompose(rotation).feasible:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if decompose((1 - mid) * np.asarray(rotation)).feasible:
            hi = mid
        else:
            lo = mid
    return hi
