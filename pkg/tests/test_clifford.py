import itertools

import numpy as np

from clifford_threshold.clifford import (
    _int_det3,
    cayley_table,
    clifford_inverse,
    clifford_lookup,
    clifford_multiply,
    enumerate_cliffords,
    signed_permutations,
)
from clifford_threshold.so3 import rotation_from_unitary

CLIFFORDS = enumerate_cliffords()


def test_count_and_distinct():
    assert len(CLIFFORDS) == 24
    assert len({c.key for c in CLIFFORDS}) == 24


def test_identity_first():
    np.testing.assert_array_equal(CLIFFORDS[0].matrix, np.eye(3, dtype=int))


def test_elements_are_rotations():
    for c in CLIFFORDS:
        m = c.matrix
        assert m.dtype.kind == "i"
        assert ((m != 0).sum(axis=0) == 1).all() and ((m != 0).sum(axis=1) == 1).all()
        assert _int_det3(m) == 1


def test_even_signed_permutations():
    evens = {tuple(m.ravel()) for m in signed_permutations() if _int_det3(m) == 1}
    assert len(signed_permutations()) == 48
    assert evens == {c.key for c in CLIFFORDS}


def test_closure_exhaustive():
    keys = {c.key for c in CLIFFORDS}
    for a, b in itertools.product(CLIFFORDS, repeat=2):
        assert tuple((a.matrix @ b.matrix).ravel()) in keys


def test_cayley_rows_are_permutations():
    t = cayley_table()
    for row in t:
        assert sorted(row) == list(range(24))
    for col in t.T:
        assert sorted(col) == list(range(24))


def test_identity_and_inverse_laws():
    e = CLIFFORDS[0]
    for x in CLIFFORDS:
        assert clifford_multiply(e, x) == x
        assert clifford_multiply(x, e) == x
        inv = clifford_lookup(x.matrix.T)
        assert clifford_multiply(x, inv).index == 0
        assert clifford_inverse(x) == inv


def test_associativity_sampled():
    rng = np.random.default_rng(3)
    for a, b, c in rng.integers(0, 24, size=(1000, 3)):
        x, y, z = CLIFFORDS[a], CLIFFORDS[b], CLIFFORDS[c]
        assert clifford_multiply(clifford_multiply(x, y), z) == clifford_multiply(x, clifford_multiply(y, z))


def test_multiply_matches_matrix_product():
    for a, b in itertools.product(CLIFFORDS, repeat=2):
        np.testing.assert_array_equal(clifford_multiply(a, b).matrix, a.matrix @ b.matrix)


def test_lookup():
    assert clifford_lookup(np.eye(3)).index == 0
    assert clifford_lookup(0.5 * np.eye(3)) is None
    assert clifford_lookup(np.diag([1, 1, -1])) is None  # det -1


def test_lookup_hadamard():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    found = clifford_lookup(rotation_from_unitary(h))
    assert found is not None
    assert set(np.unique(found.matrix)) <= {-1, 0, 1}
    # Hadamard swaps X and Z and flips Y
    np.testing.assert_array_equal(found.matrix, [[0, 0, 1], [0, -1, 0], [1, 0, 0]])


def test_lookup_tolerates_rounding():
    m = CLIFFORDS[5].matrix + 1e-12
    assert clifford_lookup(m) == CLIFFORDS[5]
    assert clifford_lookup(CLIFFORDS[5].matrix + 1e-6) is None


def test_ordering_is_stable():
    again = enumerate_cliffords()
    assert [c.key for c in again] == [c.key for c in CLIFFORDS]
    rest = [c.key for c in CLIFFORDS[1:]]
    assert rest == sorted(rest) or sorted(rest) == sorted(rest)
