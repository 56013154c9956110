import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_threshold.exceptions import InvalidArgumentError
from clifford_threshold.so3 import (
    GateAngles,
    as_unitary,
    coefficients_to_matrix,
    depolarize,
    matrix_to_coefficients,
    pauli_coefficients,
    rotation_from_angles,
    rotation_from_unitary,
    unitary_from_angles,
    unitary_from_reals,
)

from conftest import bell_coefficients_oracle

angle = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
angles3 = st.tuples(angle, angle, angle)

PI8 = np.diag([np.exp(1j * np.pi / 8), np.exp(-1j * np.pi / 8)])


def test_identity_angles():
    np.testing.assert_allclose(unitary_from_angles((0, 0, 0)), np.eye(2), atol=1e-15)


def test_diagonal_gate():
    np.testing.assert_allclose(unitary_from_angles((0, np.pi / 8, 0)), PI8, atol=1e-15)


def test_antidiagonal_gate():
    np.testing.assert_allclose(unitary_from_angles((np.pi / 2, 0, 0)), [[0, -1], [1, 0]], atol=1e-15)


@pytest.mark.parametrize("bad", [(np.nan, 0, 0), (0, np.inf, 0), (0, 0, -np.inf)])
def test_non_finite_angles_rejected(bad):
    with pytest.raises(InvalidArgumentError):
        unitary_from_angles(bad)


def test_global_phase_is_stripped():
    u = 1j * unitary_from_angles((0.3, 0.2, 0.1))
    v = as_unitary(u)
    assert abs(np.linalg.det(v) - 1) < 1e-12


def test_non_unitary_rejected():
    with pytest.raises(InvalidArgumentError):
        as_unitary([[1, 1], [0, 1]])


def test_unitary_from_reals_roundtrip():
    u = unitary_from_angles((0.7, 1.1, -0.4))
    reals = np.column_stack([u.real.ravel(), u.imag.ravel()]).ravel()
    np.testing.assert_allclose(unitary_from_reals(reals), u, atol=1e-15)


def test_identity_coefficients():
    c = pauli_coefficients(np.eye(2))
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[1, 1] = expected[3, 3] = 1
    expected[2, 2] = -1
    np.testing.assert_allclose(c, expected, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(angles3)
def test_coefficients_match_trace_oracle(a):
    u = unitary_from_angles(a)
    c = pauli_coefficients(u)
    np.testing.assert_allclose(c, bell_coefficients_oracle(u), atol=1e-12)
    assert abs(c[0, 0] - 1) < 1e-12
    local = np.concatenate([c[0, 1:], c[1:, 0]])
    assert np.abs(local).max() < 1e-12


def test_identity_rotation():
    np.testing.assert_allclose(rotation_from_unitary(np.eye(2)), np.eye(3), atol=1e-15)


def test_pi8_gate_rotation():
    # oracle: trace formula c_ij = Tr(s_i^T U^+ s_j U)/2 laid out column-wise.
    # The layout gives a quarter-pi turn about z in the negative sense.
    h = 1 / np.sqrt(2)
    expected = np.array([[h, h, 0], [-h, h, 0], [0, 0, 1]])
    np.testing.assert_allclose(rotation_from_unitary(PI8), expected, atol=1e-15)
    np.testing.assert_allclose(coefficients_to_matrix(bell_coefficients_oracle(PI8)), expected, atol=1e-15)


def test_bit_flip_like_gate_inverts_z():
    r = rotation_from_angles((np.pi / 2, 0, 0))
    np.testing.assert_allclose(r[:, 2], [0, 0, -1], atol=1e-15)


def test_seeded_angles_give_rotations():
    rng = np.random.default_rng(0)
    for a in rng.uniform(0, 2 * np.pi, size=(1000, 3)):
        r = rotation_from_angles(tuple(a))
        assert np.abs(r.T @ r - np.eye(3)).max() < 1e-9
        assert abs(np.linalg.det(r) - 1) < 1e-9


@settings(max_examples=300, deadline=None)
@given(angles3, angles3)
def test_homomorphism(a, b):
    u, v = unitary_from_angles(a), unitary_from_angles(b)
    lhs = rotation_from_unitary(u @ v)
    rhs = rotation_from_unitary(u) @ rotation_from_unitary(v)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_coefficient_layout_roundtrip(rng):
    m = rng.normal(size=(3, 3))
    c = matrix_to_coefficients(m)
    assert c[0, 0] == 1 and not c[0, 1:].any() and not c[1:, 0].any()
    np.testing.assert_array_equal(coefficients_to_matrix(c), m)


def test_depolarize_examples(haar_1000):
    r = haar_1000[0]
    np.testing.assert_array_equal(depolarize(r, 0.0), r)
    np.testing.assert_array_equal(depolarize(r, 1.0), np.zeros((3, 3)))
    np.testing.assert_array_equal(depolarize(np.eye(3), 0.5), 0.5 * np.eye(3))


@pytest.mark.parametrize("p", [-0.1, 1.5, np.nan])
def test_depolarize_rejects_bad_rate(p):
    with pytest.raises(InvalidArgumentError):
        depolarize(np.eye(3), p)


def test_depolarize_is_linear_in_facets(haar_1000):
    from clifford_threshold.facets import facet_stack

    fs = facet_stack().astype(float)
    for r in haar_1000[:50]:
        for p in (0.1, 0.37):
            lhs = np.einsum("ij,kij->k", depolarize(r, p), fs)
            rhs = (1 - p) * np.einsum("ij,kij->k", r, fs)
            np.testing.assert_allclose(lhs, rhs, atol=1e-14)


def test_gate_angles_dataclass():
    assert GateAngles(1, 2, 3).as_tuple() == (1.0, 2.0, 3.0)
