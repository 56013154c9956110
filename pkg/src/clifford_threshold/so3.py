"""Single-qubit unitaries, their Bell-state Pauli coefficients, and the SO(3) image.

A gate ``U`` acts on one half of the Bell pair ``(|00> + |11>)/sqrt(2)``. The
sixteen expectation values ``c[i, j] = Tr(rho (s_i (x) s_j))`` of the
resulting state carry the rotation matrix in their traceless 3x3 block, with
the Y row negated. Everything here works on plain ``numpy`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InternalConsistencyError, InvalidArgumentError

EPS_UNITARY = 1e-10
EPS_ORTH = 1e-9
EPS_IMAG = 1e-12

PAULI_LABELS = ("I", "X", "Y", "Z")
PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
# Sign of sigma_i under transposition: only Y is antisymmetric.
TRANSPOSE_SIGN = np.array([1.0, 1.0, -1.0, 1.0])

BELL_PHI = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class GateAngles:
    """The three angles of ``U(theta, gamma, delta)``, in radians."""

    theta: float
    gamma: float
    delta: float

    def __post_init__(self):
        vals = (self.theta, self.gamma, self.delta)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidArgumentError(f"gate angles must be finite, got {vals}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (float(self.theta), float(self.gamma), float(self.delta))


def as_unitary(matrix) -> np.ndarray:
    """Validate a 2x2 unitary and rescale its global phase so that ``det == 1``."""
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidArgumentError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise InvalidArgumentError("unitary entries must be finite")
    if np.abs(u.conj().T @ u - np.eye(2)).max() > EPS_UNITARY:
        raise InvalidArgumentError("matrix is not unitary within 1e-10")
    det = np.linalg.det(u)
    u = u * np.exp(-0.5j * np.angle(det))
    return u


def unitary_from_angles(angles: GateAngles | tuple) -> np.ndarray:
    """The SU(2) matrix with rows ``(e^{ig} cos t, -e^{id} sin t)`` and ``(e^{-id} sin t, e^{-ig} cos t)``."""
    if not isinstance(angles, GateAngles):
        angles = GateAngles(*angles)
    t, g, d = angles.as_tuple()
    u = np.array(
        [
            [np.exp(1j * g) * np.cos(t), -np.exp(1j * d) * np.sin(t)],
            [np.exp(-1j * d) * np.sin(t), np.exp(-1j * g) * np.cos(t)],
        ]
    )
    return as_unitary(u)


def unitary_from_reals(values) -> np.ndarray:
    """Build a unitary from 8 reals: row-major (re, im) pairs."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size != 8:
        raise InvalidArgumentError(f"expected 8 reals, got {v.size}")
    return as_unitary((v[0::2] + 1j * v[1::2]).reshape(2, 2))


def bell_state(unitary) -> np.ndarray:
    """Density matrix of ``(I (x) U)|Phi><Phi|(I (x) U)^dagger``."""
    u = as_unitary(unitary)
    psi = np.kron(np.eye(2), u) @ BELL_PHI
    return np.outer(psi, psi.conj())


def pauli_expectations(rho: np.ndarray) -> np.ndarray:
    """All 16 two-qubit Pauli expectations ``Tr(rho (s_i (x) s_j))`` as a real 4x4 table."""
    rho = np.asarray(rho)
    paulis = PAULIS.astype(rho.dtype) if rho.dtype == np.clongdouble else PAULIS
    # Tr(rho (A (x) B)) = sum rho[i a, j b] A[j, i] B[b, a]
    vals = np.einsum("iajb,kji,lba->kl", rho.reshape(2, 2, 2, 2), paulis, paulis)
    worst = np.unravel_index(np.argmax(np.abs(vals.imag)), (4, 4))
    if abs(vals.imag[worst]) >= EPS_IMAG:
        i, j = worst
        raise InternalConsistencyError(
            f"expectation of {PAULI_LABELS[i]}{PAULI_LABELS[j]} has imaginary part {float(vals.imag[worst]):.3e}"
        )
    return vals.real.copy()


def pauli_coefficients(unitary) -> np.ndarray:
    """Pauli coefficient table ``c[i, j]`` (indices ordered I, X, Y, Z) of the gate's Bell state.

    The 4x4 density matrix is formed in extended precision. Downstream
    ratios such as ``(c_XZ - c_ZY) / (1 + c_YX)`` divide by near-cancelling
    sums, so double-rounded coefficients would lose about ``1e-16 / q``.
    """
    u = as_unitary(unitary).astype(np.clongdouble)
    phi = np.array([1, 0, 0, 1], dtype=np.clongdouble) / np.sqrt(np.longdouble(2))
    psi = np.kron(np.eye(2, dtype=np.clongdouble), u) @ phi
    rho = np.outer(psi, psi.conj())
    return pauli_expectations(rho).astype(float)


def coefficients_to_matrix(c: np.ndarray) -> np.ndarray:
    """Lay the traceless block out as a 3x3 matrix: column k holds ``sign_k * c[k, :]``.

    Column 2 is negated because Y is the only antisymmetric Pauli.
    """
    c = np.asarray(c, dtype=float)
    return (c[1:, 1:] * TRANSPOSE_SIGN[1:, None]).T.copy()


def matrix_to_coefficients(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`coefficients_to_matrix`, with ``c_II = 1`` and zero local terms.

    For a depolarized gate ``(1 - p) R`` this yields the coefficient table of
    the noisy Bell state: the traceless block shrinks, ``c_II`` does not.
    """
    m = np.asarray(m, dtype=float).reshape(3, 3)
    c = np.zeros((4, 4))
    c[0, 0] = 1.0
    c[1:, 1:] = m.T * TRANSPOSE_SIGN[1:, None]
    return c


def check_rotation(r: np.ndarray, eps: float = EPS_ORTH) -> bool:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    return bool(
        np.abs(r.T @ r - np.eye(3)).max() < eps and abs(np.linalg.det(r) - 1.0) < eps
    )


def as_rotation(matrix) -> np.ndarray:
    r = np.asarray(matrix, dtype=float).reshape(3, 3)
    if not check_rotation(r):
        raise InvalidArgumentError("matrix is not in SO(3) within 1e-9")
    return r


def rotation_from_unitary(unitary) -> np.ndarray:
    """SO(3) image of a single-qubit unitary, read off its Bell-state coefficients."""
    r = coefficients_to_matrix(pauli_coefficients(unitary))
    if not check_rotation(r):
        raise InternalConsistencyError("assembled coefficient matrix is not a rotation")
    return r


def rotation_from_angles(angles) -> np.ndarray:
    return rotation_from_unitary(unitary_from_angles(angles))


def depolarize(rotation, p: float) -> np.ndarray:
    """Depolarizing noise at rate ``p`` shrinks the rotation to ``(1 - p) R``."""
    if not (np.isfinite(p) and 0.0 <= p <= 1.0):
        raise InvalidArgumentError(f"noise rate must lie in [0, 1], got {p}")
    return (1.0 - p) * np.asarray(rotation, dtype=float)


def rotation_from_quaternion(q: np.ndarray) -> np.ndarray:
    """Rotation matrices for unit quaternions ``(w, x, y, z)``; accepts shape ``(4,)`` or ``(n, 4)``."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    r = np.stack(
        [
            1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
            2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
            2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y),
        ],
        axis=-1,
    )
    return r.reshape(q.shape[:-1] + (3, 3))


def axis_rotation(axis: int, angle: float) -> np.ndarray:
    """Right-handed rotation by ``angle`` about coordinate axis 0, 1 or 2."""
    c, s = np.cos(angle), np.sin(angle)
    i, j = (axis + 1) % 3, (axis + 2) % 3
    r = np.eye(3)
    r[i, i] = r[j, j] = c
    r[i, j], r[j, i] = -s, s
    return r
