"""Gate on half a Bell pair, weight-two Pauli measurement, postselection.

Measuring ``S = s * (sigma_a (x) sigma_b)`` and keeping the ``+1`` branch leaves
a two-qubit state stabilized by ``S``. Up to a two-qubit Clifford that state is
``|0><0| (x) rho'``, and ``rho'`` is the single-qubit state we read out. The
logical frame used for the readout is

* ``X_L = I (x) sigma_b``
* ``Y_L = sigma_c (x) sigma_d2``
* ``Z_L = -sigma_c (x) sigma_d1``

where ``(b, d1, d2)`` is cyclic in ``(X, Y, Z)`` and ``c`` is the cyclic
predecessor of ``a``. ``X_L`` has zero expectation on every Bell-type state,
so the Bloch vector always lies in the YZ plane. For the YX measurement this
frame reproduces ``r = (0, (c_XZ - c_ZY)/(1 + c_YX), -(c_XY + c_ZZ)/(1 + c_YX))``.

Each B-type facet inequality ``M . B > 1`` is the statement that, for one
measurement, outcome and Pauli correction ``P``, the corrected Bloch vector
``P r`` satisfies ``y + z > 1``. The table mapping facets to
(measurement, outcome, correction) is derived symbolically in
:func:`facet_measurement_table`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .exceptions import InternalConsistencyError, InvalidArgumentError, ZeroProbabilityBranch
from .facets import Facet, facet_by_key
from .so3 import (
    BELL_PHI,
    PAULIS,
    TRANSPOSE_SIGN,
    as_unitary,
    bell_state,
    matrix_to_coefficients,
    pauli_expectations,
)

EPS_PROB = 1e-12
EPS_OCTAHEDRON = 1e-12

AXES = {"X": 1, "Y": 2, "Z": 3}
CORRECTIONS = ("I", "X", "Y", "Z")
# Pauli corrections acting on a Bloch vector (diagonal of the SO(3) image).
CORRECTION_SIGNS = {
    "I": np.array([1.0, 1.0, 1.0]),
    "X": np.array([1.0, -1.0, -1.0]),
    "Y": np.array([-1.0, 1.0, -1.0]),
    "Z": np.array([-1.0, -1.0, 1.0]),
}


class TwoQubitPauli(NamedTuple):
    first: str
    second: str

    @classmethod
    def parse(cls, text: str) -> TwoQubitPauli:
        text = text.strip().upper()
        if len(text) != 2 or any(ch not in AXES for ch in text):
            raise InvalidArgumentError(f"measurement must be two letters from X, Y, Z; got {text!r}")
        return cls(text[0], text[1])

    def __str__(self):
        return self.first + self.second

    @property
    def axes(self) -> tuple[int, int]:
        return AXES[self.first], AXES[self.second]


ALL_MEASUREMENTS = tuple(TwoQubitPauli(a, b) for a in "XYZ" for b in "XYZ")


def _succ(k: int) -> int:
    return k % 3 + 1


def _pred(k: int) -> int:
    return (k - 2) % 3 + 1


def _mul(a: int, b: int) -> tuple[complex, int]:
    """``sigma_a sigma_b = phase * sigma_c`` for indices 0..3."""
    if a == 0:
        return 1, b
    if b == 0:
        return 1, a
    if a == b:
        return 1, 0
    c = 6 - a - b
    return (1j if b == _succ(a) else -1j), c


class SignedPauli(NamedTuple):
    sign: int
    first: int
    second: int

    def matrix(self) -> np.ndarray:
        return self.sign * np.kron(PAULIS[self.first], PAULIS[self.second])

    def times(self, other: SignedPauli) -> SignedPauli:
        ph1, i = _mul(self.first, other.first)
        ph2, j = _mul(self.second, other.second)
        phase = self.sign * other.sign * ph1 * ph2
        if abs(phase.imag) > 0:
            raise InternalConsistencyError("product of commuting Paulis must be Hermitian")
        return SignedPauli(int(round(phase.real)), i, j)


def logical_frame(meas: TwoQubitPauli) -> tuple[SignedPauli, SignedPauli, SignedPauli]:
    """Logical ``(X_L, Y_L, Z_L)`` used to read the postselected qubit."""
    a, b = meas.axes
    c = _pred(a)
    d1 = _succ(b)
    d2 = _succ(d1)
    return SignedPauli(1, 0, b), SignedPauli(1, c, d2), SignedPauli(-1, c, d1)


def _check_outcome(outcome: int) -> int:
    if outcome not in (1, -1):
        raise InvalidArgumentError(f"outcome must be +1 or -1, got {outcome}")
    return outcome


@dataclass(frozen=True)
class PostselectionResult:
    bloch: np.ndarray
    accept_probability: float
    factorization_residual: float = 0.0

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.bloch).sum())

    def to_dict(self) -> dict:
        return {
            "bloch": [float(v) for v in self.bloch],
            "accept_probability": self.accept_probability,
            "l1_norm": self.l1_norm,
            "outside_octahedron": not octahedron_membership(self.bloch),
        }


def _disentangler(meas: TwoQubitPauli, outcome: int) -> np.ndarray:
    """Unitary ``V`` with ``V S V^+ = Z (x) I`` and the logical frame sent to ``I (x) {X, Y, Z}``."""
    a, b = meas.axes
    xl, _, zl = logical_frame(meas)
    stab = outcome * np.kron(PAULIS[a], PAULIS[b])
    destab = np.kron(PAULIS[_pred(a)], PAULIS[0])
    proj = (np.eye(4) + stab) @ (np.eye(4) + zl.matrix()) / 4.0
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    psi00 = proj[:, col] / np.linalg.norm(proj[:, col])
    psi01 = xl.matrix() @ psi00
    basis = np.stack([psi00, psi01, destab @ psi00, destab @ psi01], axis=1)
    return basis.conj().T


def _projector(meas: TwoQubitPauli, outcome: int) -> np.ndarray:
    a, b = meas.axes
    return (np.eye(4) + outcome * np.kron(PAULIS[a], PAULIS[b])) / 2.0


def postselect_state(rho: np.ndarray, meas: TwoQubitPauli, outcome: int) -> tuple[np.ndarray, float]:
    """Project a two-qubit state onto the ``outcome`` eigenspace; returns (normalized state, probability)."""
    proj = _projector(meas, outcome)
    q = float(np.trace(proj @ rho).real)
    if q <= EPS_PROB:
        raise ZeroProbabilityBranch(f"outcome {outcome:+d} of {meas} has probability {q:.3e}")
    return proj @ rho @ proj / q, q


def postselect_oracle(unitary, meas: TwoQubitPauli | str, outcome: int = 1, p: float = 0.0) -> PostselectionResult:
    """Full 4x4 density-matrix simulation of the postselection.

    ``p`` applies depolarizing noise to the gated qubit. The postselected
    state is rotated into the product frame by a two-qubit Clifford; the
    Bloch vector of the second factor is returned together with the
    accept probability and the factorization residual of the 15-Pauli table.
    """
    if isinstance(meas, str):
        meas = TwoQubitPauli.parse(meas)
    outcome = _check_outcome(outcome)
    if not (0.0 <= p <= 1.0):
        raise InvalidArgumentError(f"noise rate must lie in [0, 1], got {p}")
    v = _disentangler(meas, outcome)
    if p == 0.0:
        # pure-state path: fewer roundings than the density-matrix route
        psi = np.kron(np.eye(2), as_unitary(unitary)) @ BELL_PHI
        proj_psi = _projector(meas, outcome) @ psi
        q = float(np.vdot(proj_psi, proj_psi).real)
        if q <= EPS_PROB:
            raise ZeroProbabilityBranch(f"outcome {outcome:+d} of {meas} has probability {q:.3e}")
        phi = v @ proj_psi / np.sqrt(q)
        post = np.outer(phi, phi.conj())
    else:
        rho = (1.0 - p) * bell_state(as_unitary(unitary)) + p * np.eye(4) / 4.0
        post, q = postselect_state(rho, meas, outcome)
        post = v @ post @ v.conj().T
    table = pauli_expectations(post)
    residual = float(np.abs(table - np.outer(table[:, 0], table[0, :])).max())
    return PostselectionResult(table[0, 1:].copy(), q, residual)


def _coefficients(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise InvalidArgumentError(f"expected a 3x3 matrix, got shape {m.shape}")
    return matrix_to_coefficients(m)


def postselect_formula(m, meas: TwoQubitPauli | str, outcome: int = 1) -> PostselectionResult:
    """Closed-form Bloch vector of the postselected qubit, from the 3x3 (possibly noisy) gate matrix."""
    if isinstance(meas, str):
        meas = TwoQubitPauli.parse(meas)
    outcome = _check_outcome(outcome)
    c = _coefficients(m)
    a, b = meas.axes
    stab = SignedPauli(outcome, a, b)
    denom = 1.0 + outcome * c[a, b]
    if denom <= 2 * EPS_PROB:
        raise ZeroProbabilityBranch(f"outcome {outcome:+d} of {meas} has probability {denom / 2:.3e}")
    r = np.empty(3)
    for k, lg in enumerate(logical_frame(meas)):
        prod = stab.times(lg)
        r[k] = (lg.sign * c[lg.first, lg.second] + prod.sign * c[prod.first, prod.second]) / denom
    return PostselectionResult(r, denom / 2.0)


def postselect_formula_yx(m) -> np.ndarray:
    """``(0, (c_XZ - c_ZY)/(1 + c_YX), -(c_XY + c_ZZ)/(1 + c_YX))`` with the c's read from ``m``."""
    c = _coefficients(m)
    X, Y, Z = 1, 2, 3
    denom = c[0, 0] + c[Y, X]
    if denom <= EPS_PROB:
        raise ZeroProbabilityBranch(f"YX +1 outcome has probability {denom / 2:.3e}")
    return np.array([0.0, (c[X, Z] - c[Z, Y]) / denom, -(c[X, Y] + c[Z, Z]) / denom])


def octahedron_membership(r) -> bool:
    """True when ``|x| + |y| + |z| <= 1`` (boundary counts as inside)."""
    return bool(np.abs(np.asarray(r, dtype=float)).sum() <= 1.0 + EPS_OCTAHEDRON)


def induced_facet(meas: TwoQubitPauli, outcome: int, correction: str) -> np.ndarray:
    """Integer matrix ``F`` with ``M . F > 1`` iff the corrected vector has ``y + z > 1``.

    Derived from the Pauli algebra alone: ``y + z > 1`` clears to
    ``ey N_Y + ez N_Z - s c_ab > 1`` which is linear in the coefficient block,
    then mapped to matrix entries through the coefficient layout.
    """
    a, b = meas.axes
    stab = SignedPauli(outcome, a, b)
    signs = CORRECTION_SIGNS[correction]
    k = np.zeros((4, 4), dtype=np.int64)
    for axis in (1, 2):
        lg = logical_frame(meas)[axis]
        prod = stab.times(lg)
        e = int(signs[axis])
        k[lg.first, lg.second] += e * lg.sign
        k[prod.first, prod.second] += e * prod.sign
    k[a, b] -= outcome
    if k[0].any() or k[:, 0].any():
        raise InternalConsistencyError("induced inequality touches local coefficients")
    return (k[1:, 1:] * TRANSPOSE_SIGN[1:, None].astype(np.int64)).T


class MeasurementRecipe(NamedTuple):
    measurement: TwoQubitPauli
    outcome: int
    correction: str


@lru_cache(maxsize=1)
def facet_measurement_table() -> dict[int, MeasurementRecipe]:
    """Facet id -> (measurement, outcome, correction) for all 72 B-type facets."""
    table: dict[int, MeasurementRecipe] = {}
    for meas, outcome, corr in itertools.product(ALL_MEASUREMENTS, (1, -1), CORRECTIONS):
        f = facet_by_key(induced_facet(meas, outcome, corr))
        if f is None or f.kind != "B":
            raise InternalConsistencyError(f"{meas}/{outcome:+d}/{corr} does not induce a B-type facet")
        if f.id in table:
            raise InternalConsistencyError(f"facet {f.id} induced twice")
        table[f.id] = MeasurementRecipe(meas, outcome, corr)
    if len(table) != 72:
        raise InternalConsistencyError(f"table covers {len(table)} of 72 B-type facets")
    return table


@dataclass(frozen=True)
class EquivalenceRecord:
    facet: Facet
    recipe: MeasurementRecipe
    facet_value: float
    bloch: np.ndarray
    corrected_bloch: np.ndarray
    accept_probability: float

    @property
    def oriented_sum(self) -> float:
        """``y + z`` of the corrected vector: the facet inequality with absolute values dropped."""
        return float(self.corrected_bloch[1] + self.corrected_bloch[2])

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.corrected_bloch).sum())

    @property
    def facet_violated(self) -> bool:
        return self.facet_value > 1.0

    @property
    def outside_octahedron_oriented(self) -> bool:
        return self.oriented_sum > 1.0


def facet_violation_equivalence(m, facet: Facet) -> EquivalenceRecord:
    """Evaluate both sides of ``M . B > 1  <=>  (P r)_y + (P r)_z > 1`` for one B-type facet."""
    if facet.kind != "B":
        raise InvalidArgumentError(f"facet {facet.id} has kind {facet.kind}, expected B")
    recipe = facet_measurement_table().get(facet.id)
    if recipe is None:
        raise InternalConsistencyError(f"no measurement recipe for facet {facet.id}")
    m = np.asarray(m, dtype=float)
    res = postselect_formula(m, recipe.measurement, recipe.outcome)
    corrected = CORRECTION_SIGNS[recipe.correction] * res.bloch
    return EquivalenceRecord(
        facet, recipe, float(np.sum(m * facet.matrix)), res.bloch, corrected, res.accept_probability
    )
