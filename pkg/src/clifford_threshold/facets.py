"""The 120 facets of the Clifford polytope and the facet-inequality membership test.

A 3x3 matrix ``M`` lies in the convex hull of the 24 Clifford rotations iff
``M . F <= 1`` for every facet ``F``, where ``.`` is the Frobenius inner
product. The facets are the two-sided Clifford orbits of three seeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .clifford import _int_det3, clifford_stack
from .exceptions import InternalConsistencyError

EPS_FACET = 1e-9

SEED_A = np.array([[1, 0, 0], [1, 0, 0], [1, 0, 0]], dtype=np.int64)
SEED_B = np.array([[0, 1, 0], [1, 0, -1], [1, 0, 1]], dtype=np.int64)

KINDS = ("A", "AT", "B")


@dataclass(frozen=True)
class Facet:
    id: int
    kind: str
    matrix: np.ndarray = field(compare=False)

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.matrix.ravel())

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "matrix": [list(map(int, r)) for r in self.matrix]}


def classify(matrix) -> str:
    """Return ``"A"``, ``"AT"`` or ``"B"`` for an integer facet matrix; raise if it is none of them."""
    m = np.asarray(matrix, dtype=np.int64)
    nz = m != 0
    if not np.all(np.abs(m[nz]) == 1):
        raise InternalConsistencyError(f"facet entries must be in {{-1, 0, 1}}:\n{m}")
    cols, rows = nz.sum(axis=0), nz.sum(axis=1)
    if nz.sum() == 3 and sorted(cols) == [0, 0, 3]:
        return "A"
    if nz.sum() == 3 and sorted(rows) == [0, 0, 3]:
        return "AT"
    if nz.sum() == 5 and _is_b_shape(m):
        return "B"
    raise InternalConsistencyError(f"matrix is not a facet of any known kind:\n{m}")


def _is_b_shape(m: np.ndarray) -> bool:
    for i, j in itertools.product(range(3), repeat=2):
        if m[i, j] == 0:
            continue
        others_r = [r for r in range(3) if r != i]
        others_c = [c for c in range(3) if c != j]
        block = m[np.ix_(others_r, others_c)]
        line = np.concatenate([np.delete(m[i], j), np.delete(m[:, j], i)])
        if np.all(np.abs(block) == 1) and np.all(line == 0):
            return _int_det3(m) == -2
    return False


@lru_cache(maxsize=1)
def _facets() -> tuple[Facet, ...]:
    cliffs = clifford_stack()
    seen: dict[tuple[int, ...], np.ndarray] = {}
    for seed in (SEED_A, SEED_A.T, SEED_B):
        prods = np.einsum("aij,jk,bkl->abil", cliffs, seed, cliffs).reshape(-1, 3, 3)
        for m in prods:
            seen.setdefault(tuple(int(v) for v in m.ravel()), m.copy())
    if len(seen) != 120:
        raise InternalConsistencyError(f"expected 120 distinct facets, built {len(seen)}")
    keys = sorted(seen)
    out = tuple(Facet(k, classify(seen[key]), seen[key]) for k, key in enumerate(keys))
    counts = {kind: sum(f.kind == kind for f in out) for kind in KINDS}
    if counts != {"A": 24, "AT": 24, "B": 72}:
        raise InternalConsistencyError(f"unexpected facet kind counts {counts}")
    return out


def enumerate_facets() -> list[Facet]:
    """All 120 facets, ids assigned by lexicographic order of the row-major entries."""
    return list(_facets())


@lru_cache(maxsize=1)
def facet_stack() -> np.ndarray:
    """Read-only ``(120, 3, 3)`` integer array indexed by facet id."""
    arr = np.stack([f.matrix for f in _facets()])
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=1)
def facet_kinds() -> np.ndarray:
    arr = np.array([f.kind for f in _facets()])
    arr.setflags(write=False)
    return arr


def facet_by_key(matrix) -> Facet | None:
    key = tuple(int(v) for v in np.asarray(matrix).ravel())
    return _facet_index().get(key)


@lru_cache(maxsize=1)
def _facet_index() -> dict[tuple[int, ...], Facet]:
    return {f.key: f for f in _facets()}


def enumerate_b_facets_direct() -> list[np.ndarray]:
    """Build the B-type facets from scratch instead of by Clifford conjugation.

    Put +-1 at one of nine positions, then fill the 2x2 block away from its
    row and column with +-1 so that the determinant is -2. Returns 72 matrices.
    """
    out = []
    for i, j in itertools.product(range(3), repeat=2):
        rows = [r for r in range(3) if r != i]
        cols = [c for c in range(3) if c != j]
        for s in (1, -1):
            for block in itertools.product((1, -1), repeat=4):
                m = np.zeros((3, 3), dtype=np.int64)
                m[i, j] = s
                m[np.ix_(rows, cols)] = np.array(block).reshape(2, 2)
                if _int_det3(m) == -2:
                    out.append(m)
    return out


def facet_inner_product(m, f: Facet | np.ndarray) -> float:
    """Frobenius inner product ``sum_ij M_ij F_ij``."""
    fm = f.matrix if isinstance(f, Facet) else f
    return float(np.sum(np.asarray(m, dtype=float) * fm))


def facet_values(m) -> np.ndarray:
    """Inner products of ``m`` with all 120 facets; batched over leading axes.

    Integer input yields exact integer values.
    """
    m = np.asarray(m)
    flat = m.reshape(m.shape[:-2] + (9,))
    fs = facet_stack().reshape(120, 9)
    if np.issubdtype(m.dtype, np.integer):
        return flat @ fs.T
    return flat.astype(float) @ fs.T.astype(float)


def vertices_per_facet() -> np.ndarray:
    """How many of the 24 Clifford vertices lie on each facet (diagnostic only)."""
    vals = facet_values(clifford_stack())
    return (vals == 1).sum(axis=0)


@dataclass(frozen=True)
class MembershipVerdict:
    inside: bool
    value: float
    witness: Facet | None = None

    def to_dict(self) -> dict:
        out = {"inside": self.inside, "max_inner_product": self.value}
        if self.witness is not None:
            out["witness_id"] = self.witness.id
            out["witness_kind"] = self.witness.kind
        return out


def polytope_membership(m, eps: float = EPS_FACET) -> MembershipVerdict:
    """Facet test: inside iff ``max_F M.F <= 1`` (exactly for integer input, ``+eps`` otherwise).

    An outside verdict carries the maximizing facet, lowest id first on ties.
    """
    m = np.asarray(m)
    if m.shape != (3, 3):
        m = m.reshape(3, 3)
    vals = facet_values(m)
    k = int(np.argmax(vals))
    v = vals[k]
    if np.issubdtype(m.dtype, np.integer):
        inside = bool(v <= 1)
    else:
        inside = bool(v <= 1.0 + eps)
    return MembershipVerdict(inside, float(v), None if inside else _facets()[k])
