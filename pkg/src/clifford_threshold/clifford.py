"""The 24 single-qubit Clifford operations as signed permutation matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ROUND_RESIDUAL = 1e-9


@dataclass(frozen=True)
class CliffordElement:
    index: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.matrix.ravel())

    def __eq__(self, other):
        return isinstance(other, CliffordElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def _int_det3(m: np.ndarray) -> int:
    m = [[int(v) for v in row] for row in m]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def signed_permutations() -> list[np.ndarray]:
    """All 48 signed 3x3 permutation matrices (both determinants)."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            m = np.zeros((3, 3), dtype=np.int64)
            for row, (col, s) in enumerate(zip(perm, signs)):
                m[row, col] = s
            out.append(m)
    return out


@lru_cache(maxsize=1)
def _enumerate() -> tuple[CliffordElement, ...]:
    mats = [m for m in signed_permutations() if _int_det3(m) == 1]
    mats.sort(key=lambda m: tuple(m.ravel()))
    ident = next(k for k, m in enumerate(mats) if (m == np.eye(3, dtype=np.int64)).all())
    mats[0], mats[ident] = mats[ident], mats[0]
    return tuple(CliffordElement(k, m) for k, m in enumerate(mats))


def enumerate_cliffords() -> list[CliffordElement]:
    """The 24 rotations of the octahedral group in canonical order; identity is index 0.

    Order: lexicographic on the row-major entries, then identity swapped to
    the front.
    """
    return list(_enumerate())


@lru_cache(maxsize=1)
def clifford_stack() -> np.ndarray:
    """Read-only ``(24, 3, 3)`` integer array of the canonical elements."""
    arr = np.stack([c.matrix for c in _enumerate()])
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=1)
def _index_by_key() -> dict[tuple[int, ...], int]:
    return {c.key: c.index for c in _enumerate()}


@lru_cache(maxsize=1)
def cayley_table() -> np.ndarray:
    """``table[a, b]`` is the index of ``C_a @ C_b``."""
    elems = _enumerate()
    keys = _index_by_key()
    table = np.empty((24, 24), dtype=np.int64)
    for a in elems:
        for b in elems:
            table[a.index, b.index] = keys[tuple(int(v) for v in (a.matrix @ b.matrix).ravel())]
    table.setflags(write=False)
    return table


def clifford_multiply(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return _enumerate()[int(cayley_table()[a.index, b.index])]


def clifford_inverse(a: CliffordElement) -> CliffordElement:
    return _enumerate()[_index_by_key()[tuple(int(v) for v in a.matrix.T.ravel())]]


def clifford_lookup(m) -> CliffordElement | None:
    """Match a (possibly float) 3x3 matrix against the group; ``None`` if it is not an element."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return None
    rounded = np.rint(m)
    if np.abs(m - rounded).max() >= ROUND_RESIDUAL:
        return None
    idx = _index_by_key().get(tuple(int(v) for v in rounded.ravel()))
    return None if idx is None else _enumerate()[idx]


def is_clifford(m) -> bool:
    return clifford_lookup(m) is not None
