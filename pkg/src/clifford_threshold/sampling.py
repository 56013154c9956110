"""Seeded samplers: Haar rotations, random gates, and structured stress rotations.

Every sampler that feeds the parallel verifier takes a ``(seed, chunk)`` pair
and derives an independent stream from it, so results do not depend on how
chunks are spread over workers.
"""

from __future__ import annotations

import numpy as np

from .clifford import clifford_stack
from .so3 import axis_rotation, rotation_from_quaternion


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Independent generator for chunk ``chunk`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed) % 2**64, spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def haar_rotations(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-uniform rotations: normalized Gaussian quaternions."""
    q = rng.standard_normal((n, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    return rotation_from_quaternion(q)


def random_angles(n: int, rng: np.random.Generator) -> np.ndarray:
    """Gate angles uniform on ``[0, 2 pi)^3``."""
    return rng.uniform(0.0, 2.0 * np.pi, size=(n, 3))


def random_unitaries(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) matrices via unit quaternions."""
    q = rng.standard_normal((n, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    a = q[:, 0] + 1j * q[:, 3]
    b = q[:, 2] + 1j * q[:, 1]
    return np.stack([np.stack([a, -b.conj()], -1), np.stack([b, a.conj()], -1)], axis=1)


def small_rotations(n: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    """Rotations by angle ``<= scale`` about random axes."""
    axis = rng.standard_normal((n, 3))
    axis /= np.linalg.norm(axis, axis=1, keepdims=True)
    half = 0.5 * scale * rng.uniform(0.0, 1.0, size=n)
    q = np.concatenate([np.cos(half)[:, None], np.sin(half)[:, None] * axis], axis=1)
    return rotation_from_quaternion(q)


def stress_rotations(
    axis_steps: int = 4001,
    pair_steps: int = 101,
    near_clifford: int = 200,
    near_scale: float = 1e-6,
    seed: int = 0,
) -> np.ndarray:
    """Tie-heavy inputs for the dominance checks.

    Rotations about each coordinate axis on a fine grid, products of two
    axis rotations on a coarser grid, and rotations within ``near_scale`` of
    every Clifford vertex (the vertices themselves included).
    """
    out = []
    angles = np.linspace(0.0, 2.0 * np.pi, axis_steps, endpoint=False)
    for axis in range(3):
        out.append(np.stack([axis_rotation(axis, t) for t in angles]))
    coarse = np.linspace(0.0, 2.0 * np.pi, pair_steps, endpoint=False)
    for a1 in range(3):
        for a2 in range(3):
            if a1 == a2:
                continue
            first = np.stack([axis_rotation(a1, t) for t in coarse])
            second = np.stack([axis_rotation(a2, t) for t in coarse])
            out.append(np.einsum("aij,bjk->abik", first, second).reshape(-1, 3, 3))
    rng = chunk_rng(seed, 2**31 - 1)
    cliffs = clifford_stack().astype(float)
    out.append(cliffs)
    for c in cliffs:
        out.append(np.einsum("ij,njk->nik", c, small_rotations(near_clifford, near_scale, rng)))
    return np.concatenate(out)
