"""Tight depolarizing-noise threshold of a single-qubit gate.

Depolarizing at rate ``p`` maps ``R`` to ``(1 - p) R`` and every facet value
scales by the same factor, so the noisy gate enters the Clifford polytope
exactly when ``(1 - p) max_F R.F <= 1``. The threshold is therefore
``p* = 1 - 1 / max_F R.F`` (or 0 if the gate is already inside).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .facets import Facet, enumerate_facets, facet_kinds, facet_values
from .so3 import GateAngles, as_rotation, rotation_from_angles

TIE_TOL = 1e-12
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class ThresholdReport:
    rotation: np.ndarray
    max_inner_product: float
    p_star: float
    witness: Facet

    @property
    def witness_kind(self) -> str:
        return self.witness.kind

    def to_dict(self) -> dict:
        return {
            "rotation": [[float(v) for v in row] for row in self.rotation],
            "max_inner_product": self.max_inner_product,
            "p_star": self.p_star,
            "witness_id": self.witness.id,
            "witness_kind": self.witness.kind,
        }


def p_star_from_value(v):
    """``max(0, 1 - 1/v)`` with the clamp applied for ``v <= 1 + 1e-12``; works elementwise."""
    v = np.asarray(v, dtype=float)
    out = np.where(v > 1.0 + CLAMP_TOL, 1.0 - 1.0 / np.where(v > 0, v, 1.0), 0.0)
    return out if out.ndim else float(out)


def witness_index(values: np.ndarray) -> np.ndarray:
    """Arg-max facet per row: lowest id among values within 1e-12 of the max, B-type first."""
    values = np.atleast_2d(values)
    vmax = values.max(axis=1, keepdims=True)
    near = values >= vmax - TIE_TOL
    is_b = facet_kinds() == "B"
    near_b = near & is_b
    has_b = near_b.any(axis=1)
    return np.where(has_b, np.argmax(near_b, axis=1), np.argmax(near, axis=1))


def threshold(rotation) -> ThresholdReport:
    """Maximal facet value, threshold noise rate and witnessing facet for a rotation."""
    r = as_rotation(rotation)
    vals = facet_values(r)
    k = int(witness_index(vals)[0])
    v = float(vals.max())
    return ThresholdReport(r, v, p_star_from_value(v), enumerate_facets()[k])


def threshold_from_angles(angles: GateAngles | tuple) -> ThresholdReport:
    return threshold(rotation_from_angles(angles))


def threshold_batch(rotations: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized core: ``(max_inner_product, p_star, witness_id)`` for a stack of 3x3 matrices."""
    vals = facet_values(np.asarray(rotations, dtype=float))
    vmax = vals.max(axis=1)
    return vmax, p_star_from_value(vmax), witness_index(vals)


@dataclass(frozen=True)
class SurveyRow:
    theta: float
    gamma: float
    delta: float
    max_inner_product: float
    p_star: float
    witness_id: int
    witness_kind: str

    FIELDS = ("theta", "gamma", "delta", "max_inner_product", "p_star", "witness_id", "witness_kind")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}


def grid_axis(n: int) -> np.ndarray:
    """``n`` equally spaced angles covering ``[0, 2 pi)``."""
    if n < 1:
        raise ValueError("grid size must be at least 1 per axis")
    return 2.0 * math.pi * np.arange(n) / n


def _survey_block(block: list[tuple[float, float, float]]) -> list[SurveyRow]:
    rots = np.stack([rotation_from_angles(a) for a in block])
    vmax, ps, wid = threshold_batch(rots)
    kinds = facet_kinds()
    return [
        SurveyRow(t, g, d, float(v), float(p), int(w), str(kinds[w]))
        for (t, g, d), v, p, w in zip(block, vmax, ps, wid)
    ]


def threshold_survey(
    shape: tuple[int, int, int], workers: int = 1, block_size: int = 1024
) -> Iterator[SurveyRow]:
    """Stream threshold reports over a regular ``(theta, gamma, delta)`` grid in row-major order.

    Blocks may be evaluated in worker processes; results are yielded in grid
    order so the output never depends on ``workers``.
    """
    axes = [grid_axis(n) for n in shape]
    points = itertools.product(*(a.tolist() for a in axes))
    blocks = iter(lambda: list(itertools.islice(points, block_size)), [])
    if workers <= 1:
        for block in blocks:
            yield from _survey_block(block)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for rows in pool.map(_survey_block, blocks):
            yield from rows
