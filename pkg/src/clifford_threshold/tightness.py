"""Machine checks of the dominance theorem: every rotation's best A-type facet
value is matched or beaten by some B-type facet.

The proof runs in three moves, each checked here on sampled rotations:

1. use the two-sided Clifford symmetry (and transposition) to bring ``R`` to a
   canonical form in which the all-ones first column is the best A-type facet
   and ``-R[0, 1]`` is the largest-magnitude entry outside that column;
2. confirm the canonical form has one of four sign patterns;
3. show ``Rc . (B - A) = ||v||_1 - ||u||_1 >= 0`` with ``u = (R11, R12)``,
   ``v = (R23, R33)``, via the two-vector norm lemma.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .clifford import clifford_stack
from .exceptions import InternalConsistencyError, TheoremViolation
from .facets import SEED_A, SEED_B, facet_kinds, facet_stack
from .sampling import chunk_rng, haar_rotations, stress_rotations
from .so3 import as_rotation

TIE_TOL = 1e-12
VIOLATION_TOL = 1e-9
WILDCARD = 1e-9
FORM_TOL = 1e-12

A_CANON = SEED_A
B_CANON = SEED_B
CYCLE = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=np.int64)
QUARTER = np.array([[1, 0, 0], [0, 0, 1], [0, -1, 0]], dtype=np.int64)

SIGN_PATTERNS = np.array(
    [
        [[1, -1, 1], [1, 1, -1], [1, 1, 1]],
        [[1, -1, -1], [1, 1, -1], [1, 1, 1]],
        [[1, -1, -1], [1, 1, -1], [1, -1, 1]],
        [[1, -1, 1], [1, -1, -1], [1, 1, 1]],
    ],
    dtype=np.int64,
)


@lru_cache(maxsize=1)
def a_prime_matrices() -> np.ndarray:
    """The 12 matrices ``A + (+-1 at one entry outside the first column)``.

    Built as the orbit ``CYCLE^j A'_1 QUARTER^k`` and ordered by the position
    of the extra entry (row-major), negative before positive, so index 0 is
    ``A'_1`` (``-1`` at ``(1, 2)``) and index 11 has ``+1`` at ``(3, 3)``.
    """
    a1 = A_CANON.copy()
    a1[0, 1] = -1
    orbit = {}
    for j, k in itertools.product(range(1, 4), range(1, 5)):
        m = np.linalg.matrix_power(CYCLE, j) @ a1 @ np.linalg.matrix_power(QUARTER, k)
        orbit[tuple(m.ravel())] = m
    if len(orbit) != 12:
        raise InternalConsistencyError(f"A' orbit has {len(orbit)} elements, expected 12")

    def order(m):
        extra = m - A_CANON
        (i, j), = np.argwhere(extra != 0)
        return (i, j, extra[i, j])

    mats = sorted(orbit.values(), key=order)
    arr = np.stack(mats)
    arr.setflags(write=False)
    return arr


def a_type_max(r: np.ndarray) -> np.ndarray:
    """Best A/AT facet value: the largest column or row L1 norm. Batched."""
    ab = np.abs(r)
    return np.maximum(ab.sum(axis=-2).max(axis=-1), ab.sum(axis=-1).max(axis=-1))


@lru_cache(maxsize=1)
def _b_stack() -> np.ndarray:
    fs = facet_stack()[facet_kinds() == "B"].reshape(72, 9).astype(float)
    fs.setflags(write=False)
    return fs


def b_type_max(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return (r.reshape(r.shape[:-2] + (9,)) @ _b_stack().T).max(axis=-1)


@dataclass(frozen=True)
class CanonicalizationRecord:
    left: int
    right: int
    transposed: bool
    canonical_rotation: np.ndarray

    def apply(self, r: np.ndarray) -> np.ndarray:
        cs = clifford_stack()
        base = r.T if self.transposed else r
        return cs[self.left] @ base @ cs[self.right]

    def pull_back_facet(self, f: np.ndarray) -> np.ndarray:
        """Facet ``G`` with ``R . G == Rc . f`` for the original (untransformed) rotation."""
        cs = clifford_stack()
        g = cs[self.left].T @ f @ cs[self.right].T
        return g.T if self.transposed else g


def offcolumn_rank(rc: np.ndarray) -> np.ndarray:
    """Ranking key for the magnitudes of entries in columns 2-3; larger key = larger entry.

    Entries above 1/sqrt(2) in magnitude (at most one per row) are ranked by
    the rest of their row: ``R_ij^2 = 1 - sum_{k != j} R_ik^2`` keeps the
    ordering of near-unit entries that rounding erases from ``|R_ij|``,
    whose gaps are ~eps^2 for perturbations ~eps. They rank above every
    smaller entry, which keep their plain squares.
    """
    rc = np.asarray(rc, dtype=float)
    sq = rc * rc
    rest = np.stack(
        [sq[..., 1] + sq[..., 2], sq[..., 0] + sq[..., 2], sq[..., 0] + sq[..., 1]], axis=-1
    )
    # large entries land in [-0.5, 0], small ones in [-10, -9]; no rounding of rest
    key = np.where(sq > 0.5, -rest, sq - 10.0)
    return key[..., :, 1:]


def _is_canonical(rc: np.ndarray, a_max: float | np.ndarray) -> np.ndarray:
    """Both canonical conditions, batched over leading axes."""
    col = rc[..., :, 0].sum(axis=-1)
    cond_a = col >= a_max - TIE_TOL
    vals = np.einsum("...ij,kij->...k", rc, a_prime_matrices())
    cond_b = vals[..., 0] >= vals.max(axis=-1) - TIE_TOL
    return cond_a & cond_b


def canonicalize(rotation) -> CanonicalizationRecord:
    """Exhaustive scan of the 24 x 24 x 2 symmetry moves, first hit in ``(left, right, transposed)`` order.

    Raises :class:`TheoremViolation` if no move satisfies both conditions.
    """
    r = as_rotation(rotation)
    cs = clifford_stack().astype(float)
    bases = np.stack([r, r.T])
    rc = np.einsum("lij,tjk,rkm->lrtim", cs, bases, cs)
    ok = _is_canonical(rc, float(a_type_max(r)))
    hits = np.argwhere(ok)
    if hits.size == 0:
        raise TheoremViolation("no Clifford symmetry brings the rotation to canonical form")
    # among tolerance-level ties prefer a record whose (1, 2) entry is the largest
    # in exact arithmetic too
    sq = offcolumn_rank(rc[tuple(hits.T)]).reshape(len(hits), 6)
    exact = sq[:, 0] >= sq.max(axis=1)
    left, right, t = (int(v) for v in hits[int(np.argmax(exact))]) if exact.any() else hits[0]
    return CanonicalizationRecord(left, right, bool(t), rc[left, right, t])


# --- batched constructive canonicalization -------------------------------------------------

_CYCLE_POWERS = np.stack([np.linalg.matrix_power(CYCLE, k) for k in range(3)])
_QUARTER_POWERS = np.stack([np.linalg.matrix_power(QUARTER, k) for k in range(4)])


@lru_cache(maxsize=1)
def _clifford_code_table() -> np.ndarray:
    """Lookup from the base-3 code of a signed permutation to its canonical index (-1 if absent)."""
    table = np.full(3**9, -1, dtype=np.int64)
    table[_codes(clifford_stack())] = np.arange(24)
    return table


def _codes(mats: np.ndarray) -> np.ndarray:
    flat = (np.asarray(mats).reshape(-1, 9) + 1).astype(np.int64)
    return flat @ (3 ** np.arange(9))


@dataclass(frozen=True)
class CanonicalBatch:
    canonical: np.ndarray  # (n, 3, 3)
    left: np.ndarray  # (n,) Clifford indices
    right: np.ndarray
    transposed: np.ndarray  # (n,) bool
    left_mats: np.ndarray = field(repr=False)
    right_mats: np.ndarray = field(repr=False)

    def pull_back(self, f: np.ndarray) -> np.ndarray:
        g = np.einsum("nji,jk,nlk->nil", self.left_mats, f, self.right_mats)
        return np.where(self.transposed[:, None, None], np.swapaxes(g, 1, 2), g)


def canonicalize_batch(rotations: np.ndarray) -> CanonicalBatch:
    """Constructive canonical form for many rotations at once.

    Not the same scan order as :func:`canonicalize`; any record satisfying
    the two canonical conditions serves the proof. Steps: transpose if a row
    has the largest L1 norm, cycle that column to the front, fix first-column
    signs with a determinant-one pair of sign matrices, cycle the row holding
    the largest off-column magnitude to the top, and quarter-turn the last
    two columns until that entry sits at ``(1, 2)`` with negative sign.
    """
    r = np.asarray(rotations, dtype=float)
    n = r.shape[0]
    ab = np.abs(r)
    transposed = ab.sum(axis=-1).max(axis=-1) > ab.sum(axis=-2).max(axis=-1)
    base = np.where(transposed[:, None, None], np.swapaxes(r, 1, 2), r)

    col = np.abs(base).sum(axis=1).argmax(axis=1)
    # right-multiplying by CYCLE^k sends column j to column (j - k) % 3
    right = _CYCLE_POWERS[col % 3]
    m = base @ right

    d = np.where(m[:, :, 0] < 0, -1, 1)
    e1 = d.prod(axis=1)
    left = (d * e1[:, None])[:, :, None] * np.eye(3, dtype=np.int64)
    e = np.stack([e1, e1, np.ones(n, dtype=np.int64)], axis=1)
    right = right * e[:, None, :]
    m = left @ base @ right

    off = offcolumn_rank(m).reshape(n, 6).argmax(axis=1)
    row = off // 2
    # left-multiplying by CYCLE^k sends row i to row (i + k) % 3
    shift = _CYCLE_POWERS[(-row) % 3]
    left = shift @ left
    m = shift @ m
    cand = np.einsum("nij,kjl->nkil", m, _QUARTER_POWERS.astype(float))[:, :, 0, 1]
    k = cand.argmin(axis=1)
    right = right @ _QUARTER_POWERS[k]
    m = m @ _QUARTER_POWERS[k]

    table = _clifford_code_table()
    li, ri = table[_codes(left)], table[_codes(right)]
    if (li < 0).any() or (ri < 0).any():
        raise InternalConsistencyError("canonicalizing move left the Clifford group")
    return CanonicalBatch(m, li, ri, transposed, left, right)


def check_sign_pattern(rc) -> int | None:
    """Index 1..4 of the matching sign pattern (entries within 1e-9 of zero match either sign)."""
    k = int(sign_pattern_batch(np.asarray(rc, dtype=float)[None])[0])
    return k or None


def sign_pattern_batch(rc: np.ndarray) -> np.ndarray:
    """Pattern index 1..4 per matrix, 0 for no match; lowest index wins when wildcards allow several."""
    s = np.sign(rc).astype(np.int64)
    wild = np.abs(rc) < WILDCARD
    match = ((s[:, None] == SIGN_PATTERNS[None]) | wild[:, None]).all(axis=(2, 3))
    return np.where(match.any(axis=1), match.argmax(axis=1) + 1, 0)


def two_vectors(rc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``u = (R11, R12)`` and ``v = (R23, R33)`` (1-indexed), batched."""
    rc = np.asarray(rc, dtype=float)
    return rc[..., 0, :2], np.stack([rc[..., 1, 2], rc[..., 2, 2]], axis=-1)


def key_margin(rc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``Rc . (B - A)`` and ``||v||_1 - ||u||_1``, batched."""
    rc = np.asarray(rc, dtype=float)
    margin = np.einsum("...ij,ij->...", rc, (B_CANON - A_CANON).astype(float))
    u, v = two_vectors(rc)
    return margin, np.abs(v).sum(axis=-1) - np.abs(u).sum(axis=-1)


def verify_key_inequality(rc) -> float:
    """Margin of the key inequality for one canonical rotation.

    Also recomputes the margin through the two-vector form and requires the
    two to agree within 1e-12.
    """
    rc = np.asarray(rc, dtype=float)
    margin, norm_form = (float(x) for x in key_margin(rc))
    if abs(margin - norm_form) > FORM_TOL:
        raise InternalConsistencyError(
            f"matrix form {margin!r} and two-vector form {norm_form!r} disagree"
        )
    if margin < -VIOLATION_TOL:
        raise TheoremViolation(f"key inequality margin {margin!r} is negative")
    return margin


@dataclass(frozen=True)
class DominanceRecord:
    max_a: float
    max_b: float

    @property
    def gap(self) -> float:
        return self.max_b - self.max_a


def verify_global_dominance(rotation) -> DominanceRecord:
    """Best A/AT value against best B value over the full facet list."""
    r = np.asarray(rotation, dtype=float)
    vals = facet_stack().reshape(120, 9).astype(float) @ r.ravel()
    kinds = facet_kinds()
    return DominanceRecord(float(vals[kinds != "B"].max()), float(vals[kinds == "B"].max()))


@dataclass(frozen=True)
class NormLemmaStats:
    samples: int
    violations: int
    min_slack: float


def verify_norm_lemma(samples: int, seed: int = 0) -> NormLemmaStats:
    """Random equal-L2 pairs: the one with the larger max-norm never has the larger L1 norm.

    Slack is ``||v||_1 - ||u||_1`` with ``u`` the larger-max-norm vector.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = chunk_rng(seed, 0)
    radius = rng.exponential(size=samples)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=(2, samples))
    u = radius * np.stack([np.cos(phi[0]), np.sin(phi[0])])
    v = radius * np.stack([np.cos(phi[1]), np.sin(phi[1])])
    swap = np.abs(u).max(axis=0) < np.abs(v).max(axis=0)
    u, v = np.where(swap, v, u), np.where(swap, u, v)
    slack = np.abs(v).sum(axis=0) - np.abs(u).sum(axis=0)
    bad = slack < -FORM_TOL * np.maximum(radius, 1.0)
    return NormLemmaStats(samples, int(bad.sum()), float(slack.min()))


# --- bulk verification ------------------------------------------------------------------------

CHUNK = 50_000
MAX_LISTED = 100
SCALING_RATES = (0.0, 0.25, 0.45)


@dataclass
class ChunkStats:
    count: int = 0
    min_gap: float = np.inf
    min_margin: float = np.inf
    max_form_discrepancy: float = 0.0
    max_det_identity_residual: float = 0.0
    histogram: np.ndarray = field(default_factory=lambda: np.zeros(5, dtype=np.int64))
    violations: list = field(default_factory=list)
    violation_count: int = 0

    def merge(self, other: ChunkStats) -> None:
        self.count += other.count
        self.min_gap = min(self.min_gap, other.min_gap)
        self.min_margin = min(self.min_margin, other.min_margin)
        self.max_form_discrepancy = max(self.max_form_discrepancy, other.max_form_discrepancy)
        self.max_det_identity_residual = max(self.max_det_identity_residual, other.max_det_identity_residual)
        self.histogram = self.histogram + other.histogram
        self.violation_count += other.violation_count
        room = MAX_LISTED - len(self.violations)
        self.violations.extend(other.violations[:room])


def check_rotations(r: np.ndarray, source: str, offset: int = 0) -> ChunkStats:
    """Run every theorem check on a stack of rotations and aggregate."""
    st = ChunkStats(count=len(r))
    max_a, max_b = a_type_max(r), b_type_max(r)
    gap = max_b - max_a

    cb = canonicalize_batch(r)
    rc = cb.canonical
    canon_ok = _is_canonical(rc, max_a)
    pattern = sign_pattern_batch(rc)
    margin, norm_form = key_margin(rc)
    strict = pattern > 0

    # entry (1, 2) dominates the rest of columns 2-3 in magnitude
    off = np.abs(rc[:, :, 1:]).reshape(-1, 6).max(axis=1)
    dom_ok = -rc[:, 0, 1] >= off - VIOLATION_TOL
    first_col_ok = (rc[:, :, 0] >= -TIE_TOL).all(axis=1) & (rc[:, 0, 1] <= TIE_TOL)

    det_res = np.abs(r[:, 0, 1] + (r[:, 1, 0] * r[:, 2, 2] - r[:, 1, 2] * r[:, 2, 0]))

    g = cb.pull_back(B_CANON)
    back_vals = np.einsum("nij,nij->n", r, g)
    codes = _codes(g)
    b_codes = np.zeros(3**9, dtype=bool)
    b_codes[_codes(facet_stack()[facet_kinds() == "B"])] = True
    back_ok = b_codes[codes] & (np.abs(back_vals - np.einsum("nij,ij->n", rc, B_CANON)) < FORM_TOL)

    scaling_ok = np.ones(len(r), dtype=bool)
    for p in SCALING_RATES:
        scaling_ok &= ~(((1 - p) * max_a > 1) & ~((1 - p) * back_vals > 1))

    checks = {
        "gap": gap >= -VIOLATION_TOL,
        "canonical-form": canon_ok & first_col_ok,
        "sign-pattern": strict,
        "key-inequality": margin >= -VIOLATION_TOL,
        "two-vector-form": np.abs(margin - norm_form) <= FORM_TOL,
        "entry-dominance": dom_ok,
        "determinant-identity": det_res < VIOLATION_TOL,
        "facet-pullback": back_ok,
        "scaling-corollary": scaling_ok,
    }
    for name, ok in checks.items():
        for i in np.flatnonzero(~ok):
            st.violation_count += 1
            if len(st.violations) < MAX_LISTED:
                st.violations.append({"source": source, "index": int(offset + i), "check": name})

    st.min_gap = float(gap.min())
    st.min_margin = float(margin.min())
    st.max_form_discrepancy = float(np.abs(margin - norm_form).max())
    st.max_det_identity_residual = float(det_res.max())
    st.histogram = np.bincount(pattern, minlength=5)
    return st


def _haar_chunk(args: tuple[int, int, int]) -> ChunkStats:
    seed, chunk, n = args
    r = haar_rotations(n, chunk_rng(seed, chunk))
    return check_rotations(r, "haar", chunk * CHUNK)


@dataclass
class VerificationReport:
    samples: int
    stress_samples: int
    seed: int
    stats: ChunkStats
    norm_lemma: NormLemmaStats | None = None

    @property
    def violations(self) -> list:
        return self.stats.violations

    @property
    def ok(self) -> bool:
        lemma_ok = self.norm_lemma is None or self.norm_lemma.violations == 0
        return self.stats.violation_count == 0 and lemma_ok

    def to_dict(self) -> dict:
        h = self.stats.histogram
        out = {
            "samples": self.samples,
            "stress_samples": self.stress_samples,
            "seed": self.seed,
            "min_gap": self.stats.min_gap,
            "min_margin": self.stats.min_margin,
            "max_form_discrepancy": self.stats.max_form_discrepancy,
            "max_det_identity_residual": self.stats.max_det_identity_residual,
            "sign_pattern_histogram": [int(x) for x in h[1:]],
            "no_match": int(h[0]),
            "violation_count": self.stats.violation_count,
            "violations": self.stats.violations,
        }
        if self.norm_lemma is not None:
            out["norm_lemma"] = {
                "samples": self.norm_lemma.samples,
                "violations": self.norm_lemma.violations,
                "min_slack": self.norm_lemma.min_slack,
            }
        return out


def run_verification(
    samples: int,
    seed: int = 0,
    workers: int = 1,
    stress: bool = True,
    norm_lemma_samples: int = 0,
) -> VerificationReport:
    """Haar sampling plus the structured stress set, chunked so output is worker-independent."""
    if samples < 1 or workers < 1:
        raise ValueError("samples and workers must be positive")
    jobs = [(seed, k, min(CHUNK, samples - k * CHUNK)) for k in range(-(-samples // CHUNK))]
    total = ChunkStats()
    if workers == 1:
        results = map(_haar_chunk, jobs)
        for st in results:
            total.merge(st)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for st in pool.map(_haar_chunk, jobs):
                total.merge(st)
    n_stress = 0
    if stress:
        sr = stress_rotations(seed=seed)
        n_stress = len(sr)
        total.merge(check_rotations(sr, "stress"))
    lemma = verify_norm_lemma(norm_lemma_samples, seed) if norm_lemma_samples else None
    return VerificationReport(samples, n_stress, seed, total, lemma)
