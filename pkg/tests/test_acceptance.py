"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import time
from functools import lru_cache

import numpy as np
import pytest

from clifford_threshold import clifford, facets
from clifford_threshold.clifford import clifford_stack, enumerate_cliffords
from clifford_threshold.decomposition import membership_cross_check
from clifford_threshold.facets import enumerate_b_facets_direct, enumerate_facets, facet_values
from clifford_threshold.postselection import (
    ALL_MEASUREMENTS,
    facet_violation_equivalence,
    postselect_formula_yx,
    postselect_oracle,
)
from clifford_threshold.sampling import chunk_rng, haar_rotations, random_unitaries
from clifford_threshold.so3 import rotation_from_unitary
from clifford_threshold.threshold import threshold
from clifford_threshold.tightness import run_verification, verify_norm_lemma

SEED = 2024
BAND = 1e-9


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {label}: {'PASS' if ok else 'FAIL'} -- {detail}")
        return ok

    return emit


def test_c1_structure_counts(report):
    clifford._enumerate.cache_clear()
    facets._facets.cache_clear()
    t0 = time.perf_counter()
    cl = enumerate_cliffords()
    fs = enumerate_facets()
    direct = enumerate_b_facets_direct()
    elapsed = time.perf_counter() - t0
    kinds = [f.kind for f in fs]
    split = (kinds.count("A"), kinds.count("AT"), kinds.count("B"))
    same_b = {tuple(np.asarray(m).ravel()) for m in direct} == {f.key for f in fs if f.kind == "B"}
    ok = len(cl) == 24 and len(fs) == 120 and split == (24, 24, 72) and len(direct) == 72 and same_b
    ok = ok and elapsed < 1.0
    detail = f"cliffords={len(cl)} facets={len(fs)} split={split} direct_b={len(direct)} sets_equal={same_b} t={elapsed:.3f}s"
    assert report("C1 structure counts", ok, detail)


def test_c2_pi8_threshold(report):
    u = np.diag([np.exp(1j * np.pi / 8), np.exp(-1j * np.pi / 8)])
    rep = threshold(rotation_from_unitary(u))
    expected = float(1 - 1 / (2 * np.sqrt(2) - 1))
    err = abs(rep.p_star - expected)
    times = []
    for _ in range(50):
        t0 = time.perf_counter()
        threshold(rotation_from_unitary(u))
        times.append(time.perf_counter() - t0)
    best = min(times)
    ok = err <= 1e-12 and rep.witness_kind == "B" and best < 1e-3
    detail = f"p*={rep.p_star!r} (closed form {expected!r}, err={err:.1e}) witness={rep.witness_kind} t={best * 1e3:.3f}ms"
    assert report("C2 pi/8 threshold", ok, detail)


@pytest.mark.slow
def test_c3_theorem_verification(report):
    t0 = time.perf_counter()
    rep = run_verification(10**6, seed=SEED, workers=1, stress=True)
    elapsed = time.perf_counter() - t0
    d = rep.to_dict()
    ok = (
        d["min_gap"] >= -1e-9
        and d["violation_count"] == 0
        and d["min_margin"] >= -1e-9
        and d["no_match"] == 0
        and elapsed < 60
    )
    detail = (
        f"haar={d['samples']} stress={d['stress_samples']} min_gap={d['min_gap']:.3e} "
        f"min_margin={d['min_margin']:.3e} violations={d['violation_count']} "
        f"patterns={d['sign_pattern_histogram']} no_match={d['no_match']} t={elapsed:.1f}s"
    )
    assert report("C3 theorem verification", ok, detail)


def test_c4_oracle_equivalence(report):
    us = random_unitaries(1000, chunk_rng(SEED, 4))
    worst_vec = worst_sum = 0.0
    for u in us:
        oracle = postselect_oracle(u, "YX", 1).bloch
        formula = postselect_formula_yx(rotation_from_unitary(u))
        worst_vec = max(worst_vec, float(np.abs(oracle - formula).max()))
        for meas in ALL_MEASUREMENTS:
            total = sum(postselect_oracle(u, meas, s).accept_probability for s in (1, -1))
            worst_sum = max(worst_sum, abs(total - 1.0))
    ok = worst_vec <= 1e-12 and worst_sum <= 1e-12
    detail = f"gates=1000 max|oracle-formula|={worst_vec:.2e} max|sum q - 1|={worst_sum:.2e}"
    assert report("C4 oracle equivalence", ok, detail)


@lru_cache(maxsize=1)
def _equivalence_counts():
    rots = haar_rotations(1000, chunk_rng(SEED, 5))
    b = [f for f in enumerate_facets() if f.kind == "B"]
    counted = literal = oriented = forward = union = 0
    for r in rots:
        recs = [facet_violation_equivalence(r, f) for f in b]
        for rec in recs:
            fv, l1, ys = rec.facet_value - 1, rec.l1_norm - 1, rec.oriented_sum - 1
            if abs(fv) > BAND and abs(l1) > BAND:
                counted += 1
                literal += (fv > 0) != (l1 > 0)
                forward += fv > 0 and not l1 > 0
            if abs(fv) > BAND and abs(ys) > BAND:
                oriented += (fv > 0) != (ys > 0)
        # the four Pauli-corrected siblings of one measurement combine into the L1 condition
        groups = {}
        for rec in recs:
            groups.setdefault(rec.recipe[:2], []).append(rec)
        for sib in groups.values():
            top = max(s.facet_value for s in sib) - 1
            l1 = sib[0].l1_norm - 1
            if abs(top) > BAND and abs(l1) > BAND:
                union += (top > 0) != (l1 > 0)
    return counted, literal, oriented, forward, union


def test_c5_supplement_facet_octahedron_forms(report):
    _, _, oriented, forward, union = _equivalence_counts()
    ok = report("C5 supplement: facet vs oriented y+z per facet", oriented == 0, f"disagreements={oriented}")
    ok &= report("C5 supplement: facet violated => outside octahedron", forward == 0, f"counterexamples={forward}")
    ok &= report("C5 supplement: max over 4 sibling facets vs L1 norm", union == 0, f"disagreements={union}")
    assert ok


def test_c5_b_facet_octahedron_equivalence(report):
    counted, literal, _, _, _ = _equivalence_counts()
    ok = literal == 0
    detail = (
        f"per-facet sign(m.B-1) vs sign(|r_c|_1-1): pairs={counted} disagreements={literal}; "
        "Pauli corrections leave |r|_1 unchanged, so the 4 siblings share one norm"
    )
    assert report("C5 B-facet/octahedron equivalence (literal)", ok, detail)


def test_c6_membership_cross_check(report):
    rng = np.random.default_rng(SEED)
    cs = clifford_stack().astype(float)
    interior = np.tensordot(rng.dirichlet(np.ones(24), size=500), cs, axes=1)
    rots = haar_rotations(500, chunk_rng(SEED, 6))
    exterior = rots * (1.05 / facet_values(rots).max(axis=1))[:, None, None]
    statuses = {"interior": [], "exterior": []}
    for name, pts in (("interior", interior), ("exterior", exterior)):
        statuses[name] = [membership_cross_check(m).status for m in pts]
    disagree = sum(s == "disagree" for v in statuses.values() for s in v)
    ambiguous = sum(s == "boundary-ambiguous" for v in statuses.values() for s in v)
    inside_ok = all(s in ("agree-inside", "boundary-ambiguous") for s in statuses["interior"])
    outside_ok = all(s in ("agree-outside", "boundary-ambiguous") for s in statuses["exterior"])
    ok = disagree == 0 and inside_ok and outside_ok
    detail = f"interior=500 exterior=500 disagreements={disagree} ambiguous={ambiguous}"
    assert report("C6 membership cross-check", ok, detail)


def test_c7_symmetry_invariance(report):
    rots = haar_rotations(1000, chunk_rng(SEED, 7))
    cs = clifford_stack()
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    for r in rots:
        i, j = rng.integers(0, 24, size=2)
        v = threshold(r).max_inner_product
        worst = max(worst, abs(threshold(cs[i] @ r @ cs[j]).max_inner_product - v))
        worst = max(worst, abs(threshold(r.T).max_inner_product - v))
    clifford_p = [threshold(c).p_star for c in cs]
    ok = worst <= 1e-12 and all(p == 0.0 for p in clifford_p)
    detail = f"samples=1000 max deviation={worst:.2e} clifford p*={sorted(set(clifford_p))}"
    assert report("C7 symmetry invariance", ok, detail)


@pytest.mark.slow
def test_c8_norm_lemma(report):
    stats = verify_norm_lemma(10**6, seed=SEED)
    ok = stats.violations == 0
    detail = f"pairs={stats.samples} violations={stats.violations} min_slack={stats.min_slack:.3e}"
    assert report("C8 norm lemma", ok, detail)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
