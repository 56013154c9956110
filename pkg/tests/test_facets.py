import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_threshold.clifford import clifford_stack
from clifford_threshold.facets import (
    SEED_B,
    classify,
    enumerate_b_facets_direct,
    enumerate_facets,
    facet_by_key,
    facet_stack,
    facet_values,
    polytope_membership,
    vertices_per_facet,
)

FACETS = enumerate_facets()
KEYS = {f.key for f in FACETS}
CS = clifford_stack()


def _hyperplane_oracle():
    """Every {-1,0,1} 3x3 matrix whose vertex maximum is 1 and whose tight vertices span 8 dimensions."""
    cands = np.array(list(itertools.product((-1, 0, 1), repeat=9)), dtype=np.int64)
    v = CS.reshape(24, 9)
    vals = cands @ v.T
    cands, vals = cands[vals.max(axis=1) == 1], vals[vals.max(axis=1) == 1]
    out = set()
    for f, row in zip(cands, vals):
        tight = v[row == 1].astype(float)
        if len(tight) >= 9 and np.linalg.matrix_rank(tight) == 9:
            out.add(tuple(f))
    return out


def test_counts():
    assert len(FACETS) == 120
    kinds = [f.kind for f in FACETS]
    assert (kinds.count("A"), kinds.count("AT"), kinds.count("B")) == (24, 24, 72)
    assert [f.id for f in FACETS] == list(range(120))


def test_matches_independent_hyperplane_enumeration():
    assert _hyperplane_oracle() == KEYS


def test_direct_b_construction_matches_orbit():
    direct = enumerate_b_facets_direct()
    assert len(direct) == 72
    assert {tuple(np.asarray(m).ravel()) for m in direct} == {f.key for f in FACETS if f.kind == "B"}


def test_canonical_b_present():
    f = facet_by_key(SEED_B)
    assert f is not None and f.kind == "B"


def test_b_determinant():
    for f in FACETS:
        if f.kind == "B":
            assert round(np.linalg.det(f.matrix)) == -2


def test_entries_and_supporting():
    vals = facet_stack().reshape(120, 9) @ CS.reshape(24, 9).T
    assert vals.max(axis=1).tolist() == [1] * 120
    assert set(np.unique(facet_stack())) <= {-1, 0, 1}
    counts = vertices_per_facet()
    assert counts.shape == (120,) and (counts >= 9).all()


def test_closure_under_symmetries():
    for f in FACETS:
        assert tuple(f.matrix.T.ravel()) in KEYS
        for ci, cj in itertools.product(CS[::5], CS[::7]):
            assert tuple((ci @ f.matrix @ cj).ravel()) in KEYS


def test_classify_examples():
    assert classify(np.array([[1, 0, 0]] * 3)) == "A"
    assert classify(np.array([[1, 0, 0]] * 3).T) == "AT"
    assert classify(SEED_B) == "B"


def test_to_dict():
    d = FACETS[0].to_dict()
    assert set(d) == {"id", "kind", "matrix"}
    assert np.array(d["matrix"]).shape == (3, 3)


def test_membership_examples():
    assert polytope_membership(np.eye(3)).inside
    assert polytope_membership(np.zeros((3, 3))).inside
    v = polytope_membership(1.01 * np.eye(3))
    assert not v.inside and v.value == pytest.approx(1.01)


def test_membership_integer_input_is_exact():
    for c in CS:
        v = polytope_membership(c)
        assert v.inside and v.value == 1


def test_membership_witness_lowest_id():
    v = polytope_membership(2 * np.eye(3))
    vals = facet_values(2 * np.eye(3))
    assert v.witness.id == int(np.flatnonzero(vals == vals.max())[0])


rot_idx = st.integers(0, 23)


@settings(max_examples=200, deadline=None)
@given(rot_idx, rot_idx, st.lists(st.floats(-2, 2), min_size=9, max_size=9))
def test_facet_values_symmetric(i, j, entries):
    m = np.array(entries).reshape(3, 3)
    a = np.sort(facet_values(m))
    b = np.sort(facet_values(CS[i] @ m @ CS[j]))
    c = np.sort(facet_values(m.T))
    np.testing.assert_allclose(a, b, atol=1e-12)
    np.testing.assert_allclose(a, c, atol=1e-12)
