"""Depolarizing-noise thresholds for single-qubit gates relative to the Clifford polytope."""

from .clifford import CliffordElement, clifford_lookup, clifford_multiply, enumerate_cliffords
from .decomposition import decompose, membership_cross_check
from .estimators import CliffordPolytope, ConvexDecomposer, FacetTransformer, NoiseThreshold
from .facets import (
    Facet,
    enumerate_b_facets_direct,
    enumerate_facets,
    facet_inner_product,
    polytope_membership,
)
from .postselection import (
    TwoQubitPauli,
    facet_violation_equivalence,
    octahedron_membership,
    postselect_formula_yx,
    postselect_oracle,
)
from .so3 import (
    GateAngles,
    depolarize,
    pauli_coefficients,
    rotation_from_unitary,
    unitary_from_angles,
)
from .threshold import ThresholdReport, threshold, threshold_from_angles, threshold_survey
from .tightness import (
    canonicalize,
    check_sign_pattern,
    run_verification,
    verify_global_dominance,
    verify_key_inequality,
    verify_norm_lemma,
)

__version__ = "0.1.0"
