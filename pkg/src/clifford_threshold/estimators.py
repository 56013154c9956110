"""scikit-learn style front end.

Rows of ``X`` are 3x3 matrices, flattened row-major to 9 features (a
``(n, 3, 3)`` stack is accepted too). Nothing is learned from data: ``fit``
validates its input and materializes the facet and vertex tables, so the
estimators compose with ``Pipeline``, ``clone`` and friends.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, OutlierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .clifford import clifford_stack
from .decomposition import decompose
from .exceptions import InvalidArgumentError
from .facets import EPS_FACET, facet_kinds, facet_stack
from .so3 import EPS_ORTH, rotation_from_angles
from .threshold import p_star_from_value, witness_index


def check_matrices(X, *, rotations: bool = False) -> np.ndarray:
    """Coerce ``X`` to a float ``(n, 9)`` array; optionally require every row to be in SO(3)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 3 and X.shape[1:] == (3, 3):
        X = X.reshape(len(X), 9)
    elif X.shape == (3, 3):
        X = X.reshape(1, 9)
    X = check_array(X, dtype=float, ensure_all_finite=True)
    if X.shape[1] != 9:
        raise InvalidArgumentError(f"expected 9 features per row (a flattened 3x3 matrix), got {X.shape[1]}")
    if rotations:
        m = X.reshape(-1, 3, 3)
        orth = np.abs(np.einsum("nji,njk->nik", m, m) - np.eye(3)).max(axis=(1, 2))
        det = np.abs(np.linalg.det(m) - 1.0)
        bad = np.flatnonzero((orth >= EPS_ORTH) | (det >= EPS_ORTH))
        if bad.size:
            raise InvalidArgumentError(f"rows {bad[:5].tolist()} are not rotations within 1e-9")
    return X


def check_angles(X) -> np.ndarray:
    X = check_array(X, dtype=float, ensure_all_finite=True)
    if X.shape[1] != 3:
        raise InvalidArgumentError(f"expected 3 angle columns (theta, gamma, delta), got {X.shape[1]}")
    return X


class FacetTransformer(TransformerMixin, BaseEstimator):
    """Map each matrix to its inner products with the selected polytope facets.

    Parameters
    ----------
    kinds : tuple of str, default=("A", "AT", "B")
        Facet families to keep, in facet-id order.
    """

    def __init__(self, kinds=("A", "AT", "B")):
        self.kinds = kinds

    def fit(self, X=None, y=None):
        if X is not None:
            check_matrices(X)
        bad = set(self.kinds) - {"A", "AT", "B"}
        if bad:
            raise InvalidArgumentError(f"unknown facet kinds {sorted(bad)}")
        mask = np.isin(facet_kinds(), list(self.kinds))
        self.facet_ids_ = np.flatnonzero(mask)
        self.facets_ = facet_stack()[mask].reshape(-1, 9).astype(float)
        self.n_features_in_ = 9
        return self

    def transform(self, X):
        check_is_fitted(self, "facets_")
        return check_matrices(X) @ self.facets_.T

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "facets_")
        return np.array([f"facet_{i}" for i in self.facet_ids_], dtype=object)


class CliffordPolytope(OutlierMixin, BaseEstimator):
    """Membership in the Clifford polytope, with the outlier-detector conventions.

    ``predict`` returns +1 for matrices inside the polytope (mixtures of
    Clifford rotations) and -1 for those outside. ``decision_function`` is
    ``1 - max_F M.F``: non-negative exactly on the polytope.

    Parameters
    ----------
    eps : float, default=1e-9
        Slack allowed on the facet inequalities.
    """

    def __init__(self, eps=EPS_FACET):
        self.eps = eps

    def fit(self, X=None, y=None):
        if X is not None:
            check_matrices(X)
        self.facets_ = facet_stack().reshape(120, 9).astype(float)
        self.vertices_ = clifford_stack().reshape(24, 9).astype(float)
        self.n_features_in_ = 9
        return self

    def score_samples(self, X):
        check_is_fitted(self, "facets_")
        return -(check_matrices(X) @ self.facets_.T).max(axis=1)

    def decision_function(self, X):
        return 1.0 + self.score_samples(X)

    def predict(self, X):
        return np.where(self.decision_function(X) >= -self.eps, 1, -1)


class NoiseThreshold(TransformerMixin, BaseEstimator):
    """Per-gate depolarizing threshold.

    ``transform`` returns two columns: the largest facet value and the
    threshold noise rate ``p*``. ``predict`` returns ``p*`` alone and
    ``witness`` the facet id attaining the maximum.

    Parameters
    ----------
    input : {"rotation", "angles"}, default="rotation"
        Whether rows are flattened SO(3) matrices or ``(theta, gamma, delta)``.
    """

    def __init__(self, input="rotation"):
        self.input = input

    def _rotations(self, X) -> np.ndarray:
        if self.input == "angles":
            return np.stack([rotation_from_angles(tuple(row)) for row in check_angles(X)]).reshape(-1, 9)
        if self.input == "rotation":
            return check_matrices(X, rotations=True)
        raise InvalidArgumentError(f"input must be 'rotation' or 'angles', got {self.input!r}")

    def fit(self, X=None, y=None):
        if X is not None:
            self._rotations(X)
        self.facets_ = facet_stack().reshape(120, 9).astype(float)
        self.n_features_in_ = 3 if self.input == "angles" else 9
        return self

    def _values(self, X):
        check_is_fitted(self, "facets_")
        return self._rotations(X) @ self.facets_.T

    def transform(self, X):
        vmax = self._values(X).max(axis=1)
        return np.column_stack([vmax, p_star_from_value(vmax)])

    def predict(self, X):
        return self.transform(X)[:, 1]

    def witness(self, X):
        return witness_index(self._values(X))

    def get_feature_names_out(self, input_features=None):
        return np.array(["max_inner_product", "p_star"], dtype=object)


class ConvexDecomposer(TransformerMixin, BaseEstimator):
    """Convex weights over the 24 Clifford vertices (canonical order); NaN rows where infeasible."""

    def fit(self, X=None, y=None):
        if X is not None:
            check_matrices(X)
        self.vertices_ = clifford_stack().reshape(24, 9).astype(float)
        self.n_features_in_ = 9
        return self

    def transform(self, X):
        check_is_fitted(self, "vertices_")
        X = check_matrices(X)
        out = np.full((len(X), 24), np.nan)
        for i, row in enumerate(X):
            res = decompose(row)
            if res.feasible:
                out[i] = res.weights
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array([f"clifford_{i}" for i in range(24)], dtype=object)
