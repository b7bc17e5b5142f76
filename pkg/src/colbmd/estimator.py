"""scikit-learn wrappers around the column-use decomposition."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bitmat import BitMatrix, bool_product, complement, transpose
from .decompose import (
    ALGORITHMS,
    PICK_LARGEST,
    TieBreak,
    approx_decompose,
    best_orientation,
)
from .qmatrix import ideal_response, mine_qmatrix
from .validation import check_binary_matrix


def _maximal_codes(x: BitMatrix, v: BitMatrix) -> BitMatrix:
    # largest W with W ∘ V <= X: W[r, t] = 1 iff row r of X contains row t of V
    return complement(bool_product(complement(x), transpose(v)))


class ColumnUseBMD(TransformerMixin, BaseEstimator):
    """Boolean matrix decomposition ``X ≈ U ∘ V`` with ``U`` made of columns of ``X``.

    Parameters
    ----------
    algorithm : {"pick-largest", "remove-smallest"}, default="pick-largest"
    coverage : float in (0, 1], default=1.0
        Fraction of the ones of ``X`` to cover. ``1.0`` is an exact decomposition.
    tie : {"first", "last", "random"}, default="first"
    random_state : int or None
        Seed, required when ``tie="random"``.
    both_orientations : bool, default=False
        Also decompose ``Xᵀ`` and keep the smaller result (exact runs only).

    Attributes
    ----------
    components_ : ndarray of shape (n_components_, n_features)
        The factor ``V``.
    columns_ : ndarray of int
        Source columns of ``U`` (source rows of ``V`` when ``orientation_`` is
        ``"rows"``).
    coverage_ : float
    decomposition_ : Decomposition
    """

    def __init__(self, algorithm=PICK_LARGEST, coverage=1.0, tie="first",
                 random_state=None, both_orientations=False):
        self.algorithm = algorithm
        self.coverage = coverage
        self.tie = tie
        self.random_state = random_state
        self.both_orientations = both_orientations

    def _validate_params(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not 0.0 < float(self.coverage) <= 1.0:
            raise ValueError(f"coverage must lie in (0, 1], got {self.coverage}")
        TieBreak(self.tie)
        if self.both_orientations and float(self.coverage) < 1.0:
            raise ValueError("both_orientations is only supported for exact runs")

    def fit(self, X, y=None):
        self._validate_params()
        m = check_binary_matrix(X)
        if self.both_orientations:
            d, orientation = best_orientation(m, self.algorithm, self.tie, self.random_state)
        else:
            d = approx_decompose(m, self.algorithm, float(self.coverage), self.tie,
                                 self.random_state)
            orientation = "columns"
        self.decomposition_ = d
        self.orientation_ = orientation
        self._V = d.V
        self.components_ = d.V.to_dense()
        self.columns_ = np.asarray(d.provenance, dtype=np.intp)
        self.n_components_ = d.k
        self.coverage_ = d.coverage
        self.n_features_in_ = m.n_cols
        return self

    def transform(self, X):
        """Largest code matrix ``W`` with ``W ∘ V <= X``.

        On the training matrix of an exact fit, ``W ∘ V`` reproduces ``X``.
        """
        check_is_fitted(self, "components_")
        x = check_binary_matrix(X)
        if x.n_cols != self.n_features_in_:
            raise ValueError(f"X has {x.n_cols} features, expected {self.n_features_in_}")
        return _maximal_codes(x, self._V).to_dense()

    def inverse_transform(self, W):
        check_is_fitted(self, "components_")
        w = check_binary_matrix(W, "W")
        if w.n_cols != self.n_components_:
            raise ValueError(f"W has {w.n_cols} columns, expected {self.n_components_}")
        return bool_product(w, self._V).to_dense()

    def reconstruction_coverage(self, X) -> float:
        """Fraction of the ones of ``X`` reproduced by ``transform`` then ``inverse_transform``."""
        x = check_binary_matrix(X)
        total = x.count()
        if total == 0:
            return 1.0
        recon = BitMatrix.from_dense(self.inverse_transform(self.transform(x)))
        return (recon & x).count() / total


class QMatrixMiner(TransformerMixin, BaseEstimator):
    """Learn knowledge states and a Q-matrix from an ideal response matrix.

    ``fit(R)`` sets ``q_matrix_`` (items x attributes) and
    ``knowledge_states_`` (students x attributes). ``transform(R)`` maps new
    response rows to knowledge states under the fitted Q-matrix and
    ``inverse_transform(A)`` predicts their ideal responses.
    """

    def __init__(self, algorithm=PICK_LARGEST, tie="first", random_state=None):
        self.algorithm = algorithm
        self.tie = tie
        self.random_state = random_state

    def fit(self, X, y=None):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        r = check_binary_matrix(X, "R")
        res = mine_qmatrix(r, self.algorithm, self.tie, self.random_state)
        self.result_ = res
        self._Q = res.Q
        self.q_matrix_ = res.Q.to_dense()
        self.knowledge_states_ = res.A.to_dense()
        self.items_ = np.asarray(res.item_provenance, dtype=np.intp)
        self.n_attributes_ = res.k
        self.n_features_in_ = r.n_cols
        return self

    def transform(self, X):
        check_is_fitted(self, "q_matrix_")
        r = check_binary_matrix(X, "R")
        if r.n_cols != self.n_features_in_:
            raise ValueError(f"R has {r.n_cols} items, expected {self.n_features_in_}")
        # smallest knowledge states consistent with the wrong answers
        return complement(_maximal_codes(complement(r), transpose(self._Q))).to_dense()

    def inverse_transform(self, A):
        check_is_fitted(self, "q_matrix_")
        a = check_binary_matrix(A, "A")
        return ideal_response(a, self._Q).to_dense()
