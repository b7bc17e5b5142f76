from __future__ import annotations

import numpy as np
from scipy import sparse
from sklearn.utils import check_array

from .bitmat import BitMatrix


def check_binary_matrix(X, name: str = "X") -> BitMatrix:
    """Validate ``X`` as a 0/1 matrix and return it bit-packed.

    Accepts a :class:`BitMatrix`, any array-like, or a scipy sparse matrix.
    Booleans are accepted; any other value than 0 or 1 raises ``ValueError``.
    """
    if isinstance(X, BitMatrix):
        return X
    if sparse.issparse(X):
        X = X.toarray()
    arr = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=0,
                      ensure_min_features=0, ensure_all_finite=True)
    if arr.dtype == bool:
        arr = arr.astype(np.uint8)
    if arr.size and not np.isin(arr, (0, 1)).all():
        bad = arr[~np.isin(arr, (0, 1))].flat[0]
        raise ValueError(f"{name} must be binary (0/1); found value {bad!r}")
    return BitMatrix.from_dense(arr.astype(np.uint8))
