"""Maximal factor matrix and the candidate tiles it induces.

For a Boolean ``m x n`` matrix ``M`` the dominance matrix

    J = ¬(¬Mᵀ ∘ M)

has ``J[i, t] = 1`` exactly when column ``i`` of ``M`` dominates column ``t``.
It is the elementwise-largest ``V`` with ``M = M ∘ Vᵀ``. Column ``t`` of ``J``
lists every column of ``M`` that can be covered together with ``M[:, t]``
without touching a zero, so the tile seeded by column ``t`` is
``M[:, t] ∘ J[:, t]ᵀ``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitmat import (
    BitMatrix,
    BitVector,
    bool_product,
    complement,
    outer_tile,
    transpose,
)


@dataclass(frozen=True)
class JMatrix:
    """Column-dominance matrix of a source matrix.

    Attributes
    ----------
    j : BitMatrix
        ``n x n``; ``j[i, t] = 1`` iff ``M[:, i] >= M[:, t]``.
    """

    j: BitMatrix

    @property
    def source_cols(self) -> int:
        return self.j.n_rows

    def dense(self) -> np.ndarray:
        return self.j.to_dense().astype(bool)


@dataclass(frozen=True)
class Tile:
    """Rank-1 candidate ``row_mask ∘ col_mask`` seeded by column ``source_col``."""

    source_col: int
    row_mask: BitVector
    col_mask: BitVector

    @property
    def area(self) -> int:
        return self.row_mask.count() * self.col_mask.count()

    def footprint(self) -> BitMatrix:
        return outer_tile(self.row_mask, self.col_mask)


# tile status codes used by the selection loops
ACTIVE, PICKED, DISCARDED = 0, 1, 2


@dataclass
class SelectionScores:
    """Mutable per-tile bookkeeping owned by one decomposition run.

    ``delta[i]`` is the number of cells of tile ``i`` not yet covered.
    """

    sigma: np.ndarray
    delta: np.ndarray = field(default=None)
    status: np.ndarray = field(default=None)

    def __post_init__(self):
        self.sigma = np.asarray(self.sigma, dtype=np.int64)
        if self.delta is None:
            self.delta = self.sigma.copy()
        if self.status is None:
            self.status = np.full(self.sigma.shape, ACTIVE, dtype=np.int8)

    def active(self) -> np.ndarray:
        return np.flatnonzero(self.status == ACTIVE)


def compute_j(m: BitMatrix) -> JMatrix:
    return JMatrix(complement(bool_product(complement(transpose(m)), m)))


def general_j(m: BitMatrix, u: BitMatrix) -> BitMatrix:
    """Largest ``n x k`` matrix ``W`` with ``U ∘ Wᵀ <= M``.

    ``W[j, i] = 1`` iff column ``j`` of ``M`` dominates column ``i`` of ``U``.
    Whenever some ``V`` satisfies ``M = U ∘ Vᵀ``, ``V <= W`` and ``M = U ∘ Wᵀ``.
    """
    if u.n_rows != m.n_rows:
        raise ValueError(
            f"U has {u.n_rows} rows but M has {m.n_rows}; shapes {u.shape} and {m.shape}"
        )
    return complement(bool_product(complement(transpose(m)), u))


def candidate_tiles(m: BitMatrix, j: JMatrix) -> list[Tile]:
    """One tile per column of ``m``: rows ``M[:, t]``, columns ``J[:, t]``."""
    if j.source_cols != m.n_cols:
        raise ValueError(f"J is {j.j.shape} but M has {m.n_cols} columns")
    mt = transpose(m)
    jt = transpose(j.j)
    return [Tile(t, mt.row(t), jt.row(t)) for t in range(m.n_cols)]


def covered_count(c: BitMatrix, tile: Tile) -> int:
    """Number of ones of ``c`` inside ``tile``, without building the tile.

    Sums, over the tile's rows, the popcount of ``c``'s row restricted to the
    tile's column mask.
    """
    if c.shape != (len(tile.row_mask), len(tile.col_mask)):
        raise ValueError(
            f"coverage matrix {c.shape} does not match tile "
            f"{len(tile.row_mask)}x{len(tile.col_mask)}"
        )
    rows = tile.row_mask.indices()
    if rows.size == 0:
        return 0
    per_row = np.bitwise_count(c.words[rows] & tile.col_mask.words).sum(axis=1)
    return int(per_row.sum())


def count_matrix(tiles: list[Tile], m: int, n: int) -> np.ndarray:
    """Cover counts: entry ``(i, j)`` is the number of tiles containing ``(i, j)``."""
    counts = np.zeros((m, n), dtype=np.int32)
    for tile in tiles:
        rows = tile.row_mask.indices()
        cols = tile.col_mask.indices()
        if rows.size and cols.size:
            counts[np.ix_(rows, cols)] += 1
    return counts


def maximality_audit(m: BitMatrix, j: JMatrix) -> bool:
    """Check that every zero of ``J`` is essential for ``M = M ∘ Jᵀ``.

    Flips each zero in turn and recomputes the product. Quadratic in ``n``
    products; test use only.
    """
    jd = j.j.to_dense()
    if bool_product(m, transpose(j.j)) != m:
        return False
    for i, t in zip(*np.nonzero(jd == 0)):
        flipped = jd.copy()
        flipped[i, t] = 1
        if bool_product(m, transpose(BitMatrix.from_dense(flipped))) == m:
            return False
    return True
