"""Brute-force references for tests and small-instance validation.

Nothing here shares code paths with the bit-packed core beyond building the
final :class:`BitMatrix`; products are evaluated with plain Python loops and
dominance with scalar comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .bitmat import BitMatrix


class OracleLimitError(ValueError):
    """Raised when an exhaustive search would exceed its configured limit."""


@dataclass(frozen=True)
class OracleResult:
    min_k: int
    witness: list[int]
    explored: int


def naive_bool_product(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Triple-loop Boolean product."""
    (m, k), (k2, n) = a.shape, b.shape
    if k != k2:
        raise ValueError(f"cannot multiply {m}x{k} by {k2}x{n}")
    ad = a.to_dense().tolist()
    bd = b.to_dense().tolist()
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            for t in range(k):
                if ad[i][t] and bd[t][j]:
                    out[i][j] = 1
                    break
    return BitMatrix.from_dense(np.array(out, dtype=np.uint8).reshape(m, n))


def _column_tiles(dense: np.ndarray) -> list[set[tuple[int, int]]]:
    """Cell sets of the column-seeded maximal tiles, by scalar dominance checks."""
    m, n = dense.shape
    tiles = []
    for t in range(n):
        rows = [r for r in range(m) if dense[r, t]]
        cols = [c for c in range(n) if all(dense[r, c] >= dense[r, t] for r in range(m))]
        tiles.append({(r, c) for r in rows for c in cols})
    return tiles


def oracle_min_k(m: BitMatrix, limit: int = 20) -> OracleResult:
    """Fewest column-seeded tiles whose union is ``m``.

    Exact set cover over the distinct candidate tiles: iterative deepening on
    the subset size, always branching on the first uncovered cell.
    """
    dense = m.to_dense()
    ones = [tuple(c) for c in np.argwhere(dense == 1).tolist()]
    if not ones:
        return OracleResult(0, [], 1)
    cell_bit = {cell: i for i, cell in enumerate(ones)}
    masks: dict[int, int] = {}
    for t, cells in enumerate(_column_tiles(dense)):
        mask = 0
        for cell in cells:
            mask |= 1 << cell_bit[cell]
        if mask and mask not in masks:
            masks[mask] = t
    if len(masks) > limit:
        raise OracleLimitError(
            f"{len(masks)} distinct candidate tiles exceed the oracle limit of {limit}"
        )
    tile_masks = list(masks)
    full = (1 << len(ones)) - 1
    explored = 0

    def search(covered: int, depth: int, chosen: list[int]) -> list[int] | None:
        nonlocal explored
        explored += 1
        if covered == full:
            return chosen
        if depth == 0:
            return None
        missing = full & ~covered
        low = missing & -missing
        for mask in tile_masks:
            if mask & low:
                found = search(covered | mask, depth - 1, chosen + [mask])
                if found is not None:
                    return found
        return None

    for size in range(1, len(tile_masks) + 1):
        found = search(0, size, [])
        if found is not None:
            return OracleResult(size, sorted(masks[x] for x in found), explored)
    raise AssertionError("candidate tiles always cover the matrix")


def enumerate_factors(m: BitMatrix, limit: int = 4) -> Iterator[BitMatrix]:
    """Yield every ``n x n`` matrix ``V`` with ``M = M ∘ Vᵀ``.

    Column ``j`` of ``M ∘ Vᵀ`` is the OR of the columns ``t`` with
    ``V[j, t] = 1``, so the rows of ``V`` are constrained independently; the
    generator walks the product of each row's admissible subsets.
    """
    n = m.n_cols
    if n > limit:
        raise OracleLimitError(f"{n} columns exceed the enumeration limit of {limit}")
    dense = m.to_dense().tolist()
    # columns as Python ints over the rows
    cols = [sum(dense[r][t] << r for r in range(m.n_rows)) for t in range(n)]
    subsets = []
    for bits in range(1 << n):
        acc = 0
        for t in range(n):
            if bits >> t & 1:
                acc |= cols[t]
        subsets.append((bits, acc))
    options = [[bits for bits, acc in subsets if acc == cols[j]] for j in range(n)]
    width = 1 if n else 0
    for rows in itertools.product(*options):
        yield BitMatrix((n, n), np.array(rows, dtype=np.uint64).reshape(n, width))


def pairwise_dominance(m: BitMatrix) -> np.ndarray:
    """``D[i, t] = 1`` iff column ``i`` of ``m`` dominates column ``t`` (scalar loop)."""
    dense = m.to_dense().tolist()
    rows, n = m.shape
    out = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for t in range(n):
            out[i, t] = all(dense[r][i] >= dense[r][t] for r in range(rows))
    return out
