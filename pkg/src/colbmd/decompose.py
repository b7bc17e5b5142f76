"""Remove-Smallest and Pick-Largest column-use decompositions.

Both heuristics start from the ``n`` candidate tiles ``M[:, t] ∘ J[:, t]ᵀ``
(one per column of ``M``; their union is exactly ``M``) and keep a subset:

* Remove-Smallest walks the tiles by increasing area and deletes a tile when
  every cell it covers is still covered by another surviving tile.
* Pick-Largest repeatedly takes the tile with the most still-uncovered cells
  and discards tiles that no longer add anything.

Every selected tile lies inside ``M``, so any prefix of a selection is a
from-below approximation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bitmat import BitMatrix, arith_product, bool_product, hstack_columns, transpose
from .factor import ACTIVE, DISCARDED, PICKED, SelectionScores, compute_j

REMOVE_SMALLEST = "remove-smallest"
PICK_LARGEST = "pick-largest"
ALGORITHMS = (REMOVE_SMALLEST, PICK_LARGEST)


class TieBreak(str, enum.Enum):
    FIRST = "first"
    LAST = "last"
    RANDOM = "random"


@dataclass(frozen=True)
class PickRound:
    """One Pick-Largest round: the maximum uncovered count and the tile taken."""

    delta: int
    picked: int


@dataclass(frozen=True)
class CoverageCurvePoint:
    tiles_used: int
    coverage: float


@dataclass
class Decomposition:
    """Factor pair ``M ≈ U ∘ V`` with provenance.

    Attributes
    ----------
    U, V : BitMatrix
        ``m x k`` and ``k x n`` factors.
    provenance : list of int
        For ``orientation == "columns"``, ``U[:, i] == M[:, provenance[i]]``.
        For ``"rows"``, ``V[i, :] == M[provenance[i], :]``.
    covered_ones, total_ones : int
        Ones of ``U ∘ V`` and of ``M``.
    exact : bool
        Whether ``U ∘ V == M``.
    """

    U: BitMatrix
    V: BitMatrix
    provenance: list[int]
    covered_ones: int
    total_ones: int
    exact: bool
    algorithm: str = PICK_LARGEST
    orientation: str = "columns"
    truncated: bool = False
    rounds: list[PickRound] = field(default_factory=list)
    n_candidates: int = 0

    @property
    def k(self) -> int:
        return len(self.provenance)

    @property
    def coverage(self) -> float:
        if self.total_ones == 0:
            return 1.0
        return self.covered_ones / self.total_ones

    def product(self) -> BitMatrix:
        return bool_product(self.U, self.V)


@dataclass
class VerificationReport:
    shape_ok: bool
    from_below: bool
    exact: bool
    column_use: bool
    confined: bool
    coverage: float
    covered_ones: int
    total_ones: int
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems

    def lines(self) -> list[str]:
        out = [
            f"shape_ok={self.shape_ok}",
            f"from_below={self.from_below}",
            f"exact={self.exact}",
            f"column_use={self.column_use}",
            f"confined={self.confined}",
            f"coverage={self.coverage:.6f}",
            f"covered_ones={self.covered_ones}",
            f"total_ones={self.total_ones}",
        ]
        out += [f"problem: {p}" for p in self.problems]
        out.append("PASS" if self.passed else "FAIL")
        return out


class _Chooser:
    def __init__(self, tie: TieBreak | str, seed: Optional[int]):
        self.tie = TieBreak(tie)
        if self.tie is TieBreak.RANDOM and seed is None:
            raise ValueError("tie='random' requires a seed")
        self.rng = np.random.default_rng(seed)

    def pick(self, candidates: np.ndarray) -> int:
        if self.tie is TieBreak.FIRST:
            return int(candidates.min())
        if self.tie is TieBreak.LAST:
            return int(candidates.max())
        return int(self.rng.choice(candidates))

    def ascending(self, keys: np.ndarray) -> np.ndarray:
        """Indices sorted by ``keys`` ascending, ties resolved by the rule."""
        idx = np.arange(keys.size)
        if self.tie is TieBreak.FIRST:
            second = idx
        elif self.tie is TieBreak.LAST:
            second = -idx
        else:
            second = self.rng.permutation(keys.size)
        return np.lexsort((second, keys))


class _Problem:
    """Per-matrix precomputation shared by the heuristics."""

    def __init__(self, m: BitMatrix):
        self.m = m
        self.mt = transpose(m)  # row t = column t of M
        self.j = compute_j(m).j
        self.jd = self.j.to_dense().astype(bool)
        self.md = m.to_dense().astype(bool)
        col_ones = self.mt.row_counts()
        dominators = self.jd.sum(axis=0)
        self.sigma = col_ones * dominators
        self.total = m.count()

    @property
    def n(self) -> int:
        return self.m.n_cols

    def build(self, chosen: list[int], covered: int, algorithm: str, **kw) -> Decomposition:
        m_rows, n = self.m.shape
        u = hstack_columns([self.mt.row(t) for t in chosen], m_rows)
        jt = self.j.T
        v = BitMatrix.from_rows([jt.row(t) for t in chosen], n) if chosen else BitMatrix((0, n))
        return Decomposition(
            U=u,
            V=v,
            provenance=list(chosen),
            covered_ones=int(covered),
            total_ones=int(self.total),
            exact=int(covered) == int(self.total),
            algorithm=algorithm,
            n_candidates=n,
            **kw,
        )


def _check_target(coverage_target: float) -> None:
    if not 0.0 < coverage_target <= 1.0:
        raise ValueError(f"coverage_target must lie in (0, 1], got {coverage_target}")


def _reached(covered: int, total: int, target: float) -> bool:
    return covered >= total or covered >= target * total - 1e-9


def _greedy(prob: _Problem, candidates: np.ndarray, target: float, chooser: _Chooser):
    """Greedy max-uncovered selection restricted to ``candidates``.

    Uncovered counts are maintained incrementally: when a tile is taken, each
    newly covered cell ``(r, c)`` is charged to every tile containing it.
    Returns the pick sequence, the per-round records and the covered count.
    """
    n = prob.n
    scores = SelectionScores(prob.sigma)
    scores.status[:] = DISCARDED
    scores.status[candidates] = ACTIVE
    covered_cols = np.zeros_like(prob.mt.words)  # C, stored column-wise
    mtw = prob.mt.words
    picks: list[int] = []
    rounds: list[PickRound] = []
    covered = 0
    while True:
        active = scores.active()
        spent = active[scores.delta[active] == 0]
        scores.status[spent] = DISCARDED
        active = scores.active()
        if active.size == 0 or _reached(covered, prob.total, target):
            break
        best = scores.delta[active].max()
        j = chooser.pick(active[scores.delta[active] == best])
        rounds.append(PickRound(int(best), j))
        picks.append(j)
        scores.status[j] = PICKED
        covered += int(best)
        rows = mtw[j]
        for c in np.flatnonzero(prob.jd[:, j]):
            fresh = rows & ~covered_cols[c]
            if not fresh.any():
                continue
            covered_cols[c] |= fresh
            hit = np.bitwise_count(mtw & fresh).sum(axis=1, dtype=np.int64)
            # tiles whose column mask contains c lose the fresh cells they share
            scores.delta -= hit * prob.jd[c]
    return picks, rounds, covered


def remove_smallest(m: BitMatrix, tie: TieBreak | str = TieBreak.FIRST,
                    seed: Optional[int] = None) -> Decomposition:
    """Exact decomposition by deleting redundant tiles, smallest area first."""
    chooser = _Chooser(tie, seed)
    prob = _Problem(m)
    survivors = _remove_smallest_survivors(prob, chooser)
    return prob.build(survivors, prob.total, REMOVE_SMALLEST)


def _remove_smallest_survivors(prob: _Problem, chooser: _Chooser) -> list[int]:
    counts = np.zeros(prob.m.shape, dtype=np.int32)
    if prob.total:
        counts = arith_product(prob.m, prob.j.T)
    alive = np.ones(prob.n, dtype=bool)
    for j in chooser.ascending(prob.sigma):
        if prob.sigma[j] == 0:
            alive[j] = False
            continue
        block = np.ix_(np.flatnonzero(prob.md[:, j]), np.flatnonzero(prob.jd[:, j]))
        if not (counts[block] == 1).any():
            counts[block] -= 1
            alive[j] = False
    return np.flatnonzero(alive).tolist()


def pick_largest(m: BitMatrix, tie: TieBreak | str = TieBreak.FIRST,
                 seed: Optional[int] = None, coverage_target: float = 1.0) -> Decomposition:
    """Greedy decomposition taking the tile with the most uncovered ones.

    With ``coverage_target < 1`` the run stops as soon as that fraction of the
    ones of ``m`` is covered.
    """
    _check_target(coverage_target)
    chooser = _Chooser(tie, seed)
    prob = _Problem(m)
    picks, rounds, covered = _greedy(prob, np.arange(prob.n), coverage_target, chooser)
    return prob.build(picks, covered, PICK_LARGEST, rounds=rounds)


def approx_decompose(m: BitMatrix, algorithm: str = PICK_LARGEST, coverage_target: float = 1.0,
                     tie: TieBreak | str = TieBreak.FIRST,
                     seed: Optional[int] = None) -> Decomposition:
    """From-below approximation covering at least ``coverage_target`` of the ones.

    Remove-Smallest has no native partial mode: its exact survivors are
    re-ranked greedily by marginal coverage and the shortest prefix reaching
    the target is kept (``truncated=True`` on the result).
    """
    _check_target(coverage_target)
    if algorithm == PICK_LARGEST:
        return pick_largest(m, tie, seed, coverage_target)
    if algorithm != REMOVE_SMALLEST:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if coverage_target >= 1.0:
        return remove_smallest(m, tie, seed)
    chooser = _Chooser(tie, seed)
    prob = _Problem(m)
    survivors = np.asarray(_remove_smallest_survivors(prob, chooser), dtype=np.int64)
    picks, rounds, covered = _greedy(prob, survivors, coverage_target, chooser)
    return prob.build(picks, covered, REMOVE_SMALLEST, truncated=True, rounds=rounds)


def decompose(m: BitMatrix, algorithm: str = PICK_LARGEST, tie: TieBreak | str = TieBreak.FIRST,
              seed: Optional[int] = None) -> Decomposition:
    if algorithm == PICK_LARGEST:
        return pick_largest(m, tie, seed)
    if algorithm == REMOVE_SMALLEST:
        return remove_smallest(m, tie, seed)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def _tile_sequence(m: BitMatrix, algorithm: str, tie, seed) -> tuple[_Problem, list[int]]:
    chooser = _Chooser(tie, seed)
    prob = _Problem(m)
    if algorithm == PICK_LARGEST:
        picks, _, _ = _greedy(prob, np.arange(prob.n), 1.0, chooser)
    elif algorithm == REMOVE_SMALLEST:
        survivors = np.asarray(_remove_smallest_survivors(prob, chooser), dtype=np.int64)
        picks, _, _ = _greedy(prob, survivors, 1.0, chooser)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    return prob, picks


def coverage_curve(m: BitMatrix, algorithm: str = PICK_LARGEST, tie: TieBreak | str = TieBreak.FIRST,
                   seed: Optional[int] = None) -> list[CoverageCurvePoint]:
    """Coverage after each prefix of the algorithm's tile sequence.

    Remove-Smallest's survivors are ordered by greedy marginal coverage, the
    same order :func:`approx_decompose` truncates.
    """
    prob, picks = _tile_sequence(m, algorithm, tie, seed)
    covered = np.zeros_like(prob.mt.words)
    points = []
    for used, t in enumerate(picks, start=1):
        for c in np.flatnonzero(prob.jd[:, t]):
            covered[c] |= prob.mt.words[t]
        ones = int(np.bitwise_count(covered).sum())
        frac = 1.0 if prob.total == 0 else ones / prob.total
        points.append(CoverageCurvePoint(used, frac))
    return points


def verify(m: BitMatrix, d: Decomposition) -> VerificationReport:
    """Recompute ``U ∘ V`` and audit every claim carried by ``d``."""
    problems: list[str] = []
    mr, mc = m.shape
    shape_ok = (
        d.U.n_rows == mr and d.V.n_cols == mc and d.U.n_cols == d.V.n_rows == len(d.provenance)
    )
    if not shape_ok:
        problems.append(f"shapes U{d.U.shape} V{d.V.shape} k={len(d.provenance)} vs M{m.shape}")
        return VerificationReport(False, False, False, False, False, 0.0, 0, m.count(), problems)

    product = bool_product(d.U, d.V)
    from_below = product <= m
    exact = product == m
    covered = product.count()
    total = m.count()
    if not from_below:
        extra = (product.to_dense() & (1 - m.to_dense())).sum()
        problems.append(f"from-below violated: {extra} cells covered where M is 0")
    if exact != d.exact:
        problems.append(f"exact flag {d.exact} but reconstruction exact={exact}")
    if covered != d.covered_ones or total != d.total_ones:
        problems.append(
            f"reported {d.covered_ones}/{d.total_ones} ones, recomputed {covered}/{total}"
        )

    if d.orientation == "rows":
        source, factor, seeds = transpose(m), transpose(d.V), transpose(d.U)
    else:
        source, factor, seeds = m, d.U, d.V
    source_t = transpose(source)
    factor_t = transpose(factor)
    column_use = all(
        0 <= p < source.n_cols and factor_t.row(i) == source_t.row(p)
        for i, p in enumerate(d.provenance)
    )
    if not column_use:
        problems.append(f"{'row' if d.orientation == 'rows' else 'column'}-use condition violated")
    confined = False
    if column_use:
        jt = compute_j(source).j.T
        confined = all(seeds.row(i) == jt.row(p) for i, p in enumerate(d.provenance))
    coverage = 1.0 if total == 0 else covered / total
    return VerificationReport(shape_ok, from_below, exact, column_use, confined, coverage,
                              covered, total, problems)


def best_orientation(m: BitMatrix, algorithm: str = PICK_LARGEST,
                     tie: TieBreak | str = TieBreak.FIRST,
                     seed: Optional[int] = None) -> tuple[Decomposition, str]:
    """Decompose both ``M`` and ``Mᵀ`` and keep the smaller ``k``.

    A transposed win ``Mᵀ = U' ∘ V'`` is returned as ``U = V'ᵀ``, ``V = U'ᵀ``
    with ``orientation == "rows"``: the rows of ``V`` are rows of ``M``.
    """
    direct = decompose(m, algorithm, tie, seed)
    flipped = decompose(transpose(m), algorithm, tie, seed)
    if flipped.k < direct.k:
        result = Decomposition(
            U=transpose(flipped.V),
            V=transpose(flipped.U),
            provenance=flipped.provenance,
            covered_ones=flipped.covered_ones,
            total_ones=flipped.total_ones,
            exact=flipped.exact,
            algorithm=flipped.algorithm,
            orientation="rows",
            rounds=flipped.rounds,
            n_candidates=flipped.n_candidates,
        )
        return result, "rows"
    return direct, "columns"


def distinct_nonzero_columns(m: BitMatrix) -> int:
    mt = transpose(m)
    return len({mt.row(t) for t in range(mt.n_rows) if mt.row(t).count()})


__all__ = [
    "ALGORITHMS",
    "PICK_LARGEST",
    "REMOVE_SMALLEST",
    "CoverageCurvePoint",
    "Decomposition",
    "PickRound",
    "TieBreak",
    "VerificationReport",
    "approx_decompose",
    "best_orientation",
    "coverage_curve",
    "decompose",
    "pick_largest",
    "remove_smallest",
    "verify",
]
