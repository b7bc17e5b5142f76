"""Knowledge-state / Q-matrix mining from ideal item responses.

Student ``i`` answers item ``j`` correctly exactly when their knowledge state
``A[i, :]`` covers the item's requirements ``Q[j, :]``, which gives

    R = ¬(¬A ∘ Qᵀ)    equivalently    ¬R = ¬A ∘ Qᵀ.

Mining therefore decomposes ``M = ¬R`` exactly and reads off ``A = ¬U`` and
``Q = Vᵀ``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bitmat import BitMatrix, bool_product, complement, transpose
from .decompose import PICK_LARGEST, Decomposition, TieBreak, decompose


@dataclass
class QMiningResult:
    """Mined factors.

    Attributes
    ----------
    A : BitMatrix
        ``m x k`` knowledge states (students x attributes).
    Q : BitMatrix
        ``n x k`` item requirements (items x attributes).
    item_provenance : list of int
        Item whose complemented response column seeded each attribute.
    """

    A: BitMatrix
    Q: BitMatrix
    item_provenance: list[int]
    decomposition: Decomposition

    @property
    def k(self) -> int:
        return len(self.item_provenance)


@dataclass
class DominanceAudit:
    pairs_checked: int
    violations: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations


def ideal_response(a: BitMatrix, q: BitMatrix) -> BitMatrix:
    """``R[i, j] = 1`` iff student row ``a[i]`` dominates item row ``q[j]``."""
    if a.n_cols != q.n_cols:
        raise ValueError(
            f"knowledge states have {a.n_cols} attributes but the Q-matrix has {q.n_cols}"
        )
    return complement(bool_product(complement(a), transpose(q)))


def mine_qmatrix(r: BitMatrix, algorithm: str = PICK_LARGEST,
                 tie: TieBreak | str = TieBreak.FIRST,
                 seed: Optional[int] = None) -> QMiningResult:
    d = decompose(complement(r), algorithm, tie, seed)
    return QMiningResult(
        A=complement(d.U),
        Q=transpose(d.V),
        item_provenance=list(d.provenance),
        decomposition=d,
    )


def dominance_audit(res: QMiningResult) -> DominanceAudit:
    """Check the prerequisite rule on mined factors.

    When attribute ``i``'s item set contains attribute ``j``'s, a student
    lacking ``i`` should also lack ``j``. Returns ``(i, j, student)`` triples
    that break it; these are observations, not errors.
    """
    qd = res.Q.to_dense().astype(bool)
    ad = res.A.to_dense().astype(bool)
    k = qd.shape[1]
    audit = DominanceAudit(0)
    for i in range(k):
        for j in range(k):
            if i == j or not np.all(qd[:, i] >= qd[:, j]):
                continue
            audit.pairs_checked += 1
            for s in np.flatnonzero(~ad[:, i] & ad[:, j]):
                audit.violations.append((i, j, int(s)))
    return audit
