"""Exact and from-below Boolean matrix decomposition under the column-use condition."""

from .bitmat import (
    BitMatrix,
    BitVector,
    arith_product,
    bool_product,
    combine,
    complement,
    dominates,
    ones_count,
    outer_tile,
    transpose,
)
from .dataio import (
    DataFormatError,
    export_decomposition,
    load_decomposition,
    load_matrix,
)
from .decompose import (
    PICK_LARGEST,
    REMOVE_SMALLEST,
    Decomposition,
    TieBreak,
    VerificationReport,
    approx_decompose,
    best_orientation,
    coverage_curve,
    decompose,
    pick_largest,
    remove_smallest,
    verify,
)
from .estimator import ColumnUseBMD, QMatrixMiner
from .factor import JMatrix, Tile, candidate_tiles, compute_j, count_matrix, maximality_audit
from .oracle import OracleLimitError, enumerate_factors, oracle_min_k
from .qmatrix import QMiningResult, dominance_audit, ideal_response, mine_qmatrix

__version__ = "0.1.0"

__all__ = [
    "BitMatrix", "BitVector", "arith_product", "bool_product", "combine", "complement",
    "dominates", "ones_count", "outer_tile", "transpose",
    "DataFormatError", "export_decomposition", "load_decomposition", "load_matrix",
    "PICK_LARGEST", "REMOVE_SMALLEST", "Decomposition", "TieBreak", "VerificationReport",
    "approx_decompose", "best_orientation", "coverage_curve", "decompose", "pick_largest",
    "remove_smallest", "verify",
    "ColumnUseBMD", "QMatrixMiner",
    "JMatrix", "Tile", "candidate_tiles", "compute_j", "count_matrix", "maximality_audit",
    "OracleLimitError", "enumerate_factors", "oracle_min_k",
    "QMiningResult", "dominance_audit", "ideal_response", "mine_qmatrix",
]
