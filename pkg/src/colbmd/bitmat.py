"""Bit-packed Boolean vectors and matrices.

Layout is LSB-first and row-major: bit ``j`` of a row lives in word
``j // 64`` at position ``j % 64``. Unused high bits of the last word are
always zero, so a popcount over the words equals the logical count.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

WORD_BITS = 64

_ONE = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


def n_words(n_bits: int) -> int:
    return (n_bits + WORD_BITS - 1) // WORD_BITS


def _tail_mask(n_bits: int) -> np.ndarray:
    """Per-word masks that keep only the live bits of an ``n_bits`` row."""
    nw = n_words(n_bits)
    masks = np.full(nw, _ALL, dtype=np.uint64)
    rem = n_bits % WORD_BITS
    if nw and rem:
        masks[-1] = (_ONE << np.uint64(rem)) - _ONE
    return masks


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into an ``(m, n_words(n))`` uint64 array."""
    dense = np.asarray(dense, dtype=bool)
    m, n = dense.shape
    nw = n_words(n)
    if m == 0 or nw == 0:
        return np.zeros((m, nw), dtype=np.uint64)
    packed = np.packbits(dense, axis=1, bitorder="little")
    pad = nw * 8 - packed.shape[1]
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_rows(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of :func:`pack_rows`; returns a bool array of shape ``(m, n_bits)``."""
    words = np.ascontiguousarray(words, dtype=np.uint64)
    m = words.shape[0]
    if m == 0 or n_bits == 0:
        return np.zeros((m, n_bits), dtype=bool)
    as_bytes = words.astype("<u8", copy=False).view(np.uint8).reshape(m, -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little", count=n_bits)
    return bits.astype(bool)


class BitVector:
    """Fixed-length packed bit vector."""

    __slots__ = ("_len", "_words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise ValueError(f"length must be non-negative, got {length}")
        self._len = int(length)
        if words is None:
            words = np.zeros(n_words(length), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64).reshape(-1)
            if words.size != n_words(length):
                raise ValueError(
                    f"{words.size} words cannot hold a vector of length {length}"
                )
            words &= _tail_mask(length)
        words.setflags(write=False)
        self._words = words

    @classmethod
    def from_iterable(cls, bits: Iterable[int]) -> "BitVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = arr.reshape(-1)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("bit vector entries must be 0 or 1")
        return cls(arr.size, pack_rows(arr.reshape(1, -1))[0])

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVector":
        arr = np.zeros(length, dtype=bool)
        arr[list(indices)] = True
        return cls.from_iterable(arr)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, i: int) -> int:
        if not -self._len <= i < self._len:
            raise IndexError(i)
        i %= self._len
        return int((self._words[i >> 6] >> np.uint64(i & 63)) & _ONE)

    def __iter__(self):
        return iter(self.to_array().tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._len == other._len and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self._len, self._words.tobytes()))

    def __and__(self, other: "BitVector") -> "BitVector":
        _check_len(self, other)
        return BitVector(self._len, self._words & other._words)

    def __or__(self, other: "BitVector") -> "BitVector":
        _check_len(self, other)
        return BitVector(self._len, self._words | other._words)

    def __invert__(self) -> "BitVector":
        return BitVector(self._len, ~self._words)

    def count(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.to_array())

    def to_array(self) -> np.ndarray:
        return unpack_rows(self._words.reshape(1, -1), self._len)[0].astype(np.uint8)

    def __repr__(self) -> str:
        return f"BitVector({''.join(map(str, self.to_array().tolist()))})"


def _check_len(p: BitVector, q: BitVector) -> None:
    if len(p) != len(q):
        raise ValueError(f"length mismatch: {len(p)} vs {len(q)}")


class BitMatrix:
    """Immutable dense ``m x n`` Boolean matrix stored as packed uint64 rows.

    Parameters
    ----------
    shape : tuple of int
        ``(m, n)``.
    words : ndarray of uint64, shape (m, n_words(n)), optional
        Packed rows. Tail bits are cleared on construction.
    """

    __slots__ = ("_shape", "_words")

    def __init__(self, shape: tuple[int, int], words: np.ndarray | None = None):
        m, n = (int(s) for s in shape)
        if m < 0 or n < 0:
            raise ValueError(f"invalid shape {shape}")
        self._shape = (m, n)
        nw = n_words(n)
        if words is None:
            words = np.zeros((m, nw), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64)
            if words.shape != (m, nw):
                raise ValueError(
                    f"word array of shape {words.shape} does not fit a {m}x{n} matrix"
                )
            words &= _tail_mask(n)
        words.setflags(write=False)
        self._words = words

    # -- construction -----------------------------------------------------

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        arr = np.asarray(dense)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got {arr.ndim}-D")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("Boolean matrix entries must be 0 or 1")
        return cls(arr.shape, pack_rows(arr))

    @classmethod
    def zeros(cls, m: int, n: int) -> "BitMatrix":
        return cls((m, n))

    @classmethod
    def ones(cls, m: int, n: int) -> "BitMatrix":
        return cls((m, n), np.full((m, n_words(n)), _ALL, dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Iterable[BitVector], n_cols: int | None = None) -> "BitMatrix":
        rows = list(rows)
        if not rows:
            return cls((0, n_cols or 0))
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("all rows must have the same length")
        return cls((len(rows), n), np.stack([r.words for r in rows]).reshape(len(rows), -1))

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def n_rows(self) -> int:
        return self._shape[0]

    @property
    def n_cols(self) -> int:
        return self._shape[1]

    @property
    def words(self) -> np.ndarray:
        return self._words

    @property
    def T(self) -> "BitMatrix":
        return transpose(self)

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self._words, self.n_cols).astype(np.uint8)

    def row(self, i: int) -> BitVector:
        return BitVector(self.n_cols, self._words[i])

    def col(self, j: int) -> BitVector:
        if not 0 <= j < self.n_cols:
            raise IndexError(j)
        bits = (self._words[:, j >> 6] >> np.uint64(j & 63)) & _ONE
        return BitVector.from_iterable(bits.astype(np.uint8))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int((self._words[i, j >> 6] >> np.uint64(j & 63)) & _ONE)

    def select_columns(self, idx: Iterable[int]) -> "BitMatrix":
        idx = list(idx)
        return BitMatrix.from_dense(self.to_dense()[:, idx].reshape(self.n_rows, len(idx)))

    def select_rows(self, idx: Iterable[int]) -> "BitMatrix":
        idx = list(idx)
        return BitMatrix((len(idx), self.n_cols), self._words[idx].reshape(len(idx), self._words.shape[1]))

    def count(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def row_counts(self) -> np.ndarray:
        return np.bitwise_count(self._words).sum(axis=1, dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._shape == other._shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self._shape, self._words.tobytes()))

    def __le__(self, other: "BitMatrix") -> bool:
        """Elementwise partial order: every 1 of ``self`` is a 1 of ``other``."""
        _check_same_shape(self, other)
        return not bool((self._words & ~other._words).any())

    def __ge__(self, other: "BitMatrix") -> bool:
        return other <= self

    def __or__(self, other: "BitMatrix") -> "BitMatrix":
        return combine(self, other, "or")

    def __and__(self, other: "BitMatrix") -> "BitMatrix":
        return combine(self, other, "and")

    def __invert__(self) -> "BitMatrix":
        return complement(self)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return bool_product(self, other)

    def __repr__(self) -> str:
        return f"BitMatrix(shape={self._shape}, ones={self.count()})"

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, r)) for r in self.to_dense().tolist())


MatrixLike = Union[BitMatrix, BitVector]


def _check_same_shape(a: BitMatrix, b: BitMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def _check_inner(a: BitMatrix, b: BitMatrix) -> None:
    if a.n_cols != b.n_rows:
        raise ValueError(
            f"cannot multiply {a.n_rows}x{a.n_cols} by {b.n_rows}x{b.n_cols}: "
            "inner dimensions differ"
        )


def bool_product(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Boolean (OR of ANDs) product ``a ∘ b``.

    Row ``i`` of the result is the word-parallel OR of the rows ``t`` of ``b``
    for which ``a[i, t] = 1``.
    """
    _check_inner(a, b)
    m, k = a.shape
    n = b.n_cols
    out = np.zeros((m, n_words(n)), dtype=np.uint64)
    if m == 0 or k == 0 or n == 0:
        return BitMatrix((m, n), out)
    a_dense = a.to_dense().astype(bool)
    bw = b.words
    if m <= k:
        for i in range(m):
            sel = a_dense[i]
            if sel.any():
                out[i] = np.bitwise_or.reduce(bw[sel], axis=0)
    else:
        # few inner terms: scatter each row of b into the rows that use it
        for t in range(k):
            sel = a_dense[:, t]
            if sel.any():
                out[sel] |= bw[t]
    return BitMatrix((m, n), out)


def arith_product(a: BitMatrix, b: BitMatrix, chunk_cells: int = 1 << 22) -> np.ndarray:
    """Integer product ``a · b`` as an ``int32`` array (the cover-count matrix).

    Entry ``(i, j)`` is the popcount of row ``i`` of ``a`` AND column ``j`` of ``b``.
    """
    _check_inner(a, b)
    m, k = a.shape
    n = b.n_cols
    out = np.zeros((m, n), dtype=np.int32)
    if m == 0 or n == 0 or k == 0:
        return out
    aw = a.words
    btw = transpose(b).words
    nw = aw.shape[1]
    step = max(1, chunk_cells // max(1, n * nw))
    for start in range(0, m, step):
        block = aw[start:start + step, None, :] & btw[None, :, :]
        out[start:start + step] = np.bitwise_count(block).sum(axis=2, dtype=np.int32)
    return out


def complement(a: BitMatrix) -> BitMatrix:
    return BitMatrix(a.shape, ~a.words)


def transpose(a: BitMatrix) -> BitMatrix:
    m, n = a.shape
    return BitMatrix((n, m), pack_rows(unpack_rows(a.words, n).T))


def outer_tile(p: BitVector, q: BitVector) -> BitMatrix:
    """The tile ``pᵀ ∘ q``: ones exactly on rows of ``p`` times columns of ``q``."""
    m, n = len(p), len(q)
    out = np.zeros((m, n_words(n)), dtype=np.uint64)
    rows = p.indices()
    out[rows] = q.words
    return BitMatrix((m, n), out)


def dominates(p: BitVector, q: BitVector) -> bool:
    """True iff ``p[i] >= q[i]`` for every ``i``."""
    _check_len(p, q)
    return not bool((~p.words & q.words).any())


def ones_count(a: MatrixLike) -> int:
    return a.count()


def combine(a: BitMatrix, b: BitMatrix, op: str) -> BitMatrix:
    """Elementwise ``or``, ``and`` or ``and-not`` (``a ∧ ¬b``)."""
    _check_same_shape(a, b)
    if op == "or":
        words = a.words | b.words
    elif op == "and":
        words = a.words & b.words
    elif op in ("and-not", "andnot"):
        words = a.words & ~b.words
    else:
        raise ValueError(f"unknown combine op {op!r}; expected 'or', 'and' or 'and-not'")
    return BitMatrix(a.shape, words)


def hstack_columns(columns: list[BitVector], n_rows: int) -> BitMatrix:
    """Build an ``n_rows x len(columns)`` matrix whose columns are ``columns``."""
    if not columns:
        return BitMatrix((n_rows, 0))
    return transpose(BitMatrix.from_rows(columns))
