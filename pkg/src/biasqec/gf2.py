"""Exact linear algebra over GF(2) on bit-packed operands.

Vectors and matrix rows are stored as little-endian 64-bit words: column j
lives in word j >> 6 at bit j & 63. All reductions use a fixed pivoting rule
(leftmost unprocessed column, topmost available row) so pivot sets, reduced
forms, and kernel bases are reproducible across runs and platforms.

Everything here is dense. The codes this package builds stay below a few
thousand columns, where packed dense elimination beats sparse bookkeeping.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

_WORD_BITS = 64


def _word_count(n_bits: int) -> int:
    return (n_bits + _WORD_BITS - 1) >> 6


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 uint8 array into little-endian uint64 words."""
    n = bits.shape[0]
    w = _word_count(n)
    padded = np.zeros(w * _WORD_BITS, dtype=np.uint8)
    padded[:n] = bits
    return np.packbits(padded, bitorder="little").view("<u8").copy()


def _unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Expand packed words back to a 0/1 uint8 array of length n."""
    as_bytes = words.astype("<u8", copy=False).view(np.uint8)
    return np.unpackbits(as_bytes, bitorder="little")[:n].copy()


class BinaryVector:
    """A fixed-length vector over GF(2).

    Treat instances as values: operators return new vectors and nothing in
    the package mutates a vector after handing it out.
    """

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray | None = None):
        if n < 0:
            raise DimensionError(f"vector length must be >= 0, got {n}")
        self.n = n
        if words is None:
            self.words = np.zeros(_word_count(n), dtype=np.uint64)
        else:
            if words.shape != (_word_count(n),):
                raise DimensionError("word buffer does not match vector length")
            self.words = words

    @classmethod
    def zeros(cls, n: int) -> "BinaryVector":
        return cls(n)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BinaryVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise DimensionError("from_bits expects a 1-d sequence")
        if arr.size and arr.max() > 1:
            raise DimensionError("vector entries must be 0 or 1")
        return cls(int(arr.shape[0]), _pack_bits(arr % 2))

    def copy(self) -> "BinaryVector":
        return BinaryVector(self.n, self.words.copy())

    def get(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise DimensionError(f"index {j} out of range for length {self.n}")
        return int((self.words[j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, j: int, value: int) -> None:
        if not 0 <= j < self.n:
            raise DimensionError(f"index {j} out of range for length {self.n}")
        bit = np.uint64(1) << np.uint64(j & 63)
        if value & 1:
            self.words[j >> 6] |= bit
        else:
            self.words[j >> 6] &= ~bit

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def is_zero(self) -> bool:
        return not self.words.any()

    def to_array(self) -> np.ndarray:
        return _unpack_bits(self.words, self.n)

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return BinaryVector(self.n, self.words ^ other.words)

    def __and__(self, other: "BinaryVector") -> "BinaryVector":
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return BinaryVector(self.n, self.words & other.words)

    def dot(self, other: "BinaryVector") -> int:
        """Inner product mod 2."""
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return int(np.bitwise_count(self.words & other.words).sum()) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryVector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.n, self.words.tobytes()))

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        if self.n <= 80:
            return "BinaryVector(" + "".join(map(str, self.to_array())) + ")"
        return f"BinaryVector(n={self.n}, weight={self.weight()})"


class BinaryMatrix:
    """A dense matrix over GF(2) with bit-packed rows.

    `words` has shape (rows, word_count(cols)); row i column j is bit j & 63
    of words[i, j >> 6]. Bits past `cols` in the last word are kept zero,
    which every operation below relies on.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError(f"matrix shape must be non-negative, got {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        w = _word_count(cols)
        if words is None:
            self.words = np.zeros((rows, w), dtype=np.uint64)
        else:
            if words.shape != (rows, w):
                raise DimensionError("word buffer does not match matrix shape")
            self.words = np.ascontiguousarray(words, dtype=np.uint64)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        m = cls(n, n)
        for i in range(n):
            m.words[i, i >> 6] = np.uint64(1) << np.uint64(i & 63)
        return m

    @classmethod
    def from_array(cls, arr: np.ndarray | Sequence[Sequence[int]]) -> "BinaryMatrix":
        a = np.asarray(arr, dtype=np.uint8)
        if a.ndim != 2:
            raise DimensionError("from_array expects a 2-d array")
        a = a % 2
        rows, cols = a.shape
        m = cls(rows, cols)
        for i in range(rows):
            m.words[i] = _pack_bits(a[i])
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[BinaryVector], cols: int | None = None) -> "BinaryMatrix":
        if not rows:
            if cols is None:
                raise DimensionError("cannot infer column count from an empty row list")
            return cls(0, cols)
        n = rows[0].n
        if cols is not None and cols != n:
            raise DimensionError(f"rows have length {n}, expected {cols}")
        m = cls(len(rows), n)
        for i, r in enumerate(rows):
            if r.n != n:
                raise DimensionError("rows have differing lengths")
            m.words[i] = r.words
        return m

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i in range(self.rows):
            out[i] = _unpack_bits(self.words[i], self.cols)
        return out

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.rows, self.cols, self.words.copy())

    def row(self, i: int) -> BinaryVector:
        if not 0 <= i < self.rows:
            raise DimensionError(f"row {i} out of range for {self.rows} rows")
        return BinaryVector(self.cols, self.words[i].copy())

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DimensionError(f"entry ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DimensionError(f"entry ({i}, {j}) out of range for {self.rows}x{self.cols}")
        bit = np.uint64(1) << np.uint64(j & 63)
        if value & 1:
            self.words[i, j >> 6] |= bit
        else:
            self.words[i, j >> 6] &= ~bit

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix.from_array(self.to_array().T)

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def column_weights(self) -> np.ndarray:
        return self.to_array().sum(axis=0).astype(np.int64)

    def max_row_weight(self) -> int:
        w = self.row_weights()
        return int(w.max()) if w.size else 0

    def max_column_weight(self) -> int:
        w = self.column_weights()
        return int(w.max()) if w.size else 0

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols})"


def matvec(m: BinaryMatrix, v: BinaryVector) -> BinaryVector:
    """Matrix-vector product over GF(2).

    Args:
        m: matrix of shape (r, c).
        v: vector of length c.

    Returns:
        Vector of length r whose entry i is the parity of the overlap
        between row i of m and v.
    """
    if m.cols != v.n:
        raise DimensionError(f"matvec shape mismatch: {m.rows}x{m.cols} with length {v.n}")
    if m.rows == 0:
        return BinaryVector.zeros(0)
    par = np.bitwise_count(m.words & v.words[None, :]).sum(axis=1) & 1
    return BinaryVector(m.rows, _pack_bits(par.astype(np.uint8)))


def matmul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Matrix product a @ b over GF(2)."""
    if a.cols != b.rows:
        raise DimensionError(f"matmul shape mismatch: {a.rows}x{a.cols} with {b.rows}x{b.cols}")
    out = BinaryMatrix.zeros(a.rows, b.cols)
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return out
    dense_a = a.to_array()
    for i in range(a.rows):
        sel = np.nonzero(dense_a[i])[0]
        if sel.size:
            out.words[i] = np.bitwise_xor.reduce(b.words[sel], axis=0)
    return out


def hstack(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    """Concatenate matrices left to right."""
    if not blocks:
        raise DimensionError("hstack needs at least one block")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise DimensionError("hstack blocks must share a row count")
    total = sum(b.cols for b in blocks)
    out = BinaryMatrix.zeros(rows, total)
    dense = np.concatenate([b.to_array() for b in blocks], axis=1) if rows else None
    if rows:
        for i in range(rows):
            out.words[i] = _pack_bits(dense[i])
    return out


def vstack(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    """Concatenate matrices top to bottom."""
    if not blocks:
        raise DimensionError("vstack needs at least one block")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionError("vstack blocks must share a column count")
    words = np.concatenate([b.words for b in blocks], axis=0)
    return BinaryMatrix(sum(b.rows for b in blocks), cols, words)


def kron(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product over GF(2)."""
    dense = np.kron(a.to_array(), b.to_array()) % 2
    return BinaryMatrix.from_array(dense)


def _eliminate(words: np.ndarray, cols: int, track: np.ndarray | None) -> list[int]:
    """Reduce packed rows to RREF in place; returns the pivot columns.

    Pivot choice is fixed: scan columns left to right, take the topmost
    unused row with a set bit. Entries above and below each pivot are
    cleared, so the result is the reduced form, not just an echelon form.
    """
    rows = words.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        col = (words[r:, w] & bit) != 0
        hits = np.nonzero(col)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
            if track is not None:
                track[[r, p]] = track[[p, r]]
        others = np.nonzero((words[:, w] & bit) != 0)[0]
        others = others[others != r]
        if others.size:
            words[others] ^= words[r]
            if track is not None:
                track[others] ^= track[r]
        pivots.append(c)
        r += 1
    return pivots


def row_reduce(m: BinaryMatrix) -> tuple[BinaryMatrix, list[int], BinaryMatrix]:
    """Reduced row echelon form with a transformation certificate.

    Args:
        m: matrix to reduce.

    Returns:
        (rref, pivots, t) where t is an invertible rows x rows matrix with
        t @ m == rref over GF(2) and pivots lists the pivot columns in
        increasing order.
    """
    words = m.words.copy()
    track = BinaryMatrix.identity(m.rows).words
    pivots = _eliminate(words, m.cols, track)
    return BinaryMatrix(m.rows, m.cols, words), pivots, BinaryMatrix(m.rows, m.rows, track)


def rank(m: BinaryMatrix) -> int:
    words = m.words.copy()
    return len(_eliminate(words, m.cols, None))


def nullspace_basis(m: BinaryMatrix) -> list[BinaryVector]:
    """A deterministic basis of {v : m @ v == 0}.

    One basis vector per free column, ordered by free column index; the
    vector for free column f has a 1 at f and at each pivot column whose
    reduced row has a 1 at f.
    """
    words = m.words.copy()
    pivots = _eliminate(words, m.cols, None)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = BinaryVector.zeros(m.cols)
        v.set(f, 1)
        fw = f >> 6
        fb = np.uint64(1) << np.uint64(f & 63)
        for r, p in enumerate(pivots):
            if words[r, fw] & fb:
                v.set(p, 1)
        basis.append(v)
    return basis


def in_rowspace(m: BinaryMatrix, v: BinaryVector) -> bool:
    """Whether v is a GF(2) combination of the rows of m."""
    if m.cols != v.n:
        raise DimensionError(f"length mismatch: matrix has {m.cols} columns, vector {v.n}")
    stacked = vstack([m, BinaryMatrix.from_rows([v])])
    return rank(stacked) == rank(m)


def solve(m: BinaryMatrix, rhs: BinaryVector) -> BinaryVector | None:
    """One solution x of m @ x == rhs, or None when none exists.

    The returned solution is supported on pivot columns only, so it is the
    same on every call.
    """
    if m.rows != rhs.n:
        raise DimensionError(f"solve shape mismatch: {m.rows} rows, rhs length {rhs.n}")
    aug = hstack([m, BinaryMatrix.from_rows([rhs]).transpose()])
    words = aug.words.copy()
    pivots = _eliminate(words, aug.cols, None)
    if pivots and pivots[-1] == m.cols:
        return None
    x = BinaryVector.zeros(m.cols)
    last_w = m.cols >> 6
    last_b = np.uint64(1) << np.uint64(m.cols & 63)
    for r, p in enumerate(pivots):
        if words[r, last_w] & last_b:
            x.set(p, 1)
    return x
