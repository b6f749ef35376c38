"""The ring of circulants and protograph matrices over it.

A ring element is a GF(2) combination of the cyclic shift permutations
lambda^0 .. lambda^(L-1); it is stored as the sorted tuple of shifts with a
nonzero coefficient. The empty tuple is the zero element, which is distinct
from lambda^0. A protograph is a grid of ring elements sharing one lift size
L; `lift` maps it to its binary representation by replacing each entry with
a sum of L x L circulant permutation matrices.

The convention for a single shift matches a right shift of the identity's
columns: lift of lambda^s has row r set at column (r + s) mod L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, LiftSizeError
from .gf2 import BinaryMatrix


def _check_same_l(a_l: int, b_l: int) -> None:
    if a_l != b_l:
        raise LiftSizeError(f"lift sizes differ: {a_l} vs {b_l}")


@dataclass(frozen=True)
class RingElement:
    """An element of F2[x]/(x^L - 1) written in the shift basis."""

    L: int
    shifts: tuple[int, ...]

    def __init__(self, L: int, shifts: Iterable[int] = ()):
        if L < 1:
            raise DimensionError(f"lift size must be >= 1, got {L}")
        reduced: set[int] = set()
        for s in shifts:
            s = int(s) % L
            # GF(2) coefficients: a repeated shift cancels
            if s in reduced:
                reduced.remove(s)
            else:
                reduced.add(s)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "shifts", tuple(sorted(reduced)))

    @classmethod
    def zero(cls, L: int) -> "RingElement":
        return cls(L, ())

    @classmethod
    def one(cls, L: int) -> "RingElement":
        return cls(L, (0,))

    @classmethod
    def monomial(cls, L: int, t: int) -> "RingElement":
        return cls(L, (t,))

    def weight(self) -> int:
        return len(self.shifts)

    def is_zero(self) -> bool:
        return not self.shifts

    def __add__(self, other: "RingElement") -> "RingElement":
        _check_same_l(self.L, other.L)
        return RingElement(self.L, set(self.shifts) ^ set(other.shifts))

    def __mul__(self, other: "RingElement") -> "RingElement":
        _check_same_l(self.L, other.L)
        sums = [a + b for a in self.shifts for b in other.shifts]
        return RingElement(self.L, sums)

    def transpose(self) -> "RingElement":
        return RingElement(self.L, ((self.L - s) % self.L for s in self.shifts))

    def to_matrix(self) -> BinaryMatrix:
        """The L x L binary circulant this element represents."""
        m = BinaryMatrix.zeros(self.L, self.L)
        r = np.arange(self.L)
        for s in self.shifts:
            c = (r + s) % self.L
            m.words[r, c >> 6] |= np.uint64(1) << (c & 63).astype(np.uint64)
        return m

    def __repr__(self) -> str:
        if not self.shifts:
            return f"RingElement(L={self.L}, 0)"
        terms = "+".join(f"x^{s}" for s in self.shifts)
        return f"RingElement(L={self.L}, {terms})"


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def ring_transpose(a: RingElement) -> RingElement:
    return a.transpose()


EntryLike = "RingElement | int | Iterable[int] | None"


def _coerce_entry(L: int, raw) -> RingElement:
    """Accept a RingElement, 0/None for the zero element, or a shift list.

    A bare nonzero int is rejected: writing 3 for lambda^3 versus weight-3
    is too easy to confuse, so shifts must arrive in a collection.
    """
    if isinstance(raw, RingElement):
        _check_same_l(raw.L, L)
        return raw
    if raw is None:
        return RingElement.zero(L)
    if isinstance(raw, int):
        if raw == 0:
            return RingElement.zero(L)
        raise DimensionError(f"bare int entry {raw}: use a shift tuple like ({raw},)")
    return RingElement(L, raw)


class Protograph:
    """A rows x cols matrix over the ring of circulants with one lift size."""

    __slots__ = ("L", "rows", "cols", "entries")

    def __init__(self, L: int, entries: Sequence[Sequence]):
        if L < 1:
            raise DimensionError(f"lift size must be >= 1, got {L}")
        grid = [tuple(_coerce_entry(L, e) for e in row) for row in entries]
        if not grid or not grid[0]:
            raise DimensionError("protograph must have at least one row and column")
        cols = len(grid[0])
        if any(len(row) != cols for row in grid):
            raise DimensionError("protograph rows have differing lengths")
        self.L = L
        self.rows = len(grid)
        self.cols = cols
        self.entries = tuple(grid)

    @classmethod
    def identity(cls, L: int, m: int) -> "Protograph":
        one = RingElement.one(L)
        zero = RingElement.zero(L)
        return cls(L, [[one if i == j else zero for j in range(m)] for i in range(m)])

    @classmethod
    def zeros(cls, L: int, rows: int, cols: int) -> "Protograph":
        zero = RingElement.zero(L)
        return cls(L, [[zero] * cols for _ in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> RingElement:
        return self.entries[i][j]

    def transpose(self) -> "Protograph":
        return Protograph(
            self.L,
            [[self.entries[j][i].transpose() for j in range(self.rows)] for i in range(self.cols)],
        )

    def tensor(self, other: "Protograph") -> "Protograph":
        _check_same_l(self.L, other.L)
        out = []
        for i in range(self.rows):
            for p in range(other.rows):
                row = []
                for j in range(self.cols):
                    for q in range(other.cols):
                        row.append(self.entries[i][j] * other.entries[p][q])
                out.append(row)
        return Protograph(self.L, out)

    def weight_enumerator(self) -> np.ndarray:
        return np.array(
            [[e.weight() for e in row] for row in self.entries], dtype=np.int64
        )

    def lift(self) -> BinaryMatrix:
        L = self.L
        out = BinaryMatrix.zeros(self.rows * L, self.cols * L)
        r = np.arange(L)
        for i in range(self.rows):
            for j in range(self.cols):
                for s in self.entries[i][j].shifts:
                    c = j * L + (r + s) % L
                    out.words[i * L + r, c >> 6] |= np.uint64(1) << (c & 63).astype(np.uint64)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Protograph):
            return NotImplemented
        return self.L == other.L and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.L, self.entries))

    def __repr__(self) -> str:
        return f"Protograph(L={self.L}, {self.rows}x{self.cols})"


def proto_transpose(a: Protograph) -> Protograph:
    return a.transpose()


def proto_tensor(a: Protograph, b: Protograph) -> Protograph:
    return a.tensor(b)


def proto_hstack(blocks: Sequence[Protograph]) -> Protograph:
    if not blocks:
        raise DimensionError("hstack needs at least one block")
    L = blocks[0].L
    rows = blocks[0].rows
    for b in blocks[1:]:
        _check_same_l(L, b.L)
        if b.rows != rows:
            raise DimensionError("hstack blocks must share a row count")
    return Protograph(L, [sum((list(b.entries[i]) for b in blocks), []) for i in range(rows)])


def proto_vstack(blocks: Sequence[Protograph]) -> Protograph:
    if not blocks:
        raise DimensionError("vstack needs at least one block")
    L = blocks[0].L
    cols = blocks[0].cols
    for b in blocks[1:]:
        _check_same_l(L, b.L)
        if b.cols != cols:
            raise DimensionError("vstack blocks must share a column count")
    return Protograph(L, [list(row) for b in blocks for row in b.entries])


def lift(a: Protograph) -> BinaryMatrix:
    return a.lift()


def weight_enumerator(a: Protograph) -> np.ndarray:
    return a.weight_enumerator()
