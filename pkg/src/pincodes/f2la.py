"""Bit-packed vectors and matrices over GF(2).

Rows are packed into numpy uint64 words, least significant bit first.  The
packing is internal; every public operation speaks in terms of bit positions
0..n-1.  All operations return fresh objects, so values can be shared freely
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "BitMatrix",
    "StandardFormDecomposition",
    "wedge_weight",
    "rank",
    "rref",
    "nullspace_basis",
    "standard_form",
    "write_dense",
    "read_dense",
    "write_alist",
    "read_alist",
    "read_alist_tokens",
    "IncrementalBasis",
]


def _nwords(n: int) -> int:
    return (n + 63) >> 6


def _tail_mask(n: int) -> int:
    r = n & 63
    return (1 << r) - 1 if r else (1 << 64) - 1


class BitVector:
    """An immutable vector over GF(2) of fixed length."""

    __slots__ = ("n", "_w")

    def __init__(self, n: int, words: np.ndarray):
        self.n = n
        self._w = words

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, np.zeros(_nwords(n), dtype=np.uint64))

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        w = np.full(_nwords(n), np.uint64(0xFFFFFFFFFFFFFFFF), dtype=np.uint64)
        if n:
            w[-1] = np.uint64(_tail_mask(n))
        return cls(n, w)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        bit_list = [int(b) & 1 for b in bits]
        return cls.from_indices(len(bit_list), [i for i, b in enumerate(bit_list) if b])

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "BitVector":
        w = np.zeros(_nwords(n), dtype=np.uint64)
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"bit index {i} out of range for length {n}")
            w[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        return cls(n, w)

    @classmethod
    def from01(cls, s: str) -> "BitVector":
        return cls.from_bits(int(c) for c in s.strip())

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return int(self._w[i >> 6] >> np.uint64(i & 63)) & 1

    def _check(self, other: "BitVector") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self._w ^ other._w)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self._w & other._w)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._w, other._w))

    def __hash__(self) -> int:
        return hash((self.n, self._w.tobytes()))

    @property
    def weight(self) -> int:
        return int(np.bitwise_count(self._w).sum())

    def is_zero(self) -> bool:
        return not self._w.any()

    def support(self) -> list[int]:
        return [i for i in range(self.n) if self[i]]

    def to_array(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0, dtype=np.uint8)
        bits = np.unpackbits(self._w.view(np.uint8), bitorder="little")
        return bits[: self.n]

    def to_int(self) -> int:
        return int.from_bytes(self._w.tobytes(), "little")

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self.to_array())

    def __repr__(self) -> str:
        if self.n <= 64:
            return f"BitVector({self.to01()})"
        return f"BitVector(n={self.n}, weight={self.weight})"


def wedge_weight(vectors: Sequence[BitVector]) -> int:
    """Number of positions where every given vector is 1."""
    if not vectors:
        raise ValueError("wedge_weight needs at least one vector")
    n = vectors[0].n
    acc = vectors[0]._w.copy()
    for v in vectors[1:]:
        if v.n != n:
            raise ValueError(f"length mismatch: {v.n} vs {n}")
        acc &= v._w
    return int(np.bitwise_count(acc).sum())


class BitMatrix:
    """A matrix over GF(2), stored as packed rows of equal length."""

    __slots__ = ("ncols", "_w")

    def __init__(self, ncols: int, words: np.ndarray):
        self.ncols = ncols
        self._w = words

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(ncols, np.zeros((nrows, _nwords(ncols)), dtype=np.uint64))

    @classmethod
    def empty(cls, ncols: int) -> "BitMatrix":
        return cls.zeros(0, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m._w[i, i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence, ncols: int | None = None) -> "BitMatrix":
        vecs = []
        for r in rows:
            if isinstance(r, BitVector):
                vecs.append(r)
            else:
                vecs.append(BitVector.from_bits(r))
        if ncols is None:
            if not vecs:
                raise ValueError("ncols required for an empty row list")
            ncols = vecs[0].n
        for v in vecs:
            if v.n != ncols:
                raise ValueError(f"row length {v.n} != ncols {ncols}")
        w = np.zeros((len(vecs), _nwords(ncols)), dtype=np.uint64)
        for i, v in enumerate(vecs):
            w[i] = v._w
        return cls(ncols, w)

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        a = np.asarray(arr, dtype=np.uint8) % 2
        if a.ndim != 2:
            raise ValueError("expected a 2D array")
        nrows, ncols = a.shape
        if ncols == 0:
            return cls(0, np.zeros((nrows, 0), dtype=np.uint64))
        pad = (-ncols) % 64
        padded = np.ascontiguousarray(np.pad(a, ((0, 0), (0, pad))))
        packed = np.ascontiguousarray(np.packbits(padded, axis=1, bitorder="little"))
        return cls(ncols, packed.view(np.uint64))

    @property
    def nrows(self) -> int:
        return self._w.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self._w[i].copy())

    def rows(self) -> list[BitVector]:
        return [self.row(i) for i in range(self.nrows)]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self._w.copy())

    def to_dense(self) -> np.ndarray:
        if self.ncols == 0:
            return np.zeros((self.nrows, 0), dtype=np.uint8)
        bits = np.unpackbits(self._w.view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.ncols]

    def get(self, i: int, j: int) -> int:
        return int(self._w[i, j >> 6] >> np.uint64(j & 63)) & 1

    def column_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0)

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self._w).sum(axis=1).astype(np.int64)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return BitMatrix(self.ncols, np.vstack([self._w, other._w]))

    def take_columns(self, cols: Sequence[int]) -> "BitMatrix":
        dense = self.to_dense()
        return BitMatrix.from_dense(dense[:, list(cols)])

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def mul_t(self, other: "BitMatrix") -> np.ndarray:
        """Parity matrix P with P[i,j] = <row_i(self), row_j(other)> over GF(2)."""
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        ra, rb = self.nrows, other.nrows
        out = np.zeros((ra, rb), dtype=np.uint8)
        if ra == 0 or rb == 0:
            return out
        # chunk to keep the broadcast buffer small
        chunk = max(1, (1 << 22) // max(1, rb * self._w.shape[1]))
        for lo in range(0, ra, chunk):
            hi = min(ra, lo + chunk)
            ands = self._w[lo:hi, None, :] & other._w[None, :, :]
            out[lo:hi] = (np.bitwise_count(ands).sum(axis=2) & 1).astype(np.uint8)
        return out

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Matrix product over GF(2); self is (r x n), other is (n x m)."""
        if self.ncols != other.nrows:
            raise ValueError("inner dimension mismatch")
        return BitMatrix.from_dense(self.mul_t(other.transpose()))

    def is_zero(self) -> bool:
        return not self._w.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.ncols == other.ncols and bool(np.array_equal(self._w, other._w))

    def __hash__(self) -> int:
        return hash((self.ncols, self._w.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    # -- elimination ------------------------------------------------------

    def _rref_inplace(self, words: np.ndarray, pivot_cols: Iterable[int]) -> list[int]:
        pivots = []
        cur = 0
        nrows = words.shape[0]
        for c in pivot_cols:
            if cur >= nrows:
                break
            word, bit = c >> 6, np.uint64(c & 63)
            colbits = (words[:, word] >> bit) & np.uint64(1)
            hits = np.nonzero(colbits)[0]
            hits = hits[hits >= cur]
            if hits.size == 0:
                continue
            p = int(hits[0])
            if p != cur:
                words[[cur, p]] = words[[p, cur]]
            colbits = (words[:, word] >> bit) & np.uint64(1)
            targets = np.nonzero(colbits)[0]
            targets = targets[targets != cur]
            if targets.size:
                words[targets] ^= words[cur]
            pivots.append(c)
            cur += 1
        return pivots

    def rref(self) -> tuple["BitMatrix", tuple[int, ...]]:
        """Reduced row-echelon form with deterministic leftmost pivots."""
        w = self._w.copy()
        pivots = self._rref_inplace(w, range(self.ncols))
        return BitMatrix(self.ncols, w), tuple(pivots)

    def rank(self) -> int:
        w = self._w.copy()
        return len(self._rref_inplace(w, range(self.ncols)))

    def nullspace_basis(self) -> "BitMatrix":
        """Basis of {v : M v^T = 0}, one row per free column."""
        R, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        dense = R.to_dense()
        out = np.zeros((len(free), self.ncols), dtype=np.uint8)
        out[np.arange(len(free)), free] = 1
        if pivots and free:
            out[:, list(pivots)] = dense[: len(pivots)][:, free].T
        return BitMatrix.from_dense(out)


class _Reducer:
    """Reduce vectors against a fixed row space; used for membership tests."""

    def __init__(self, m: BitMatrix):
        self.R, self.pivots = m.rref()
        self.rank = len(self.pivots)

    def reduce(self, v: BitVector) -> BitVector:
        w = v._w.copy()
        for i, p in enumerate(self.pivots):
            if (w[p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
                w ^= self.R._w[i]
        return BitVector(v.n, w)

    def contains(self, v: BitVector) -> bool:
        return self.reduce(v).is_zero()


def rank(m: BitMatrix) -> int:
    return m.rank()


def rref(m: BitMatrix) -> tuple[BitMatrix, tuple[int, ...]]:
    return m.rref()


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    return m.nullspace_basis()


@dataclass(frozen=True)
class StandardFormDecomposition:
    """Block form [[I G1],[0 G0]] reached by row reduction and a column permutation.

    ``column_permutation[j]`` is the original index of the j-th column after
    permutation; the identity block occupies the first ``k`` permuted columns.
    ``g1``/``g0`` hold only the columns beyond the identity block, so puncturing
    the identity columns leaves exactly these matrices.
    """

    k: int
    g1: BitMatrix
    g0: BitMatrix
    column_permutation: tuple[int, ...]

    @property
    def removed_columns(self) -> tuple[int, ...]:
        return self.column_permutation[: self.k]

    @property
    def kept_columns(self) -> tuple[int, ...]:
        return self.column_permutation[self.k :]


def standard_form(
    g: BitMatrix, identity_columns: Sequence[int] | None = None
) -> StandardFormDecomposition:
    """Split ``g`` into logical rows [I G1] and residual rows [0 G0].

    With ``identity_columns`` given, pivots are chosen only inside that column
    set (in the given order) and k is the rank of the restriction; the
    remaining rows are then zero on every chosen pivot column.  By default all
    columns are eligible, so k = rank(g) and G0 collects the left-over
    (reduced, possibly zero) rows.
    """
    w = g._w.copy()
    if identity_columns is None:
        order = list(range(g.ncols))
    else:
        order = [int(c) for c in identity_columns]
        seen = set()
        for c in order:
            if not 0 <= c < g.ncols:
                raise ValueError(f"column {c} out of range")
            if c in seen:
                raise ValueError(f"duplicate column {c}")
            seen.add(c)
    pivots = g._rref_inplace(w, order)
    k = len(pivots)
    removed = pivots if identity_columns is None else [int(c) for c in identity_columns]
    removed_set = set(removed)
    kept = [c for c in range(g.ncols) if c not in removed_set]
    reduced = BitMatrix(g.ncols, w)
    sub = reduced.take_columns(kept) if kept else BitMatrix.empty(0)
    g1 = BitMatrix(len(kept), sub._w[:k].copy()) if k else BitMatrix.empty(len(kept))
    g0 = BitMatrix(len(kept), sub._w[k:].copy())
    if identity_columns is not None:
        # rows below the pivot block must vanish on the whole chosen set
        check = reduced.take_columns(removed)
        if check._w[k:].any():
            raise ValueError("rows could not be cleared on the requested columns")
    return StandardFormDecomposition(
        k=k, g1=g1, g0=g0, column_permutation=tuple(removed) + tuple(kept)
    )


# -- text formats ----------------------------------------------------------


def write_dense(m: BitMatrix, path) -> None:
    with open(path, "w") as fh:
        for i in range(m.nrows):
            fh.write(m.row(i).to01() + "\n")


def read_dense(path, ncols: int | None = None) -> BitMatrix:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(BitVector.from01(line))
    if not rows:
        if ncols is None:
            raise ValueError("empty dense matrix file needs explicit ncols")
        return BitMatrix.empty(ncols)
    return BitMatrix.from_rows(rows)


def write_alist(m: BitMatrix, path) -> None:
    """MacKay alist format: dimensions, degree lists, then 1-based index lists."""
    dense = m.to_dense()
    nrows, ncols = dense.shape
    col_idx = [list(np.nonzero(dense[:, j])[0] + 1) for j in range(ncols)]
    row_idx = [list(np.nonzero(dense[i, :])[0] + 1) for i in range(nrows)]
    max_col = max((len(c) for c in col_idx), default=0)
    max_row = max((len(r) for r in row_idx), default=0)
    with open(path, "w") as fh:
        fh.write(f"{ncols} {nrows}\n")
        fh.write(f"{max_col} {max_row}\n")
        fh.write(" ".join(str(len(c)) for c in col_idx) + "\n")
        fh.write(" ".join(str(len(r)) for r in row_idx) + "\n")
        for c in col_idx:
            fh.write(" ".join(str(i) for i in c + [0] * (max_col - len(c))).strip() + "\n")
        for r in row_idx:
            fh.write(" ".join(str(i) for i in r + [0] * (max_row - len(r))).strip() + "\n")


def read_alist_tokens(tokens: Sequence[int]) -> BitMatrix:
    it = iter(tokens)
    ncols, nrows = next(it), next(it)
    max_col, max_row = next(it), next(it)
    col_deg = [next(it) for _ in range(ncols)]
    [next(it) for _ in range(nrows)]  # row degrees, redundant
    remaining = list(it)
    # index lists are zero-padded to the max degree in the common variant and
    # unpadded in the other; the total token count tells them apart
    padded = len(remaining) == ncols * max_col + nrows * max_row
    dense = np.zeros((nrows, ncols), dtype=np.uint8)
    pos = 0
    for j in range(ncols):
        width = max_col if padded else col_deg[j]
        for v in remaining[pos : pos + width]:
            if v:
                dense[v - 1, j] = 1
        pos += width
    # the row blocks repeat the same information; skip them
    return BitMatrix.from_dense(dense)


def read_alist(path) -> BitMatrix:
    with open(path) as fh:
        tokens = [int(t) for t in fh.read().split()]
    return read_alist_tokens(tokens)


class IncrementalBasis:
    """Grow a row-reduced basis one vector at a time; used for quotient picks."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[int] = []  # reduced rows as ints
        self.pivots: list[int] = []  # lowest set bit of each row

    def _reduce(self, x: int) -> int:
        for row, p in zip(self.rows, self.pivots):
            if (x >> p) & 1:
                x ^= row
        return x

    def contains(self, v: BitVector) -> bool:
        return self._reduce(v.to_int()) == 0

    def add(self, v: BitVector) -> bool:
        """Insert if independent of the current span; returns True when added."""
        x = self._reduce(v.to_int())
        if x == 0:
            return False
        p = (x & -x).bit_length() - 1
        for i, row in enumerate(self.rows):
            if (row >> p) & 1:
                self.rows[i] ^= x
        self.rows.append(x)
        self.pivots.append(p)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)
