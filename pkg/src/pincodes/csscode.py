"""CSS and gauge codes built from pinned sets, with logical-basis extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .f2la import BitMatrix, BitVector, IncrementalBasis, _Reducer
from .relation import PinCodeRelation, PinnedSet

__all__ = [
    "CssCode",
    "LogicalBasis",
    "GaugeCode",
    "CodeStats",
    "build_pin_code",
    "compute_k",
    "logical_basis",
    "gauge_code",
    "code_stats",
    "css_from_imposed_logicals",
    "syndrome_redundancy",
]


@dataclass
class CssCode:
    """Stabilizer generator matrices of a CSS code plus optional provenance.

    ``provenance_x[i]`` records the pin collection behind row i of sx (and
    likewise for z) when the code came from a relation.
    """

    sx: BitMatrix
    sz: BitMatrix
    provenance_x: tuple = ()
    provenance_z: tuple = ()
    relation: PinCodeRelation | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sx.ncols != self.sz.ncols:
            raise ValueError("sx and sz must act on the same qubits")
        if self.sx.mul_t(self.sz).any():
            raise ValueError("X and Z stabilizers do not commute")

    @property
    def n(self) -> int:
        return self.sx.ncols

    @cached_property
    def rank_x(self) -> int:
        return self.sx.rank()

    @cached_property
    def rank_z(self) -> int:
        return self.sz.rank()

    @property
    def k(self) -> int:
        return self.n - self.rank_x - self.rank_z

    @cached_property
    def _sx_reducer(self) -> _Reducer:
        return _Reducer(self.sx)

    @cached_property
    def _sz_reducer(self) -> _Reducer:
        return _Reducer(self.sz)

    def is_x_logical(self, v: BitVector) -> bool:
        """In ker(sz) but outside the X-stabilizer row space."""
        return not self.sz.mul_t(BitMatrix.from_rows([v])).any() and not self._sx_reducer.contains(v)

    def is_z_logical(self, v: BitVector) -> bool:
        return not self.sx.mul_t(BitMatrix.from_rows([v])).any() and not self._sz_reducer.contains(v)

    def __repr__(self) -> str:
        return f"CssCode(n={self.n}, k={self.k})"


@dataclass
class LogicalBasis:
    lx: BitMatrix
    lz: BitMatrix

    @property
    def k(self) -> int:
        return self.lx.nrows

    def __post_init__(self):
        if self.lx.nrows != self.lz.nrows:
            raise ValueError("lx and lz must pair up")


def build_pin_code(rel: PinCodeRelation, x: int, z: int) -> CssCode:
    """The CSS code with X generators on x-pinned sets and Z on z-pinned sets."""
    if x < 1 or z < 1:
        raise ValueError("x and z must both be at least 1")
    if x + z > rel.d:
        raise ValueError(f"need x+z <= {rel.d}, got {x}+{z}")
    rel.ensure_validated()
    fam_x = rel.enumerate_pinned_sets(x)
    fam_z = rel.enumerate_pinned_sets(z)
    sx = BitMatrix.from_rows([s.vector for s in fam_x.sets], rel.num_flags)
    sz = BitMatrix.from_rows([s.vector for s in fam_z.sets], rel.num_flags)
    return CssCode(
        sx,
        sz,
        provenance_x=tuple((s.collection, s.part) for s in fam_x.sets),
        provenance_z=tuple((s.collection, s.part) for s in fam_z.sets),
        relation=rel,
        meta={"x": x, "z": z, "d_levels": rel.d},
    )


def compute_k(code: CssCode) -> int:
    k = code.k
    if k < 0:
        raise ValueError("negative k: stabilizers are inconsistent")
    return k


def _quotient_basis(numerator: BitMatrix, denominator: BitMatrix, k: int) -> BitMatrix:
    """First k rows of ``numerator`` independent modulo the denominator span."""
    acc = IncrementalBasis(numerator.ncols)
    for i in range(denominator.nrows):
        acc.add(denominator.row(i))
    picked = []
    for i in range(numerator.nrows):
        row = numerator.row(i)
        if acc.add(row):
            picked.append(row)
            if len(picked) == k:
                break
    if len(picked) < k:
        raise RuntimeError("quotient basis came up short")
    return BitMatrix.from_rows(picked, numerator.ncols)


def _gf2_inverse(m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    aug = np.concatenate([m.astype(np.uint8) % 2, np.eye(k, dtype=np.uint8)], axis=1)
    r = 0
    for c in range(k):
        piv = None
        for i in range(r, k):
            if aug[i, c]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular over GF(2)")
        aug[[r, piv]] = aug[[piv, r]]
        for i in range(k):
            if i != r and aug[i, c]:
                aug[i] ^= aug[r]
        r += 1
    return aug[:, k:]


def logical_basis(code: CssCode) -> LogicalBasis:
    """Symplectically paired logical bases: lx @ lz.T = identity.

    Deterministic given the code: candidates come from nullspace bases in
    fixed order.
    """
    k = compute_k(code)
    n = code.n
    if k == 0:
        return LogicalBasis(BitMatrix.empty(n), BitMatrix.empty(n))
    lx = _quotient_basis(code.sz.nullspace_basis(), code.sx, k)
    lz = _quotient_basis(code.sx.nullspace_basis(), code.sz, k)
    pairing = lx.mul_t(lz)
    binv = _gf2_inverse(pairing)
    lz_new = BitMatrix.from_dense((binv.T @ lz.to_dense()) % 2)
    assert np.array_equal(lx.mul_t(lz_new), np.eye(k, dtype=np.uint8))
    return LogicalBasis(lx, lz_new)


def css_from_imposed_logicals(
    sx: BitMatrix, lx: BitMatrix, relation: PinCodeRelation | None = None, meta: dict | None = None
) -> tuple[CssCode, LogicalBasis]:
    """Complete a CSS code from chosen X stabilizers and X logicals.

    The Z stabilizers span the orthogonal complement of span(sx) + span(lx),
    which pins the code down entirely; the Z logicals are solved to pair with
    ``lx`` one for one.
    """
    n = sx.ncols
    combined = sx.stack(lx)
    sz = combined.nullspace_basis()
    code = CssCode(sx, sz, relation=relation, meta=meta or {})
    k = lx.nrows
    if k == 0:
        return code, LogicalBasis(BitMatrix.empty(n), BitMatrix.empty(n))
    kernel = sx.nullspace_basis()
    pairing = lx.mul_t(kernel)  # k x m
    m = kernel.nrows
    aug = np.concatenate([pairing % 2, np.eye(k, dtype=np.uint8)], axis=1)
    r = 0
    pivots = []
    for c in range(m):
        piv = None
        for i in range(r, k):
            if aug[i, c]:
                piv = i
                break
        if piv is None:
            continue
        aug[[r, piv]] = aug[[piv, r]]
        for i in range(k):
            if i != r and aug[i, c]:
                aug[i] ^= aug[r]
        pivots.append(c)
        r += 1
    if r < k:
        raise ValueError("imposed logicals do not pair with the kernel")
    # solution X with pairing @ X = I: X[pivots[i]] = transform row i
    xmat = np.zeros((m, k), dtype=np.uint8)
    for i, p in enumerate(pivots):
        xmat[p] = aug[i, m:]
    lz = BitMatrix.from_dense((xmat.T @ kernel.to_dense()) % 2)
    assert np.array_equal(lx.mul_t(lz), np.eye(k, dtype=np.uint8))
    return code, LogicalBasis(lx, lz)


@dataclass
class GaugeCode:
    """Gauge generators plus the stabilizer center they generate."""

    gx: BitMatrix
    gz: BitMatrix
    sx: BitMatrix
    sz: BitMatrix
    k: int
    stabilizer_k: int
    gauge_pairs: int
    meta: dict = field(default_factory=dict)


def gauge_code(rel: PinCodeRelation, x: int, z: int) -> GaugeCode:
    """Gauge code with X gauges on (D-z)-pinned sets and Z gauges on (D-x)-pinned sets.

    The stabilizer center sits on the x- and z-pinned sets.  The number of
    logical qubits is reported next to the (x, D-x) stabilizer count since
    the two can differ.
    """
    d = rel.d
    if x < 1 or z < 1:
        raise ValueError("x and z must both be at least 1")
    if x + z >= d:
        raise ValueError(f"gauge construction needs x+z < {d}, got {x}+{z}")
    rel.ensure_validated()
    gx_rows = rel.enumerate_pinned_sets(d - z)
    gz_rows = rel.enumerate_pinned_sets(d - x)
    sx_rows = rel.enumerate_pinned_sets(x)
    sz_rows = rel.enumerate_pinned_sets(z)
    n = rel.num_flags
    gx = BitMatrix.from_rows([s.vector for s in gx_rows.sets], n)
    gz = BitMatrix.from_rows([s.vector for s in gz_rows.sets], n)
    sx = BitMatrix.from_rows([s.vector for s in sx_rows.sets], n)
    sz = BitMatrix.from_rows([s.vector for s in sz_rows.sets], n)
    gx_red = _Reducer(gx)
    gz_red = _Reducer(gz)
    for i in range(sx.nrows):
        if not gx_red.contains(sx.row(i)):
            raise ValueError("X stabilizer escaped the X gauge span")
    for i in range(sz.nrows):
        if not gz_red.contains(sz.row(i)):
            raise ValueError("Z stabilizer escaped the Z gauge span")
    pairing = gx.mul_t(gz)
    if not pairing.any():
        raise ValueError("gauge generators all commute; expected anticommuting pairs")
    gauge_pairs = BitMatrix.from_dense(pairing).rank()
    k = n - gx.rank() - gz.rank() + gauge_pairs
    # the (x, D-x)-pin code from the same relation, for comparison
    stabilizer_k = n - sx.rank() - gz.rank()
    return GaugeCode(
        gx, gz, sx, sz, k=k, stabilizer_k=stabilizer_k, gauge_pairs=gauge_pairs,
        meta={"x": x, "z": z, "d_levels": d},
    )


def syndrome_redundancy(d: int, x: int, z: int) -> int:
    """Ways to rebuild an x-pinned stabilizer from (D-z)-pinned gauge outcomes."""
    return math.comb(d + 1 - x, (d - z) - x)


@dataclass
class CodeStats:
    n: int
    k: int
    num_x: int
    num_z: int
    x_weights: tuple[int, int, float]  # min, max, mean
    z_weights: tuple[int, int, float]
    max_qubit_degree: int
    duplicate_x: int
    duplicate_z: int

    def lines(self) -> list[str]:
        return [
            f"n {self.n}",
            f"k {self.k}",
            f"x-generators {self.num_x} weight min/max/mean "
            f"{self.x_weights[0]}/{self.x_weights[1]}/{self.x_weights[2]:.2f}",
            f"z-generators {self.num_z} weight min/max/mean "
            f"{self.z_weights[0]}/{self.z_weights[1]}/{self.z_weights[2]:.2f}",
            f"max-qubit-degree {self.max_qubit_degree}",
            f"duplicate-rows x={self.duplicate_x} z={self.duplicate_z}",
        ]


def _weight_summary(m: BitMatrix) -> tuple[int, int, float]:
    if m.nrows == 0:
        return (0, 0, 0.0)
    ws = m.row_weights()
    return (int(ws.min()), int(ws.max()), float(ws.mean()))


def _duplicate_rows(m: BitMatrix) -> int:
    seen: dict[bytes, int] = {}
    dups = 0
    for i in range(m.nrows):
        key = m._w[i].tobytes()
        if key in seen:
            dups += 1
        else:
            seen[key] = i
    return dups


def code_stats(code: CssCode) -> CodeStats:
    degree = code.sx.column_weights() + code.sz.column_weights()
    return CodeStats(
        n=code.n,
        k=code.k,
        num_x=code.sx.nrows,
        num_z=code.sz.nrows,
        x_weights=_weight_summary(code.sx),
        z_weights=_weight_summary(code.sz),
        max_qubit_degree=int(degree.max()) if code.n else 0,
        duplicate_x=_duplicate_rows(code.sx),
        duplicate_z=_duplicate_rows(code.sz),
    )
