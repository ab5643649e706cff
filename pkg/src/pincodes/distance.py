"""Minimum-distance computation: exact with certificates, or seeded upper bounds.

Exact answers come from two engines.  Low-weight exhaustion enumerates every
kernel word up to a small weight through syndrome hashing, so a hit at weight
w (with all lighter weights exhausted) is the side's exact distance.  Coset
sweeps walk the whole logical-class space in Gray-code order when
2^(k + rank) is affordable.  If neither engine can settle a side, exact mode
refuses rather than degrade to a bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .csscode import CssCode, LogicalBasis, logical_basis
from .f2la import BitMatrix, BitVector, _Reducer

__all__ = [
    "DistanceBudget",
    "DistanceResult",
    "ExactDistanceInfeasible",
    "distance",
    "column_ints",
    "low_weight_kernel_word",
    "low_weight_logical",
    "side_distance_exact",
]


class ExactDistanceInfeasible(RuntimeError):
    """Exact mode cannot certify the distance within the configured budget."""


@dataclass(frozen=True)
class DistanceBudget:
    max_pair_weight: int = 4      # exhaustive search up to this weight
    pair_weight_cap: int = 1500   # widest code for the quadratic w<=4 sweep
    gray_cap: int = 28            # coset sweep allowed while k + rank <= cap
    bound_iterations: int = 300   # information-set rounds in bound mode


@dataclass(frozen=True)
class DistanceResult:
    value: int
    exact: bool
    side: str  # "X" or "Z"
    witness: BitVector | None
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def __str__(self) -> str:
        tag = "d" if self.exact else "d<="
        return f"{tag}{self.value} ({self.side} side)"


def column_ints(m: BitMatrix) -> list[int]:
    """Columns of the matrix packed into Python ints (bit i = row i)."""
    if m.nrows == 0:
        return [0] * m.ncols
    dense = np.ascontiguousarray(m.to_dense().T)
    packed = np.packbits(dense, axis=1, bitorder="little")
    return [int.from_bytes(packed[j].tobytes(), "little") for j in range(m.ncols)]


def low_weight_kernel_word(
    cols: Sequence[int],
    max_w: int,
    accept,
    pair_weight_cap: int = 1500,
) -> tuple[int, tuple[int, ...]] | None:
    """Lightest column subset with zero syndrome that ``accept`` approves.

    ``cols`` holds packed column syndromes; subsets are scanned exhaustively
    by increasing size (1 and 2 directly, 3 and 4 through pair-sum hashing),
    so the first hit is minimal.  Weight 4 is skipped beyond the quadratic
    cap.
    """
    n = len(cols)
    if max_w >= 1:
        for j in range(n):
            if cols[j] == 0 and accept((j,)):
                return 1, (j,)
    if max_w < 2:
        return None
    col_lookup: dict[int, list[int]] = {}
    for j in range(n):
        col_lookup.setdefault(cols[j], []).append(j)
    for idxs in col_lookup.values():
        for a in range(len(idxs)):
            for b in range(a + 1, len(idxs)):
                if accept((idxs[a], idxs[b])):
                    return 2, (idxs[a], idxs[b])
    if max_w >= 3:
        for i in range(n):
            ci = cols[i]
            for j in range(i + 1, n):
                for k in col_lookup.get(ci ^ cols[j], ()):
                    if k > j and accept((i, j, k)):
                        return 3, (i, j, k)
    if max_w >= 4 and n <= pair_weight_cap:
        pair_syn: dict[int, list[tuple[int, int]]] = {}
        for i in range(n):
            ci = cols[i]
            for j in range(i + 1, n):
                pair_syn.setdefault(ci ^ cols[j], []).append((i, j))
        for pairs in pair_syn.values():
            if len(pairs) < 2:
                continue
            for a in range(len(pairs)):
                i, j = pairs[a]
                for b in range(a + 1, len(pairs)):
                    k, l = pairs[b]
                    if j < k and accept((i, j, k, l)):
                        return 4, (i, j, k, l)
    return None


def low_weight_logical(
    checks: BitMatrix,
    trivial: _Reducer,
    max_w: int,
    pair_weight_cap: int = 1500,
) -> tuple[int, BitVector] | None:
    """Lightest kernel word of ``checks`` outside the row space of ``trivial``."""
    n = checks.ncols
    cols = column_ints(checks)

    def accept(indices: tuple[int, ...]) -> bool:
        return not trivial.contains(BitVector.from_indices(n, list(indices)))

    hit = low_weight_kernel_word(cols, max_w, accept, pair_weight_cap)
    if hit is None:
        return None
    return hit[0], BitVector.from_indices(n, list(hit[1]))


def _rows_as_ints(m: BitMatrix) -> list[int]:
    return [m.row(i).to_int() for i in range(m.nrows)]


def _gray_min(l_rows: list[int], s_rows: list[int], n: int) -> tuple[int, BitVector]:
    """Minimum weight over all nonzero logical classes, sweeping stabilizers
    in Gray-code order inside each class."""
    k, r = len(l_rows), len(s_rows)
    best_w, best_v = n + 1, 0
    for u in range(1, 1 << k):
        base = 0
        for i in range(k):
            if (u >> i) & 1:
                base ^= l_rows[i]
        cur = base
        w = cur.bit_count()
        if w < best_w:
            best_w, best_v = w, cur
        for step in range(1, 1 << r):
            cur ^= s_rows[(step & -step).bit_length() - 1]
            w = cur.bit_count()
            if w < best_w:
                best_w, best_v = w, cur
    words = (n + 63) // 64
    vec = BitVector(n, np.frombuffer(best_v.to_bytes(words * 8, "little"), dtype=np.uint64).copy())
    return best_w, vec


def side_distance_exact(
    checks: BitMatrix,
    same_side_stabs: BitMatrix,
    logicals: BitMatrix,
    budget: DistanceBudget,
) -> tuple[int | None, BitVector | None, int]:
    """Exact distance of one side, or a lower bound.

    Returns (exact_value_or_None, witness, lower_bound).  When the exact value
    is None the true distance is at least ``lower_bound``.
    """
    reducer = _Reducer(same_side_stabs)
    hit = low_weight_logical(checks, reducer, budget.max_pair_weight, budget.pair_weight_cap)
    if hit is not None:
        return hit[0], hit[1], hit[0]
    scanned = budget.max_pair_weight if checks.ncols <= budget.pair_weight_cap else 3
    k = logicals.nrows
    r = same_side_stabs.rank()
    if k and k + r <= budget.gray_cap:
        sred, _ = same_side_stabs.rref()
        s_rows = [sred.row(i).to_int() for i in range(r)]
        w, vec = _gray_min(_rows_as_ints(logicals), s_rows, checks.ncols)
        return w, vec, w
    return None, None, scanned + 1


def distance(
    code: CssCode,
    basis: LogicalBasis | None = None,
    mode: str = "exact",
    budget: DistanceBudget | None = None,
    seed: int = 0,
) -> DistanceResult:
    """Code distance, exact (with certificate) or as a seeded upper bound."""
    budget = budget or DistanceBudget()
    if code.k <= 0:
        raise ValueError("distance undefined: the code has no logical qubits")
    if basis is None:
        basis = logical_basis(code)
    if mode == "exact":
        return _exact_distance(code, basis, budget)
    if mode == "bound":
        return _bound_distance(code, basis, budget, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _exact_distance(code: CssCode, basis: LogicalBasis, budget: DistanceBudget) -> DistanceResult:
    x_val, x_wit, x_lb = side_distance_exact(code.sz, code.sx, basis.lx, budget)
    z_val, z_wit, z_lb = side_distance_exact(code.sx, code.sz, basis.lz, budget)
    sides = []
    if x_val is not None:
        sides.append((x_val, "X", x_wit))
    if z_val is not None:
        sides.append((z_val, "Z", z_wit))
    if sides:
        val, side, wit = min(sides, key=lambda t: t[0])
        other_lb = z_lb if side == "X" else x_lb
        other_val = z_val if side == "X" else x_val
        if other_val is not None or val <= other_lb:
            return DistanceResult(val, True, side, wit, details={"x_lb": x_lb, "z_lb": z_lb})
    raise ExactDistanceInfeasible(
        f"cannot certify exactly: X side {'=' + str(x_val) if x_val is not None else '>=' + str(x_lb)}, "
        f"Z side {'=' + str(z_val) if z_val is not None else '>=' + str(z_lb)}; "
        f"k + rank exceeds the coset cap {budget.gray_cap} on the undecided side"
    )


def _bound_distance(
    code: CssCode, basis: LogicalBasis, budget: DistanceBudget, seed: int
) -> DistanceResult:
    rng = np.random.Generator(np.random.Philox(key=seed))
    best: tuple[int, str, BitVector] | None = None
    quick = low_weight_logical(code.sz, code._sx_reducer, 4, budget.pair_weight_cap)
    if quick:
        best = (quick[0], "X", quick[1])
    quick = low_weight_logical(code.sx, code._sz_reducer, 4, budget.pair_weight_cap)
    if quick and (best is None or quick[0] < best[0]):
        best = (quick[0], "Z", quick[1])
    for side, stabs, logic, reducer in (
        ("X", code.sx, basis.lx, code._sx_reducer),
        ("Z", code.sz, basis.lz, code._sz_reducer),
    ):
        if logic.nrows == 0:
            continue
        found = _information_set_search(
            stabs.stack(logic), reducer, rng, budget.bound_iterations
        )
        if found and (best is None or found[0] < best[0]):
            best = (found[0], side, found[1])
    if best is None:
        raise RuntimeError("bound search found no logical representative")
    return DistanceResult(best[0], False, best[1], best[2], seed=seed)


def _information_set_search(
    span_rows: BitMatrix, trivial: _Reducer, rng: np.random.Generator, iterations: int
) -> tuple[int, BitVector] | None:
    """Random information sets over the span; returns the lightest logical seen."""
    n = span_rows.ncols
    dense = span_rows.to_dense()
    best: tuple[int, BitVector] | None = None
    for _ in range(iterations):
        perm = rng.permutation(n)
        m = BitMatrix.from_dense(dense[:, perm])
        red, _ = m.rref()
        rows = red.to_dense()
        rows = rows[rows.any(axis=1)]
        unperm = np.zeros_like(rows)
        unperm[:, perm] = rows
        weights = unperm.sum(axis=1)
        order = np.argsort(weights, kind="stable")
        for idx in order[: min(12, len(order))]:
            w = int(weights[idx])
            if best is not None and w >= best[0]:
                break
            v = BitVector.from_bits(unperm[idx])
            if not trivial.contains(v):
                best = (w, v)
        # pairwise sums of the lightest reduced rows often dip lower
        light = order[: min(24, len(order))]
        for ai in range(len(light)):
            for bi in range(ai + 1, len(light)):
                comb = unperm[light[ai]] ^ unperm[light[bi]]
                w = int(comb.sum())
                if w and (best is None or w < best[0]):
                    v = BitVector.from_bits(comb)
                    if not trivial.contains(v):
                        best = (w, v)
    return best
