"""Shared fixtures and independent oracles used across the suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from pincodes import BitMatrix, BitVector, PinCodeRelation


def perm_compose(p, q):
    """Permutation acting as first q, then p."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_group_order(gens: list[tuple[int, ...]]) -> int:
    """Closure size by breadth-first multiplication; the group-order oracle."""
    n = len(gens[0])
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = perm_compose(g, h)
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return len(seen)


def perm_coset_count(gens, subgroup_gens) -> int:
    return perm_group_order(gens) // perm_group_order(subgroup_gens)


def brute_pinned_set(rel: PinCodeRelation, collection) -> set[int]:
    """Pinned set straight from the definition: match the projection flag by flag."""
    pins = {p.rank: p.index for p in rel._as_pins(collection)}
    out = set()
    for f in rel.flags:
        if all(f.pins[r].index == i for r, i in pins.items()):
            out.add(f.index)
    return out


def brute_distance(code, max_n: int = 14) -> int:
    """Exact distance by full enumeration; only for tiny codes."""
    n = code.n
    assert n <= max_n
    sx = code.sx.to_dense()
    sz = code.sz.to_dense()
    best = None
    for bits in range(1, 1 << n):
        v = np.array([(bits >> i) & 1 for i in range(n)], dtype=np.uint8)
        w = int(v.sum())
        if best is not None and w >= best:
            continue
        vec = BitVector.from_bits(v)
        if not (sz @ v % 2).any() and not code._sx_reducer.contains(vec):
            best = w
        elif not (sx @ v % 2).any() and not code._sz_reducer.contains(vec):
            best = w
    assert best is not None
    return best


def rank_oracle(rows) -> int:
    """Plain dense Gaussian elimination, independent of the packed engine."""
    m = np.array(rows, dtype=np.uint8) % 2
    r = 0
    for c in range(m.shape[1]):
        piv = next((i for i in range(r, m.shape[0]) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


@pytest.fixture
def fig1_relation() -> PinCodeRelation:
    """Three two-pin levels holding three flags: the worked pin-board example."""
    names = {0: ["1", "2"], 1: ["a", "b"], 2: ["alpha", "beta"]}
    flags = [(0, 0, 0), (0, 1, 1), (1, 1, 0)]
    return PinCodeRelation.build([2, 2, 2], flags, names=names)


def random_even_complete_sizes(rng, max_levels=4, max_size=4):
    nlevels = int(rng.integers(2, max_levels + 1))
    return [int(rng.choice([2, 4])) for _ in range(nlevels)]


def all_wedges_even(m: BitMatrix, size: int) -> bool:
    rows = [m.row(i) for i in range(m.nrows)]
    for combo in itertools.combinations(rows, size):
        acc = combo[0]
        for v in combo[1:]:
            acc = acc & v
        if acc.weight % 2:
            return False
    return True
