"""Shrunk chain complexes: three-level complexes whose homology lifts to
candidate logical operators.

Level 0 holds the pinned sets of a chosen type t, level 1 the pinned sets of
the complementary type, and level 2 the pinned sets of every stabilizer type
contained in the complement.  A complement-type set meets a t-type set in at
most one flag, which makes the boundary maps well defined; their composite
vanishes because stabilizer overlaps are even.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .builders import ChainComplex
from .f2la import BitMatrix, BitVector, IncrementalBasis, wedge_weight
from .relation import PinCodeRelation, PinnedSet, complement

__all__ = ["ShrunkComplex", "shrunk_complex", "lift_homology", "homology_basis"]


@dataclass(frozen=True)
class ShrunkComplex:
    base: ChainComplex
    t: frozenset[int]
    x: int
    z: int
    level0: tuple[PinnedSet, ...]
    level1: tuple[PinnedSet, ...]
    level2: tuple[PinnedSet, ...]
    relation: PinCodeRelation

    @property
    def dims(self) -> tuple[int, ...]:
        return self.base.dims


def _sets_of_type(rel: PinCodeRelation, t: Iterable[int], require_non_free: bool) -> list[PinnedSet]:
    t = sorted(set(t))
    groups: dict = {}
    for f in rel.flags:
        key = tuple(f.pins[r] for r in t)
        groups.setdefault(key, []).append(f.index)
    out = []
    for key in sorted(groups, key=lambda c: tuple(p.index for p in c)):
        if require_non_free and key and all(p.free for p in key):
            continue
        if not key and require_non_free and not any(
            all(not p.free for p in level) for level in rel.levels
        ):
            continue
        vec = BitVector.from_indices(rel.num_flags, groups[key])
        out.append(PinnedSet(key, vec, id(rel)))
    return out


def shrunk_complex(rel: PinCodeRelation, x: int, z: int, t: Iterable[int]) -> ShrunkComplex:
    """The three-level complex for one X-stabilizer type t of size x."""
    t = frozenset(t)
    if len(t) != x:
        raise ValueError(f"type size {len(t)} must equal x={x}")
    if x + z > rel.d:
        raise ValueError(f"need x+z <= {rel.d}")
    rel.ensure_validated()
    tbar = complement(t, rel.d)
    level0 = _sets_of_type(rel, t, require_non_free=True)
    level1 = _sets_of_type(rel, tbar, require_non_free=False)
    level2: list[PinnedSet] = []
    for tz in itertools.combinations(sorted(tbar), z):
        level2.extend(_sets_of_type(rel, tz, require_non_free=True))

    rows1 = []
    for p1 in level1:
        cols = []
        for i0, p0 in enumerate(level0):
            w = wedge_weight([p1.vector, p0.vector])
            if w > 1:
                raise RuntimeError(
                    "complement-type and type sets share more than one flag"
                )
            if w:
                cols.append(i0)
        rows1.append(BitVector.from_indices(len(level0), cols))
    b0 = BitMatrix.from_rows(rows1, len(level0)) if rows1 else BitMatrix.empty(len(level0))

    rows2 = []
    for p2 in level2:
        cols = []
        tz_pins = {p.rank: p for p in p2.collection}
        for i1, p1 in enumerate(level1):
            # containment: the complement-type collection extends the z-type one
            if all(
                p1.collection[_rank_pos(p1.collection, r)].index == pin.index
                for r, pin in tz_pins.items()
            ):
                cols.append(i1)
        rows2.append(BitVector.from_indices(len(level1), cols))
    b1 = BitMatrix.from_rows(rows2, len(level1)) if rows2 else BitMatrix.empty(len(level1))

    base = ChainComplex((len(level0), len(level1), len(level2)), (b0, b1))
    return ShrunkComplex(
        base=base, t=t, x=x, z=z,
        level0=tuple(level0), level1=tuple(level1), level2=tuple(level2),
        relation=rel,
    )


def _rank_pos(collection: tuple, rank: int) -> int:
    for i, p in enumerate(collection):
        if p.rank == rank:
            return i
    raise KeyError(rank)


def lift_homology(sc: ShrunkComplex, cycle: BitVector) -> BitVector:
    """XOR of the complement-type sets picked by a cycle; a candidate logical.

    The input must close under the level-1 boundary.
    """
    if cycle.n != len(sc.level1):
        raise ValueError("cycle length must match the middle level")
    boundary = BitVector.zeros(len(sc.level0))
    for i in cycle.support():
        boundary = boundary ^ sc.base.boundaries[0].row(i)
    if not boundary.is_zero():
        raise ValueError("input is not a cycle: nonzero boundary")
    out = BitVector.zeros(sc.relation.num_flags)
    for i in cycle.support():
        out = out ^ sc.level1[i].vector
    return out


def homology_basis(sc: ShrunkComplex) -> list[BitVector]:
    """Cycle representatives independent of the level-2 image."""
    cycles = sc.base.boundaries[0].transpose().nullspace_basis()
    image = sc.base.boundaries[1]
    acc = IncrementalBasis(len(sc.level1))
    for i in range(image.nrows):
        acc.add(image.row(i))
    reps = []
    for i in range(cycles.nrows):
        row = cycles.row(i)
        if acc.add(row):
            reps.append(row)
    return reps
