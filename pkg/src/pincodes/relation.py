"""Levels, pins, flags and pinned sets.

A relation assigns to every flag one pin per level.  Pinned sets (the flag
sets fixed by a partial pin assignment) become stabilizer supports, so this
module carries the validation rule that makes the derived codes CSS: every
fully-pinned-but-one set must have even size.  Pins can be marked free; free
pins never define stabilizers on their own and flags made only of free pins
are dropped when the relation is finalized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .f2la import BitVector

__all__ = [
    "Pin",
    "Flag",
    "PinnedSet",
    "PinnedSetFamily",
    "ValidationReport",
    "PinCodeRelation",
    "complement",
    "save_relation",
    "load_relation",
]


def complement(t: Iterable[int], d: int) -> frozenset[int]:
    """Ranks of {0..d} not in the type t."""
    t = frozenset(t)
    if not t <= frozenset(range(d + 1)):
        raise ValueError(f"type {sorted(t)} not a subset of 0..{d}")
    return frozenset(range(d + 1)) - t


@dataclass(frozen=True)
class Pin:
    rank: int
    index: int
    free: bool = False
    name: str = ""

    def label(self) -> str:
        return self.name or f"p{self.rank}.{self.index}"

    def __repr__(self) -> str:
        star = "*" if self.free else ""
        return f"Pin({self.rank},{self.index}{star})"


@dataclass(frozen=True)
class Flag:
    index: int
    pins: tuple[Pin, ...]

    def pin(self, rank: int) -> Pin:
        return self.pins[rank]

    def __repr__(self) -> str:
        return f"Flag({self.index}:{','.join(p.label() for p in self.pins)})"


@dataclass(frozen=True)
class PinnedSet:
    """A pin collection together with its indicator vector over the flags."""

    collection: tuple[Pin, ...]
    vector: BitVector
    relation_id: int
    part: int = 0  # refinement index when a group split subdivides the set

    @property
    def type(self) -> frozenset[int]:
        return frozenset(p.rank for p in self.collection)

    @property
    def weight(self) -> int:
        return self.vector.weight

    def __repr__(self) -> str:
        pins = ",".join(p.label() for p in self.collection)
        return f"PinnedSet([{pins}] part={self.part} weight={self.weight})"


@dataclass(frozen=True)
class PinnedSetFamily:
    sets: tuple[PinnedSet, ...]
    duplicate_groups: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    odd_collections: tuple[tuple[Pin, ...], ...]
    checked: int
    strict: bool

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class GroupData:
    """Right-multiplication action of the generators on the group elements.

    Present only on relations built from a group; lets stabilizer enumeration
    refine pinned sets into cosets of the subgroup generated by the ranks
    outside the type.
    """

    gen_action: list[np.ndarray]


class PinCodeRelation:
    """An immutable relation: levels of pins plus flags assigning one pin per level."""

    def __init__(
        self,
        levels: Sequence[Sequence[Pin]],
        flags: Sequence[Flag],
        dropped_all_free: int = 0,
        group: GroupData | None = None,
        split_stabilizers: bool = False,
    ):
        self.levels: tuple[tuple[Pin, ...], ...] = tuple(tuple(l) for l in levels)
        self.flags: tuple[Flag, ...] = tuple(flags)
        self.dropped_all_free = dropped_all_free
        self.group = group
        self.split_stabilizers = split_stabilizers
        self._validated: bool | None = None
        for rank, level in enumerate(self.levels):
            for idx, p in enumerate(level):
                if p.rank != rank or p.index != idx:
                    raise ValueError(f"pin {p} misplaced at level {rank} slot {idx}")
        for f in self.flags:
            if len(f.pins) != len(self.levels):
                raise ValueError(f"flag {f.index} does not assign every level")
            for rank, p in enumerate(f.pins):
                if self.levels[rank][p.index] is not p and self.levels[rank][p.index] != p:
                    raise ValueError(f"flag {f.index} references unknown pin {p}")
        self._pin_indicator: dict[tuple[int, int], BitVector] = {}
        n = len(self.flags)
        supports: dict[tuple[int, int], list[int]] = {}
        for f in self.flags:
            for p in f.pins:
                supports.setdefault((p.rank, p.index), []).append(f.index)
        for level in self.levels:
            for p in level:
                idxs = supports.get((p.rank, p.index), [])
                self._pin_indicator[(p.rank, p.index)] = BitVector.from_indices(n, idxs)

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        level_sizes: Sequence[int],
        flag_tuples: Iterable[Sequence[int]],
        free: Mapping[int, Iterable[int]] | None = None,
        names: Mapping[int, Sequence[str]] | None = None,
        group: GroupData | None = None,
        split_stabilizers: bool = False,
    ) -> "PinCodeRelation":
        """Build a relation from level sizes and flag pin-index tuples.

        ``free[rank]`` lists pin indices marked free at that rank.  Flags made
        of free pins only are dropped (their count is recorded).
        """
        free = {r: set(v) for r, v in (free or {}).items()}
        levels = []
        for rank, size in enumerate(level_sizes):
            level = []
            for idx in range(size):
                name = names[rank][idx] if names and rank in names else ""
                level.append(Pin(rank, idx, free=idx in free.get(rank, ()), name=name))
            levels.append(level)
        flags = []
        dropped = 0
        for tup in flag_tuples:
            if len(tup) != len(levels):
                raise ValueError(f"flag tuple {tup} does not cover every level")
            pins = tuple(levels[r][i] for r, i in enumerate(tup))
            if all(p.free for p in pins):
                dropped += 1
                continue
            flags.append(Flag(len(flags), pins))
        return cls(levels, flags, dropped_all_free=dropped, group=group,
                   split_stabilizers=split_stabilizers)

    # -- basic queries -----------------------------------------------------

    @property
    def d(self) -> int:
        return len(self.levels) - 1

    @property
    def num_flags(self) -> int:
        return len(self.flags)

    def pin(self, rank: int, index: int) -> Pin:
        return self.levels[rank][index]

    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(l) for l in self.levels)

    def has_free_pins(self) -> bool:
        return any(p.free for level in self.levels for p in level)

    def _as_pins(self, collection: Iterable) -> tuple[Pin, ...]:
        pins = []
        for item in collection:
            if isinstance(item, Pin):
                pins.append(self.levels[item.rank][item.index])
            else:
                r, i = item
                pins.append(self.levels[r][i])
        pins.sort(key=lambda p: p.rank)
        ranks = [p.rank for p in pins]
        if len(set(ranks)) != len(ranks):
            raise ValueError(f"collection has two pins of equal rank: {pins}")
        return tuple(pins)

    # -- projections and pinned sets ----------------------------------------

    def project(self, flag: Flag, t: Iterable[int]) -> tuple[Pin, ...]:
        """The pins of ``flag`` at the ranks in ``t``, by increasing rank."""
        ranks = sorted(set(t))
        for r in ranks:
            if not 0 <= r <= self.d:
                raise ValueError(f"rank {r} out of range 0..{self.d}")
        return tuple(flag.pins[r] for r in ranks)

    def pinned_set(self, collection: Iterable) -> PinnedSet:
        """All flags whose projection matches the collection; empty type = all flags."""
        pins = self._as_pins(collection)
        vec = BitVector.ones(self.num_flags)
        for p in pins:
            vec = vec & self._pin_indicator[(p.rank, p.index)]
        return PinnedSet(pins, vec, id(self))

    def intersect_pinned(self, p1: PinnedSet, p2: PinnedSet) -> PinnedSet | None:
        """Pinned set of the union collection, or None when shared ranks disagree."""
        if p1.relation_id != id(self) or p2.relation_id != id(self):
            raise ValueError("pinned sets come from a different relation")
        by_rank: dict[int, Pin] = {p.rank: p for p in p1.collection}
        for p in p2.collection:
            q = by_rank.get(p.rank)
            if q is not None and q.index != p.index:
                return None
            by_rank[p.rank] = p
        return self.pinned_set(by_rank.values())

    def decompose_pinned(self, s: Iterable, t2: Iterable[int]) -> list[PinnedSet]:
        """Partition the pinned set of ``s`` into pinned sets of the larger type ``t2``."""
        pins = self._as_pins(s)
        t = frozenset(p.rank for p in pins)
        t2 = frozenset(t2)
        if not t <= t2:
            raise ValueError(f"refining type {sorted(t2)} does not contain {sorted(t)}")
        if not t2 <= frozenset(range(self.d + 1)):
            raise ValueError(f"type {sorted(t2)} out of range")
        parent = self.pinned_set(pins)
        groups: dict[tuple[Pin, ...], list[int]] = {}
        for i in parent.vector.support():
            key = self.project(self.flags[i], t2)
            groups.setdefault(key, []).append(i)
        out = []
        for key in sorted(groups, key=lambda c: tuple(p.index for p in c)):
            vec = BitVector.from_indices(self.num_flags, groups[key])
            out.append(PinnedSet(key, vec, id(self)))
        return out

    # -- validation ----------------------------------------------------------

    def validate(self, strict: bool = False) -> ValidationReport:
        """Check that qualifying fully-pinned-but-one flag sets all have even size.

        Collections made only of free pins are exempt unless ``strict``; only
        those sets ever back stabilizers, and every stabilizer overlap
        decomposes into them, so the restricted check is what commutation
        needs.
        """
        odd = []
        checked = 0
        d = self.d
        for missing in range(d + 1):
            t = [r for r in range(d + 1) if r != missing]
            groups: dict[tuple[Pin, ...], int] = {}
            for f in self.flags:
                key = tuple(f.pins[r] for r in t)
                groups[key] = groups.get(key, 0) + 1
            for key, size in sorted(
                groups.items(), key=lambda kv: tuple(p.index for p in kv[0])
            ):
                if not strict and all(p.free for p in key):
                    continue
                checked += 1
                if size % 2:
                    odd.append(key)
        report = ValidationReport(
            passed=not odd, odd_collections=tuple(odd), checked=checked, strict=strict
        )
        if not strict:
            self._validated = report.passed
        return report

    def ensure_validated(self) -> None:
        if self._validated is None:
            self.validate()
        if not self._validated:
            raise ValueError("relation fails pin code validation (odd pinned sets)")

    # -- stabilizer enumeration ----------------------------------------------

    def enumerate_pinned_sets(self, k: int, split: bool | None = None) -> PinnedSetFamily:
        """All nonempty k-pinned sets whose collection has a non-free pin.

        With k = 0 the single all-flags set qualifies only when some level has
        no free pin at all.  Sets sharing one indicator vector but distinct
        collections are all kept and reported as duplicates.
        """
        if not 0 <= k <= self.d + 1:
            raise ValueError(f"pin count {k} out of range 0..{self.d + 1}")
        if split is None:
            split = self.split_stabilizers
        if split and self.group is None:
            raise ValueError("split stabilizers need a group-built relation")
        sets: list[PinnedSet] = []
        if k == 0:
            if any(all(not p.free for p in level) for level in self.levels):
                sets.append(self.pinned_set(()))
        else:
            for t in itertools.combinations(range(self.d + 1), k):
                groups: dict[tuple[Pin, ...], list[int]] = {}
                for f in self.flags:
                    key = tuple(f.pins[r] for r in t)
                    groups.setdefault(key, []).append(f.index)
                for key in sorted(groups, key=lambda c: tuple(p.index for p in c)):
                    if all(p.free for p in key):
                        continue
                    if split:
                        sets.extend(self._split_parts(t, key, groups[key]))
                    else:
                        vec = BitVector.from_indices(self.num_flags, groups[key])
                        sets.append(PinnedSet(key, vec, id(self)))
        by_vec: dict[bytes, list[int]] = {}
        for i, s in enumerate(sets):
            by_vec.setdefault(s.vector._w.tobytes(), []).append(i)
        dups = tuple(tuple(g) for g in by_vec.values() if len(g) > 1)
        return PinnedSetFamily(tuple(sets), dups)

    def _split_parts(
        self, t: tuple[int, ...], key: tuple[Pin, ...], members: list[int]
    ) -> list[PinnedSet]:
        """Refine one pinned set into cosets of the subgroup generated outside t."""
        assert self.group is not None
        outside = [r for r in range(self.d + 1) if r not in t]
        parent = dict((m, m) for m in members)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        member_set = set(members)
        for r in outside:
            action = self.group.gen_action[r]
            for m in members:
                m2 = int(action[m])
                if m2 in member_set:
                    ra, rb = find(m), find(m2)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        orbits: dict[int, list[int]] = {}
        for m in members:
            orbits.setdefault(find(m), []).append(m)
        out = []
        for part, root in enumerate(sorted(orbits)):
            vec = BitVector.from_indices(self.num_flags, orbits[root])
            out.append(PinnedSet(key, vec, id(self), part=part))
        return out

    def __repr__(self) -> str:
        sizes = "x".join(str(s) for s in self.level_sizes())
        return f"PinCodeRelation(levels={sizes}, flags={self.num_flags})"


# -- relation files ----------------------------------------------------------


def save_relation(rel: PinCodeRelation, path) -> None:
    with open(path, "w") as fh:
        fh.write("pin-relation 1\n")
        fh.write(f"levels {len(rel.levels)}\n")
        for rank, level in enumerate(rel.levels):
            toks = [p.label() + ("*" if p.free else "") for p in level]
            fh.write(f"level {rank}: {' '.join(toks)}\n")
        for f in rel.flags:
            fh.write("flag " + " ".join(p.label() for p in f.pins) + "\n")


def load_relation(path) -> PinCodeRelation:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0].split() != ["pin-relation", "1"]:
        raise ValueError("not a pin-relation file")
    nlevels = int(lines[1].split()[1])
    sizes = []
    free: dict[int, list[int]] = {}
    names: dict[int, list[str]] = {}
    lookup: list[dict[str, int]] = []
    pos = 2
    for rank in range(nlevels):
        head, _, body = lines[pos].partition(":")
        if head.split() != ["level", str(rank)]:
            raise ValueError(f"expected level {rank} at line {pos + 1}")
        toks = body.split()
        names[rank] = []
        free[rank] = []
        lookup.append({})
        for idx, tok in enumerate(toks):
            if tok.endswith("*"):
                free[rank].append(idx)
                tok = tok[:-1]
            names[rank].append(tok)
            lookup[rank][tok] = idx
        sizes.append(len(toks))
        pos += 1
    flag_tuples = []
    for ln in lines[pos:]:
        toks = ln.split()
        if toks[0] != "flag":
            raise ValueError(f"unexpected line: {ln}")
        if len(toks) != nlevels + 1:
            raise ValueError(f"flag line has {len(toks) - 1} pins, want {nlevels}")
        flag_tuples.append(tuple(lookup[r][tok] for r, tok in enumerate(toks[1:])))
    return PinCodeRelation.build(sizes, flag_tuples, free=free, names=names)
