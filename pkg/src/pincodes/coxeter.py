"""Finitely presented groups, coset enumeration and the derived relations.

The enumeration is the table-based procedure with relator scanning: every
coset is pushed through every relator, gaps are filled by defining new
cosets, and collisions are merged through a union-find.  Definition order is
fixed, so the resulting table is reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .relation import GroupData, PinCodeRelation

__all__ = [
    "GroupPresentation",
    "CosetTable",
    "EnumerationBudgetError",
    "todd_coxeter",
    "coxeter_relation",
    "save_presentation",
    "load_presentation",
]

DEFAULT_COSET_CAP = 10 ** 6


class EnumerationBudgetError(RuntimeError):
    """Raised when the coset cap is hit; the group may be infinite."""


@dataclass(frozen=True)
class GroupPresentation:
    """Generators 0..num_generators-1, relator words, involution marks.

    Words are tuples of generator indices; a negative entry -g-1 stands for
    the inverse of generator g (never needed for involutions).
    """

    num_generators: int
    relators: tuple[tuple[int, ...], ...]
    involutions: frozenset[int] = frozenset()

    def __post_init__(self):
        for word in self.relators:
            for g in word:
                idx = g if g >= 0 else -g - 1
                if not 0 <= idx < self.num_generators:
                    raise ValueError(f"generator {g} out of range in relator {word}")

    @classmethod
    def coxeter(cls, orders: dict[tuple[int, int], int], num_generators: int) -> "GroupPresentation":
        """All generators are involutions; orders[(i, j)] is the order of g_i g_j."""
        relators = []
        for (i, j), m in sorted(orders.items()):
            relators.append(tuple([i, j] * m))
        return cls(num_generators, tuple(relators), frozenset(range(num_generators)))

    def all_involutions(self) -> bool:
        return self.involutions >= frozenset(range(self.num_generators))


@dataclass
class CosetTable:
    """Closed coset table: entry [c, g] is the coset reached from c by g."""

    num_generators: int
    table: np.ndarray  # (num_cosets, num_letters); the first num_generators
    inverse_table: np.ndarray
    subgroup_words: tuple[tuple[int, ...], ...]

    @property
    def num_cosets(self) -> int:
        return int(self.table.shape[0])

    def action(self, g: int) -> np.ndarray:
        return self.table[:, g]


class _Enumerator:
    def __init__(self, pres: GroupPresentation, cap: int):
        self.pres = pres
        self.cap = cap
        ngens = pres.num_generators
        # letters: one per generator, plus an inverse letter for each
        # non-involution generator
        self.inv_letter = list(range(ngens))
        self.nletters = ngens
        for g in range(ngens):
            if g not in pres.involutions:
                self.inv_letter[g] = self.nletters
                self.inv_letter.append(g)
                self.nletters += 1
        self.rows: list[list[int]] = []
        self.parent: list[int] = []
        self.defined = 0
        self._new_coset()

    # -- union-find --------------------------------------------------------

    def find(self, c: int) -> int:
        while self.parent[c] != c:
            self.parent[c] = self.parent[self.parent[c]]
            c = self.parent[c]
        return c

    def _new_coset(self) -> int:
        if self.defined >= self.cap:
            raise EnumerationBudgetError(
                f"coset cap {self.cap} exceeded; raise the cap or check the presentation"
            )
        c = len(self.rows)
        self.rows.append([-1] * self.nletters)
        self.parent.append(c)
        self.defined += 1
        return c

    def _letter(self, g: int) -> int:
        return g if g >= 0 else self.inv_letter[-g - 1]

    def _inv(self, letter: int) -> int:
        return self.inv_letter[letter]

    def _set(self, c: int, letter: int, d: int, queue: list) -> None:
        cur = self.rows[c][letter]
        if cur == -1:
            self.rows[c][letter] = d
            back = self.rows[d][self._inv(letter)]
            if back == -1:
                self.rows[d][self._inv(letter)] = c
            elif self.find(back) != self.find(c):
                queue.append((back, c))
        elif self.find(cur) != self.find(d):
            queue.append((cur, d))

    def _merge_all(self, queue: list) -> None:
        while queue:
            a, b = queue.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            a, b = min(a, b), max(a, b)
            self.parent[b] = a
            row_a, row_b = self.rows[a], self.rows[b]
            for letter in range(self.nletters):
                nb = row_b[letter]
                if nb == -1:
                    continue
                na = row_a[letter]
                if na == -1:
                    row_a[letter] = nb
                    back = self.rows[self.find(nb)][self._inv(letter)]
                    if back == -1:
                        self.rows[self.find(nb)][self._inv(letter)] = a
                else:
                    queue.append((na, nb))

    def scan_and_fill(self, start: int, word: Sequence[int]) -> None:
        letters = [self._letter(g) for g in word]
        queue: list = []
        while True:
            start = self.find(start)
            f, i = start, 0
            while i < len(letters):
                nxt = self.rows[f][letters[i]]
                if nxt == -1:
                    break
                f, i = self.find(nxt), i + 1
            if i == len(letters):
                if f != start:
                    queue.append((f, start))
                    self._merge_all(queue)
                return
            b, j = start, len(letters) - 1
            while j >= i:
                nxt = self.rows[b][self._inv(letters[j])]
                if nxt == -1:
                    break
                b, j = self.find(nxt), j - 1
            if j < i:
                # both scans reached position i: the endpoints must coincide
                if self.find(f) != self.find(b):
                    queue.append((f, b))
                    self._merge_all(queue)
                return
            if j == i:
                # one undefined edge left; close it as a deduction
                self._set(f, letters[i], b, queue)
                self._merge_all(queue)
                return
            # gap: define one coset and rescan
            d = self._new_coset()
            self._set(f, letters[i], d, queue)
            self._merge_all(queue)

    def run(self, subgroup_words: Sequence[Sequence[int]]) -> np.ndarray:
        for word in subgroup_words:
            self.scan_and_fill(0, word)
        # involutions act as their own relators
        invol_words = [(g, g) for g in sorted(self.pres.involutions)]
        c = 0
        while c < len(self.rows):
            if self.find(c) != c:
                c += 1
                continue
            for word in invol_words:
                self.scan_and_fill(c, word)
                if self.find(c) != c:
                    break
            if self.find(c) != c:
                c += 1
                continue
            for word in self.pres.relators:
                if not word:
                    continue
                self.scan_and_fill(c, word)
                if self.find(c) != c:
                    break
            if self.find(c) == c:
                for letter in range(self.nletters):
                    if self.rows[c][letter] == -1:
                        d = self._new_coset()
                        queue: list = []
                        self._set(c, letter, d, queue)
                        self._merge_all(queue)
            c += 1
        alive = [c for c in range(len(self.rows)) if self.find(c) == c]
        renum = {c: i for i, c in enumerate(alive)}
        out = np.zeros((len(alive), self.nletters), dtype=np.int64)
        for c in alive:
            for letter in range(self.nletters):
                d = self.rows[c][letter]
                if d == -1:
                    raise RuntimeError("table left incomplete")
                out[renum[c], letter] = renum[self.find(d)]
        return out


def todd_coxeter(
    pres: GroupPresentation,
    subgroup: Sequence[Sequence[int] | Iterable[int]] = (),
    cap: int = DEFAULT_COSET_CAP,
) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by the given words.

    Subgroup entries may be words (tuples of generator indices) or bare
    generator indices.  Coset 0 is the subgroup itself.
    """
    words = []
    for item in subgroup:
        if isinstance(item, int):
            words.append((item,))
        else:
            words.append(tuple(item))
    enum = _Enumerator(pres, cap)
    table = enum.run(words)
    ngens = pres.num_generators
    inv = np.zeros_like(table)
    for g in range(ngens):
        inv[:, g] = table[:, enum.inv_letter[g]]
    return CosetTable(ngens, table[:, :], inv[:, :], tuple(words))


def _orbits(num: int, actions: Sequence[np.ndarray]) -> np.ndarray:
    """Union-find orbit labels (renumbered in first-seen order)."""
    parent = list(range(num))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for act in actions:
        for a in range(num):
            ra, rb = find(a), find(int(act[a]))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    labels = np.full(num, -1, dtype=np.int64)
    nxt = 0
    for a in range(num):
        r = find(a)
        if labels[r] == -1:
            labels[r] = nxt
            nxt += 1
        labels[a] = labels[r]
    return labels


def coxeter_relation(
    pres: GroupPresentation,
    split: bool = False,
    cap: int = DEFAULT_COSET_CAP,
) -> PinCodeRelation:
    """Relation whose flags are the group elements and whose rank-j pins are
    the cosets of the subgroup generated by all generators but the j-th.

    With ``split`` set, stabilizer enumeration later refines each pinned set
    into cosets of the subgroup generated by the ranks outside its type.
    """
    if not pres.all_involutions():
        raise ValueError("all generators must be involutions")
    full = todd_coxeter(pres, (), cap=cap)
    n = full.num_cosets
    ngens = pres.num_generators
    level_labels = []
    for j in range(ngens):
        actions = [full.action(g) for g in range(ngens) if g != j]
        level_labels.append(_orbits(n, actions))
    sizes = [int(labels.max()) + 1 for labels in level_labels]
    flags = [tuple(int(level_labels[j][e]) for j in range(ngens)) for e in range(n)]
    group = GroupData(gen_action=[full.action(g).copy() for g in range(ngens)])
    return PinCodeRelation.build(
        sizes, flags, group=group, split_stabilizers=split
    )


# -- presentation files -------------------------------------------------------


def save_presentation(pres: GroupPresentation, path) -> None:
    with open(path, "w") as fh:
        fh.write("group-presentation 1\n")
        fh.write(f"generators {pres.num_generators}\n")
        if pres.involutions:
            fh.write("involutions " + " ".join(str(g) for g in sorted(pres.involutions)) + "\n")
        for word in pres.relators:
            fh.write("relator " + " ".join(str(g) for g in word) + "\n")


def load_presentation(path) -> GroupPresentation:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if lines[0].split() != ["group-presentation", "1"]:
        raise ValueError("not a group-presentation file")
    ngens = int(lines[1].split()[1])
    involutions: frozenset[int] = frozenset()
    relators = []
    for ln in lines[2:]:
        toks = ln.split()
        if toks[0] == "involutions":
            involutions = frozenset(int(t) for t in toks[1:])
        elif toks[0] == "relator":
            relators.append(tuple(int(t) for t in toks[1:]))
        else:
            raise ValueError(f"unexpected line: {ln}")
    return GroupPresentation(ngens, tuple(relators), involutions)
