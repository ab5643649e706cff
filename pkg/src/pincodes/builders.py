"""Constructions of chain complexes and pin code relations.

Boundary maps are stored row-major: ``boundaries[j]`` has one row per level
j+1 basis element listing its boundary over the level-j basis.  Flags of a
complex are the maximal incidence paths through consecutive levels; two extra
free pins patch up the end parities when needed, so the resulting relation
always validates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .f2la import BitMatrix, BitVector, read_alist_tokens
from .relation import PinCodeRelation

__all__ = [
    "ChainComplex",
    "complete_relation",
    "from_chain_complex",
    "tensor_product",
    "torus_tiling",
    "triangular_color_relation",
    "reed_muller_relation",
    "rm_generator_matrix",
    "capped_ladder_complex",
    "ladder_variants",
    "steane_complex",
    "steane_relation",
    "c422_relation",
    "save_chain_complex",
    "load_chain_complex",
]


@dataclass(frozen=True)
class ChainComplex:
    """Graded GF(2) spaces with boundary maps whose composites vanish.

    ``free[j]`` marks basis elements of level j whose pins will be free in the
    derived relation (dense rows or columns one wants to keep out of the
    stabilizers).
    """

    dims: tuple[int, ...]
    boundaries: tuple[BitMatrix, ...]
    free: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        if len(self.boundaries) != len(self.dims) - 1:
            raise ValueError("need exactly one boundary map per adjacent level pair")
        for j, b in enumerate(self.boundaries):
            if b.shape != (self.dims[j + 1], self.dims[j]):
                raise ValueError(
                    f"boundary {j} has shape {b.shape}, want ({self.dims[j + 1]}, {self.dims[j]})"
                )
        if self.free and len(self.free) != len(self.dims):
            raise ValueError("free marks must cover every level when given")
        if not self.free:
            object.__setattr__(self, "free", tuple(frozenset() for _ in self.dims))
        for j in range(len(self.boundaries) - 1):
            if not self.boundaries[j + 1].matmul(self.boundaries[j]).is_zero():
                raise ValueError(f"boundary composite {j + 1} after {j} is nonzero")

    @property
    def length(self) -> int:
        return len(self.dims)


def complete_relation(level_sizes: Sequence[int]) -> PinCodeRelation:
    """The relation containing every pin tuple; sizes must be even."""
    sizes = [int(s) for s in level_sizes]
    for s in sizes:
        if s < 2 or s % 2:
            raise ValueError(f"level size {s} must be even and at least 2")
    flags = itertools.product(*(range(s) for s in sizes))
    return PinCodeRelation.build(sizes, flags)


def from_chain_complex(cc: ChainComplex) -> PinCodeRelation:
    """Relation whose flags are the maximal incidence paths of the complex.

    Interior parities are forced even by the vanishing composites; the two end
    levels each get one extra free pin when some neighbor has odd degree (the
    top fix is applied after the bottom one, so the two interact correctly on
    two-level complexes).
    """
    nlevels = cc.length
    sizes = list(cc.dims)
    free = {j: set(cc.free[j]) for j in range(nlevels)}
    # up[j][a] = level-(j+1) elements incident to level-j element a
    up: list[dict[int, list[int]]] = []
    for j, b in enumerate(cc.boundaries):
        dense = b.to_dense()
        up.append({a: [int(c) for c in np.nonzero(dense[:, a])[0]] for a in range(cc.dims[j])})

    if nlevels >= 2:
        down_deg = [0] * cc.dims[1]
        for a, cs in up[0].items():
            for c in cs:
                down_deg[c] += 1
        odd_low = [c for c in range(cc.dims[1]) if down_deg[c] % 2]
        if odd_low:
            b0 = sizes[0]
            sizes[0] += 1
            free[0].add(b0)
            up[0][b0] = odd_low
        top = nlevels - 2
        odd_high = [a for a in up[top] if len(up[top][a]) % 2]
        if odd_high:
            bd = sizes[nlevels - 1]
            sizes[nlevels - 1] += 1
            free[nlevels - 1].add(bd)
            for a in odd_high:
                up[top][a] = up[top][a] + [bd]

    paths: list[tuple[int, ...]] = [(c,) for c in range(sizes[0])]
    for j in range(nlevels - 1):
        nxt = []
        for p in paths:
            for c in up[j].get(p[-1], ()):
                nxt.append(p + (c,))
        paths = nxt
    return PinCodeRelation.build(sizes, paths, free=free)


def tensor_product(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Product with a length-2 complex, extending the length of ``a`` by one."""
    if b.length != 2:
        raise ValueError("second factor must be a length-2 complex")
    k = a.length
    nb0, nb1 = b.dims
    bb = b.boundaries[0].to_dense()  # rows: B1, cols: B0
    adim = list(a.dims)
    ab = [m.to_dense() for m in a.boundaries]

    def dim_a(j: int) -> int:
        return adim[j] if 0 <= j < k else 0

    dims = [nb1 * dim_a(j - 1) + nb0 * dim_a(j) for j in range(k + 1)]

    def block1(j: int, v1: int, ai: int) -> int:
        return v1 * dim_a(j - 1) + ai

    def block2(j: int, v0: int, ai: int) -> int:
        return nb1 * dim_a(j - 1) + v0 * dim_a(j) + ai

    boundaries = []
    for j in range(1, k + 1):
        rows = []
        for v1 in range(nb1):
            for ai in range(dim_a(j - 1)):
                cols = []
                if j - 1 >= 1:
                    for a2 in np.nonzero(ab[j - 2][ai])[0]:
                        cols.append(block1(j - 1, v1, int(a2)))
                for v0 in np.nonzero(bb[v1])[0]:
                    cols.append(block2(j - 1, int(v0), ai))
                rows.append(BitVector.from_indices(dims[j - 1], cols))
        for v0 in range(nb0):
            for ai in range(dim_a(j)):
                cols = []
                if j <= k - 1:
                    for a2 in np.nonzero(ab[j - 1][ai])[0]:
                        cols.append(block2(j - 1, v0, int(a2)))
                rows.append(BitVector.from_indices(dims[j - 1], cols))
        if rows:
            boundaries.append(BitMatrix.from_rows(rows, dims[j - 1]))
        else:
            boundaries.append(BitMatrix.empty(dims[j - 1]))
    return ChainComplex(tuple(dims), tuple(boundaries))


def torus_tiling(kind: str, l1: int, l2: int) -> ChainComplex:
    """Vertex/edge/face complex of a periodic tiling on an l1 x l2 torus."""
    if l1 < 2 or l2 < 2:
        raise ValueError("torus dimensions must be at least 2")
    if kind == "square_octagon":
        return _square_complex(l1, l2)
    if kind == "hexagonal":
        return _honeycomb_complex(l1, l2)
    raise ValueError(f"unknown tiling kind: {kind!r}")


def _square_complex(l1: int, l2: int) -> ChainComplex:
    n = l1 * l2

    def vid(i, j):
        return (i % l1) * l2 + (j % l2)

    # edges: horizontal h(i,j) then vertical v(i,j)
    def hid(i, j):
        return (i % l1) * l2 + (j % l2)

    def tid(i, j):
        return n + (i % l1) * l2 + (j % l2)

    edge_rows = []
    for i in range(l1):
        for j in range(l2):
            edge_rows.append(BitVector.from_indices(n, [vid(i, j), vid(i, j + 1)]))
    for i in range(l1):
        for j in range(l2):
            edge_rows.append(BitVector.from_indices(n, [vid(i, j), vid(i + 1, j)]))
    face_rows = []
    for i in range(l1):
        for j in range(l2):
            face_rows.append(
                BitVector.from_indices(
                    2 * n, [hid(i, j), hid(i + 1, j), tid(i, j), tid(i, j + 1)]
                )
            )
    return ChainComplex(
        (n, 2 * n, n),
        (BitMatrix.from_rows(edge_rows, n), BitMatrix.from_rows(face_rows, 2 * n)),
    )


def _honeycomb_complex(l1: int, l2: int) -> ChainComplex:
    """Honeycomb on a torus, built dually: hexagons sit on a triangular lattice."""
    n = l1 * l2  # hexagons / lattice vertices

    def v(i, j):
        return (i % l1) * l2 + (j % l2)

    # lattice edges in three orientations, indexed by base vertex
    def e(k, i, j):
        return k * n + v(i, j)

    # honeycomb vertices = lattice triangles: up(i,j) and down(i,j)
    def t_up(i, j):
        return v(i, j)

    def t_dn(i, j):
        return n + v(i, j)

    ntri = 2 * n
    edge_rows = []  # boundary of each lattice edge: its two incident triangles
    for k in range(3):
        for i in range(l1):
            for j in range(l2):
                if k == 0:  # {v, v+(1,0)}: up(i,j) and dn(i,j-1)
                    tri = [t_up(i, j), t_dn(i, j - 1)]
                elif k == 1:  # {v, v+(0,1)}: dn(i,j) and up(i-1,j)
                    tri = [t_dn(i, j), t_up(i - 1, j)]
                else:  # {v, v+(1,1)}: up(i,j) and dn(i,j)
                    tri = [t_up(i, j), t_dn(i, j)]
                edge_rows.append(BitVector.from_indices(ntri, tri))
    hex_rows = []
    for i in range(l1):
        for j in range(l2):
            edges = [
                e(0, i, j), e(1, i, j), e(2, i, j),
                e(0, i - 1, j), e(1, i, j - 1), e(2, i - 1, j - 1),
            ]
            hex_rows.append(BitVector.from_indices(3 * n, edges))
    return ChainComplex(
        (ntri, 3 * n, n),
        (BitMatrix.from_rows(edge_rows, ntri), BitMatrix.from_rows(hex_rows, 3 * n)),
    )


def triangular_color_relation(l1: int, l2: int) -> PinCodeRelation:
    """Three-colored triangular lattice on a torus: levels are the color
    classes of the vertices, flags are the triangles.

    l1 must be a multiple of 3; the lattice wraps with a skew in the second
    direction so the coloring stays consistent for any l2 >= 2.
    """
    if l1 % 3 or l1 < 3:
        raise ValueError("l1 must be a positive multiple of 3")
    if l2 < 2:
        raise ValueError("l2 must be at least 2")
    shift = (-l2) % 3

    def canon(i: int, j: int) -> tuple[int, int]:
        wraps, jm = divmod(j, l2)
        return ((i + shift * wraps) % l1, jm)

    def color(i: int, j: int) -> int:
        return (i - j) % 3

    index_in_level: dict[tuple[int, int], int] = {}
    counts = [0, 0, 0]
    names: dict[int, list[str]] = {0: [], 1: [], 2: []}
    for i in range(l1):
        for j in range(l2):
            c = color(i, j)
            index_in_level[(i, j)] = counts[c]
            names[c].append(f"v{i}.{j}")
            counts[c] += 1
    flags = []
    for i in range(l1):
        for j in range(l2):
            for tri in (
                [(i, j), (i + 1, j), (i, j + 1)],
                [(i + 1, j), (i, j + 1), (i + 1, j + 1)],
            ):
                verts = [canon(*p) for p in tri]
                tup = [0, 0, 0]
                for p in verts:
                    tup[color(*p)] = index_in_level[p]
                flags.append(tuple(tup))
    return PinCodeRelation.build(counts, flags, names=names)


def reed_muller_relation(m: int) -> PinCodeRelation:
    """Complete relation on m two-pin levels; flags are the points of F_2^m."""
    if m < 1:
        raise ValueError("need at least one level")
    return complete_relation([2] * m)


def rm_generator_matrix(r: int, m: int) -> BitMatrix:
    """Evaluation vectors of monomials of degree at most r in m variables.

    Columns follow the flag order of ``reed_muller_relation(m)``; rows are
    sorted by degree then lexicographically.
    """
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")
    points = list(itertools.product(range(2), repeat=m))
    rows = []
    for deg in range(r + 1):
        for subset in itertools.combinations(range(m), deg):
            rows.append([int(all(x[j] for j in subset)) for x in points])
    return BitMatrix.from_rows(rows, 2 ** m)


def _cycle_incidence(m: int) -> BitMatrix:
    """Edge-by-vertex incidence of the m-cycle; rows are edges."""
    rows = [BitVector.from_indices(m, [e, (e + 1) % m]) for e in range(m)]
    return BitMatrix.from_rows(rows, m)


def _all_ones(nrows: int, ncols: int) -> BitMatrix:
    return BitMatrix.from_rows([BitVector.ones(ncols) for _ in range(nrows)], ncols)


def capped_ladder_complex(num_levels: int, bottom: int = 2, top: int = 2) -> ChainComplex:
    """A ladder of two-element levels, optionally capped by cycle graphs.

    ``bottom``/``top`` of 2 leave a plain ladder end; 3 or 4 replace the two
    end levels by the vertices and edges of a cycle of that size.  The plain
    ladder reproduces the relation behind Reed-Muller codes; the capped
    variants resize it while keeping every parity even.
    """
    for cap in (bottom, top):
        if cap not in (2, 3, 4):
            raise ValueError("caps must be 2, 3 or 4")
    lead = 1 if bottom == 2 else 2
    tail = 1 if top == 2 else 2
    if num_levels < lead + tail + 1:
        raise ValueError(f"need at least {lead + tail + 1} levels for these caps")
    dims = ([bottom] * lead) + [2] * (num_levels - lead - tail) + ([top] * tail)
    boundaries = []
    for j in range(num_levels - 1):
        if bottom != 2 and j == 0:
            boundaries.append(_cycle_incidence(bottom))
        elif top != 2 and j == num_levels - 2:
            boundaries.append(_cycle_incidence(top))
        else:
            boundaries.append(_all_ones(dims[j + 1], dims[j]))
    return ChainComplex(tuple(dims), tuple(boundaries))


def ladder_variants(num_levels: int) -> list[ChainComplex]:
    """The five end-cap variants, from the plain ladder to double square caps."""
    caps = [(2, 2), (3, 2), (4, 2), (3, 3), (4, 4)]
    return [capped_ladder_complex(num_levels, b, t) for b, t in caps]


def steane_complex() -> ChainComplex:
    """Three two-element levels, fully connected, one free element per level."""
    b = _all_ones(2, 2)
    return ChainComplex((2, 2, 2), (b, b), (frozenset([1]),) * 3)


def steane_relation() -> PinCodeRelation:
    return from_chain_complex(steane_complex())


def c422_relation() -> PinCodeRelation:
    """Four flags hanging off a single non-free pin; the [[4,2,2]] relation."""
    flags = itertools.product(range(1), range(2), range(2))
    return PinCodeRelation.build([1, 2, 2], flags, free={1: [0, 1], 2: [0, 1]})


# -- files -------------------------------------------------------------------


def save_chain_complex(cc: ChainComplex, path) -> None:
    with open(path, "w") as fh:
        fh.write("chain-complex 1\n")
        fh.write("dims " + " ".join(str(d) for d in cc.dims) + "\n")
        for j, marks in enumerate(cc.free):
            if marks:
                fh.write(f"free {j}: " + " ".join(str(i) for i in sorted(marks)) + "\n")
        for j, b in enumerate(cc.boundaries):
            fh.write(f"boundary {j} dense\n")
            for i in range(b.nrows):
                fh.write(b.row(i).to01() + "\n")


def load_chain_complex(path) -> ChainComplex:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip() and not ln.startswith("#")]
    if lines[0].split() != ["chain-complex", "1"]:
        raise ValueError("not a chain-complex file")
    dims = tuple(int(t) for t in lines[1].split()[1:])
    free = [frozenset() for _ in dims]
    pos = 2
    while pos < len(lines) and lines[pos].startswith("free"):
        head, _, body = lines[pos].partition(":")
        rank = int(head.split()[1])
        free[rank] = frozenset(int(t) for t in body.split())
        pos += 1
    boundaries = []
    for j in range(len(dims) - 1):
        header = lines[pos].split()
        if header[:2] != ["boundary", str(j)]:
            raise ValueError(f"expected boundary {j}, got {lines[pos]!r}")
        fmt = header[2] if len(header) > 2 else "dense"
        pos += 1
        if fmt == "dense":
            rows = []
            for _ in range(dims[j + 1]):
                rows.append(BitVector.from01(lines[pos]))
                pos += 1
            b = BitMatrix.from_rows(rows, dims[j]) if rows else BitMatrix.empty(dims[j])
        elif fmt == "alist":
            tokens: list[int] = []
            while pos < len(lines) and not lines[pos].startswith("boundary"):
                tokens.extend(int(t) for t in lines[pos].split())
                pos += 1
            b = read_alist_tokens(tokens)
        else:
            raise ValueError(f"unknown boundary format {fmt!r}")
        boundaries.append(b)
    return ChainComplex(dims, tuple(boundaries), tuple(free))
