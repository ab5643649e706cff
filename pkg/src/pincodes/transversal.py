"""Multi-even and multi-orthogonal spaces, transversal phase-gate conditions,
and the diagonal logical gates they implement.

The checks run on generating sets: a subset of generator rows stands in for
every tuple with repetitions, because repeated factors collapse under the
element-wise product and only tighten the required modulus.  Small codes can
additionally be verified literally over whole spaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .csscode import CssCode, LogicalBasis
from .f2la import BitMatrix, BitVector, wedge_weight

__all__ = [
    "CheckResult",
    "TransversalityReport",
    "WeightedPolynomial",
    "is_multi_even",
    "is_multi_orthogonal",
    "check_exact_transversality",
    "check_quasi_transversality",
    "check_two_logical_condition",
    "transversality_report",
    "extract_logical_polynomial",
    "correction_polynomial",
    "exhaustive_exact_check",
    "exhaustive_orthogonality_check",
]


@dataclass(frozen=True)
class Witness:
    logical_rows: tuple[int, ...]
    stabilizer_rows: tuple[int, ...]
    weight: int
    modulus: int

    def __str__(self) -> str:
        return (
            f"rows L{list(self.logical_rows)} G{list(self.stabilizer_rows)}: "
            f"wedge weight {self.weight} != 0 mod {self.modulus}"
        )


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witnesses: tuple[Witness, ...] = ()

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class TransversalityReport:
    level: int
    exact: CheckResult
    quasi: CheckResult


def _row_basis(m: BitMatrix) -> BitMatrix:
    red, pivots = m.rref()
    return BitMatrix(m.ncols, red._w[: len(pivots)].copy())


def _subset_weights(rows: BitMatrix, size: int):
    """Yield (index_tuple, wedge weight) over all row subsets of a given size."""
    r = rows.nrows
    if size == 1:
        ws = rows.row_weights()
        for i in range(r):
            yield (i,), int(ws[i])
        return
    if size == 2:
        ands = rows._w[:, None, :] & rows._w[None, :, :]
        ws = np.bitwise_count(ands).sum(axis=2)
        for i in range(r):
            for j in range(i + 1, r):
                yield (i, j), int(ws[i, j])
        return
    vecs = [rows.row(i)._w for i in range(r)]
    for combo in itertools.combinations(range(r), size):
        acc = vecs[combo[0]].copy()
        for i in combo[1:]:
            acc &= vecs[i]
        yield combo, int(np.bitwise_count(acc).sum())


def is_multi_even(gens: BitMatrix, level: int, reduce: bool = True) -> CheckResult:
    """Does the span of the rows have every weight divisible by 2**level?

    Checked on generators: each s-subset wedge must vanish mod 2**(level-s+1).
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    rows = _row_basis(gens) if reduce else gens
    witnesses = []
    for s in range(1, level + 1):
        modulus = 1 << (level - s + 1)
        for combo, w in _subset_weights(rows, s):
            if w % modulus:
                witnesses.append(Witness((), combo, w, modulus))
    return CheckResult(not witnesses, tuple(witnesses))


def is_multi_orthogonal(gens: BitMatrix, level: int, reduce: bool = True) -> CheckResult:
    """Does every level-tuple from the span have even overlap?

    Repetition collapses, so checking all generator subsets of size 1..level
    against parity is equivalent.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    rows = _row_basis(gens) if reduce else gens
    witnesses = []
    for s in range(1, level + 1):
        for combo, w in _subset_weights(rows, s):
            if w % 2:
                witnesses.append(Witness((), combo, w, 2))
    return CheckResult(not witnesses, tuple(witnesses))


def _mixed_witnesses(
    lx: BitMatrix, gx: BitMatrix, level: int, modulus_for: callable
) -> list[Witness]:
    out = []
    lrows = [lx.row(i) for i in range(lx.nrows)]
    grows = [gx.row(i) for i in range(gx.nrows)]
    for s in range(1, level):
        for t in range(1, level - s + 1):
            modulus = modulus_for(s, t)
            for lc in itertools.combinations(range(len(lrows)), s):
                base = lrows[lc[0]]._w.copy()
                for i in lc[1:]:
                    base &= lrows[i]._w
                for gc in itertools.combinations(range(len(grows)), t):
                    acc = base.copy()
                    for j in gc:
                        acc &= grows[j]._w
                    w = int(np.bitwise_count(acc).sum())
                    if w % modulus:
                        out.append(Witness(lc, gc, w, modulus))
    return out


def check_exact_transversality(code: CssCode, basis: LogicalBasis, level: int) -> CheckResult:
    """Generator-level sufficient conditions for a bare transversal phase gate.

    Every wedge of s logical rows and t >= 1 stabilizer rows with s+t <= level
    must vanish mod 2**(level-(s+t)+1); s = 0 recovers the multi-even demand
    on the stabilizers alone.
    """
    gx = _row_basis(code.sx)
    witnesses = list(is_multi_even(gx, level, reduce=False).witnesses)
    witnesses += _mixed_witnesses(
        basis.lx, gx, level, lambda s, t: 1 << (level - (s + t) + 1)
    )
    return CheckResult(not witnesses, tuple(witnesses))


def check_quasi_transversality(code: CssCode, basis: LogicalBasis, level: int) -> CheckResult:
    """Transversal phase gate up to a lower-level correction: stabilizers span a
    multi-orthogonal space and every mixed wedge with s,t >= 1, s+t <= level
    is even."""
    gx = _row_basis(code.sx)
    witnesses = list(is_multi_orthogonal(gx, level, reduce=False).witnesses)
    witnesses += _mixed_witnesses(basis.lx, gx, level, lambda s, t: 2)
    return CheckResult(not witnesses, tuple(witnesses))


def check_two_logical_condition(code: CssCode, basis: LogicalBasis) -> CheckResult:
    """Do any two X-logical rows intersect in something commuting with every
    X-stabilizer?  This is the only obstruction left at level 3."""
    gx = _row_basis(code.sx)
    witnesses = []
    k = basis.lx.nrows
    for j in range(k):
        for m in range(j, k):
            pair = basis.lx.row(j) & basis.lx.row(m)
            for g in range(gx.nrows):
                w = wedge_weight([pair, gx.row(g)])
                if w % 2:
                    witnesses.append(Witness((j, m), (g,), w, 2))
    return CheckResult(not witnesses, tuple(witnesses))


def transversality_report(code: CssCode, basis: LogicalBasis, level: int) -> TransversalityReport:
    return TransversalityReport(
        level=level,
        exact=check_exact_transversality(code, basis, level),
        quasi=check_quasi_transversality(code, basis, level),
    )


# -- literal whole-space verification (small codes) ---------------------------


def _span_ints(rows: BitMatrix) -> list[int]:
    """All elements of the row span as packed ints, Gray-code order."""
    basis = _row_basis(rows)
    ints = [basis.row(i).to_int() for i in range(basis.nrows)]
    out = [0]
    cur = 0
    for step in range(1, 1 << len(ints)):
        cur ^= ints[(step & -step).bit_length() - 1]
        out.append(cur)
    return out


def exhaustive_exact_check(code: CssCode, basis: LogicalBasis, level: int) -> bool:
    """Literal conditions over every stabilizer element and logical class."""
    stab = _span_ints(code.sx)
    for y in stab:
        if y.bit_count() % (1 << level):
            return False
    logic = _span_ints(basis.lx)
    modulus = 1 << (level - 1)
    for x in logic[1:]:
        for y in stab[1:]:
            if (x & y).bit_count() % modulus:
                return False
    return True


def exhaustive_orthogonality_check(code: CssCode, basis: LogicalBasis, level: int) -> bool:
    """Literal quasi-transversality over whole spaces: every wedge of space
    elements, s logicals and t stabilizers with s + t <= level (t >= 1 and the
    pure-stabilizer tuples), has even weight."""
    stab = [v for v in _span_ints(code.sx) if v]
    logic = [v for v in _span_ints(basis.lx) if v]
    for t in range(1, level + 1):
        for combo in itertools.combinations(stab, t):
            acc = ~0
            for y in combo:
                acc &= y
            for s in range(0, level - t + 1):
                if s == 0:
                    if acc.bit_count() % 2:
                        return False
                    continue
                for lcombo in itertools.combinations(logic, s):
                    a2 = acc
                    for x in lcombo:
                        a2 &= x
                    if a2.bit_count() % 2:
                        return False
    return True


# -- weighted polynomials ------------------------------------------------------


@dataclass(frozen=True)
class WeightedPolynomial:
    """Diagonal gate written as sum of 2**(s-1)-weighted monomials mod 2**level.

    ``terms`` maps variable-index subsets to coefficients in [0, 2**level);
    a degree-s coefficient is always a multiple of 2**(s-1).
    """

    level: int
    nvars: int
    terms: dict

    def __post_init__(self):
        for subset, coeff in self.terms.items():
            s = len(subset)
            if s < 1:
                raise ValueError("constant terms are not representable")
            if coeff % (1 << (s - 1)):
                raise ValueError(
                    f"coefficient {coeff} of degree-{s} term lacks the 2^{s - 1} factor"
                )

    def evaluate(self, bits: Sequence[int]) -> int:
        total = 0
        for subset, coeff in self.terms.items():
            if all(bits[i] for i in subset):
                total += coeff
        return total % (1 << self.level)

    def gate_terms(self) -> list[tuple[tuple[int, ...], int, str]]:
        """Terms with conventional gate names where they exist (level 3)."""
        names_by_degree = {
            1: {1: "T", 2: "S", 3: "T^3", 4: "Z", 5: "T^5", 6: "S^3", 7: "T^7"},
            2: {2: "CS", 4: "CZ", 6: "CS^3"},
            3: {4: "CCZ"},
        }
        out = []
        for subset in sorted(self.terms, key=lambda s: (len(s), tuple(sorted(s)))):
            coeff = self.terms[subset]
            if coeff == 0:
                continue
            name = ""
            if self.level == 3:
                name = names_by_degree.get(len(subset), {}).get(coeff, "")
            out.append((tuple(sorted(subset)), coeff, name))
        return out

    def __str__(self) -> str:
        parts = []
        for subset, coeff, name in self.gate_terms():
            mono = "".join(f"x{i}" for i in subset)
            label = f" [{name}]" if name else ""
            parts.append(f"{coeff}*{mono}{label}")
        return " + ".join(parts) if parts else "0"


def extract_logical_polynomial(lx: BitMatrix, level: int) -> WeightedPolynomial:
    """The diagonal logical gate induced by transversal phase rotations.

    The coefficient on a monomial over row subset S is (-2)^(|S|-1) times the
    wedge weight of those rows, reduced mod 2**level.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    terms = {}
    k = lx.nrows
    rows = [lx.row(i) for i in range(k)]
    for s in range(1, level + 1):
        sign_pow = (-2) ** (s - 1)
        for combo in itertools.combinations(range(k), s):
            w = wedge_weight([rows[i] for i in combo])
            coeff = (sign_pow * w) % (1 << level)
            if coeff:
                terms[frozenset(combo)] = coeff
    return WeightedPolynomial(level=level, nvars=k, terms=terms)


class QuasiTransversalityViolation(ValueError):
    """The correction would need a non-exact halving; the precondition failed."""


def correction_polynomial(lx: BitMatrix, sx: BitMatrix, level: int) -> WeightedPolynomial:
    """The level-(level-1) polynomial absorbing the stabilizer-dependent phase.

    Variables 0..k-1 are the logical bits, k..k+r-1 the stabilizer bits; every
    raw coefficient must halve exactly, which the quasi-transversality
    conditions guarantee.
    """
    k, r = lx.nrows, sx.nrows
    lrows = [lx.row(i) for i in range(k)]
    grows = [sx.row(i) for i in range(r)]
    terms = {}
    half_mod = 1 << (level - 1)
    for t in range(1, level + 1):
        for gc in itertools.combinations(range(r), t):
            w = wedge_weight([grows[j] for j in gc])
            if w % 2:
                raise QuasiTransversalityViolation(
                    f"stabilizer rows {gc} have odd wedge weight {w}"
                )
            coeff = (((-2) ** (t - 1) * w) // 2) % half_mod
            if coeff:
                terms[frozenset(k + j for j in gc)] = coeff
    for s in range(1, level):
        for t in range(1, level - s + 1):
            for lc in itertools.combinations(range(k), s):
                base = [lrows[i] for i in lc]
                for gc in itertools.combinations(range(r), t):
                    w = wedge_weight(base + [grows[j] for j in gc])
                    if w % 2:
                        raise QuasiTransversalityViolation(
                            f"logical rows {lc} with stabilizer rows {gc} "
                            f"have odd wedge weight {w}"
                        )
                    coeff = (((-2) ** (s + t - 1) * w) // 2) % half_mod
                    if coeff:
                        terms[frozenset(lc) | frozenset(k + j for j in gc)] = coeff
    return WeightedPolynomial(level=level - 1, nvars=k + r, terms=terms)
