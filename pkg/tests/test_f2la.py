import itertools

import numpy as np
import pytest

from pincodes.f2la import (
    BitMatrix,
    BitVector,
    IncrementalBasis,
    nullspace_basis,
    rank,
    read_alist,
    read_dense,
    rref,
    standard_form,
    wedge_weight,
    write_alist,
    write_dense,
)

from conftest import rank_oracle


def test_wedge_weight_examples():
    assert wedge_weight([BitVector.from01("1111")]) == 4
    assert wedge_weight([BitVector.from01("1100"), BitVector.from01("0110")]) == 1
    assert wedge_weight([BitVector.from01("1010"), BitVector.from01("0101")]) == 0


def test_wedge_weight_length_mismatch():
    with pytest.raises(ValueError):
        wedge_weight([BitVector.from01("10"), BitVector.from01("100")])


def test_bitvector_ops_long():
    rng = np.random.default_rng(3)
    for n in (1, 63, 64, 65, 130):
        a_bits = rng.integers(0, 2, n)
        b_bits = rng.integers(0, 2, n)
        a, b = BitVector.from_bits(a_bits), BitVector.from_bits(b_bits)
        assert (a ^ b).to_array().tolist() == ((a_bits ^ b_bits).tolist())
        assert (a & b).to_array().tolist() == ((a_bits & b_bits).tolist())
        assert a.weight == int(a_bits.sum())
        assert a.support() == [i for i in range(n) if a_bits[i]]


def test_rank_examples():
    assert rank(BitMatrix.identity(3)) == 3
    assert rank(BitMatrix.from_rows(["110", "011", "101"])) == 2


def test_rank_one_pinned_sets_of_complete_222():
    # six one-pinned indicator rows over the 8 flags of the full product;
    # the expected rank is the first-order binomial sum 1 + 3 = 4
    from pincodes import complete_relation

    rel = complete_relation([2, 2, 2])
    fam = rel.enumerate_pinned_sets(1)
    m = BitMatrix.from_rows([s.vector for s in fam.sets], 8)
    assert m.shape == (6, 8)
    assert rank(m) == 4
    assert rank_oracle(m.to_dense()) == 4


def test_rank_matches_oracle_random():
    rng = np.random.default_rng(11)
    for _ in range(25):
        r, c = int(rng.integers(1, 12)), int(rng.integers(1, 90))
        dense = rng.integers(0, 2, (r, c)).astype(np.uint8)
        assert BitMatrix.from_dense(dense).rank() == rank_oracle(dense)


def test_rref_examples():
    z = BitMatrix.zeros(2, 3)
    rz, pz = rref(z)
    assert rz.is_zero() and pz == ()
    ri, pi = rref(BitMatrix.identity(4))
    assert ri == BitMatrix.identity(4) and pi == (0, 1, 2, 3)
    m = BitMatrix.from_rows(["11", "11"])
    rm, pm = rref(m)
    assert rm.to_dense().tolist() == [[1, 1], [0, 0]]
    assert pm == (0,)


def test_rref_pivots_strictly_increasing():
    rng = np.random.default_rng(5)
    for _ in range(10):
        dense = rng.integers(0, 2, (8, 20)).astype(np.uint8)
        _, pivots = rref(BitMatrix.from_dense(dense))
        assert list(pivots) == sorted(pivots)
        assert len(set(pivots)) == len(pivots)


def test_nullspace_examples():
    assert nullspace_basis(BitMatrix.identity(5)).nrows == 0
    par = nullspace_basis(BitMatrix.from_rows(["1111"]))
    assert par.nrows == 3
    assert all(par.row(i).weight % 2 == 0 for i in range(3))


def test_nullspace_property_random():
    rng = np.random.default_rng(7)
    for _ in range(15):
        dense = rng.integers(0, 2, (10, 20)).astype(np.uint8)
        m = BitMatrix.from_dense(dense)
        ns = nullspace_basis(m)
        assert ns.nrows == 20 - m.rank()
        assert not m.mul_t(ns).any()
        assert ns.rank() == ns.nrows


def test_rank_nullity_and_rref_rank():
    rng = np.random.default_rng(9)
    for _ in range(10):
        dense = rng.integers(0, 2, (9, 15)).astype(np.uint8)
        m = BitMatrix.from_dense(dense)
        red, piv = rref(m)
        assert m.rank() == len(piv) == red.rank()
        assert m.rank() + nullspace_basis(m).nrows == m.ncols


def test_binary_addition_identity():
    # |xor of vectors| equals the alternating sum of wedge weights
    rng = np.random.default_rng(13)
    for _ in range(60):
        r = int(rng.integers(1, 5))
        n = int(rng.integers(1, 33))
        vecs = [BitVector.from_bits(rng.integers(0, 2, n)) for _ in range(r)]
        acc = BitVector.zeros(n)
        for v in vecs:
            acc = acc ^ v
        total = 0
        for s in range(1, r + 1):
            for combo in itertools.combinations(vecs, s):
                total += (-2) ** (s - 1) * wedge_weight(list(combo))
        assert acc.weight == total


def test_standard_form_identity():
    sf = standard_form(BitMatrix.identity(4))
    assert sf.k == 4
    assert sf.g0.nrows == 0
    assert sf.g1.ncols == 0


def test_standard_form_dependent_rows():
    m = BitMatrix.from_rows(["1100", "0011", "1111"])
    sf = standard_form(m)
    assert sf.k == 2
    assert sf.g0.nrows == 1
    assert sf.g0.row(0).is_zero()


def test_standard_form_rm14():
    from pincodes import rm_generator_matrix

    g = rm_generator_matrix(1, 4)
    sf = standard_form(g)
    assert sf.k == 5 == g.rank()


def test_standard_form_reassembly():
    # un-permuting and stacking recovers a row-equivalent matrix
    rng = np.random.default_rng(21)
    for _ in range(10):
        dense = rng.integers(0, 2, (6, 12)).astype(np.uint8)
        m = BitMatrix.from_dense(dense)
        sf = standard_form(m)
        n = m.ncols
        rebuilt = np.zeros((sf.k + sf.g0.nrows, n), dtype=np.uint8)
        for i in range(sf.k):
            rebuilt[i, sf.column_permutation[i]] = 1
            rebuilt[i, list(sf.kept_columns)] = sf.g1.to_dense()[i]
        for i in range(sf.g0.nrows):
            rebuilt[sf.k + i, list(sf.kept_columns)] = sf.g0.to_dense()[i]
        stacked = np.vstack([dense, rebuilt])
        assert rank_oracle(stacked) == rank_oracle(dense)


def test_standard_form_chosen_columns():
    m = BitMatrix.from_rows(["1100", "0110", "0011"])
    sf = standard_form(m, identity_columns=[1, 3])
    assert sf.k == 2
    assert sf.column_permutation[:2] == (1, 3)


def test_matmul_and_mul_t():
    rng = np.random.default_rng(2)
    a = rng.integers(0, 2, (5, 9)).astype(np.uint8)
    b = rng.integers(0, 2, (9, 4)).astype(np.uint8)
    prod = BitMatrix.from_dense(a).matmul(BitMatrix.from_dense(b))
    assert prod.to_dense().tolist() == ((a @ b) % 2).tolist()


def test_incremental_basis():
    acc = IncrementalBasis(4)
    assert acc.add(BitVector.from01("1100"))
    assert acc.add(BitVector.from01("0110"))
    assert not acc.add(BitVector.from01("1010"))
    assert acc.contains(BitVector.from01("1010"))
    assert acc.rank == 2


def test_dense_roundtrip(tmp_path):
    rng = np.random.default_rng(31)
    m = BitMatrix.from_dense(rng.integers(0, 2, (7, 19)).astype(np.uint8))
    path = tmp_path / "m.txt"
    write_dense(m, path)
    assert read_dense(path) == m


def test_alist_roundtrip(tmp_path):
    rng = np.random.default_rng(37)
    m = BitMatrix.from_dense(rng.integers(0, 2, (6, 14)).astype(np.uint8))
    path = tmp_path / "m.alist"
    write_alist(m, path)
    assert read_alist(path) == m


def test_alist_unpadded_variant(tmp_path):
    m = BitMatrix.from_rows(["110", "011"])
    path = tmp_path / "m.alist"
    # hand-rolled without pad zeros
    path.write_text("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n")
    assert read_alist(path) == m
