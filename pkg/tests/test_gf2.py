import random

import pytest

from equihf.gf2 import BitMatrix, GF2Error, span_of, span_contains


def rand_matrix(rng, nrows, ncols):
    return BitMatrix([rng.getrandbits(ncols) for _ in range(nrows)], ncols)


def test_all_ones_2x2():
    m = BitMatrix.from_entries([[1, 1], [1, 1]])
    assert m.rank() == 1
    assert m.kernel_basis() == [0b11]


def test_identity_kernel():
    m = BitMatrix.identity(5)
    assert m.rank() == 5
    assert m.kernel_basis() == []


def test_rank_nullity_random():
    rng = random.Random(17)
    for _ in range(200):
        n, m = rng.randrange(1, 9), rng.randrange(1, 9)
        a = rand_matrix(rng, n, m)
        ker = a.kernel_basis()
        assert a.rank() + len(ker) == m
        for v in ker:
            assert a.mul_vec(v) == 0


def test_solve_random():
    rng = random.Random(23)
    for _ in range(200):
        n, m = rng.randrange(1, 9), rng.randrange(1, 9)
        a = rand_matrix(rng, n, m)
        x = rng.getrandbits(m)
        b = a.mul_vec(x)
        sol = a.solve(b)
        assert sol is not None
        assert a.mul_vec(sol) == b
    # unsolvable case
    a = BitMatrix.from_entries([[1, 0], [1, 0]])
    assert a.solve(0b01) is None


def test_inverse():
    rng = random.Random(31)
    found = 0
    while found < 30:
        a = rand_matrix(rng, 6, 6)
        try:
            inv = a.inverse()
        except GF2Error:
            continue
        found += 1
        assert a @ inv == BitMatrix.identity(6)
        assert inv @ a == BitMatrix.identity(6)


def test_matmul_transpose():
    rng = random.Random(41)
    for _ in range(50):
        a = rand_matrix(rng, 4, 6)
        b = rand_matrix(rng, 6, 3)
        ab = a @ b
        assert ab.transpose() == b.transpose() @ a.transpose()


def test_permutation_matrix():
    p = BitMatrix.permutation([1, 0, 2])
    assert p.mul_vec(0b001) == 0b010
    assert p.mul_vec(0b010) == 0b001
    assert p.mul_vec(0b100) == 0b100
    assert p @ p == BitMatrix.identity(3)


def test_span_helpers():
    ech, piv = span_of([0b110, 0b011, 0b101])
    assert len(ech) == 2
    assert span_contains(ech, piv, 0b101)
    assert not span_contains(ech, piv, 0b001)
