import random

from equihf.hpoly import HPoly, HRat
from equihf.smith import (
    mat_mul,
    minors_gcd,
    rank_over_fraction_field,
    rat_kernel_basis,
    rat_matrix,
    rat_rank,
    rat_solve,
    replay_ops,
    smith_local,
    smith_pid,
)


def P(s):
    return HPoly.parse(s)


def pmat(rows):
    return [[P(e) for e in row] for row in rows]


def rand_pmat(rng, nrows, ncols, maxdeg=4):
    return [
        [HPoly(rng.getrandbits(maxdeg + 1)) for _ in range(ncols)]
        for _ in range(nrows)
    ]


def check_certificate(m, res):
    zero = HPoly(0) if res.kind == "pid" else HRat(0)
    lhs = mat_mul(mat_mul(res.U, rat_matrix(m) if res.kind == "local" else m, zero), res.V, zero)
    n = min(res.shape)
    for i in range(res.shape[0]):
        for j in range(res.shape[1]):
            expect = res.diagonal[i] if (i == j and i < n) else zero
            assert lhs[i][j] == expect, (i, j)
    # replaying the certificate log reproduces the diagonal form bit-exactly
    replayed = replay_ops(rat_matrix(m) if res.kind == "local" else m, res.ops)
    assert replayed == lhs
    # transform inverses
    one = HPoly(1) if res.kind == "pid" else HRat(1)
    iu = mat_mul(res.U, res.Uinv, zero)
    iv = mat_mul(res.V, res.Vinv, zero)
    for k, mat in ((res.shape[0], iu), (res.shape[1], iv)):
        for i in range(k):
            for j in range(k):
                assert mat[i][j] == (one if i == j else zero)


def test_smith_pid_hand_examples():
    res = smith_pid(pmat([["h", "1"], ["1", "h"]]))
    assert [str(f) for f in res.invariant_factors] == ["1", "1+h^2"]
    res2 = smith_pid(pmat([["h", "h"], ["h", "h"]]))
    assert [str(f) for f in res2.invariant_factors] == ["h"]
    assert res2.rank == 1
    res3 = smith_pid(pmat([["0", "0"], ["0", "0"]]))
    assert res3.rank == 0 and res3.invariant_factors == []


def test_smith_pid_random():
    rng = random.Random(20240)
    for _ in range(60):
        m = rand_pmat(rng, rng.randrange(1, 5), rng.randrange(1, 5))
        res = smith_pid(m)
        check_certificate(m, res)
        # divisibility chain
        for a, b in zip(res.invariant_factors, res.invariant_factors[1:]):
            assert a.divides(b)
        assert res.rank == rank_over_fraction_field(m)


def test_smith_pid_minors_invariant():
    # product of the first k invariant factors = gcd of all k x k minors
    rng = random.Random(99)
    for _ in range(25):
        m = rand_pmat(rng, rng.randrange(1, 5), rng.randrange(1, 5), maxdeg=3)
        res = smith_pid(m)
        prod = HPoly(1)
        for k, f in enumerate(res.invariant_factors, start=1):
            prod = prod * f
            assert prod == minors_gcd(m, k)


def test_smith_local_hand_examples():
    res = smith_local(pmat([["h", "h"], ["h", "h"]]))
    assert res.invariant_factors == [1]
    assert res.rank == 1
    res2 = smith_local(pmat([["1+h"]]))
    assert res2.invariant_factors == [0]
    res3 = smith_local(pmat([["h", "1"], ["1", "h"]]))
    assert res3.invariant_factors == [0, 0]


def test_smith_local_random_agreement():
    rng = random.Random(20241)
    for _ in range(60):
        m = rand_pmat(rng, rng.randrange(1, 6), rng.randrange(1, 6))
        res = smith_local(m)
        check_certificate(m, res)
        assert sorted(res.invariant_factors) == res.invariant_factors
        # count of exponents = rank over GF(2)(h)
        assert len(res.invariant_factors) == rank_over_fraction_field(m)
        # count of zero exponents = rank of M mod h
        from equihf.gf2 import BitMatrix

        mod_h = BitMatrix.from_entries(
            [[e.bits & 1 for e in row] for row in m]
        )
        assert sum(1 for e in res.invariant_factors if e == 0) == mod_h.rank()


def test_rat_linear_algebra():
    m = pmat([["h", "1"], ["1", "h"]])
    assert rat_rank(m) == 2
    assert rat_kernel_basis(m) == []
    # [[h, h], [h, h]] has a one-dimensional kernel
    m2 = pmat([["h", "h"], ["h", "h"]])
    ker = rat_kernel_basis(m2)
    assert len(ker) == 1
    # solve
    sol = rat_solve(m, [P("1"), P("0")])
    assert sol is not None
    lhs = mat_mul(rat_matrix(m), [[s] for s in sol], HRat(0))
    assert lhs[0][0] == HRat(1) and lhs[1][0] == HRat(0)
    assert rat_solve(m2, [P("1"), P("0")]) is None


def test_rank_extension_matches_rref():
    rng = random.Random(77)
    for _ in range(40):
        m = rand_pmat(rng, rng.randrange(1, 7), rng.randrange(1, 7), maxdeg=3)
        assert rank_over_fraction_field(m) == rat_rank(m)
