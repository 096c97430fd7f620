import random

import pytest

from equihf.complexes import ChainMap, GradedComplex, Generator, quasi_iso_check
from equihf.equivariant import (
    InvolutiveComplex,
    borel_complex,
    expected_truncation_dims,
    group_cohomology,
    kaledin_check,
    smith_bound_check,
    squaring_defect_is_coboundary,
    squaring_map,
    tate_dimension,
    truncation_dims,
    verify_u_sequence,
)
from equihf.gf2 import BitMatrix
from equihf.hpoly import HPoly
from equihf.randgen import rand_involutive


def trivial_point():
    c = GradedComplex("GF2", [Generator("e", 0)], BitMatrix.zeros(1, 1), grading="Z")
    return InvolutiveComplex(c, BitMatrix.identity(1))


def regular_rep():
    c = GradedComplex(
        "GF2", [Generator("a", 0), Generator("b", 0)], BitMatrix.zeros(2, 2), grading="Z"
    )
    return InvolutiveComplex(c, BitMatrix.permutation([1, 0]))


def acyclic_pair(iota_swaps=False):
    c = GradedComplex(
        "GF2",
        [Generator("x", 0), Generator("y", 1)],
        BitMatrix.from_entries([[0, 0], [1, 0]]),
        grading="Z",
    )
    return InvolutiveComplex(c, BitMatrix.identity(2))


def test_borel_basic_examples():
    w = trivial_point()
    b = borel_complex(w)
    assert all(not e for row in b.diff for e in row)
    r = regular_rep()
    br = borel_complex(r)
    h = HPoly(2)
    assert br.diff == [[h, h], [h, h]]
    a = acyclic_pair()
    ba = borel_complex(a)
    assert ba.diff[1][0] == HPoly(1) and not ba.diff[0][1]


def test_group_cohomology_examples():
    assert group_cohomology(trivial_point()).free_rank == 1
    assert group_cohomology(trivial_point()).torsion_exponents == []
    inv = group_cohomology(regular_rep())
    assert inv.free_rank == 0 and inv.torsion_exponents == [1]
    assert group_cohomology(acyclic_pair()).is_zero()


def test_tate_dimension_examples():
    assert tate_dimension(regular_rep()) == 0
    assert tate_dimension(trivial_point()) == 1
    assert tate_dimension(acyclic_pair()) == 0


def test_tate_matches_free_rank_random():
    rng = random.Random(101)
    for _ in range(40):
        w = rand_involutive(rng, max_dim=6)
        assert tate_dimension(w) == group_cohomology(w).free_rank


def test_levelwise_free_implies_tate_zero():
    rng = random.Random(202)
    for _ in range(30):
        w = rand_involutive(rng, max_dim=8, force_free=True)
        assert tate_dimension(w) == 0


def test_acyclic_implies_zero_module():
    rng = random.Random(303)
    for _ in range(30):
        w = rand_involutive(rng, max_dim=8, force_acyclic=True)
        assert group_cohomology(w).is_zero()


def test_truncation_oracle():
    rng = random.Random(404)
    for _ in range(25):
        w = rand_involutive(rng, max_dim=6)
        inv = group_cohomology(w)
        assert truncation_dims(w, 6) == expected_truncation_dims(inv, 6)


def test_u_sequence_hand_and_random():
    assert verify_u_sequence(trivial_point()).exact
    rep = verify_u_sequence(regular_rep())
    assert rep.exact
    rng = random.Random(505)
    for _ in range(25):
        w = rand_involutive(rng, max_dim=6)
        assert verify_u_sequence(w).exact


def test_smith_bound():
    r = smith_bound_check(trivial_point())
    assert (r.invariant_dim, r.generator_count, r.free_rank) == (1, 1, 1)
    r2 = smith_bound_check(regular_rep())
    assert (r2.invariant_dim, r2.generator_count, r2.free_rank) == (1, 1, 0)
    rng = random.Random(606)
    for _ in range(30):
        assert smith_bound_check(rand_involutive(rng, max_dim=7)).holds


def test_equivariant_quasi_iso_invariance():
    # V1 = V, V2 = V + acyclic equivariant summand; inclusion is an
    # equivariant quasi-iso, so Borel complexes are quasi-isomorphic and the
    # module invariants agree
    rng = random.Random(707)
    for _ in range(15):
        w = rand_involutive(rng, max_dim=5)
        n = w.dim
        gens2 = list(w.complex.generators) + [
            Generator("pad0", 0), Generator("pad1", 1)
        ]
        d2 = BitMatrix.from_pairs(
            n + 2,
            n + 2,
            [
                (i, j)
                for j in range(n)
                for i in range(n)
                if w.complex.diff.get(i, j)
            ]
            + [(n + 1, n)],
            )
        iota2 = BitMatrix.from_pairs(
            n + 2,
            n + 2,
            [
                (i, j)
                for j in range(n)
                for i in range(n)
                if w.iota.get(i, j)
            ]
            + [(n, n), (n + 1, n + 1)],
        )
        w2 = InvolutiveComplex(
            GradedComplex("GF2", gens2, d2, grading="Z2"), iota2
        )
        inv1, inv2 = group_cohomology(w), group_cohomology(w2)
        assert inv1.free_rank == inv2.free_rank
        assert inv1.torsion_exponents == inv2.torsion_exponents
        # the induced map of Borel complexes is a quasi-isomorphism
        b1, b2 = borel_complex(w), borel_complex(w2)
        incl = [[HPoly(0)] * n for _ in range(n + 2)]
        for i in range(n):
            incl[i][i] = HPoly(1)
        ok, _ = quasi_iso_check(ChainMap(b1, b2, incl))
        assert ok


def test_squaring_map_and_relation():
    # V = K: class of the generator is the diagonal generator
    v = GradedComplex("GF2", [Generator("e", 0)], BitMatrix.zeros(1, 1), grading="Z")
    _, _, b, vec = squaring_map(v, 0b1)
    assert vec == [HPoly(1)]
    # well-definedness defect is the stated coboundary, on a complex with d != 0
    v2 = GradedComplex(
        "GF2",
        [Generator("x", 0), Generator("y", 1)],
        BitMatrix.from_entries([[0, 0], [1, 0]]),
        grading="Z",
    )
    # cocycle y (bit 1), perturbation w = x (d(x) = y)
    assert squaring_defect_is_coboundary(v2, 0b10, 0b01)
    rng = random.Random(808)
    for _ in range(20):
        w = rand_involutive(rng, max_dim=5)
        v3 = w.complex
        kers = v3.diff.kernel_basis()
        if not kers:
            continue
        c = kers[rng.randrange(len(kers))]
        wv = rng.getrandbits(v3.dim)
        assert squaring_defect_is_coboundary(v3, c, wv)


def test_kaledin_examples_and_random():
    v = GradedComplex("GF2", [Generator("e", 0)], BitMatrix.zeros(1, 1), grading="Z")
    assert kaledin_check(v).verdict
    v2 = GradedComplex(
        "GF2", [Generator("a", 0), Generator("b", 0)], BitMatrix.zeros(2, 2), grading="Z"
    )
    rep = kaledin_check(v2)
    assert rep.verdict and rep.dim_source == 2 and rep.dim_target == 2
    v3 = GradedComplex(
        "GF2",
        [Generator("x", 0), Generator("y", 1)],
        BitMatrix.from_entries([[0, 0], [1, 0]]),
        grading="Z",
    )
    rep3 = kaledin_check(v3)
    assert rep3.verdict and rep3.dim_source == 0 and rep3.dim_target == 0
    rng = random.Random(909)
    for _ in range(15):
        w = rand_involutive(rng, max_dim=4)
        assert kaledin_check(w.complex).verdict
