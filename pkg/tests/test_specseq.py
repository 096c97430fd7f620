import random
from fractions import Fraction

from equihf.complexes import GradedComplex, Generator
from equihf.gf2 import BitMatrix
from equihf.hpoly import HPoly
from equihf.specseq import Filtration, h_adic_pages, spectral_sequence


def test_two_step_collapse():
    # d(x) = y with weight(x) < weight(y): full differential appears on E_1
    gens = [Generator("x", 0), Generator("y", 1)]
    c = GradedComplex("GF2", gens, BitMatrix.from_entries([[0, 0], [1, 0]]), grading="Z")
    pages = spectral_sequence(c, Filtration((0, 1)))
    assert pages.pages[0][0]["total"] == 1 and pages.pages[0][1]["total"] == 1
    assert pages.pages[1][0]["total"] == 1  # E_1 still both alive
    assert pages.pages[2][0]["total"] == 0 and pages.pages[2][1]["total"] == 0
    assert pages.e_inf_total == 0 and pages.converges
    # and the d_1 matrix is nonzero
    assert any(any(col) for col in pages.differentials[1].get(0, []))


def test_zero_differential_all_pages_equal():
    gens = [Generator(f"g{i}", i % 2) for i in range(4)]
    c = GradedComplex("GF2", gens, BitMatrix.zeros(4, 4), grading="Z2")
    pages = spectral_sequence(c, Filtration((0, 1, 2, 0)))
    for page in pages.pages:
        assert sum(page[p]["total"] for p in page) == 4
    for dmats in pages.differentials:
        for cols in dmats.values():
            assert all(not any(col) for col in cols)
    assert pages.converges


def rand_filtered_complex(rng, n):
    weights = [rng.randrange(0, 4) for _ in range(n)]
    degrees = [rng.randrange(0, 2) for _ in range(n)]
    # differential: arrows to strictly higher weight, degree +1, built as a
    # pairing to guarantee d^2 = 0
    order = sorted(range(n), key=lambda i: weights[i])
    pairs = []
    used = set()
    for _ in range(n // 2):
        j, i = rng.sample(range(n), 2)
        if j in used or i in used:
            continue
        if weights[i] > weights[j] and (degrees[i] - degrees[j]) % 2 == 1:
            pairs.append((i, j))
            used.add(i)
            used.add(j)
    d = BitMatrix.from_pairs(n, n, pairs)
    gens = [Generator(f"g{i}", degrees[i]) for i in range(n)]
    return GradedComplex("GF2", gens, d, grading="Z2"), Filtration(tuple(weights))


def test_random_convergence_and_consistency():
    rng = random.Random(4242)
    for _ in range(40):
        c, filt = rand_filtered_complex(rng, rng.randrange(2, 11))
        pages = spectral_sequence(c, filt)
        assert pages.converges
        assert all(ok for (_, _, ok) in pages.consistency)


def test_h_adic_regular_representation():
    # Borel complex of the regular representation: d = h * [[1,1],[1,1]]
    h = HPoly.parse("h")
    zero = HPoly(0)
    gens = [Generator("a", 0), Generator("b", 0)]
    c = GradedComplex("GF2[h]", gens, [[h, h], [h, h]], grading=None)
    pages, pmax = h_adic_pages(c, p_max=3, r_max=3)
    # E_1 = V at each level; E_2 kills everything except one class at level 0
    for p in range(pmax + 1):
        assert pages.pages[1][p]["total"] == 2
    assert pages.pages[2][0]["total"] == 1
    for p in range(1, pmax + 1):
        assert pages.pages[2][p]["total"] == 0
