import math
import random

import pytest

from equihf.hpoly import HPoly, HRat, PolyError, bits_inverse_mod_hN, bits_mul


def P(s):
    return HPoly.parse(s)


def test_char2_square():
    # (1+h)^2 = 1+h^2: cross terms cancel in characteristic 2
    assert P("1+h") * P("1+h") == P("1+h^2")


def test_gcd_example():
    # h^2+1 = (h+1)^2 over GF(2)
    assert P("1+h^2").gcd(P("1+h")) == P("1+h")
    assert P("1+h") * P("1+h") == P("1+h^2")


def test_valuation():
    assert P("h^3+h^5").valuation() == 3
    assert P("0").valuation() == math.inf
    assert P("1").valuation() == 0


def test_divmod():
    a, b = P("1+h^2+h^5"), P("1+h")
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree
    with pytest.raises(PolyError):
        divmod(a, P("0"))


def test_parse_roundtrip():
    rng = random.Random(7)
    for _ in range(200):
        p = HPoly(rng.getrandbits(12))
        assert HPoly.parse(str(p)) == p


def test_ring_axioms_random():
    rng = random.Random(11)
    for _ in range(100):
        a, b, c = (HPoly(rng.getrandbits(10)) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        if b:
            q, r = divmod(a, b)
            assert q * b + r == a


def test_unit_part():
    v, u = P("h^2+h^4").unit_part()
    assert v == 2 and u == P("1+h^2")
    with pytest.raises(PolyError):
        P("0").unit_part()


def test_series_inverse():
    rng = random.Random(3)
    for _ in range(50):
        u = (rng.getrandbits(8) << 1) | 1
        n = rng.randrange(1, 20)
        inv = bits_inverse_mod_hN(u, n)
        assert bits_mul(u, inv) & ((1 << n) - 1) == 1


def test_hrat_canonical():
    x = HRat(P("h^2+h"), P("h"))
    assert x == HRat(P("1+h"))
    assert str(x) == "1+h"
    assert HRat.parse("1+h^2/1+h") == HRat(P("1+h"))  # (h+1)^2/(h+1)


def test_hrat_field_axioms():
    rng = random.Random(5)
    for _ in range(100):
        a = HRat(rng.getrandbits(6), rng.getrandbits(6) | 1)
        b = HRat(rng.getrandbits(6), rng.getrandbits(6) | 1)
        c = HRat(rng.getrandbits(6), rng.getrandbits(6) | 1)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == HRat(1)
        assert a + a == HRat(0)


def test_hrat_valuation_and_series():
    x = HRat(P("h^2"), P("1+h"))
    assert x.valuation() == 2
    # h^2/(1+h) = h^2 + h^3 + h^4 + ... as a series
    assert x.series_prefix(6) == 0b111100
    assert HRat(0).valuation() == math.inf
