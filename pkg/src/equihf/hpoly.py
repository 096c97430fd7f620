"""Exact arithmetic in GF(2)[h] and GF(2)(h).

A polynomial over GF(2) is stored as a Python int whose bit k is the
coefficient of h^k, so addition is XOR and multiplication is carryless.
Every nonzero polynomial is monic, which makes canonical forms unique.
"""

from __future__ import annotations

import math

__all__ = [
    "HPoly",
    "HRat",
    "H",
    "PolyError",
    "poly_parse",
    "poly_str",
    "bits_add",
    "bits_mul",
    "bits_divmod",
    "bits_gcd",
    "bits_degree",
    "bits_valuation",
    "bits_inverse_mod_hN",
]


class PolyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# raw bitmask arithmetic


def bits_add(a: int, b: int) -> int:
    return a ^ b


def bits_mul(a: int, b: int) -> int:
    # carryless multiply; iterate over the sparser operand
    if a.bit_count() > b.bit_count():
        a, b = b, a
    acc = 0
    while a:
        low = a & -a
        acc ^= b << (low.bit_length() - 1)
        a ^= low
    return acc


def bits_degree(a: int) -> int:
    """Degree, with deg(0) = -1 by convention."""
    return a.bit_length() - 1


def bits_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise PolyError("polynomial division by zero")
    db = b.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= db and a:
        shift = (a.bit_length() - 1) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def bits_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, bits_divmod(a, b)[1]
    return a


def bits_valuation(a: int):
    """h-adic valuation; math.inf for the zero polynomial."""
    if a == 0:
        return math.inf
    return (a & -a).bit_length() - 1


def bits_inverse_mod_hN(a: int, n: int) -> int:
    """Inverse of a unit (constant term 1) modulo h^n, by Hensel doubling."""
    if not a & 1:
        raise PolyError("not a unit in GF(2)[[h]]: constant term is 0")
    mask = (1 << n) - 1
    inv = 1
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        m = (1 << prec) - 1
        # inv <- inv*(2 - a*inv) = inv*a*inv in char 2? use Newton: inv' = inv + inv*(1 + a*inv)
        err = (bits_mul(a, inv) & m) ^ 1
        inv = (inv ^ bits_mul(inv, err)) & m
    return inv & mask


def poly_str(a: int) -> str:
    if a == 0:
        return "0"
    terms = []
    k = 0
    while a:
        if a & 1:
            if k == 0:
                terms.append("1")
            elif k == 1:
                terms.append("h")
            else:
                terms.append(f"h^{k}")
        a >>= 1
        k += 1
    return "+".join(terms)


def poly_parse(s: str) -> int:
    s = s.strip().replace(" ", "")
    if not s:
        raise PolyError("empty polynomial string")
    if s == "0":
        return 0
    acc = 0
    for term in s.split("+"):
        if term == "1":
            acc ^= 1
        elif term == "h":
            acc ^= 2
        elif term.startswith("h^"):
            try:
                k = int(term[2:])
            except ValueError as exc:
                raise PolyError(f"bad term {term!r}") from exc
            if k < 0:
                raise PolyError(f"negative exponent in {term!r}")
            acc ^= 1 << k
        else:
            raise PolyError(f"bad term {term!r}")
    return acc


# ---------------------------------------------------------------------------
# wrapper classes


class HPoly:
    """Element of GF(2)[h]."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise PolyError("negative bitmask")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, *a):
        raise AttributeError("HPoly is immutable")

    @classmethod
    def parse(cls, s: str) -> "HPoly":
        return cls(poly_parse(s))

    @classmethod
    def h_power(cls, k: int) -> "HPoly":
        return cls(1 << k)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, HPoly) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("HPoly", self.bits))

    def __add__(self, other: "HPoly") -> "HPoly":
        return HPoly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "HPoly") -> "HPoly":
        return HPoly(bits_mul(self.bits, other.bits))

    def __divmod__(self, other: "HPoly") -> tuple["HPoly", "HPoly"]:
        q, r = bits_divmod(self.bits, other.bits)
        return HPoly(q), HPoly(r)

    def __floordiv__(self, other: "HPoly") -> "HPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "HPoly") -> "HPoly":
        return divmod(self, other)[1]

    def gcd(self, other: "HPoly") -> "HPoly":
        return HPoly(bits_gcd(self.bits, other.bits))

    @property
    def degree(self) -> int:
        return bits_degree(self.bits)

    def valuation(self):
        return bits_valuation(self.bits)

    def divides(self, other: "HPoly") -> bool:
        if not self:
            return not other
        return bits_divmod(other.bits, self.bits)[1] == 0

    def unit_part(self) -> tuple[int, "HPoly"]:
        """Write self = h^v * u with u(0) = 1; returns (v, u). Requires self != 0."""
        if not self:
            raise PolyError("zero polynomial has no unit part")
        v = (self.bits & -self.bits).bit_length() - 1
        return v, HPoly(self.bits >> v)

    def series_coeff(self, k: int) -> int:
        return (self.bits >> k) & 1

    def __str__(self) -> str:
        return poly_str(self.bits)

    def __repr__(self) -> str:
        return f"HPoly({poly_str(self.bits)!r})"


H = HPoly(2)
ONE = HPoly(1)
ZERO = HPoly(0)


class HRat:
    """Element of GF(2)(h), kept in lowest terms with nonzero denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, _reduce: bool = True):
        if isinstance(num, HPoly):
            num = num.bits
        if isinstance(den, HPoly):
            den = den.bits
        if den == 0:
            raise PolyError("zero denominator")
        if num == 0:
            den = 1
        elif _reduce:
            g = bits_gcd(num, den)
            if g != 1:
                num = bits_divmod(num, g)[0]
                den = bits_divmod(den, g)[0]
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("HRat is immutable")

    @classmethod
    def parse(cls, s: str) -> "HRat":
        s = s.strip()
        if "/" in s:
            ns, ds = s.split("/", 1)
            return cls(poly_parse(ns), poly_parse(ds))
        return cls(poly_parse(s))

    @classmethod
    def from_poly(cls, p: HPoly) -> "HRat":
        return cls(p.bits, 1, _reduce=False)

    def __bool__(self) -> bool:
        return self.num != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, HRat):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("HRat", self.num, self.den))

    def __add__(self, other: "HRat") -> "HRat":
        if self.num == 0:
            return other
        if other.num == 0:
            return self
        if self.den == other.den:
            return HRat(self.num ^ other.num, self.den)
        return HRat(
            bits_mul(self.num, other.den) ^ bits_mul(other.num, self.den),
            bits_mul(self.den, other.den),
        )

    __sub__ = __add__

    def __mul__(self, other: "HRat") -> "HRat":
        if self.num == 0 or other.num == 0:
            return HRat(0)
        return HRat(bits_mul(self.num, other.num), bits_mul(self.den, other.den))

    def __truediv__(self, other: "HRat") -> "HRat":
        if other.num == 0:
            raise PolyError("division by zero in GF(2)(h)")
        if self.num == 0:
            return HRat(0)
        return HRat(bits_mul(self.num, other.den), bits_mul(self.den, other.num))

    def inverse(self) -> "HRat":
        if self.num == 0:
            raise PolyError("inverting zero")
        return HRat(self.den, self.num, _reduce=False)

    def valuation(self):
        """h-adic valuation num - den; inf for zero."""
        if self.num == 0:
            return math.inf
        return bits_valuation(self.num) - bits_valuation(self.den)

    def is_polynomial(self) -> bool:
        return self.den == 1

    def to_poly(self) -> HPoly:
        if self.den != 1:
            raise PolyError(f"{self} is not a polynomial")
        return HPoly(self.num)

    def is_local_integer(self) -> bool:
        """Lies in GF(2)[h] localized at (h): denominator has constant term 1."""
        return bool(self.den & 1)

    def series_prefix(self, n: int) -> int:
        """First n coefficients of the power-series expansion (needs unit denominator)."""
        if not self.den & 1:
            raise PolyError("not h-adically integral")
        if self.num == 0 or n <= 0:
            return 0
        mask = (1 << n) - 1
        return bits_mul(self.num & ~0, bits_inverse_mod_hN(self.den, n)) & mask

    def __str__(self) -> str:
        if self.den == 1:
            return poly_str(self.num)
        return f"{poly_str(self.num)}/{poly_str(self.den)}"

    def __repr__(self) -> str:
        return f"HRat({str(self)!r})"


RAT_ONE = HRat(1)
RAT_ZERO = HRat(0)
