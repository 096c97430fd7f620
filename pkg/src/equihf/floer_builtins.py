"""Built-in Floer data: the two Morse-pair models, the annulus model with
nontrivial two-periodic points, and the Clifford-torus intersection datum.

Numeric action values are choices; anything respecting the ordering works.
The sigma-splits of the product components were solved against the product
relations with d_eq^{1,+} = id and d_eq^{1,-} = rho.
"""

from __future__ import annotations

from fractions import Fraction

from .floer import MINUS, PLUS, FloerDatum, FloerError, FloerPoint
from .gf2 import BitMatrix

__all__ = ["builtin_example", "BUILTIN_NAMES", "zero_pants_diagonal"]

BUILTIN_NAMES = ("morse_pair", "twisted_pair", "annulus", "clifford")


def builtin_example(name: str, i: int | None = None, n: int | None = None) -> FloerDatum:
    if name == "morse_pair":
        return _pair_example(i or 1, n or 1, twisted=False)
    if name == "twisted_pair":
        return _pair_example(i if i is not None else 2, n or 2, twisted=True)
    if name == "annulus":
        return _annulus()
    if name == "clifford":
        return _clifford()
    raise FloerError(f"unknown example {name!r}")


def _pair_example(i: int, n: int, twisted: bool) -> FloerDatum:
    if twisted:
        if not 2 <= i <= 2 * n - 1:
            raise FloerError("twisted pair needs 2 <= i <= 2n-1")
        deg_x, deg_y = i - 2, i - 1
        deg2_x, deg2_y = i - 3, i - 2
    else:
        if not 1 <= i <= 2 * n:
            raise FloerError("morse pair needs 1 <= i <= 2n")
        deg_x, deg_y = i - 1, i
        deg2_x, deg2_y = i - 1, i
    a_x, a_y = Fraction(0), Fraction(1, 10)
    kappa_x, kappa_y = n - i + 1, n - i
    fix_phi = [
        FloerPoint("x", deg_x % 2, a_x, kappa_x, (-1) ** deg_x),
        FloerPoint("y", deg_y % 2, a_y, kappa_y, (-1) ** deg_y),
    ]
    fix_phi2 = [
        FloerPoint("x", deg2_x % 2, 2 * a_x),
        FloerPoint("y", deg2_y % 2, 2 * a_y),
    ]
    d = BitMatrix.from_pairs(2, 2, [(1, 0)])  # x -> y
    ident = BitMatrix.identity(2)
    i_max = i + 1
    pants = {
        # p^{i-1,+}: (x,x) -> x and (x,y) -> y  (so b_xy = 1, b_yx = 0)
        (i - 1, PLUS): BitMatrix.from_pairs(2, 4, [(0, 0), (1, 1)]),
        # p^{i,-}: (y,y) -> y
        (i, MINUS): BitMatrix.from_pairs(2, 4, [(1, 3)]),
    }
    return FloerDatum(
        n=n,
        epsilon=Fraction(1, 20),
        mode="exact",
        i_max=i_max,
        fix_phi=fix_phi,
        fix_phi2=fix_phi2,
        rho=ident,
        d_phi=d,
        d_phi2=d,
        d_eq={(1, PLUS): ident, (1, MINUS): ident},
        pants=pants,
    )


def _annulus() -> FloerDatum:
    # phi-points x, y; square has x, z0, z1, y with rho swapping the z's
    fix_phi = [
        FloerPoint("x", 0, Fraction(0), kappa=0, detsign=1),
        FloerPoint("y", 1, Fraction(1, 2), kappa=0, detsign=-1),
    ]
    fix_phi2 = [
        FloerPoint("x", 1, Fraction(0)),
        FloerPoint("z0", 0, Fraction(1, 8)),
        FloerPoint("z1", 0, Fraction(1, 8)),
        FloerPoint("y", 1, Fraction(1)),
    ]
    rho = BitMatrix.permutation([0, 2, 1, 3])
    d_phi = BitMatrix.from_pairs(2, 2, [(1, 0)])
    d_phi2 = BitMatrix.from_pairs(4, 4, [(1, 0), (2, 0), (3, 1), (3, 2)])
    ident = BitMatrix.identity(4)
    # pair columns over (x, y): (x,x)=0, (x,y)=1, (y,x)=2, (y,y)=3
    pants = {
        # p^{0,+}: (x,x) -> z0 (b_xx0 = 1, b_xx1 = 0), (x,y) -> y
        (0, PLUS): BitMatrix.from_pairs(4, 4, [(1, 0), (3, 1)]),
        # p^{1,-}: the local diagonal terms h x and h y
        (1, MINUS): BitMatrix.from_pairs(4, 4, [(0, 0), (3, 3)]),
    }
    return FloerDatum(
        n=1,
        epsilon=Fraction(1, 16),
        mode="exact",
        i_max=2,
        fix_phi=fix_phi,
        fix_phi2=fix_phi2,
        rho=rho,
        d_phi=d_phi,
        d_phi2=d_phi2,
        d_eq={(1, PLUS): ident, (1, MINUS): rho},
        pants=pants,
    )


def _clifford() -> FloerDatum:
    # Clifford-torus intersection points; normalized actions all equal
    zero = Fraction(0)
    fix_phi2 = [
        FloerPoint("x--", 0, zero),
        FloerPoint("x-+", 1, zero),
        FloerPoint("x+-", 1, zero),
        FloerPoint("x++", 0, zero),
    ]
    rho = BitMatrix.permutation([3, 2, 1, 0])
    d_phi2 = BitMatrix.from_pairs(
        4, 4, [(1, 0), (2, 0), (1, 3), (2, 3), (0, 1), (3, 1), (0, 2), (3, 2)]
    )
    ident = BitMatrix.identity(4)
    return FloerDatum(
        n=2,
        epsilon=zero,
        mode="monotone",
        i_max=2,
        fix_phi=[],
        fix_phi2=fix_phi2,
        rho=rho,
        d_phi=BitMatrix.zeros(0, 0),
        d_phi2=d_phi2,
        d_eq={(1, PLUS): ident, (1, MINUS): rho},
        pants={},
    )


def zero_pants_diagonal(d: FloerDatum, name: str) -> FloerDatum:
    """Copy of the datum with the diagonal product coefficient at one point
    cleared (in whichever sign block carries it)."""
    idx = d.phi_index[name]
    p = d.fix_phi[idx]
    if p.kappa is None:
        raise FloerError(f"{name} has no Krein index")
    lvl = d.n - p.kappa
    col = d.pair_col(idx, idx)
    row = d.phi2_of_phi(idx)
    new_pants = {}
    cleared = False
    for key, mat in d.pants.items():
        mat2 = mat.copy()
        if key[0] == lvl and mat2.get(row, col):
            mat2.rows[row] ^= 1 << col
            cleared = True
        new_pants[key] = mat2
    if not cleared:
        raise FloerError(f"no diagonal coefficient found for {name}")
    return FloerDatum(
        n=d.n,
        epsilon=d.epsilon,
        mode=d.mode,
        i_max=d.i_max,
        fix_phi=list(d.fix_phi),
        fix_phi2=list(d.fix_phi2),
        rho=d.rho,
        d_phi=d.d_phi,
        d_phi2=d.d_phi2,
        d_eq=dict(d.d_eq),
        pants=new_pants,
    )
