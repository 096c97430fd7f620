"""Cohomology of a square differential as a module presentation.

For a differential d with d^2 = 0 on R^N, writes H = ker d / im d as
free part + cyclic torsion, either over the PID GF(2)[h] or over its
localization at (h) (the computational stand-in for GF(2)[[h]]).

The local presentation also supports expressing an arbitrary cocycle in the
chosen generators, which is what the long-exact-sequence and transfer
verifications need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hpoly import HPoly, HRat, PolyError
from .smith import mat_mul, rat_matrix, smith_local, smith_pid

__all__ = ["PidCohomology", "LocalCohomology", "pid_cohomology", "local_cohomology"]


def _matvec(m, v, zero):
    out = [zero] * len(m)
    for i, row in enumerate(m):
        acc = zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out[i] = acc
    return out


@dataclass
class PidCohomology:
    free_rank: int
    torsion_factors: list  # HPoly, non-unit, divisibility chain order
    generators: list  # cocycle vectors (HPoly entries) for free+torsion generators

    @property
    def gf2_dimension(self):
        """Total dimension over GF(2); None when the free rank is positive."""
        if self.free_rank:
            return None
        return sum(f.degree for f in self.torsion_factors)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion_factors


def pid_cohomology(d) -> PidCohomology:
    """H(d) = ker d / im d over GF(2)[h]; d is a square HPoly matrix."""
    n = len(d)
    if n == 0:
        return PidCohomology(0, [], [])
    s1 = smith_pid(d)
    r = s1.rank
    k = n - r
    # saturated kernel basis: columns r.. of V
    kernel_cols = [[s1.V[i][j] for i in range(n)] for j in range(r, n)]
    # relations: image columns in kernel coordinates
    vinv_uinv = mat_mul(s1.Vinv, s1.Uinv, HPoly(0))
    rel = [[HPoly(0)] * r for _ in range(k)]
    for j in range(r):
        f = s1.diagonal[j]
        for i in range(n):
            coord = f * vinv_uinv[i][j]
            if i < r:
                if coord:
                    raise PolyError("image not contained in kernel: d^2 != 0?")
            else:
                rel[i - r][j] = coord
    if k == 0:
        return PidCohomology(0, [], [])
    s2 = smith_pid(rel)
    u2inv = s2.Uinv
    gens = []
    factors = []
    torsion_gens = []
    free_gens = []
    for j in range(k):
        gen = [HPoly(0)] * n
        for t in range(k):
            c = u2inv[t][j]
            if c:
                for i in range(n):
                    gen[i] = gen[i] + c * kernel_cols[t][i]
        if j < s2.rank:
            f = s2.diagonal[j]
            if f.degree >= 1:
                factors.append(f)
                torsion_gens.append(gen)
        else:
            free_gens.append(gen)
    return PidCohomology(len(free_gens), factors, torsion_gens + free_gens)


@dataclass
class LocalCohomology:
    """H(d) over GF(2)[h] localized at (h), with coordinate machinery."""

    n: int
    free_rank: int
    torsion_exponents: list[int]  # ascending, all >= 1
    generators: list  # HRat cocycle vectors, torsion generators first
    _coord_matrix: list = None  # composed map cocycle -> raw coordinates
    _vinv: list = None
    _rank1: int = 0
    _raw_exponents: list = None  # per raw coordinate: exponent (0 = trivial) or None = free
    _u2: list = None

    @property
    def generator_count(self) -> int:
        return self.free_rank + len(self.torsion_exponents)

    def is_zero(self) -> bool:
        return self.generator_count == 0

    @property
    def gf2_dimension(self):
        if self.free_rank:
            return None
        return sum(self.torsion_exponents)

    def raw_coords(self, z):
        """Coordinates of a cocycle z in the presentation's raw generator basis.

        Entry j is an HRat; the class is determined modulo h^{e_j} for torsion
        coordinates (exponent e_j) and exactly for free coordinates.
        """
        zv = [e if isinstance(e, HRat) else HRat.from_poly(e) for e in z]
        full = _matvec(self._vinv, zv, HRat(0))
        for i in range(self._rank1):
            if full[i]:
                raise PolyError("not a cocycle for this presentation")
        tail = full[self._rank1:]
        return _matvec(self._u2, tail, HRat(0))

    def class_is_zero(self, z) -> bool:
        coords = self.raw_coords(z)
        for c, e in zip(coords, self._raw_exponents):
            if e is None:
                if c:
                    return False
            elif c.valuation() < e:
                return False
        return True

    def coord_spec(self):
        """(coordinate rows, exponents) for building GF(2)-linear conditions."""
        return self._coord_matrix, self._raw_exponents


def local_cohomology(d) -> LocalCohomology:
    """H(d) as a finitely generated module over GF(2)[h] localized at (h)."""
    n = len(d)
    if n == 0:
        return LocalCohomology(0, 0, [], [], [], [], 0, [], [])
    s1 = smith_local(d)
    r = s1.rank
    k = n - r
    kernel_cols = [[s1.V[i][j] for i in range(n)] for j in range(r, n)]
    vinv_uinv = mat_mul(s1.Vinv, s1.Uinv, HRat(0))
    rel = [[HRat(0)] * r for _ in range(k)]
    hpows = [HRat(HPoly.h_power(a)) for a in s1.invariant_factors]
    for j in range(r):
        for i in range(n):
            coord = hpows[j] * vinv_uinv[i][j]
            if i < r:
                if coord:
                    raise PolyError("image not contained in kernel: d^2 != 0?")
            else:
                rel[i - r][j] = coord
    if k == 0:
        return LocalCohomology(n, 0, [], [], [], s1.Vinv, r, [], [])
    s2 = smith_local(rel)
    u2 = s2.U
    u2inv = s2.Uinv
    raw_exponents: list = []
    torsion_gens = []
    free_gens = []
    exponents = []
    for j in range(k):
        gen = [HRat(0)] * n
        for t in range(k):
            c = u2inv[t][j]
            if c:
                for i in range(n):
                    gen[i] = gen[i] + c * kernel_cols[t][i]
        if j < s2.rank:
            e = s2.invariant_factors[j]
            raw_exponents.append(e)
            if e >= 1:
                exponents.append(e)
                torsion_gens.append(gen)
        else:
            raw_exponents.append(None)
            free_gens.append(gen)
    vinv_tail = [s1.Vinv[i] for i in range(r, n)]
    return LocalCohomology(
        n=n,
        free_rank=len(free_gens),
        torsion_exponents=exponents,
        generators=torsion_gens + free_gens,
        _coord_matrix=mat_mul(u2, vinv_tail, HRat(0)),
        _vinv=s1.Vinv,
        _rank1=r,
        _raw_exponents=raw_exponents,
        _u2=u2,
    )
