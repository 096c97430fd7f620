"""Matrices over GF(2)[h] and GF(2)(h): elimination, Smith forms, certificates.

Two Smith-type reductions are provided:

* ``smith_pid``   -- over the principal ideal domain GF(2)[h], giving the
  classical divisibility chain of invariant factors;
* ``smith_local`` -- over GF(2)[h] localized at (h), where every polynomial
  with constant term 1 is a unit, so the diagonal becomes powers of h.

Both record the row/column operations performed; ``replay_ops`` re-applies a
log to the input and must reproduce the diagonal form bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .hpoly import (
    HPoly,
    HRat,
    PolyError,
    bits_degree,
    bits_divmod,
    bits_gcd,
    bits_mul,
)

__all__ = [
    "SmithResult",
    "smith_pid",
    "smith_local",
    "replay_ops",
    "rat_matrix",
    "rat_rank",
    "rat_kernel_basis",
    "rat_rref",
    "rat_solve",
    "rank_over_fraction_field",
    "minors_gcd",
]


# ---------------------------------------------------------------------------
# generic dense helpers (entries are HPoly or HRat)


def mat_copy(m):
    return [list(r) for r in m]


def mat_shape(m):
    return len(m), len(m[0]) if m else 0


def rat_matrix(m):
    """Coerce a matrix of HPoly/HRat to HRat entries."""
    out = []
    for row in m:
        out.append([e if isinstance(e, HRat) else HRat.from_poly(e) for e in row])
    return out


def mat_mul(a, b, zero):
    n, k = mat_shape(a)
    k2, m = mat_shape(b)
    if k != k2:
        raise ValueError("shape mismatch")
    out = [[zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            e = arow[t]
            if not e:
                continue
            brow = b[t]
            for j in range(m):
                if brow[j]:
                    orow[j] = orow[j] + e * brow[j]
    return out


def identity_matrix(n, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# elimination over the field GF(2)(h)


def rat_rref(m):
    """In-place-free RREF over GF(2)(h). Returns (rref_rows, pivot_cols)."""
    work = rat_matrix(m)
    nrows, ncols = mat_shape(work)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        sel = None
        for i in range(r, nrows):
            if work[i][c]:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        inv = work[r][c].inverse()
        work[r] = [e * inv for e in work[r]]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a + f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rat_rank(m) -> int:
    return len(rat_rref(m)[1])


def rat_kernel_basis(m):
    """Basis of the right kernel over GF(2)(h); vectors as HRat lists."""
    if not m:
        return []
    rref, pivots = rat_rref(m)
    ncols = len(m[0])
    pivset = set(pivots)
    basis = []
    one = HRat(1)
    zero = HRat(0)
    for j in range(ncols):
        if j in pivset:
            continue
        v = [zero] * ncols
        v[j] = one
        for row, p in zip(rref, pivots):
            if row[j]:
                v[p] = row[j]
        basis.append(v)
    return basis


def rat_solve(m, b):
    """One solution of m x = b over GF(2)(h), or None."""
    bcol = [e if isinstance(e, HRat) else HRat.from_poly(e) for e in b]
    aug = [row + [bv] for row, bv in zip(rat_matrix(m), bcol)]
    rref, pivots = rat_rref(aug)
    ncols = len(m[0]) if m else 0
    zero = HRat(0)
    x = [zero] * ncols
    for row, p in zip(rref, pivots):
        if p == ncols:
            return None
        x[p] = row[ncols]
    return x


# ---------------------------------------------------------------------------
# exact rank via evaluation in GF(2^m)
#
# All nonzero minors of a polynomial matrix have degree at most the sum over
# rows of the maximal entry degree.  Evaluating h at a root of an irreducible
# polynomial of strictly larger degree therefore preserves the rank exactly:
# a nonzero minor cannot be divisible by the modulus.


def _poly_sq_mod(a: int, f: int) -> int:
    sq = 0
    k = 0
    aa = a
    while aa:
        if aa & 1:
            sq |= 1 << (2 * k)
        aa >>= 1
        k += 1
    return bits_divmod(sq, f)[1]


def _is_irreducible(f: int) -> bool:
    m = bits_degree(f)
    if m <= 0:
        return False
    x = 2
    t = x
    for _ in range(m):
        t = _poly_sq_mod(t, f)
    if t != x:
        return False
    for p in _prime_factors(m):
        t = x
        for _ in range(m // p):
            t = _poly_sq_mod(t, f)
        if bits_gcd(t ^ x, f) != 1:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _find_irreducible(m: int) -> int:
    base = 1 << m
    tail = 1
    while True:
        f = base | tail | 1
        if _is_irreducible(f):
            return f
        tail += 2

        if tail >= base:
            raise RuntimeError("no irreducible polynomial found")


class _GF2m:
    def __init__(self, m: int):
        self.m = m
        self.modulus = _find_irreducible(m)

    def mul(self, a: int, b: int) -> int:
        return bits_divmod(bits_mul(a, b), self.modulus)[1]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverting 0 in GF(2^m)")
        # extended Euclid in GF(2)[x]
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1:
            q, r = bits_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 ^ bits_mul(q, s1)
        return bits_divmod(s0, self.modulus)[1]


def rank_over_fraction_field(m) -> int:
    """Exact rank of an HPoly/HRat matrix over GF(2)(h) by field-extension evaluation."""
    if not m or not m[0]:
        return 0
    rows = []
    degsum = 0
    for row in m:
        cleared = []
        den = 1
        for e in row:
            if isinstance(e, HRat):
                den = bits_mul(bits_divmod(den, bits_gcd(den, e.den))[0], e.den)
        for e in row:
            if isinstance(e, HRat):
                cleared.append(bits_mul(e.num, bits_divmod(den, e.den)[0]))
            else:
                cleared.append(e.bits)
        rows.append(cleared)
        degsum += max((bits_degree(e) for e in cleared if e), default=0)
    field = _GF2m(max(degsum + 1, 2))
    f = field.modulus
    work = [[bits_divmod(e, f)[1] for e in row] for row in rows]
    nrows, ncols = len(work), len(work[0])
    rank = 0
    for c in range(ncols):
        sel = None
        for i in range(rank, nrows):
            if work[i][c]:
                sel = i
                break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        pinv = field.inv(work[rank][c])
        for i in range(rank + 1, nrows):
            if work[i][c]:
                factor = field.mul(work[i][c], pinv)
                work[i] = [
                    a ^ field.mul(factor, b) for a, b in zip(work[i], work[rank])
                ]
        rank += 1
        if rank == nrows:
            break
    return rank


# ---------------------------------------------------------------------------
# Smith normal forms


@dataclass
class SmithResult:
    """Diagonalization certificate: U @ input @ V == diag(entries)."""

    kind: str  # "pid" or "local"
    shape: tuple[int, int]
    rank: int
    invariant_factors: list  # HPoly list (pid) or h-exponent ints (local)
    diagonal: list  # HPoly (pid) or HRat (local) diagonal entries
    U: list
    V: list
    Uinv: list = field(default=None, repr=False)
    Vinv: list = field(default=None, repr=False)
    ops: list = field(default_factory=list, repr=False)


def _apply_op(m, op):
    code = op[0]
    if code == "rswap":
        _, i, j = op
        m[i], m[j] = m[j], m[i]
    elif code == "radd":
        _, i, j, c = op
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    elif code == "rscale":
        _, i, c = op
        m[i] = [c * a for a in m[i]]
    elif code == "cswap":
        _, i, j = op
        for row in m:
            row[i], row[j] = row[j], row[i]
    elif code == "cadd":
        _, i, j, c = op
        for row in m:
            row[i] = row[i] + c * row[j]
    elif code == "cscale":
        _, i, c = op
        for row in m:
            row[i] = c * row[i]
    else:
        raise ValueError(f"unknown op {code}")


def replay_ops(m, ops):
    """Apply an operation log to a copy of m and return the result."""
    work = mat_copy(m)
    for op in ops:
        _apply_op(work, op)
    return work


class _Tracker:
    """Working matrix plus transform bookkeeping for Smith reductions."""

    def __init__(self, m, one, zero):
        self.a = mat_copy(m)
        self.nrows, self.ncols = mat_shape(self.a)
        self.U = identity_matrix(self.nrows, one, zero)
        self.Uinv = identity_matrix(self.nrows, one, zero)
        self.V = identity_matrix(self.ncols, one, zero)
        self.Vinv = identity_matrix(self.ncols, one, zero)
        self.ops = []

    def rswap(self, i, j):
        if i == j:
            return
        op = ("rswap", i, j)
        self.ops.append(op)
        _apply_op(self.a, op)
        _apply_op(self.U, op)
        for row in self.Uinv:  # right-multiply by the swap
            row[i], row[j] = row[j], row[i]

    def radd(self, i, j, c):
        if not c:
            return
        op = ("radd", i, j, c)
        self.ops.append(op)
        _apply_op(self.a, op)
        _apply_op(self.U, op)
        for row in self.Uinv:  # column j += c * column i  (inverse op, char 2)
            row[j] = row[j] + c * row[i]

    def rscale(self, i, c, cinv):
        op = ("rscale", i, c)
        self.ops.append(op)
        _apply_op(self.a, op)
        _apply_op(self.U, op)
        for row in self.Uinv:
            row[i] = cinv * row[i]

    def cswap(self, i, j):
        if i == j:
            return
        op = ("cswap", i, j)
        self.ops.append(op)
        _apply_op(self.a, op)
        _apply_op(self.V, op)
        self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def cadd(self, i, j, c):
        if not c:
            return
        op = ("cadd", i, j, c)
        self.ops.append(op)
        _apply_op(self.a, op)
        _apply_op(self.V, op)
        self.Vinv[j] = [a + c * b for a, b in zip(self.Vinv[j], self.Vinv[i])]


def smith_pid(m) -> SmithResult:
    """Smith normal form over GF(2)[h] with divisibility chain."""
    if m and any(not isinstance(e, HPoly) for row in m for e in row):
        raise PolyError("smith_pid expects HPoly entries")
    one, zero = HPoly(1), HPoly(0)
    tr = _Tracker(m, one, zero)
    a = tr.a
    nrows, ncols = tr.nrows, tr.ncols
    t = 0
    while True:
        pos = None
        best = math.inf
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and a[i][j].degree < best:
                    best = a[i][j].degree
                    pos = (i, j)
        if pos is None:
            break
        tr.rswap(t, pos[0])
        tr.cswap(t, pos[1])
        while True:
            # clear column t, swapping in remainders until everything divides
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q, r = divmod(a[i][t], a[t][t])
                    tr.radd(i, t, q)
                    if r:
                        tr.rswap(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q, r = divmod(a[t][j], a[t][t])
                    tr.cadd(j, t, q)
                    if r:
                        tr.cswap(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility fix-up for the remaining block
            fixed = True
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] and divmod(a[i][j], a[t][t])[1]:
                        tr.radd(t, i, one)
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        t += 1
    diag = [a[i][i] for i in range(min(nrows, ncols))]
    factors = [d for d in diag if d]
    return SmithResult(
        kind="pid",
        shape=(nrows, ncols),
        rank=len(factors),
        invariant_factors=factors,
        diagonal=diag,
        U=tr.U,
        V=tr.V,
        Uinv=tr.Uinv,
        Vinv=tr.Vinv,
        ops=tr.ops,
    )


def smith_local(m) -> SmithResult:
    """Smith form over GF(2)[h] localized at (h).

    Entries may be HPoly or h-adically integral HRat.  Diagonal entries are
    exact powers of h; pivots are chosen at minimal h-valuation, ties broken
    by lowest (row, column).
    """
    work = rat_matrix(m)
    for row in work:
        for e in row:
            if not e.is_local_integer():
                raise PolyError(f"entry {e} is not integral at (h)")
    one, zero = HRat(1), HRat(0)
    tr = _Tracker(work, one, zero)
    a = tr.a
    nrows, ncols = tr.nrows, tr.ncols
    t = 0
    while True:
        pos = None
        best = math.inf
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j].valuation()
                if v < best:
                    best = v
                    pos = (i, j)
        if pos is None or best is math.inf:
            break
        tr.rswap(t, pos[0])
        tr.cswap(t, pos[1])
        # normalize pivot to an exact power of h
        piv = a[t][t]
        val = piv.valuation()
        hpow = HRat(HPoly.h_power(val))
        unit_inv = hpow / piv
        if unit_inv != one:
            tr.rscale(t, unit_inv, piv / hpow)
        for i in range(t + 1, nrows):
            if a[i][t]:
                tr.radd(i, t, a[i][t] / a[t][t])
        for j in range(t + 1, ncols):
            if a[t][j]:
                tr.cadd(j, t, a[t][j] / a[t][t])
        t += 1
    diag = [a[i][i] for i in range(min(nrows, ncols))]
    exps = []
    for d in diag:
        if d:
            exps.append(int(d.valuation()))
    return SmithResult(
        kind="local",
        shape=(nrows, ncols),
        rank=len(exps),
        invariant_factors=exps,
        diagonal=diag,
        U=tr.U,
        V=tr.V,
        Uinv=tr.Uinv,
        Vinv=tr.Vinv,
        ops=tr.ops,
    )


def minors_gcd(m, size: int) -> HPoly:
    """gcd of all size x size minors of an HPoly matrix (brute force, small dims)."""
    from itertools import combinations

    nrows, ncols = mat_shape(m)
    acc = 0
    for rows in combinations(range(nrows), size):
        for cols in combinations(range(ncols), size):
            d = _poly_det([[m[i][j] for j in cols] for i in rows])
            acc = bits_gcd(acc, d.bits)
            if acc == 1:
                return HPoly(1)
    return HPoly(acc)


def _poly_det(m) -> HPoly:
    n = len(m)
    if n == 0:
        return HPoly(1)
    if n == 1:
        return m[0][0]
    acc = HPoly(0)
    for j in range(n):
        if m[0][j]:
            minor = [[row[k] for k in range(n) if k != j] for row in m[1:]]
            acc = acc + m[0][j] * _poly_det(minor)
    return acc
