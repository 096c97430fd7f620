"""Subspace calculus over GF(2) and GF(2)(h).

The same elimination-based operations (echelon bases, kernels, preimages,
quotient representatives) are needed over both coefficient fields; this
module provides them behind a common interface.  GF(2) vectors are bitmask
ints, GF(2)(h) vectors are tuples of HRat.  Echelon bases always use
leftmost pivots, so results are deterministic.
"""

from __future__ import annotations

from .gf2 import BitMatrix
from .hpoly import HRat

__all__ = ["Gf2Ops", "RatOps", "ops_for_ring"]


class Gf2Ops:
    """Vectors are ints (bit j = coordinate j); matrices are BitMatrix."""

    field = "GF2"

    @staticmethod
    def dim_of(matrix: BitMatrix) -> int:
        return matrix.ncols

    @staticmethod
    def zero(n: int):
        return 0

    @staticmethod
    def unit(n: int, j: int):
        return 1 << j

    @staticmethod
    def is_zero(v) -> bool:
        return v == 0

    @staticmethod
    def add(u, v):
        return u ^ v

    @staticmethod
    def support(v):
        out = []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    @staticmethod
    def matvec(matrix: BitMatrix, v):
        return matrix.mul_vec(v)

    @staticmethod
    def columns(matrix: BitMatrix):
        return [matrix.transpose().rows[j] for j in range(matrix.ncols)] if matrix.ncols else []

    @staticmethod
    def kernel(matrix: BitMatrix):
        return matrix.kernel_basis()

    @staticmethod
    def solve(matrix: BitMatrix, v):
        return matrix.solve(v)

    @staticmethod
    def echelon(vectors):
        ech: list[int] = []
        piv: list[int] = []
        for v in vectors:
            v = Gf2Ops.reduce(v, ech, piv)
            if v:
                Gf2Ops._insert(v, ech, piv)
        return ech, piv

    @staticmethod
    def reduce(v, ech, piv):
        for e, p in zip(ech, piv):
            if (v >> p) & 1:
                v ^= e
        return v

    @staticmethod
    def _insert(v, ech, piv):
        p = (v & -v).bit_length() - 1
        for k in range(len(ech)):
            if (ech[k] >> p) & 1:
                ech[k] ^= v
        i = 0
        while i < len(piv) and piv[i] < p:
            i += 1
        ech.insert(i, v)
        piv.insert(i, p)


class RatOps:
    """Vectors are tuples of HRat; matrices are lists of HRat rows."""

    field = "GF2(h)"
    _zero = HRat(0)
    _one = HRat(1)

    @staticmethod
    def dim_of(matrix) -> int:
        return len(matrix[0]) if matrix else 0

    @staticmethod
    def zero(n: int):
        return (RatOps._zero,) * n

    @staticmethod
    def unit(n: int, j: int):
        return tuple(
            RatOps._one if k == j else RatOps._zero for k in range(n)
        )

    @staticmethod
    def is_zero(v) -> bool:
        return not any(v)

    @staticmethod
    def add(u, v):
        return tuple(a + b for a, b in zip(u, v))

    @staticmethod
    def support(v):
        return [i for i, e in enumerate(v) if e]

    @staticmethod
    def matvec(matrix, v):
        out = []
        for row in matrix:
            acc = RatOps._zero
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    @staticmethod
    def columns(matrix):
        if not matrix:
            return []
        n = len(matrix[0])
        return [tuple(row[j] for row in matrix) for j in range(n)]

    @staticmethod
    def kernel(matrix):
        from .smith import rat_kernel_basis

        return [tuple(v) for v in rat_kernel_basis(matrix)]

    @staticmethod
    def solve(matrix, v):
        from .smith import rat_solve

        sol = rat_solve([list(r) for r in matrix], list(v))
        return tuple(sol) if sol is not None else None

    @staticmethod
    def echelon(vectors):
        ech = []
        piv = []
        for v in vectors:
            v = RatOps.reduce(v, ech, piv)
            if not RatOps.is_zero(v):
                RatOps._insert(v, ech, piv)
        return ech, piv

    @staticmethod
    def reduce(v, ech, piv):
        v = list(v)
        for e, p in zip(ech, piv):
            if v[p]:
                c = v[p]
                v = [a + c * b for a, b in zip(v, e)]
        return tuple(v)

    @staticmethod
    def _insert(v, ech, piv):
        p = next(i for i, e in enumerate(v) if e)
        inv = v[p].inverse()
        v = tuple(inv * e for e in v)
        for k in range(len(ech)):
            if ech[k][p]:
                c = ech[k][p]
                ech[k] = tuple(a + c * b for a, b in zip(ech[k], v))
        i = 0
        while i < len(piv) and piv[i] < p:
            i += 1
        ech.insert(i, v)
        piv.insert(i, p)


def ops_for_ring(ring: str):
    if ring == "GF2":
        return Gf2Ops
    if ring == "GF2(h)":
        return RatOps
    raise ValueError(f"no field operations for ring {ring!r}")


# ---------------------------------------------------------------------------
# shared derived operations


def span_rank(ops, vectors) -> int:
    return len(ops.echelon(vectors)[0])


def contains(ops, ech, piv, v) -> bool:
    return ops.is_zero(ops.reduce(v, ech, piv))


def subspace_sum(ops, a_vectors, b_vectors):
    return ops.echelon(list(a_vectors) + list(b_vectors))


def quotient_reps(ops, big_vectors, small_ech, small_piv):
    """Vectors from big completing a basis of span(small) inside span(big).

    Assumes span(small) is contained in span(big); returned representatives
    project to a basis of the quotient.
    """
    ech = list(small_ech)
    piv = list(small_piv)
    reps = []
    for v in big_vectors:
        red = ops.reduce(v, ech, piv)
        if not ops.is_zero(red):
            reps.append(v)
            ops._insert(red, ech, piv)
    return reps


def preimage_basis(ops, matrix, sub_ech, sub_piv, domain_vectors):
    """Basis of {v in span(domain) : matrix @ v in span(sub)}.

    domain_vectors must be linearly independent.
    """
    if not domain_vectors:
        return []
    reduced_images = [ops.reduce(ops.matvec(matrix, v), sub_ech, sub_piv) for v in domain_vectors]
    m = len(domain_vectors)
    n = ops.dim_of(matrix)
    # rows of the condition system: coordinates of reduced images
    if ops.field == "GF2":
        cond = BitMatrix(
            [sum(((img >> i) & 1) << k for k, img in enumerate(reduced_images)) for i in range(n)],
            m,
        )
        coeff_kernel = cond.kernel_basis()
        out = []
        for mask in coeff_kernel:
            acc = 0
            mm = mask
            while mm:
                low = mm & -mm
                acc ^= domain_vectors[low.bit_length() - 1]
                mm ^= low
            out.append(acc)
        return out
    cond = [[reduced_images[k][i] for k in range(m)] for i in range(n)]
    coeff_kernel = RatOps.kernel(cond)
    out = []
    for coeffs in coeff_kernel:
        acc = ops.zero(len(domain_vectors[0]))
        for c, v in zip(coeffs, domain_vectors):
            if c:
                acc = ops.add(acc, tuple(c * e for e in v))
        out.append(acc)
    return out
