"""Dense GF(2) linear algebra with rows packed into Python ints.

Row i is an int whose bit j is the (i, j) entry.  XOR gives row addition,
so elimination runs on machine words regardless of width.
"""

from __future__ import annotations

__all__ = ["BitMatrix", "GF2Error"]


class GF2Error(ValueError):
    pass


class BitMatrix:
    __slots__ = ("rows", "ncols")

    def __init__(self, rows: list[int], ncols: int):
        mask = (1 << ncols) - 1
        self.rows = [r & mask for r in rows]
        self.ncols = ncols

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_entries(cls, entries: list[list[int]]) -> "BitMatrix":
        ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            acc = 0
            for j, e in enumerate(row):
                if e & 1:
                    acc |= 1 << j
            rows.append(acc)
        return cls(rows, ncols)

    @classmethod
    def from_pairs(cls, nrows: int, ncols: int, pairs) -> "BitMatrix":
        """Entries 1 at each (row, col) in pairs."""
        rows = [0] * nrows
        for i, j in pairs:
            rows[i] ^= 1 << j
        return cls(rows, ncols)

    @classmethod
    def permutation(cls, perm: list[int]) -> "BitMatrix":
        """Matrix sending basis vector j to basis vector perm[j]."""
        n = len(perm)
        rows = [0] * n
        for j, i in enumerate(perm):
            rows[i] |= 1 << j
        return cls(rows, n)

    # -- basics --------------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def copy(self) -> "BitMatrix":
        return BitMatrix(list(self.rows), self.ncols)

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def entries(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((tuple(self.rows), self.ncols))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols or self.nrows != other.nrows:
            raise GF2Error("shape mismatch in addition")
        return BitMatrix([a ^ b for a, b in zip(self.rows, other.rows)], self.ncols)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(cols, self.nrows)

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector (vector = bitmask over columns)."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise GF2Error("shape mismatch in product")
        # rows of result: row i of self selects rows of other
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                low = rr & -rr
                acc ^= other.rows[low.bit_length() - 1]
                rr ^= low
            out.append(acc)
        return BitMatrix(out, other.ncols)

    def __str__(self) -> str:
        return "\n".join(
            "".join(str((r >> j) & 1) for j in range(self.ncols)) for r in self.rows
        )

    # -- elimination ----------------------------------------------------

    def row_echelon(self) -> tuple[list[int], list[int]]:
        """Returns (echelon_rows, pivot_cols); rows reduced (RREF), zero rows dropped."""
        rows = [r for r in self.rows if r]
        ech: list[int] = []
        piv: list[int] = []
        for r in rows:
            r = _reduce_row(r, ech, piv)
            if r:
                _insert_row(r, ech, piv)
        return ech, piv

    def rank(self) -> int:
        return len(self.row_echelon()[0])

    def column_space_basis(self) -> list[int]:
        return self.transpose().row_echelon()[0]

    def kernel_basis(self) -> list[int]:
        """Basis of {v : self @ v = 0}, vectors as bitmasks over columns."""
        ech, piv = self.row_echelon()
        pivset = set(piv)
        basis = []
        for j in range(self.ncols):
            if j in pivset:
                continue
            v = 1 << j
            for r, p in zip(ech, piv):
                if (r >> j) & 1:
                    v |= 1 << p
            basis.append(v)
        return basis

    def solve(self, b: int):
        """One solution v of self @ v = b, or None."""
        n = self.ncols
        aug = [(r << 1) | ((b >> i) & 1) for i, r in enumerate(self.rows)]
        # treat bit 0 as the augmented column, bits 1.. as matrix columns
        ech: list[int] = []
        piv: list[int] = []
        for r in aug:
            for e, p in zip(ech, piv):
                if (r >> p) & 1:
                    r ^= e
            if r > 1:
                # pivot on the highest-priority (lowest) matrix column
                p = _lowest_set_above(r, 1)
                _insert_row(r, ech, piv, pivot=p)
            elif r == 1:
                return None
        v = 0
        for e, p in zip(ech, piv):
            if e & 1:
                v |= 1 << (p - 1)
        return v

    def inverse(self) -> "BitMatrix":
        n = self.nrows
        if n != self.ncols:
            raise GF2Error("inverse of non-square matrix")
        work = list(self.rows)
        inv = [1 << i for i in range(n)]
        for col in range(n):
            pivot = None
            for i in range(col, n):
                if (work[i] >> col) & 1:
                    pivot = i
                    break
            if pivot is None:
                raise GF2Error("singular matrix")
            work[col], work[pivot] = work[pivot], work[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            for i in range(n):
                if i != col and (work[i] >> col) & 1:
                    work[i] ^= work[col]
                    inv[i] ^= inv[col]
        return BitMatrix(inv, n)


def _lowest_set_above(r: int, shift: int) -> int:
    rr = r >> shift
    return (rr & -rr).bit_length() - 1 + shift


def _reduce_row(r: int, ech: list[int], piv: list[int]) -> int:
    for e, p in zip(ech, piv):
        if (r >> p) & 1:
            r ^= e
    return r


def _insert_row(r: int, ech: list[int], piv: list[int], pivot: int | None = None):
    if pivot is None:
        pivot = (r & -r).bit_length() - 1
    # keep the basis reduced
    for k in range(len(ech)):
        if (ech[k] >> pivot) & 1:
            ech[k] ^= r
    idx = 0
    while idx < len(piv) and piv[idx] < pivot:
        idx += 1
    ech.insert(idx, r)
    piv.insert(idx, pivot)


def span_contains(ech: list[int], piv: list[int], v: int) -> bool:
    return _reduce_row(v, ech, piv) == 0


def span_of(vectors: list[int]) -> tuple[list[int], list[int]]:
    """Reduced echelon basis (rows, pivots) of the span of bitmask vectors."""
    ech: list[int] = []
    piv: list[int] = []
    for v in vectors:
        v = _reduce_row(v, ech, piv)
        if v:
            _insert_row(v, ech, piv)
    return ech, piv
