"""Spectral sequence of a finitely filtered complex over a field.

Conventions: the filtration is decreasing, F^p = span of generators of
weight >= p (weights are normalized to dense ranks 0..L-1), and the
differential must not decrease weights.  Pages are computed as explicit
subquotients

    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}),
    Z_r^p = {x in F^p : dx in F^{p+r}},

with deterministic leftmost-pivot bases, so that E_{r+1} = H(E_r, d_r) can
be checked dimension-wise and E_infinity against the cohomology of the
total complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ComplexError, GradedComplex, Generator
from .fieldlin import preimage_basis, quotient_reps
from .gf2 import BitMatrix
from .hpoly import HPoly

__all__ = ["Filtration", "SpectralSequencePages", "spectral_sequence", "h_adic_pages"]


@dataclass(frozen=True)
class Filtration:
    """Integer weight per generator; direction 'increasing' means d raises weights."""

    weights: tuple
    direction: str = "increasing"

    def normalized(self):
        w = list(self.weights)
        if self.direction == "decreasing":
            w = [-x for x in w]
        elif self.direction != "increasing":
            raise ComplexError(f"bad filtration direction {self.direction!r}")
        levels = sorted(set(w))
        rank = {v: i for i, v in enumerate(levels)}
        return [rank[x] for x in w], levels


@dataclass
class SpectralSequencePages:
    levels: list  # original weight labels, ascending
    pages: list  # pages[r][p] = dims: dict degree->dim plus "total"
    differentials: list  # differentials[r][p] = matrix entries (list of rows)
    stable_page: int
    e_inf_total: int
    total_cohomology: int
    consistency: list = field(default_factory=list)

    @property
    def converges(self) -> bool:
        return self.e_inf_total == self.total_cohomology


def _dims_by_degree(c: GradedComplex, ops, reps):
    out = {"total": len(reps)}
    if c.grading == "none":
        return out
    for v in reps:
        degs = {c.generators[i].degree for i in ops.support(v)}
        if len(degs) != 1:
            # mixed representative: report total only
            return {"total": len(reps)}
        (deg,) = degs
        out[deg] = out.get(deg, 0) + 1
    return out


def spectral_sequence(c: GradedComplex, filt: Filtration, max_page: int | None = None) -> SpectralSequencePages:
    if c.ring == "GF2[h]":
        raise ComplexError("use h_adic_pages for GF2[h] complexes")
    ops = c.field_ops()
    n = c.dim
    ranks, levels = filt.normalized()
    if len(ranks) != n:
        raise ComplexError("filtration size mismatch")
    nlevels = len(levels)
    # d must not decrease weights
    for j in range(n):
        for i in range(n):
            if c.entry(i, j) and ranks[i] < ranks[j]:
                raise ComplexError(
                    f"differential decreases filtration at ({c.generators[i].name},{c.generators[j].name})"
                )

    unit_vectors = [ops.unit(n, j) for j in range(n)]

    def f_level(p):
        p = max(p, 0)
        return [unit_vectors[j] for j in range(n) if ranks[j] >= p]

    f_ech = {}
    for p in range(nlevels + 1):
        f_ech[p] = ops.echelon(f_level(p))

    def f_basis(p):
        if p <= 0:
            return f_level(0)
        if p >= nlevels:
            return []
        return f_level(p)

    def f_echelon(p):
        p = min(max(p, 0), nlevels)
        return f_ech[p]

    r_cap = max_page if max_page is not None else nlevels + 1

    def z_space(r, p):
        # {x in F^p : dx in F^{p+r}}
        sub_ech, sub_piv = f_echelon(p + r)
        return preimage_basis(ops, c.diff, sub_ech, sub_piv, f_basis(p))

    pages = []
    diffs = []
    consistency = []
    prev_dims = None
    stable_at = None
    r = 0
    while r <= r_cap:
        page = {}
        data = {}
        for p in range(nlevels):
            zrp = z_space(r, p)
            if r == 0:
                den_vectors = f_basis(p + 1)
            else:
                den_vectors = z_space(r - 1, p + 1) + [
                    ops.matvec(c.diff, v) for v in z_space(r - 1, p - r + 1)
                ]
            den_ech, den_piv = ops.echelon(den_vectors)
            reps = quotient_reps(ops, zrp, den_ech, den_piv)
            page[p] = _dims_by_degree(c, ops, reps)
            data[p] = (reps, den_ech, den_piv)
        pages.append(page)
        # d_r matrices, column-major coordinates in the chosen page bases
        dmats = {}
        for p in range(nlevels):
            reps, _, _ = data[p]
            if p + r >= nlevels or not reps:
                continue
            treps, tden_ech, tden_piv = data[p + r]
            cols = []
            for v in reps:
                img = ops.reduce(ops.matvec(c.diff, v), tden_ech, tden_piv)
                cols.append(_coords(ops, img, treps, tden_ech, tden_piv))
            dmats[p] = cols
        diffs.append(dmats)
        dims_now = tuple(page[p]["total"] for p in range(nlevels))
        if stable_at is None and r >= max(1, nlevels):
            all_zero = all(
                all(not any(col) for col in cols) for cols in dmats.values()
            )
            if dims_now == prev_dims and all_zero:
                stable_at = r
                break
        prev_dims = dims_now
        r += 1
    if stable_at is None:
        stable_at = len(pages) - 1
    # E_{r+1} = H(E_r, d_r), dimension-wise
    for rr in range(len(pages) - 1):
        for p in range(nlevels):
            dim_next = pages[rr + 1][p]["total"]
            dim_here = pages[rr][p]["total"]
            rank_out = _rank_of_cols(ops, diffs[rr].get(p, []))
            rank_in = _rank_of_cols(ops, diffs[rr].get(p - rr, []) if p - rr != p or rr == 0 else [])
            if rr == 0:
                rank_in = rank_out  # d_0 maps a level to itself
            ok = dim_next == dim_here - rank_out - rank_in
            consistency.append((rr, p, ok))
    e_inf_total = sum(pages[-1][p]["total"] for p in range(nlevels))
    ops2 = ops
    ker = ops2.kernel(c.diff)
    im, _ = ops2.echelon(ops2.columns(c.diff))
    total_h = len(ker) - len(im)
    return SpectralSequencePages(
        levels=levels,
        pages=pages,
        differentials=diffs,
        stable_page=stable_at,
        e_inf_total=e_inf_total,
        total_cohomology=total_h,
        consistency=consistency,
    )


def _coords(ops, reduced_vec, reps, den_ech, den_piv):
    """Coordinates of reduced_vec in the basis given by reps (mod den)."""
    if ops.is_zero(reduced_vec):
        return [0] * len(reps)
    red_reps = [ops.reduce(v, den_ech, den_piv) for v in reps]
    if ops.field == "GF2":
        nbits = max(v.bit_length() for v in red_reps + [reduced_vec] if v)
        mat = BitMatrix(
            [
                sum(((v >> i) & 1) << k for k, v in enumerate(red_reps))
                for i in range(nbits)
            ],
            len(red_reps),
        )
        sol = mat.solve(reduced_vec)
        if sol is None:
            raise ComplexError("page differential left the page")
        return [(sol >> k) & 1 for k in range(len(red_reps))]
    n = len(reduced_vec)
    mat = [[red_reps[k][i] for k in range(len(red_reps))] for i in range(n)]
    from .smith import rat_solve

    sol = rat_solve(mat, list(reduced_vec))
    if sol is None:
        raise ComplexError("page differential left the page")
    return sol


def _rank_of_cols(ops, cols):
    if not cols:
        return 0
    if ops.field == "GF2":
        vecs = []
        for col in cols:
            acc = 0
            for i, bit in enumerate(col):
                if bit:
                    acc |= 1 << i
            vecs.append(acc)
        return len(ops.echelon(vecs)[0])
    vecs = [tuple(col) for col in cols]
    return len(ops.echelon(vecs)[0])


# ---------------------------------------------------------------------------
# h-adic pages of a GF2[h] complex via truncation


def h_adic_pages(c: GradedComplex, p_max: int = 4, r_max: int = 4):
    """Pages of the h-power filtration of a GF2[h] complex.

    Works on the truncation by h^P (P = p_max + r_max + 2), which agrees
    with the full complex in the reported window p <= p_max, r <= r_max.
    Returns (SpectralSequencePages, reliable_p_max).
    """
    if c.ring != "GF2[h]":
        raise ComplexError("h_adic_pages expects GF2[h] scalars")
    P = p_max + r_max + 2
    n = c.dim
    gens = []
    for k in range(P):
        for g in c.generators:
            deg = None if g.degree is None else (
                (g.degree + k) % 2 if c.grading == "Z2" else g.degree + k
            )
            gens.append(Generator(f"{g.name}.h{k}", deg, g.action))
    pairs = []
    for j in range(n):
        for i in range(n):
            e = c.diff[i][j]
            if not e:
                continue
            bits = e.bits
            k = 0
            while bits:
                if bits & 1:
                    for t in range(P - k):
                        pairs.append(((t + k) * n + i, t * n + j))
                bits >>= 1
                k += 1
    dmat = BitMatrix.from_pairs(n * P, n * P, pairs)
    trunc = GradedComplex("GF2", gens, dmat, grading=c.grading)
    filt = Filtration(tuple(k for k in range(P) for _ in range(n)))
    pages = spectral_sequence(trunc, filt, max_page=r_max)
    return pages, p_max
