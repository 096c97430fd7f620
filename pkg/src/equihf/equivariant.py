"""Z/2 group and Tate cohomology of involutive complexes.

For a finite complex V over GF(2) with a chain involution iota, the group
cochain complex is V[h] with differential d_V + h(id + iota); its cohomology
is computed as a finitely generated module over GF(2)[h] localized at (h),
which captures exactly the GF(2)[[h]]-module structure.  Tate cohomology
inverts h and is computed over the field GF(2)(h).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ComplexError, GradedComplex, Generator, tensor_square_swap
from .fieldlin import Gf2Ops, quotient_reps
from .gf2 import BitMatrix, span_of, span_contains
from .homology import LocalCohomology, local_cohomology
from .hpoly import HPoly, HRat, bits_divmod, bits_gcd, bits_mul
from .smith import rat_matrix, rank_over_fraction_field

__all__ = [
    "InvolutiveComplex",
    "EqModuleInvariants",
    "borel_complex",
    "group_cohomology",
    "tate_dimension",
    "truncation_dims",
    "verify_u_sequence",
    "smith_bound_check",
    "squaring_map",
    "kaledin_check",
]


@dataclass
class InvolutiveComplex:
    complex: GradedComplex  # over GF2
    iota: BitMatrix

    def __post_init__(self):
        c = self.complex
        if c.ring != "GF2":
            raise ComplexError("involutive complexes live over GF2")
        n = c.dim
        if self.iota.nrows != n or self.iota.ncols != n:
            raise ComplexError("involution shape mismatch")
        if self.iota @ self.iota != BitMatrix.identity(n):
            raise ComplexError("iota^2 != id")
        if (self.iota @ c.diff) != (c.diff @ self.iota):
            raise ComplexError("iota is not a chain map")

    @property
    def dim(self):
        return self.complex.dim


@dataclass
class EqModuleInvariants:
    free_rank: int
    torsion_exponents: list[int]

    @property
    def generator_count(self) -> int:
        return self.free_rank + len(self.torsion_exponents)

    @property
    def tate_dimension(self) -> int:
        return self.free_rank

    def is_zero(self) -> bool:
        return self.generator_count == 0


def borel_complex(w: InvolutiveComplex) -> GradedComplex:
    """(V[h], d_V + h(id + iota)) over GF2[h]."""
    c = w.complex
    n = c.dim
    h = HPoly(2)
    m = [[HPoly(0)] * n for _ in range(n)]
    for j in range(n):
        for i in range(n):
            bits = 0
            if c.diff.get(i, j):
                bits ^= 1
            if (i == j) != bool(w.iota.get(i, j)):  # id + iota over GF(2)
                bits ^= 2
            m[i][j] = HPoly(bits)
    gens = [Generator(g.name, g.degree, g.action) for g in c.generators]
    out = GradedComplex("GF2[h]", gens, m, grading=c.grading)
    if not out.d_squared_is_zero():
        raise ComplexError("Borel differential does not square to zero")
    return out


def _borel_local(w: InvolutiveComplex) -> LocalCohomology:
    return local_cohomology(borel_complex(w).diff)


def group_cohomology(w: InvolutiveComplex) -> EqModuleInvariants:
    pres = _borel_local(w)
    return EqModuleInvariants(pres.free_rank, list(pres.torsion_exponents))


def tate_dimension(w: InvolutiveComplex) -> int:
    """dim over GF(2)(h) of the h-inverted Borel complex (ungraded)."""
    b = borel_complex(w)
    r = rank_over_fraction_field(b.diff)
    return b.dim - 2 * r


def truncation_dims(w: InvolutiveComplex, n_max: int = 8) -> list[int]:
    """dim_GF(2) H(Borel mod h^N) for N = 1..n_max.

    Cross-check oracle: for H = R^f + sum R/(h^{a_i}) over R = K[[h]], the
    universal-coefficient formula gives
        dim H(B mod h^N) = f*N + 2*sum_i min(a_i, N)
    (each torsion factor contributes once through H/h^N H and once through
    h^N-torsion).
    """
    b = borel_complex(w)
    n = b.dim
    out = []
    for trunc in range(1, n_max + 1):
        pairs = []
        for j in range(n):
            for i in range(n):
                bits = b.diff[i][j].bits
                k = 0
                while bits:
                    if bits & 1:
                        for t in range(trunc - k):
                            pairs.append(((t + k) * n + i, t * n + j))
                    bits >>= 1
                    k += 1
        m = BitMatrix.from_pairs(n * trunc, n * trunc, pairs)
        out.append(n * trunc - 2 * m.rank())
    return out


def expected_truncation_dims(inv: EqModuleInvariants, n_max: int = 8) -> list[int]:
    return [
        inv.free_rank * n + 2 * sum(min(a, n) for a in inv.torsion_exponents)
        for n in range(1, n_max + 1)
    ]


# ---------------------------------------------------------------------------
# the long exact sequence in h


@dataclass
class USequenceReport:
    exact_at_h_target: bool
    exact_at_hv: bool
    exact_at_connecting_target: bool
    details: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return (
            self.exact_at_h_target
            and self.exact_at_hv
            and self.exact_at_connecting_target
        )


def _class_conditions(pres: LocalCohomology, vectors_as_rats):
    """GF(2)-linear conditions on a GF(2)-combination of cocycles being a coboundary.

    vectors_as_rats: list of cocycle vectors (HRat).  Returns a BitMatrix C so
    that the combination sum_k c_k v_k is a coboundary iff C @ c = 0.
    """
    rows = []
    m = len(vectors_as_rats)
    coord_rows, raw_exps = pres.coord_spec()
    for row, exp in zip(coord_rows, raw_exps):
        # coordinate of v_k under this row
        coords = []
        for v in vectors_as_rats:
            acc = HRat(0)
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            coords.append(acc)
        if exp is None:
            # free coordinate: must vanish identically
            den = 1
            for cval in coords:
                g = bits_gcd(den, cval.den)
                den = bits_mul(bits_divmod(den, g)[0], cval.den)
            numers = []
            maxdeg = 0
            for cval in coords:
                nn = bits_mul(cval.num, bits_divmod(den, cval.den)[0])
                numers.append(nn)
                maxdeg = max(maxdeg, nn.bit_length())
            for bit in range(maxdeg):
                rows.append(sum(((nn >> bit) & 1) << k for k, nn in enumerate(numers)))
        elif exp >= 1:
            # torsion coordinate: valuation >= exp, i.e. first exp series coeffs vanish
            for bit in range(exp):
                rows.append(
                    sum(
                        (cval.series_prefix(exp) >> bit & 1) << k
                        for k, cval in enumerate(coords)
                    )
                )
    return BitMatrix(rows, m)


def verify_u_sequence(w: InvolutiveComplex) -> USequenceReport:
    """Exactness of  H^{*-1}(Z/2;V) --h--> H^*(Z/2;V) --(h=0)--> H^*(V) --> ...

    The connecting map is the snake construction on
    0 -> C^{*-1} --h--> C^* -> V -> 0: a V-cocycle v maps to [ (id+iota)v ].
    """
    c = w.complex
    n = c.dim
    pres = _borel_local(w)
    gens = pres.generators
    t = pres.generator_count
    gf = Gf2Ops
    # H(V) data over GF(2)
    ker = c.diff.kernel_basis()
    im, im_piv = span_of(gf.columns(c.diff))
    hv_basis = quotient_reps(gf, ker, im, im_piv)

    details: dict = {}

    # (1) exactness at the middle H(Z/2;V): ker(set h=0) = im(mult by h)
    #     holds iff the images of the module generators are independent in H(V)
    seth = []
    for g in gens:
        vec = 0
        for i, e in enumerate(g):
            if not e:
                continue
            if not e.is_local_integer():
                raise ComplexError("generator not h-integral")
            if e.series_prefix(1):
                vec |= 1 << i
        seth.append(vec)
    reduced = [gf.reduce(v, im, im_piv) for v in seth]
    ech, _ = gf.echelon(reduced)
    exact1 = len(ech) == t
    details["generator_images_rank"] = len(ech)
    details["generator_count"] = t

    # (2) exactness at H(V): im(set h=0) = ker(connecting)
    one_plus_iota = w.iota + BitMatrix.identity(n)
    # conditions for a cocycle combination to have zero connecting image
    delta_images = [
        [HRat(b) for b in _bits_of(one_plus_iota.mul_vec(v), n)] for v in ker
    ]
    cond = _class_conditions(pres, delta_images)
    coeff_kernel = cond.kernel_basis()
    ker_delta = []
    for mask in coeff_kernel:
        acc = 0
        mm = mask
        while mm:
            low = mm & -mm
            acc ^= ker[low.bit_length() - 1]
            mm ^= low
        ker_delta.append(acc)
    span_a = gf.echelon([gf.reduce(v, im, im_piv) for v in seth])  # im(pi)
    span_b = gf.echelon([gf.reduce(v, im, im_piv) for v in ker_delta])  # ker(delta)
    exact2 = span_a[0] == span_b[0]
    details["im_pi_dim"] = len(span_a[0])
    details["ker_delta_dim"] = len(span_b[0])

    # (3) exactness at the next H(Z/2;V): im(connecting) = ker(mult by h)
    #     ker(h) is spanned by h^{a_i - 1} * (torsion generators); im(delta)
    #     must consist of h-torsion classes and fill that space.
    ntors = len(pres.torsion_exponents)
    h = HRat(HPoly(2))
    ok_torsion = True
    residue_rows = []
    for v in hv_basis:
        z = [HRat(b) for b in _bits_of(one_plus_iota.mul_vec(v), n)]
        hz = [h * e for e in z]
        if not pres.class_is_zero(hz):
            ok_torsion = False
            break
        coords = pres.raw_coords(z)
        residue = 0
        tor_idx = 0
        for cval, exp in zip(coords, pres._raw_exponents):
            if exp is None or exp == 0:
                continue
            if cval.series_prefix(exp) >> (exp - 1) & 1:
                residue |= 1 << tor_idx
            tor_idx += 1
        residue_rows.append(residue)
    if ok_torsion:
        rank_res = len(gf.echelon(residue_rows)[0])
        exact3 = rank_res == ntors
        details["residue_rank"] = rank_res
        details["torsion_count"] = ntors
    else:
        exact3 = False
        details["h_delta_nonzero"] = True
    return USequenceReport(exact1, exact2, exact3, details)


def _bits_of(mask: int, n: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(n)]


# ---------------------------------------------------------------------------
# Smith inequality and induced involution


def induced_involution_on_h(w: InvolutiveComplex):
    """Matrix of iota on H(V), in a leftmost-pivot cocycle basis; returns
    (matrix, basis vectors)."""
    c = w.complex
    gf = Gf2Ops
    ker = c.diff.kernel_basis()
    im, im_piv = span_of(gf.columns(c.diff))
    basis = quotient_reps(gf, ker, im, im_piv)
    # coordinates: reduce iota(b) against im + basis echelon bookkeeping
    cols = []
    for b in basis:
        v = gf.reduce(w.iota.mul_vec(b), im, im_piv)
        cols.append(_express_in(gf, v, [gf.reduce(x, im, im_piv) for x in basis]))
    mat = BitMatrix(
        [sum(cols[j][i] << j for j in range(len(basis))) for i in range(len(basis))],
        len(basis),
    )
    return mat, basis


def _express_in(gf, v, reduced_basis):
    m = len(reduced_basis)
    nbits = max([1] + [x.bit_length() for x in reduced_basis + [v]])
    mat = BitMatrix(
        [sum(((x >> i) & 1) << k for k, x in enumerate(reduced_basis)) for i in range(nbits)],
        m,
    )
    sol = mat.solve(v)
    if sol is None:
        raise ComplexError("vector not in span")
    return [(sol >> k) & 1 for k in range(m)]


@dataclass
class SmithBoundReport:
    invariant_dim: int
    generator_count: int
    free_rank: int

    @property
    def holds(self) -> bool:
        return self.invariant_dim >= self.generator_count >= self.free_rank


def smith_bound_check(w: InvolutiveComplex) -> SmithBoundReport:
    """dim H(V)^iota >= #generators of H(Z/2;V) >= its free rank."""
    iota_h, basis = induced_involution_on_h(w)
    m = len(basis)
    fixed = (iota_h + BitMatrix.identity(m)).kernel_basis() if m else []
    inv = group_cohomology(w)
    return SmithBoundReport(len(fixed), inv.generator_count, inv.free_rank)


# ---------------------------------------------------------------------------
# squaring map and the localized comparison


def squaring_map(v: GradedComplex, cocycle: int):
    """Class of c (x) c in the Borel complex of the swap square.

    Returns (square complex, swap, borel complex, class vector over GF2[h]).
    """
    if v.ring != "GF2":
        raise ComplexError("squaring map needs a GF2 complex")
    if v.diff.mul_vec(cocycle):
        raise ComplexError("input is not a cocycle")
    sq, swap = tensor_square_swap(v)
    w = InvolutiveComplex(sq, swap)
    b = borel_complex(w)
    n = v.dim
    vec = [HPoly(0)] * (n * n)
    for a in Gf2Ops.support(cocycle):
        for bidx in Gf2Ops.support(cocycle):
            vec[a * n + bidx] = vec[a * n + bidx] + HPoly(1)
    return sq, swap, b, vec


def squaring_defect_is_coboundary(v: GradedComplex, cocycle: int, wvec: int) -> bool:
    """Check (c+dw)(x)(c+dw) - c(x)c = d_C( c(x)w + w(x)c + w(x)dw + h w(x)w )."""
    n = v.dim
    dw = v.diff.mul_vec(wvec)
    c2 = cocycle ^ dw
    _, _, b, _ = squaring_map(v, cocycle)
    lhs = [HPoly(0)] * (n * n)
    for a in Gf2Ops.support(c2):
        for x in Gf2Ops.support(c2):
            lhs[a * n + x] = lhs[a * n + x] + HPoly(1)
    for a in Gf2Ops.support(cocycle):
        for x in Gf2Ops.support(cocycle):
            lhs[a * n + x] = lhs[a * n + x] + HPoly(1)
    arg = [HPoly(0)] * (n * n)
    for a in Gf2Ops.support(cocycle):
        for x in Gf2Ops.support(wvec):
            arg[a * n + x] = arg[a * n + x] + HPoly(1)  # c (x) w
            arg[x * n + a] = arg[x * n + a] + HPoly(1)  # w (x) c
    for a in Gf2Ops.support(wvec):
        for x in Gf2Ops.support(dw):
            arg[a * n + x] = arg[a * n + x] + HPoly(1)  # w (x) dw
        for x in Gf2Ops.support(wvec):
            arg[a * n + x] = arg[a * n + x] + HPoly(2)  # h * w (x) w
    from .smith import mat_mul

    rhs = [r[0] for r in mat_mul(b.diff, [[e] for e in arg], HPoly(0))]
    return lhs == rhs


@dataclass
class KaledinReport:
    verdict: bool
    dim_source: int
    dim_target: int
    independent: bool
    matrix_columns: list


def kaledin_check(v: GradedComplex) -> KaledinReport:
    """H(V)(h) -> Tate cohomology of the swap square, via v -> [v (x) v]."""
    if v.ring != "GF2":
        raise ComplexError("kaledin_check needs a GF2 complex")
    gf = Gf2Ops
    n = v.dim
    ker = v.diff.kernel_basis()
    im, im_piv = span_of(gf.columns(v.diff))
    hv_basis = quotient_reps(gf, ker, im, im_piv)
    m = len(hv_basis)
    sq, swap = tensor_square_swap(v)
    w = InvolutiveComplex(sq, swap)
    b = borel_complex(w)
    # Tate complex: same matrix over GF(2)(h)
    tate = rat_matrix(b.diff)
    rank_t = rank_over_fraction_field(tate)
    dim_tate = n * n - 2 * rank_t
    # squares of basis cocycles as GF(2)(h) vectors
    squares = []
    for c in hv_basis:
        vec = [0] * (n * n)
        for a in gf.support(c):
            for x in gf.support(c):
                vec[a * n + x] ^= 1
        squares.append(vec)
        # each must be a cocycle of the Tate complex
        img = b.diff  # polynomial matrix
        acc = [HPoly(0)] * (n * n)
        for j, bit in enumerate(vec):
            if bit:
                for i in range(n * n):
                    acc[i] = acc[i] + img[i][j]
        if any(acc):
            raise ComplexError("square of a cocycle failed to be a cocycle")
    # independence of classes: rank([squares | im d_T]) = m + rank d_T
    cols = [[HRat(e) for e in vec] for vec in squares]
    dmat_cols = [[tate[i][j] for i in range(n * n)] for j in range(n * n)]
    stacked = [list(col) for col in cols] + dmat_cols
    rank_joint = rank_over_fraction_field([list(x) for x in zip(*stacked)]) if stacked else 0
    independent = rank_joint == m + rank_t
    verdict = independent and m == dim_tate
    return KaledinReport(verdict, m, dim_tate, independent, squares)
