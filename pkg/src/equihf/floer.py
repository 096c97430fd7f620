"""The abstract Floer datum and its chain-level consistency checks.

A datum packages the fixed-point data of an automorphism and its square:
generators with mod-2 degrees and exact rational actions, the involution rho
on the square's fixed points, both differentials, the equivariant correction
terms d_eq^{i,sigma}, and the product components p^{i,sigma}.  All analytic
input enters only through the algebraic constraints validated here; the
matrices are counts, not moduli spaces.

Validation enforces, in exact mode: squares of differentials vanish, degrees
and strict action increase, the epsilon gap conditions, the zero-energy
shape d_eq = h(id + rho) + higher-action terms, the quadratic relations
among the d_eq^{i,sigma}, the product relations among the p^{i,sigma}, and
(when Krein indices are attached) that the action-preserving diagonal of the
product is exactly h^{n - kappa(x)} on x (x) x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import ChainMap, GradedComplex, Generator
from .equivariant import InvolutiveComplex, borel_complex, induced_involution_on_h
from .fieldlin import Gf2Ops, quotient_reps
from .gf2 import BitMatrix, span_of
from .homology import LocalCohomology, PidCohomology, local_cohomology, pid_cohomology
from .hpoly import HPoly, HRat
from .smith import mat_mul, rank_over_fraction_field, rat_matrix

__all__ = [
    "FloerPoint",
    "FloerDatum",
    "FloerError",
    "Check",
    "ValidationReport",
    "validate",
    "equivariant_complex",
    "square_borel_source",
    "pants_total_matrix",
    "pants_chain_map",
    "hf_poly_invariants",
    "hf_eq_invariants",
    "localized_check",
    "smith_check",
    "transfer",
    "h_adic_e2_check",
    "tate_action_e1_check",
]

PLUS, MINUS = 1, -1
SIGNS = (PLUS, MINUS)


class FloerError(ValueError):
    pass


@dataclass(frozen=True)
class FloerPoint:
    name: str
    degree: int  # mod 2
    action: Fraction
    kappa: int | None = None
    detsign: int | None = None


@dataclass
class FloerDatum:
    n: int
    epsilon: Fraction
    mode: str  # "exact" or "monotone"
    i_max: int
    fix_phi: list
    fix_phi2: list
    rho: BitMatrix
    d_phi: BitMatrix
    d_phi2: BitMatrix
    d_eq: dict  # (i, sigma) -> BitMatrix on fix_phi2
    pants: dict  # (i, sigma) -> BitMatrix: rows fix_phi2, cols pairs of fix_phi

    def __post_init__(self):
        if self.mode not in ("exact", "monotone"):
            raise FloerError(f"unknown mode {self.mode!r}")
        self.phi_index = {p.name: i for i, p in enumerate(self.fix_phi)}
        self.phi2_index = {p.name: i for i, p in enumerate(self.fix_phi2)}
        if len(self.phi_index) != len(self.fix_phi) or len(self.phi2_index) != len(
            self.fix_phi2
        ):
            raise FloerError("duplicate generator names")
        for p in self.fix_phi:
            if p.name not in self.phi2_index:
                raise FloerError(f"fixed point {p.name} missing from the square")
        m, m2 = len(self.fix_phi), len(self.fix_phi2)
        for mat, shape, label in [
            (self.rho, (m2, m2), "rho"),
            (self.d_phi, (m, m), "d_phi"),
            (self.d_phi2, (m2, m2), "d_phi2"),
        ]:
            if (mat.nrows, mat.ncols) != shape:
                raise FloerError(f"{label} has the wrong shape")
        for (i, s), mat in self.d_eq.items():
            if i < 1 or s not in SIGNS or (mat.nrows, mat.ncols) != (m2, m2):
                raise FloerError(f"bad d_eq block ({i},{s})")
        for (i, s), mat in self.pants.items():
            if i < 0 or s not in SIGNS or (mat.nrows, mat.ncols) != (m2, m * m):
                raise FloerError(f"bad pants block ({i},{s})")

    # -- helpers ---------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.fix_phi)

    @property
    def m2(self) -> int:
        return len(self.fix_phi2)

    def deq(self, i: int, s: int) -> BitMatrix:
        return self.d_eq.get((i, s)) or BitMatrix.zeros(self.m2, self.m2)

    def pants_block(self, i: int, s: int) -> BitMatrix:
        return self.pants.get((i, s)) or BitMatrix.zeros(self.m2, self.m * self.m)

    def pair_col(self, a: int, b: int) -> int:
        return a * self.m + b

    def phi2_of_phi(self, idx: int) -> int:
        return self.phi2_index[self.fix_phi[idx].name]

    def rho_perm(self):
        """rho as a permutation when it is one; else None."""
        perm = []
        for j in range(self.m2):
            img = [i for i in range(self.m2) if self.rho.get(i, j)]
            if len(img) != 1:
                return None
            perm.append(img[0])
        return perm

    def pair_swap_matrix(self) -> BitMatrix:
        m = self.m
        return BitMatrix.permutation([(j % m) * m + (j // m) for j in range(m * m)])

    def pair_differential(self) -> BitMatrix:
        """d (x) 1 + 1 (x) d on the pair space of fix_phi."""
        m = self.m
        pairs = []
        for a in range(m):
            for b in range(m):
                col = self.pair_col(a, b)
                for c in range(m):
                    if self.d_phi.get(c, a):
                        pairs.append((self.pair_col(c, b), col))
                    if self.d_phi.get(c, b):
                        pairs.append((self.pair_col(a, c), col))
        return BitMatrix.from_pairs(m * m, m * m, pairs)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def _degree_ok(mat: BitMatrix, degs_out, degs_in, shift: int) -> list:
    bad = []
    for j in range(mat.ncols):
        for i in range(mat.nrows):
            if mat.get(i, j) and (degs_out[i] - degs_in[j] - shift) % 2:
                bad.append((i, j))
    return bad


def validate(d: FloerDatum) -> ValidationReport:
    rep = ValidationReport()
    m, m2 = d.m, d.m2
    deg2 = [p.degree % 2 for p in d.fix_phi2]
    deg1 = [p.degree % 2 for p in d.fix_phi]
    act2 = [p.action for p in d.fix_phi2]
    act1 = [p.action for p in d.fix_phi]

    rep.add("d_phi squared", (d.d_phi @ d.d_phi).is_zero())
    rep.add("d_phi2 squared", (d.d_phi2 @ d.d_phi2).is_zero())
    rep.add(
        "d_phi degree",
        not _degree_ok(d.d_phi, deg1, deg1, 1),
        "entries must raise degree by 1 mod 2",
    )
    rep.add("d_phi2 degree", not _degree_ok(d.d_phi2, deg2, deg2, 1))

    # rho: involutive, degree 0, action-preserving, fixes exactly fix_phi
    rep.add("rho involutive", d.rho @ d.rho == BitMatrix.identity(m2))
    rep.add("rho degree", not _degree_ok(d.rho, deg2, deg2, 0))
    perm = d.rho_perm()
    if perm is None:
        rep.add("rho permutation", False, "rho is not a permutation matrix")
    else:
        ok_act = all(act2[perm[j]] == act2[j] for j in range(m2))
        rep.add("rho preserves action", ok_act)
        fixed = {j for j in range(m2) if perm[j] == j}
        image = {d.phi2_of_phi(i) for i in range(m)}
        rep.add(
            "rho fixed set",
            fixed == image,
            "fixed points of rho must be exactly the phi fixed points",
        )

    if d.mode == "exact":
        _validate_exact_actions(d, rep, act1, act2)
    else:
        _validate_monotone_actions(d, rep, act2)

    # zero-energy shape and degree of the equivariant terms
    ident = BitMatrix.identity(m2)
    for (i, s), mat in sorted(d.d_eq.items()):
        rep.add(
            f"d_eq[{i},{_s(s)}] degree",
            not _degree_ok(mat, deg2, deg2, 1 - i),
        )
    strict1p = d.deq(1, PLUS) + ident
    strict1m = d.deq(1, MINUS) + d.rho
    for label, mat, lvl in (
        ("d_eq[1,+] - id", strict1p, 1),
        ("d_eq[1,-] - rho", strict1m, 1),
    ):
        rep.add(
            f"{label} raises action",
            not _action_violations(d, mat, act2, act2, lvl),
        )
    for (i, s), mat in sorted(d.d_eq.items()):
        if i >= 2:
            rep.add(
                f"d_eq[{i},{_s(s)}] raises action",
                not _action_violations(d, mat, act2, act2, i),
            )

    # quadratic relations among the equivariant terms
    top = 2 * d.i_max
    for i in range(1, top + 1):
        for s in SIGNS:
            lhs = d.d_phi2 @ d.deq(i, s) + d.deq(i, s) @ d.d_phi2
            rhs = BitMatrix.zeros(m2, m2)
            for i1 in range(1, i):
                i2 = i - i1
                if s == PLUS:
                    rhs = rhs + d.deq(i1, PLUS) @ d.deq(i2, PLUS)
                    rhs = rhs + d.deq(i1, MINUS) @ d.deq(i2, MINUS)
                else:
                    rhs = rhs + d.deq(i1, MINUS) @ d.deq(i2, PLUS)
                    rhs = rhs + d.deq(i1, PLUS) @ d.deq(i2, MINUS)
            diff = lhs + rhs
            rep.add(
                f"d_eq relation ({i},{_s(s)})",
                diff.is_zero(),
                _name_entries(d, diff) if not diff.is_zero() else "",
            )

    _validate_pants(d, rep, deg1, deg2, act1, act2)
    return rep


def _s(s: int) -> str:
    return "+" if s == PLUS else "-"


def _name_entries(d: FloerDatum, mat: BitMatrix, pair_cols=False) -> str:
    names = []
    for j in range(mat.ncols):
        for i in range(mat.nrows):
            if mat.get(i, j):
                if pair_cols:
                    a, b = divmod(j, d.m)
                    src = f"{d.fix_phi[a].name}(x){d.fix_phi[b].name}"
                else:
                    src = d.fix_phi2[j].name
                names.append(f"{d.fix_phi2[i].name} <- {src}")
                if len(names) >= 6:
                    return "; ".join(names) + "; ..."
    return "; ".join(names)


def _action_violations(d, mat, act_out, act_in, level) -> list:
    """Entries that fail to strictly increase action (exact mode) or to
    respect the normalized-action bound (monotone mode, bound level - 1)."""
    bad = []
    for j in range(mat.ncols):
        for i in range(mat.nrows):
            if not mat.get(i, j):
                continue
            if d.mode == "exact":
                if not act_out[i] > act_in[j]:
                    bad.append((i, j))
            else:
                if not act_out[i] - act_in[j] > level - 1:
                    bad.append((i, j))
    return bad


def _validate_exact_actions(d, rep, act1, act2):
    eps = d.epsilon
    rep.add("epsilon positive", eps > 0)
    ok_gap1 = all(
        not (0 < a - b < 2 * eps) for a in act1 for b in act1
    )
    ok_gap2 = all(
        not (0 < a - b < 2 * eps) for a in act2 for b in act2
    )
    rep.add("phi action gaps", ok_gap1)
    rep.add("phi2 action gaps", ok_gap2)
    double = all(
        act2[d.phi2_of_phi(i)] == 2 * act1[i] for i in range(d.m)
    )
    rep.add("square action doubling", double)
    rep.add(
        "d_phi raises action",
        not _action_violations(d, d.d_phi, act1, act1, 0),
    )
    rep.add(
        "d_phi2 raises action",
        not _action_violations(d, d.d_phi2, act2, act2, 0),
    )


def _validate_monotone_actions(d, rep, act2):
    rep.add(
        "d_phi2 normalized action bound",
        not _action_violations(d, d.d_phi2, act2, act2, 0),
        "entries must decrease the normalized action by strictly less than 1",
    )


def _validate_pants(d, rep, deg1, deg2, act1, act2):
    m, m2 = d.m, d.m2
    rep.add("pants (0,-) vanishes", d.pants_block(0, MINUS).is_zero())
    # degrees: |p^{i}(a,b)| = |a| + |b| - i mod 2
    for (i, s), mat in sorted(d.pants.items()):
        bad = []
        for col in range(m * m):
            a, b = divmod(col, m)
            for row in range(m2):
                if mat.get(row, col) and (deg2[row] - deg1[a] - deg1[b] + i) % 2:
                    bad.append((row, col))
        rep.add(f"pants[{i},{_s(s)}] degree", not bad)
    if d.mode == "exact":
        # action: never decreases, strictly increases off the diagonal triples
        for (i, s), mat in sorted(d.pants.items()):
            bad = []
            for col in range(m * m):
                a, b = divmod(col, m)
                lower = act1[a] + act1[b]
                for row in range(m2):
                    if not mat.get(row, col):
                        continue
                    diagonal = (
                        a == b and d.phi2_of_phi(a) == row
                    )
                    if act2[row] < lower or (act2[row] == lower and not diagonal):
                        bad.append((row, col))
            rep.add(f"pants[{i},{_s(s)}] action", not bad)
    # product relations
    swap = d.pair_swap_matrix()
    dpair = d.pair_differential()
    top = 2 * d.i_max
    for i in range(0, top + 1):
        for s in SIGNS:
            lhs = d.d_phi2 @ d.pants_block(i, s) + d.pants_block(i, s) @ dpair
            rhs = BitMatrix.zeros(m2, m * m)
            if i >= 1:
                rhs = rhs + d.pants_block(i - 1, s)
                rhs = rhs + d.pants_block(i - 1, -s) @ swap
                for i1 in range(1, i + 1):
                    i2 = i - i1
                    if s == PLUS:
                        rhs = rhs + d.deq(i1, PLUS) @ d.pants_block(i2, PLUS)
                        rhs = rhs + d.deq(i1, MINUS) @ d.pants_block(i2, MINUS)
                    else:
                        rhs = rhs + d.deq(i1, PLUS) @ d.pants_block(i2, MINUS)
                        rhs = rhs + d.deq(i1, MINUS) @ d.pants_block(i2, PLUS)
            diff = lhs + rhs
            rep.add(
                f"pants relation ({i},{_s(s)})",
                diff.is_zero(),
                _name_entries(d, diff, pair_cols=True) if not diff.is_zero() else "",
            )
    # Krein data: the action-preserving diagonal is exactly h^{n - kappa}
    if any(p.kappa is not None for p in d.fix_phi):
        _validate_krein(d, rep, deg1, deg2, act1, act2)


def _validate_krein(d, rep, deg1, deg2, act1, act2):
    m = d.m
    # non-coincidence of actions away from the diagonal triples
    bad = []
    for a in range(m):
        for b in range(m):
            for y in range(d.m2):
                if act2[y] == act1[a] + act1[b]:
                    if not (a == b and d.phi2_of_phi(a) == y):
                        bad.append((y, a, b))
    rep.add("actions non-coincident", not bad)
    for idx, p in enumerate(d.fix_phi):
        if p.kappa is None:
            rep.add(f"kappa present for {p.name}", False, "missing Krein index")
            continue
        s = p.detsign
        rep.add(
            f"detsign/degree consistency {p.name}",
            s in (1, -1) and s == (-1) ** deg1[idx],
        )
        bound = d.n if s == 1 else d.n - 1
        rep.add(f"kappa bound {p.name}", abs(p.kappa) <= bound)
        y = d.phi2_of_phi(idx)
        rep.add(
            f"kappa parity {p.name}",
            (p.kappa - d.n - deg2[y]) % 2 == 0,
        )
        expo = d.n - p.kappa
        rep.add(f"diagonal exponent in range {p.name}", 0 <= expo <= d.i_max)
        col = d.pair_col(idx, idx)
        for i in range(0, d.i_max + 1):
            total = d.pants_block(i, PLUS).get(y, col) ^ d.pants_block(
                i, MINUS
            ).get(y, col)
            want = 1 if i == expo else 0
            if total != want:
                rep.add(
                    f"diagonal coefficient {p.name}",
                    False,
                    f"h^{i} coefficient is {total}, expected {want}"
                    f" (paired constants must agree)",
                )
                break
        else:
            rep.add(f"diagonal coefficient {p.name}", True)


# ---------------------------------------------------------------------------
# derived complexes and maps


def equivariant_complex(d: FloerDatum) -> GradedComplex:
    """CF(phi^2)[h] with differential d_phi2 + sum h^i (d_eq^{i,+} + d_eq^{i,-})."""
    m2 = d.m2
    mat = [[0] * m2 for _ in range(m2)]
    for j in range(m2):
        for i in range(m2):
            bits = d.d_phi2.get(i, j)
            for lvl in range(1, d.i_max + 1):
                bit = d.deq(lvl, PLUS).get(i, j) ^ d.deq(lvl, MINUS).get(i, j)
                bits |= bit << lvl
            mat[i][j] = HPoly(bits)
    gens = [Generator(p.name, p.degree % 2, p.action) for p in d.fix_phi2]
    out = GradedComplex("GF2[h]", gens, mat, grading="Z2")
    if not out.d_squared_is_zero():
        raise FloerError("equivariant differential does not square to zero")
    return out


def cf_phi_complex(d: FloerDatum) -> GradedComplex:
    gens = [Generator(p.name, p.degree % 2, p.action) for p in d.fix_phi]
    return GradedComplex("GF2", gens, d.d_phi, grading="Z2")


def square_borel_source(d: FloerDatum):
    """Borel complex of CF(phi) (x) CF(phi) with the swap involution."""
    from .complexes import tensor_square_swap

    sq, swap = tensor_square_swap(cf_phi_complex(d))
    w = InvolutiveComplex(sq, swap)
    return borel_complex(w)


def pants_total_matrix(d: FloerDatum):
    """sum_i h^i (p^{i,+} + p^{i,-}) as an HPoly matrix (rows phi2, cols pairs)."""
    m, m2 = d.m, d.m2
    out = [[0] * (m * m) for _ in range(m2)]
    for j in range(m * m):
        for i in range(m2):
            bits = 0
            for lvl in range(0, d.i_max + 1):
                bit = d.pants_block(lvl, PLUS).get(i, j) ^ d.pants_block(
                    lvl, MINUS
                ).get(i, j)
                bits |= bit << lvl
            out[i][j] = HPoly(bits)
    return out


def pants_chain_map(d: FloerDatum) -> ChainMap:
    src = square_borel_source(d)
    tgt = equivariant_complex(d)
    f = ChainMap(src, tgt, pants_total_matrix(d))
    return f


def hf_poly_invariants(d: FloerDatum) -> PidCohomology:
    return pid_cohomology(equivariant_complex(d).diff)


def hf_eq_invariants(d: FloerDatum) -> LocalCohomology:
    return local_cohomology(equivariant_complex(d).diff)


def poly_eq_consistency(d: FloerDatum) -> bool:
    """Completion kills the unit-coprime torsion: free ranks agree, and the
    h-power parts of the PID factors are the local exponents."""
    poly = hf_poly_invariants(d)
    loc = hf_eq_invariants(d)
    expected = sorted(
        v for v in (int(f.valuation()) for f in poly.torsion_factors) if v > 0
    )
    return poly.free_rank == loc.free_rank and expected == sorted(
        loc.torsion_exponents
    )


@dataclass
class LocalizedReport:
    chain_map: bool
    bijective: bool
    dim_hf_phi: int
    dim_source_localized: int
    dim_target_localized: int
    e0_diagonal: bool | None
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return (
            self.chain_map
            and self.bijective
            and self.dim_hf_phi == self.dim_target_localized
            and self.e0_diagonal is not False
        )


def localized_check(d: FloerDatum) -> LocalizedReport:
    """Desk-scale instance of the localization theorem.

    Extends the product chain map to GF(2)(h) scalars, compares cohomology
    dimensions with dim HF(phi), checks bijectivity of the induced map, and
    verifies that the action-preserving part of the product is exactly the
    diagonal x (x) x -> h^{n - kappa(x)} x.
    """
    failures = []
    f = pants_chain_map(d)
    chain_ok = f.commutes()
    if not chain_ok:
        failures.append("product is not a chain map; offending slots: " + str(f.failure_entries()[:6]))
    from .fieldlin import RatOps

    src = f.source.to_field()
    tgt = f.target.to_field()
    fmat = [[HRat.from_poly(e) for e in row] for row in f.matrix]
    ops = RatOps
    ker_s = ops.kernel(src.diff)
    im_s, piv_s = ops.echelon(ops.columns(src.diff))
    basis_s = quotient_reps(ops, ker_s, im_s, piv_s)
    dim_s = len(basis_s)
    ker_t = ops.kernel(tgt.diff)
    im_t, piv_t = ops.echelon(ops.columns(tgt.diff))
    dim_t = len(ker_t) - len(im_t)
    bij = False
    if chain_ok:
        images = [ops.matvec(fmat, v) for v in basis_s]
        joint, _ = ops.echelon(list(im_t) + images)
        inj = len(joint) == len(im_t) + dim_s
        bij = inj and dim_s == dim_t
        if not bij:
            failures.append(
                f"localized map not bijective: dims {dim_s} -> {dim_t}, injective={inj}"
            )
    # dim HF(phi) over GF(2)
    dphi = d.d_phi
    dim_hf = d.m - 2 * dphi.rank()
    # E0 criterion when Krein data is present
    e0 = None
    if any(p.kappa is not None for p in d.fix_phi):
        e0 = _e0_diagonal_ok(d, failures)
    return LocalizedReport(chain_ok, bij, dim_hf, dim_s, dim_t, e0, failures)


def _e0_diagonal_ok(d: FloerDatum, failures) -> bool:
    act1 = [p.action for p in d.fix_phi]
    act2 = [p.action for p in d.fix_phi2]
    ok = True
    for a in range(d.m):
        for b in range(d.m):
            col = d.pair_col(a, b)
            for y in range(d.m2):
                preserving = act2[y] == act1[a] + act1[b]
                if not preserving:
                    continue
                expected_bits = 0
                if a == b and d.phi2_of_phi(a) == y:
                    kappa = d.fix_phi[a].kappa
                    if kappa is None:
                        continue
                    expected_bits = 1 << (d.n - kappa)
                bits = 0
                for lvl in range(0, d.i_max + 1):
                    bit = d.pants_block(lvl, PLUS).get(y, col) ^ d.pants_block(
                        lvl, MINUS
                    ).get(y, col)
                    bits |= bit << lvl
                if bits != expected_bits:
                    ok = False
                    failures.append(
                        f"action-preserving product at {d.fix_phi2[y].name} <- "
                        f"{d.fix_phi[a].name}(x){d.fix_phi[b].name}: "
                        f"{HPoly(bits)} != {HPoly(expected_bits)}"
                    )
    return ok


@dataclass
class SmithReport:
    precondition: bool
    invariant_dim: int
    generator_count: int
    free_rank: int
    localized_dim: int
    dim_hf_phi: int

    @property
    def inequalities_hold(self) -> bool:
        return (
            self.precondition
            and self.invariant_dim >= self.generator_count >= self.free_rank
            and self.free_rank == self.localized_dim
            and self.invariant_dim >= self.dim_hf_phi
        )


def smith_check(d: FloerDatum) -> SmithReport:
    """dim H(phi^2)^iota >= generators >= free rank = localized dim; and the
    Smith inequality dim H(phi^2)^iota >= dim H(phi)."""
    d1m = d.deq(1, MINUS)
    chain = (d.d_phi2 @ d1m) == (d1m @ d.d_phi2)
    if not chain:
        return SmithReport(False, 0, 0, 0, 0, 0)
    gf = Gf2Ops
    ker = d.d_phi2.kernel_basis()
    im, piv = span_of(gf.columns(d.d_phi2))
    basis = quotient_reps(gf, ker, im, piv)
    mdim = len(basis)
    # induced involution from d_eq^{1,-}
    cols = []
    for b in basis:
        v = gf.reduce(d1m.mul_vec(b), im, piv)
        red_basis = [gf.reduce(x, im, piv) for x in basis]
        from .equivariant import _express_in

        cols.append(_express_in(gf, v, red_basis))
    iota_h = BitMatrix(
        [sum(cols[j][i] << j for j in range(mdim)) for i in range(mdim)], mdim
    )
    fixed = (iota_h + BitMatrix.identity(mdim)).kernel_basis() if mdim else []
    loc = hf_eq_invariants(d)
    eqc = equivariant_complex(d)
    localized = d.m2 - 2 * rank_over_fraction_field(eqc.diff)
    dim_hf = d.m - 2 * d.d_phi.rank()
    return SmithReport(
        True,
        len(fixed),
        loc.generator_count,
        loc.free_rank,
        localized,
        dim_hf,
    )


# ---------------------------------------------------------------------------
# homological perturbation transfer (monotone / fixed-point-free case)


@dataclass
class TransferReport:
    side_conditions: dict
    d_d: BitMatrix
    dim_h: int
    orbit_count: int
    plus_names: list

    @property
    def bound_holds(self) -> bool:
        return self.dim_h <= self.orbit_count

    @property
    def all_side_conditions(self) -> bool:
        return all(self.side_conditions.values())


def transfer(d: FloerDatum, plus_names: list | None = None) -> TransferReport:
    """Small model on one generator per free orbit, via the explicit
    transfer formulas of the perturbation formalism."""
    perm = d.rho_perm()
    if perm is None:
        raise FloerError("transfer needs rho to be a permutation")
    if any(perm[j] == j for j in range(d.m2)):
        raise FloerError("transfer requires a free involution on the square")
    # choose one representative per orbit
    if plus_names is None:
        plus = []
        seen = set()
        for j in range(d.m2):
            if j in seen:
                continue
            plus.append(j)
            seen.add(j)
            seen.add(perm[j])
    else:
        plus = [d.phi2_index[nm] for nm in plus_names]
        if sorted(set(plus) | {perm[j] for j in plus}) != list(range(d.m2)):
            raise FloerError("plus set is not a full set of orbit representatives")
    p_count = len(plus)
    plus_pos = {j: k for k, j in enumerate(plus)}

    # total equivariant differential and the zero-energy part delta = h(id+rho)
    eq = equivariant_complex(d).diff
    delta = [[HPoly(0)] * d.m2 for _ in range(d.m2)]
    for j in range(d.m2):
        delta[j][j] = delta[j][j] + HPoly(2)
        delta[perm[j]][j] = delta[perm[j]][j] + HPoly(2)
    tmat = [[eq[i][j] + delta[i][j] for j in range(d.m2)] for i in range(d.m2)]

    def apply_t(vec):
        return [
            sum(
                (tmat[i][j] * vec[j] for j in range(d.m2) if vec[j]),
                HPoly(0),
            )
            for i in range(d.m2)
        ]

    def apply_delta(vec):
        return [
            sum(
                (delta[i][j] * vec[j] for j in range(d.m2) if vec[j]),
                HPoly(0),
            )
            for i in range(d.m2)
        ]

    def incl(bits):
        vec = [HPoly(0)] * d.m2
        for k in range(p_count):
            if (bits >> k) & 1:
                j = plus[k]
                vec[j] = vec[j] + HPoly(1)
                vec[perm[j]] = vec[perm[j]] + HPoly(1)
        return vec

    def proj(vec):
        bits = 0
        for k, j in enumerate(plus):
            if vec[j].bits & 1:
                bits |= 1 << k
        return bits

    def homotopy(vec):
        out = [HPoly(0)] * d.m2
        for j in plus:
            c = vec[j].bits
            if c >> 1:
                out[perm[j]] = out[perm[j]] + HPoly(c >> 1)
        return out

    # side conditions, verified on h-degree <= 3 slices of every generator
    side = {}
    tests = []
    for j in range(d.m2):
        for k in range(4):
            vec = [HPoly(0)] * d.m2
            vec[j] = HPoly(1 << k)
            tests.append(vec)
    ok_pi = all(proj(incl(1 << k)) == 1 << k for k in range(p_count))
    side["p.i = id"] = ok_pi
    side["p.k = 0"] = all(proj(homotopy(v)) == 0 for v in tests)
    side["k.i = 0"] = all(
        not any(homotopy(incl(1 << k))) for k in range(p_count)
    )
    side["k.k = 0"] = all(not any(homotopy(homotopy(v))) for v in tests)
    side["delta.i = 0"] = all(
        not any(apply_delta(incl(1 << k))) for k in range(p_count)
    )
    side["p.delta = 0"] = all(proj(apply_delta(v)) == 0 for v in tests)

    def ip(vec):
        return incl(proj(vec))

    ok_homotopy = True
    for v in tests:
        lhs = ip(v)
        rhs = list(v)
        dk = apply_delta(homotopy(v))
        kd = homotopy(apply_delta(v))
        for i in range(d.m2):
            rhs[i] = rhs[i] + dk[i] + kd[i]
        if lhs != rhs:
            ok_homotopy = False
            break
    side["i.p = id + delta.k + k.delta"] = ok_homotopy

    # geometric series for the transferred differential
    spread = 1
    acts = [p.action for p in d.fix_phi2]
    if acts:
        spread = max(1, int(max(acts) - min(acts)) + 1)
    guard = d.m2 * (d.i_max + 1) * spread + 8
    rows = [0] * p_count
    for k in range(p_count):
        vec = apply_t(incl(1 << k))
        out = proj(vec)
        steps = 0
        while any(vec):
            vec = apply_t(homotopy(vec))
            out ^= proj(vec)
            steps += 1
            if steps > guard:
                raise FloerError(
                    "transfer series failed to terminate: nilpotence violated"
                )
        for i in range(p_count):
            if (out >> i) & 1:
                rows[i] |= 1 << k
    d_d = BitMatrix(rows, p_count)
    if not (d_d @ d_d).is_zero():
        raise FloerError("transferred differential does not square to zero")
    dim_h = p_count - 2 * d_d.rank()
    return TransferReport(
        side_conditions=side,
        d_d=d_d,
        dim_h=dim_h,
        orbit_count=p_count,
        plus_names=[d.fix_phi2[j].name for j in plus],
    )


# ---------------------------------------------------------------------------
# spectral sequence cross-checks


def h_adic_e2_check(d: FloerDatum, p_max: int = 3) -> dict:
    """E2 of the h-adic filtration vs group cohomology of (HF(phi^2), iota)."""
    from .specseq import h_adic_pages

    eq = equivariant_complex(d)
    pages, pmax = h_adic_pages(eq, p_max=p_max, r_max=3)
    e2 = [pages.pages[2][p]["total"] for p in range(pmax + 1)]
    # independent side: H(CF(phi^2)) with the involution induced by d_eq^{1,-}
    gf = Gf2Ops
    ker = d.d_phi2.kernel_basis()
    im, piv = span_of(gf.columns(d.d_phi2))
    basis = quotient_reps(gf, ker, im, piv)
    mdim = len(basis)
    from .equivariant import _express_in

    red_basis = [gf.reduce(x, im, piv) for x in basis]
    cols = [
        _express_in(gf, gf.reduce(d.deq(1, MINUS).mul_vec(b), im, piv), red_basis)
        for b in basis
    ]
    iota_h = BitMatrix(
        [sum(cols[j][i] << j for j in range(mdim)) for i in range(mdim)], mdim
    )
    one_plus = iota_h + BitMatrix.identity(mdim)
    kdim = len(one_plus.kernel_basis()) if mdim else 0
    rank = one_plus.rank() if mdim else 0
    expected = [kdim] + [kdim - rank] * p_max
    return {
        "e2": e2,
        "expected": expected,
        "match": e2 == expected,
    }


def tate_action_e1_check(d: FloerDatum) -> dict:
    """Over GF(2)(h), the action-filtration E1 page has dim = #fix(phi)."""
    from .specseq import Filtration, spectral_sequence

    eq = equivariant_complex(d).to_field()
    acts = sorted({p.action for p in d.fix_phi2})
    rank_of = {a: i for i, a in enumerate(acts)}
    weights = tuple(rank_of[p.action] for p in d.fix_phi2)
    pages = spectral_sequence(eq, Filtration(weights))
    e1_total = sum(pages.pages[1][p]["total"] for p in pages.pages[1])
    return {
        "e1_total": e1_total,
        "fix_phi": d.m,
        "match": e1_total == d.m,
        "converges": pages.converges,
    }
