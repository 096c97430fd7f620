"""Finite graded chain complexes over GF(2), GF(2)[h], GF(2)(h).

Grading conventions: the differential has degree +1 and the formal variable
h has degree 1, so a matrix entry with an h^k monomial connects generators
whose degrees differ by 1 - k.  Action weights, when present, are exact
rationals; in strict mode every off-diagonal entry must strictly increase
the action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .fieldlin import Gf2Ops, RatOps
from .gf2 import BitMatrix
from .homology import pid_cohomology, local_cohomology
from .hpoly import HPoly, HRat

__all__ = [
    "Generator",
    "GradedComplex",
    "ChainMap",
    "ComplexError",
    "check_complex",
    "cohomology",
    "tensor_square_swap",
    "quasi_iso_check",
    "parse_complex",
    "serialize_complex",
]

RINGS = ("GF2", "GF2[h]", "GF2(h)")
GRADINGS = ("Z", "Z2", "none")


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int | None = None
    action: Fraction | None = None


class GradedComplex:
    """Finite complex of named generators with a differential matrix.

    The differential is stored column-wise: entry (i, j) is the coefficient
    of generator i in d(generator j).
    """

    def __init__(self, ring, generators, diff, grading=None):
        if ring not in RINGS:
            raise ComplexError(f"unknown ring {ring!r}")
        self.ring = ring
        self.generators = list(generators)
        n = len(self.generators)
        if grading is None:
            grading = "none" if ring == "GF2(h)" else (
                "Z" if all(g.degree is not None for g in self.generators) else "none"
            )
        if grading not in GRADINGS:
            raise ComplexError(f"unknown grading {grading!r}")
        if ring == "GF2(h)":
            grading = "none"
        self.grading = grading
        if grading == "Z2":
            self.generators = [
                Generator(g.name, None if g.degree is None else g.degree % 2, g.action)
                for g in self.generators
            ]
        self.diff = self._coerce_matrix(diff, n)
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        if len(self.index) != n:
            raise ComplexError("duplicate generator names")

    def _coerce_matrix(self, diff, n):
        if self.ring == "GF2":
            if isinstance(diff, BitMatrix):
                m = diff
            else:
                m = BitMatrix.from_entries(
                    [[int(bool(e) if not isinstance(e, int) else e & 1) for e in row] for row in diff]
                )
            if m.nrows != n or m.ncols != n:
                raise ComplexError("differential shape mismatch")
            return m
        rows = []
        for row in diff:
            out = []
            for e in row:
                if self.ring == "GF2[h]":
                    if isinstance(e, HPoly):
                        out.append(e)
                    elif isinstance(e, int):
                        out.append(HPoly(e & 1))
                    else:
                        raise ComplexError(f"bad GF2[h] entry {e!r}")
                else:
                    if isinstance(e, HRat):
                        out.append(e)
                    elif isinstance(e, HPoly):
                        out.append(HRat.from_poly(e))
                    elif isinstance(e, int):
                        out.append(HRat(e & 1))
                    else:
                        raise ComplexError(f"bad GF2(h) entry {e!r}")
            rows.append(out)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ComplexError("differential shape mismatch")
        return rows

    # -- basic accessors -------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.generators)

    def entry(self, i: int, j: int):
        if self.ring == "GF2":
            return self.diff.get(i, j)
        return self.diff[i][j]

    def degrees(self):
        return [g.degree for g in self.generators]

    def actions(self):
        return [g.action for g in self.generators]

    def field_ops(self):
        if self.ring == "GF2":
            return Gf2Ops
        if self.ring == "GF2(h)":
            return RatOps
        raise ComplexError("GF2[h] is not a field; use module invariants")

    def to_field(self) -> "GradedComplex":
        """Extension of scalars GF2[h] -> GF2(h) (grading is dropped)."""
        if self.ring != "GF2[h]":
            raise ComplexError("to_field expects GF2[h] scalars")
        gens = [Generator(g.name, None, g.action) for g in self.generators]
        return GradedComplex(
            "GF2(h)",
            gens,
            [[HRat.from_poly(e) for e in row] for row in self.diff],
            grading="none",
        )

    def d_squared_is_zero(self) -> bool:
        if self.ring == "GF2":
            return (self.diff @ self.diff).is_zero()
        from .smith import mat_mul

        zero = HPoly(0) if self.ring == "GF2[h]" else HRat(0)
        sq = mat_mul(self.diff, self.diff, zero)
        return all(not e for row in sq for e in row)

    def monomials(self, i: int, j: int):
        """Entry (i, j) as a list of (h-power, 1) pairs."""
        e = self.entry(i, j)
        if self.ring == "GF2":
            return [(0, 1)] if e else []
        if self.ring == "GF2[h]":
            bits = e.bits
        else:
            if not e:
                return []
            if not e.is_polynomial():
                return None  # genuinely rational: no monomial decomposition
            bits = e.num
        out = []
        k = 0
        while bits:
            if bits & 1:
                out.append((k, 1))
            bits >>= 1
            k += 1
        return out


@dataclass
class ComplexReport:
    d_squared_zero: bool
    grading_violations: list = field(default_factory=list)
    action_violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            self.d_squared_zero
            and not self.grading_violations
            and not self.action_violations
        )


def check_complex(c: GradedComplex, strict_actions: bool = False) -> ComplexReport:
    report = ComplexReport(d_squared_zero=c.d_squared_is_zero())
    n = c.dim
    for j in range(n):
        gj = c.generators[j]
        for i in range(n):
            mono = c.monomials(i, j)
            if not mono:
                continue
            gi = c.generators[i]
            if c.grading != "none":
                for k, _ in mono:
                    want = gj.degree + 1 - k
                    have = gi.degree
                    if c.grading == "Z2":
                        ok = (want - have) % 2 == 0
                    else:
                        ok = want == have
                    if not ok:
                        report.grading_violations.append(
                            f"d[{gi.name},{gj.name}] h^{k}: degree {have} != {gj.degree}+1-{k}"
                        )
            if gj.action is not None and gi.action is not None and i != j:
                if strict_actions:
                    if not gi.action > gj.action:
                        report.action_violations.append(
                            f"d[{gi.name},{gj.name}]: action {gi.action} not > {gj.action}"
                        )
                elif gi.action < gj.action:
                    report.action_violations.append(
                        f"d[{gi.name},{gj.name}]: action {gi.action} < {gj.action}"
                    )
    return report


# ---------------------------------------------------------------------------
# cohomology


def _field_kernel_image(c: GradedComplex):
    ops = c.field_ops()
    ker = ops.kernel(c.diff)
    im_raw = ops.columns(c.diff)
    im, im_piv = ops.echelon(im_raw)
    return ops, ker, im, im_piv


def cohomology(c: GradedComplex):
    """Per-degree dims over a field; module invariants over GF(2)[h].

    Over GF(2)[h] the answer is the ungraded cohomology module (h shifts the
    degree, so the graded pieces are not h-stable): a PidCohomology.
    Over a field: dict degree -> dim (or {'total': dim} when ungraded).
    """
    if c.ring == "GF2[h]":
        return pid_cohomology(c.diff)
    ops, ker, im, im_piv = _field_kernel_image(c)
    total = len(ker) - len(im)
    if c.grading == "none":
        return {"total": total}
    out: dict = {}
    ker_ech, ker_piv = ops.echelon(ker)
    for label, vectors in (("ker", ker_ech), ("im", im)):
        for v in vectors:
            degs = {c.generators[i].degree for i in ops.support(v)}
            if len(degs) != 1:
                raise ComplexError("non-homogeneous elimination result")
            (deg,) = degs
            out[deg] = out.get(deg, 0) + (1 if label == "ker" else -1)
    return {d: v for d, v in sorted(out.items()) if v} if out else {}


def local_module_invariants(c: GradedComplex):
    """Cohomology of a GF2[h] complex over the localization at (h)."""
    if c.ring != "GF2[h]":
        raise ComplexError("expected GF2[h] scalars")
    return local_cohomology(c.diff)


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMap:
    source: GradedComplex
    target: GradedComplex
    matrix: object  # BitMatrix or list-of-lists over the common scalar ring
    degree: int = 0

    def commutes(self) -> bool:
        if self.source.ring != self.target.ring:
            raise ComplexError("chain map across different rings")
        if self.source.ring == "GF2":
            return (self.matrix @ self.source.diff) == (self.target.diff @ self.matrix)
        from .smith import mat_mul

        zero = HPoly(0) if self.source.ring == "GF2[h]" else HRat(0)
        lhs = mat_mul(self.matrix, self.source.diff, zero)
        rhs = mat_mul(self.target.diff, self.matrix, zero)
        return lhs == rhs

    def failure_entries(self):
        if self.source.ring == "GF2":
            delta = (self.matrix @ self.source.diff) + (self.target.diff @ self.matrix)
            return [
                (i, j)
                for i in range(delta.nrows)
                for j in range(delta.ncols)
                if delta.get(i, j)
            ]
        from .smith import mat_mul

        zero = HPoly(0) if self.source.ring == "GF2[h]" else HRat(0)
        lhs = mat_mul(self.matrix, self.source.diff, zero)
        rhs = mat_mul(self.target.diff, self.matrix, zero)
        return [
            (i, j)
            for i in range(len(lhs))
            for j in range(len(lhs[0]))
            if lhs[i][j] + rhs[i][j]
        ]


def mapping_cone(f: ChainMap) -> GradedComplex:
    """Cone of f; acyclic iff f is a quasi-isomorphism (char 2: no signs)."""
    s, t = f.source, f.target
    ring = s.ring
    gens = [
        Generator(f"cone.{g.name}", None if g.degree is None else g.degree + 1, g.action)
        for g in s.generators
    ] + list(t.generators)
    ns, nt = s.dim, t.dim
    n = ns + nt
    if ring == "GF2":
        rows = []
        for i in range(ns):
            rows.append(s.diff.rows[i])
        for i in range(nt):
            fr = f.matrix.rows[i] if isinstance(f.matrix, BitMatrix) else 0
            rows.append(fr | (t.diff.rows[i] << ns))
        return GradedComplex(ring, gens, BitMatrix(rows, n), grading=s.grading)
    zero = HPoly(0) if ring == "GF2[h]" else HRat(0)
    m = [[zero] * n for _ in range(n)]
    for i in range(ns):
        for j in range(ns):
            m[i][j] = s.diff[i][j]
    for i in range(nt):
        for j in range(ns):
            m[ns + i][j] = f.matrix[i][j]
        for j in range(nt):
            m[ns + i][ns + j] = t.diff[i][j]
    return GradedComplex(ring, gens, m, grading=s.grading)


def quasi_iso_check(f: ChainMap):
    """(verdict, report dict).  Field scalars use induced-map ranks; GF2[h]
    uses acyclicity of the cone over the localization at (h)."""
    if not f.commutes():
        return False, {"chain_map": False}
    ring = f.source.ring
    if ring == "GF2[h]":
        cone = mapping_cone(f)
        pres = local_cohomology(cone.diff)
        verdict = pres.is_zero()
        return verdict, {
            "chain_map": True,
            "method": "cone-local",
            "cone_free_rank": pres.free_rank,
            "cone_torsion": list(pres.torsion_exponents),
        }
    ops = f.source.field_ops()
    ker_s = ops.kernel(f.source.diff)
    im_s, piv_s = ops.echelon(ops.columns(f.source.diff))
    from .fieldlin import quotient_reps

    h_basis = quotient_reps(ops, ker_s, im_s, piv_s)
    dim_hs = len(h_basis)
    ker_t = ops.kernel(f.target.diff)
    im_t, piv_t = ops.echelon(ops.columns(f.target.diff))
    dim_ht = len(ker_t) - len(im_t)
    images = [ops.matvec(f.matrix, v) for v in h_basis]
    joint, _ = ops.echelon(list(im_t) + images)
    injective = len(joint) == len(im_t) + dim_hs
    verdict = injective and dim_hs == dim_ht
    return verdict, {
        "chain_map": True,
        "method": "induced-ranks",
        "dim_H_source": dim_hs,
        "dim_H_target": dim_ht,
        "injective": injective,
    }


# ---------------------------------------------------------------------------
# tensor square with the exchange involution


def tensor_square_swap(v: GradedComplex):
    """(V (x) V with Leibniz differential, swap involution as a BitMatrix)."""
    if v.ring != "GF2":
        raise ComplexError("tensor square is defined for GF2 complexes")
    n = v.dim
    gens = []
    for a in range(n):
        for b in range(n):
            ga, gb = v.generators[a], v.generators[b]
            deg = None
            if ga.degree is not None and gb.degree is not None:
                deg = ga.degree + gb.degree
                if v.grading == "Z2":
                    deg %= 2
            act = None
            if ga.action is not None and gb.action is not None:
                act = ga.action + gb.action
            gens.append(Generator(f"{ga.name}*{gb.name}", deg, act))
    pairs = []
    for a in range(n):
        for b in range(n):
            col = a * n + b
            # d(a (x) b) = da (x) b + a (x) db
            for i in range(n):
                if v.diff.get(i, a):
                    pairs.append((i * n + b, col))
                if v.diff.get(i, b):
                    pairs.append((a * n + i, col))
    dmat = BitMatrix.from_pairs(n * n, n * n, pairs)
    swap = BitMatrix.permutation([ (j % n) * n + (j // n) for j in range(n * n)])
    sq = GradedComplex("GF2", gens, dmat, grading=v.grading)
    return sq, swap


# ---------------------------------------------------------------------------
# text format
#
#   ring GF2[h]
#   grading Z2
#   gen NAME DEG ACTION      (DEG and ACTION may be '-')
#   d TARGET SOURCE COEFF
#   iota TARGET SOURCE COEFF (optional involution matrix)
#   iota-fix NAME / iota-swap NAME NAME  (permutation shorthand)


def _fraction_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def parse_complex(text: str):
    """Returns (GradedComplex, involution BitMatrix or None)."""
    ring = None
    grading = "Z"
    gens: list[Generator] = []
    d_entries: list[tuple[str, str, str]] = []
    iota_entries: list[tuple[str, str]] = []
    iota_perm: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "ring":
                ring = toks[1]
            elif toks[0] == "grading":
                grading = toks[1]
            elif toks[0] == "gen":
                name = toks[1]
                deg = None if toks[2] == "-" else int(toks[2])
                act = None
                if len(toks) > 3 and toks[3] != "-":
                    act = Fraction(toks[3])
                gens.append(Generator(name, deg, act))
            elif toks[0] == "d":
                d_entries.append((toks[1], toks[2], toks[3] if len(toks) > 3 else "1"))
            elif toks[0] == "iota":
                iota_entries.append((toks[1], toks[2]))
            elif toks[0] == "iota-fix":
                iota_perm.append((toks[1], toks[1]))
            elif toks[0] == "iota-swap":
                iota_perm.append((toks[1], toks[2]))
                iota_perm.append((toks[2], toks[1]))
            else:
                raise ComplexError(f"line {lineno}: unknown directive {toks[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ComplexError(f"line {lineno}: {exc}") from exc
    if ring is None:
        raise ComplexError("missing 'ring' directive")
    n = len(gens)
    index = {g.name: i for i, g in enumerate(gens)}

    def look(name, lineno_hint=""):
        if name not in index:
            raise ComplexError(f"unknown generator {name!r}{lineno_hint}")
        return index[name]

    if ring == "GF2":
        pairs = []
        for tgt, src, coeff in d_entries:
            if coeff not in ("0", "1"):
                raise ComplexError(f"GF2 coefficient must be 0/1, got {coeff!r}")
            if coeff == "1":
                pairs.append((look(tgt), look(src)))
        diff = BitMatrix.from_pairs(n, n, pairs)
    else:
        zero = HPoly(0) if ring == "GF2[h]" else HRat(0)
        m = [[zero] * n for _ in range(n)]
        for tgt, src, coeff in d_entries:
            val = HPoly.parse(coeff) if ring == "GF2[h]" else HRat.parse(coeff)
            m[look(tgt)][look(src)] = m[look(tgt)][look(src)] + val
        diff = m
    cx = GradedComplex(ring, gens, diff, grading=grading)
    iota = None
    if iota_entries or iota_perm:
        pairs = [(look(t), look(s)) for t, s in iota_entries]
        pairs += [(look(t), look(s)) for t, s in iota_perm]
        iota = BitMatrix.from_pairs(n, n, pairs)
    return cx, iota


def serialize_complex(c: GradedComplex, iota: BitMatrix | None = None) -> str:
    lines = [f"ring {c.ring}", f"grading {c.grading}"]
    for g in c.generators:
        deg = "-" if g.degree is None else str(g.degree)
        act = "-" if g.action is None else _fraction_str(g.action)
        lines.append(f"gen {g.name} {deg} {act}")
    for j in range(c.dim):
        for i in range(c.dim):
            e = c.entry(i, j)
            if not e:
                continue
            coeff = "1" if c.ring == "GF2" else str(e)
            lines.append(
                f"d {c.generators[i].name} {c.generators[j].name} {coeff}"
            )
    if iota is not None:
        for j in range(c.dim):
            for i in range(c.dim):
                if iota.get(i, j):
                    lines.append(
                        f"iota {c.generators[i].name} {c.generators[j].name} 1"
                    )
    return "\n".join(lines) + "\n"
