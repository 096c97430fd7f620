"""Conley-Zehnder indices on a symbolic algebra of symplectic paths.

Paths start at the identity and are built from exponential arcs of quadratic
forms, half-turn rotation arcs, catenation, direct sums, and explicit loop
offsets.  The index rules are:

* mu(exp arc of Q) = Morse index of Q, provided the open arc never meets
  eigenvalue 1 (checked);
* mu(half-turn in a plane followed by an exp arc of c p q + rest) = Morse
  index - 1 (+1 for a clockwise half-turn);
* catenating an arc whose interior and endpoint stay clear of eigenvalue 1
  leaves the index unchanged (sampled check);
* the index is additive under direct sums (adopted as an axiom of the path
  algebra and guarded by the parity law on every evaluation);
* an anticlockwise full turn shifts the index by -2 per turn.

A numeric cross-check compares homotopy classes through the winding of the
complex determinant of the unitary polar factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, polar

from .symplinalg import (
    SympError,
    SympMatrix,
    build_block,
    direct_sum,
    ham_from_form,
    krein_index,
    morse_index,
)

__all__ = [
    "ExpArc",
    "RotArc",
    "Cat",
    "DirectSum",
    "LoopOffset",
    "CrossingError",
    "conley_zehnder",
    "square_path",
    "path_point",
    "winding_number",
    "mu_difference_numeric",
    "block_lift",
    "verify_cz_krein",
    "parse_path",
]

CROSS_SAMPLES = 96
CROSS_TOL = 1e-9


class CrossingError(SympError):
    pass


@dataclass(frozen=True)
class ExpArc:
    form: tuple  # symmetric matrix as nested tuple
    time: float = 1.0

    @property
    def dim(self) -> int:
        return len(self.form)

    def matrix_form(self) -> np.ndarray:
        return np.array(self.form, dtype=float)


@dataclass(frozen=True)
class RotArc:
    plane: int
    angle: float
    dim_total: int = 2

    @property
    def dim(self) -> int:
        return self.dim_total


@dataclass(frozen=True)
class Cat:
    parts: tuple

    @property
    def dim(self) -> int:
        return self.parts[0].dim


@dataclass(frozen=True)
class DirectSum:
    parts: tuple

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.parts)


@dataclass(frozen=True)
class LoopOffset:
    turns: int
    inner: object

    @property
    def dim(self) -> int:
        return self.inner.dim


@dataclass(frozen=True)
class PointwiseSquare:
    """Path u -> P(u)^2; homotopic rel endpoints to the group square."""

    inner: object

    @property
    def dim(self) -> int:
        return self.inner.dim


def exp_arc(s, time=1.0) -> ExpArc:
    s = np.asarray(s, dtype=float)
    return ExpArc(tuple(map(tuple, s)), time)


def _rotation(dim, plane, theta):
    m = np.eye(dim)
    c, s = math.cos(theta), math.sin(theta)
    m[2 * plane, 2 * plane] = c
    m[2 * plane, 2 * plane + 1] = -s
    m[2 * plane + 1, 2 * plane] = s
    m[2 * plane + 1, 2 * plane + 1] = c
    return m


def path_point(expr, u: float) -> np.ndarray:
    """Value of the path at parameter u in [0, 1]."""
    if isinstance(expr, ExpArc):
        b = ham_from_form(expr.matrix_form()).mat
        return expm(u * expr.time * b)
    if isinstance(expr, RotArc):
        return _rotation(expr.dim, expr.plane, u * expr.angle)
    if isinstance(expr, Cat):
        k = len(expr.parts)
        acc = np.eye(expr.dim)
        t = u * k
        for i, part in enumerate(expr.parts):
            if t >= i + 1:
                acc = acc @ path_point(part, 1.0)
            elif t > i:
                return acc @ path_point(part, t - i)
            else:
                break
        return acc
    if isinstance(expr, DirectSum):
        return direct_sum([path_point(p, u) for p in expr.parts])
    if isinstance(expr, LoopOffset):
        if u <= 0.5:
            return path_point(expr.inner, 2 * u)
        end = path_point(expr.inner, 1.0)
        return end @ _rotation(expr.dim, 0, 2 * math.pi * expr.turns * (2 * u - 1))
    if isinstance(expr, PointwiseSquare):
        a = path_point(expr.inner, u)
        return a @ a
    raise SympError(f"unknown path node {expr!r}")


def endpoint(expr) -> np.ndarray:
    return path_point(expr, 1.0)


def _exp_arc_crossing_check(arc: ExpArc):
    s = arc.matrix_form()
    b = ham_from_form(s).mat * arc.time
    ev = np.linalg.eigvals(b)
    for lam in ev:
        if abs(lam.real) < 1e-12 and abs(lam.imag) >= 2 * math.pi - 1e-9:
            raise CrossingError(
                f"exponential arc crosses eigenvalue 1 (imaginary part {lam.imag:.6f})"
            )


def _interior_sp_star_check(prefix: np.ndarray, arc, label: str):
    """Sample det(I - path) along the arc: no sign change, no near-zero."""
    dim = arc.dim
    eye = np.eye(dim)
    vals = []
    for k in range(CROSS_SAMPLES + 1):
        u = k / CROSS_SAMPLES
        vals.append(np.linalg.det(eye - prefix @ path_point(arc, u)))
    signs = {1 if v > 0 else -1 for v in vals}
    if len(signs) > 1 or min(abs(v) for v in vals) < CROSS_TOL:
        worst = min(range(len(vals)), key=lambda i: abs(vals[i]))
        raise CrossingError(
            f"{label}: path crosses the boundary of Sp* near sample"
            f" u={worst / CROSS_SAMPLES:.4f} (det {vals[worst]:.3e})"
        )


def _is_pq_form(s: np.ndarray, plane: int) -> bool:
    """S restricted to the plane is c*(p q) with c != 0, no cross terms."""
    i = 2 * plane
    block = s[i : i + 2, i : i + 2]
    if abs(block[0, 0]) > 1e-12 or abs(block[1, 1]) > 1e-12:
        return False
    if abs(block[0, 1]) < 1e-12:
        return False
    rest = [k for k in range(s.shape[0]) if k not in (i, i + 1)]
    return not rest or (
        np.abs(s[np.ix_([i, i + 1], rest)]).max() < 1e-12
        and np.abs(s[np.ix_(rest, [i, i + 1])]).max() < 1e-12
    )


def conley_zehnder(expr) -> int:
    """Symbolic Conley-Zehnder index; endpoint must avoid eigenvalue 1."""
    mu = _mu(expr)
    a = endpoint(expr)
    ev = np.linalg.eigvals(a)
    if np.any(np.abs(ev - 1.0) <= 1e-9):
        raise SympError("endpoint not in Sp*")
    det = np.linalg.det(np.eye(expr.dim) - a)
    if (-1) ** mu != (1 if det > 0 else -1):
        raise SympError(
            f"parity law violated: mu = {mu}, sign det(I-A) = {np.sign(det)}"
        )
    return mu


def _mu(expr) -> int:
    if isinstance(expr, ExpArc):
        _exp_arc_crossing_check(expr)
        return morse_index(expr.matrix_form())
    if isinstance(expr, DirectSum):
        return sum(_mu(p) for p in expr.parts)
    if isinstance(expr, LoopOffset):
        return _mu(expr.inner) - 2 * expr.turns
    if isinstance(expr, Cat):
        parts = list(expr.parts)
        if (
            len(parts) >= 2
            and isinstance(parts[0], RotArc)
            and abs(abs(parts[0].angle) - math.pi) < 1e-12
            and isinstance(parts[1], ExpArc)
        ):
            s = parts[1].matrix_form()
            if not _is_pq_form(s, parts[0].plane):
                raise SympError(
                    "half-turn pattern needs a c*pq form in the rotated plane"
                )
            _exp_arc_crossing_check(parts[1])
            base = morse_index(s) - (1 if parts[0].angle > 0 else -1)
            consumed = 2
        else:
            base = _mu(parts[0])
            consumed = 1
        prefix = np.eye(expr.dim)
        for p in parts[:consumed]:
            prefix = prefix @ path_point(p, 1.0)
        for arc in parts[consumed:]:
            _interior_sp_star_check(prefix, arc, "catenation")
            prefix = prefix @ path_point(arc, 1.0)
        return base
    if isinstance(expr, RotArc):
        raise SympError("a bare rotation arc has no index rule; catenate it")
    raise SympError(f"unknown path node {expr!r}")


def square_path(expr):
    """Symbolic square in the universal cover (pointwise square of the path)."""
    if isinstance(expr, ExpArc):
        return ExpArc(expr.form, 2 * expr.time)
    if isinstance(expr, DirectSum):
        return DirectSum(tuple(square_path(p) for p in expr.parts))
    if isinstance(expr, LoopOffset):
        return LoopOffset(2 * expr.turns, square_path(expr.inner))
    if isinstance(expr, Cat):
        parts = list(expr.parts)
        if (
            len(parts) == 2
            and isinstance(parts[0], RotArc)
            and abs(abs(parts[0].angle) - math.pi) < 1e-12
            and isinstance(parts[1], ExpArc)
        ):
            # (R exp(tB))^2 = exp(2tB) when R commutes with B; the squared
            # half-turn contributes a full loop
            s = parts[1].matrix_form()
            if not _is_pq_form(s, parts[0].plane):
                raise SympError("cannot square this catenation symbolically")
            turns = 1 if parts[0].angle > 0 else -1
            return LoopOffset(turns, ExpArc(parts[1].form, 2 * parts[1].time))
        raise SympError("cannot square a general catenation symbolically")
    raise SympError(f"unknown path node {expr!r}")


# ---------------------------------------------------------------------------
# numeric cross-check: winding of det of the unitary polar factor


def _complex_unitary(u: np.ndarray) -> np.ndarray:
    n = u.shape[0] // 2
    z = np.empty((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            z[a, b] = u[2 * a, 2 * b] + 1j * u[2 * a + 1, 2 * b]
    return z


def winding_number(expr, samples: int = 720) -> float:
    """Total winding of det_C(unitary polar factor) along the path, in turns."""
    args = []
    for k in range(samples + 1):
        a = path_point(expr, k / samples)
        u, _ = polar(a)
        det = np.linalg.det(_complex_unitary(u))
        args.append(np.angle(det))
    total = 0.0
    for prev, cur in zip(args, args[1:]):
        delta = cur - prev
        while delta > math.pi:
            delta -= 2 * math.pi
        while delta < -math.pi:
            delta += 2 * math.pi
        total += delta
    return total / (2 * math.pi)


def mu_difference_numeric(e1, e2, samples: int = 720) -> int:
    """mu(e1) - mu(e2) for paths with the same endpoint, from windings."""
    a1, a2 = endpoint(e1), endpoint(e2)
    if np.abs(a1 - a2).max() > 1e-8:
        raise SympError("numeric comparison needs equal endpoints")
    w = winding_number(e1, samples) - winding_number(e2, samples)
    rounded = round(w)
    if abs(w - rounded) > 0.1:
        raise SympError(f"winding difference {w} is not close to an integer")
    return -2 * rounded


# ---------------------------------------------------------------------------
# block lifts and the kappa/mu compatibility check


def block_lift(spec):
    """Preferred lift of a normal-form block, as a path expression."""
    from .symplinalg import BlockSpec

    if not isinstance(spec, BlockSpec):
        raise SympError("block_lift expects a BlockSpec")
    k, p = spec.kind, spec.params
    if k == "i+":
        tau = -math.log(p[0])
        return exp_arc([[0.0, tau], [tau, 0.0]])
    if k == "i-":
        tau = -math.log(-p[0])
        return Cat((RotArc(0, math.pi), exp_arc([[0.0, tau], [tau, 0.0]])))
    if k in ("ii+", "ii-"):
        theta = math.atan2(p[1], p[0])
        return exp_arc([[theta, 0.0], [0.0, theta]])
    # type iii: exp of psi*(double rotation generator) + log(r)*(p/q scaling)
    a1, a2 = p
    r = math.hypot(a1, a2)
    psi = math.atan2(a2, a1)
    kgen = np.zeros((4, 4))
    kgen[0, 2] = -1.0
    kgen[1, 3] = -1.0
    kgen[2, 0] = 1.0
    kgen[3, 1] = 1.0
    lgen = np.diag([1.0, -1.0, 1.0, -1.0])
    b = psi * kgen + math.log(r) * lgen
    j = np.zeros((4, 4))
    j[0, 1] = j[2, 3] = 1.0
    j[1, 0] = j[3, 2] = -1.0
    s = j @ b
    if np.abs(s - s.T).max() > 1e-12:
        raise SympError("internal: type iii generator is not Hamiltonian")
    return exp_arc(s)


def verify_cz_krein(specs, numeric_check: bool = False) -> dict:
    """kappa(A) - n = mu(lift^2) - 2 mu(lift) for a direct sum of blocks."""
    mats = [build_block(s) for s in specs]
    a = SympMatrix(direct_sum(mats))
    n = a.n
    lift = DirectSum(tuple(block_lift(s) for s in specs)) if len(specs) > 1 else block_lift(specs[0])
    if np.abs(endpoint(lift) - a.mat).max() > 1e-9:
        raise SympError("lift endpoint does not match the block matrix")
    mu1 = conley_zehnder(lift)
    sq = square_path(lift)
    if np.abs(endpoint(sq) - a.mat @ a.mat).max() > 1e-9:
        raise SympError("squared lift endpoint mismatch")
    mu2 = conley_zehnder(sq)
    kappa = krein_index(a).kappa
    report = {
        "kappa": kappa,
        "n": n,
        "mu": mu1,
        "mu_squared": mu2,
        "lhs": kappa - n,
        "rhs": mu2 - 2 * mu1,
        "holds": kappa - n == mu2 - 2 * mu1,
    }
    if numeric_check:
        # the symbolic square must be homotopic to the pointwise square
        report["square_class_offset"] = mu_difference_numeric(
            sq, PointwiseSquare(lift)
        )
        report["numeric_consistent"] = report["square_class_offset"] == 0
    return report


# ---------------------------------------------------------------------------
# tiny prefix-term parser for the CLI: cat(rot(1,3.14159), exp(Q,0.01))
# Q is given as a semicolon/comma matrix: "0,1;1,0"


def _parse_matrix(text: str):
    rows = [
        [float(x) for x in row.split(",") if x.strip() != ""]
        for row in text.split(";")
        if row.strip() != ""
    ]
    return rows


def parse_path(text: str):
    text = text.strip()

    def parse_expr(s: str):
        s = s.strip()
        head, rest = s.split("(", 1)
        if not rest.endswith(")"):
            raise SympError(f"unbalanced path term: {s!r}")
        body = rest[:-1]
        head = head.strip().lower()
        if head in ("cat", "sum"):
            parts = [parse_expr(p) for p in _split_args(body)]
            return Cat(tuple(parts)) if head == "cat" else DirectSum(tuple(parts))
        if head == "exp":
            args = _split_args(body)
            mat = _parse_matrix(args[0].strip().strip("[]"))
            t = float(args[1]) if len(args) > 1 else 1.0
            return exp_arc(mat, t)
        if head == "rot":
            args = _split_args(body)
            return RotArc(int(args[0]) - 1, float(args[1]))
        if head == "loop":
            args = _split_args(body)
            return LoopOffset(int(args[0]), parse_expr(args[1]))
        raise SympError(f"unknown path head {head!r}")

    def _split_args(body: str):
        out = []
        depth = 0
        cur = []
        for ch in body:
            if ch == "(" or ch == "[":
                depth += 1
            elif ch == ")" or ch == "]":
                depth -= 1
            if ch == "," and depth == 0:
                out.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        if cur:
            out.append("".join(cur))
        return out

    return parse_expr(text)
