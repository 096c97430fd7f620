"""Symplectic matrices, the Krein index, Cayley transform, block normal forms.

Coordinates are interleaved (p_1, q_1, ..., p_n, q_n); the symplectic form
is omega(u, v) = u^T J v with J = diag of [[0, 1], [-1, 0]] blocks.  A
rotation by theta > 0 in a (p, q) plane is anticlockwise and has Krein
index +1 on its upper eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur

__all__ = [
    "DEFAULT_TOL_SP",
    "DEFAULT_TOL_EIG",
    "SympError",
    "IllConditioned",
    "omega_matrix",
    "SympMatrix",
    "HamMatrix",
    "cayley",
    "cayley_inv",
    "BlockSpec",
    "build_block",
    "direct_sum",
    "KreinResult",
    "krein_index",
    "component_invariant",
    "representative_for",
    "morse_index",
    "ham_from_form",
]

DEFAULT_TOL_SP = 1e-9
DEFAULT_TOL_EIG = 1e-6


class SympError(ValueError):
    pass


class IllConditioned(SympError):
    pass


def omega_matrix(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    for k in range(n):
        j[2 * k, 2 * k + 1] = 1.0
        j[2 * k + 1, 2 * k] = -1.0
    return j


@dataclass
class SympMatrix:
    mat: np.ndarray
    tol_sp: float = DEFAULT_TOL_SP
    tol_eig: float = DEFAULT_TOL_EIG

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=float)
        m = self.mat.shape[0]
        if self.mat.ndim != 2 or self.mat.shape[1] != m or m % 2:
            raise SympError("expected a 2n x 2n matrix")
        j = omega_matrix(m // 2)
        resid = np.abs(self.mat.T @ j @ self.mat - j).max()
        if resid > self.tol_sp:
            raise SympError(f"not symplectic: residual {resid:.3e} > {self.tol_sp:.1e}")

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.mat)

    def membership(self) -> dict:
        """Flags for Sp, Sp* (no eigenvalue 1), Sp** (none at -1 either)."""
        ev = self.eigenvalues()
        near_one = bool(np.any(np.abs(ev - 1.0) <= self.tol_eig))
        near_minus = bool(np.any(np.abs(ev + 1.0) <= self.tol_eig))
        return {
            "Sp": True,
            "Sp*": not near_one,
            "Sp**": not (near_one or near_minus),
        }

    def in_sp_star(self) -> bool:
        return self.membership()["Sp*"]

    def in_sp_star_star(self) -> bool:
        return self.membership()["Sp**"]


@dataclass
class HamMatrix:
    mat: np.ndarray
    tol: float = DEFAULT_TOL_SP

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=float)
        m = self.mat.shape[0]
        if self.mat.ndim != 2 or self.mat.shape[1] != m or m % 2:
            raise SympError("expected a 2n x 2n matrix")
        j = omega_matrix(m // 2)
        sym = j @ self.mat
        if np.abs(sym - sym.T).max() > self.tol:
            raise SympError("J B is not symmetric: not a Hamiltonian endomorphism")

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2


def ham_from_form(s: np.ndarray, tol: float = DEFAULT_TOL_SP) -> HamMatrix:
    """Hamiltonian matrix -J S of a quadratic form with symmetric matrix S."""
    s = np.asarray(s, dtype=float)
    if np.abs(s - s.T).max() > tol:
        raise SympError("quadratic form matrix must be symmetric")
    n = s.shape[0] // 2
    return HamMatrix(-omega_matrix(n) @ s, tol)


def morse_index(s: np.ndarray, zero_band: float = 1e-9) -> int:
    """Number of negative eigenvalues of a symmetric matrix; rejects degenerate."""
    s = np.asarray(s, dtype=float)
    ev = np.linalg.eigvalsh(0.5 * (s + s.T))
    if np.any(np.abs(ev) <= zero_band):
        raise IllConditioned("degenerate quadratic form")
    return int(np.sum(ev < 0))


def cayley(b: HamMatrix, tol_eig: float = DEFAULT_TOL_EIG) -> SympMatrix:
    """A = (B + I)(B - I)^{-1}; requires spec(B) away from {0, +1, -1}."""
    ev = np.linalg.eigvals(b.mat)
    for bad in (0.0, 1.0, -1.0):
        if np.any(np.abs(ev - bad) <= tol_eig):
            raise SympError(f"Cayley transform needs spec(B) away from {bad}")
    m = b.mat.shape[0]
    eye = np.eye(m)
    cond = np.linalg.cond(b.mat - eye)
    if cond > 1e12:
        raise IllConditioned(f"B - I nearly singular (cond {cond:.2e})")
    a = (b.mat + eye) @ np.linalg.inv(b.mat - eye)
    out = SympMatrix(a, tol_sp=1e-8)
    if not out.in_sp_star_star():
        raise SympError("Cayley image unexpectedly meets spec {1, -1}")
    return out


def cayley_inv(a: SympMatrix) -> HamMatrix:
    """B = (A - I)^{-1}(A + I), inverse of the Cayley transform."""
    if not a.in_sp_star_star():
        raise SympError("cayley_inv requires A in Sp**")
    m = a.mat.shape[0]
    eye = np.eye(m)
    b = np.linalg.inv(a.mat - eye) @ (a.mat + eye)
    return HamMatrix(b, tol=1e-8)


# ---------------------------------------------------------------------------
# block normal forms


@dataclass(frozen=True)
class BlockSpec:
    kind: str  # i+, i-, ii+, ii-, iii
    params: tuple

    def __post_init__(self):
        k, p = self.kind, self.params
        if k == "i+":
            if len(p) != 1 or not (0 < p[0] < 1):
                raise SympError("type i+ needs a in (0,1)")
        elif k == "i-":
            if len(p) != 1 or not (-1 < p[0] < 0):
                raise SympError("type i- needs a in (-1,0)")
        elif k in ("ii+", "ii-"):
            if len(p) != 2:
                raise SympError("type ii needs (a1, a2) on the unit circle")
            a1, a2 = p
            if abs(a1 * a1 + a2 * a2 - 1.0) > 1e-12:
                raise SympError("type ii needs a1^2 + a2^2 = 1")
            if k == "ii+" and not a2 > 0:
                raise SympError("type ii+ needs a2 > 0")
            if k == "ii-" and not a2 < 0:
                raise SympError("type ii- needs a2 < 0")
        elif k == "iii":
            if len(p) != 2:
                raise SympError("type iii needs (a1, a2)")
            a1, a2 = p
            r2 = a1 * a1 + a2 * a2
            if not (-1 < a1 < 1) or not (0 < r2 <= 1):
                raise SympError("type iii needs a1 in (-1,1), 0 < a1^2+a2^2 <= 1")
        else:
            raise SympError(f"unknown block kind {k!r}")

    @property
    def half_dim(self) -> int:
        return 2 if self.kind == "iii" else 1


def build_block(spec: BlockSpec) -> np.ndarray:
    k, p = spec.kind, spec.params
    if k in ("i+", "i-"):
        a = p[0]
        return np.array([[a, 0.0], [0.0, 1.0 / a]])
    if k in ("ii+", "ii-"):
        a1, a2 = p
        return np.array([[a1, -a2], [a2, a1]])
    a1, a2 = p
    r2 = a1 * a1 + a2 * a2
    # coordinates (p1, q1, p2, q2)
    return np.array(
        [
            [a1, 0.0, -a2, 0.0],
            [0.0, a1 / r2, 0.0, -a2 / r2],
            [a2, 0.0, a1, 0.0],
            [0.0, a2 / r2, 0.0, a1 / r2],
        ]
    )


def direct_sum(mats: list[np.ndarray]) -> np.ndarray:
    total = sum(m.shape[0] for m in mats)
    out = np.zeros((total, total))
    at = 0
    for m in mats:
        k = m.shape[0]
        out[at : at + k, at : at + k] = m
        at += k
    return out


# ---------------------------------------------------------------------------
# Krein index


@dataclass
class KreinResult:
    kappa: int
    e_dim: int
    eigen_clusters: list = field(default_factory=list)  # (eigenvalue, mult, signature)


def _unit_circle_selector(ev: complex, tol: float) -> bool:
    return abs(abs(ev) - 1.0) <= tol and ev.imag > 0


def krein_index(a: SympMatrix) -> KreinResult:
    """Signature of i omega(conj(h1), h2) on the unit-circle, Im > 0 part."""
    if not a.in_sp_star_star():
        raise SympError("Krein index requires A in Sp**")
    tol = a.tol_eig
    ev = np.linalg.eigvals(a.mat)
    # classification sanity: eigenvalues in the ambiguous band must pair with
    # a reciprocal partner in the same band, otherwise the circle test is
    # numerically meaningless
    for lam in ev:
        band = abs(abs(lam) - 1.0)
        if tol < band <= 2 * tol:
            partner = 1.0 / np.conj(lam)
            ok = any(
                abs(mu - partner) <= 10 * tol
                and tol < abs(abs(mu) - 1.0) <= 2 * tol
                for mu in ev
            )
            if not ok:
                raise IllConditioned(
                    f"eigenvalue {lam} ambiguously near the unit circle"
                )
    j = omega_matrix(a.n)
    t2, z2, e_dim = schur(
        a.mat.astype(complex),
        output="complex",
        sort=lambda lam: _unit_circle_selector(lam, tol),
    )
    if e_dim == 0:
        _check_parity(a, 0)
        return KreinResult(0, 0, [])
    basis = z2[:, :e_dim]
    gram = 1j * (basis.conj().T @ j @ basis)
    gram = 0.5 * (gram + gram.conj().T)
    gev = np.linalg.eigvalsh(gram)
    if np.any(np.abs(gev) <= 1e-9):
        raise IllConditioned("Krein form numerically degenerate")
    kappa = int(np.sum(gev > 0) - np.sum(gev < 0))
    clusters = _cluster_eigs(list(np.diag(t2)[:e_dim]), 10 * tol, basis, j)
    _check_parity(a, kappa)
    res = KreinResult(kappa, e_dim, clusters)
    if abs(kappa) > e_dim or (kappa - e_dim) % 2:
        raise IllConditioned("signature inconsistent with dim E")
    return res


def _cluster_eigs(eigs, tol, basis, j):
    groups: list[list[complex]] = []
    for lam in sorted(eigs, key=lambda z: (z.real, z.imag)):
        if groups and abs(groups[-1][-1] - lam) <= tol:
            groups[-1].append(lam)
        else:
            groups.append([lam])
    out = []
    for g in groups:
        out.append((complex(np.mean(g)), len(g), None))
    # per-cluster signatures are refined only when clusters are orthogonal;
    # report the aggregate for safety
    return out


def _check_parity(a: SympMatrix, kappa: int):
    n = a.n
    det2 = np.linalg.det(np.eye(2 * n) - a.mat @ a.mat)
    if abs(det2) < 1e-12:
        raise IllConditioned("det(I - A^2) numerically zero in Sp**")
    if (-1) ** kappa != (-1) ** n * (1 if det2 > 0 else -1):
        raise IllConditioned("Krein parity law violated: unreliable computation")


# ---------------------------------------------------------------------------
# component classification of Sp**


def component_invariant(a: SympMatrix) -> tuple[int, int]:
    """(sign det(I - A), kappa(A)); a complete invariant of pi_0(Sp**)."""
    if not a.in_sp_star_star():
        raise SympError("component invariant requires A in Sp**")
    det1 = np.linalg.det(np.eye(2 * a.n) - a.mat)
    if abs(det1) < 1e-12:
        raise IllConditioned("det(I - A) numerically zero")
    s = 1 if det1 > 0 else -1
    return s, krein_index(a).kappa


def admissible(s: int, k: int, n: int) -> bool:
    if s == 1:
        return abs(k) <= n
    if s == -1:
        return abs(k) <= n - 1
    raise SympError("sign must be +1 or -1")


def representative_for(s: int, k: int, n: int) -> SympMatrix:
    """Block direct sum realizing the component (s, k) in Sp**(R^{2n})."""
    if not admissible(s, k, n):
        raise SympError(f"(s, k) = ({s}, {k}) is not admissible for n = {n}")
    blocks = []
    kind = "ii+" if k > 0 else "ii-"
    a2 = 1.0 if k > 0 else -1.0
    for _ in range(abs(k)):
        blocks.append(build_block(BlockSpec(kind, (0.0, a2))))
    if s == -1:
        blocks.append(build_block(BlockSpec("i+", (0.5,))))
    while sum(b.shape[0] for b in blocks) < 2 * n:
        blocks.append(build_block(BlockSpec("i-", (-0.5,))))
    a = SympMatrix(direct_sum(blocks))
    got = component_invariant(a)
    if got != (s, k):
        raise SympError(f"representative construction failed: got {got}")
    return a
