"""Combinatorics of compactified flow spaces on the infinite sphere.

Unparametrized spaces Q(i, sigma) and parametrized spaces P(i, sigma) are
stratified by broken flow lines: a stratum is a signed composition of i
whose signs multiply to sigma, with one marked (parametrized) factor in the
P case; the marked factor may have size 0 only with sign +.  Codimension is
the number of factors minus one.

The codimension-one face dictionary assigns to each face of P-bar(i, sigma)
its term in the product relations; checking the assembled right-hand side
against the relation formulas for all i is this module's main consistency
job.  The round-metric chart realizes flow lines explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

__all__ = [
    "Stratum",
    "FaceTerm",
    "FlowError",
    "enumerate_strata",
    "corner_count",
    "codim1_faces",
    "relation_rhs",
    "expected_relation_rhs",
    "FlowPoint",
    "flow_chart",
    "chart_inverse",
]


class FlowError(ValueError):
    pass


def _sign_str(s: int) -> str:
    return "+" if s > 0 else "-"


@dataclass(frozen=True)
class Stratum:
    space: str  # "Q" or "P"
    factors: tuple  # ((i_1, sigma_1), ...), sigma in {+1, -1}
    marked: int | None = None  # index of the parametrized factor, P only

    def __post_init__(self):
        if self.space not in ("Q", "P"):
            raise FlowError("space must be Q or P")
        if (self.space == "P") != (self.marked is not None):
            raise FlowError("exactly the P strata carry a marked factor")
        for k, (i, s) in enumerate(self.factors):
            if s not in (1, -1):
                raise FlowError("signs are +1/-1")
            if self.space == "P" and k == self.marked:
                if i < 0 or (i == 0 and s != 1):
                    raise FlowError("marked factor needs i >= 0, sign + when i = 0")
            elif i < 1:
                raise FlowError("unmarked factors need i >= 1")

    @property
    def total(self) -> int:
        return sum(i for i, _ in self.factors)

    @property
    def sign(self) -> int:
        out = 1
        for _, s in self.factors:
            out *= s
        return out

    @property
    def codim(self) -> int:
        return len(self.factors) - 1

    def __str__(self) -> str:
        parts = []
        for k, (i, s) in enumerate(self.factors):
            tag = "P" if (self.space == "P" and k == self.marked) else "Q"
            parts.append(f"{tag}^{{{i},{_sign_str(s)}}}")
        return " x ".join(parts)

    def corner_label(self) -> str:
        """Sign string with (+) at the marked slot, e.g. '(+)++' for a corner."""
        out = []
        for k, (i, s) in enumerate(self.factors):
            if self.space == "P" and k == self.marked:
                out.append("(+)")
            else:
                out.append(_sign_str(s))
        return "".join(out)

    def flip_signs(self) -> "Stratum":
        return Stratum(
            self.space,
            tuple((i, -s) for i, s in self.factors),
            self.marked,
        )


def _compositions(total: int, min_part: int = 1):
    if total == 0:
        yield ()
        return
    for first in range(min_part, total + 1):
        for rest in _compositions(total - first, min_part):
            yield (first,) + rest


def enumerate_strata(space: str, i: int, sigma: int, codim: int | None = None):
    """All strata of the compactified flow space, duplicate-free."""
    if sigma not in (1, -1):
        raise FlowError("sigma must be +1 or -1")
    out = []
    if space == "Q":
        if i < 1:
            raise FlowError("Q spaces need i >= 1")
        for comp in _compositions(i):
            d = len(comp)
            for signs in product((1, -1), repeat=d):
                if math.prod(signs) != sigma:
                    continue
                out.append(Stratum("Q", tuple(zip(comp, signs))))
    elif space == "P":
        if i < 0:
            raise FlowError("P spaces need i >= 0")
        seen = set()
        for comp in _compositions(i):
            d = len(comp)
            # insert a marked factor of size m >= 0 at any position;
            # when m > 0 it replaces one part of the composition
            for pos in range(d + 1):
                # marked factor of size 0 (always sign +)
                for signs in product((1, -1), repeat=d):
                    if math.prod(signs) != sigma:
                        continue
                    factors = (
                        [(c, s) for c, s in zip(comp[:pos], signs[:pos])]
                        + [(0, 1)]
                        + [(c, s) for c, s in zip(comp[pos:], signs[pos:])]
                    )
                    st = Stratum("P", tuple(factors), marked=pos)
                    if st not in seen:
                        seen.add(st)
                        out.append(st)
            for pos in range(d):
                for signs in product((1, -1), repeat=d):
                    if math.prod(signs) != sigma:
                        continue
                    st = Stratum("P", tuple(zip(comp, signs)), marked=pos)
                    if st not in seen:
                        seen.add(st)
                        out.append(st)
        if i == 0:
            # only the constant parametrized flow line
            out = [Stratum("P", ((0, 1),), marked=0)] if sigma == 1 else []
    else:
        raise FlowError("space must be Q or P")
    if codim is not None:
        out = [s for s in out if s.codim == codim]
    return out


def corner_count(i: int, sigma: int = 1) -> int:
    """Number of zero-dimensional strata of P-bar(i, sigma): 2^{i-1} (i+1)."""
    if i < 1:
        raise FlowError("corner count needs i >= 1")
    formula = 2 ** (i - 1) * (i + 1)
    listed = enumerate_strata("P", i, sigma, codim=i)
    if len(listed) != formula:
        raise FlowError(
            f"corner enumeration ({len(listed)}) disagrees with 2^(i-1)(i+1) = {formula}"
        )
    return formula


# ---------------------------------------------------------------------------
# face-to-term dictionary


@dataclass(frozen=True)
class FaceTerm:
    """zero, a pants term p^{i,s} (maybe with swapped inputs), or d_eq . p."""

    kind: str  # "zero" | "pants" | "deq_pants"
    pants_i: int | None = None
    pants_sigma: int | None = None
    swap: bool = False
    deq_i: int | None = None
    deq_sigma: int | None = None

    def __str__(self) -> str:
        if self.kind == "zero":
            return "0"
        p = f"p^{{{self.pants_i},{_sign_str(self.pants_sigma)}}}"
        if self.swap:
            p += " o swap"
        if self.kind == "pants":
            return p
        return f"d_eq^{{{self.deq_i},{_sign_str(self.deq_sigma)}}} . " + p


def codim1_faces(i: int, sigma: int):
    """The 4i-2 codimension-one faces of P-bar(i, sigma) with their terms.

    Faces with the marked factor first are listed before those with the
    marked factor last; only the two faces P^{i-1, tau} x Q^{1, tau'}
    contribute pants terms (with swapped inputs when the Q sign is -),
    while every face with the Q factor first contributes d_eq . pants.
    """
    if i < 1:
        raise FlowError("need i >= 1")
    if sigma not in (1, -1):
        raise FlowError("sigma is +1 or -1")
    faces = []
    # marked factor first: P^{k,+} x Q^{i-k, sigma}, k = 0..i-1
    for k in range(i):
        st = Stratum("P", ((k, 1), (i - k, sigma)), marked=0)
        if k == i - 1:
            term = FaceTerm("pants", pants_i=i - 1, pants_sigma=1, swap=sigma == -1)
        else:
            term = FaceTerm("zero")
        faces.append((st, term))
    # marked factor first: P^{k,-} x Q^{i-k, -sigma}, k = 1..i-1
    for k in range(1, i):
        st = Stratum("P", ((k, -1), (i - k, -sigma)), marked=0)
        if k == i - 1:
            term = FaceTerm("pants", pants_i=i - 1, pants_sigma=-1, swap=sigma == 1)
        else:
            term = FaceTerm("zero")
        faces.append((st, term))
    # Q factor first: Q^{k, sigma} x P^{i-k, +}, k = 1..i
    for k in range(1, i + 1):
        st = Stratum("P", ((k, sigma), (i - k, 1)), marked=1)
        faces.append(
            (
                st,
                FaceTerm(
                    "deq_pants",
                    pants_i=i - k,
                    pants_sigma=1,
                    deq_i=k,
                    deq_sigma=sigma,
                ),
            )
        )
    # Q factor first: Q^{k, -sigma} x P^{i-k, -}, k = 1..i-1
    for k in range(1, i):
        st = Stratum("P", ((k, -sigma), (i - k, -1)), marked=1)
        faces.append(
            (
                st,
                FaceTerm(
                    "deq_pants",
                    pants_i=i - k,
                    pants_sigma=-1,
                    deq_i=k,
                    deq_sigma=-sigma,
                ),
            )
        )
    if len(faces) != 4 * i - 2:
        raise FlowError(f"face count {len(faces)} != 4i-2")
    # cross-check against the abstract stratum enumeration
    listed = {s for s in enumerate_strata("P", i, sigma, codim=1)}
    if {st for st, _ in faces} != listed:
        raise FlowError("face dictionary disagrees with stratum enumeration")
    return faces


def _term_order(t: FaceTerm):
    if t.kind == "pants":
        return (0, 1 if t.swap else 0)
    return (1, t.deq_i, 0 if t.deq_sigma == 1 else 1)


def relation_rhs(i: int, sigma: int):
    """Nonzero face terms of P-bar(i, sigma), in the formula's display order:
    principal pants term, swapped pants term, then d_eq-compositions by
    ascending d_eq index with + before -."""
    terms = [t for _, t in codim1_faces(i, sigma) if t.kind != "zero"]
    return sorted(terms, key=_term_order)


def expected_relation_rhs(i: int, sigma: int, drop_zero: bool = True):
    """Right-hand side of the product relation, built from the formula.

    With drop_zero the identically vanishing p^{0,-} terms are removed
    (that is how the relation is displayed); without it the formal list is
    returned, which is what the sign-flip symmetry acts on.
    """
    out = [
        FaceTerm("pants", pants_i=i - 1, pants_sigma=sigma, swap=False),
        FaceTerm("pants", pants_i=i - 1, pants_sigma=-sigma, swap=True),
    ]
    for i1 in range(1, i + 1):
        i2 = i - i1
        for deq_sigma in (1, -1):
            tau = deq_sigma * sigma  # the signs must multiply back to sigma
            out.append(
                FaceTerm(
                    "deq_pants",
                    pants_i=i2,
                    pants_sigma=tau,
                    deq_i=i1,
                    deq_sigma=deq_sigma,
                )
            )
    if drop_zero:
        out = [t for t in out if not (t.pants_i == 0 and t.pants_sigma == -1)]
    return out


# ---------------------------------------------------------------------------
# the round-metric chart


@dataclass
class FlowPoint:
    i: int
    sigma: int
    coords: tuple  # chart coordinates in R^{i-1}
    samples: list  # (s, w(s) head coefficients nu_0..nu_i)


def _sample_times(n: int = 512, span: float = 20.0):
    half = n // 2
    pos = [span * (math.exp(3 * k / half) - 1) / (math.exp(3.0) - 1) for k in range(1, half + 1)]
    return sorted(set([-t for t in pos] + [0.0] + pos))


def flow_chart(i: int, sigma: int, x, n_samples: int = 512) -> FlowPoint:
    """Flow line through the chart point x in R^{i-1} (round metric).

    The unique parametrization has nu_i = sigma nu_0 at s = 0; the trajectory
    follows the normalized linear flow with rate e^{-2ks} on coordinate k.
    """
    if i < 1:
        raise FlowError("need i >= 1")
    x = tuple(float(v) for v in x)
    if len(x) != i - 1:
        raise FlowError(f"chart point must lie in R^{i-1}")
    nu0 = 1.0 / math.sqrt(2.0 + sum(v * v for v in x))
    nu = [nu0] + [v * nu0 for v in x] + [sigma * nu0]
    samples = []
    for s in _sample_times(n_samples):
        scaled = [nu[k] * math.exp(-2 * k * s) for k in range(i + 1)]
        norm = math.sqrt(sum(v * v for v in scaled))
        w = [v / norm for v in scaled]
        samples.append((s, w))
        if abs(sum(v * v for v in w) - 1.0) > 1e-9:
            raise FlowError("trajectory left the sphere")
        if not w[0] > 0 or not sigma * w[i] > 0:
            raise FlowError("chart invariants violated along the trajectory")
    return FlowPoint(i, sigma, x, samples)


def chart_inverse(fp: FlowPoint) -> tuple:
    """Chart coordinates recovered from the normalized point at s = 0."""
    for s, w in fp.samples:
        if s == 0.0:
            if abs(w[fp.i] - fp.sigma * w[0]) > 1e-9:
                raise FlowError("sample at s=0 is not normalized")
            return tuple(w[k] / w[0] for k in range(1, fp.i))
    raise FlowError("no sample at s = 0")


def flow_limits_check(fp: FlowPoint, tol: float = 1e-6) -> bool:
    """w(s) approaches v^{i,sigma} as s -> -infty and v^{0,+} as s -> +infty."""
    s_min, w_min = fp.samples[0]
    s_max, w_max = fp.samples[-1]
    v_neg = [0.0] * (fp.i + 1)
    v_neg[fp.i] = float(fp.sigma)
    v_pos = [0.0] * (fp.i + 1)
    v_pos[0] = 1.0
    d_neg = math.sqrt(sum((a - b) ** 2 for a, b in zip(w_min, v_neg)))
    d_pos = math.sqrt(sum((a - b) ** 2 for a, b in zip(w_max, v_pos)))
    return d_neg < tol and d_pos < tol


def flow_equation_residual(fp: FlowPoint) -> float:
    """Max residual of dw/ds = -grad f along adjacent sample pairs.

    grad f on the sphere is (2 k nu_k)_k - 2 f(w) w for f = sum k nu_k^2.
    """
    worst = 0.0
    samples = fp.samples
    for (s0, w0), (s1, w1) in zip(samples, samples[1:]):
        if s1 - s0 > 0.2:
            continue  # widely spaced tail samples: skip finite differencing
        mid = [(a + b) / 2 for a, b in zip(w0, w1)]
        norm = math.sqrt(sum(v * v for v in mid))
        mid = [v / norm for v in mid]
        fval = sum(k * v * v for k, v in enumerate(mid))
        grad = [2 * k * v - 2 * fval * v for k, v in enumerate(mid)]
        for k in range(len(mid)):
            deriv = (w1[k] - w0[k]) / (s1 - s0)
            worst = max(worst, abs(deriv + grad[k]))
    return worst
