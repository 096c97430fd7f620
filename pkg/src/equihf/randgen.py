"""Seeded random instances for the property suites.

Random involutive complexes are built from an involution that permutes
generators and an equivariant pairing differential, then conjugated by an
equivariant change of basis, so validity (d^2 = 0, iota chain map) holds by
construction while the matrices stay generic-looking.
"""

from __future__ import annotations

import random

from .complexes import GradedComplex, Generator
from .equivariant import InvolutiveComplex
from .gf2 import BitMatrix

__all__ = ["rand_involutive", "rand_equivariant_auto"]


def _rand_pairing(rng, n, perm, degrees, want, clean_orbits=False):
    """Equivariant pairing arrows (target, source); d^2 = 0 by disjointness.

    With clean_orbits, a fixed generator is only paired with a fixed one (the
    resulting complex is then a sum of acyclic two-step pieces once all
    generators are used).
    """
    used: set[int] = set()
    pairs = []
    tries = 0
    while tries < 80 and len(used) < want and n >= 2:
        tries += 1
        a, b = rng.sample(range(n), 2)
        orbit = {a, perm[a], b, perm[b]}
        if used & orbit:
            continue
        if (degrees[b] - degrees[a]) % 2 != 1:
            continue
        if a == perm[b] or b == perm[a]:
            continue
        if clean_orbits and (perm[a] == a) != (perm[b] == b):
            continue
        pairs.append((b, a))
        if perm[a] != a or perm[b] != b:
            pairs.append((perm[b], perm[a]))
        used |= orbit
    return pairs, used


def rand_equivariant_auto(rng, n, perm, degrees) -> BitMatrix:
    """Degree-preserving equivariant automorphism: id + strictly triangular."""
    g = BitMatrix.identity(n)
    order = list(range(n))
    rng.shuffle(order)
    pos = {v: k for k, v in enumerate(order)}
    for _ in range(n):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b or pos[a] <= pos[b]:
            continue
        if degrees[a] != degrees[b]:
            continue
        # keep strict triangularity for the iota-conjugate entry as well
        if pos[perm[a]] <= pos[perm[b]] or perm[a] == b or perm[b] == a:
            continue
        for i, j in {(a, b), (perm[a], perm[b])}:
            g.rows[i] ^= 1 << j
    return g


def rand_involutive(
    rng: random.Random,
    max_dim: int = 8,
    force_free: bool = False,
    force_acyclic: bool = False,
    conjugate: bool = True,
) -> InvolutiveComplex:
    while True:
        lo = 2 if (force_free or force_acyclic) else 1
        n = rng.randrange(lo, max_dim + 1)
        if force_free and n % 2:
            n = n - 1 if n - 1 >= 2 else n + 1
        perm = list(range(n))
        indices = list(range(n))
        rng.shuffle(indices)
        nswap = n // 2 if force_free else rng.randrange(0, n // 2 + 1)
        for k in range(nswap):
            a, b = indices[2 * k], indices[2 * k + 1]
            perm[a], perm[b] = b, a
        degrees = [rng.randrange(0, 2) for _ in range(n)]
        for k in range(nswap):
            a, b = indices[2 * k], indices[2 * k + 1]
            degrees[b] = degrees[a]
        want = n if force_acyclic else rng.randrange(0, n + 1)
        pairs, used = _rand_pairing(
            rng, n, perm, degrees, want, clean_orbits=force_acyclic
        )
        if force_acyclic and len(used) < n:
            continue
        d = BitMatrix.from_pairs(n, n, pairs)
        if not (d @ d).is_zero():
            continue
        iota = BitMatrix.permutation(perm)
        if (iota @ d) != (d @ iota):
            continue
        if conjugate and n >= 2:
            g = rand_equivariant_auto(rng, n, perm, degrees)
            try:
                ginv = g.inverse()
            except Exception:
                continue
            d = g @ d @ ginv
            iota_m = g @ iota @ ginv
        else:
            iota_m = iota
        if not (d @ d).is_zero():
            continue
        gens = [Generator(f"g{i}", degrees[i]) for i in range(n)]
        c = GradedComplex("GF2", gens, d, grading="Z2")
        try:
            return InvolutiveComplex(c, iota_m)
        except Exception:
            continue
