import math
import random

import numpy as np
import pytest

from equihf.symplinalg import (
    BlockSpec,
    HamMatrix,
    SympError,
    SympMatrix,
    build_block,
    cayley,
    cayley_inv,
    component_invariant,
    direct_sum,
    ham_from_form,
    krein_index,
    morse_index,
    omega_matrix,
    representative_for,
)


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_membership():
    ident = SympMatrix(np.eye(2))
    assert ident.membership() == {"Sp": True, "Sp*": False, "Sp**": False}
    a = SympMatrix(np.diag([0.5, 2.0]))
    assert a.membership()["Sp**"]
    rpi = SympMatrix(rotation(math.pi))
    m = rpi.membership()
    assert m["Sp*"] and not m["Sp**"]
    with pytest.raises(SympError):
        SympMatrix(np.diag([2.0, 2.0]))


def test_cayley_roundtrip_and_spectrum():
    b = HamMatrix(np.diag([2.0, -2.0]))
    a = cayley(b)
    back = cayley_inv(a)
    assert np.abs(back.mat - b.mat).max() < 1e-9
    rng = np.random.default_rng(5)
    for _ in range(30):
        s = rng.normal(size=(4, 4))
        s = s + s.T
        try:
            bm = ham_from_form(s)
            am = cayley(bm)
        except SympError:
            continue
        evb = np.sort_complex(np.linalg.eigvals(bm.mat))
        eva = np.sort_complex((evb + 1) / (evb - 1))
        assert np.allclose(
            np.sort_complex(np.linalg.eigvals(am.mat)), eva, atol=1e-7
        )
        back2 = cayley_inv(am)
        assert np.abs(back2.mat - bm.mat).max() < 1e-8
    with pytest.raises(SympError):
        cayley(HamMatrix(np.diag([1.0, -1.0])))


def test_krein_basic():
    r = SympMatrix(rotation(0.7))
    res = krein_index(r)
    assert res.kappa == 1 and res.e_dim == 1
    res2 = krein_index(SympMatrix(rotation(-0.7)))
    assert res2.kappa == -1
    assert krein_index(SympMatrix(np.diag([0.5, 2.0]))).kappa == 0
    both = SympMatrix(direct_sum([rotation(0.7), rotation(-0.7)]))
    assert krein_index(both).kappa == 0


def test_krein_epsilon_path():
    # kappa(exp(tB)) = n - morse_index(Q) for small t
    from scipy.linalg import expm

    rng = np.random.default_rng(11)
    for _ in range(40):
        n = rng.integers(1, 4)
        s = rng.normal(size=(2 * n, 2 * n))
        s = s + s.T
        try:
            iq = morse_index(s)
        except Exception:
            continue
        b = ham_from_form(s)
        a = SympMatrix(expm(0.01 * b.mat), tol_sp=1e-7)
        if not a.in_sp_star_star():
            continue
        assert krein_index(a).kappa == n - iq


def test_block_table():
    # ii+ at (0,1) is rotation by pi/2 and det(I-A) = 2 > 0
    b = build_block(BlockSpec("ii+", (0.0, 1.0)))
    assert np.allclose(b, rotation(math.pi / 2))
    assert np.linalg.det(np.eye(2) - b) > 0
    # i+ with a=1/2 has det(I-A) < 0
    c = build_block(BlockSpec("i+", (0.5,)))
    assert np.linalg.det(np.eye(2) - c) < 0
    # iii with a2 = 0 equals two i+ blocks up to coordinate interleaving
    d = build_block(BlockSpec("iii", (0.5, 0.0)))
    ev = np.sort(np.linalg.eigvals(d).real)
    assert np.allclose(ev, [0.5, 0.5, 2.0, 2.0])
    a = SympMatrix(d)
    assert krein_index(a).kappa == 0
    with pytest.raises(SympError):
        BlockSpec("i+", (1.5,))
    with pytest.raises(SympError):
        BlockSpec("iii", (1.0, 0.1))


def test_component_classification():
    # the n = 1 table: (i+), (i-), (ii+), (ii-) give (-1,0), (1,0), (1,1), (1,-1)
    vals = {
        "i+": (-1, 0),
        "i-": (1, 0),
        "ii+": (1, 1),
        "ii-": (1, -1),
    }
    for kind, expect in vals.items():
        p = (0.5,) if kind == "i+" else (-0.5,) if kind == "i-" else (
            (0.0, 1.0) if kind == "ii+" else (0.0, -1.0)
        )
        a = SympMatrix(build_block(BlockSpec(kind, p)))
        assert component_invariant(a) == expect
    # round trip for all admissible (s, k), n <= 4
    for n in range(1, 5):
        for s in (1, -1):
            kmax = n if s == 1 else n - 1
            for k in range(-kmax, kmax + 1):
                a = representative_for(s, k, n)
                assert component_invariant(a) == (s, k)
    # inadmissible pairs rejected
    with pytest.raises(SympError):
        representative_for(-1, 1, 1)
    with pytest.raises(SympError):
        representative_for(1, 3, 2)
    with pytest.raises(SympError):
        representative_for(-1, 2, 2)


def test_krein_local_constancy():
    rng = np.random.default_rng(42)
    count = 0
    while count < 50:
        n = int(rng.integers(1, 4))
        blocks = []
        for _ in range(n):
            t = rng.random()
            if t < 0.4:
                blocks.append(build_block(BlockSpec("i+", (0.3 + 0.4 * rng.random(),))))
            elif t < 0.6:
                blocks.append(build_block(BlockSpec("i-", (-0.7 + 0.4 * rng.random(),))))
            else:
                th = 0.3 + 2.4 * rng.random()  # keep away from 0 and pi
                sgn = 1.0 if rng.random() < 0.5 else -1.0
                blocks.append(rotation(sgn * th))
        a = SympMatrix(direct_sum(blocks))
        ev = np.linalg.eigvals(a.mat)
        if np.min(np.abs(ev - 1)) < 0.05 or np.min(np.abs(ev + 1)) < 0.05:
            continue
        count += 1
        k0 = krein_index(a).kappa
        # re-symplectified perturbation of size 1e-6
        pert = a.mat + 1e-6 * rng.normal(size=a.mat.shape)
        j = omega_matrix(a.n)
        # one Newton-like resymplectification step: S -> S (I + J (S^T J S - J)/2)
        defect = pert.T @ j @ pert - j
        pert2 = pert @ (np.eye(2 * a.n) - 0.5 * np.linalg.inv(j) @ defect)
        a2 = SympMatrix(pert2, tol_sp=1e-6)
        assert krein_index(a2).kappa == k0
