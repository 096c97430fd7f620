import math
import random

import numpy as np
import pytest

from equihf.czpaths import (
    Cat,
    CrossingError,
    DirectSum,
    RotArc,
    block_lift,
    conley_zehnder,
    endpoint,
    exp_arc,
    mu_difference_numeric,
    parse_path,
    path_point,
    square_path,
    verify_cz_krein,
    winding_number,
)
from equihf.symplinalg import BlockSpec, SympError


def test_exp_arc_examples():
    # positive definite form: index 0
    assert conley_zehnder(exp_arc([[1.0, 0.0], [0.0, 1.0]], 0.01)) == 0
    # negative definite: index 2
    assert conley_zehnder(exp_arc([[-1.0, 0.0], [0.0, -1.0]], 0.01)) == 2
    # hyperbolic pq: index 1
    assert conley_zehnder(exp_arc([[0.0, 1.0], [1.0, 0.0]], 0.01)) == 1


def test_half_turn_pattern():
    # rot(pi) then exp of pq: mu = i(Q) - 1 = 0
    p = Cat((RotArc(0, math.pi), exp_arc([[0.0, 1.0], [1.0, 0.0]], 0.01)))
    assert conley_zehnder(p) == 0


def test_crossing_detected():
    # a rotation arc of angle > 2 pi crosses eigenvalue 1
    with pytest.raises(CrossingError):
        conley_zehnder(exp_arc([[7.0, 0.0], [0.0, 7.0]], 1.0))


def test_block_lift_indices():
    assert conley_zehnder(block_lift(BlockSpec("i+", (0.5,)))) == 1
    assert conley_zehnder(block_lift(BlockSpec("i-", (-0.5,)))) == 0
    assert conley_zehnder(block_lift(BlockSpec("ii+", (0.0, 1.0)))) == 0
    assert conley_zehnder(block_lift(BlockSpec("ii-", (0.0, -1.0)))) == 2
    assert conley_zehnder(block_lift(BlockSpec("iii", (0.3, 0.4)))) == 2


def test_cz_krein_single_blocks():
    # i-: kappa - n = -1; mu = 0, mu^2 = -1
    rep = verify_cz_krein([BlockSpec("i-", (-0.5,))])
    assert rep["holds"] and rep["lhs"] == -1
    assert rep["mu"] == 0 and rep["mu_squared"] == -1
    rep2 = verify_cz_krein([BlockSpec("ii+", (0.0, 1.0))])
    assert rep2["holds"] and rep2["lhs"] == 0
    assert rep2["mu"] == 0 and rep2["mu_squared"] == 0


def rand_block(rng):
    t = rng.random()
    if t < 0.25:
        return BlockSpec("i+", (0.05 + 0.9 * rng.random(),))
    if t < 0.5:
        return BlockSpec("i-", (-0.95 + 0.9 * rng.random(),))
    if t < 0.85:
        theta = (0.1 + 0.75 * rng.random()) * math.pi
        sgn = 1.0 if rng.random() < 0.5 else -1.0
        return BlockSpec(
            "ii+" if sgn > 0 else "ii-",
            (math.cos(theta), sgn * math.sin(theta)),
        )
    a1 = -0.7 + 1.4 * rng.random()
    a2 = 0.1 + 0.5 * rng.random()
    if a1 * a1 + a2 * a2 > 1:
        a1, a2 = a1 / 2, a2 / 2
    return BlockSpec("iii", (a1, a2))


def test_cz_krein_random_sums():
    rng = random.Random(31337)
    for _ in range(60):
        specs = []
        half = 0
        target = rng.randrange(1, 4)
        while half < target:
            b = rand_block(rng)
            if half + b.half_dim <= target:
                specs.append(b)
                half += b.half_dim
        rep = verify_cz_krein(specs)
        assert rep["holds"], (specs, rep)


def test_numeric_square_consistency():
    rep = verify_cz_krein(
        [BlockSpec("i-", (-0.5,)), BlockSpec("ii+", (0.0, 1.0))],
        numeric_check=True,
    )
    assert rep["numeric_consistent"]


def test_winding_of_full_loop():
    # anticlockwise full turn: winding +1, and it decreases mu by 2;
    # check via two lifts of the same rotation endpoint
    theta = 0.7
    e1 = exp_arc([[theta, 0.0], [0.0, theta]])
    from equihf.czpaths import LoopOffset

    e2 = LoopOffset(1, e1)
    assert conley_zehnder(e2) == conley_zehnder(e1) - 2
    assert mu_difference_numeric(e2, e1) == -2
    assert abs(winding_number(e2) - winding_number(e1) - 1.0) < 0.01


def test_parse_path():
    p = parse_path("cat(rot(1,3.141592653589793), exp([0,1;1,0], 0.01))")
    assert conley_zehnder(p) == 0
    s = parse_path("sum(exp([1,0;0,1],0.01), exp([-1,0;0,-1],0.01))")
    assert conley_zehnder(s) == 2


def test_endpoint_not_sp_star_rejected():
    with pytest.raises(SympError):
        conley_zehnder(exp_arc([[1.0, 0.0], [0.0, -1.0]], 1e-9))


def test_degenerate_form_rejected():
    with pytest.raises(Exception):
        conley_zehnder(exp_arc([[1.0, 0.0], [0.0, 0.0]], 0.01))
