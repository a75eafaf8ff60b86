"""Exact simplex against a vertex-enumeration oracle."""

import random
from fractions import Fraction

import pytest

from typesched.exactlp import (
    LinearProgram,
    solve_lp,
    verify_farkas,
    verify_point,
)

from util import lp_optimum_by_vertices, random_box_lp

F = Fraction


def test_known_optimum():
    # min x+y s.t. x+2y >= 4, 2x+y >= 4: optimum 8/3 at (4/3, 4/3)
    lp = LinearProgram(
        num_vars=2,
        constraints=(
            ((F(1), F(2)), ">=", F(4)),
            ((F(2), F(1)), ">=", F(4)),
        ),
        objective=(F(1), F(1)),
    )
    res = solve_lp(lp)
    assert res.status == "optimal"
    assert res.value == F(8, 3)
    assert res.point == (F(4, 3), F(4, 3))
    assert verify_point(lp, res.point)


def test_feasibility_only():
    lp = LinearProgram(
        num_vars=2,
        constraints=(((F(1), F(1)), "=", F(3)),),
        upper=(F(2), F(2)),
    )
    res = solve_lp(lp)
    assert res.status == "optimal"
    assert verify_point(lp, res.point)
    assert sum(res.point) == 3


def test_infeasible_with_certificate():
    lp = LinearProgram(
        num_vars=1,
        constraints=(((F(1),), ">=", F(5)),),
        upper=(F(2),),
    )
    res = solve_lp(lp)
    assert res.status == "infeasible"
    assert res.farkas is not None
    assert verify_farkas(lp, res.farkas)


def test_contradictory_rows_certificate():
    lp = LinearProgram(
        num_vars=2,
        constraints=(
            ((F(1), F(1)), ">=", F(4)),
            ((F(1), F(1)), "<=", F(3)),
        ),
    )
    res = solve_lp(lp)
    assert res.status == "infeasible"
    assert verify_farkas(lp, res.farkas)


def test_crossed_bounds_infeasible():
    lp = LinearProgram(num_vars=1, constraints=(), lower=(F(3),), upper=(F(2),))
    res = solve_lp(lp)
    assert res.status == "infeasible"
    assert res.farkas is None  # bound contradictions carry no row certificate


def test_unbounded():
    lp = LinearProgram(
        num_vars=1,
        constraints=(((F(1),), ">=", F(0)),),
        objective=(F(-1),),
    )
    assert solve_lp(lp).status == "unbounded"


def test_bound_overrides():
    lp = LinearProgram(
        num_vars=2,
        constraints=(((F(1), F(1)), "<=", F(10)),),
        upper=(F(8), F(8)),
        objective=(F(-1), F(0)),
    )
    assert solve_lp(lp).value == -8
    assert solve_lp(lp, upper=(F(5), F(8))).value == -5
    assert solve_lp(lp, lower=(F(6), F(0)), upper=(F(5), F(8))).status == "infeasible"


def test_agrees_with_vertex_enumeration():
    rng = random.Random(7)
    optimal = infeasible = 0
    for _ in range(100):
        lp = random_box_lp(rng)
        res = solve_lp(lp)
        status, best = lp_optimum_by_vertices(lp)
        assert res.status == status, lp
        if status == "optimal":
            optimal += 1
            assert res.value == best, lp
            assert verify_point(lp, res.point)
            obj = sum(c * v for c, v in zip(lp.objective, res.point))
            assert obj == res.value
        else:
            infeasible += 1
            assert res.farkas is not None
            assert verify_farkas(lp, res.farkas), lp
    # both outcomes must actually be exercised
    assert optimal > 10 and infeasible > 10


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearProgram(num_vars=2, constraints=(((F(1),), "<=", F(1)),))
    with pytest.raises(ValueError):
        LinearProgram(num_vars=1, constraints=(((F(1),), "<", F(1)),))
    with pytest.raises(ValueError):
        LinearProgram(num_vars=1, constraints=(), objective=(F(1), F(2)))
