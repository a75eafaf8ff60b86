"""Makespan pipeline: rounding, configuration enumeration, end-to-end tries."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typesched.errors import ConfigExplosion
from typesched.instance import INFINITY, evaluate_makespan, generate_instance
from typesched.makespan import (
    EptasParams,
    Trace,
    enumerate_configurations,
    geometric_round,
    grid_round_down,
    grid_round_up,
    makespan_lower_bound,
    solve_makespan,
    try_makespan,
)
from typesched.instance import serialize_schedule
from typesched.oracle import brute_force_makespan

from util import brute_instances

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


# ---------------------------------------------------------------- rounding


def test_grid_round_up_frozen():
    # eps = 1/2: grid cell 1/4, base 3/2; 3/10 rounds up to (3/2)*(1/4) = 3/8
    ri = geometric_round(
        _single(Fraction(3, 10)), T=Fraction(1), eps=HALF
    )
    assert ri.rounded[0][0] == Fraction(3, 8)


def _single(p):
    from typesched.instance import Instance

    return Instance(k=1, n=1, processing=((p,),), multiplicities=(1,))


def test_round_boundaries():
    # exactly the cell size stays put and is small, not big
    ri = geometric_round(_single(QUARTER), T=Fraction(1), eps=HALF)
    assert ri.rounded[0][0] == QUARTER
    assert ri.small_sizes == ((QUARTER,),) and ri.big_sizes == ((),)
    # above the target becomes infinite
    ri = geometric_round(_single(Fraction(11, 10)), T=Fraction(1), eps=HALF)
    assert ri.rounded[0][0] is INFINITY
    # zero stays zero and is recorded as a (small) group
    ri = geometric_round(_single(Fraction(0)), T=Fraction(1), eps=HALF)
    assert ri.rounded[0][0] == 0
    assert ri.groups[(0, Fraction(0))] == (0,)


def test_round_nonpositive_target():
    with pytest.raises(ValueError):
        geometric_round(_single(Fraction(1)), T=Fraction(0), eps=HALF)


@given(
    num=st.integers(min_value=1, max_value=400),
    den=st.integers(min_value=1, max_value=50),
    enum=st.integers(min_value=1, max_value=9),
    eden=st.integers(min_value=2, max_value=10),
)
@settings(max_examples=200, deadline=None)
def test_rounding_sandwich(num, den, enum, eden):
    # for 0 < p <= T the rounded size satisfies p <= pbar <= (1+eps) p
    eps = Fraction(enum, eden)
    if eps >= 1:
        eps = Fraction(1, eden)
    T = Fraction(8)
    p = Fraction(num, den)
    if p > T:
        p = T
    ri = geometric_round(_single(p), T=T, eps=eps)
    pbar = ri.rounded[0][0]
    assert p <= pbar <= (1 + eps) * p
    # and it sits on the grid: pbar / (eps^2 T) is a power of (1+eps)
    x, v = grid_round_up(pbar / (eps * eps * T), 1 + eps)
    assert v == pbar / (eps * eps * T)


def test_grid_round_down():
    base = Fraction(3, 2)
    x, v = grid_round_down(Fraction(2), base)
    assert v == base and x == 1  # 3/2 <= 2 < 9/4
    x, v = grid_round_down(Fraction(1), base)
    assert v == 1 and x == 0
    x, v = grid_round_down(Fraction(1, 2), base)
    assert v == Fraction(4, 9) and x == -2


# ------------------------------------------------------- configurations


def test_enumeration_frozen():
    # sizes {5, 3}, capacity 10: seven configurations in canonical order
    cfgs = enumerate_configurations(
        (Fraction(3), Fraction(5)), T_bar=Fraction(10), eps=QUARTER
    )
    assert [c.counts for c in cfgs] == [
        (0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0)
    ]
    assert all(c.sizes == (Fraction(5), Fraction(3)) for c in cfgs)
    assert cfgs[3].size == 9 and cfgs[3].count(Fraction(3)) == 3
    assert cfgs[5].total_jobs == 2


def test_enumeration_job_cap():
    # eps = 1/2 caps configurations at floor(1/eps^2) = 4 jobs
    cfgs = enumerate_configurations((Fraction(1),), T_bar=Fraction(10), eps=HALF)
    assert [c.counts for c in cfgs] == [(0,), (1,), (2,), (3,), (4,)]


def test_enumeration_min_size():
    cfgs = enumerate_configurations(
        (Fraction(3), Fraction(5)),
        T_bar=Fraction(10),
        eps=QUARTER,
        min_size=Fraction(5),
    )
    assert {c.counts for c in cfgs} == {(0, 2), (0, 3), (1, 1), (2, 0)}


def test_enumeration_matches_product_filter():
    rng = random.Random(31)
    for _ in range(30):
        eps = rng.choice([HALF, Fraction(1, 3), QUARTER])
        T_bar = Fraction(rng.randint(4, 30))
        num_sizes = rng.randint(0, 4)
        sizes = set()
        while len(sizes) < num_sizes:
            sizes.add(Fraction(rng.randint(1, 12)))
        sizes = tuple(sorted(sizes, reverse=True))
        min_size = rng.choice([None, Fraction(rng.randint(0, 8))])
        cfgs = enumerate_configurations(sizes, T_bar, eps, min_size=min_size)
        max_jobs = int(1 / (eps * eps))
        ranges = [range(int(T_bar / p) + 1) for p in sizes]
        naive = set()
        for counts in itertools.product(*ranges):
            total = sum(c * p for c, p in zip(counts, sizes))
            if total > T_bar or sum(counts) > max_jobs:
                continue
            if min_size is not None and total <= min_size:
                continue
            naive.add(counts)
        assert {c.counts for c in cfgs} == naive
        for c in cfgs:
            assert c.total_jobs <= max_jobs and c.size <= T_bar


def test_config_explosion():
    with pytest.raises(ConfigExplosion):
        enumerate_configurations(
            (Fraction(1), Fraction(2)), T_bar=Fraction(40), eps=Fraction(1, 8),
            config_limit=10,
        )


# ------------------------------------------------------------ end to end


def test_lower_bound():
    inst = generate_instance(k=2, n=5, multiplicities=(1, 1), p_max=9, seed=4)
    lb = makespan_lower_bound(inst)
    opt, _ = brute_force_makespan(inst)
    assert 0 < lb <= opt


def test_try_at_opt_never_rejects():
    rng = random.Random(37)
    for _ in range(15):
        inst = brute_instances(rng, max_n=5, max_m=3)
        opt, _ = brute_force_makespan(inst)
        for eps in (HALF, Fraction(1, 3)):
            params = EptasParams(epsilon=eps)
            sched = try_makespan(inst, opt, params)
            assert sched is not None
            val = evaluate_makespan(inst, sched)
            assert val <= (1 + 2 * eps + 2 * eps * eps) * opt


def test_try_below_reach_returns_none():
    # two unit jobs on one machine cannot finish by T = 1
    from typesched.instance import Instance

    inst = Instance(
        k=1, n=2, processing=((Fraction(1), Fraction(1)),), multiplicities=(1,)
    )
    params = EptasParams(epsilon=HALF)
    trace = Trace()
    assert try_makespan(inst, Fraction(1), params, trace) is None
    assert trace.tries[-1].feasible is False


def test_solve_guarantee_and_trace():
    rng = random.Random(41)
    for _ in range(10):
        inst = brute_instances(rng, max_n=5, max_m=3)
        opt, _ = brute_force_makespan(inst)
        eps = Fraction(1, 3)
        trace = Trace()
        sched = solve_makespan(inst, EptasParams(epsilon=eps), trace)
        val = evaluate_makespan(inst, sched)
        assert val <= (1 + 2 * eps + 2 * eps * eps) * (1 + eps) * opt
        # every accepted try routed all jobs through the rounding network
        for rec in trace.tries:
            if rec.feasible:
                assert rec.flow_value == inst.n


def test_solve_zero_times():
    from typesched.instance import Instance

    inst = Instance(
        k=1, n=3, processing=(((Fraction(0),) * 3),), multiplicities=(2,)
    )
    sched = solve_makespan(inst, EptasParams(epsilon=HALF))
    assert evaluate_makespan(inst, sched) == 0


def test_solve_deterministic():
    inst = generate_instance(k=2, n=7, multiplicities=(2, 2), p_max=20, seed=8)
    params = EptasParams(epsilon=QUARTER)
    a = solve_makespan(inst, params)
    b = solve_makespan(inst, params)
    assert serialize_schedule(a) == serialize_schedule(b)


def test_params_validation():
    with pytest.raises(ValueError):
        EptasParams(epsilon=Fraction(0))
    with pytest.raises(ValueError):
        EptasParams(epsilon=Fraction(3, 2))
