"""Cheap bounding algorithms used to bracket the makespan search.

``greedy_bound`` is a list-scheduling heuristic whose makespan is a valid
upper bound on the optimum; ``lst_two_approx`` is the classic LP-rounding
2-approximation (restrict to fast-enough pairs, solve the fractional
relaxation at a vertex, match the fractional jobs one per machine).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalInvariantViolation
from .exactlp import LinearProgram, solve_lp
from .instance import Instance, Schedule, evaluate_makespan
from .netflow import FlowNetwork, max_flow_integral

__all__ = ["greedy_bound", "lst_two_approx"]


def greedy_bound(inst: Instance) -> tuple[Schedule, Fraction]:
    """List scheduling: longest job first onto the machine it loads least.

    Jobs are taken in decreasing order of their best processing time (ties
    by job index); each goes to the machine minimizing the resulting load
    (ties by machine id).  The returned makespan is an upper bound on the
    optimum, and never worse than putting everything in one place.
    """
    machines = list(inst.machines())
    loads = [Fraction(0)] * len(machines)
    order = sorted(
        range(inst.n),
        key=lambda j: (-min(inst.processing[t][j] for t in range(inst.k)), j),
    )
    assignment: list = [None] * inst.n
    for j in order:
        best = min(
            range(len(machines)),
            key=lambda mi: (loads[mi] + inst.processing[machines[mi][0]][j], mi),
        )
        loads[best] += inst.processing[machines[best][0]][j]
        assignment[j] = machines[best]
    sched = Schedule(assignment=tuple(assignment))
    return sched, max(loads, default=Fraction(0))


def _fractional_lp(inst: Instance):
    """Shared LP skeleton: y_{job,machine} in [0,1], then the makespan var T.

    Rows: each job assigned once; each machine's load at most T.  Threshold
    restrictions enter through per-call bound overrides.
    """
    machines = list(inst.machines())
    n, m = inst.n, len(machines)
    num = n * m + 1
    T_var = n * m
    zero = Fraction(0)
    constraints = []
    for j in range(n):
        row = [zero] * num
        for mi in range(m):
            row[j * m + mi] = Fraction(1)
        constraints.append((tuple(row), "=", Fraction(1)))
    for mi in range(m):
        t = machines[mi][0]
        row = [zero] * num
        for j in range(n):
            row[j * m + mi] = inst.processing[t][j]
        row[T_var] = Fraction(-1)
        constraints.append((tuple(row), "<=", zero))
    objective = tuple(zero if v != T_var else Fraction(1) for v in range(num))
    lp = LinearProgram(
        num_vars=num,
        constraints=tuple(constraints),
        lower=tuple([zero] * num),
        upper=tuple([Fraction(1)] * (n * m) + [None]),
        objective=objective,
    )
    return lp, machines, T_var


def lst_two_approx(inst: Instance) -> tuple[Schedule, Fraction]:
    """2-approximation for the makespan via LP rounding.

    For each candidate threshold g (a distinct processing time) only pairs
    with time at most g may be used; the fractional LP minimizes the
    makespan T subject to T >= g.  The best LP value over thresholds is a
    lower bound on the optimum, because the threshold equal to the longest
    job used by an optimal schedule is among the candidates.  Rounding a
    vertex solution hands each machine at most one fractional job of time
    at most g <= T, so the produced makespan is at most twice the optimum.
    Returns the schedule and its (exact) makespan.
    """
    n = inst.n
    if n == 0:
        return Schedule(assignment=()), Fraction(0)
    lp, machines, T_var = _fractional_lp(inst)
    m = len(machines)
    values = sorted(
        {inst.processing[t][j] for t in range(inst.k) for j in range(n)}
    )
    g_min = max(
        min(inst.processing[t][j] for t in range(inst.k)) for j in range(n)
    )
    best = None  # (T*, point, g)
    for g in values:
        if g < g_min:
            continue
        if best is not None and g > best[0]:
            break
        upper: list = [None] * lp.num_vars
        for j in range(n):
            for mi in range(m):
                t = machines[mi][0]
                upper[j * m + mi] = (
                    Fraction(1) if inst.processing[t][j] <= g else Fraction(0)
                )
        lower = [Fraction(0)] * lp.num_vars
        lower[T_var] = g
        res = solve_lp(lp, lower=tuple(lower), upper=tuple(upper))
        if res.status != "optimal":
            raise InternalInvariantViolation("fractional relaxation not optimal")
        if best is None or res.value < best[0]:
            best = (res.value, res.point, g)
    if best is None:
        raise InternalInvariantViolation("no feasible threshold found")
    _tstar, point, _g = best

    assignment: list = [None] * n
    fractional = []
    for j in range(n):
        ys = [(mi, point[j * m + mi]) for mi in range(m) if point[j * m + mi] > 0]
        whole = [mi for mi, y in ys if y == 1]
        if whole:
            assignment[j] = machines[whole[0]]
        else:
            fractional.append((j, [mi for mi, _y in ys]))
    if fractional:
        # match each fractional job to one of its machines, one job per
        # machine; a vertex solution's support is a pseudoforest, so a
        # perfect matching on the fractional side always exists
        source = 0
        sink = 1 + len(fractional) + m
        net = FlowNetwork(num_nodes=sink + 1, source=source, sink=sink)
        job_edges = {}
        for idx, (j, mis) in enumerate(fractional):
            net.add_edge(source, 1 + idx, 1)
            for mi in mis:
                job_edges[(idx, mi)] = net.add_edge(1 + idx, 1 + len(fractional) + mi, 1)
        for mi in range(m):
            net.add_edge(1 + len(fractional) + mi, sink, 1)
        flow = max_flow_integral(net)
        if flow.value != len(fractional):
            raise InternalInvariantViolation("fractional jobs admit no perfect matching")
        for idx, (j, mis) in enumerate(fractional):
            chosen = [mi for mi in mis if flow.flows[job_edges[(idx, mi)]] == 1]
            if len(chosen) != 1:
                raise InternalInvariantViolation("matching is not one-to-one")
            assignment[j] = machines[chosen[0]]
    sched = Schedule(assignment=tuple(assignment))
    return sched, evaluate_makespan(inst, sched)
