"""Max-min (Santa Claus) EPTAS for machines with few types.

Mirror image of the makespan pipeline.  For a target value T the times are
capped at T and rounded *down* onto the grid (1-eps)^x * eps^2*T, machine
configurations are enumerated up to P = (1-eps)*T + (largest big size), the
covering MILP requires every machine to reach T_low = (1-eps)*T, and the
fractional assignment is rounded with a flow that has lower bounds (demands)
on the size edges.  A geometric search from a certified upper bound yields a
schedule whose minimum load is at least (1 - 3*eps)(1 - eps) times the
optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

from .errors import InfeasibleDemands, InternalInvariantViolation
from .exactlp import LinearProgram
from .instance import Instance, Schedule
from .makespan import (
    Configuration,
    EptasParams,
    Trace,
    TryRecord,
    enumerate_configurations,
    grid_round_down,
)
from .milp import MilpModel, solve_milp
from .netflow import FlowNetwork, feasible_flow_with_demands

__all__ = [
    "SantaRounded",
    "SplitConfigurations",
    "geometric_round_down",
    "enumerate_configurations_bounded",
    "build_santa_milp",
    "integralize_santa",
    "assemble_santa_schedule",
    "try_santa",
    "solve_santa",
]


@dataclass(frozen=True)
class SantaRounded:
    """Times capped at T and rounded down, plus MILP bookkeeping.

    Every capped time is positive, so every rounded time is a genuine grid
    value; sizes above eps^2*T are big, the rest small.
    """

    rounded: tuple[tuple[Fraction, ...], ...]
    big_sizes: tuple[tuple[Fraction, ...], ...]  # descending per type
    small_sizes: tuple[tuple[Fraction, ...], ...]  # descending per type
    groups: dict  # (type, rounded size) -> tuple of job indices
    T: Fraction
    T_low: Fraction
    P: tuple[Fraction, ...]  # per-type configuration size cap
    eps: Fraction


@dataclass(frozen=True)
class SplitConfigurations:
    """Configurations of one type, split at T_low.

    ``small`` holds configurations of size at most T_low (including the
    empty one); ``big`` those of size in (T_low, P].
    """

    small: tuple[Configuration, ...]
    big: tuple[Configuration, ...]

    @property
    def all(self) -> tuple[Configuration, ...]:
        return self.small + self.big


def geometric_round_down(inst: Instance, T: Fraction, eps: Fraction) -> SantaRounded:
    """Cap times at T, then round down onto the (1-eps)^x * eps^2*T grid.

    Requires every processing time positive.  Rounding shrinks a capped time
    by a factor of at most (1-eps); big sizes are those above eps^2*T.
    """
    if T <= 0:
        raise ValueError("target value must be positive")
    base = Fraction(1) / (1 - eps)  # work with a >1 base for the grid walk
    cell = eps * eps * T
    rounded = []
    groups: dict = {}
    big: list[set] = [set() for _ in range(inst.k)]
    small: list[set] = [set() for _ in range(inst.k)]
    for t in range(inst.k):
        row = []
        for j in range(inst.n):
            p = min(inst.processing[t][j], T)
            if p <= 0:
                raise ValueError("max-min rounding needs positive processing times")
            # largest (1-eps)^x * cell <= p  ==  cell / base**y with smallest y
            _x, v = grid_round_down(p / cell, base)
            pbar = v * cell
            row.append(pbar)
            groups.setdefault((t, pbar), []).append(j)
            (big[t] if pbar > cell else small[t]).add(pbar)
        rounded.append(tuple(row))
    return SantaRounded(
        rounded=tuple(rounded),
        big_sizes=tuple(tuple(sorted(b, reverse=True)) for b in big),
        small_sizes=tuple(tuple(sorted(s, reverse=True)) for s in small),
        groups={k: tuple(v) for k, v in groups.items()},
        T=T,
        T_low=(1 - eps) * T,
        P=tuple((1 - eps) * T + (max(b) if b else Fraction(0)) for b in big),
        eps=eps,
    )


def enumerate_configurations_bounded(
    big_sizes: tuple[Fraction, ...],
    T_low: Fraction,
    P: Fraction,
    eps: Fraction,
    config_limit: int,
) -> SplitConfigurations:
    """Configurations up to size P, split into small (<= T_low) and big."""
    small = enumerate_configurations(big_sizes, T_low, eps, config_limit)
    big = enumerate_configurations(big_sizes, P, eps, config_limit, min_size=T_low)
    return SplitConfigurations(small=small, big=big)


def _var_layout(k: int, n: int, splits):
    z_off = []
    off = 0
    for t in range(k):
        z_off.append(off)
        off += len(splits[t].all)
    x_off = off
    return z_off, x_off, off + n * k


def _x_index(x_off: int, k: int, j: int, t: int) -> int:
    return x_off + j * k + t


def build_santa_milp(
    inst: Instance, sr: SantaRounded, splits: tuple[SplitConfigurations, ...]
) -> MilpModel:
    """Covering MILP: every machine must be loaded to at least T_low.

    Constraints: (1) chosen configurations per type equal the machine count;
    (2) each job fully assigned; (3) per type and big size, configuration
    slots are backed by enough assigned jobs; (4) per type, the small-config
    machines are covered: small-configuration sizes plus small-job load
    reach T_low times the number of machines not on a big configuration.
    """
    k, n = inst.k, inst.n
    z_off, x_off, num = _var_layout(k, n, splits)
    zero = Fraction(0)
    lower = [zero] * num
    upper: list = [None] * num
    for t in range(k):
        mt = Fraction(inst.multiplicities[t])
        for ci in range(len(splits[t].all)):
            upper[z_off[t] + ci] = mt
    for j in range(n):
        for t in range(k):
            upper[_x_index(x_off, k, j, t)] = Fraction(1)

    constraints = []
    # (1) configuration count per type
    for t in range(k):
        row = [zero] * num
        for ci in range(len(splits[t].all)):
            row[z_off[t] + ci] = Fraction(1)
        constraints.append((tuple(row), "=", Fraction(inst.multiplicities[t])))
    # (2) every job assigned once
    for j in range(n):
        row = [zero] * num
        for t in range(k):
            row[_x_index(x_off, k, j, t)] = Fraction(1)
        constraints.append((tuple(row), "=", Fraction(1)))
    # (3) enough jobs behind the big slots
    for t in range(k):
        for p in sr.big_sizes[t]:
            row = [zero] * num
            for j in sr.groups.get((t, p), ()):
                row[_x_index(x_off, k, j, t)] = Fraction(1)
            for ci, cfg in enumerate(splits[t].all):
                c = cfg.count(p)
                if c:
                    row[z_off[t] + ci] = Fraction(-c)
            constraints.append((tuple(row), ">=", zero))
    # (4) small-config machines covered to T_low
    for t in range(k):
        row = [zero] * num
        n_small = len(splits[t].small)
        for ci, cfg in enumerate(splits[t].small):
            row[z_off[t] + ci] = cfg.size - sr.T_low
        for ci, cfg in enumerate(splits[t].big):
            row[z_off[t] + n_small + ci] = zero
        for p in sr.small_sizes[t]:
            for j in sr.groups.get((t, p), ()):
                row[_x_index(x_off, k, j, t)] = p
        constraints.append((tuple(row), ">=", zero))

    lp = LinearProgram(
        num_vars=num,
        constraints=tuple(constraints),
        lower=tuple(lower),
        upper=tuple(upper),
    )
    mask = frozenset(
        z_off[t] + ci for t in range(k) for ci in range(len(splits[t].all))
    )
    return MilpModel(base=lp, integral_mask=mask)


def integralize_santa(
    point,
    inst: Instance,
    sr: SantaRounded,
    splits: tuple[SplitConfigurations, ...],
):
    """Round the fractional assignment via a flow with lower bounds.

    Size-to-sink edges carry a demand of floor(sum of x) and unlimited
    capacity, so each size keeps at least its rounded-down fractional job
    count while surplus jobs may pile onto any size they round to.  Returns
    (configuration counts, job->type map, flow value).
    """
    k, n = inst.k, inst.n
    z_off, x_off, num = _var_layout(k, n, splits)

    size_keys = [
        (t, p) for t in range(k) for p in sr.big_sizes[t] + sr.small_sizes[t]
    ]
    size_node = {key: 1 + n + i for i, key in enumerate(size_keys)}
    source = 0
    sink = 1 + n + len(size_keys)
    net = FlowNetwork(num_nodes=sink + 1, source=source, sink=sink)
    for j in range(n):
        net.add_edge(source, 1 + j, 1, demand=1)
    job_edges = {}
    for j in range(n):
        for t in range(k):
            p = sr.rounded[t][j]
            job_edges[(j, t)] = net.add_edge(1 + j, size_node[(t, p)], 1)
    for key in size_keys:
        t, _p = key
        frac = sum(
            (point[_x_index(x_off, k, j, t)] for j in sr.groups.get(key, ())),
            Fraction(0),
        )
        net.add_edge(size_node[key], sink, None, demand=floor(frac))

    try:
        flow = feasible_flow_with_demands(net)
    except InfeasibleDemands as exc:
        raise InternalInvariantViolation(
            "covering network has no feasible flow"
        ) from exc
    if flow.value != n:
        raise InternalInvariantViolation(
            f"covering network carries {flow.value} units, expected {n}"
        )

    x_bar = []
    for j in range(n):
        chosen = [t for t in range(k) if flow.flows[job_edges[(j, t)]] == 1]
        if len(chosen) != 1:
            raise InternalInvariantViolation(f"job {j} routed to {len(chosen)} types")
        x_bar.append(chosen[0])
    z = tuple(
        tuple(int(point[z_off[t] + ci]) for ci in range(len(splits[t].all)))
        for t in range(k)
    )
    return z, tuple(x_bar), flow.value


def assemble_santa_schedule(
    z: tuple[tuple[int, ...], ...],
    x: tuple[int, ...],
    inst: Instance,
    sr: SantaRounded,
    splits: tuple[SplitConfigurations, ...],
) -> Schedule:
    """Turn the integral covering solution into a schedule.

    Per type: hand out configurations, fill big slots by rounded size
    (ascending job index), then sweep the small-configuration machines with
    the small jobs, moving on just before a machine's rounded load would
    pass T_low.  Leftover jobs land on the last machine of their type.  The
    resulting rounded minimum load is at least (1 - 2*eps - 2*eps^2) * T.
    """
    k, n = inst.k, inst.n
    cell = sr.eps * sr.eps * sr.T
    assignment: list = [None] * n

    for t in range(k):
        cfgs = splits[t].all
        n_small = len(splits[t].small)
        machine_cfgs: list[tuple[Configuration, bool]] = []
        for ci, count in enumerate(z[t]):
            machine_cfgs.extend([(cfgs[ci], ci < n_small)] * count)
        if len(machine_cfgs) != inst.multiplicities[t]:
            raise InternalInvariantViolation(
                f"type {t}: configuration multiplicities sum to {len(machine_cfgs)}"
            )
        loads = [Fraction(0)] * len(machine_cfgs)
        slots: dict[Fraction, list[int]] = {}
        for mi, (cfg, _is_small) in enumerate(machine_cfgs):
            for p, c in zip(cfg.sizes, cfg.counts):
                for _ in range(c):
                    slots.setdefault(p, []).append(mi)
        jobs_t = [j for j in range(n) if x[j] == t]
        smalls = []
        overflow_big = []
        for j in jobs_t:
            p = sr.rounded[t][j]
            if p > cell:  # big rounded size
                free = slots.get(p)
                if free:
                    mi = free.pop(0)
                    loads[mi] += p
                    assignment[j] = (t, mi)
                else:
                    overflow_big.append(j)  # surplus unit from the demand flow
            else:
                smalls.append(j)
        # greedy cover of the small-config machines; a job that would push
        # the current machine past T_low moves the sweep on (the machine is
        # then already within one small size of T_low, and each machine
        # consumes no more than it needs, so the rounding loss cannot pile
        # up on the trailing machines)
        small_machines = [
            mi for mi, (_cfg, is_small) in enumerate(machine_cfgs) if is_small
        ]
        pos = 0
        for j in smalls:
            p = sr.rounded[t][j]
            while pos < len(small_machines) and loads[small_machines[pos]] + p > sr.T_low:
                pos += 1
            if pos >= len(small_machines):
                break
            mi = small_machines[pos]
            loads[mi] += p
            assignment[j] = (t, mi)
        # remaining small jobs and surplus big jobs go to the last machine
        leftovers = [j for j in smalls if assignment[j] is None] + overflow_big
        if leftovers:
            if not machine_cfgs:
                raise InternalInvariantViolation(
                    f"jobs assigned to type {t} with no machines"
                )
            mi = len(machine_cfgs) - 1
            for j in leftovers:
                assignment[j] = (t, mi)
                loads[mi] += sr.rounded[t][j]
        low = (1 - 2 * sr.eps - 2 * sr.eps**2) * sr.T
        short = [mi for mi, load in enumerate(loads) if load < low]
        if short:
            raise InternalInvariantViolation(
                f"type {t}: machines {short} not covered to the slack bound"
            )
    return Schedule(assignment=tuple(assignment))


def try_santa(
    inst: Instance,
    T: Fraction,
    params: EptasParams,
    trace: Optional[Trace] = None,
) -> Optional[Schedule]:
    """Schedule with minimum load >= (1 - 2*eps - 2*eps^2) * T, or None.

    None is only returned when provably no schedule with minimum load at
    least T exists.
    """
    eps = params.epsilon
    sr = geometric_round_down(inst, T, eps)
    splits = tuple(
        enumerate_configurations_bounded(
            sr.big_sizes[t], sr.T_low, sr.P[t], eps, params.config_limit
        )
        for t in range(inst.k)
    )
    model = build_santa_milp(inst, sr, splits)
    res = solve_milp(model, node_budget=params.node_budget)
    if not res.feasible:
        if trace is not None:
            trace.tries.append(
                TryRecord(T=T, rounded=sr, configs=splits, feasible=False)
            )
        return None
    z, x_bar, flow_value = integralize_santa(res.point, inst, sr, splits)
    sched = assemble_santa_schedule(z, x_bar, inst, sr, splits)
    if trace is not None:
        trace.tries.append(
            TryRecord(
                T=T, rounded=sr, configs=splits, feasible=True,
                flow_value=flow_value, assignment=(z, x_bar),
            )
        )
    return sched


def santa_upper_bound(inst: Instance) -> Fraction:
    """min over types of (total load on that type) / (machine count).

    Valid because moving every job onto the minimizing type cannot lower the
    best machine's share below the eventual optimum.
    """
    return min(
        sum(inst.processing[t], Fraction(0)) / inst.multiplicities[t]
        for t in range(inst.k)
    )


def solve_santa(
    inst: Instance,
    params: EptasParams,
    trace: Optional[Trace] = None,
) -> Schedule:
    """Geometric descent from a certified upper bound.

    Tries T = U, U*(1-eps), U*(1-eps)^2, ... and returns the first success,
    giving a minimum load of at least (1 - 3*eps)(1 - eps) * OPT for
    eps <= 1/2.  With fewer jobs than machines the optimum is zero and any
    schedule is returned.
    """
    if inst.n < inst.m:
        # some machine stays empty in every schedule, so the optimum is 0
        assignment = []
        for j in range(inst.n):
            t = min(range(inst.k), key=lambda t: (-inst.processing[t][j], t))
            assignment.append((t, 0))
        return Schedule(assignment=tuple(assignment))
    for t in range(inst.k):
        for j in range(inst.n):
            if inst.processing[t][j] <= 0:
                raise ValueError("max-min solving needs positive processing times")

    upper = santa_upper_bound(inst)
    # no schedule can beat the smallest processing time, so stop below it
    floor_val = min(min(row) for row in inst.processing)
    T = upper
    while True:
        sched = try_santa(inst, T, params, trace)
        if sched is not None:
            return sched
        T = (1 - params.epsilon) * T
        if T < floor_val * params.epsilon:
            raise InternalInvariantViolation(
                "max-min search descended below the certified floor"
            )
    # unreachable
