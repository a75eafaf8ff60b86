"""Makespan EPTAS for machines with few types.

Pipeline for one target value T: geometric rounding of the processing times
onto the grid (1+eps)^x * eps^2*T, enumeration of machine configurations of
big rounded sizes, a feasibility MILP choosing configurations integrally and
assigning jobs fractionally to types, flow-based rounding of the fractional
assignment, and greedy schedule assembly.  A dual-approximation binary
search wraps the pipeline: the returned schedule has makespan at most
(1 + 2*eps + 2*eps^2)(1 + eps) times the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional

from .errors import ConfigExplosion, InternalInvariantViolation
from .exactlp import LinearProgram
from .instance import INFINITY, Instance, Schedule
from .milp import DEFAULT_NODE_BUDGET, MilpModel, solve_milp
from .netflow import FlowNetwork, max_flow_integral

__all__ = [
    "EptasParams",
    "RoundedInstance",
    "Configuration",
    "IntegralAssignment",
    "Trace",
    "geometric_round",
    "enumerate_configurations",
    "build_milp",
    "integralize_solution",
    "assemble_schedule",
    "try_makespan",
    "solve_makespan",
    "grid_round_up",
    "grid_round_down",
]

DEFAULT_CONFIG_LIMIT = 50_000


@dataclass(frozen=True)
class EptasParams:
    epsilon: Fraction
    node_budget: int = DEFAULT_NODE_BUDGET
    config_limit: int = DEFAULT_CONFIG_LIMIT

    def __post_init__(self):
        eps = self.epsilon
        if not isinstance(eps, Fraction):
            object.__setattr__(self, "epsilon", Fraction(eps))
            eps = self.epsilon
        if not (0 < eps < 1):
            raise ValueError("epsilon must be a rational in (0, 1)")


@dataclass(frozen=True)
class Configuration:
    """Multiset of big rounded sizes placed on one machine.

    ``sizes`` is the full (descending) big-size tuple of the machine type;
    ``counts`` is aligned with it.  ``size`` is the summed processing time.
    """

    sizes: tuple[Fraction, ...]
    counts: tuple[int, ...]
    size: Fraction

    def count(self, p: Fraction) -> int:
        try:
            return self.counts[self.sizes.index(p)]
        except ValueError:
            return 0

    @property
    def total_jobs(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class RoundedInstance:
    """Rounded times plus the bookkeeping the MILP needs."""

    rounded: tuple[tuple, ...]  # Fraction or INFINITY per (type, job)
    big_sizes: tuple[tuple[Fraction, ...], ...]  # descending per type
    small_sizes: tuple[tuple[Fraction, ...], ...]  # descending per type
    groups: dict  # (type, rounded size) -> tuple of job indices
    T: Fraction
    T_bar: Fraction
    eps: Fraction


@dataclass(frozen=True)
class IntegralAssignment:
    """Integral MILP solution: configuration counts and a job->type map."""

    configs: tuple[tuple[Configuration, ...], ...]
    z: tuple[tuple[int, ...], ...]  # aligned with configs, per type
    x: tuple[int, ...]  # job -> machine type


@dataclass
class Trace:
    """Optional per-try recorder used by the verification suite."""

    tries: list = field(default_factory=list)


@dataclass(frozen=True)
class TryRecord:
    T: Fraction
    rounded: RoundedInstance
    configs: tuple[tuple[Configuration, ...], ...]
    feasible: bool
    flow_value: Optional[int] = None
    assignment: Optional[IntegralAssignment] = None


def grid_round_up(r: Fraction, base: Fraction) -> tuple[int, Fraction]:
    """Smallest (x, base**x) with base**x >= r; base > 1, r > 0."""
    x, v = 0, Fraction(1)
    if v >= r:
        while True:
            nv = v / base
            if nv >= r:
                v, x = nv, x - 1
            else:
                break
    else:
        while v < r:
            v, x = v * base, x + 1
    return x, v


def grid_round_down(r: Fraction, base: Fraction) -> tuple[int, Fraction]:
    """Largest (x, base**x) with base**x <= r; base > 1, r > 0."""
    x, v = grid_round_up(r, base)
    if v > r:
        v, x = v / base, x - 1
    return x, v


def geometric_round(inst: Instance, T: Fraction, eps: Fraction) -> RoundedInstance:
    """Round times up onto the (1+eps)^x * eps^2*T grid; times above T become infinite.

    Rounded sizes above eps^2*T are big, the rest small (zero times stay
    zero).  Rounding never shrinks a time and inflates it by at most (1+eps).
    """
    if T <= 0:
        raise ValueError("target makespan must be positive")
    base = 1 + eps
    cell = eps * eps * T
    rounded = []
    groups: dict = {}
    big: list[set] = [set() for _ in range(inst.k)]
    small: list[set] = [set() for _ in range(inst.k)]
    for t in range(inst.k):
        row = []
        for j in range(inst.n):
            p = inst.processing[t][j]
            if p > T:
                row.append(INFINITY)
                continue
            if p == 0:
                pbar = Fraction(0)
            else:
                _x, v = grid_round_up(p / cell, base)
                pbar = v * cell
            row.append(pbar)
            groups.setdefault((t, pbar), []).append(j)
            (big[t] if pbar > cell else small[t]).add(pbar)
        rounded.append(tuple(row))
    return RoundedInstance(
        rounded=tuple(rounded),
        big_sizes=tuple(tuple(sorted(b, reverse=True)) for b in big),
        small_sizes=tuple(tuple(sorted(s, reverse=True)) for s in small),
        groups={k: tuple(v) for k, v in groups.items()},
        T=T,
        T_bar=(1 + eps) * T,
        eps=eps,
    )


def enumerate_configurations(
    big_sizes: tuple[Fraction, ...],
    T_bar: Fraction,
    eps: Fraction,
    config_limit: int = DEFAULT_CONFIG_LIMIT,
    min_size: Optional[Fraction] = None,
) -> tuple[Configuration, ...]:
    """All configurations over ``big_sizes`` with total size at most ``T_bar``.

    Configurations carry at most floor(1/eps^2) jobs — enough to exceed any
    cover threshold below the size cap, since each big size is above
    eps^2 * (cap / (1+eps)) on the rounding grid.  When ``min_size`` is
    given only configurations with total size strictly above it are kept;
    otherwise the empty configuration is included.  Depth-first over sizes
    in decreasing order, counts growing from zero at each level, so the
    output order is canonical.  Raises :class:`ConfigExplosion` past
    ``config_limit``.
    """
    max_jobs = int(1 / (eps * eps))
    sizes = tuple(sorted(big_sizes, reverse=True))
    out: list[Configuration] = []
    counts = [0] * len(sizes)

    def rec(idx: int, remaining: Fraction, slots: int, total: Fraction) -> None:
        if idx == len(sizes):
            if min_size is None or total > min_size:
                if len(out) >= config_limit:
                    raise ConfigExplosion(config_limit)
                out.append(
                    Configuration(sizes=sizes, counts=tuple(counts), size=total)
                )
            return
        p = sizes[idx]
        c = 0
        while True:
            counts[idx] = c
            rec(idx + 1, remaining - c * p, slots - c, total + c * p)
            c += 1
            if c > slots or c * p > remaining:
                break
        counts[idx] = 0

    rec(0, T_bar, max_jobs, Fraction(0))
    return tuple(out)


def _var_layout(inst_k: int, n: int, configs):
    """z variables first (grouped by type), then x_{j,t} grouped by job."""
    z_off = []
    off = 0
    for t in range(inst_k):
        z_off.append(off)
        off += len(configs[t])
    x_off = off
    num = off + n * inst_k
    return z_off, x_off, num


def _x_index(x_off: int, k: int, j: int, t: int) -> int:
    return x_off + j * k + t


def build_milp(
    inst: Instance, ri: RoundedInstance, configs: tuple[tuple[Configuration, ...], ...]
) -> MilpModel:
    """Feasibility MILP: configurations per type integral, job-to-type fractional.

    Constraints: (1) chosen configurations per type equal the machine count;
    (2) each job fully assigned across types; (3) per type and big size, the
    assigned jobs fit in the configuration slots; (4) per type, configuration
    sizes plus small-job load fit in the area m_t * T_bar.  Jobs with
    infinite rounded time are pinned to zero on that type.
    """
    k, n = inst.k, inst.n
    z_off, x_off, num = _var_layout(k, n, configs)
    zero = Fraction(0)
    lower = [zero] * num
    upper: list = [None] * num
    for t in range(k):
        mt = Fraction(inst.multiplicities[t])
        for ci in range(len(configs[t])):
            upper[z_off[t] + ci] = mt
    for j in range(n):
        for t in range(k):
            upper[_x_index(x_off, k, j, t)] = (
                zero if ri.rounded[t][j] is INFINITY else Fraction(1)
            )

    constraints = []
    # (1) configuration count per type
    for t in range(k):
        row = [zero] * num
        for ci in range(len(configs[t])):
            row[z_off[t] + ci] = Fraction(1)
        constraints.append((tuple(row), "=", Fraction(inst.multiplicities[t])))
    # (2) every job assigned once
    for j in range(n):
        row = [zero] * num
        for t in range(k):
            row[_x_index(x_off, k, j, t)] = Fraction(1)
        constraints.append((tuple(row), "=", Fraction(1)))
    # (3) big jobs covered by configuration slots
    for t in range(k):
        for p in ri.big_sizes[t]:
            row = [zero] * num
            for j in ri.groups.get((t, p), ()):
                row[_x_index(x_off, k, j, t)] = Fraction(1)
            for ci, cfg in enumerate(configs[t]):
                c = cfg.count(p)
                if c:
                    row[z_off[t] + ci] = Fraction(-c)
            constraints.append((tuple(row), "<=", zero))
    # (4) area per type
    for t in range(k):
        row = [zero] * num
        for ci, cfg in enumerate(configs[t]):
            if cfg.size:
                row[z_off[t] + ci] = cfg.size
        for p in ri.small_sizes[t]:
            if p:
                for j in ri.groups.get((t, p), ()):
                    row[_x_index(x_off, k, j, t)] = p
        constraints.append(
            (tuple(row), "<=", Fraction(inst.multiplicities[t]) * ri.T_bar)
        )

    lp = LinearProgram(
        num_vars=num,
        constraints=tuple(constraints),
        lower=tuple(lower),
        upper=tuple(upper),
    )
    mask = frozenset(
        z_off[t] + ci for t in range(k) for ci in range(len(configs[t]))
    )
    return MilpModel(base=lp, integral_mask=mask)


def integralize_solution(
    point,
    inst: Instance,
    ri: RoundedInstance,
    configs: tuple[tuple[Configuration, ...], ...],
) -> tuple[IntegralAssignment, int]:
    """Round the fractional job-type assignment via an integral max flow.

    Network: source -> job (capacity 1), job -> (type, rounded size) node
    (capacity 1, finite sizes only), size node -> sink with capacity equal to
    the rounded-up fractional job count of that size.  The maximum flow has
    value n; the unit job edges give the integral assignment.  Returns the
    assignment and the flow value.
    """
    k, n = inst.k, inst.n
    z_off, x_off, num = _var_layout(k, n, configs)

    size_keys = [
        (t, p) for t in range(k) for p in ri.big_sizes[t] + ri.small_sizes[t]
    ]
    size_node = {key: 1 + n + i for i, key in enumerate(size_keys)}
    source = 0
    sink = 1 + n + len(size_keys)
    net = FlowNetwork(num_nodes=sink + 1, source=source, sink=sink)
    for j in range(n):
        net.add_edge(source, 1 + j, 1)
    job_edges = {}
    for j in range(n):
        for t in range(k):
            p = ri.rounded[t][j]
            if p is INFINITY:
                continue
            job_edges[(j, t)] = net.add_edge(1 + j, size_node[(t, p)], 1)
    for key in size_keys:
        t, p = key
        frac = sum(
            (point[_x_index(x_off, k, j, t)] for j in ri.groups.get(key, ())),
            Fraction(0),
        )
        net.add_edge(size_node[key], sink, ceil(frac))

    flow = max_flow_integral(net)
    if flow.value != n:
        raise InternalInvariantViolation(
            f"rounding network carries {flow.value} units, expected {n}"
        )

    x_bar = []
    for j in range(n):
        chosen = [
            t
            for t in range(k)
            if (j, t) in job_edges and flow.flows[job_edges[(j, t)]] == 1
        ]
        if len(chosen) != 1:
            raise InternalInvariantViolation(f"job {j} routed to {len(chosen)} types")
        x_bar.append(chosen[0])
    z = tuple(
        tuple(int(point[z_off[t] + ci]) for ci in range(len(configs[t])))
        for t in range(k)
    )
    return IntegralAssignment(configs=configs, z=z, x=tuple(x_bar)), flow.value


def assemble_schedule(
    ia: IntegralAssignment, inst: Instance, ri: RoundedInstance
) -> Schedule:
    """Turn the integral assignment into a schedule.

    Per type: hand each machine one configuration, fill the big slots by
    rounded size (ascending job index), then sweep the machines greedily
    placing small jobs, leaving a machine once its rounded load exceeds
    T_bar + eps*T + eps^2*T.  The rounded makespan stays below that bound
    plus one small job, i.e. at most (1 + 2*eps + 2*eps^2) * T.
    """
    k, n = inst.k, inst.n
    eps, T = ri.eps, ri.T
    bound = ri.T_bar + eps * T + eps * eps * T
    cell = eps * eps * T
    assignment: list = [None] * n

    for t in range(k):
        machine_cfgs: list[Configuration] = []
        for cfg, count in zip(ia.configs[t], ia.z[t]):
            machine_cfgs.extend([cfg] * count)
        if len(machine_cfgs) != inst.multiplicities[t]:
            raise InternalInvariantViolation(
                f"type {t}: configuration multiplicities sum to {len(machine_cfgs)}"
            )
        loads = [Fraction(0)] * len(machine_cfgs)
        # big slots by size
        slots: dict[Fraction, list[int]] = {}
        for mi, cfg in enumerate(machine_cfgs):
            for p, c in zip(cfg.sizes, cfg.counts):
                for _ in range(c):
                    slots.setdefault(p, []).append(mi)
        jobs_t = [j for j in range(n) if ia.x[j] == t]
        smalls = []
        for j in jobs_t:
            p = ri.rounded[t][j]
            if p is INFINITY:
                raise InternalInvariantViolation(f"job {j} assigned to barred type {t}")
            if p > cell:
                free = slots.get(p)
                if not free:
                    raise InternalInvariantViolation(
                        f"no slot of size {p} left on type {t} for job {j}"
                    )
                mi = free.pop(0)
                loads[mi] += p
                assignment[j] = (t, mi)
            else:
                smalls.append(j)
        # greedy small fill: stay on a machine until its load exceeds the bound
        mi = 0
        for j in smalls:
            while mi < len(machine_cfgs) and loads[mi] > bound:
                mi += 1
            if mi >= len(machine_cfgs):
                raise InternalInvariantViolation(
                    f"small jobs overflow the area bound on type {t}"
                )
            loads[mi] += ri.rounded[t][j]
            assignment[j] = (t, mi)
        if loads and max(loads) > bound + cell:
            raise InternalInvariantViolation("assembled rounded makespan exceeds bound")
    return Schedule(assignment=tuple(assignment))


def try_makespan(
    inst: Instance,
    T: Fraction,
    params: EptasParams,
    trace: Optional[Trace] = None,
) -> Optional[Schedule]:
    """Schedule with makespan <= (1 + 2*eps + 2*eps^2) * T, or None.

    None is only returned when provably no schedule with makespan at most T
    exists (the rounded feasibility MILP is infeasible).
    """
    eps = params.epsilon
    ri = geometric_round(inst, T, eps)
    configs = tuple(
        enumerate_configurations(ri.big_sizes[t], ri.T_bar, eps, params.config_limit)
        for t in range(inst.k)
    )
    model = build_milp(inst, ri, configs)
    res = solve_milp(model, node_budget=params.node_budget)
    if not res.feasible:
        if trace is not None:
            trace.tries.append(TryRecord(T=T, rounded=ri, configs=configs, feasible=False))
        return None
    ia, flow_value = integralize_solution(res.point, inst, ri, configs)
    sched = assemble_schedule(ia, inst, ri)
    if trace is not None:
        trace.tries.append(
            TryRecord(
                T=T, rounded=ri, configs=configs, feasible=True,
                flow_value=flow_value, assignment=ia,
            )
        )
    return sched


def makespan_lower_bound(inst: Instance) -> Fraction:
    """max(largest per-job best time, average best-time load per machine)."""
    if inst.n == 0:
        return Fraction(0)
    mins = [min(inst.processing[t][j] for t in range(inst.k)) for j in range(inst.n)]
    return max(max(mins), sum(mins, Fraction(0)) / inst.m)


def solve_makespan(
    inst: Instance,
    params: EptasParams,
    trace: Optional[Trace] = None,
) -> Schedule:
    """Dual-approximation binary search around the feasibility pipeline.

    Guarantee: makespan <= (1 + 2*eps + 2*eps^2)(1 + eps) * OPT.
    """
    from .baseline import greedy_bound  # late import; baseline reuses instance types

    if inst.n == 0:
        return Schedule(assignment=())
    eps = params.epsilon
    lo = makespan_lower_bound(inst)
    if lo == 0:
        # every job runs in zero time somewhere
        assignment = []
        for j in range(inst.n):
            t = min(range(inst.k), key=lambda t: (inst.processing[t][j], t))
            assignment.append((t, 0))
        return Schedule(assignment=tuple(assignment))

    sched = try_makespan(inst, lo, params, trace)
    if sched is not None:
        return sched

    greedy_sched, hi = greedy_bound(inst)
    best = try_makespan(inst, hi, params, trace)
    if best is None:
        raise InternalInvariantViolation("pipeline rejected a certified upper bound")
    gap = eps * lo
    while hi - lo > gap:
        mid = (lo + hi) / 2
        sched = try_makespan(inst, mid, params, trace)
        if sched is None:
            lo = mid
        else:
            hi, best = mid, sched
    return best
