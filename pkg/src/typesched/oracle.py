"""Brute-force exact solvers for tiny instances; ground truth for all tests.

Exhaustive search over machine assignments with symmetry pruning inside each
machine type: a job may only open machine index i of a type when indices
below i are already in use, so relabeled-machine duplicates are never
visited.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import LimitExceeded
from .instance import Instance, Schedule

__all__ = ["brute_force_makespan", "brute_force_min_load"]


def _check_limits(inst: Instance, job_limit: int, machine_limit: int) -> None:
    if inst.n > job_limit:
        raise LimitExceeded(f"{inst.n} jobs exceeds oracle job limit {job_limit}")
    if inst.m > machine_limit:
        raise LimitExceeded(f"{inst.m} machines exceeds oracle machine limit {machine_limit}")


def _machine_list(inst: Instance) -> list[tuple[int, int]]:
    return list(inst.machines())


def brute_force_makespan(
    inst: Instance, job_limit: int = 10, machine_limit: int = 5, prune_symmetry: bool = True
) -> tuple[Fraction, Schedule]:
    """Exact minimum makespan and a witness schedule."""
    _check_limits(inst, job_limit, machine_limit)
    machines = _machine_list(inst)
    loads = [Fraction(0)] * len(machines)
    used = [0] * inst.k  # opened machines per type
    best_val: list = [None]
    best_assign: list = [None]
    assign = [None] * inst.n

    def dfs(j: int, cur_max: Fraction) -> None:
        if j == inst.n:
            if best_val[0] is None or cur_max < best_val[0]:
                best_val[0] = cur_max
                best_assign[0] = tuple(assign)
            return
        for mi, (t, i) in enumerate(machines):
            if prune_symmetry and i > used[t]:
                continue
            new_load = loads[mi] + inst.processing[t][j]
            new_max = max(cur_max, new_load)
            if best_val[0] is not None and new_max >= best_val[0]:
                continue
            loads[mi] = new_load
            opened = i == used[t]
            if opened:
                used[t] += 1
            assign[j] = (t, i)
            dfs(j + 1, new_max)
            if opened:
                used[t] -= 1
            loads[mi] = new_load - inst.processing[t][j]

    dfs(0, Fraction(0))
    return best_val[0], Schedule(assignment=best_assign[0])


def brute_force_min_load(
    inst: Instance, job_limit: int = 10, machine_limit: int = 5, prune_symmetry: bool = True
) -> tuple[Fraction, Schedule]:
    """Exact maximum of the minimum machine load and a witness schedule."""
    _check_limits(inst, job_limit, machine_limit)
    machines = _machine_list(inst)
    loads = [Fraction(0)] * len(machines)
    used = [0] * inst.k
    best_val: list = [None]
    best_assign: list = [None]
    assign = [None] * inst.n

    def dfs(j: int) -> None:
        if j == inst.n:
            val = min(loads)
            if best_val[0] is None or val > best_val[0]:
                best_val[0] = val
                best_assign[0] = tuple(assign)
            return
        for mi, (t, i) in enumerate(machines):
            if prune_symmetry and i > used[t]:
                continue
            loads[mi] += inst.processing[t][j]
            opened = i == used[t]
            if opened:
                used[t] += 1
            assign[j] = (t, i)
            dfs(j + 1)
            if opened:
                used[t] -= 1
            loads[mi] -= inst.processing[t][j]

    dfs(0)
    return best_val[0], Schedule(assignment=best_assign[0])
