"""Feasibility MILP by depth-first branch-and-bound on the integral variables.

The models solved here have few integral variables with small boxes, so plain
branch-and-bound over the exact LP relaxation is enough: solve the
relaxation, branch on the most-fractional flagged variable (floor branch
first), stop at the first integral leaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional

from .errors import NodeLimitExceeded
from .exactlp import LinearProgram, solve_lp

__all__ = ["MilpModel", "MilpResult", "solve_milp", "DEFAULT_NODE_BUDGET"]

DEFAULT_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class MilpModel:
    base: LinearProgram
    integral_mask: frozenset[int]

    def __post_init__(self):
        for v in self.integral_mask:
            if not (0 <= v < self.base.num_vars):
                raise ValueError(f"integral index {v} out of range")
            if self.base.upper[v] is None:
                raise ValueError(f"integral variable {v} needs a finite upper bound")


@dataclass(frozen=True)
class MilpResult:
    feasible: bool
    point: Optional[tuple[Fraction, ...]] = None


def _most_fractional(point, mask):
    """Flagged variable farthest from an integer; None if all integral."""
    best_v, best_dist = None, Fraction(0)
    for v in sorted(mask):
        f = point[v] - floor(point[v])
        dist = min(f, 1 - f)
        if dist > best_dist:
            best_v, best_dist = v, dist
    return best_v


def solve_milp(model: MilpModel, node_budget: int = DEFAULT_NODE_BUDGET) -> MilpResult:
    """First feasible point with integral flagged entries, or Infeasible.

    Depth-first: the floor branch of the branching variable is explored
    before the ceil branch.  Raises :class:`NodeLimitExceeded` when the node
    budget runs out.
    """
    lp = model.base
    mask = model.integral_mask
    stack = [(lp.lower, lp.upper)]
    nodes = 0
    while stack:
        lo, up = stack.pop()
        nodes += 1
        if nodes > node_budget:
            raise NodeLimitExceeded(node_budget)
        res = solve_lp(lp, lower=lo, upper=up)
        if res.status == "infeasible":
            continue
        if res.status == "unbounded":
            # feasibility models are bounded; treat a ray as feasible region
            # evidence only if some finite point exists, which solve_lp did
            # not produce -- resolve with the zero objective
            res = solve_lp(
                LinearProgram(
                    num_vars=lp.num_vars,
                    constraints=lp.constraints,
                    lower=lp.lower,
                    upper=lp.upper,
                ),
                lower=lo,
                upper=up,
            )
        point = res.point
        v = _most_fractional(point, mask)
        if v is None:
            point = tuple(
                Fraction(round(point[j])) if j in mask else point[j]
                for j in range(lp.num_vars)
            )
            return MilpResult(feasible=True, point=point)
        fl = Fraction(floor(point[v]))
        cl = Fraction(ceil(point[v]))
        up_floor = tuple(fl if j == v else up[j] for j in range(lp.num_vars))
        lo_ceil = tuple(cl if j == v else lo[j] for j in range(lp.num_vars))
        # LIFO: push ceil first so the floor branch is explored first
        if up[v] is None or cl <= up[v]:
            stack.append((lo_ceil, up))
        if fl >= lo[v]:
            stack.append((lo, up_floor))
    return MilpResult(feasible=False)
