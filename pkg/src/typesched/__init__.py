"""Exact-rational scheduling for unrelated machines with few machine types.

Approximation schemes for makespan minimization and max-min (Santa Claus)
load maximization, built on an exact rational simplex, a branch-and-bound
integer layer, and integral network flows — no floating point anywhere in a
solver path.
"""

from .baseline import greedy_bound, lst_two_approx
from .errors import (
    ConfigExplosion,
    DimensionMismatch,
    InfeasibleDemands,
    InternalInvariantViolation,
    InvalidSchedule,
    LimitExceeded,
    NodeLimitExceeded,
    ParseError,
    TypeschedError,
    Unschedulable,
)
from .exactlp import LinearProgram, LpResult, solve_lp
from .instance import (
    INFINITY,
    Instance,
    Schedule,
    evaluate_makespan,
    evaluate_min_load,
    generate_instance,
    parse_instance,
    parse_schedule,
    serialize_instance,
    serialize_schedule,
)
from .makespan import (
    Configuration,
    EptasParams,
    IntegralAssignment,
    RoundedInstance,
    Trace,
    solve_makespan,
    try_makespan,
)
from .milp import MilpModel, MilpResult, solve_milp
from .netflow import FlowNetwork, IntegralFlow, feasible_flow_with_demands, max_flow_integral
from .oracle import brute_force_makespan, brute_force_min_load
from .santa import SantaRounded, SplitConfigurations, solve_santa, try_santa

__all__ = [
    "INFINITY",
    "Instance",
    "Schedule",
    "evaluate_makespan",
    "evaluate_min_load",
    "generate_instance",
    "parse_instance",
    "parse_schedule",
    "serialize_instance",
    "serialize_schedule",
    "LinearProgram",
    "LpResult",
    "solve_lp",
    "MilpModel",
    "MilpResult",
    "solve_milp",
    "FlowNetwork",
    "IntegralFlow",
    "max_flow_integral",
    "feasible_flow_with_demands",
    "EptasParams",
    "RoundedInstance",
    "Configuration",
    "IntegralAssignment",
    "Trace",
    "solve_makespan",
    "try_makespan",
    "SantaRounded",
    "SplitConfigurations",
    "solve_santa",
    "try_santa",
    "greedy_bound",
    "lst_two_approx",
    "brute_force_makespan",
    "brute_force_min_load",
    "TypeschedError",
    "ParseError",
    "DimensionMismatch",
    "InvalidSchedule",
    "Unschedulable",
    "InfeasibleDemands",
    "ConfigExplosion",
    "NodeLimitExceeded",
    "LimitExceeded",
    "InternalInvariantViolation",
]
