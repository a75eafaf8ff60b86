"""Shared test helpers: the seeded instance corpus and independent oracles.

The oracles here are deliberately naive (vertex enumeration, subset
min-cut, exhaustive integer search) so they share no code with the solvers
they check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from typesched import Instance, generate_instance
from typesched.exactlp import LinearProgram


def suite_instances(count: int = 201):
    """Seeded corpus: K in {1,2,3}, n <= 8, m <= 4, integer times in [1,20]."""
    out = []
    for seed in range(count):
        r = random.Random(1000 + seed)
        k = r.choice([1, 2, 3])
        mults = tuple(r.randint(1, 2) for _ in range(k))
        while sum(mults) > 4:
            mults = tuple(r.randint(1, 2) for _ in range(k))
        n = r.randint(1, 8)
        out.append(
            (seed, generate_instance(k=k, n=n, multiplicities=mults, p_max=20, seed=seed))
        )
    return out


def _solve_square(rows, rhs):
    """Exact Gaussian elimination; returns the solution or None if singular."""
    n = len(rhs)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def lp_vertices(lp: LinearProgram):
    """All vertices of the (box-bounded) feasible region by enumeration.

    Every tight-set of n constraints/bounds is solved exactly; feasible
    solutions are collected.  Requires finite bounds on all variables so
    the region is a polytope (nonempty implies it has a vertex).
    """
    n = lp.num_vars
    candidates = []
    for coeffs, _rel, rhs in lp.constraints:
        candidates.append((tuple(coeffs), rhs))
    for j in range(n):
        e = tuple(Fraction(1 if i == j else 0) for i in range(n))
        candidates.append((e, lp.lower[j]))
        assert lp.upper[j] is not None, "vertex oracle needs a bounded box"
        candidates.append((e, lp.upper[j]))
    seen = set()
    verts = []
    for combo in itertools.combinations(range(len(candidates)), n):
        rows = [candidates[i][0] for i in combo]
        rhs = [candidates[i][1] for i in combo]
        x = _solve_square(rows, rhs)
        if x is None:
            continue
        key = tuple(x)
        if key in seen:
            continue
        if _feasible(lp, x):
            seen.add(key)
            verts.append(key)
    return verts


def _feasible(lp: LinearProgram, x) -> bool:
    for j in range(lp.num_vars):
        if x[j] < lp.lower[j]:
            return False
        if lp.upper[j] is not None and x[j] > lp.upper[j]:
            return False
    for coeffs, rel, rhs in lp.constraints:
        lhs = sum(c * v for c, v in zip(coeffs, x))
        if rel == "<=" and lhs > rhs:
            return False
        if rel == ">=" and lhs < rhs:
            return False
        if rel == "=" and lhs != rhs:
            return False
    return True


def lp_optimum_by_vertices(lp: LinearProgram):
    """("infeasible", None) or ("optimal", min objective over vertices)."""
    verts = lp_vertices(lp)
    if not verts:
        return "infeasible", None
    assert lp.objective is not None
    best = min(sum(c * v for c, v in zip(lp.objective, x)) for x in verts)
    return "optimal", best


def random_box_lp(rng: random.Random) -> LinearProgram:
    """Random small LP with a finite box (so the vertex oracle applies)."""
    n = rng.randint(1, 4)
    rows = []
    for _ in range(rng.randint(1, 6)):
        coeffs = tuple(Fraction(rng.randint(-4, 4)) for _ in range(n))
        rel = rng.choice(["<=", ">=", "="])
        rhs = Fraction(rng.randint(-6, 10))
        rows.append((coeffs, rel, rhs))
    lower = tuple(Fraction(rng.randint(-3, 0)) for _ in range(n))
    upper = tuple(lo + rng.randint(0, 6) for lo in lower)
    objective = tuple(Fraction(rng.randint(-5, 5)) for _ in range(n))
    return LinearProgram(
        num_vars=n, constraints=tuple(rows), lower=lower, upper=upper, objective=objective
    )


def min_cut_value(num_nodes: int, source: int, sink: int, edges):
    """Brute-force s-t min cut (edges as (u, v, cap); cap None = infinite)."""
    others = [v for v in range(num_nodes) if v not in (source, sink)]
    best = None
    for bits in range(1 << len(others)):
        side = {source}
        for i, v in enumerate(others):
            if bits >> i & 1:
                side.add(v)
        total = 0
        for u, v, cap in edges:
            if u in side and v not in side:
                if cap is None:
                    total = None
                    break
                total += cap
        if total is not None and (best is None or total < best):
            best = total
    return best


def brute_instances(rng: random.Random, max_n=6, max_m=3):
    """Small random instance for oracle cross-checks."""
    k = rng.randint(1, 3)
    mults = tuple(rng.randint(1, 2) for _ in range(k))
    while sum(mults) > max_m:
        mults = tuple(rng.randint(1, 2) for _ in range(k))
    n = rng.randint(1, max_n)
    processing = tuple(
        tuple(Fraction(rng.randint(1, 12)) for _ in range(n)) for _ in range(k)
    )
    return Instance(k=k, n=n, processing=processing, multiplicities=mults)
