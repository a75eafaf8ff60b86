"""Exact rational linear programming.

Two-phase primal simplex over exact rationals with Bland's pivoting rule
(termination guaranteed) and bounded variables handled directly in the ratio
test, so variable bounds never cost extra constraint rows.  Infeasible
outcomes carry a Farkas certificate that :func:`verify_farkas` checks against
the original data.

Internally arithmetic runs on ``gmpy2.mpq`` (exact, much faster than
``fractions.Fraction``); results are converted back to ``Fraction`` at the
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

__all__ = [
    "LinearProgram",
    "LpResult",
    "solve_lp",
    "verify_farkas",
    "verify_point",
]

LE, EQ, GE = "<=", "=", ">="
_RELS = (LE, EQ, GE)

_Q0 = mpq(0)
_Q1 = mpq(1)


def _frac(q) -> Fraction:
    """mpq -> Fraction without leaking mpz components into the Fraction."""
    return Fraction(int(q.numerator), int(q.denominator))

@dataclass(frozen=True)
class LinearProgram:
    """min c.x  s.t.  rows (a.x rel b),  lower <= x <= upper.

    ``objective is None`` means pure feasibility (minimize 0).  Lower bounds
    are finite rationals (default 0); upper bounds may be ``None`` (plus
    infinity).
    """

    num_vars: int
    constraints: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]
    lower: tuple[Fraction, ...] = ()
    upper: tuple[Optional[Fraction], ...] = ()
    objective: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        if not self.lower:
            object.__setattr__(self, "lower", tuple(Fraction(0) for _ in range(self.num_vars)))
        if not self.upper:
            object.__setattr__(self, "upper", tuple(None for _ in range(self.num_vars)))
        if len(self.lower) != self.num_vars or len(self.upper) != self.num_vars:
            raise ValueError("bound vectors must match variable count")
        for coeffs, rel, _rhs in self.constraints:
            if len(coeffs) != self.num_vars:
                raise ValueError("coefficient vector length mismatch")
            if rel not in _RELS:
                raise ValueError(f"unknown relation {rel!r}")
        if self.objective is not None and len(self.objective) != self.num_vars:
            raise ValueError("objective length mismatch")


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    point: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    farkas: Optional[tuple[Fraction, ...]] = None  # one multiplier per constraint


class _Simplex:
    """Mutable solver state for one solve_lp call.

    Revised simplex: the constraint matrix is kept as sparse columns and the
    basis is represented by an explicitly maintained inverse (the row count
    here is tiny while the column count can run into the thousands), so each
    pivot costs O(rows^2 + rows * column support) instead of a full-tableau
    sweep.
    """

    def __init__(self, lp: LinearProgram, lower=None, upper=None):
        self.lp = lp
        n = lp.num_vars
        nrows = len(lp.constraints)
        lower = lp.lower if lower is None else lower
        upper = lp.upper if upper is None else upper

        self.lo: list = [mpq(x) for x in lower]
        self.up: list = [None if u is None else mpq(u) for u in upper]
        self.n_struct = n

        # slack columns: one per inequality row (coeff +1 for <=, -1 for >=)
        self.slack_of_row: list[Optional[int]] = []
        cols = n
        for _coeffs, rel, _rhs in lp.constraints:
            if rel == EQ:
                self.slack_of_row.append(None)
            else:
                self.slack_of_row.append(cols)
                self.lo.append(_Q0)
                self.up.append(None)
                cols += 1
        self.n_slack = cols - n

        # artificial columns: one per row
        self.art0 = cols
        for _ in range(nrows):
            self.lo.append(_Q0)
            self.up.append(None)
        self.ncols = cols + nrows
        self.nrows = nrows

        # nonbasic start: everything at its lower bound
        self.status = ["L"] * self.ncols  # "L" | "U" | "B"
        self.xn = list(self.lo)  # bound value of nonbasic columns (valid where status != B)

        # residuals decide artificial signs; rows are sign-scaled so the
        # artificial basis is the identity
        self.beta: list = []  # values of basic variables per row
        self.basis: list[int] = []
        self.art_sign: list[int] = []
        row_entries: list[list] = [[] for _ in range(nrows)]
        for i, (coeffs, rel, rhs) in enumerate(lp.constraints):
            resid = mpq(rhs)
            entries = row_entries[i]
            for j, c in enumerate(coeffs):
                if c:
                    q = mpq(c)
                    entries.append((j, q))
                    if self.xn[j]:
                        resid -= q * self.xn[j]
            s = self.slack_of_row[i]
            if s is not None:
                entries.append((s, _Q1 if rel == LE else -_Q1))
            sign = 1 if resid >= 0 else -1
            if sign < 0:
                row_entries[i] = entries = [(j, -q) for j, q in entries]
                resid = -resid
            entries.append((self.art0 + i, _Q1))
            self.beta.append(resid)
            self.art_sign.append(sign)
            # crash basis: use the slack where its sign-scaled coefficient is
            # +1 and pin the artificial at zero; otherwise start artificial
            slack_ok = s is not None and ((rel == LE) == (sign > 0))
            if slack_ok:
                self.basis.append(s)
                self.status[s] = "B"
                self.up[self.art0 + i] = _Q0
            else:
                self.basis.append(self.art0 + i)
                self.status[self.art0 + i] = "B"

        # sparse rows and columns of the sign-scaled matrix
        self.row_entries = row_entries
        self.cols: list[list] = [[] for _ in range(self.ncols)]
        for i, entries in enumerate(row_entries):
            for j, q in entries:
                self.cols[j].append((i, q))

        # basis inverse; the starting (artificial) basis is the identity
        self.binv: list[list] = [
            [_Q1 if i == r else _Q0 for r in range(nrows)] for i in range(nrows)
        ]

    # -- pivoting ------------------------------------------------------

    def _multipliers(self, cost: list) -> list:
        """y = c_B . B^(-1); reduced cost of column c is cost[c] - y . A_c."""
        y = [_Q0] * self.nrows
        for i in range(self.nrows):
            cb = cost[self.basis[i]]
            if cb:
                bi = self.binv[i]
                for r in range(self.nrows):
                    v = bi[r]
                    if v:
                        y[r] += cb * v
        return y

    def _tableau_column(self, q: int) -> list:
        """w = B^(-1) A_q."""
        w = [_Q0] * self.nrows
        for r, a in self.cols[q]:
            for i in range(self.nrows):
                v = self.binv[i][r]
                if v:
                    w[i] += v * a
        return w

    def optimize(self, cost: list, frozen: set[int]) -> str:
        """Minimize cost.x from the current basis; returns "optimal"/"unbounded".

        ``frozen`` columns never enter the basis.  Pricing is Dantzig (most
        improving reduced cost) until a run of degenerate pivots signals
        potential cycling, then Bland's rule (lowest eligible index) takes
        over for good; Bland's rule cannot cycle, so termination is
        guaranteed either way.
        """
        status, xn, lo, up, beta, basis = (
            self.status, self.xn, self.lo, self.up, self.beta, self.basis,
        )
        stall_limit = 4 * self.nrows + 16
        stalled = 0
        bland = False
        row_entries = self.row_entries
        while True:
            y = self._multipliers(cost)
            # reduced costs, accumulated row-wise: d = cost - A^T y
            d = list(cost)
            for i in range(self.nrows):
                yi = y[i]
                if yi:
                    for j, a in row_entries[i]:
                        d[j] -= yi * a
            q = -1
            best_d = None
            for c in range(self.ncols):
                st = status[c]
                if st == "B" or c in frozen:
                    continue
                dc = d[c]
                if st == "L":
                    if not dc < 0:
                        continue
                    dc = -dc
                elif not dc > 0:
                    continue
                if up[c] is not None and up[c] == lo[c]:
                    continue
                if bland:
                    q = c
                    break
                if best_d is None or dc > best_d:
                    q, best_d = c, dc
            if q < 0:
                return "optimal"

            direction = 1 if status[q] == "L" else -1
            w = self._tableau_column(q)
            # ratio test against basic-variable bounds and q's opposite bound
            best_t = None
            best_kind = None  # ("flip",) or ("row", i, new_status)
            best_col = None
            if up[q] is not None:
                best_t = up[q] - lo[q]
                best_kind = ("flip",)
                best_col = q
            for i in range(self.nrows):
                wi = w[i]
                if not wi:
                    continue
                dy = wi if direction > 0 else -wi
                k = basis[i]
                if dy > 0:
                    t = (beta[i] - lo[k]) / dy
                    leave_status = "L"
                else:
                    if up[k] is None:
                        continue
                    t = (beta[i] - up[k]) / dy  # dy < 0, numerator <= 0
                    leave_status = "U"
                if best_t is None or t < best_t or (t == best_t and k < best_col):
                    best_t = t
                    best_kind = ("row", i, leave_status)
                    best_col = k
            if best_t is None:
                return "unbounded"

            t = best_t
            if t:
                stalled = 0
            else:
                stalled += 1
                if stalled > stall_limit:
                    bland = True
            if best_kind[0] == "flip":
                if t:
                    for i in range(self.nrows):
                        wi = w[i]
                        if wi:
                            beta[i] -= (wi if direction > 0 else -wi) * t
                xn[q] = up[q] if direction > 0 else lo[q]
                status[q] = "U" if direction > 0 else "L"
                continue

            _, r, leave_status = best_kind
            enter_val = xn[q] + (t if direction > 0 else -t)
            if t:
                for i in range(self.nrows):
                    if i == r:
                        continue
                    wi = w[i]
                    if wi:
                        beta[i] -= (wi if direction > 0 else -wi) * t
            k = basis[r]
            status[k] = leave_status
            xn[k] = lo[k] if leave_status == "L" else up[k]

            # pivot: update the basis inverse with an eta step on row r
            binv = self.binv
            piv = w[r]
            if piv != 1:
                inv = _Q1 / piv
                binv[r] = [v * inv if v else _Q0 for v in binv[r]]
            prow = binv[r]
            for i in range(self.nrows):
                if i == r:
                    continue
                f = w[i]
                if f:
                    rowi = binv[i]
                    for cdx in range(self.nrows):
                        pv = prow[cdx]
                        if pv:
                            rowi[cdx] -= f * pv
            basis[r] = q
            status[q] = "B"
            beta[r] = enter_val

    # -- extraction ------------------------------------------------------

    def structural_point(self) -> tuple:
        vals = [None] * self.n_struct
        for i, b in enumerate(self.basis):
            if b < self.n_struct:
                vals[b] = self.beta[i]
        for j in range(self.n_struct):
            if vals[j] is None:
                vals[j] = self.xn[j]
        return tuple(vals)

    def farkas_from_phase1(self, cost: list) -> tuple:
        """Row multipliers certifying infeasibility (phase-1 optimum > 0).

        The reduced cost of artificial column i is 1 - y_i, so the multiplier
        vector y itself certifies, after undoing the row sign scaling.
        """
        ymul = self._multipliers(cost)
        return tuple(
            ymul[i] if self.art_sign[i] > 0 else -ymul[i] for i in range(self.nrows)
        )


def solve_lp(
    lp: LinearProgram,
    lower: Optional[Sequence[Fraction]] = None,
    upper: Optional[Sequence[Optional[Fraction]]] = None,
) -> LpResult:
    """Solve the program exactly.

    ``lower``/``upper`` optionally override the variable bounds (used by the
    branch-and-bound solver); lengths must match ``lp.num_vars``.
    """
    lo = lp.lower if lower is None else tuple(lower)
    up = lp.upper if upper is None else tuple(upper)
    for j in range(lp.num_vars):
        if up[j] is not None and up[j] < lo[j]:
            # contradictory variable bounds; no row-multiplier certificate exists
            return LpResult(status="infeasible")

    sx = _Simplex(lp, lo, up)

    # phase 1: drive artificials to zero
    cost1 = [_Q0] * sx.ncols
    for c in range(sx.art0, sx.ncols):
        cost1[c] = _Q1
    sx.optimize(cost1, frozen=set())
    infeas = sum((sx.beta[i] for i in range(sx.nrows) if sx.basis[i] >= sx.art0), _Q0)
    if infeas > 0:
        y = sx.farkas_from_phase1(cost1)
        return LpResult(status="infeasible", farkas=tuple(_frac(v) for v in y))

    # phase 2: artificials frozen at zero
    frozen = set(range(sx.art0, sx.ncols))
    for c in frozen:
        sx.up[c] = _Q0
    if lp.objective is None:
        point = sx.structural_point()
        return LpResult(
            status="optimal",
            point=tuple(_frac(v) for v in point),
            value=Fraction(0),
        )
    cost2 = [_Q0] * sx.ncols
    for j, c in enumerate(lp.objective):
        if c:
            cost2[j] = mpq(c)
    outcome = sx.optimize(cost2, frozen=frozen)
    if outcome == "unbounded":
        return LpResult(status="unbounded")
    point = sx.structural_point()
    value = sum((mpq(c) * point[j] for j, c in enumerate(lp.objective) if c), _Q0)
    return LpResult(
        status="optimal",
        point=tuple(_frac(v) for v in point),
        value=_frac(value),
    )


def verify_point(
    lp: LinearProgram,
    point: Sequence[Fraction],
    lower: Optional[Sequence[Fraction]] = None,
    upper: Optional[Sequence[Optional[Fraction]]] = None,
) -> bool:
    """Exact feasibility check of a point against constraints and bounds."""
    lo = lp.lower if lower is None else lower
    up = lp.upper if upper is None else upper
    for j, v in enumerate(point):
        if v < lo[j]:
            return False
        if up[j] is not None and v > up[j]:
            return False
    for coeffs, rel, rhs in lp.constraints:
        lhs = sum((c * point[j] for j, c in enumerate(coeffs) if c), Fraction(0))
        if rel == LE and lhs > rhs:
            return False
        if rel == GE and lhs < rhs:
            return False
        if rel == EQ and lhs != rhs:
            return False
    return True


def verify_farkas(
    lp: LinearProgram,
    y: Sequence[Fraction],
    lower: Optional[Sequence[Fraction]] = None,
    upper: Optional[Sequence[Optional[Fraction]]] = None,
) -> bool:
    """Check that y proves infeasibility.

    With y_i >= 0 on >=-rows and y_i <= 0 on <=-rows, every feasible x
    satisfies (sum_i y_i a_i).x >= y.b; the certificate is valid when even the
    box maximum of the left side stays strictly below y.b.
    """
    lo = lp.lower if lower is None else lower
    up = lp.upper if upper is None else upper
    z = [Fraction(0)] * lp.num_vars
    rhs = Fraction(0)
    for yi, (coeffs, rel, b) in zip(y, lp.constraints):
        if rel == LE and yi > 0:
            return False
        if rel == GE and yi < 0:
            return False
        if yi:
            rhs += yi * b
            for j, c in enumerate(coeffs):
                if c:
                    z[j] += yi * c
    box_max = Fraction(0)
    for j, zj in enumerate(z):
        if zj > 0:
            if up[j] is None:
                return False
            box_max += zj * up[j]
        elif zj < 0:
            box_max += zj * lo[j]
    return box_max < rhs
