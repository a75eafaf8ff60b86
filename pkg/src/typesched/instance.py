"""Core data model: instances, schedules, objectives, serialization, generation.

Every numeric quantity is an exact :class:`fractions.Fraction`; there is no
floating point anywhere in the solver path.  Machines are grouped into types
(machines of one type are interchangeable) and a concrete machine is the pair
``(type, index)`` with ``0 <= index < multiplicities[type]``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, InvalidSchedule, ParseError

__all__ = [
    "INFINITY",
    "Instance",
    "Schedule",
    "evaluate_makespan",
    "evaluate_min_load",
    "parse_instance",
    "serialize_instance",
    "parse_schedule",
    "serialize_schedule",
    "generate_instance",
]


class _Infinity:
    """Symbolic infinity; compares greater than every Fraction.

    Arises only from rounding (a job barred from a machine type), never in
    raw input.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("typesched-infinity")


INFINITY = _Infinity()


@dataclass(frozen=True)
class Instance:
    """A k x n processing-time matrix with machine multiplicities per type.

    ``processing[t][j]`` is the time of job ``j`` on any machine of type
    ``t``.  All times are non-negative rationals.
    """

    k: int
    n: int
    processing: tuple[tuple[Fraction, ...], ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one machine type")
        if self.n < 0:
            raise ValueError("negative job count")
        if len(self.processing) != self.k:
            raise DimensionMismatch(f"expected {self.k} processing rows, got {len(self.processing)}")
        for t, row in enumerate(self.processing):
            if len(row) != self.n:
                raise DimensionMismatch(f"row {t} has {len(row)} entries, expected {self.n}")
            for j, p in enumerate(row):
                if p < 0:
                    raise ValueError(f"negative processing time at ({t}, {j})")
        if len(self.multiplicities) != self.k:
            raise DimensionMismatch(
                f"expected {self.k} multiplicities, got {len(self.multiplicities)}"
            )
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")

    @property
    def m(self) -> int:
        """Total number of machines."""
        return sum(self.multiplicities)

    def machines(self):
        """All machine ids ``(type, index)`` in canonical order."""
        for t, mt in enumerate(self.multiplicities):
            for i in range(mt):
                yield (t, i)


@dataclass(frozen=True)
class Schedule:
    """Total assignment job-index -> machine-id ``(type, index)``."""

    assignment: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.assignment)


def _machine_loads(inst: Instance, sched: Schedule) -> dict[tuple[int, int], Fraction]:
    if len(sched.assignment) != inst.n:
        raise InvalidSchedule(
            f"schedule covers {len(sched.assignment)} jobs, instance has {inst.n}"
        )
    loads = {mid: Fraction(0) for mid in inst.machines()}
    for j, (t, i) in enumerate(sched.assignment):
        if not (0 <= t < inst.k) or not (0 <= i < inst.multiplicities[t]):
            raise InvalidSchedule(f"job {j} assigned to invalid machine ({t}, {i})")
        loads[(t, i)] += inst.processing[t][j]
    return loads


def evaluate_makespan(inst: Instance, sched: Schedule) -> Fraction:
    """Maximum machine load under the schedule (0 for an empty job set)."""
    loads = _machine_loads(inst, sched)
    return max(loads.values(), default=Fraction(0))


def evaluate_min_load(inst: Instance, sched: Schedule) -> Fraction:
    """Minimum load over *all* machines, including machines receiving no job."""
    loads = _machine_loads(inst, sched)
    return min(loads.values())


# --- serialization ---------------------------------------------------------
#
# Instance files are UTF-8 JSON documents with the fields
#   version: 1, k, n, multiplicities (K positive ints),
#   processing (K arrays of n rational literals).
# A rational literal is "INT" or "INT/POSINT"; processing times are
# non-negative.  Schedule files are JSON arrays of {"type": t, "index": i}.


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _parse_rational(text: str, where: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"{where}: rational literal must be a string, got {text!r}")
    num, sep, den = text.partition("/")
    try:
        if sep:
            q = Fraction(int(num), int(den))
            if int(den) <= 0:
                raise ValueError
        else:
            q = Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: bad rational literal {text!r}") from None
    if q < 0:
        raise ParseError(f"{where}: negative processing time {text!r}")
    return q


def serialize_instance(inst: Instance) -> bytes:
    doc = {
        "version": 1,
        "k": inst.k,
        "n": inst.n,
        "multiplicities": list(inst.multiplicities),
        "processing": [[_format_rational(p) for p in row] for row in inst.processing],
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def parse_instance(data: bytes) -> Instance:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not a valid instance document: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    if doc.get("version") != 1:
        raise ParseError(f"unsupported version {doc.get('version')!r}")
    for field in ("k", "n", "multiplicities", "processing"):
        if field not in doc:
            raise ParseError(f"missing field {field!r}")
    k, n = doc["k"], doc["n"]
    if not isinstance(k, int) or not isinstance(n, int):
        raise ParseError("k and n must be integers")
    mults = doc["multiplicities"]
    if not isinstance(mults, list) or not all(isinstance(x, int) for x in mults):
        raise ParseError("multiplicities must be an array of integers")
    rows = doc["processing"]
    if not isinstance(rows, list) or len(rows) != k:
        raise DimensionMismatch(f"processing must have {k} rows")
    matrix = []
    for t, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise DimensionMismatch(f"processing row {t} must have {n} entries")
        matrix.append(tuple(_parse_rational(x, f"processing[{t}][{j}]") for j, x in enumerate(row)))
    return Instance(k=k, n=n, processing=tuple(matrix), multiplicities=tuple(mults))


def serialize_schedule(sched: Schedule) -> bytes:
    doc = [{"type": t, "index": i} for (t, i) in sched.assignment]
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def parse_schedule(data: bytes) -> Schedule:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not a valid schedule document: {exc}") from None
    if not isinstance(doc, list):
        raise ParseError("schedule document must be a JSON array")
    assignment = []
    for j, entry in enumerate(doc):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("type"), int)
            or not isinstance(entry.get("index"), int)
        ):
            raise ParseError(f"schedule entry {j} must be {{'type': t, 'index': i}}")
        assignment.append((entry["type"], entry["index"]))
    return Schedule(assignment=tuple(assignment))


def generate_instance(
    k: int,
    n: int,
    multiplicities: Sequence[int],
    p_max: int,
    seed: int,
) -> Instance:
    """Seeded instance with integer times drawn uniformly from [1, p_max].

    Entries are drawn row-major per (type, job); the same seed yields the
    identical matrix on every platform.
    """
    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    rng = random.Random(seed)
    matrix = tuple(
        tuple(Fraction(rng.randint(1, p_max)) for _ in range(n)) for _ in range(k)
    )
    return Instance(k=k, n=n, processing=matrix, multiplicities=tuple(multiplicities))
