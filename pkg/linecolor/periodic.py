"""
Periodic D-colorings of the integers: verification, smallest-period search,
and the experiment comparing obstruction windows with periodic colorings.

A period-p coloring T(x) = colors[x mod p] is valid iff for every color j,
every restriction d of column j and every residue r, not both colors[r] and
colors[(r + d) mod p] are j. When p divides d, color j cannot be used at all.
"""

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

from linecolor.formats import array_to_json
from linecolor.lib import logger, map_ordered
from linecolor.model import (
    Coloring,
    MalformedColoringError,
    PointSet,
    RestrictionArray,
    SoundnessError,
    Violation,
)
from linecolor.solver import (
    DEFAULT_NODE_BUDGET,
    BudgetExceededError,
    ConflictGraph,
    SearchStats,
    find_unsat_window,
    search,
)


@dataclass(frozen=True)
class PeriodicColoring:
    period: int
    colors: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.period < 1:
            raise MalformedColoringError(f"period must be positive, got {self.period}")
        if len(self.colors) != self.period:
            raise MalformedColoringError(
                f"period {self.period} needs {self.period} colors, got {len(self.colors)}"
            )

    def __call__(self, x: int) -> int:
        return self.colors[x % self.period]


def _require_integral(D: RestrictionArray) -> None:
    if not D.is_integral():
        raise ValueError(f"array {D} has non-integer entries; canonicalize it first")


def verify_periodic(P: PeriodicColoring, D: RestrictionArray) -> List[Violation]:
    """Every violation inside one fundamental domain: pairs (r, r + d) with
    0 <= r < p, in the order of verify_coloring."""
    _require_integral(D)
    for r, c in enumerate(P.colors):
        if isinstance(c, bool) or not isinstance(c, int) or not 1 <= c <= D.m:
            raise MalformedColoringError(f"residue {r} has color {c!r} outside 1..{D.m}")
    violations = []
    for r, c in enumerate(P.colors):
        for i, row in enumerate(D.rows, start=1):
            d = row[c - 1]
            if P(r + int(d)) == c:
                violations.append(Violation(Fraction(r), r + d, c, d, i))
    violations.sort()
    return violations


def find_periodic(
    D: RestrictionArray, p_max: int, budget: int = DEFAULT_NODE_BUDGET
) -> Optional[PeriodicColoring]:
    """The valid periodic coloring with the smallest period <= p_max, ties broken
    by the lexicographically smallest color vector; None if there is none.

    `budget` bounds the total number of search nodes over all periods.
    """
    _require_integral(D)
    stats = SearchStats()
    for p in range(1, p_max + 1):
        graph = ConflictGraph.for_residues(p, D)
        try:
            colors, period_stats = search(graph, budget - stats.nodes)
        except BudgetExceededError as ex:
            stats.add(ex.stats)
            raise BudgetExceededError(stats, budget) from None
        stats.add(period_stats)
        if colors is None:
            continue
        P = PeriodicColoring(p, tuple(colors))
        if verify_periodic(P, D):
            logger.critical("periodic witness %s fails verification for %s", P, D)
            raise SoundnessError("search produced an invalid periodic coloring")
        logger.debug("period %d coloring for %s after %d nodes", p, D, stats.nodes)
        return P
    logger.debug("no periodic coloring for %s with period <= %d", D, p_max)
    return None


def restrict_periodic(P: PeriodicColoring, a: int, b: int) -> Tuple[PointSet, Coloring]:
    """The coloring P induces on the integer points of [a, b]."""
    S = PointSet.interval(a, b)
    return S, Coloring({x: P(int(x)) for x in S})


@dataclass
class ArrayRecord:
    array: RestrictionArray
    window: Optional[Tuple[int, int]] = None
    radius: int = 0
    periodic: Optional[PeriodicColoring] = None
    errors: List[str] = field(default_factory=list)

    @property
    def window_verdict(self) -> str:
        if self.window is not None:
            return "unsat"
        if any(e.startswith("window") for e in self.errors):
            return "budget"
        return "sat-to-radius"

    @property
    def period_verdict(self) -> str:
        if self.periodic is not None:
            return "periodic"
        if any(e.startswith("period") for e in self.errors):
            return "budget"
        return "none"

    @property
    def discrepancy(self) -> bool:
        """Colorable on every window searched, but no period up to p_max."""
        return self.window_verdict == "sat-to-radius" and self.period_verdict == "none"

    def to_json(self) -> Dict[str, Any]:
        return {
            "array": array_to_json(self.array),
            "window_verdict": self.window_verdict,
            "period_verdict": self.period_verdict,
            "window": list(self.window) if self.window is not None else None,
            "radius": self.radius,
            "period": self.periodic.period if self.periodic is not None else None,
            "colors": list(self.periodic.colors) if self.periodic is not None else None,
            "discrepancy": self.discrepancy,
            "errors": self.errors,
        }


@dataclass
class PeriodicityReport:
    records: List[ArrayRecord] = field(default_factory=list)

    @property
    def discrepancies(self) -> List[ArrayRecord]:
        return [rec for rec in self.records if rec.discrepancy]

    def to_json(self) -> Dict[str, Any]:
        return {
            "format": 1,
            "records": [rec.to_json() for rec in self.records],
            "discrepancies": [array_to_json(rec.array) for rec in self.discrepancies],
        }


def classify_array(
    D: RestrictionArray,
    radius: int,
    p_max: int,
    budget: int = DEFAULT_NODE_BUDGET,
    skip_periodic_if_unsat: bool = False,
) -> ArrayRecord:
    """Runs the window search and the period search on one array.

    Budget errors are recorded on the record, never raised.
    """
    record = ArrayRecord(D, radius=radius)
    try:
        report = find_unsat_window(D, radius, budget)
        record.window = report.window
        record.radius = report.radius
    except BudgetExceededError as ex:
        record.errors.append(f"window search: {ex}")
    if record.window is not None and skip_periodic_if_unsat:
        return record
    try:
        record.periodic = find_periodic(D, p_max, budget)
    except BudgetExceededError as ex:
        record.errors.append(f"period search: {ex}")
    if record.window is not None and record.periodic is not None:
        logger.critical(
            "%s has an obstruction window %s and a period-%d coloring",
            D,
            record.window,
            record.periodic.period,
        )
        raise SoundnessError(f"{D} classified both colorable and not colorable")
    return record


def periodicity_experiment(
    family: Iterable[RestrictionArray],
    radius: int,
    p_max: int,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
    progress: bool = False,
) -> PeriodicityReport:
    """Classifies every array of `family`; arrays with no obstruction and no
    period are listed as discrepancies for manual study."""
    classify = functools.partial(classify_array, radius=radius, p_max=p_max, budget=budget)
    records = map_ordered(classify, family, jobs=jobs, desc="periodicity", progress=progress)
    report = PeriodicityReport(records)
    logger.info(
        "classified %d arrays: %d with obstruction windows, %d periodic, %d discrepancies",
        len(records),
        sum(rec.window is not None for rec in records),
        sum(rec.periodic is not None for rec in records),
        len(report.discrepancies),
    )
    return report


def _period_record(D: RestrictionArray, p_max: int, budget: int) -> ArrayRecord:
    record = ArrayRecord(D)
    try:
        record.periodic = find_periodic(D, p_max, budget)
    except BudgetExceededError as ex:
        record.errors.append(f"period search: {ex}")
    return record


def sweep_periodic(
    family: Iterable[RestrictionArray],
    p_max: int,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
    progress: bool = False,
) -> List[ArrayRecord]:
    """Runs only the period search over `family`. Records without a coloring
    are the arrays that need a closer look."""
    search_one = functools.partial(_period_record, p_max=p_max, budget=budget)
    return map_ordered(search_one, family, jobs=jobs, desc="periods", progress=progress)
