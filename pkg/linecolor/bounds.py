"""
Lower bounds on upper chromatic numbers: k-distance sets and the arrays they
rule out, and searches over small integer arrays for obstruction windows.
"""

import dataclasses
import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from linecolor.formats import SchemaError, array_to_json, parse_json_rational
from linecolor.lib import FORMAT_VERSION, format_rational, logger, map_ordered
from linecolor.model import (
    Number,
    PointSet,
    RestrictionArray,
    SoundnessError,
    enumerate_arrays,
)
from linecolor.periodic import ArrayRecord, classify_array
from linecolor.solver import DEFAULT_NODE_BUDGET, decide_finite, find_unsat_window

POLYGON_TOLERANCE = 1e-9

Coordinate = Union[Fraction, float]


@dataclass(frozen=True)
class KDistanceSet:
    """Points whose pairwise distances take at most `level` values.

    Exact sets keep Fraction coordinates and exact squared distances; polygon
    sets keep float coordinates, and their distances are only compared within
    POLYGON_TOLERANCE.
    """

    dimension: int
    level: int
    points: Tuple[Tuple[Coordinate, ...], ...]
    squared_distances: Tuple[Coordinate, ...]
    exact: bool = True

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> Dict[str, Any]:
        def coord(c: Coordinate) -> Union[str, float]:
            return format_rational(c) if isinstance(c, Fraction) else c

        return {
            "format": FORMAT_VERSION,
            "dimension": self.dimension,
            "level": self.level,
            "exact": self.exact,
            "points": [[coord(c) for c in p] for p in self.points],
            "squared_distances": [coord(d) for d in self.squared_distances],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "KDistanceSet":
        """Reads an exact set back; the stored distances are recomputed and checked."""
        if not data.get("exact", True):
            raise SchemaError("exact", "only exact point sets can be read back")
        points = data.get("points")
        if not isinstance(points, list) or not all(isinstance(p, list) for p in points):
            raise SchemaError("points", "expected a list of coordinate lists")
        coords = [
            [parse_json_rational(c, f"points[{i}][{j}]") for j, c in enumerate(p)]
            for i, p in enumerate(points)
        ]
        fields = {}
        for key in ("level", "dimension"):
            value = data.get(key)
            if isinstance(value, bool) or not isinstance(value, int):
                raise SchemaError(key, f"expected an integer, got {value!r}")
            fields[key] = value
        try:
            S = exact_kdistance_set(coords, fields["level"])
        except ValueError as ex:
            raise SchemaError("points", str(ex)) from None
        # the affine dimension may be smaller than the coordinate count
        return dataclasses.replace(S, dimension=fields["dimension"])


def _squared(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))


def exact_kdistance_set(points: Sequence[Sequence[Number]], level: int) -> KDistanceSet:
    coords = tuple(tuple(Fraction(c) for c in p) for p in points)
    if len({len(p) for p in coords}) > 1:
        raise ValueError("points have different dimensions")
    squared = sorted({_squared(a, b) for a, b in itertools.combinations(coords, 2)})
    if len(squared) > level:
        raise ValueError(f"{len(squared)} distinct distances, more than {level}")
    dimension = len(coords[0]) if coords else 0
    return KDistanceSet(dimension, level, coords, tuple(squared))


def line_set(points: Sequence[Number]) -> KDistanceSet:
    """A 1-D point set, taken as a k-distance set for its own number of distances."""
    values = sorted({Fraction(x) for x in points})
    level = len({b - a for a, b in itertools.combinations(values, 2)})
    return exact_kdistance_set([(x,) for x in values], max(level, 1))


def lower_bound_binomial(n: int, k: int) -> int:
    """C(n+1, k): the hypersimplex is a k-distance set of that size in R^n."""
    if n < 1 or not 1 <= k <= n + 1:
        raise ValueError(f"need n >= 1 and 1 <= k <= n + 1, got n={n}, k={k}")
    return math.comb(n + 1, k)


def hypersimplex_set(n: int, k: int) -> KDistanceSet:
    """The 0/1 vectors of length n+1 with exactly k ones.

    They lie in the hyperplane sum(x) = k, an n-dimensional space, and two of
    them with j common ones are at squared distance 2(k - j).
    """
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    vectors = np.zeros((math.comb(n + 1, k), n + 1), dtype=np.int64)
    for row, ones in enumerate(itertools.combinations(range(n + 1), k)):
        vectors[row, list(ones)] = 1
    diff = vectors[:, None, :] - vectors[None, :, :]
    sq = (diff * diff).sum(axis=-1)
    upper = sq[np.triu_indices(len(vectors), k=1)]
    squared = tuple(Fraction(int(v)) for v in np.unique(upper))
    if len(squared) > k:
        raise SoundnessError(f"hypersimplex ({n}, {k}) has {len(squared)} distances")
    points = tuple(tuple(Fraction(int(c)) for c in vec) for vec in vectors)
    return KDistanceSet(n, k, points, squared)


def distinct_within(values: np.ndarray, tolerance: float) -> List[float]:
    """Representatives of `values` after merging runs closer than `tolerance`."""
    reps: List[float] = []
    for v in np.sort(values):
        if not reps or v - reps[-1] > tolerance:
            reps.append(float(v))
    return reps


def polygon_set(k: int) -> KDistanceSet:
    """Vertices of the regular (2k+1)-gon on the unit circle: a k-distance set
    in the plane with chords 2 sin(pi j / (2k+1)), j = 1..k."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    n = 2 * k + 1
    angles = 2 * np.pi * np.arange(n) / n
    coords = np.column_stack([np.cos(angles), np.sin(angles)])
    dist = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=-1)
    chords = distinct_within(dist[np.triu_indices(n, k=1)], POLYGON_TOLERANCE)
    if len(chords) != k:
        raise SoundnessError(f"{n}-gon shows {len(chords)} distances, expected {k}")
    points = tuple((float(x), float(y)) for x, y in coords)
    return KDistanceSet(2, k, points, tuple(c * c for c in chords), exact=False)


@dataclass(frozen=True)
class WitnessInstance:
    """An array that the source set cannot be colored with.

    Every column lists all distance values of the source and there are s - 1
    columns, so every pair conflicts in every color and two of the s points
    must share one. For sets in more than one dimension the entries are the
    squared distances (`squared` is True); they are only used structurally.
    """

    source: KDistanceSet
    array: RestrictionArray
    squared: bool = False

    @property
    def claim(self) -> str:
        return f"the {len(self.source)} source points are not colorable with {self.array}"

    @property
    def points(self) -> PointSet:
        if self.source.dimension != 1:
            raise ValueError("only 1-D witnesses have a point set on the line")
        return PointSet.of(p[0] for p in self.source.points)


def witness_from_kdistance(S: KDistanceSet) -> WitnessInstance:
    s = len(S)
    if s < 2:
        raise ValueError(f"a witness needs at least 2 points, got {s}")
    if not S.exact:
        raise ValueError("witness arrays need exact coordinates")
    if S.dimension == 1:
        values = sorted({abs(a[0] - b[0]) for a, b in itertools.combinations(S.points, 2)})
        squared = False
    else:
        values = list(S.squared_distances)
        squared = True
    array = RestrictionArray.from_columns([values] * (s - 1))
    return WitnessInstance(S, array, squared)


def pigeonhole_certificate(W: WitnessInstance) -> bool:
    """Checks structurally that W.source cannot be W.array-colored: more points
    than colors, and every pair restricted in every column."""
    if len(W.source) <= W.array.m:
        return False
    columns = W.array.column_sets()
    for a, b in itertools.combinations(W.source.points, 2):
        if W.squared:
            value = _squared(a, b)
        else:
            value = abs(a[0] - b[0])
        if not all(value in col for col in columns):
            return False
    return True


def confirm_by_search(W: WitnessInstance, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Runs the exhaustive search on a 1-D witness; True when it agrees."""
    result = decide_finite(W.points, W.array, budget)
    if result.sat:
        logger.critical("search colors the witness set %s", W.points)
        raise SoundnessError(f"{W.claim}, but the search found a coloring")
    return True


@dataclass
class SearchReport:
    entry_max: int
    columns: int
    radius: int
    p_max: int
    records: List[ArrayRecord] = field(default_factory=list)

    @property
    def unsat(self) -> List[ArrayRecord]:
        return [rec for rec in self.records if rec.window is not None]

    @property
    def periodic(self) -> List[ArrayRecord]:
        return [rec for rec in self.records if rec.periodic is not None]

    @property
    def unresolved(self) -> List[ArrayRecord]:
        return [rec for rec in self.records if rec.window is None and rec.periodic is None]

    def to_json(self) -> Dict[str, Any]:
        return {
            "format": 1,
            "entry_max": self.entry_max,
            "columns": self.columns,
            "radius": self.radius,
            "p_max": self.p_max,
            "arrays": len(self.records),
            "unsat": [rec.to_json() for rec in self.unsat],
            "unresolved": [rec.to_json() for rec in self.unresolved],
            "periodic": len(self.periodic),
        }


def chi2z_search(
    entry_max: int,
    radius: int,
    p_max: int,
    columns: int = 3,
    budget: int = DEFAULT_NODE_BUDGET,
    cross_check: bool = False,
    jobs: int = 1,
    progress: bool = False,
) -> SearchReport:
    """Classifies every 2 x `columns` array with entries <= entry_max.

    Each 2 x 3 array with an obstruction window shows that 4 colors are needed
    for two restrictions per color on the integers; a 2 x 4 array with one
    would show that 4 colors are not enough. With `cross_check`, arrays with a
    window also go through the period search, which must fail.
    """
    classify = functools.partial(
        classify_array,
        radius=radius,
        p_max=p_max,
        budget=budget,
        skip_periodic_if_unsat=not cross_check,
    )
    family = list(enumerate_arrays(2, columns, entry_max))
    logger.info("classifying %d arrays of shape 2x%d", len(family), columns)
    records = map_ordered(
        classify, family, jobs=jobs, desc=f"2x{columns} arrays", progress=progress
    )
    return SearchReport(entry_max, columns, radius, p_max, records)


@dataclass
class LowerBoundReport:
    k: int
    entry_max: int
    radius: int
    bound: int
    array: Optional[RestrictionArray] = None
    window: Optional[Tuple[int, int]] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "format": 1,
            "k": self.k,
            "entry_max": self.entry_max,
            "radius": self.radius,
            "bound": self.bound,
            "array": array_to_json(self.array) if self.array is not None else None,
            "window": list(self.window) if self.window is not None else None,
        }


def upper_chromatic_lower_bound(
    k: int,
    entry_max: int,
    radius: int,
    m_max: int = 8,
    budget: int = DEFAULT_NODE_BUDGET,
) -> LowerBoundReport:
    """m + 1 for the largest m <= m_max such that some k x m array with entries
    <= entry_max has an obstruction window within `radius`.

    Dropping a column keeps an obstruction, so the scan stops at the first m
    without one.
    """
    report = LowerBoundReport(k, entry_max, radius, bound=1)
    for m in range(1, m_max + 1):
        for D in enumerate_arrays(k, m, entry_max):
            window = find_unsat_window(D, radius, budget)
            if window.found:
                report.bound, report.array, report.window = m + 1, D, window.window
                logger.debug("%s is not colorable on %s", D, window.window)
                break
        else:
            return report
    logger.warning("every m up to %d has an obstruction; the bound may be higher", m_max)
    return report
