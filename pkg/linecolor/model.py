"""
Exact-arithmetic domain types: restriction arrays, point sets, colorings, and
the coloring verifier.

Colors and rows are 1-based throughout (C_1..C_m, rows 1..k). A column is a
multiset of restrictions for its color; the order of entries inside a column
carries no meaning.
"""

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Sequence,
    Set,
    Tuple,
    Union,
)

from linecolor.lib import is_strictly_increasing, lcm_of_denominators

Number = Union[int, Fraction]


class LineColorError(Exception):
    pass


class MalformedColoringError(LineColorError, ValueError):
    pass


class SoundnessError(LineColorError):
    """A cross-check failed that can only fail because of a bug."""


def _as_fraction(value: Number) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError(f"expected an exact rational, got {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class RestrictionArray:
    k: int
    m: int
    rows: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError(f"row count must be non-negative, got {self.k}")
        if self.m < 1:
            raise ValueError(f"column count must be positive, got {self.m}")
        if len(self.rows) != self.k:
            raise ValueError(f"expected {self.k} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows, start=1):
            if len(row) != self.m:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.m}")
            for j, entry in enumerate(row, start=1):
                if entry <= 0:
                    raise ValueError(f"entry ({i}, {j}) is not positive: {entry}")

    @classmethod
    def of(cls, rows: Iterable[Iterable[Number]], m: int = 0) -> "RestrictionArray":
        """Builds an array from nested rows of ints/Fractions.

        `m` is only needed for the empty (k = 0) array.
        """
        frows = tuple(tuple(_as_fraction(v) for v in row) for row in rows)
        if frows:
            m = len(frows[0])
        return cls(len(frows), m, frows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]]) -> "RestrictionArray":
        """Builds an array from columns of equal length k (k may be 0)."""
        if not columns:
            raise ValueError("an array needs at least one column")
        k = len(columns[0])
        if any(len(col) != k for col in columns):
            raise ValueError("columns have different lengths")
        rows = tuple(
            tuple(_as_fraction(col[i]) for col in columns) for i in range(k)
        )
        return cls(k, len(columns), rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i - 1][j - 1]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j - 1] for row in self.rows)

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.column(j) for j in range(1, self.m + 1)]

    def column_sets(self) -> List[FrozenSet[Fraction]]:
        return [frozenset(col) for col in self.columns()]

    def restricted_colors(self, d: Fraction) -> List[int]:
        """The colors for which `d` is a restriction."""
        return [j for j, col in enumerate(self.column_sets(), start=1) if d in col]

    def color_masks(self) -> Dict[Fraction, int]:
        """Maps each distinct restriction to a bitmask of the colors it restricts
        (bit j-1 for color C_j)."""
        masks: Dict[Fraction, int] = defaultdict(int)
        for row in self.rows:
            for j, entry in enumerate(row):
                masks[entry] |= 1 << j
        return dict(masks)

    def is_integral(self) -> bool:
        return all(entry.denominator == 1 for row in self.rows for entry in row)

    def scaled(self, c: Fraction) -> "RestrictionArray":
        return RestrictionArray(
            self.k, self.m, tuple(tuple(entry * c for entry in row) for row in self.rows)
        )

    def __str__(self) -> str:
        if self.k == 0:
            return f"[0x{self.m}]"
        return "[" + "; ".join(" ".join(map(str, row)) for row in self.rows) + "]"


@dataclass(frozen=True)
class PointSet:
    points: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not is_strictly_increasing(self.points):
            raise ValueError("points must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[Number]) -> "PointSet":
        """Sorts and deduplicates `values`."""
        return cls(tuple(sorted({_as_fraction(v) for v in values})))

    @classmethod
    def interval(cls, a: int, b: int) -> "PointSet":
        """The integer points of [a, b]."""
        return cls(tuple(Fraction(x) for x in range(a, b + 1)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.points)

    def __contains__(self, x: object) -> bool:
        return x in self.index

    @property
    def index(self) -> Dict[Fraction, int]:
        # cached on first use; the dataclass is frozen, so go through object
        try:
            return self.__dict__["_index"]  # type: ignore[no-any-return]
        except KeyError:
            idx = {x: i for i, x in enumerate(self.points)}
            object.__setattr__(self, "_index", idx)
            return idx

    def scaled(self, c: Fraction) -> "PointSet":
        return PointSet(tuple(x * c for x in self.points))

    def subset(self, values: Iterable[Fraction]) -> "PointSet":
        return PointSet.of(v for v in values if v in self)


@dataclass(frozen=True)
class Coloring:
    """A total assignment of points to colors C_1..C_m."""

    assignment: Mapping[Fraction, int] = field(default_factory=dict)

    @classmethod
    def of(cls, assignment: Mapping[Number, int]) -> "Coloring":
        return cls({_as_fraction(x): c for x, c in assignment.items()})

    @classmethod
    def from_sequence(cls, points: PointSet, colors: Sequence[int]) -> "Coloring":
        if len(colors) != len(points):
            raise MalformedColoringError(
                f"{len(colors)} colors given for {len(points)} points"
            )
        return cls(dict(zip(points.points, colors)))

    def __getitem__(self, x: Fraction) -> int:
        return self.assignment[x]

    def __len__(self) -> int:
        return len(self.assignment)

    def restrict(self, points: Iterable[Fraction]) -> "Coloring":
        return Coloring({x: self.assignment[x] for x in points})

    def relabel(self, mapping: Sequence[int]) -> "Coloring":
        """Maps color c to mapping[c - 1]."""
        return Coloring({x: mapping[c - 1] for x, c in self.assignment.items()})

    def colors_used(self) -> Set[int]:
        return set(self.assignment.values())


@dataclass(frozen=True, order=True)
class Violation:
    x: Fraction
    y: Fraction
    color: int
    distance: Fraction
    row: int


def rho(D: RestrictionArray) -> int:
    """The largest number of columns in which any single restriction appears."""
    counts: Dict[Fraction, int] = defaultdict(int)
    for col in D.column_sets():
        for value in col:
            counts[value] += 1
    return max(counts.values(), default=0)


def distinct_restrictions(D: RestrictionArray) -> FrozenSet[Fraction]:
    return frozenset(entry for row in D.rows for entry in row)


def check_coloring(S: PointSet, T: Coloring, m: int) -> None:
    """Raises MalformedColoringError unless T colors exactly S with C_1..C_m."""
    missing = [x for x in S if x not in T.assignment]
    if missing:
        raise MalformedColoringError(
            f"coloring is partial: {len(missing)} points uncolored, first {missing[0]}"
        )
    for x, c in T.assignment.items():
        if isinstance(c, bool) or not isinstance(c, int) or not 1 <= c <= m:
            raise MalformedColoringError(f"point {x} has color {c!r} outside 1..{m}")


def verify_coloring(S: PointSet, T: Coloring, D: RestrictionArray) -> List[Violation]:
    """Returns every violated (pair, color, row), ordered by x, then y, then row.

    An empty list means T is a D-coloring of S.
    """
    check_coloring(S, T, D.m)
    if D.k == 0:
        return []
    index = S.index
    distances = sorted(distinct_restrictions(D))
    violations = []
    for x in S:
        c = T[x]
        for d in distances:
            y = x + d
            if y not in index or T[y] != c:
                continue
            for i, row in enumerate(D.rows, start=1):
                if row[c - 1] == d:
                    violations.append(Violation(x, y, c, d, i))
    return violations


def scale_instance(
    D: RestrictionArray, S: PointSet, c: Number
) -> Tuple[RestrictionArray, PointSet]:
    c = _as_fraction(c)
    if c <= 0:
        raise ValueError(f"scale factor must be positive, got {c}")
    return D.scaled(c), S.scaled(c)


def canonicalize(
    D: RestrictionArray, S: PointSet
) -> Tuple[RestrictionArray, PointSet, int]:
    """Scales by the lcm of all denominators so every entry and point is an integer."""
    factor = lcm_of_denominators(
        itertools.chain((e for row in D.rows for e in row), S.points)
    )
    D2, S2 = scale_instance(D, S, factor)
    return D2, S2, factor


def entry_gcd(D: RestrictionArray) -> int:
    """gcd of the entries of an integral array; 0 when k = 0."""
    return math.gcd(*(int(e) for row in D.rows for e in row))


def chromatic_array(m: int) -> RestrictionArray:
    """The 1 x m all-ones array: D-colorings are ordinary proper colorings of the
    unit-distance graph."""
    return RestrictionArray.of([[1] * m])


def select_columns(D: RestrictionArray, columns: Sequence[int]) -> RestrictionArray:
    """The sub-array on the given 1-based columns, in the given order."""
    if not columns:
        raise ValueError("select at least one column")
    if D.k == 0:
        return RestrictionArray(0, len(columns), ())
    return RestrictionArray.from_columns([D.column(j) for j in columns])


def remove_occurrence(
    D: RestrictionArray, value: Fraction, columns: Sequence[int]
) -> RestrictionArray:
    """Deletes one occurrence of `value` from each listed column, giving a
    (k-1)-row array on those columns."""
    if D.k == 0:
        raise ValueError("cannot remove a restriction from an empty array")
    new_cols = []
    for j in columns:
        col = list(D.column(j))
        try:
            col.remove(value)
        except ValueError:
            raise ValueError(f"column {j} does not contain {value}") from None
        new_cols.append(col)
    if D.k == 1:
        return RestrictionArray(0, len(columns), ())
    return RestrictionArray.from_columns(new_cols)


def enumerate_arrays(k: int, m: int, entry_max: int) -> Iterator[RestrictionArray]:
    """All k x m arrays with entries in 1..entry_max, one per class under
    within-column reordering and column permutation, in lexicographic order of
    their sorted columns."""
    if k < 1 or m < 1 or entry_max < 1:
        raise ValueError("k, m and entry_max must be positive")
    column_kinds = list(
        itertools.combinations_with_replacement(range(1, entry_max + 1), k)
    )
    for cols in itertools.combinations_with_replacement(column_kinds, m):
        yield RestrictionArray.from_columns(cols)
