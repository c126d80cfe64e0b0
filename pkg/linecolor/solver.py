"""
Complete backtracking search for D-colorings of finite point sets, and the
window search that looks for a finite obstruction to coloring the integers.
"""

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from linecolor.lib import logger
from linecolor.model import (
    Coloring,
    LineColorError,
    PointSet,
    RestrictionArray,
    SoundnessError,
    select_columns,
    verify_coloring,
)

DEFAULT_NODE_BUDGET = 10**7


class Status(enum.Enum):
    SAT = enum.auto()
    UNSAT = enum.auto()


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0

    def add(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.max_depth = max(self.max_depth, other.max_depth)


class BudgetExceededError(LineColorError):
    def __init__(self, stats: SearchStats, budget: int) -> None:
        super().__init__(f"node budget of {budget} exhausted")
        self.stats = stats
        self.budget = budget


@dataclass
class SolveResult:
    status: Status
    witness: Optional[Coloring] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


@dataclass
class ConflictGraph:
    """Variables 0..n-1 taking colors 1..m.

    `banned[v]` is a bitmask of colors v may never take (bit c-1 for C_c).
    `neighbors[v]` lists (u, mask): v and u may not share a color whose bit is
    in mask. Every edge is stored in both directions.
    """

    n: int
    m: int
    banned: List[int]
    neighbors: List[List[Tuple[int, int]]]

    @classmethod
    def empty(cls, n: int, m: int) -> "ConflictGraph":
        return cls(n, m, [0] * n, [[] for _ in range(n)])

    def add_edge(self, v: int, u: int, mask: int) -> None:
        self.neighbors[v].append((u, mask))
        self.neighbors[u].append((v, mask))

    @classmethod
    def for_points(cls, S: PointSet, D: RestrictionArray) -> "ConflictGraph":
        graph = cls.empty(len(S), D.m)
        index = S.index
        masks = sorted(D.color_masks().items())
        for i, x in enumerate(S):
            for d, mask in masks:
                j = index.get(x + d)
                if j is not None:
                    graph.add_edge(i, j, mask)
        return graph

    @classmethod
    def for_residues(cls, p: int, D: RestrictionArray) -> "ConflictGraph":
        """Residues mod p; valid colorings are exactly the valid period-p colorings
        of the integers."""
        graph = cls.empty(p, D.m)
        for d, mask in sorted(D.color_masks().items()):
            shift = int(d) % p
            if shift == 0:
                # x and x + d always share a color: those colors are unusable
                for r in range(p):
                    graph.banned[r] |= mask
                continue
            for r in range(p):
                graph.add_edge(r, (r + shift) % p, mask)
        return graph


def search(
    graph: ConflictGraph, budget: int = DEFAULT_NODE_BUDGET
) -> Tuple[Optional[List[int]], SearchStats]:
    """Depth-first search with forward checking.

    Variables are assigned in ascending order and colors tried in ascending
    order, so the first solution found is the lexicographically smallest one.
    Returns (colors, stats) with colors None when there is no solution.
    Raises BudgetExceededError after `budget` assignments.
    """
    n, m = graph.n, graph.m
    full = (1 << m) - 1
    stats = SearchStats()
    if n == 0:
        return [], stats
    banned = graph.banned
    if any(b == full for b in banned):
        return None, stats

    counts = [[0] * m for _ in range(n)]
    blocked = list(banned)
    colors = [0] * n
    cursor = [0] * n
    trail: List[List[int]] = [[] for _ in range(n)]

    def undo(v: int) -> None:
        c = colors[v] - 1
        bit = 1 << c
        for u in trail[v]:
            counts[u][c] -= 1
            if counts[u][c] == 0 and not banned[u] & bit:
                blocked[u] &= ~bit
        trail[v].clear()
        colors[v] = 0

    v = 0
    while v >= 0:
        if v == n:
            return colors, stats
        if colors[v]:
            undo(v)
        free = full & ~blocked[v] & ~((1 << cursor[v]) - 1)
        if not free:
            cursor[v] = 0
            v -= 1
            continue
        bit = free & -free
        c = bit.bit_length() - 1
        cursor[v] = c + 1
        stats.nodes += 1
        if stats.nodes > budget:
            raise BudgetExceededError(stats, budget)
        colors[v] = c + 1
        wiped_out = False
        for u, mask in graph.neighbors[v]:
            if u > v and mask & bit:
                counts[u][c] += 1
                trail[v].append(u)
                blocked[u] |= bit
                if blocked[u] == full:
                    wiped_out = True
                    break
        if not wiped_out:
            v += 1
            stats.max_depth = max(stats.max_depth, v)
    return None, stats


def decide_finite(
    S: PointSet, D: RestrictionArray, budget: int = DEFAULT_NODE_BUDGET
) -> SolveResult:
    """Decides whether S is D-colorable; SAT results carry a verified witness."""
    graph = ConflictGraph.for_points(S, D)
    colors, stats = search(graph, budget)
    if colors is None:
        logger.debug("UNSAT on %d points after %d nodes", len(S), stats.nodes)
        return SolveResult(Status.UNSAT, None, stats)
    witness = Coloring.from_sequence(S, colors)
    if verify_coloring(S, witness, D):
        logger.critical("search witness fails verification for %s", D)
        raise SoundnessError("search produced an invalid coloring")
    logger.debug("SAT on %d points after %d nodes", len(S), stats.nodes)
    return SolveResult(Status.SAT, witness, stats)


@dataclass
class WindowReport:
    found: bool
    window: Optional[Tuple[int, int]]
    radius: int
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def size(self) -> int:
        if self.window is None:
            return 0
        return self.window[1] - self.window[0] + 1


def _require_integral(D: RestrictionArray) -> None:
    if not D.is_integral():
        raise ValueError(f"array {D} has non-integer entries; canonicalize it first")


def find_unsat_window(
    D: RestrictionArray, radius_max: int, budget: int = DEFAULT_NODE_BUDGET
) -> WindowReport:
    """Looks for integer windows [-r, r], r = 1..radius_max, that are not
    D-colorable, and shrinks the first one found to a window [a, b] such that
    [a, b-1] and [a+1, b] are both colorable.

    `budget` applies to each individual window decision.
    """
    _require_integral(D)
    if radius_max < 1:
        raise ValueError(f"radius_max must be positive, got {radius_max}")
    stats = SearchStats()

    def colorable(a: int, b: int) -> bool:
        result = decide_finite(PointSet.interval(a, b), D, budget)
        stats.add(result.stats)
        return result.sat

    for r in range(1, radius_max + 1):
        if colorable(-r, r):
            continue
        logger.debug("window [%d, %d] is not %s-colorable; shrinking", -r, r, D)
        a, b = -r, r
        while a < b and not colorable(a + 1, b):
            a += 1
        # [a+1, b] is colorable, so every [a+1, b'] with b' <= b is as well
        while a < b and not colorable(a, b - 1):
            b -= 1
        return WindowReport(True, (a, b), r, stats)
    logger.debug("no obstruction for %s within radius %d", D, radius_max)
    return WindowReport(False, None, radius_max, stats)


def staircase_array(k: int) -> RestrictionArray:
    """The k x k array whose i-th row is constant i."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return RestrictionArray.of([[i] * k for i in range(1, k + 1)])


def subarray_unsat(
    D: RestrictionArray, radius_max: int, budget: int = DEFAULT_NODE_BUDGET
) -> Dict[Tuple[int, ...], WindowReport]:
    """Obstruction windows for the proper column sub-arrays of D.

    A sub-array with an obstruction means every D-coloring of the integers has
    to use one of the omitted colors somewhere.
    """
    _require_integral(D)
    found = {}
    for size in range(1, D.m):
        for cols in itertools.combinations(range(1, D.m + 1), size):
            report = find_unsat_window(select_columns(D, cols), radius_max, budget)
            if report.found:
                found[cols] = report
    return found

