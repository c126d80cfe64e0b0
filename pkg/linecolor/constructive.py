"""
Constructive D-colorings of finite rational point sets for arrays with enough
columns.

The recursion follows the bound sequence B_0 = 1, B_k = 32k B_{k-1} - 16k.
For a k x m array with m >= B_k, either some restriction r is shared by at
least 2 B_{k-1} columns, and the line is split into alternating half-open
intervals of width r whose two halves are colored recursively with disjoint
column sets; or every restriction is shared by fewer columns, in which case
16 k rho(D) <= m and each coset of the subgroup generated by the entries is
colored by random resampling.
"""

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from linecolor.lib import derive_seed, logger
from linecolor.model import (
    Coloring,
    LineColorError,
    PointSet,
    RestrictionArray,
    SoundnessError,
    canonicalize,
    entry_gcd,
    remove_occurrence,
    rho,
    verify_coloring,
)
from linecolor.solver import (
    DEFAULT_NODE_BUDGET,
    BudgetExceededError,
    ConflictGraph,
    SolveResult,
    Status,
    decide_finite,
)

DEFAULT_ROUND_CAP = 100_000


@dataclass(frozen=True)
class BoundSequence:
    values: Tuple[int, ...]

    def __post_init__(self) -> None:
        for k, b in enumerate(self.values):
            if b > closed_form_bound(k):
                raise SoundnessError(f"B_{k} = {b} exceeds 32^{k} * {k}!")

    @property
    def k(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> int:
        return self.values[k]


def closed_form_bound(k: int) -> int:
    return 32**k * math.factorial(k)


def bound_sequence(k: int) -> BoundSequence:
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    values = [1]
    for i in range(1, k + 1):
        values.append(32 * i * values[-1] - 16 * i)
    return BoundSequence(tuple(values))


@dataclass(frozen=True)
class LllDiagnostics:
    k: int
    m: int
    rho: int
    p: Fraction
    delta_bound: int
    product: Fraction
    guarantee: bool

    @property
    def strict(self) -> bool:
        """The local lemma condition itself, 4 p Delta < 1."""
        return self.product < 1


def lll_diagnostics(D: RestrictionArray) -> LllDiagnostics:
    """Probability bound p = rho/m^2 for a bad pair, the dependency degree bound
    4(km - rho + 1) - 2, their product 4 p Delta, and the sufficient condition
    16 k rho <= m."""
    if D.k < 1:
        raise ValueError("diagnostics need at least one row")
    r = rho(D)
    p = Fraction(r, D.m**2)
    delta_bound = 4 * (D.k * D.m - r + 1) - 2
    return LllDiagnostics(
        k=D.k,
        m=D.m,
        rho=r,
        p=p,
        delta_bound=delta_bound,
        product=4 * p * delta_bound,
        guarantee=16 * D.k * r <= D.m,
    )


def dependency_degree(Q: PointSet, D: RestrictionArray) -> int:
    """Maximum degree of the dependency graph of the bad events on Q.

    A_xy exists for pairs at a restricted distance and depends on the events
    sharing x or y.
    """
    graph = ConflictGraph.for_points(Q, D)
    degree = [len({u for u, _ in nbrs}) for nbrs in graph.neighbors]
    best = 0
    for v, nbrs in enumerate(graph.neighbors):
        for u, _ in nbrs:
            best = max(best, degree[v] + degree[u] - 2)
    return best


def coset_partition(Q: PointSet, D: RestrictionArray) -> List[PointSet]:
    """Classes of Q modulo the subgroup generated by the entries of D.

    No restricted distance occurs between two classes. Classes are listed by
    their smallest point.
    """
    D_int, Q_int, _ = canonicalize(D, Q)
    g = entry_gcd(D_int)
    classes: Dict[int, List[Fraction]] = {}
    for x, x_int in zip(Q, Q_int):
        key = int(x_int) % g if g else int(x_int)
        classes.setdefault(key, []).append(x)
    return [PointSet(tuple(points)) for points in classes.values()]


def split_by_interval_parity(Q: PointSet, r: Fraction) -> Tuple[PointSet, PointSet]:
    """Splits Q by the parity of n in x in [n r, (n + 1) r).

    Two points at distance exactly r are always in intervals of opposite
    parity, so neither part contains such a pair.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError(f"interval width must be positive, got {r}")
    U, V = [], []
    for x in Q:
        (U if (x // r) % 2 == 0 else V).append(x)
    return PointSet(tuple(U)), PointSet(tuple(V))


@dataclass
class ResampleTrace:
    rounds: int
    final: Coloring
    seed: int
    fallback: bool = False


class ResampleFailure(LineColorError):
    def __init__(self, rounds: int, fallback: Optional[SolveResult]) -> None:
        if fallback is None:
            msg = f"no coloring after {rounds} rounds; exhaustive fallback ran out of budget"
        else:
            msg = f"no coloring after {rounds} rounds; exhaustive fallback says {fallback.status.name}"
        super().__init__(msg)
        self.rounds = rounds
        self.fallback = fallback


def mt_color(
    Q: PointSet,
    D: RestrictionArray,
    seed: int,
    round_cap: int = DEFAULT_ROUND_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> ResampleTrace:
    """Random resampling: start from a uniformly random coloring and, while a
    restricted pair shares a forbidden color, recolor both points of the
    smallest such pair.

    After `round_cap` rounds the exhaustive search takes over; ResampleFailure
    is raised only if that finds no coloring either.
    """
    rng = np.random.default_rng(seed)
    graph = ConflictGraph.for_points(Q, D)
    colors = [int(c) for c in rng.integers(1, D.m + 1, size=len(Q))]

    def bad_pairs(v: int) -> List[Tuple[int, int]]:
        c = colors[v]
        return [
            (min(v, u), max(v, u))
            for u, mask in graph.neighbors[v]
            if colors[u] == c and mask >> (c - 1) & 1
        ]

    conflicts = set()
    for v in range(len(Q)):
        conflicts.update(bad_pairs(v))

    rounds = 0
    while conflicts:
        if rounds >= round_cap:
            logger.warning(
                "resampling gave up after %d rounds on %d points; trying exhaustive search",
                rounds,
                len(Q),
            )
            try:
                result = decide_finite(Q, D, budget)
            except BudgetExceededError:
                raise ResampleFailure(rounds, None) from None
            if result.witness is None:
                raise ResampleFailure(rounds, result)
            return ResampleTrace(rounds, result.witness, seed, fallback=True)
        pair = min(conflicts)
        for v in pair:
            for u, _ in graph.neighbors[v]:
                conflicts.discard((min(v, u), max(v, u)))
            colors[v] = int(rng.integers(1, D.m + 1))
        for v in pair:
            conflicts.update(bad_pairs(v))
        rounds += 1

    final = Coloring.from_sequence(Q, colors)
    if verify_coloring(Q, final, D):
        raise SoundnessError("resampling stopped on an invalid coloring")
    logger.debug("resampling colored %d points in %d rounds", len(Q), rounds)
    return ResampleTrace(rounds, final, seed)


class Branch(enum.Enum):
    EMPTY = "k0"
    SPLIT = "b"
    COSETS = "c"
    FALLBACK = "fallback"


@dataclass
class BranchStep:
    depth: int
    branch: Branch
    k: int
    m: int
    rho: int
    points: int
    r: Optional[Fraction] = None
    classes: int = 0
    rounds: int = 0
    fallback: bool = False


@dataclass
class ColorLineResult:
    status: Status
    coloring: Optional[Coloring]
    trace: List[BranchStep] = field(default_factory=list)

    @property
    def fallback(self) -> bool:
        return any(step.fallback for step in self.trace)


def _shared_restriction(D: RestrictionArray, count: int) -> Fraction:
    columns_with: Dict[Fraction, int] = defaultdict(int)
    for col in D.column_sets():
        for value in col:
            columns_with[value] += 1
    return min(v for v, n in columns_with.items() if n == count)


def _color(
    D: RestrictionArray,
    Q: PointSet,
    path: Tuple[int, ...],
    bounds: BoundSequence,
    seed: int,
    round_cap: int,
    budget: int,
    trace: List[BranchStep],
) -> Coloring:
    depth = len(path)
    if D.k == 0:
        trace.append(BranchStep(depth, Branch.EMPTY, 0, D.m, 0, len(Q)))
        return Coloring({x: 1 for x in Q})

    r_count = rho(D)
    prev = bounds[D.k - 1]
    if r_count >= 2 * prev:
        r = _shared_restriction(D, r_count)
        cols = D.restricted_colors(r)
        left, right = cols[:prev], cols[prev : 2 * prev]
        trace.append(BranchStep(depth, Branch.SPLIT, D.k, D.m, r_count, len(Q), r=r))
        U, V = split_by_interval_parity(Q, r)
        args = (bounds, seed, round_cap, budget, trace)
        cU = _color(remove_occurrence(D, r, left), U, path + (0,), *args)
        cV = _color(remove_occurrence(D, r, right), V, path + (1,), *args)
        return Coloring({**cU.relabel(left).assignment, **cV.relabel(right).assignment})

    if 16 * D.k * r_count > D.m:
        logger.critical("rho = %d too large for the coset branch of %s", r_count, D)
        raise SoundnessError(f"16 * {D.k} * {r_count} > {D.m} in the coset branch")
    classes = coset_partition(Q, D)
    step = BranchStep(depth, Branch.COSETS, D.k, D.m, r_count, len(Q), classes=len(classes))
    trace.append(step)
    assignment: Dict[Fraction, int] = {}
    for idx, cls in enumerate(classes):
        result = mt_color(cls, D, derive_seed(seed, *path, idx), round_cap, budget)
        step.rounds += result.rounds
        step.fallback = step.fallback or result.fallback
        assignment.update(result.final.assignment)
    return Coloring(assignment)


def color_line(
    D: RestrictionArray,
    Q: PointSet,
    seed: int = 0,
    round_cap: int = DEFAULT_ROUND_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> ColorLineResult:
    """D-colors the finite set Q; the result depends only on (D, Q, seed).

    Arrays with fewer than B_k columns are outside the construction and go to
    the exhaustive search, which may answer UNSAT.
    """
    bounds = bound_sequence(D.k)
    trace: List[BranchStep] = []
    if D.m < bounds[D.k]:
        logger.warning(
            "%d columns is below B_%d = %d; using exhaustive search", D.m, D.k, bounds[D.k]
        )
        trace.append(
            BranchStep(0, Branch.FALLBACK, D.k, D.m, rho(D), len(Q), fallback=True)
        )
        result = decide_finite(Q, D, budget)
        return ColorLineResult(result.status, result.witness, trace)

    coloring = _color(D, Q, (), bounds, seed, round_cap, budget, trace)
    violations = verify_coloring(Q, coloring, D)
    if violations:
        logger.critical("constructed coloring has %d violations", len(violations))
        raise SoundnessError(f"constructed coloring violates {violations[0]}")
    return ColorLineResult(Status.SAT, coloring, trace)

