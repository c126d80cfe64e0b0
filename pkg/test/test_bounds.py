import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from linecolor.bounds import (
    KDistanceSet,
    chi2z_search,
    confirm_by_search,
    hypersimplex_set,
    line_set,
    lower_bound_binomial,
    pigeonhole_certificate,
    polygon_set,
    upper_chromatic_lower_bound,
    witness_from_kdistance,
)
from linecolor.formats import SchemaError
from linecolor.model import RestrictionArray
from linecolor.solver import staircase_array


@pytest.mark.parametrize("n, k, expected", [(3, 2, 6), (1, 1, 2), (5, 3, 20)])
def test_lower_bound_binomial(n, k, expected):
    assert lower_bound_binomial(n, k) == expected


def test_lower_bound_domain():
    with pytest.raises(ValueError):
        lower_bound_binomial(2, 4)
    with pytest.raises(ValueError):
        lower_bound_binomial(0, 1)


def test_hypersimplex_examples():
    S = hypersimplex_set(2, 1)
    assert len(S) == 3
    assert S.squared_distances == (2,)
    S = hypersimplex_set(3, 2)
    assert len(S) == 6
    assert set(S.squared_distances) <= {2, 4}
    assert len(hypersimplex_set(4, 2)) == 10


@pytest.mark.parametrize("n", range(1, 7))
def test_hypersimplex_sizes(n):
    for k in range(1, n + 1):
        S = hypersimplex_set(n, k)
        assert len(S) == math.comb(n + 1, k)
        assert len(S.squared_distances) <= k
        assert all(sum(p) == k for p in S.points)


@pytest.mark.parametrize("k", range(1, 9))
def test_polygon_distance_count(k):
    S = polygon_set(k)
    assert len(S) == 2 * k + 1
    assert len(S.squared_distances) == k
    assert not S.exact


def test_polygon_rotation_invariance():
    S = polygon_set(3)
    pts = np.array(S.points)

    def profile(i):
        return np.sort(np.linalg.norm(pts - pts[i], axis=1))

    for i in range(1, len(pts)):
        assert np.allclose(profile(0), profile(i), atol=1e-9)


def test_line_witness():
    W = witness_from_kdistance(line_set([0, 1, 2]))
    assert W.array == RestrictionArray.of([[1, 1], [2, 2]])
    assert not W.squared
    assert pigeonhole_certificate(W)
    assert confirm_by_search(W)


@pytest.mark.parametrize("k", range(1, 6))
def test_staircase_witness(k):
    W = witness_from_kdistance(line_set(range(k + 1)))
    assert W.array == staircase_array(k)
    assert pigeonhole_certificate(W)
    assert confirm_by_search(W)


def test_integer_witnesses_agree_with_search():
    for points in itertools.combinations(range(9), 4):
        W = witness_from_kdistance(line_set(points))
        assert pigeonhole_certificate(W)
        assert confirm_by_search(W)


def test_hypersimplex_witness():
    W = witness_from_kdistance(hypersimplex_set(3, 2))
    assert W.squared
    assert W.array.m == 5
    assert W.array.rows == ((2,) * 5, (4,) * 5)
    assert pigeonhole_certificate(W)
    with pytest.raises(ValueError):
        W.points


def test_witness_rejects_degenerate():
    with pytest.raises(ValueError):
        witness_from_kdistance(line_set([3]))
    with pytest.raises(ValueError):
        witness_from_kdistance(polygon_set(2))


def test_kdistance_json():
    S = hypersimplex_set(3, 2)
    assert KDistanceSet.from_json(S.to_json()) == S
    data = polygon_set(2).to_json()
    assert isinstance(data["points"][0][0], float)
    with pytest.raises(SchemaError):
        KDistanceSet.from_json(data)
    data = S.to_json()
    data["level"] = 1
    with pytest.raises(SchemaError):
        KDistanceSet.from_json(data)


def test_exact_set_coordinates():
    S = line_set([Fraction(1, 2), 0, 1])
    assert S.dimension == 1
    assert S.squared_distances == (Fraction(1, 4), 1)


@pytest.mark.slow
def test_chi2z_rediscovers_obstruction():
    report = chi2z_search(entry_max=4, radius=10, p_max=24, cross_check=True)
    unsat = {rec.array for rec in report.unsat}
    assert RestrictionArray.of([[1, 1, 1], [2, 3, 4]]) in unsat
    assert not any(rec.window is not None and rec.periodic is not None for rec in report.records)


@pytest.mark.slow
def test_chi2z_family_member():
    report = chi2z_search(entry_max=6, radius=12, p_max=24)
    assert RestrictionArray.of([[1, 1, 1], [4, 5, 6]]) in {rec.array for rec in report.unsat}


def test_chi2z_trivial():
    report = chi2z_search(entry_max=1, radius=6, p_max=6, cross_check=True)
    (rec,) = report.records
    assert rec.array == RestrictionArray.of([[1, 1, 1], [1, 1, 1]])
    assert rec.window is None
    assert rec.periodic is not None
    assert report.to_json()["unsat"] == []


def test_empirical_lower_bound():
    report = upper_chromatic_lower_bound(1, entry_max=2, radius=6, m_max=4)
    # [[1, 2]] is the only obstruction with two columns; none of the 1x3 arrays has one
    assert report.bound == 3
    assert report.array == RestrictionArray.of([[1, 2]])
    assert report.window is not None


def test_chi2z_four_columns():
    report = chi2z_search(entry_max=1, radius=6, p_max=6, columns=4)
    (rec,) = report.records
    assert rec.array == RestrictionArray.of([[1] * 4, [1] * 4])
    assert rec.window is None
    assert report.to_json()["columns"] == 4
