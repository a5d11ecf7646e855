from fractions import Fraction

import pytest

from sourceloc import INF, format_number, harmonic, parse_number
from sourceloc.bounds import (rooted_stage_degree_cap, sequential_edge_bound,
                              sequential_node_bound, stage_degree_cap)


def test_number_roundtrip():
    for token in (0, 7, "3/4", "inf", "-13/5"):
        assert format_number(parse_number(token)) == token


def test_finite_floats_rejected():
    with pytest.raises(ValueError):
        parse_number(0.5)
    with pytest.raises(ValueError):
        parse_number(True)


def test_harmonic_closed_forms():
    assert harmonic(0) == 0
    assert harmonic(1) == 1
    assert harmonic(3) == Fraction(11, 6)
    assert harmonic(5) == Fraction(137, 60)


def test_stage_degree_caps():
    assert [stage_degree_cap(ell) for ell in (1, 2, 3)] == [1, 25, 81]
    assert [rooted_stage_degree_cap(ell) for ell in (1, 2, 3)] == [1, 3, 5]


def test_two_stage_rooted_edge_bound():
    # H(1)/2 + H(3)/1 = 1/2 + 11/6 = 7/3
    assert sequential_edge_bound(2, rooted=True) == Fraction(7, 3)


def test_single_stage_bounds_collapse():
    assert sequential_edge_bound(1, rooted=True) == 1
    assert sequential_edge_bound(1, rooted=False) == 1
    assert sequential_node_bound(1, 1, rooted=True) == 1


def test_node_bound_truncates_at_one():
    # p_max large: every stage multiplier is min(p/(k-L+1), 1) = 1
    k = 3
    val = sequential_node_bound(k, 10, rooted=True)
    assert val == sum(harmonic(2 * ell - 1) for ell in range(1, k + 1))


def test_infinity_ordering():
    assert parse_number("inf") == INF
    assert Fraction(10**9) < INF
