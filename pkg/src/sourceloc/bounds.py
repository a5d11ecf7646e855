"""Closed-form approximation-ratio bounds used in solver reports.

Everything here is exact `Fraction` arithmetic so realized-ratio
comparisons in tests never hit rounding.
"""

from __future__ import annotations

from fractions import Fraction


def harmonic(j: int) -> Fraction:
    """H(j) = sum_{i=1..j} 1/i, with H(0) = 0."""
    if j < 0:
        raise ValueError("harmonic number needs j >= 0")
    total = Fraction(0)
    for i in range(1, j + 1):
        total += Fraction(1, i)
    return total


def stage_degree_cap(stage: int) -> int:
    """Worst-case transversal-hypergraph degree at augmentation stage `stage`
    for a general (non-rooted) star candidate set: (4*stage - 3)**2."""
    if stage < 1:
        raise ValueError("stages are 1-based")
    return (4 * stage - 3) ** 2


def rooted_stage_degree_cap(stage: int) -> int:
    """Degree cap when the demand star and the candidate star share a center."""
    if stage < 1:
        raise ValueError("stages are 1-based")
    return 2 * stage - 1


def sequential_edge_bound(k: int, rooted: bool) -> Fraction:
    """Ratio of the k-stage sequential augmentation with edge costs:
    sum over stages of H(degree cap) / (k - stage + 1)."""
    total = Fraction(0)
    for ell in range(1, k + 1):
        cap = rooted_stage_degree_cap(ell) if rooted else stage_degree_cap(ell)
        total += harmonic(cap) / (k - ell + 1)
    return total


def sequential_node_bound(k: int, p_max: int, rooted: bool) -> Fraction:
    """Node-cost variant: sum of H(degree cap) * min(p_max/(k-stage+1), 1)."""
    total = Fraction(0)
    for ell in range(1, k + 1):
        cap = rooted_stage_degree_cap(ell) if rooted else stage_degree_cap(ell)
        total += harmonic(cap) * min(Fraction(p_max, k - ell + 1), Fraction(1))
    return total
