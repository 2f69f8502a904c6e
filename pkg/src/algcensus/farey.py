"""Farey fractions: generation, counting, exact discrepancy and the degree-1 bridge."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .roots import HalfOpenInterval


def farey_sequence(Q: int) -> list[Fraction]:
    """Reduced fractions a/b with 1 <= a <= b <= Q, ascending (0/1 is not included)."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    out = []
    a, b, c, d = 0, 1, 1, Q
    while c <= Q:
        out.append(Fraction(c, d))
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out


def totients(Q: int) -> np.ndarray:
    phi = np.arange(Q + 1, dtype=np.int64)
    for p in range(2, Q + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def farey_count(Q: int, include_zero: bool = False) -> int:
    if Q < 1:
        raise ValueError("Q must be >= 1")
    return int(totients(Q)[1:].sum()) + int(include_zero)


def discrepancy(Q: int) -> Fraction:
    """Exact sup over alpha in [0, 1] of |#(F_Q in [0, alpha]) / #F_Q - alpha|."""
    xs = farey_sequence(Q)
    N = len(xs)
    best = Fraction(0)
    for i, x in enumerate(xs, start=1):
        # value at x (step already taken) and the left limit just below x
        best = max(best, abs(Fraction(i, N) - x), abs(Fraction(i - 1, N) - x))
    return best


def a1_relation_check(Q: int) -> tuple[int, int]:
    """(#A_1(Q) from the census, 4 * #F_Q - 5) with 0/1 counted in F_Q."""
    from .census import total_count

    return total_count(1, Q, force=True), 4 * farey_count(Q, include_zero=True) - 5


def a1_closed_form(Q: int) -> int:
    """#A_1(Q) by direct counting: 4 (#F_Q - 1) interior fractions plus -1, 0, 1."""
    return 4 * (farey_count(Q) - 1) + 3


def walfisz_normalized(Q: int) -> float:
    err = abs(farey_count(Q) - 3.0 / math.pi ** 2 * Q * Q)
    return err / (Q * math.log(Q) ** (2 / 3) * math.log(math.log(Q)) ** (4 / 3))


def extremal_gap_ratio(Q: int, intervals: list[HalfOpenInterval] | None = None) -> float:
    """Q * sup_I |Phi_1(Q, I) / Phi_1(Q, R) - (1/4) * integral_I phi_1|.

    The default family is every (x_i, x_j] with Farey endpoints (0 included);
    on [0, 1] the count is j - i, so the sup is max g - min g with
    g_i = i / M - x_i / 4.
    """
    if Q < 2:
        raise ValueError("Q must be >= 2")
    M = a1_closed_form(Q)
    if intervals is None:
        xs = [Fraction(0)] + farey_sequence(Q)
        g = [Fraction(i, M) - x / 4 for i, x in enumerate(xs)]
        return float(Q * (max(g) - min(g)))
    from .census import phi
    from .density import cumulative

    best = 0.0
    for iv in intervals:
        share = phi(1, Q, iv, force=True) / M
        mass = (cumulative(1, iv.hi) - cumulative(1, iv.lo)) / 4
        best = max(best, abs(share - mass))
    return Q * best
