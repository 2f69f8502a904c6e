"""Distances from rationals to the nearest algebraic number of bounded height."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .census import check_envelope, in_algebraic_set
from .kernels import run_census
from .poly import IntPoly
from .roots import HalfOpenInterval, count_roots_in, isolate_roots, refine_root


@dataclass(frozen=True)
class GapProbe:
    n: int
    Q: int
    x0: Fraction
    nearest_distance: Fraction  # certified lower bound
    distance_upper: Fraction
    witness: IntPoly

    @property
    def implied_constant(self) -> float:
        return float(self.nearest_distance) * self.x0.denominator ** self.n * self.Q

    @property
    def distance(self) -> float:
        return float((self.nearest_distance + self.distance_upper) / 2)


def _distance_bounds(x0: Fraction, iso: HalfOpenInterval) -> tuple[Fraction, Fraction]:
    lo, hi = Fraction(iso.lo), Fraction(iso.hi)
    if x0 <= lo:
        return lo - x0, hi - x0
    if x0 >= hi:
        return x0 - hi, x0 - lo
    return Fraction(0), max(x0 - lo, hi - x0)


def nearest_algebraic(n: int, Q: int, x0, rel_tol=Fraction(1, 10 ** 9), *, threads=None,
                      force: bool = False) -> GapProbe:
    """Certified distance from x0 to the nearest algebraic number of degree n and height <= Q.

    For n = 1 the point x0 itself is skipped when it is in the set.
    """
    check_envelope(n, Q, force)
    x0 = Fraction(x0)
    radius = Fraction(1, x0.denominator ** n * Q)
    while True:
        window = HalfOpenInterval(x0 - radius, x0 + radius)
        totals = run_census(n, Q, [window.lo, window.hi], collect=True, threads=threads)
        roots = []
        inside = 0
        for coeffs in totals.collected:
            p = IntPoly(coeffs)
            own = n == 1 and p.coeffs[1] * x0 + p.coeffs[0] == 0
            if own:
                continue
            inside += count_roots_in(p, window)
            roots.extend((p, iso) for iso in isolate_roots(p)
                         if not (iso.hi <= window.lo or iso.lo >= window.hi))
        # Every number in the window belongs to a collected polynomial, so once
        # one is found no root outside the window can be the nearest.
        if inside:
            break
        radius *= 2
    # refine until the closest root is pinned down relative to its distance
    eps = radius / 4
    while True:
        bounds = []
        for i, (p, iso) in enumerate(roots):
            iso = refine_root(p, iso, eps)
            roots[i] = (p, iso)
            bounds.append(_distance_bounds(x0, iso))
        lower = min(b[0] for b in bounds)
        upper = min(b[1] for b in bounds)
        if lower > 0 and upper - lower <= rel_tol * lower:
            best = min(range(len(roots)), key=lambda i: bounds[i][0])
            return GapProbe(n, Q, x0, lower, upper, roots[best][0])
        # drop roots that are certainly farther than the current best upper bound
        keep = [i for i, b in enumerate(bounds) if b[0] <= upper]
        roots = [roots[i] for i in keep]
        eps /= 16


def constant_sweep(n: int, x0, Qs: Sequence[int], **kw) -> list[GapProbe]:
    return [nearest_algebraic(n, Q, x0, **kw) for Q in Qs]


def outer_exclusion_check(n: int, Q: int, *, threads=None, force: bool = False) -> bool:
    """True iff no algebraic number of degree n, height <= Q has |x| >= Q + 1."""
    check_envelope(n, Q, force)
    edge = Fraction(Q + 1)
    totals = run_census(n, Q, [float("-inf"), -edge, edge, float("inf")], threads=threads)
    below, _, above = totals.bins
    # the middle bin is (-Q-1, Q+1]; Q+1 itself can only be a degree-1 member
    return below == 0 and above == 0 and not in_algebraic_set(n, Q, edge)


def gap_interval(probe: GapProbe, c_min: float) -> HalfOpenInterval:
    """(x0 - r, x0 + r] with r = c_min / (2 b^n Q), which the measured constant leaves empty."""
    r = Fraction(c_min).limit_denominator(10 ** 9) / (2 * probe.x0.denominator ** probe.n * probe.Q)
    return HalfOpenInterval(probe.x0 - r, probe.x0 + r)
