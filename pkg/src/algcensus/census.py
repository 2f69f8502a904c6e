"""Exact census of real algebraic numbers of fixed degree and bounded height.

Every prime polynomial (primitive, irreducible, positive leading coefficient)
of degree n and height <= Q is enumerated once; the kernel bins its real
roots over half-open intervals with exact Sturm counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterator, Sequence

from .kernels import CensusTotals, run_census
from .poly import IntPoly, is_irreducible
from .roots import (
    INF,
    ExtRational,
    HalfOpenInterval,
    count_roots_in,
    ext,
    format_ext,
    is_finite,
    isolate_roots,
    refine_root,
)

DESK_ENVELOPE = {1: 2000, 2: 100, 3: 30, 4: 12, 5: 6}
HIGH_DEGREE_LIMIT = 2
REDUCIBLE_CONVENTION = "raw integer vectors with a_n != 0, counted as twice those with a_n >= 1"


class EnvelopeExceeded(RuntimeError):
    pass


def envelope_limit(n: int) -> int:
    return DESK_ENVELOPE.get(n, HIGH_DEGREE_LIMIT)


def check_envelope(n: int, Q: int, force: bool = False) -> None:
    if n < 1 or Q < 1:
        raise ValueError("need degree >= 1 and height >= 1")
    if not force and Q > envelope_limit(n):
        raise EnvelopeExceeded(
            f"degree {n} height {Q} is beyond the desk-scale limit {envelope_limit(n)}; pass force to run anyway")


@dataclass(frozen=True)
class CensusQuery:
    n: int
    Q: int
    interval: HalfOpenInterval = field(default_factory=HalfOpenInterval.real_line)
    bins: tuple[ExtRational, ...] | None = None

    def edges(self) -> list[ExtRational]:
        lo, hi = self.interval.lo, self.interval.hi
        inner = []
        for b in self.bins or ():
            b = ext(b)
            if not lo <= b <= hi:
                raise ValueError(f"breakpoint {b} outside {self.interval}")
            if lo < b < hi:
                inner.append(b)
        if any(not a < b for a, b in zip(inner, inner[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        return [lo, *inner, hi]


@dataclass
class CensusReport:
    n: int
    Q: int
    interval: HalfOpenInterval
    phi: int
    by_k: dict[int, int]
    per_bin: list[int]
    edges: list[ExtRational]
    total_A_n: int
    reducible_count: int | None = None
    shards: int = 0
    backend: str = ""

    def to_dict(self) -> dict:
        out = {
            "degree": self.n,
            "height": self.Q,
            "interval": [format_ext(self.interval.lo), format_ext(self.interval.hi)],
            "phi": self.phi,
            "by_k": {str(k): v for k, v in self.by_k.items()},
            "bins": [
                {"lo": format_ext(a), "hi": format_ext(b), "count": c}
                for a, b, c in zip(self.edges, self.edges[1:], self.per_bin)
            ],
            "total_A_n": self.total_A_n,
            "shards": self.shards,
        }
        if self.reducible_count is not None:
            out["reducible_count"] = self.reducible_count
            out["reducible_convention"] = REDUCIBLE_CONVENTION
        return out


def uniform_breakpoints(interval: HalfOpenInterval, k: int) -> tuple[Fraction, ...]:
    if k < 1:
        raise ValueError("need at least one bin")
    if not (is_finite(interval.lo) and is_finite(interval.hi)):
        raise ValueError("uniform bins need a bounded interval")
    lo, hi = Fraction(interval.lo), Fraction(interval.hi)
    return tuple(lo + (hi - lo) * j / k for j in range(k + 1))


def enumerate_prime_polys(n: int, Q: int, lead_lo: int = 1, lead_hi: int | None = None) -> Iterator[IntPoly]:
    """Yield every prime polynomial of degree n, height <= Q, with lead in [lead_lo, lead_hi]."""
    lead_hi = Q if lead_hi is None else lead_hi
    rng = range(-Q, Q + 1)
    for lead in range(max(1, lead_lo), min(Q, lead_hi) + 1):
        for rest in itertools.product(rng, repeat=n):
            coeffs = tuple(reversed(rest)) + (lead,)
            if reduce(math.gcd, coeffs) != 1:
                continue
            p = IntPoly(coeffs)
            if is_irreducible(p):
                yield p


def _totals(query: CensusQuery, *, collect=False, threads=None, backend=None, shards=None,
            force=False) -> tuple[CensusTotals, list[ExtRational]]:
    check_envelope(query.n, query.Q, force)
    edges = query.edges()
    totals = run_census(query.n, query.Q, edges, collect=collect, threads=threads,
                        backend=backend, shards=shards)
    return totals, edges


def phi_count(query: CensusQuery, *, threads=None, backend=None, shards=None, force: bool = False,
              reducible: bool = False) -> CensusReport:
    """Exact count of algebraic numbers of degree n, height <= Q in the query interval."""
    totals, edges = _totals(query, threads=threads, backend=backend, shards=shards, force=force)
    by_k = {k: totals.by_k[k] for k in range(1, query.n + 1)}
    phi = sum(totals.bins)
    assert phi == sum(k * c for k, c in by_k.items())
    red = None
    if reducible and query.n >= 2:
        red = _reducible_from_primes(query.n, query.Q, totals.prime_by_height)
    return CensusReport(query.n, query.Q, query.interval, phi, by_k, list(totals.bins), edges,
                        sum(totals.roots_by_height), red, totals.shards, totals.backend)


def phi(n: int, Q: int, interval: HalfOpenInterval, **kw) -> int:
    return phi_count(CensusQuery(n, Q, interval), **kw).phi


def total_count(n: int, Q: int, **kw) -> int:
    """#A_n(Q): real algebraic numbers of degree n and height <= Q."""
    return phi(n, Q, HalfOpenInterval.real_line(), **kw)


# ---------------------------------------------------------------- general endpoint sets

def in_algebraic_set(n: int, Q: int, x: ExtRational) -> bool:
    """Whether a rational point belongs to A_n(Q); only degree 1 contains rationals."""
    if n != 1 or not is_finite(x):
        return False
    r = Fraction(x)
    return max(abs(r.numerator), r.denominator) <= Q


def count_in_set(n: int, Q: int, lo: ExtRational, hi: ExtRational, lo_closed: bool, hi_closed: bool,
                 **kw) -> int:
    """Count over an interval with either endpoint open or closed."""
    lo, hi = ext(lo), ext(hi)
    if not lo < hi:
        return int(lo == hi and lo_closed and hi_closed and in_algebraic_set(n, Q, lo))
    total = phi(n, Q, HalfOpenInterval(lo, hi), **kw)
    if lo_closed and in_algebraic_set(n, Q, lo):
        total += 1
    if not hi_closed and in_algebraic_set(n, Q, hi):
        total -= 1
    return total


def reflected_count(n: int, Q: int, interval: HalfOpenInterval, **kw) -> int:
    """Count over -(lo, hi] = [-hi, -lo)."""
    return count_in_set(n, Q, -interval.hi, -interval.lo, True, False, **kw)


def interval_inverse(interval: HalfOpenInterval) -> tuple[ExtRational, ExtRational, bool, bool]:
    """The set {1/x : x in (lo, hi]} as (lo', hi', lo_closed, hi_closed); 0 must not lie in [lo, hi]."""
    lo, hi = interval.lo, interval.hi
    if lo < 0 < hi or lo == 0 or hi == 0:
        raise ValueError("interval must stay away from 0")

    def inv(x):
        return Fraction(0) if not is_finite(x) else 1 / Fraction(x)

    # x -> 1/x reverses order on each half-line; (lo, hi] becomes [1/hi, 1/lo)
    return inv(hi), inv(lo), is_finite(hi), False


def inverted_count(n: int, Q: int, interval: HalfOpenInterval, **kw) -> int:
    lo, hi, lc, hc = interval_inverse(interval)
    return count_in_set(n, Q, lo, hi, lc, hc, **kw)


# ---------------------------------------------------------------- reducible polynomials

def _reducible_from_primes(n: int, Q: int, prime_by_height: Sequence[int]) -> int:
    cumulative = list(itertools.accumulate(prime_by_height))
    # an irreducible vector with a_n >= 1 is c * p for a unique c >= 1 and prime p
    irreducible = sum(cumulative[Q // c] for c in range(1, Q + 1))
    return 2 * (Q * (2 * Q + 1) ** n - irreducible)


def count_reducible(n: int, Q: int, *, threads=None, backend=None, force: bool = False) -> int:
    """Degree-n integer polynomials of height <= Q that factor over the rationals."""
    if n < 2:
        raise ValueError("reducible count needs n >= 2")
    check_envelope(n, Q, force)
    totals = run_census(n, Q, [-INF, INF], threads=threads, backend=backend)
    return _reducible_from_primes(n, Q, totals.prime_by_height)


# ---------------------------------------------------------------- ordered sequence

@dataclass(frozen=True)
class SequenceEntry:
    interval: HalfOpenInterval
    height: int
    poly: IntPoly

    @property
    def approx(self) -> float:
        if self.poly.degree == 1:
            return float(Fraction(-self.poly.coeffs[0], self.poly.coeffs[1]))
        return float((Fraction(self.interval.lo) + Fraction(self.interval.hi)) / 2)


def height_for_count(n: int, N: int, *, threads=None, backend=None, force=False) -> tuple[int, list[int]]:
    """Smallest Q with #A_n(Q) >= N, plus the per-height root counts up to it."""
    Q = 1
    while True:
        check_envelope(n, Q, force)
        totals = run_census(n, Q, [-INF, INF], threads=threads, backend=backend)
        running = 0
        for h, c in enumerate(totals.roots_by_height):
            running += c
            if running >= N:
                return h, totals.roots_by_height[: h + 1]
        Q *= 2


def _separate(entries: list[SequenceEntry], eps: Fraction) -> list[SequenceEntry]:
    """Sort by (height, value); refine neighbours of equal height until their intervals are disjoint."""
    while True:
        entries.sort(key=lambda e: (e.height, e.interval.lo))
        clash = set()
        for i in range(len(entries) - 1):
            a, b = entries[i], entries[i + 1]
            if a.height == b.height and a.interval.hi > b.interval.lo:
                clash.update((i, i + 1))
        if not clash:
            return entries
        eps /= 16
        for i in clash:
            e = entries[i]
            entries[i] = SequenceEntry(refine_root(e.poly, e.interval, eps), e.height, e.poly)


def algebraic_sequence(n: int, N: int, eps=Fraction(1, 10 ** 12), *, threads=None, backend=None,
                       force: bool = False) -> list[SequenceEntry]:
    """First N real algebraic numbers of degree n ordered by height, then by value."""
    if N < 1:
        raise ValueError("N must be >= 1")
    eps = Fraction(eps)
    Q, _ = height_for_count(n, N, threads=threads, backend=backend, force=force)
    totals = run_census(n, Q, [-INF, INF], collect=True, threads=threads, backend=backend)
    entries = []
    for coeffs in totals.collected:
        p = IntPoly(coeffs)
        h = max(abs(a) for a in coeffs)
        for iso in isolate_roots(p):
            entries.append(SequenceEntry(refine_root(p, iso, eps), h, p))
    entries = _separate(entries, eps)
    return entries[:N]


def root_in(entry: SequenceEntry, interval: HalfOpenInterval) -> bool:
    """Exact test of whether the entry's number lies in the half-open interval."""
    iso = entry.interval
    if iso.hi <= interval.lo or iso.lo >= interval.hi:
        return False
    if interval.lo <= iso.lo and iso.hi <= interval.hi:
        return True
    sub = HalfOpenInterval(max(iso.lo, interval.lo), min(iso.hi, interval.hi))
    return count_roots_in(entry.poly, sub) == 1


def sequence_count_in(entries: Sequence[SequenceEntry], interval: HalfOpenInterval) -> int:
    return sum(root_in(e, interval) for e in entries)
