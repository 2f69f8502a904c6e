"""Exact real-root counting and isolation with Sturm sequences.

Extended rationals are plain :class:`fractions.Fraction` values for finite
points and ``float('inf')`` / ``float('-inf')`` for the two infinities; the
two compare correctly with each other in Python.  Every counting query uses
the half-open convention ``(lo, hi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Union

from .poly import IntPoly, PolynomialError, derivative, height_inf

INF = math.inf
ExtRational = Union[Fraction, float]


def ext(x) -> ExtRational:
    """Coerce ints, Fractions, 'p/q' strings and the tokens 'inf'/'-inf'."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return x
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as an extended rational")


def is_finite(x: ExtRational) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


def format_ext(x: ExtRational) -> str:
    if not is_finite(x):
        return "inf" if x > 0 else "-inf"
    return str(x)


@dataclass(frozen=True)
class HalfOpenInterval:
    """The set ``(lo, hi]``; with ``hi = inf`` the set is ``(lo, inf)``."""

    lo: ExtRational
    hi: ExtRational

    def __post_init__(self):
        object.__setattr__(self, "lo", ext(self.lo))
        object.__setattr__(self, "hi", ext(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi}]")

    @classmethod
    def parse(cls, text: str) -> "HalfOpenInterval":
        lo, hi = text.split(",")
        return cls(ext(lo), ext(hi))

    @classmethod
    def real_line(cls) -> "HalfOpenInterval":
        return cls(-INF, INF)

    def __neg__(self) -> "HalfOpenInterval":
        # -(lo, hi] = [-hi, -lo); callers account for endpoint membership.
        return HalfOpenInterval(-self.hi, -self.lo)

    def contains(self, x: ExtRational) -> bool:
        return self.lo < x <= self.hi

    @property
    def width(self) -> ExtRational:
        return self.hi - self.lo

    def __str__(self) -> str:
        return f"({format_ext(self.lo)}, {format_ext(self.hi)}]"


@dataclass(frozen=True)
class SturmChain:
    seq: tuple[tuple[int, ...], ...]

    @property
    def is_squarefree(self) -> bool:
        return len(self.seq[-1]) == 1

    def __len__(self) -> int:
        return len(self.seq)


def _primitive(c: list[int]) -> list[int]:
    g = reduce(math.gcd, (abs(a) for a in c))
    if g > 1:
        c = [a // g for a in c]
    return c


def _neg_prem(a: list[int], b: list[int]) -> list[int]:
    """``-(|lc(b)|**k * a mod b)``: a negated remainder scaled by a positive factor."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    scale = abs(lb)
    sgn = 1 if lb > 0 else -1
    while len(r) - 1 >= db and r:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [scale * x for x in r]
        for j, bj in enumerate(b):
            r[shift + j] -= sgn * top * bj
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return [-x for x in r]


def sturm_chain(p: IntPoly) -> SturmChain:
    """Sturm chain ``p, p', -rem, ...`` with every element reduced to its primitive part.

    Only positive rescalings are applied, so sign variations are unchanged.
    A terminal element of positive degree flags a non-squarefree input.
    """
    if p.degree < 1:
        raise PolynomialError("Sturm chain needs degree >= 1")
    a = list(p.coeffs)
    b = _primitive(list(derivative(p).coeffs))
    seq = [tuple(a), tuple(b)]
    while len(b) > 1:
        r = _neg_prem(a, b)
        if not r:
            break
        r = _primitive(r)
        seq.append(tuple(r))
        a, b = b, r
    return SturmChain(tuple(seq))


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _sign_at(c: tuple[int, ...], u: int, v: int) -> int:
    """Sign of ``c(u/v)`` for ``v > 0``."""
    n = len(c) - 1
    acc = c[n]
    vp = 1
    for i in range(n - 1, -1, -1):
        vp *= v
        acc = acc * u + c[i] * vp
    return _sign(acc)


def _sign_at_inf(c: tuple[int, ...], positive: bool) -> int:
    s = _sign(c[-1])
    if not positive and (len(c) - 1) % 2:
        s = -s
    return s


def _variations(signs) -> int:
    count = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def sign_variations(chain: SturmChain, x: ExtRational) -> int:
    """Number of sign changes of the chain at ``x``, zeros skipped."""
    if is_finite(x):
        x = Fraction(x)
        u, v = x.numerator, x.denominator
        return _variations(_sign_at(c, u, v) for c in chain.seq)
    return _variations(_sign_at_inf(c, x > 0) for c in chain.seq)


def _checked_chain(p: IntPoly) -> SturmChain:
    chain = sturm_chain(p)
    if not chain.is_squarefree:
        raise PolynomialError("not square-free")
    return chain


def count_roots_in(p: IntPoly, interval: HalfOpenInterval, chain: SturmChain | None = None) -> int:
    """Distinct real roots of ``p`` in ``(lo, hi]``.

    ``V(lo) - V(hi)`` already counts a root at ``hi`` and excludes a root at
    ``lo``: at a root ``c`` the skipped zero of ``p`` leaves ``V(c) = V(c+)``.
    """
    if chain is None:
        chain = _checked_chain(p)
    return sign_variations(chain, interval.lo) - sign_variations(chain, interval.hi)


def count_real_roots(p: IntPoly) -> int:
    return count_roots_in(p, HalfOpenInterval.real_line())


def cauchy_bound(p: IntPoly) -> Fraction:
    return 1 + Fraction(height_inf(p), abs(p.lead))


def isolate_roots(p: IntPoly) -> list[HalfOpenInterval]:
    """Disjoint rational intervals each holding exactly one real root, ascending."""
    chain = _checked_chain(p)
    bound = cauchy_bound(p)
    out: list[HalfOpenInterval] = []
    stack = [(-bound, bound, sign_variations(chain, -bound), sign_variations(chain, bound))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        k = vlo - vhi
        if k == 0:
            continue
        if k == 1:
            out.append(HalfOpenInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        vmid = sign_variations(chain, mid)
        stack.append((mid, hi, vmid, vhi))
        stack.append((lo, mid, vlo, vmid))
    out.sort(key=lambda iv: iv.lo)
    return [_integer_cell(chain, iv) for iv in out]


def _integer_cell(chain: SturmChain, iv: HalfOpenInterval) -> HalfOpenInterval:
    """Shrink an isolating interval wider than 1 to the cell (k, k+1] holding its root."""
    lo, hi = Fraction(iv.lo), Fraction(iv.hi)
    if hi - lo <= 1:
        return iv
    a, b = math.floor(lo), math.ceil(hi)
    va = sign_variations(chain, lo)
    while b - a > 1:
        m = (a + b) // 2
        if va - sign_variations(chain, max(Fraction(m), lo)) == 1:
            b = m
        else:
            a = m
    return HalfOpenInterval(max(Fraction(a), lo), min(Fraction(b), hi))


def refine_root(p: IntPoly, iso: HalfOpenInterval, eps) -> HalfOpenInterval:
    """Bisect ``iso`` (which must hold exactly one root) down to width ``<= eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not (is_finite(iso.lo) and is_finite(iso.hi)):
        raise ValueError("isolating interval must be bounded")
    chain = _checked_chain(p)
    if count_roots_in(p, iso, chain) != 1:
        raise ValueError("interval does not isolate exactly one root")
    lo, hi = Fraction(iso.lo), Fraction(iso.hi)
    c = p.coeffs
    s_lo = _sign_at(c, lo.numerator, lo.denominator)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        s_mid = _sign_at(c, mid.numerator, mid.denominator)
        if s_lo != 0:
            # The single root in (lo, hi] lies in (lo, mid] iff p changes sign there.
            left = s_mid == 0 or s_mid != s_lo
        else:
            left = sign_variations(chain, lo) - sign_variations(chain, mid) == 1
        if left:
            hi = mid
        else:
            lo, s_lo = mid, s_mid
    return HalfOpenInterval(lo, hi)
