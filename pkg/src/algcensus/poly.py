"""Integer polynomials: normalization, height, structural transforms, irreducibility.

Coefficients are stored constant term first, so ``coeffs[i]`` multiplies
``x**i`` and reversal ``x**n * p(1/x)`` is a literal reversal of the tuple.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_high(cls, *coeffs: int) -> "IntPoly":
        """Build from leading coefficient first, e.g. ``from_high(1, 0, -2)`` is x^2 - 2."""
        return cls(reversed(coeffs))

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise PolynomialError("zero polynomial")
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        if not self.coeffs:
            raise PolynomialError("zero polynomial")
        return self.coeffs[-1]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({format_poly(self)})"


def _nonzero(p: IntPoly) -> None:
    if p.is_zero:
        raise PolynomialError("zero polynomial")


def format_poly(p: IntPoly, var: str = "x") -> str:
    if p.is_zero:
        return "0"
    terms = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        a = p.coeffs[i]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def content(p: IntPoly) -> int:
    _nonzero(p)
    return reduce(math.gcd, (abs(a) for a in p.coeffs))


def height_inf(p: IntPoly) -> int:
    _nonzero(p)
    return max(abs(a) for a in p.coeffs)


def reverse(p: IntPoly) -> IntPoly:
    """Return ``x**n * p(1/x)``."""
    _nonzero(p)
    if p.coeffs[0] == 0:
        raise PolynomialError("degree drop under reversal")
    return IntPoly(reversed(p.coeffs))


def negate_arg(p: IntPoly) -> IntPoly:
    """Return ``p(-x)``."""
    _nonzero(p)
    return IntPoly(-a if i % 2 else a for i, a in enumerate(p.coeffs))


def evaluate(p: IntPoly, x) -> Fraction:
    """Exact value of ``p`` at a finite rational ``x`` (Horner)."""
    if isinstance(x, float) and math.isinf(x):
        raise PolynomialError("cannot evaluate at infinity")
    x = Fraction(x)
    acc = Fraction(0)
    for a in reversed(p.coeffs):
        acc = acc * x + a
    return acc


def derivative(p: IntPoly) -> IntPoly:
    _nonzero(p)
    return IntPoly(i * a for i, a in enumerate(p.coeffs) if i > 0)


def make_prime(p: IntPoly) -> IntPoly:
    """Divide out the content and make the leading coefficient positive.

    Irreducibility is not checked.
    """
    c = content(p)
    if p.lead < 0:
        c = -c
    return IntPoly(a // c for a in p.coeffs)


def divisors(m: int) -> list[int]:
    """Positive divisors of ``|m|`` in increasing order; ``m`` must be nonzero."""
    m = abs(m)
    if m == 0:
        raise ValueError("divisors of zero")
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def divides(f: Sequence[int], p: Sequence[int]) -> bool:
    """True iff integer polynomial ``f`` divides ``p`` in Z[x] (constant-first lists)."""
    r = list(p)
    df = len(f) - 1
    lf = f[-1]
    for top in range(len(r) - 1, df - 1, -1):
        a = r[top]
        if a == 0:
            continue
        if a % lf:
            return False
        q = a // lf
        shift = top - df
        for j, fj in enumerate(f):
            r[shift + j] -= q * fj
    return not any(r)


def _has_rational_root(c: Sequence[int]) -> bool:
    a0, an = c[0], c[-1]
    if a0 == 0:
        return True
    for q in divisors(an):
        for r in divisors(a0):
            if math.gcd(r, q) != 1:
                continue
            if _homogeneous_value(c, r, q) == 0 or _homogeneous_value(c, -r, q) == 0:
                return True
    return False


def _homogeneous_value(c: Sequence[int], u: int, v: int) -> int:
    """Return ``v**n * p(u/v)`` for ``p`` with coefficients ``c``."""
    vp = 1
    n = len(c) - 1
    acc = c[n]
    for i in range(n - 1, -1, -1):
        vp *= v
        acc = acc * u + c[i] * vp
    return acc


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[int] | None:
    """Integer polynomial through the points, or None if not integral."""
    d = len(xs) - 1
    coeffs = [Fraction(0)] * (d + 1)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(d + 1):
            coeffs[k] += yi * basis[k] / denom
    if any(c.denominator != 1 for c in coeffs):
        return None
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _eval_points(count: int) -> list[int]:
    pts = [0]
    k = 1
    while len(pts) < count:
        pts.append(k)
        if len(pts) < count:
            pts.append(-k)
        k += 1
    return pts


def _has_factor_of_degree(c: Sequence[int], d: int) -> bool:
    """Kronecker search for a factor of exact degree ``d``; ``c`` has no rational roots."""
    xs = _eval_points(d + 1)
    vals = [_homogeneous_value(c, x, 1) for x in xs]
    lead, const = c[-1], c[0]
    # f(0) > 0 fixes the overall sign of a candidate factor.
    choices = [divisors(vals[0])]
    for v in vals[1:]:
        ds = divisors(v)
        choices.append([s * e for e in ds for s in (1, -1)])
    for ys in itertools.product(*choices):
        f = _interpolate(xs, ys)
        if f is None or len(f) - 1 != d:
            continue
        if lead % f[-1] or const % f[0]:
            continue
        if divides(f, c):
            return True
    return False


def is_irreducible(p: IntPoly) -> bool:
    """Irreducibility over the rationals of a primitive polynomial of degree >= 1."""
    n = p.degree
    if n < 1:
        raise PolynomialError("degree 0")
    if content(p) != 1:
        raise PolynomialError("content > 1")
    if n == 1:
        return True
    c = p.coeffs
    if n == 2:
        disc = c[1] * c[1] - 4 * c[2] * c[0]
        if disc < 0:
            return True
        return math.isqrt(disc) ** 2 != disc
    if _has_rational_root(c):
        return False
    if n == 3:
        return True
    for d in range(2, n // 2 + 1):
        if _has_factor_of_degree(c, d):
            return False
    return True
