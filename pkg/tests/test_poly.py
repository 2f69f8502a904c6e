import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from algcensus.poly import (
    IntPoly,
    PolynomialError,
    content,
    derivative,
    divides,
    divisors,
    evaluate,
    format_poly,
    height_inf,
    is_irreducible,
    make_prime,
    negate_arg,
    reverse,
)

P = IntPoly.from_high


def test_normalizes_trailing_zeros():
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly([0, 0]).is_zero
    with pytest.raises(PolynomialError):
        IntPoly([]).degree


@pytest.mark.parametrize("p, c", [(P(2, 4, 6), 2), (P(1, 1, -1), 1), (P(6, 0, 0, 0), 6)])
def test_content(p, c):
    assert content(p) == c


@pytest.mark.parametrize("p, h", [(P(1, 1, -1), 1), (P(3, 0, -7, 2), 7), (P(-5, 0, 0, 0, 0), 5)])
def test_height(p, h):
    assert height_inf(p) == h


@pytest.mark.parametrize("p, r", [
    (P(2, 3, 5), P(5, 3, 2)),
    (P(1, 0, 0, -1), P(-1, 0, 0, 1)),
    (P(1, 1, -1), P(-1, 1, 1)),
])
def test_reverse(p, r):
    assert reverse(p) == r


@pytest.mark.parametrize("p, r", [(P(1, 1, -1), P(1, -1, -1)), (P(1, 0, 0, 0), P(-1, 0, 0, 0)), (P(1, 0, 1), P(1, 0, 1))])
def test_negate_arg(p, r):
    assert negate_arg(p) == r


@pytest.mark.parametrize("p, x, v", [
    (P(1, 0, -2), Fraction(3, 2), Fraction(1, 4)),
    (P(1, 0, -2), 0, -2),
    (P(2, 1), Fraction(-1, 2), 0),
])
def test_evaluate(p, x, v):
    assert evaluate(p, x) == v


@pytest.mark.parametrize("p, d", [(P(1, 0, -2, 0), P(3, 0, -2)), (P(5), IntPoly([])), (P(1, 1, -1), P(2, 1))])
def test_derivative(p, d):
    assert derivative(p) == d


@pytest.mark.parametrize("p, q", [(P(-2, 0, 4), P(1, 0, -2)), (P(3, 0), P(1, 0)), (P(1, 1, -1), P(1, 1, -1))])
def test_make_prime(p, q):
    assert make_prime(p) == q


@pytest.mark.parametrize("p, expected", [
    (P(1, 1, -1), True),
    (P(1, 0, -1), False),
    (P(1, 1, 1, 1, 1), True),
    (P(1, 0, 0, 0, 4), False),  # x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2), no rational root
    (P(1, 0, 2, 0, 1), False),
    (P(2, 0, 1), True),
    (P(1, 0), True),
])
def test_is_irreducible_examples(p, expected):
    assert is_irreducible(p) is expected


def test_divisors_and_divides():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divides((1, 1), (-1, 0, 1))  # x + 1 | x^2 - 1
    assert not divides((1, 1), (1, 0, 1))


def test_format():
    assert format_poly(P(1, 0, -2)) == "x^2 - 2"


# ---------------------------------------------------------------- brute-force oracle

def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def _reducible_bruteforce(c):
    """Search for a factor f with 1 <= deg f <= n/2 under the Gelfond height bound.

    lead(f) divides lead(p) and f(0) divides p(0), so only the middle
    coefficients range over the whole box.
    """
    n = len(c) - 1
    if c[0] == 0:
        return n >= 2
    bound = int(2 ** (n - 2) * math.sqrt(n + 1) * max(abs(a) for a in c)) + 1

    def divs(m):
        return [d for d in range(1, abs(m) + 1) if m % d == 0]

    for d in range(1, n // 2 + 1):
        for lead in divs(c[-1]):
            for const in divs(c[0]):
                for sign in (1, -1):
                    for mid in itertools.product(range(-bound, bound + 1), repeat=d - 1):
                        f = [sign * const, *mid, lead]
                        # try the cofactor by exact long division
                        q, r = _divmod(c, f)
                        if r is not None and not any(r) and _poly_mul(f, q) == list(c):
                            return True
    return False


def _divmod(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        top = a[i + len(b) - 1]
        if top % b[-1]:
            return None, None
        q[i] = top // b[-1]
        for j, bj in enumerate(b):
            a[i + j] -= q[i] * bj
    return q, a


def _box(n, H):
    """Primitive coefficient vectors with positive lead."""
    for rest in itertools.product(range(-H, H + 1), repeat=n):
        for lead in range(1, H + 1):
            if math.gcd(*rest, lead) == 1:
                yield (*rest, lead)


@pytest.mark.parametrize("n, H", [(2, 4), (3, 3), (4, 2)])
def test_irreducible_matches_factor_search(n, H):
    for c in _box(n, H):
        assert is_irreducible(IntPoly(c)) is (not _reducible_bruteforce(c)), c


def test_irreducible_matches_sympy_degree5():
    sympy = pytest.importorskip("sympy")
    import random

    x = sympy.symbols("x")
    rng = random.Random(5)
    for _ in range(300):
        c = [rng.randint(-4, 4) for _ in range(5)] + [rng.randint(1, 4)]
        if math.gcd(*c) != 1:
            continue
        expr = sum(a * x ** i for i, a in enumerate(c))
        _, factors = sympy.factor_list(expr)
        expected = len(factors) == 1 and factors[0][1] == 1 and sympy.degree(factors[0][0], x) == 5
        assert is_irreducible(IntPoly(c)) is expected, c


# ---------------------------------------------------------------- properties

coeff_lists = st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda c: c[0] != 0 and c[-1] != 0)


@given(coeff_lists)
def test_height_invariant_under_symmetries(c):
    p = IntPoly(c)
    assert height_inf(reverse(p)) == height_inf(p)
    assert height_inf(negate_arg(p)) == height_inf(p)
    assert reverse(reverse(p)) == p


@given(coeff_lists)
def test_make_prime_idempotent(c):
    q = make_prime(IntPoly(c))
    assert make_prime(q) == q
    assert content(q) == 1 and q.lead > 0


@given(coeff_lists)
def test_irreducible_has_no_rational_root(c):
    p = make_prime(IntPoly(c))
    if p.degree >= 2 and is_irreducible(p):
        for num in divisors(abs(p.coeffs[0])):
            for den in divisors(p.lead):
                for s in (1, -1):
                    assert evaluate(p, Fraction(s * num, den)) != 0


def test_rejects_non_primitive():
    with pytest.raises(PolynomialError):
        is_irreducible(P(2, 0, 2))
