"""Counting density of real algebraic numbers and the quantities built from it.

``phi_numeric`` integrates the coefficient-space formula: the innermost
coordinate p_1 is integrated exactly (the integrand and the slab constraint
are both linear in it) and the remaining n-1 coordinates use a scrambled
Sobol rule with a fixed seed, so every value is bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .roots import ExtRational, HalfOpenInterval, is_finite

SOBOL_SEED = 20240601
DEFAULT_BUDGET = 2 ** 16
GAUSS_NODES = 8
GAUSS_PANELS = 32


class DensityError(ValueError):
    pass


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    abs_error: float
    method: str


@dataclass(frozen=True)
class DensityGrid:
    n: int
    points: tuple[tuple[float, DensityEstimate], ...]


# ---------------------------------------------------------------- thresholds

def _bisect(f, lo: float, hi: float, tol: float = 1e-15) -> float:
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def t0(n: int) -> float:
    """Positive root of t^n + ... + t = 1."""
    if n < 1:
        raise DensityError("n must be >= 1")
    if n == 1:
        return 1.0
    return _bisect(lambda t: sum(t ** k for k in range(1, n + 1)) - 1.0, 0.0, 1.0)


@lru_cache(maxsize=None)
def t1(n: int) -> float:
    """Positive root of n t^(n-1) + ... + 2t = 1."""
    if n < 2:
        raise DensityError("t1 needs n >= 2")
    if n == 2:
        return 0.5
    return _bisect(lambda t: sum(k * t ** (k - 1) for k in range(2, n + 1)) - 1.0, 0.0, 1.0)


def closed_form_radius(n: int) -> float:
    return 1.0 if n == 1 else t1(n)


# ---------------------------------------------------------------- closed forms

def phi1(t: float) -> float:
    return 1.0 / max(1.0, t * t)


def phi_closed(n: int, t: float) -> float:
    """Polynomial form of the density, valid for |t| up to t1(n) (|t| <= 1 when n = 1)."""
    if n < 1:
        raise DensityError("n must be >= 1")
    if abs(t) > closed_form_radius(n) + 1e-12:
        raise DensityError("outside closed-form region")
    x2 = t * t
    s = 3.0 + sum((k + 1) ** 2 * x2 ** k for k in range(1, n))
    return 2.0 ** (n - 1) / 3.0 * s


# ---------------------------------------------------------------- quadrature

REPLICATES = 8


@lru_cache(maxsize=32)
def _sobol(dim: int, m: int, replicate: int) -> np.ndarray:
    pts = qmc.Sobol(d=dim, scramble=True, seed=SOBOL_SEED + replicate).random_base2(m)
    return 2.0 * pts - 1.0


def _inner(points: np.ndarray, n: int, t: float) -> np.ndarray:
    """Exact integral over p_1 of |p_1 + B| on the clipped segment, for each outer point."""
    if n == 1:
        A = np.zeros(1)
        B = np.zeros(1)
    else:
        ks = np.arange(2, n + 1)
        A = points @ (t ** ks)
        B = points @ (ks * t ** (ks - 1))
    if t == 0.0:
        lo = np.full_like(A, -1.0)
        hi = np.full_like(A, 1.0)
    else:
        b1 = (-1.0 - A) / t
        b2 = (1.0 - A) / t
        lo = np.maximum(-1.0, np.minimum(b1, b2))
        hi = np.minimum(1.0, np.maximum(b1, b2))
    hi = np.maximum(hi, lo)
    yh = B + hi
    yl = B + lo
    return 0.5 * (yh * np.abs(yh) - yl * np.abs(yl))


def _reduce(t: float) -> tuple[float, float]:
    """Map t into [0, 1]; returns (t', factor) with phi(t) = factor * phi(t')."""
    t = abs(t)
    if t > 1.0:
        return 1.0 / t, 1.0 / (t * t)
    return t, 1.0


def _budget_exponent(budget: int) -> int:
    if budget < 64:
        raise DensityError("budget too small")
    return int(math.floor(math.log2(budget)))


def phi_numeric(n: int, t: float, budget: int = DEFAULT_BUDGET, reduce: bool = True) -> DensityEstimate:
    """Evaluate the coefficient-space integral for the density at t.

    The budget is the total number of outer nodes.  The error estimate is the
    larger of the full-versus-half-budget difference and four standard errors
    across independently scrambled replicate nets.  With ``reduce=False`` the
    symmetries are not used, which is what the functional-equation checks need.
    """
    if n < 1:
        raise DensityError("n must be >= 1")
    m = _budget_exponent(budget)
    t = float(t)
    if n == 1:
        return DensityEstimate(phi1(t), 0.0, "n1_formula")
    factor = 1.0
    if reduce:
        t, factor = _reduce(t)
    return _phi_qmc(n, t, m, factor)


@lru_cache(maxsize=65536)
def _phi_qmc(n: int, t: float, m: int, factor: float) -> DensityEstimate:
    # The budget is split over independently scrambled nets: nested halves of a
    # single net have strongly correlated errors and under-report the error.
    sub = m - 3
    vol = 2.0 ** (n - 1)
    means, halves = [], []
    for r in range(REPLICATES):
        vals = _inner(_sobol(n - 1, sub, r), n, t)
        means.append(float(np.mean(vals)))
        halves.append(float(np.mean(vals[: len(vals) // 2])))
    means = np.array(means) * vol
    full = float(np.mean(means))
    coarse = vol * float(np.mean(halves))
    spread = 4.0 * float(np.std(means, ddof=1)) / math.sqrt(REPLICATES)
    err = max(abs(full - coarse), spread) + 64 * np.finfo(float).eps * abs(full)
    return DensityEstimate(factor * full, factor * err, "qmc")


def phi_value(n: int, t: float, budget: int = DEFAULT_BUDGET) -> float:
    return phi_numeric(n, t, budget).value


# ---------------------------------------------------------------- integrals of phi

@lru_cache(maxsize=None)
def _gauss(order: int = GAUSS_NODES):
    x, w = np.polynomial.legendre.leggauss(order)
    return tuple(x), tuple(w)


def _gauss_segment(n: int, a: float, b: float, budget: int) -> float:
    if b <= a:
        return 0.0
    xs, ws = _gauss()
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * sum(w * phi_numeric(n, mid + half * x, budget).value for x, w in zip(xs, ws))


@lru_cache(maxsize=None)
def _panel_integrals(n: int, budget: int) -> tuple[float, ...]:
    h = 1.0 / GAUSS_PANELS
    return tuple(_gauss_segment(n, i * h, (i + 1) * h, budget) for i in range(GAUSS_PANELS))


def _cumulative_unit(n: int, x: float, budget: int) -> float:
    """Integral of phi over [0, x] for 0 <= x <= 1."""
    if n == 1:
        return x
    panels = _panel_integrals(n, budget)
    h = 1.0 / GAUSS_PANELS
    full = min(int(x / h), GAUSS_PANELS)
    total = math.fsum(panels[:full])
    if full < GAUSS_PANELS:
        total += _gauss_segment(n, full * h, x, budget)
    return total


def cumulative(n: int, x: ExtRational | float, budget: int = DEFAULT_BUDGET) -> float:
    """Integral of phi over [0, x] (negative for x < 0), using evenness and inversion."""
    if not is_finite(x):
        v = 2.0 * _cumulative_unit(n, 1.0, budget)
        return v if x > 0 else -v
    x = float(x)
    if x < 0:
        return -cumulative(n, -x, budget)
    if x <= 1.0:
        return _cumulative_unit(n, x, budget)
    # substituting s = 1/u turns the integral over [1, x] into one over [1/x, 1]
    one = _cumulative_unit(n, 1.0, budget)
    return 2.0 * one - _cumulative_unit(n, 1.0 / x, budget)


def integral_phi(n: int, interval: HalfOpenInterval, budget: int = DEFAULT_BUDGET) -> float:
    return cumulative(n, interval.hi, budget) - cumulative(n, interval.lo, budget)


def gamma(n: int, budget: int = DEFAULT_BUDGET) -> float:
    """Total mass of phi over the real line."""
    if n == 1:
        return 4.0
    return 4.0 * _cumulative_unit(n, 1.0, budget)


def rho(n: int, t: float, budget: int = DEFAULT_BUDGET) -> float:
    return phi_value(n, t, budget) / gamma(n, budget)


def F(n: int, x: ExtRational | float, budget: int = DEFAULT_BUDGET) -> float:
    """Limiting share of algebraic numbers of degree n lying in (-inf, x]."""
    g = gamma(n, budget)
    return (0.5 * g + cumulative(n, x, budget)) / g


def rho_mass(n: int, interval: HalfOpenInterval, budget: int = DEFAULT_BUDGET) -> float:
    return integral_phi(n, interval, budget) / gamma(n, budget)


# ---------------------------------------------------------------- zeta and main term

_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


def zeta(s: float, terms: int = 20) -> float:
    """Riemann zeta for real s >= 2: direct sum plus an Euler-Maclaurin tail."""
    if s < 2:
        raise DensityError("zeta is implemented for s >= 2 only")
    N = terms
    head = math.fsum(k ** -s for k in range(1, N))
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    rising = s
    for j, b in enumerate(_BERNOULLI, start=1):
        tail += b / math.factorial(2 * j) * rising * N ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


def main_term(n: int, Q: float, interval: HalfOpenInterval, budget: int = DEFAULT_BUDGET) -> float:
    if Q == 0:
        return 0.0
    return Q ** (n + 1) / (2.0 * zeta(n + 1)) * integral_phi(n, interval, budget)


def log_factor_exponent(n: int) -> int:
    return 1 if n == 2 else 0


def remainder_scale(n: int, Q: float) -> float:
    return Q ** n * math.log(Q) ** log_factor_exponent(n)


# ---------------------------------------------------------------- Euclidean height

SPHERE_SWITCH = 1e-3


@lru_cache(maxsize=None)
def _sphere_numerator(n: int) -> tuple[int, ...]:
    """Coefficients (in u = t^2) of (S^2 - (n+1)^2 u^n) / (u - 1)^2 with S = 1 + u + ... + u^n."""
    s = [1] * (n + 1)
    sq = [0] * (2 * n + 1)
    for i, a in enumerate(s):
        for j, b in enumerate(s):
            sq[i + j] += a * b
    sq[n] -= (n + 1) ** 2
    # divide twice by (u - 1), synthetic division from the top
    for _ in range(2):
        out = [0] * (len(sq) - 1)
        carry = 0
        for i in range(len(sq) - 1, 0, -1):
            carry = sq[i] + carry
            out[i - 1] = carry
        if carry + sq[0] != 0:
            raise AssertionError("exact division failed")
        sq = out
    return tuple(sq)


def _sphere_constant(n: int) -> float:
    return math.pi ** ((n - 1) / 2) / math.gamma((n + 3) / 2)


def phi_sphere_estimate(n: int, t: float) -> DensityEstimate:
    if n < 1:
        raise DensityError("n must be >= 1")
    t = float(t)
    u = t * t
    c = _sphere_constant(n)
    if abs(abs(t) - 1.0) > SPHERE_SWITCH:
        inner = 1.0 / (u - 1.0) ** 2 - (n + 1) ** 2 * u ** n / (u ** (n + 1) - 1.0) ** 2
        return DensityEstimate(c * math.sqrt(max(inner, 0.0)), 0.0, "sphere_formula")
    # near |t| = 1 both fractions blow up; use the cancelled polynomial form
    num = np.polynomial.polynomial.polyval(u, _sphere_numerator(n))
    s = sum(u ** k for k in range(n + 1))
    return DensityEstimate(c * math.sqrt(num) / s, 0.0, "sphere_series")


def phi_sphere(n: int, t: float) -> float:
    return phi_sphere_estimate(n, t).value


# ---------------------------------------------------------------- Jacobian identity

def _polymul(a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    return np.convolve(np.asarray(a, float), np.asarray(b, float))


def jacobian_identity_check(b: Sequence[float], alpha: float, beta: float) -> tuple[float, float]:
    """|det| of d(a)/d(b, alpha, beta) for a = (x-alpha)(x-beta) g(x), and |alpha-beta||g(alpha)g(beta)|.

    ``b`` holds the coefficients of g constant term first, so n = len(b) + 1.
    """
    b = np.asarray(b, float)
    if alpha == beta:
        raise DensityError("alpha and beta must differ")
    m = len(b)  # n - 1
    size = m + 2
    quad = np.array([alpha * beta, -(alpha + beta), 1.0])
    J = np.zeros((size, size))
    for j in range(m):
        col = np.zeros(size)
        col[j:j + 3] = quad
        J[:, j] = col
    J[:size - 1, m] = -_polymul([-beta, 1.0], b)
    J[:size - 1, m + 1] = -_polymul([-alpha, 1.0], b)
    lhs = abs(float(np.linalg.det(J)))
    g = np.polynomial.polynomial.polyval
    rhs = abs(alpha - beta) * abs(g(alpha, b) * g(beta, b))
    return lhs, float(rhs)


# ---------------------------------------------------------------- two-root measure

def _float_sturm_counts(c: np.ndarray, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Sturm counts of roots in (lo, hi] for rows of c (constant first).

    Returns (counts, degenerate mask); degenerate rows hit a near-zero leading
    coefficient somewhere in the chain and must be recounted.
    """
    N, n1 = c.shape
    n = n1 - 1
    chain = [c, c[:, 1:] * np.arange(1, n1)]
    bad = np.zeros(N, bool)
    tol = 1e-11
    a, b = chain
    while b.shape[1] > 1:
        r = a.copy()
        lb = b[:, -1:]
        bad |= np.abs(lb[:, 0]) < tol
        lb = np.where(np.abs(lb) < tol, 1.0, lb)
        for shift in range(a.shape[1] - b.shape[1], -1, -1):
            q = r[:, shift + b.shape[1] - 1:shift + b.shape[1]] / lb
            r[:, shift:shift + b.shape[1]] -= q * b
        r = -r[:, : b.shape[1] - 1]
        scale = np.max(np.abs(r), axis=1, keepdims=True)
        bad |= scale[:, 0] < tol
        r = r / np.where(scale < tol, 1.0, scale)
        chain.append(r)
        a, b = b, r

    def variations(x):
        last = np.zeros(N)
        count = np.zeros(N, int)
        for p in chain:
            v = np.polynomial.polynomial.polyval(x, p.T)
            s = np.sign(v)
            change = (s != 0) & (last != 0) & (s != last)
            count += change
            last = np.where(s != 0, s, last)
        return count

    return variations(lo) - variations(hi), bad


def _roots_in(row: np.ndarray, lo: float, hi: float) -> int:
    r = np.roots(row[::-1])
    real = r[np.abs(r.imag) <= 1e-9 * np.maximum(1.0, np.abs(r.real))].real
    return int(np.count_nonzero((real > lo) & (real <= hi)))


def two_root_measure_mc(n: int, interval: tuple[float, float], samples: int = 2 ** 23,
                        seed: int = 12345, chunk: int = 2 ** 20) -> tuple[float, float]:
    """Monte-Carlo measure of height-<=1 degree-n polynomials with >= 2 roots in (lo, hi].

    Coefficients are uniform on [-1, 1]^(n+1).  With no hits the returned
    estimate is 0 and the error is the rule-of-three 95% upper bound.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise DensityError("empty interval")
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        c = rng.uniform(-1.0, 1.0, size=(size, n + 1))
        counts, bad = _float_sturm_counts(c, lo, hi)
        for i in np.flatnonzero(bad):
            counts[i] = _roots_in(c[i], lo, hi)
        hits += int(np.count_nonzero(counts >= 2))
        done += size
    vol = 2.0 ** (n + 1)
    p = hits / samples
    if hits == 0:
        return 0.0, vol * 3.0 / samples
    return vol * p, vol * math.sqrt(p * (1.0 - p) / samples)


def density_grid(n: int, ts: Sequence[float], budget: int = DEFAULT_BUDGET) -> DensityGrid:
    pts = sorted((float(t), phi_numeric(n, t, budget)) for t in ts)
    return DensityGrid(n, tuple(pts))
