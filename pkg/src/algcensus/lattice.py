"""Integer and primitive lattice points in dilated semialgebraic regions.

A region is the part of the cube [-1, 1]^d where finitely many polynomial
inequalities F_i(x) >= 0 with rational coefficients hold.  Membership of
x / Q is decided exactly by clearing denominators, so the counts are exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from pathlib import Path

import numpy as np
from scipy.stats import qmc

from .density import zeta

Monomial = tuple[Fraction, tuple[int, ...]]


@dataclass(frozen=True)
class Region:
    dim: int
    inequalities: tuple[tuple[Monomial, ...], ...]
    name: str = ""
    measure: float | None = None  # exact measure when known, used for main terms

    @property
    def degree_bound(self) -> int:
        return max((sum(e) for ineq in self.inequalities for _, e in ineq), default=0)

    @property
    def num_constraints(self) -> int:
        return len(self.inequalities)

    @classmethod
    def from_dict(cls, doc: dict) -> "Region":
        dim = int(doc["dim"])
        ineqs = []
        for item in doc.get("inequalities", []):
            terms = item["coeffs"] if isinstance(item, dict) else item
            mons = []
            for c, e in terms:
                e = tuple(int(v) for v in e)
                if len(e) != dim or any(v < 0 for v in e):
                    raise ValueError(f"bad exponent vector {e}")
                mons.append((Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10 ** 12), e))
            ineqs.append(tuple(mons))
        measure = doc.get("measure")
        return cls(dim, tuple(ineqs), doc.get("name", ""), None if measure is None else float(measure))

    @classmethod
    def load(cls, path) -> "Region":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "inequalities": [{"coeffs": [[str(c), list(e)] for c, e in ineq]} for ineq in self.inequalities],
        }
        if self.name:
            out["name"] = self.name
        if self.measure is not None:
            out["measure"] = self.measure
        return out

    def permuted(self, perm: tuple[int, ...]) -> "Region":
        """Region obtained by sending coordinate i to position perm[i]."""
        ineqs = []
        for ineq in self.inequalities:
            mons = []
            for c, e in ineq:
                ne = [0] * self.dim
                for i, v in enumerate(e):
                    ne[perm[i]] = v
                mons.append((c, tuple(ne)))
            ineqs.append(tuple(mons))
        return Region(self.dim, tuple(ineqs), self.name, self.measure)


@dataclass(frozen=True)
class LatticeCountReport:
    q: int
    total_points: int
    primitive_points: int
    main_term: float
    measure_estimate: float


# ---------------------------------------------------------------- standard regions

def _mon(c, *e) -> Monomial:
    return (Fraction(c), tuple(e))


def square(d: int = 2) -> Region:
    return Region(d, (), "square", 2.0 ** d)


def unit_ball(d: int = 2) -> Region:
    ineq = (_mon(1, *([0] * d)),) + tuple(_mon(-1, *[2 if j == i else 0 for j in range(d)]) for i in range(d))
    return Region(d, (ineq,), "ball", math.pi ** (d / 2) / math.gamma(d / 2 + 1))


def positive_quadrant(d: int = 2) -> Region:
    ineqs = tuple((_mon(1, *[1 if j == i else 0 for j in range(d)]),) for i in range(d))
    return Region(d, ineqs, "positive", 1.0)


def simplex(d: int = 2) -> Region:
    ineqs = positive_quadrant(d).inequalities
    total = (_mon(1, *([0] * d)),) + tuple(_mon(-1, *[1 if j == i else 0 for j in range(d)]) for i in range(d))
    return Region(d, ineqs + (total,), "simplex", 1.0 / math.factorial(d))


def annulus_slice(d: int = 2) -> Region:
    """1/4 <= |x|^2 <= 1 with x_1 >= 0."""
    zero = [0] * d
    sq = tuple(_mon(1, *[2 if j == i else 0 for j in range(d)]) for i in range(d))
    outer = (_mon(1, *zero),) + tuple((-c, e) for c, e in sq)
    inner = (_mon(Fraction(-1, 4), *zero),) + sq
    half = (_mon(1, *[1 if j == 0 else 0 for j in range(d)]),)
    vol = math.pi ** (d / 2) / math.gamma(d / 2 + 1) * (1 - 0.5 ** d) / 2
    return Region(d, (outer, inner, half), "annulus_slice", vol)


def slab(d: int = 2) -> Region:
    """|x_1 + x_2/2| <= 1/2, as two linear inequalities."""
    zero = [0] * d
    e1 = [1 if j == 0 else 0 for j in range(d)]
    e2 = [1 if j == 1 else 0 for j in range(d)]
    up = (_mon(Fraction(1, 2), *zero), _mon(-1, *e1), _mon(Fraction(-1, 2), *e2))
    down = (_mon(Fraction(1, 2), *zero), _mon(1, *e1), _mon(Fraction(1, 2), *e2))
    return Region(d, (up, down), "slab", 2.0 * 2.0 ** (d - 2))


STANDARD_REGIONS = {
    "square": square,
    "ball": unit_ball,
    "positive": positive_quadrant,
    "simplex": simplex,
    "annulus_slice": annulus_slice,
    "slab": slab,
}


# ---------------------------------------------------------------- counting

def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def _grid(d: int, r: int) -> np.ndarray:
    axis = np.arange(-r, r + 1, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _integer_inequality(ineq, m: int):
    """Scale an inequality to integer coefficients; returns [(c, e, |e|)]."""
    L = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c, _ in ineq), 1)
    return [(int(c * L), e, sum(e)) for c, e in ineq], m


def _inside(region: Region, pts: np.ndarray, Q: int, k: int) -> np.ndarray:
    """Mask of y in pts with F_i(k * y / Q) >= 0 for all i (cube bound handled by the caller)."""
    mask = np.ones(len(pts), bool)
    m = region.degree_bound
    for ineq in region.inequalities:
        terms, _ = _integer_inequality(ineq, m)
        bound = sum(abs(c) * (k * Q) ** m for c, _, _ in terms) * 2
        dtype = np.int64 if bound < 2 ** 62 else object
        y = pts.astype(dtype)
        val = np.zeros(len(pts), dtype=dtype)
        for c, e, deg in terms:
            # Q^m F(k y / Q) = sum c k^|e| Q^(m-|e|) y^e
            mon = np.full(len(pts), c * k ** deg * Q ** (m - deg), dtype=dtype)
            for i, v in enumerate(e):
                if v:
                    mon = mon * y[:, i] ** v
            val = val + mon
        mask &= val >= 0
    return mask


def _count_sublattice(region: Region, Q: int, k: int) -> int:
    """Nonzero integer y with k*y/Q in the region."""
    r = Q // k
    if r == 0:
        return 0
    pts = _grid(region.dim, r)
    pts = pts[np.any(pts != 0, axis=1)]
    return int(np.count_nonzero(_inside(region, pts, Q, k)))


def count_points(region: Region, Q: int) -> int:
    if Q < 1:
        raise ValueError("Q must be >= 1")
    return _count_sublattice(region, Q, 1)


def count_primitive(region: Region, Q: int) -> int:
    """Primitive vectors in Q * region by Moebius inversion over dilated sublattices."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    total = 0
    for k in range(1, Q + 1):
        mu = mobius(k)
        if mu:
            total += mu * _count_sublattice(region, Q, k)
    return total


def count_primitive_bruteforce(region: Region, Q: int) -> int:
    """Reference count: scan the dilated region and keep vectors with gcd 1."""
    pts = _grid(region.dim, Q)
    pts = pts[np.any(pts != 0, axis=1)]
    inside = _inside(region, pts, Q, 1)
    g = np.gcd.reduce(np.abs(pts), axis=1)
    return int(np.count_nonzero(inside & (g == 1)))


def _float_inside(region: Region, x: np.ndarray) -> np.ndarray:
    mask = np.ones(len(x), bool)
    for ineq in region.inequalities:
        val = np.zeros(len(x))
        for c, e in ineq:
            mon = np.full(len(x), float(c))
            for i, v in enumerate(e):
                if v:
                    mon = mon * x[:, i] ** v
            val += mon
        mask &= val >= 0
    return mask


def measure_estimate(region: Region, samples: int = 2 ** 16, seed: int = 7) -> float:
    """Low-discrepancy estimate of the region's volume."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    m = int(math.ceil(math.log2(samples)))
    x = 2.0 * qmc.Sobol(d=region.dim, scramble=True, seed=seed).random_base2(m) - 1.0
    return 2.0 ** region.dim * float(np.mean(_float_inside(region, x)))


def lattice_main_term(region: Region, Q: int, measure: float | None = None) -> float:
    mes = measure if measure is not None else (region.measure if region.measure is not None
                                               else measure_estimate(region))
    return Q ** region.dim * mes / zeta(region.dim)


def lattice_report(region: Region, Q: int, samples: int = 2 ** 16) -> LatticeCountReport:
    est = measure_estimate(region, samples)
    mes = region.measure if region.measure is not None else est
    return LatticeCountReport(Q, count_points(region, Q), count_primitive(region, Q),
                              lattice_main_term(region, Q, mes), est)


def normalized_deviation(region: Region, Q: int) -> float:
    """|primitive count - main term| / (Q^(d-1) (ln Q)^l(d)), l(2) = 1 and 0 otherwise."""
    d = region.dim
    scale = Q ** (d - 1) * (math.log(Q) if d == 2 else 1.0)
    return abs(count_primitive(region, Q) - lattice_main_term(region, Q)) / scale
