"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (shown in the terminal summary)
and then asserts the criterion at its stated tolerance and time budget.
"""

import bisect
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from algcensus import density as D
from algcensus.census import (
    CensusQuery,
    algebraic_sequence,
    in_algebraic_set,
    interval_inverse,
    phi_count,
    sequence_count_in,
    total_count,
    uniform_breakpoints,
)
from algcensus.cli import main
from algcensus.farey import a1_relation_check, discrepancy, farey_count, farey_sequence, walfisz_normalized
from algcensus.gaps import constant_sweep, outer_exclusion_check
from algcensus.kernels import run_census
from algcensus.lattice import (
    annulus_slice,
    count_primitive,
    count_primitive_bruteforce,
    normalized_deviation,
    simplex,
    slab,
    square,
    unit_ball,
)
from algcensus.report import fit_loglog
from algcensus.roots import INF, HalfOpenInterval

from conftest import ACCEPTANCE_LINES

F = Fraction


def verdict(number, title, ok, detail, elapsed=None, limit=None):
    if limit is not None:
        ok = ok and elapsed <= limit
        detail += f"; {elapsed:.1f}s of {limit:.0f}s"
    ACCEPTANCE_LINES.append(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    assert ok, detail


# ---------------------------------------------------------------- 1

class BinnedCensus:
    """One census over many edges; counts over any interval between edges by prefix sums."""

    def __init__(self, n, Q, points):
        self.n, self.Q = n, Q
        self.edges = [-INF, *sorted(set(points)), INF]
        bins = run_census(n, Q, self.edges).bins
        self.prefix = np.concatenate([[0], np.cumsum(bins)])

    def count(self, lo, hi, lo_closed=False, hi_closed=True):
        i, j = bisect.bisect_left(self.edges, lo), bisect.bisect_left(self.edges, hi)
        total = int(self.prefix[j] - self.prefix[i])
        if lo_closed and in_algebraic_set(self.n, self.Q, lo):
            total += 1
        if not hi_closed and in_algebraic_set(self.n, self.Q, hi):
            total -= 1
        return total


def _rational_intervals(rng, count, away_from_zero):
    out = []
    while len(out) < count:
        a, b = sorted(F(rng.randint(-90, 90), rng.randint(1, 15)) for _ in range(2))
        if a < b and not (away_from_zero and a <= 0 <= b):
            out.append(HalfOpenInterval(a, b))
    return out


def test_criterion_01_exact_symmetry():
    start = time.perf_counter()
    rng = random.Random(101)
    bad = []
    for n in (2, 3):
        plain = _rational_intervals(rng, 50, False)
        away = _rational_intervals(rng, 50, True)
        inverted = [interval_inverse(iv) for iv in away]
        pts = [x for iv in plain + away for x in (iv.lo, iv.hi, -iv.lo, -iv.hi)]
        pts += [x for lo, hi, _, _ in inverted for x in (lo, hi)]
        census = BinnedCensus(n, 20, pts)
        for iv in plain:
            if census.count(-iv.hi, -iv.lo, True, False) != census.count(iv.lo, iv.hi):
                bad.append(("reflection", n, iv))
        for iv, (lo, hi, lc, hc) in zip(away, inverted):
            if census.count(lo, hi, lc, hc) != census.count(iv.lo, iv.hi):
                bad.append(("inversion", n, iv))
    verdict(1, "reflection and inversion symmetry", not bad,
            f"{len(bad)} mismatches over 2 x 2 x 50 intervals at Q = 20",
            time.perf_counter() - start, 120)


# ---------------------------------------------------------------- 2

def test_criterion_02_closed_form_vs_quadrature():
    start = time.perf_counter()
    worst, outside_error, checked = 0.0, 0, 0
    for n in (2, 3, 4, 5):
        r = D.t1(n)
        k = int(math.floor(r / 0.05 + 1e-9))
        for t in [j * 0.05 for j in range(-k, k + 1)]:
            est = D.phi_numeric(n, t, 2 ** 16)
            diff = abs(est.value - D.phi_closed(n, t))
            worst = max(worst, diff)
            outside_error += diff > est.abs_error
            checked += 1
    verdict(2, "closed form vs quadrature", outside_error == 0 and worst <= 1e-3,
            f"{checked} points, max |diff| {worst:.2e}, {outside_error} outside abs_error",
            time.perf_counter() - start, 300)


# ---------------------------------------------------------------- 3

def test_criterion_03_functional_equations():
    bad = []
    for n in (2, 3, 4, 5):
        for t in np.round(np.arange(0.1, 2.0001, 0.1), 10):
            a = D.phi_numeric(n, t, reduce=False)
            b = D.phi_numeric(n, -t, reduce=False)
            if abs(a.value - b.value) > a.abs_error + b.abs_error:
                bad.append(("even", n, t))
        for t in np.round(np.arange(0.2, 0.9001, 0.1), 10):
            a = D.phi_numeric(n, t, reduce=False)
            b = D.phi_numeric(n, 1 / t, reduce=False)
            if abs(t * t * a.value - b.value) > t * t * a.abs_error + b.abs_error:
                bad.append(("inverse", n, t))
    verdict(3, "evenness and t^2 phi(t) = phi(1/t)", not bad, f"violations: {bad or 'none'}")


# ---------------------------------------------------------------- 4

def _compare(n, Q, bins=40):
    iv = HalfOpenInterval(F(-2), F(2))
    rep = phi_count(CensusQuery(n, Q, iv, uniform_breakpoints(iv, bins)))
    rows = []
    for lo, hi, c in zip(rep.edges, rep.edges[1:], rep.per_bin):
        rows.append((lo, hi, c, D.main_term(n, Q, HalfOpenInterval(lo, hi))))
    return rows


def test_criterion_04_empirical_law():
    start = time.perf_counter()
    n, Q = 2, 100
    # the band is the largest normalized residual over smaller pilot heights
    pilot = max(abs(c - m) / D.remainder_scale(n, q) for q in (30, 50, 70) for _, _, c, m in _compare(n, q))
    rows = _compare(n, Q)
    rel = max(abs(c - m) / m for _, _, c, m in rows if m >= 200)
    norm = max(abs(c - m) for _, _, c, m in rows) / D.remainder_scale(n, Q)
    centre = [(c, m) for lo, hi, c, m in rows if lo == F(-1, 10) or hi == F(1, 10)]
    edge = [(c, m) for lo, hi, c, m in rows if lo == F(-2) or hi == F(2)]
    observed = sum(c for c, _ in centre) / sum(c for c, _ in edge)
    predicted = sum(m for _, m in centre) / sum(m for _, m in edge)
    ratio_err = abs(observed / predicted - 1)
    ok = rel <= 0.10 and norm <= pilot and ratio_err <= 0.15
    verdict(4, "per-bin law at n = 2, Q = 100", ok,
            f"max rel dev {rel:.4f}, normalized residual {norm:.4f} vs pilot band {pilot:.4f}, "
            f"centre/edge ratio {observed:.3f} vs {predicted:.3f}",
            time.perf_counter() - start, 600)


# ---------------------------------------------------------------- 5

def test_criterion_05_farey():
    start = time.perf_counter()
    disc_bad = [Q for Q in range(1, 101) if discrepancy(Q) != F(1, Q)]
    count_bad = [Q for Q in range(1, 101)
                 if farey_count(Q) != sum(math.gcd(a, b) == 1 for b in range(1, Q + 1) for a in range(1, b + 1))
                 or farey_count(Q) != len(farey_sequence(Q))]
    sweep = sorted({int(q) for q in np.geomspace(10, 10 ** 4, 60)})
    walfisz = [walfisz_normalized(Q) for Q in sweep]
    a1_bad = [Q for Q in range(2, 101) if len(set(a1_relation_check(Q))) != 1]
    ok = not disc_bad and not count_bad and max(walfisz) < 1 and not a1_bad
    verdict(5, "Farey discrepancy, counts, Walfisz band, degree-1 identity", ok,
            f"D_Q != 1/Q at {disc_bad or 'none'}; count mismatches {count_bad or 'none'}; "
            f"Walfisz band [{min(walfisz):.4f}, {max(walfisz):.4f}]; identity failures {a1_bad or 'none'}",
            time.perf_counter() - start, 60)


# ---------------------------------------------------------------- 6

LATTICE_REGIONS = {"square": square, "disk": unit_ball, "triangle": simplex,
                   "annulus slice": annulus_slice, "slab": slab}


def test_criterion_06_lattice():
    start = time.perf_counter()
    mismatches = []
    for d in (2, 3):
        for name, make in LATTICE_REGIONS.items():
            r = make(d)
            for Q in (1, 7, 20, 50):
                if count_primitive(r, Q) != count_primitive_bruteforce(r, Q):
                    mismatches.append((name, d, Q))
    # bounded: no growth of the normalized deviation along Q = 10..100
    growth = {}
    for d in (2, 3):
        for name, make in LATTICE_REGIONS.items():
            devs = [normalized_deviation(make(d), Q) for Q in range(10, 101, 10)]
            growth[(name, d)] = (max(devs[5:]) / max(devs[:5]), max(devs))
    worst = max(g for g, _ in growth.values())
    top = max(m for _, m in growth.values())
    ok = not mismatches and worst <= 1.5 and top <= 10
    verdict(6, "Moebius vs gcd scan, bounded deviation", ok,
            f"{len(mismatches)} mismatches; late/early max ratio {worst:.2f}, largest deviation {top:.2f}",
            time.perf_counter() - start, 120)


# ---------------------------------------------------------------- 7

def test_criterion_07_gap_scaling():
    start = time.perf_counter()
    fits, failing, c_min = [], [], math.inf
    for n, Qs in ((2, range(5, 41)), (3, range(3, 13))):
        for x0 in (F(0), F(1, 2), F(1, 3)):
            probes = constant_sweep(n, x0, list(Qs))
            c_min = min(c_min, min(p.implied_constant for p in probes))
            s = fit_loglog([(p.Q, float(p.nearest_distance)) for p in probes], "Q")
            fits.append(f"n={n} x0={x0}: {s.fitted_slope:+.3f}")
            if abs(s.fitted_slope + 1) > 0.15:
                failing.append(f"n={n} x0={x0}")
    # every height on the desk-scale grid (degree 1 up to 200)
    outer = [(n, Q) for n, top in ((1, 200), (2, 100), (3, 30), (4, 12), (5, 6))
             for Q in range(1, top + 1) if not outer_exclusion_check(n, Q)]
    ok = not failing and c_min > 0 and not outer
    verdict(7, "gap distance slope -1 +- 0.15", ok,
            f"slopes {', '.join(fits)}; outside tolerance: {failing or 'none'}; "
            f"c_min {c_min:.4f}; outer exclusion failures {outer or 'none'}",
            time.perf_counter() - start, 600)


# ---------------------------------------------------------------- 8

def test_criterion_08_jacobian():
    rng = np.random.default_rng(2718)
    worst = 0.0
    for i in range(100):
        n = 2 + i % 4
        b = rng.uniform(-1, 1, n - 1)
        a, c = rng.uniform(-1, 1, 2)
        lhs, rhs = D.jacobian_identity_check(b, a, c)
        worst = max(worst, abs(lhs - rhs) / max(1.0, rhs))
    verdict(8, "Jacobian identity", worst <= 1e-9, f"max relative error {worst:.2e} over 100 instances, n = 2..5")


# ---------------------------------------------------------------- 9

def test_criterion_09_two_root_measure():
    start = time.perf_counter()
    slopes = {}
    for n in (2, 3, 4, 5):
        pts = [(w, D.two_root_measure_mc(n, (-w / 2, w / 2))[0]) for w in (0.4, 0.2, 0.1)]
        slopes[n] = fit_loglog(pts, "width", min_points=3).fitted_slope
    ok = all(abs(s - 3) <= 0.3 for s in slopes.values())
    verdict(9, "two-root measure slope 3 +- 0.3", ok,
            ", ".join(f"n={n}: {s:.3f}" for n, s in slopes.items()), time.perf_counter() - start, 300)


# ---------------------------------------------------------------- 10

def test_criterion_10_sphere_density():
    grid = np.linspace(-5, 5, 201)
    degree_one = max(abs(D.phi_sphere(1, t) * (1 + t * t) - 1) for t in grid)
    gaps = {n: abs(D.phi_sphere(n, 1 + 1e-4) - D.phi_sphere(n, 1 - 1e-4)) for n in range(1, 6)}
    ok = degree_one <= 1e-12 and all(g <= 1e-6 for g in gaps.values())
    verdict(10, "sphere density identity and continuity at t = 1", ok,
            f"degree-1 identity error {degree_one:.1e}; |phi(1+1e-4) - phi(1-1e-4)| = "
            + ", ".join(f"n={n}: {g:.2e}" for n, g in gaps.items()))


# ---------------------------------------------------------------- 11

def test_criterion_11_sequence():
    start = time.perf_counter()
    N = 2000
    seq = algebraic_sequence(2, N)
    parts = []
    ok = True
    for iv in (HalfOpenInterval(F(0), F(1)), HalfOpenInterval(F(1), F(2)), HalfOpenInterval(F(-1), F(0))):
        share = sequence_count_in(seq, iv) / N
        expected = D.rho_mass(2, iv)
        err = abs(share - expected) / expected
        ok &= err <= 0.10
        parts.append(f"{iv}: {share:.4f} vs {expected:.4f} ({err:.1%})")
    verdict(11, "sequence shares at N = 2000", ok, "; ".join(parts), time.perf_counter() - start, 300)


# ---------------------------------------------------------------- 12

CLI_RUNS = [
    ["census", "--degree", "2", "--height", "30", "--interval", "-2,2", "--bins", "16", "--by-k"],
    ["census", "--degree", "3", "--height", "8", "--count-reducible"],
    ["compare", "--degree", "2", "--height", "40", "--bins", "40"],
    ["density", "--degree", "4", "--grid", "-1.5:1.5:0.25", "--sphere"],
    ["farey", "--height", "60", "--discrepancy", "--extremal"],
    ["lattice", "--region", "slab", "--dim", "3", "--height", "15"],
    ["gaps", "--degree", "3", "--rational", "1/2", "--heights", "3:9:2"],
    ["sequence", "--degree", "3", "--count", "300", "--interval", "0,1"],
]


def test_criterion_12_determinism(capsys, monkeypatch):
    monkeypatch.delenv("ALGCENSUS_THREADS", raising=False)
    differing = []
    for argv in CLI_RUNS:
        for fmt in ("csv", "json"):
            outs = []
            for threads in ("1", "4", "8"):
                main([*argv, "--format", fmt, "--threads", threads])
                outs.append(capsys.readouterr().out)
            if not outs[0] or len(set(outs)) != 1:
                differing.append(f"{argv[0]} {fmt}")
    verdict(12, "byte-identical CLI output at 1, 4, 8 threads", not differing,
            f"{len(CLI_RUNS) * 2} runs, differing: {differing or 'none'}")
