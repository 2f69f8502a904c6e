"""Scaling summaries over parameter sweeps: log-log slopes and normalized-residual bands."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from .census import CensusQuery, phi_count
from .density import DEFAULT_BUDGET, main_term, remainder_scale
from .gaps import constant_sweep, gap_interval
from .roots import HalfOpenInterval


@dataclass(frozen=True)
class SweepSummary:
    parameter: str
    points: tuple[tuple[float, float], ...]
    fitted_slope: float
    slope_ci: tuple[float, float]
    band: tuple[float, float]
    intercept: float = float("nan")

    def to_dict(self) -> dict:
        return asdict(self)


def fit_loglog(points: Sequence[tuple[float, float]], parameter: str = "x",
               band_values: Sequence[float] | None = None, confidence: float = 0.95,
               min_points: int = 4) -> SweepSummary:
    """Least-squares line through (log x, log y).

    ``band`` is the range of ``band_values`` when given, otherwise of the
    implied constants y / x^slope.  ``min_points`` may go down to 3, which
    still leaves one degree of freedom for the confidence interval.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < max(3, min_points):
        raise ValueError(f"need at least {max(3, min_points)} points for a slope fit")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("log-log fit needs positive values")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    res = stats.linregress(lx, ly)
    tq = stats.t.ppf(0.5 + confidence / 2, len(pts) - 2)
    ci = (res.slope - tq * res.stderr, res.slope + tq * res.stderr)
    if band_values is None:
        band_values = [y / x ** res.slope for x, y in pts]
    return SweepSummary(parameter, tuple(pts), float(res.slope), (float(ci[0]), float(ci[1])),
                        (float(min(band_values)), float(max(band_values))), float(res.intercept))


def remainder_band(n: int, Qs: Sequence[int], interval: HalfOpenInterval, budget: int = DEFAULT_BUDGET,
                   **kw) -> SweepSummary:
    """Residual Phi - main term, normalized by Q^n (ln Q)^l(n), across a height sweep.

    The slope is fitted to |residual| when every residual is nonzero.
    """
    pts, band = [], []
    for Q in Qs:
        count = phi_count(CensusQuery(n, Q, interval), **kw).phi
        resid = count - main_term(n, Q, interval, budget)
        band.append(resid / remainder_scale(n, Q))
        pts.append((float(Q), abs(resid)))
    return _summary("Q", pts, band)


def gap_remainder_band(n: int, Qs: Sequence[int], x0=0, budget: int = DEFAULT_BUDGET, **kw) -> SweepSummary:
    """Residuals on intervals around x0 that the gap constant certifies empty, over Q^n."""
    probes = constant_sweep(n, x0, Qs, **kw)
    c_min = min(p.implied_constant for p in probes)
    pts, band = [], []
    for p in probes:
        iv = gap_interval(p, c_min)
        count = phi_count(CensusQuery(n, p.Q, iv), **kw).phi
        resid = count - main_term(n, p.Q, iv, budget)
        band.append(abs(resid) / p.Q ** n)
        pts.append((float(p.Q), abs(resid)))
    return _summary("Q", pts, band)


def _summary(parameter: str, pts, band) -> SweepSummary:
    if len(pts) >= 4 and all(y > 0 for _, y in pts):
        return fit_loglog(pts, parameter, band_values=band)
    nan = float("nan")
    return SweepSummary(parameter, tuple(pts), nan, (nan, nan), (float(min(band)), float(max(band))))
