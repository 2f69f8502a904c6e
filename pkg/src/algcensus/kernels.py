"""Backend selection, sharding and the deterministic merge for census runs.

The compiled kernel is used when it imported cleanly and the degree is within
its fixed-size limits; ``ALGCENSUS_BACKEND=python`` forces the reference path.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _pykernel
from .roots import ExtRational, is_finite

log = logging.getLogger(__name__)

try:
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

MAX_SHARDS = 64


def available_backends() -> list[str]:
    out = ["python"]
    if _ckernel is not None:
        out.insert(0, "cython")
    return out


def default_backend() -> str:
    forced = os.environ.get("ALGCENSUS_BACKEND", "").strip().lower()
    if forced:
        if forced not in available_backends():
            raise ValueError(f"backend {forced!r} is not available")
        return forced
    return available_backends()[0]


def resolve_threads(threads: int | str | None) -> int:
    env = os.environ.get("ALGCENSUS_THREADS")
    if env:
        threads = env
    if threads is None or threads == "auto":
        return os.cpu_count() or 1
    t = int(threads)
    if t < 1:
        raise ValueError("threads must be >= 1")
    return t


def encode_edges(edges: Sequence[ExtRational]):
    """Split extended-rational edges into the kernel's (kinds, us, vs) lists."""
    kinds, us, vs = [], [], []
    for x in edges:
        if is_finite(x):
            x = Fraction(x)
            kinds.append(0)
            us.append(x.numerator)
            vs.append(x.denominator)
        else:
            kinds.append(1 if x > 0 else -1)
            us.append(0)
            vs.append(1)
    return kinds, us, vs


def shard_plan(n: int, Q: int) -> list[tuple[int, int]]:
    """Contiguous leading-coefficient ranges; depends only on (n, Q)."""
    count = min(Q, MAX_SHARDS)
    bounds = [1 + (Q * i) // count for i in range(count + 1)]
    return [(bounds[i], bounds[i + 1] - 1) for i in range(count)]


@dataclass
class CensusTotals:
    n: int
    Q: int
    bins: list[int]
    by_k: list[int]
    prime_by_height: list[int]
    roots_by_height: list[int]
    collected: list[tuple[int, ...]] = field(default_factory=list)
    shards: int = 0
    backend: str = ""
    overflow_vectors: int = 0


def _fits_compiled(n: int, Q: int, encoded) -> bool:
    if _ckernel is None or n > _ckernel.MAX_DEGREE:
        return False
    limit = 2 ** 62
    return Q < 2 ** 31 and all(abs(u) < limit and v < limit for u, v in zip(encoded[1], encoded[2]))


def run_census(n: int, Q: int, edges: Sequence[ExtRational], *, collect: bool = False,
               threads: int | str | None = None, backend: str | None = None,
               shards: list[tuple[int, int]] | None = None) -> CensusTotals:
    """Enumerate all prime polynomials of degree n and height <= Q and bin their roots.

    ``edges`` is an increasing list of at least two extended rationals; bin j
    collects the roots in ``(edges[j], edges[j+1]]``.
    """
    if n < 1 or Q < 1:
        raise ValueError("need n >= 1 and Q >= 1")
    if len(edges) < 2 or any(not a < b for a, b in zip(edges, edges[1:])):
        raise ValueError("edges must be strictly increasing")
    encoded = encode_edges(edges)
    backend = backend or default_backend()
    if backend == "cython" and not _fits_compiled(n, Q, encoded):
        backend = "python"
    kernel = _ckernel if backend == "cython" else _pykernel
    # Mirror pairing maps (a, b] onto [-b, -a); only n = 1 has rational roots on edges.
    pair = n >= 2
    plan = shards if shards is not None else shard_plan(n, Q)
    nthreads = resolve_threads(threads)

    def work(rng):
        return kernel.census_shard(n, Q, rng[0], rng[1], *encoded, pair, collect)

    if nthreads == 1 or len(plan) == 1:
        parts = [work(r) for r in plan]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(work, plan))

    acc = _pykernel.ShardAccumulator(n, Q, len(edges) - 1)
    overflow = []
    for bins, by_k, pbh, rbh, coll, ovf in parts:
        for i, c in enumerate(bins):
            acc.bins[i] += c
        for i, c in enumerate(by_k):
            acc.by_k[i] += c
        for i, c in enumerate(pbh):
            acc.prime_by_height[i] += c
        for i, c in enumerate(rbh):
            acc.roots_by_height[i] += c
        acc.collected.extend(coll)
        overflow.extend(ovf)
    if overflow:
        log.debug("reprocessing %d vectors with Python integers", len(overflow))
        edge_list = list(zip(*encoded))
        neg = _pykernel.negate_edges(edge_list)
        for vec in sorted(overflow):
            _pykernel.process_vector(vec, edge_list, neg, pair, collect, acc)
    return CensusTotals(n, Q, acc.bins, acc.by_k, acc.prime_by_height, acc.roots_by_height,
                        sorted(acc.collected), len(plan), backend, len(overflow))
