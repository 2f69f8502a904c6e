"""Pure-Python census kernel.

Reference implementation of the per-vector work done by the compiled
``_ckernel`` module, with the same call signature.  It is used when the
extension is unavailable and, always, for the rare vectors whose Sturm
arithmetic would overflow 128-bit integers in the compiled path.

Edges are given as three parallel lists ``kinds, us, vs``: kind ``-1``/``+1``
is minus/plus infinity, kind ``0`` is the finite rational ``us[i]/vs[i]``
with ``vs[i] > 0``.  Bin ``j`` is the half-open interval ``(e_j, e_{j+1}]``.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce

from .poly import IntPoly, is_irreducible
from .roots import _sign_at, _sign_at_inf, _variations, sturm_chain

BACKEND = "python"


class ShardAccumulator:
    def __init__(self, n: int, Q: int, nbins: int):
        self.bins = [0] * nbins
        self.by_k = [0] * (n + 1)
        self.prime_by_height = [0] * (Q + 1)
        self.roots_by_height = [0] * (Q + 1)
        self.collected: list[tuple[int, ...]] = []

    def as_tuple(self):
        return (self.bins, self.by_k, self.prime_by_height, self.roots_by_height,
                self.collected, [])


def _chain_variations(seq, kind: int, u: int, v: int) -> int:
    if kind == 0:
        return _variations(_sign_at(c, u, v) for c in seq)
    return _variations(_sign_at_inf(c, kind > 0) for c in seq)


def _locate(seq, edges, lo, hi, vlo, vhi, bins, reverse):
    if vlo == vhi:
        return
    if hi - lo == 1:
        j = len(bins) - 1 - lo if reverse else lo
        bins[j] += vlo - vhi
        return
    mid = (lo + hi) // 2
    vmid = _chain_variations(seq, *edges[mid])
    _locate(seq, edges, lo, mid, vlo, vmid, bins, reverse)
    _locate(seq, edges, mid, hi, vmid, vhi, bins, reverse)


def _mirror(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    """(-1)^n p(-x): the prime polynomial whose roots are the negated roots of p."""
    n = len(coeffs) - 1
    return tuple(a if (n - i) % 2 == 0 else -a for i, a in enumerate(coeffs))


def _pair_status(coeffs: tuple[int, ...]) -> int:
    """+1 canonical representative, -1 skip (its mirror is canonical), 0 self-mirrored."""
    n = len(coeffs) - 1
    for i in range(n - 1, -1, -2):
        if coeffs[i] > 0:
            return 1
        if coeffs[i] < 0:
            return -1
    return 0


def process_vector(coeffs, edges, neg_edges, pair: bool, collect: bool, acc: ShardAccumulator) -> None:
    """Classify one coefficient vector (constant first, positive lead) and accumulate."""
    coeffs = tuple(coeffs)
    n = len(coeffs) - 1
    weight = 1
    if pair:
        status = _pair_status(coeffs)
        if status < 0:
            return
        mirrored = status > 0
    else:
        mirrored = False
    if reduce(math.gcd, coeffs) != 1:
        return
    if not is_irreducible(IntPoly(coeffs)):
        return
    h = max(abs(a) for a in coeffs)
    weight = 2 if mirrored else 1
    seq = sturm_chain(IntPoly(coeffs)).seq
    real = _chain_variations(seq, -1, 0, 1) - _chain_variations(seq, 1, 0, 1)
    acc.prime_by_height[h] += weight
    acc.roots_by_height[h] += weight * real
    last = len(edges) - 1
    if real == 0:
        acc.by_k[0] += weight
        return
    v0 = _chain_variations(seq, *edges[0])
    vm = _chain_variations(seq, *edges[last])
    k = v0 - vm
    acc.by_k[k] += 1
    if k:
        _locate(seq, edges, 0, last, v0, vm, acc.bins, False)
        if collect:
            acc.collected.append(coeffs)
    if mirrored:
        w0 = _chain_variations(seq, *neg_edges[0])
        wm = _chain_variations(seq, *neg_edges[last])
        k2 = w0 - wm
        acc.by_k[k2] += 1
        if k2:
            _locate(seq, neg_edges, 0, last, w0, wm, acc.bins, True)
            if collect:
                acc.collected.append(_mirror(coeffs))


def negate_edges(edges):
    return [(-kind, -u, v) for kind, u, v in reversed(edges)]


def census_shard(n, Q, lead_lo, lead_hi, kinds, us, vs, pair, collect):
    edges = list(zip(kinds, us, vs))
    neg_edges = negate_edges(edges)
    acc = ShardAccumulator(n, Q, len(edges) - 1)
    rng = range(-Q, Q + 1)
    for lead in range(lead_lo, lead_hi + 1):
        for rest in itertools.product(rng, repeat=n):
            # rest is (a_{n-1}, ..., a_0); flip to constant-first
            coeffs = tuple(reversed(rest)) + (lead,)
            process_vector(coeffs, edges, neg_edges, pair, collect, acc)
    return acc.as_tuple()
