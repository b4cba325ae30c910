"""Affine primitive groups ``G = V H`` as products of conjugates of ``H``.

Vectors are group elements of the elementary abelian normal subgroup ``V``;
addition is the group product and ``v^h = h^-1 v h``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FixedVector, NotCoreFree, NotIrreducible, VerificationFailed
from .factorize import FactorizationWitness, product_of_conjugates, verify_witness
from .subgroups import (core, intersection, is_abelian, is_normal, prime_factors,
                        subgroup_closure)

C_A = 3 / math.log2(5)


@dataclass
class AffineDatum:
    group: object
    p: int
    n: int
    V: object
    H: object
    basis: list
    coords: dict = field(repr=False)
    vectors: dict = field(repr=False)

    def vec(self, v):
        return self.coords[int(v)]

    def elem(self, coords):
        return self.vectors[tuple(c % self.p for c in coords)]

    def scale(self, s, v):
        return self.group.power(int(v), s % self.p)

    def add(self, a, b):
        return self.group.mul(int(a), int(b))

    def neg(self, a):
        return int(self.group.inverse[int(a)])

    def act(self, v, h):
        """``v^h``."""
        return self.group.conj(int(v), int(h))


def _coordinates(g, p, basis):
    coords, vectors = {}, {}
    for cs in itertools.product(range(p), repeat=len(basis)):
        x = 0
        for c, b in zip(cs, basis):
            x = g.mul(x, g.power(b, c))
        coords[x] = cs
        vectors[cs] = x
    return coords, vectors


def _vector_basis(g, vsub):
    basis, span = [], subgroup_closure(g, [])
    for x in vsub.indices():
        if not span.mask[x]:
            basis.append(int(x))
            span = subgroup_closure(g, basis)
    return basis


def _orbit_span(g, v, hidx):
    pts = {int(g.conj(v, int(h))) for h in hidx}
    return subgroup_closure(g, sorted(pts))


def affine_datum(g, vsub, hsub, check=True):
    """Validate ``G = V H`` with ``V`` elementary abelian and build coordinates."""
    ps = prime_factors(vsub.order)
    if len(ps) != 1:
        raise VerificationFailed(f"|V| = {vsub.order} is not a prime power")
    p = ps[0]
    n = round(math.log(vsub.order, p))
    if check:
        if not is_abelian(vsub) or any(g.power(int(x), p) for x in vsub.indices()):
            raise VerificationFailed("V is not elementary abelian")
        if not is_normal(vsub):
            raise VerificationFailed("V is not normal")
        if intersection(vsub, hsub).order != 1 or vsub.order * hsub.order != g.order:
            raise VerificationFailed("H is not a complement to V")
        if core(hsub).order != 1:
            raise NotCoreFree("H contains a nontrivial normal subgroup of G")
        hidx = hsub.indices()
        for v in vsub.indices()[1:]:
            if _orbit_span(g, int(v), hidx).order != vsub.order:
                raise NotIrreducible(f"the H-orbit of vector {int(v)} spans a proper subspace")
    basis = _vector_basis(g, vsub)
    coords, vectors = _coordinates(g, p, basis)
    return AffineDatum(g, p, n, vsub, hsub, basis, coords, vectors)


def datum_from_affine_group(g, check=True):
    """Datum for a group built from an ``affine:p,n,[...]`` spec."""
    meta = getattr(g, "affine", None)
    if meta is None:
        raise VerificationFailed("group carries no affine generator metadata")
    vsub = subgroup_closure(g, meta["translations"])
    hsub = subgroup_closure(g, meta["linear"])
    return affine_datum(g, vsub, hsub, check)


def trick_length(p):
    return (p - 1).bit_length()


@dataclass
class TrickResult:
    w: int
    conjugators: list
    k: int
    covered: bool


def cover_line(d, v, h, verify=True):
    """Conjugators ``c_0..c_k`` with ``<w> ⊆ H^{c_0} ... H^{c_k}``, ``w = v^{h^-1} - v``.

    ``c_j = (2^k - 2^j) v``.  A scalar ``s < 2^k`` splits into maximal runs of
    binary ones ``[i, j)``; choosing ``h`` in factor ``i`` and ``h^-1`` in
    factor ``j`` contributes ``(2^j - 2^i) w``.
    """
    g = d.group
    hi = int(g.inverse[int(h)])
    vh = d.act(v, hi)
    if vh == int(v):
        raise FixedVector(f"vector {int(v)} is fixed by the chosen element")
    w = d.add(vh, d.neg(v))
    k = trick_length(d.p)
    conj = [d.scale((1 << k) - (1 << j), v) for j in range(k + 1)]
    res = TrickResult(w, conj, k, False)
    if verify:
        mask = product_of_conjugates(g, d.H, conj, stop_when_full=False)
        res.covered = all(mask[d.scale(s, w)] for s in range(d.p))
        if not res.covered:
            raise VerificationFailed("the trick product misses a multiple of w")
    return res


def _first_moving(d, v):
    for h in d.H.indices()[1:]:
        if d.act(v, int(h)) != int(v):
            return int(h)
    raise FixedVector(f"H fixes vector {int(v)}")


def affine_factorization(d, verify=True):
    """Witness ``G = H^{x_1} ... H^{x_m}`` with ``m = 1 + n ceil(log2 p)``."""
    g = d.group
    v = int(d.V.indices()[1])
    h = _first_moving(d, v)
    w = cover_line(d, v, h, verify=False).w
    # greedy basis w^{h_i}, scanning H in index order
    hs, span = [], subgroup_closure(g, [])
    for x in d.H.indices():
        wx = d.act(w, int(x))
        if not span.mask[wx]:
            hs.append(int(x))
            span = subgroup_closure(g, [d.act(w, y) for y in hs])
            if span.order == d.V.order:
                break
    if span.order != d.V.order:
        raise NotIrreducible("the H-images of w do not span V")
    blocks = []
    for hi in hs:
        vi = d.act(v, hi)
        hh = g.product(int(g.inverse[hi]), h, hi)
        blocks.append(cover_line(d, vi, hh, verify=False).conjugators)
    # translate each block so its last factor equals the next block's first
    shifts = [0] * len(blocks)
    for i in range(len(blocks) - 2, -1, -1):
        shifts[i] = d.add(blocks[i + 1][0], shifts[i + 1])
    conj = []
    for i, blk in enumerate(blocks):
        moved = [d.add(c, shifts[i]) for c in blk]
        conj.extend(moved if i == 0 else moved[1:])
    wit = FactorizationWitness(g, d.H, conj, "affine")
    wit.notes.update({"p": d.p, "n": d.n, "bound": 1 + d.n * trick_length(d.p),
                      "basis_elements": hs})
    if verify and not verify_witness(wit):
        raise VerificationFailed("affine witness does not cover the group")
    return wit


def primes_up_to(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.flatnonzero(sieve)


def ceiling_log_scan(limit=10**6):
    """Primes ``p <= limit`` violating ``ceil(log2 p) <= (3/log2 5) log2 p``.

    The inequality is ``5^k <= p^3`` with ``k = ceil(log2 p)``, checked in integers.
    """
    bad = []
    for p in primes_up_to(limit).tolist():
        k = trick_length(p)
        if 5 ** k > p ** 3:
            bad.append(p)
    return bad
