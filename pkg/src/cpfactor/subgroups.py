"""Subsets and subgroups of a :class:`GroupTable` as membership bit-vectors."""

from __future__ import annotations

import hashlib
from collections import deque

import numpy as np

from .errors import BoundExceeded, NotPGroup, ParentMismatch
from .groups import InducedGroup

ENUMERATION_BOUND = 2000
SMALL_PRODUCT = 4_000_000


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n, p):
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def is_prime_power(n):
    f = prime_factors(n)
    return len(f) == 1


class ElementSet:
    """An arbitrary subset of the parent group."""

    def __init__(self, parent, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (parent.order,):
            raise ValueError("mask length must equal the group order")
        self.parent = parent
        self.mask = mask
        self.mask.setflags(write=False)
        self._order = None
        self._key = None

    @classmethod
    def from_indices(cls, parent, indices):
        m = np.zeros(parent.order, dtype=bool)
        m[np.asarray(indices, dtype=np.int64)] = True
        return cls(parent, m)

    @property
    def order(self):
        if self._order is None:
            self._order = int(np.count_nonzero(self.mask))
        return self._order

    def __len__(self):
        return self.order

    def indices(self):
        return np.flatnonzero(self.mask)

    def __contains__(self, i):
        return bool(self.mask[int(i)])

    def key(self):
        """128-bit content hash of the bit-vector (little-endian bit order)."""
        if self._key is None:
            packed = np.packbits(self.mask, bitorder="little")
            self._key = hashlib.blake2b(packed.tobytes(), digest_size=16).digest()
        return self._key

    def is_full(self):
        return self.order == self.parent.order

    def __eq__(self, other):
        return (isinstance(other, ElementSet) and other.parent is self.parent
                and np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash(self.key())

    def __le__(self, other):
        return not np.any(self.mask & ~other.mask)

    def __lt__(self, other):
        return self <= other and self.order < other.order

    def __repr__(self):
        return f"<{type(self).__name__} |S|={self.order} in {self.parent.label()}>"


class SubgroupSet(ElementSet):
    """A subgroup, carrying a generating set."""

    def __init__(self, parent, mask, generators):
        super().__init__(parent, mask)
        self.generators = tuple(int(g) for g in generators)
        if parent.order % self.order:
            raise AssertionError("subgroup order does not divide the group order")

    def as_group(self, name=""):
        return InducedGroup(self.parent, self.indices(), self.generators, name=name)

    def sorted_members(self):
        return [int(i) for i in self.indices()]


def _check_parent(*sets):
    p = sets[0].parent
    for s in sets[1:]:
        if s.parent is not p:
            raise ParentMismatch("sets live in different groups")
    return p


# -- closures -----------------------------------------------------------------

def _close(g, mask, frontier, gens):
    """Extend a subgroup mask by right multiplication with ``gens`` (BFS on indices)."""
    gens = np.asarray(gens, dtype=np.int64)
    while len(frontier):
        prod = g.mul_arrays(np.repeat(frontier, len(gens)), np.tile(gens, len(frontier)))
        prod = np.unique(prod)
        prod = prod[~mask[prod]]
        mask[prod] = True
        frontier = prod
    return mask


def subgroup_closure(g, gens):
    """Least subgroup containing the element indices ``gens``."""
    gens = [int(x) for x in dict.fromkeys(int(x) for x in gens) if int(x) != 0]
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    if gens:
        _close(g, mask, np.array([0]), gens)
    return SubgroupSet(g, mask, gens)


def extend_subgroup(s, extra):
    """``<s, extra>`` reusing the members already known."""
    g = s.parent
    extra = [int(x) for x in extra if not s.mask[int(x)]]
    if not extra:
        return s
    gens = list(s.generators) + extra
    mask = s.mask.copy()
    _close(g, mask, s.indices(), gens)
    return SubgroupSet(g, mask, gens)


def trivial_subgroup(g):
    return subgroup_closure(g, [])


def whole_group(g):
    return SubgroupSet(g, np.ones(g.order, dtype=bool), g.generators)


def subgroup_from_mask(g, mask, check=True):
    """Recover generators for a mask known (or claimed) to be a subgroup."""
    mask = np.asarray(mask, dtype=bool)
    cur = np.zeros(g.order, dtype=bool)
    cur[0] = True
    gens = []
    while True:
        rest = np.flatnonzero(mask & ~cur)
        if not len(rest):
            break
        x = int(rest[0])
        gens.append(x)
        cur = _close(g, cur, np.flatnonzero(cur), gens)
    if check and not np.array_equal(cur, mask):
        raise ValueError("mask is not closed under multiplication")
    return SubgroupSet(g, cur, gens)


# -- products and conjugation ---------------------------------------------------

def right_translate(mask, g, x):
    """Mask of ``S*x``."""
    return mask[g.right_map(g.inverse[int(x)])]


def left_translate(mask, g, x):
    """Mask of ``x*S``."""
    return mask[g.left_map(g.inverse[int(x)])]


def saturate_right(g, mask, gens):
    """Smallest superset of ``mask`` closed under right multiplication by ``gens``."""
    mask = np.array(mask, dtype=bool)
    if mask.all():
        return mask
    maps = [g.right_map(g.inverse[a]) for a in gens]
    while True:
        before = int(np.count_nonzero(mask))
        for m in maps:
            mask |= mask[m]
        after = int(np.count_nonzero(mask))
        if after == before or after == g.order:
            return mask


def saturate_left(g, mask, gens):
    mask = np.array(mask, dtype=bool)
    maps = [g.left_map(g.inverse[a]) for a in gens]
    while True:
        before = int(np.count_nonzero(mask))
        for m in maps:
            mask |= mask[m]
        after = int(np.count_nonzero(mask))
        if after == before or after == g.order:
            return mask


def setwise_product(x, y):
    """``{a*b : a in x, b in y}`` as an ElementSet."""
    g = _check_parent(x, y)
    if x.order * y.order <= SMALL_PRODUCT:
        a, b = x.indices(), y.indices()
        prod = g.mul_arrays(np.repeat(a, len(b)), np.tile(b, len(a)))
        out = np.zeros(g.order, dtype=bool)
        out[prod] = True
        return ElementSet(g, out)
    if isinstance(y, SubgroupSet):
        return ElementSet(g, saturate_right(g, x.mask, y.generators))
    if isinstance(x, SubgroupSet):
        return ElementSet(g, saturate_left(g, y.mask, x.generators))
    acc = np.zeros(g.order, dtype=bool)
    if x.order <= y.order:
        for a in x.indices():
            acc |= left_translate(y.mask, g, a)
            if acc.all():
                break
    else:
        for b in y.indices():
            acc |= right_translate(x.mask, g, b)
            if acc.all():
                break
    return ElementSet(g, acc)


def conjugate_indices(g, idx, x):
    """``x^-1 * i * x`` for an index array."""
    idx = np.asarray(idx, dtype=np.int64)
    xi = np.full(len(idx), g.inverse[int(x)])
    return g.mul_arrays(g.mul_arrays(xi, idx), np.full(len(idx), int(x)))


def conjugate_set(s, x):
    """``x^-1 S x``; subgroups keep (conjugated) generators."""
    g = s.parent
    x = int(x)
    if x == 0:
        return s
    if s.order * 8 < g.order:
        out = np.zeros(g.order, dtype=bool)
        out[conjugate_indices(g, s.indices(), x)] = True
    else:
        out = s.mask[g.conj_map(g.inverse[x])]
    if isinstance(s, SubgroupSet):
        gens = conjugate_indices(g, s.generators, x) if s.generators else []
        return SubgroupSet(g, out, gens)
    return ElementSet(g, out)


def intersection(a, b):
    g = _check_parent(a, b)
    m = a.mask & b.mask
    if isinstance(a, SubgroupSet) and isinstance(b, SubgroupSet):
        return subgroup_from_mask(g, m, check=False)
    return ElementSet(g, m)


def join(a, b):
    return extend_subgroup(a, b.generators)


# -- normalizers and friends ----------------------------------------------------

def _all_conjugates_of(g, x, within=None):
    """``t^-1 x t`` for every t (or every t in ``within``)."""
    t = np.arange(g.order) if within is None else np.asarray(within)
    xt = g.left_map(x)[t]
    return g.mul_arrays(g.inverse[t], xt)


def normalizer(s, within=None):
    """``N_W(S)`` where W defaults to the whole parent group."""
    g = s.parent
    cand = np.flatnonzero(within.mask) if within is not None else np.arange(g.order)
    ok = np.ones(len(cand), dtype=bool)
    for x in s.generators:
        ok &= s.mask[_all_conjugates_of(g, x, cand)]
    mask = np.zeros(g.order, dtype=bool)
    mask[cand[ok]] = True
    return subgroup_from_mask(g, mask, check=False)


def centralizer(s, within=None):
    g = s.parent
    mask = np.ones(g.order, dtype=bool) if within is None else within.mask.copy()
    for x in s.generators:
        mask &= g.left_map(x) == g.right_map(x)
    return subgroup_from_mask(g, mask, check=False)


def center(g):
    return centralizer(whole_group(g))


def is_normal(s, within=None):
    g = s.parent
    gens = g.generators if within is None else within.generators
    for x in s.generators:
        for t in gens:
            if not s.mask[g.conj(x, t)]:
                return False
    return True


def core(s):
    """Largest normal subgroup of G inside S."""
    g = s.parent
    k = s
    while True:
        changed = False
        for t in g.generators:
            m = k.mask & conjugate_set(k, t).mask
            if np.count_nonzero(m) < k.order:
                k = subgroup_from_mask(g, m, check=False)
                changed = True
        if not changed:
            return k


def normal_closure(s, within=None):
    """Least subgroup normal in W (default G) containing S."""
    g = s.parent
    wgens = g.generators if within is None else within.generators
    n = subgroup_closure(g, s.generators)
    queue = deque(n.generators)
    while queue:
        x = queue.popleft()
        for t in wgens:
            y = g.conj(x, t)
            if not n.mask[y]:
                n = extend_subgroup(n, [y])
                queue.append(y)
    return n


# -- orders, Sylow ------------------------------------------------------------------

def element_orders(s):
    return s.parent.element_orders(s.indices()) if s.order < s.parent.order else \
        s.parent.element_orders()


def order_modulo(g, x, sub):
    """Least k > 0 with x^k in sub."""
    k, y = 1, int(x)
    while not sub.mask[y]:
        y = g.mul(y, x)
        k += 1
    return k


def sylow_over(p_sub, p, within=None):
    """A Sylow p-subgroup of W (default G) containing the p-subgroup ``p_sub``."""
    g = p_sub.parent
    total = g.order if within is None else within.order
    if p_sub.order != p_part(p_sub.order, p):
        raise NotPGroup(f"subgroup of order {p_sub.order} is not a {p}-group")
    target = p_part(total, p)
    cur = p_sub
    while cur.order < target:
        n = normalizer(cur, within)
        found = None
        for x in np.flatnonzero(n.mask & ~cur.mask):
            k = order_modulo(g, int(x), cur)
            if k == p_part(k, p):
                found = int(x)
                break
        if found is None:
            raise AssertionError("normalizer ascent stalled")
        cur = extend_subgroup(cur, [found])
    return cur


def sylow_subgroup(g, p, within=None):
    base = trivial_subgroup(g)
    return sylow_over(base, p, within)


def sylow_normalizer(g, p):
    return normalizer(sylow_subgroup(g, p))


# -- predicates -----------------------------------------------------------------------

def is_nilpotent(s):
    """Nilpotent iff for every p the p-elements number exactly |S|_p."""
    if s.order == 1:
        return True
    orders = element_orders(s)
    for p in prime_factors(s.order):
        pp = p_part(s.order, p)
        is_p = pp % orders == 0
        if int(np.count_nonzero(is_p)) != pp:
            return False
    return True


def commutator_subgroup(s):
    g = s.parent
    comms = []
    gens = s.generators
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            c = g.product(g.inverse[a], g.inverse[b], a, b)
            if c:
                comms.append(c)
    return normal_closure(subgroup_closure(g, comms), within=s)


def derived_series(s):
    chain = [s]
    while True:
        d = commutator_subgroup(chain[-1])
        if d.order == chain[-1].order:
            return chain
        chain.append(d)
        if d.order == 1:
            return chain


def is_solvable(s):
    return derived_series(s)[-1].order == 1


def is_abelian(s):
    g = s.parent
    return all(g.mul(a, b) == g.mul(b, a) for a in s.generators for b in s.generators)


# -- enumeration ---------------------------------------------------------------------

def _least_conjugate_key(s):
    return tuple(int(i) for i in s.indices())


def conjugacy_class_of_subgroup(s):
    """All conjugates, by orbit under the generators of G."""
    g = s.parent
    seen = {s.key(): s}
    queue = deque([s])
    while queue:
        k = queue.popleft()
        for t in g.generators:
            c = conjugate_set(k, t)
            if c.key() not in seen:
                seen[c.key()] = c
                queue.append(c)
    return list(seen.values())


def enumerate_subgroups(g, filter="nilpotent", up_to_conjugacy=False, bound=ENUMERATION_BOUND):
    """All nilpotent (or solvable) subgroups, by cyclic prime extension.

    Each found K is extended by elements x of N_G(K) whose image in
    N_G(K)/K has prime order; every subgroup in either class has a chain
    of such steps from 1.
    """
    if filter not in ("nilpotent", "solvable"):
        raise ValueError(f"unknown filter {filter!r}")
    if g.order > bound:
        raise BoundExceeded(f"|G| = {g.order} exceeds enumeration bound {bound}")
    g.maybe_table()
    start = trivial_subgroup(g)
    found = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for k in frontier:
            n = normalizer(k)
            covered = k.mask.copy()
            for x in np.flatnonzero(n.mask & ~k.mask):
                if covered[x]:
                    continue
                q = order_modulo(g, int(x), k)
                if prime_factors(q) != [q]:
                    continue
                cand = extend_subgroup(k, [int(x)])
                covered |= cand.mask
                if cand.key() in found:
                    continue
                if filter == "nilpotent" and not is_nilpotent(cand):
                    continue
                found[cand.key()] = cand
                nxt.append(cand)
        frontier = nxt
    subs = sorted(found.values(), key=lambda s: (s.order, _least_conjugate_key(s)))
    if not up_to_conjugacy:
        return subs
    reps = []
    done = set()
    for s in subs:
        if s.key() in done:
            continue
        cls = conjugacy_class_of_subgroup(s)
        for c in cls:
            done.add(c.key())
        reps.append(min(cls, key=_least_conjugate_key))
    return reps
