"""Exhaustively enumerated finite groups with indexed multiplication.

Every group is a :class:`GroupTable`: elements are indices ``0..order-1``
with ``0`` the identity. The workhorse is :meth:`GroupTable.right_map`,
the index permutation ``i -> i*g``; set products, conjugation and coset
computations are all built from it as numpy gathers.
"""

from __future__ import annotations

from collections import OrderedDict

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, DomainMismatch, NotNormal
from .matrices import MatrixGF, matmul
from .perms import Permutation

TABLE_LIMIT = 4096
DEFAULT_CAP = 20_000_000
MAP_CACHE_BYTES = 600 * 2**20

IDX = np.int32


class GroupTable:
    """Base class. Subclasses provide ``_right_map``, ``_mul_arrays``, ``encode``."""

    order: int
    inverse: np.ndarray
    generators: tuple
    spec = None
    name = ""

    identity = 0

    def _init_cache(self):
        self._maps = OrderedDict()
        self._map_bytes = 0
        self._table = None
        self._orders = None

    # -- maps -------------------------------------------------------------

    def right_map(self, g):
        """Array ``R`` with ``R[i] = index(i * g)``."""
        g = int(g)
        if self._table is not None:
            return self._table[:, g]
        hit = self._maps.get(g)
        if hit is not None:
            self._maps.move_to_end(g)
            return hit
        r = np.ascontiguousarray(self._right_map(g), dtype=IDX)
        r.setflags(write=False)
        self._maps[g] = r
        self._map_bytes += r.nbytes
        while self._map_bytes > MAP_CACHE_BYTES and len(self._maps) > 1:
            _, old = self._maps.popitem(last=False)
            self._map_bytes -= old.nbytes
        return r

    def left_map(self, g):
        """Array ``L`` with ``L[i] = index(g * i)``."""
        inv = self.inverse
        return inv[self.right_map(inv[int(g)])[inv]]

    def conj_map(self, g):
        """Array ``C`` with ``C[i] = index(g^-1 * i * g)``."""
        return self.right_map(g)[self.left_map(self.inverse[int(g)])]

    def mul(self, i, j):
        if self._table is not None:
            return int(self._table[i, j])
        return int(self.mul_arrays(np.array([i]), np.array([j]))[0])

    def mul_arrays(self, a, b):
        """Elementwise products of two index arrays."""
        a = np.asarray(a)
        b = np.asarray(b)
        if self._table is not None:
            return self._table[a, b]
        return self._mul_arrays(a, b)

    def product(self, *elems):
        r = 0
        for e in elems:
            r = self.mul(r, e)
        return r

    def inv(self, i):
        return int(self.inverse[i])

    def conj(self, i, g):
        """``g^-1 * i * g``."""
        return self.product(self.inverse[g], i, g)

    def power(self, i, e):
        if e < 0:
            i, e = self.inv(i), -e
        r = 0
        while e:
            if e & 1:
                r = self.mul(r, i)
            i = self.mul(i, i)
            e >>= 1
        return r

    @property
    def table(self):
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise MemoryError(f"no full table for order {self.order} > {TABLE_LIMIT}")
            cols = [np.asarray(self._right_map(j), dtype=IDX) for j in range(self.order)]
            t = np.stack(cols, axis=1)
            t.setflags(write=False)
            self._table = t
            self._maps.clear()
            self._map_bytes = 0
        return self._table

    def maybe_table(self):
        if self.order <= TABLE_LIMIT:
            return self.table
        return None

    def element_orders(self, indices=None):
        if indices is None and self._orders is not None:
            return self._orders
        idx = np.arange(self.order) if indices is None else np.asarray(indices)
        self.maybe_table()
        out = np.zeros(len(idx), dtype=np.int64)
        cur = idx.copy()
        k = 1
        pending = np.ones(len(idx), dtype=bool)
        while pending.any():
            done = pending & (cur == 0)
            out[done] = k
            pending &= ~done
            if not pending.any():
                break
            cur = self.mul_arrays(cur, idx)
            k += 1
        if indices is None:
            self._orders = out
        return out

    def element_order(self, i):
        return int(self.element_orders(np.array([i]))[0])

    @property
    def is_abelian(self):
        for a in self.generators:
            for b in self.generators:
                if self.mul(a, b) != self.mul(b, a):
                    return False
        return True

    def label(self):
        return self.spec or self.name or f"group of order {self.order}"

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<{type(self).__name__} {self.label()} |G|={self.order}>"


# -- concrete element domains ------------------------------------------------

_MULT = np.random.default_rng(0x5EED).integers(1, 2**62, size=4096, dtype=np.uint64) | np.uint64(1)


_MIX = np.uint64(0x9E3779B97F4A7C15)


class HashIndex:
    """Open-addressing hash table from uint64 keys to positions, vectorized."""

    def __init__(self, keys):
        n = len(keys)
        bits = max(4, int(2 * n - 1).bit_length())
        self.size = 1 << bits
        self.shift = np.uint64(64 - bits)
        self.keys = keys
        slots = np.full(self.size, -1, dtype=IDX)
        pending = np.arange(n, dtype=np.int64)
        pos = self._home(keys)
        while len(pending):
            s = pos[pending]
            free = slots[s] == -1
            cand, cs = pending[free], s[free]
            u, first = np.unique(cs, return_index=True)
            slots[u] = cand[first]
            placed = np.zeros(n, dtype=bool)
            placed[cand[first]] = True
            pending = pending[~placed[pending]]
            pos[pending] = (pos[pending] + 1) & (self.size - 1)
        self.slots = slots
        self.slot_keys = np.where(slots >= 0, keys[np.maximum(slots, 0)], np.uint64(0))
        self.slot_used = slots >= 0

    def _home(self, keys):
        return ((keys * _MIX) >> self.shift).astype(np.int64)

    def find(self, keys):
        """Positions of ``keys``; -1 where absent."""
        pos = self._home(keys)
        s = pos
        out = self.slots[s]
        miss = ~(self.slot_used[s] & (self.slot_keys[s] == keys))
        if not miss.any():
            return out
        out[miss] = -1
        todo = np.flatnonzero(miss & self.slot_used[s])
        pos[todo] = (pos[todo] + 1) & (self.size - 1)
        while len(todo):
            s = pos[todo]
            hit = self.slot_used[s] & (self.slot_keys[s] == keys[todo])
            out[todo[hit]] = self.slots[s[hit]]
            go_on = ~hit & self.slot_used[s]
            todo = todo[go_on]
            pos[todo] = (pos[todo] + 1) & (self.size - 1)
        return out


def _hash_rows(rows):
    h = np.zeros(rows.shape[0], dtype=np.uint64)
    for x in range(rows.shape[1]):
        col = rows[:, x].astype(np.uint64)
        col += np.uint64(1)
        col *= _MULT[x]
        h += col
    return h


class PermDomain:
    kind = "perm"

    def __init__(self, degree):
        self.degree = degree
        self.dtype = np.uint8 if degree <= 256 else np.int32

    def __eq__(self, other):
        return isinstance(other, PermDomain) and other.degree == self.degree

    def row(self, elem):
        if not isinstance(elem, Permutation) or elem.degree != self.degree:
            raise DomainMismatch(f"expected a permutation of degree {self.degree}")
        return np.array(elem.images, dtype=self.dtype)

    def identity_row(self):
        return np.arange(self.degree, dtype=self.dtype)

    def compose(self, a, b):
        """Rowwise ``a * b`` (apply a, then b); shapes broadcast on axis 0."""
        if b.shape[0] == 1:
            return b[0][a]
        if a.shape[0] == 1:
            a = np.broadcast_to(a, b.shape)
        return np.take_along_axis(b, a.astype(np.intp), axis=1)

    def decode(self, row):
        return Permutation(row.tolist())

    def encode(self, row):
        return [int(x) for x in row]


class MatrixDomain:
    kind = "matrix"

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.dtype = np.uint8

    def __eq__(self, other):
        return isinstance(other, MatrixDomain) and (other.field, other.dim) == (self.field, self.dim)

    def row(self, elem):
        if not isinstance(elem, MatrixGF) or elem.field != self.field or elem.dim != self.dim:
            raise DomainMismatch(f"expected a {self.dim}x{self.dim} matrix over {self.field}")
        if elem.det() == 0:
            raise DomainMismatch("singular matrix cannot be a group element")
        return elem.entries.ravel().astype(self.dtype)

    def identity_row(self):
        return np.eye(self.dim, dtype=self.dtype).ravel()

    def compose(self, a, b):
        d = self.dim
        prod = matmul(self.field, a.reshape(-1, d, d).astype(np.int64),
                      b.reshape(-1, d, d).astype(np.int64))
        return prod.reshape(-1, d * d).astype(self.dtype)

    def decode(self, row):
        return MatrixGF(self.field, row.astype(np.int64).reshape(self.dim, self.dim))

    def encode(self, row):
        return [int(x) for x in row]


def _domain_for(elem):
    if isinstance(elem, Permutation):
        return PermDomain(elem.degree)
    if isinstance(elem, MatrixGF):
        return MatrixDomain(elem.field, elem.dim)
    raise DomainMismatch(f"unsupported element type {type(elem).__name__}")


class ConcreteGroup(GroupTable):
    """Group of permutations or matrices stored as an element array."""

    def __init__(self, domain, elements, generators=(), name=""):
        self._init_cache()
        self.domain = domain
        self.elements = elements
        self.elements.setflags(write=False)
        self.order = len(elements)
        self.name = name
        keys = _hash_rows(elements)
        if len(np.unique(keys)) != self.order:
            raise AssertionError("element hash collision; change _MULT seed")
        self._index = HashIndex(keys)
        self.inverse = self._compute_inverse()
        self.generators = tuple(int(g) for g in generators)

    def _lookup(self, rows, check=False):
        idx = self._index.find(_hash_rows(rows))
        if check:
            ok = idx >= 0
            ok[ok] = np.all(self.elements[idx[ok]] == rows[ok], axis=1)
            return np.where(ok, idx, -1)
        return idx

    def _compute_inverse(self):
        if isinstance(self.domain, PermDomain):
            inv_rows = np.empty_like(self.elements)
            n = self.domain.degree
            rows = np.arange(self.order)[:, None]
            inv_rows[rows, self.elements.astype(np.intp)] = np.arange(n, dtype=self.elements.dtype)
            return self._lookup(inv_rows).astype(IDX)
        inv = np.empty(self.order, dtype=IDX)
        # x^-1 = x^(ord-1); powers computed for the whole array at once
        cur = self.elements
        power = {1: cur}
        k = 1
        prev_idx = np.arange(self.order)
        pending = np.ones(self.order, dtype=bool)
        ident = self.domain.identity_row()
        while pending.any():
            nxt = self.domain.compose(cur, self.elements)
            k += 1
            hit = pending & np.all(nxt == ident, axis=1)
            inv[hit] = prev_idx[hit]
            pending &= ~hit
            cur = nxt
            prev_idx = self._lookup(cur)
        del power
        inv[0] = 0
        return inv

    def _right_map(self, g):
        return self._lookup(self.domain.compose(self.elements, self.elements[g:g + 1]))

    def _mul_arrays(self, a, b):
        return self._lookup(self.domain.compose(self.elements[a], self.elements[b]))

    def index_of(self, elem):
        """Index of an element object, or ``None`` if it is not in the group."""
        row = self.domain.row(elem)[None, :]
        idx = int(self._lookup(row, check=True)[0])
        return None if idx < 0 else idx

    def element(self, i):
        return self.domain.decode(self.elements[i])

    def encode(self, i):
        return self.domain.encode(self.elements[i])


def enumerate_group(generators, cap=DEFAULT_CAP, name=""):
    """Breadth-first closure of ``generators`` (permutations or matrices).

    Element order is BFS order: identity first, then for each element in
    queue order the products with each generator in the given order.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    domain = _domain_for(generators[0])
    gen_rows = np.stack([domain.row(g) for g in generators])
    for g in generators[1:]:
        if _domain_for(g) != domain:
            raise DomainMismatch("generators live on different domains")
    ident = domain.identity_row()[None, :]
    levels = [ident]
    seen = {int(_hash_rows(ident)[0])}
    frontier = ident
    total = 1
    ng = len(gen_rows)
    while len(frontier):
        cand = np.empty((len(frontier) * ng, gen_rows.shape[1]), dtype=gen_rows.dtype)
        for j in range(ng):
            cand[j::ng] = domain.compose(frontier, gen_rows[j:j + 1])
        keys = _hash_rows(cand)
        _, first = np.unique(keys, return_index=True)
        first.sort()
        add = seen.add
        fresh = [i for i, k in zip(first.tolist(), keys[first].tolist())
                 if not (k in seen or add(k))]
        frontier = cand[fresh]
        total += len(fresh)
        if total > cap:
            raise CapExceeded(f"group order exceeds cap {cap}")
        if len(frontier):
            levels.append(frontier)
    elements = np.ascontiguousarray(np.concatenate(levels))
    group = ConcreteGroup(domain, elements, name=name)
    group.generators = tuple(int(x) for x in group._lookup(gen_rows))
    return group


# -- abstract backends -------------------------------------------------------

class TableGroup(GroupTable):
    """Group given by a full Cayley table ``table[i, j] = i*j``."""

    def __init__(self, table, generators=(), encoder=None, name=""):
        self._init_cache()
        self._table = np.ascontiguousarray(table, dtype=IDX)
        self._table.setflags(write=False)
        self.order = self._table.shape[0]
        self.inverse = np.argmax(self._table == 0, axis=1).astype(IDX)
        self.generators = tuple(int(g) for g in generators)
        self._encoder = encoder
        self.name = name

    def _right_map(self, g):
        return self._table[:, g]

    def _mul_arrays(self, a, b):
        return self._table[a, b]

    def encode(self, i):
        if self._encoder is None:
            return int(i)
        return self._encoder(int(i))


def group_from_mul(generators, mul, identity, encode=None, cap=TABLE_LIMIT * 4, name=""):
    """Enumerate a small group given hashable elements and a product function."""
    elems = [identity]
    index = {identity: 0}
    q = 0
    while q < len(elems):
        x = elems[q]
        q += 1
        for g in generators:
            y = mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                if len(elems) > cap:
                    raise CapExceeded(f"group order exceeds cap {cap}")
    n = len(elems)
    table = np.empty((n, n), dtype=IDX)
    for i, x in enumerate(elems):
        table[i] = [index[mul(x, y)] for y in elems]
    enc = None
    if encode is not None:
        enc = lambda i: encode(elems[i])  # noqa: E731
    return TableGroup(table, [index[g] for g in generators], enc, name=name)


class ProductGroup(GroupTable):
    """Direct product; index of ``(i_0, ..., i_r)`` is mixed radix, last fastest."""

    def __init__(self, factors, name=""):
        self._init_cache()
        self.factors = list(factors)
        self.orders = [f.order for f in self.factors]
        self.order = int(np.prod(self.orders))
        self.strides = []
        s = 1
        for o in reversed(self.orders):
            self.strides.append(s)
            s *= o
        self.strides.reverse()
        self.name = name or " x ".join(f.label() for f in self.factors)
        self.inverse = self._combine([f.inverse for f in self.factors])
        gens = []
        for k, f in enumerate(self.factors):
            for g in f.generators:
                gens.append(g * self.strides[k])
        self.generators = tuple(gens)

    def _combine(self, arrays):
        out = np.asarray(arrays[0], dtype=np.int64)
        for arr, o in zip(arrays[1:], self.orders[1:]):
            out = (out[:, None] * o + np.asarray(arr, dtype=np.int64)[None, :]).ravel()
        return out.astype(IDX)

    def components(self, i):
        i = np.asarray(i, dtype=np.int64)
        return [(i // s) % o for s, o in zip(self.strides, self.orders)]

    def embed(self, comps):
        return int(sum(int(c) * s for c, s in zip(comps, self.strides)))

    def _right_map(self, g):
        comps = self.components(g)
        return self._combine([f.right_map(int(c)) for f, c in zip(self.factors, comps)])

    def _mul_arrays(self, a, b):
        ca, cb = self.components(a), self.components(b)
        out = np.zeros(np.broadcast(np.asarray(a), np.asarray(b)).shape, dtype=np.int64)
        for f, x, y, s in zip(self.factors, ca, cb, self.strides):
            out += f.mul_arrays(x, y).astype(np.int64) * s
        return out.astype(IDX)

    def encode(self, i):
        return [f.encode(int(c)) for f, c in zip(self.factors, self.components(i))]


class QuotientGroup(GroupTable):
    """``G/N``; element ``k`` is the coset with least member ``reps[k]``."""

    def __init__(self, parent, reps, projection, name=""):
        self._init_cache()
        self.parent = parent
        self.reps = reps
        self.projection = projection
        self.order = len(reps)
        self.inverse = projection[parent.inverse[reps]].astype(IDX)
        gens = []
        for g in parent.generators:
            q = int(projection[g])
            if q != 0 and q not in gens:
                gens.append(q)
        self.generators = tuple(gens)
        self.name = name or f"{parent.label()} / N"

    def _right_map(self, g):
        return self.projection[self.parent.right_map(self.reps[g])[self.reps]]

    def _mul_arrays(self, a, b):
        return self.projection[self.parent.mul_arrays(self.reps[a], self.reps[b])]

    def section(self, k):
        return int(self.reps[k])

    def encode(self, i):
        return self.parent.encode(int(self.reps[i]))


class InducedGroup(GroupTable):
    """A subgroup regarded as a group; local index ``k`` is ``members[k]``."""

    def __init__(self, parent, members, generators=(), name=""):
        self._init_cache()
        self.parent = parent
        self.members = np.asarray(members, dtype=IDX)
        if self.members[0] != 0:
            raise ValueError("members must be sorted and contain the identity")
        self.order = len(self.members)
        self.position = np.full(parent.order, -1, dtype=IDX)
        self.position[self.members] = np.arange(self.order, dtype=IDX)
        self.inverse = self.position[parent.inverse[self.members]]
        self.generators = tuple(int(self.position[g]) for g in generators)
        self.name = name or f"subgroup of {parent.label()}"

    def _right_map(self, g):
        return self.position[self.parent.right_map(self.members[g])[self.members]]

    def _mul_arrays(self, a, b):
        return self.position[self.parent.mul_arrays(self.members[a], self.members[b])]

    def lift(self, k):
        return self.members[k]

    def encode(self, i):
        return self.parent.encode(int(self.members[i]))


# -- whole-group operations ---------------------------------------------------

def orbit_labels(order, maps):
    """Connected components of the graph with edges ``i -> m[i]`` for each map."""
    if not maps:
        return np.arange(order), order
    src = np.concatenate([np.arange(order)] * len(maps))
    dst = np.concatenate([np.asarray(m) for m in maps])
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(order, order))
    n, labels = connected_components(graph, directed=True, connection="weak")
    # relabel so components are numbered by their least member
    first = np.full(n, order, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(order))
    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(n)
    return rank[labels], n


def conjugacy_classes(g):
    """Partition of ``range(order)`` into classes, ordered by least member."""
    labels, n = orbit_labels(g.order, [g.conj_map(x) for x in g.generators])
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n + 1))
    return [order[bounds[k]:bounds[k + 1]] for k in range(n)]


def quotient_group(g, n):
    """``(G/N, projection, section)`` for a normal subgroup ``n``.

    ``n`` needs ``mask`` and ``generators`` attributes (a SubgroupSet).
    """
    mask = n.mask
    for x in n.generators:
        for s in g.generators:
            if not mask[g.conj(x, s)]:
                raise NotNormal("subgroup is not normal")
    labels, count = orbit_labels(g.order, [g.right_map(x) for x in n.generators])
    reps = np.full(count, g.order, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(g.order))
    reps = reps.astype(IDX)
    projection = labels.astype(IDX)
    q = QuotientGroup(g, reps, projection)
    q.kernel = n
    return q, projection, q.section
