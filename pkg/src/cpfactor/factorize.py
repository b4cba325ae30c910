"""Minimal conjugate-product factorizations ``G = A^{x1} ... A^{xk}``.

The exact solver works on (A, A)-double cosets. Since
``A g1 A g2 A ... g_{k-1} A = A A^{g1^-1} A^{(g1 g2)^-1} ... (g1...g_{k-1})``
a length-k factorization is a word of k-1 double cosets whose product is
all of G. Products of unions of double cosets are again unions of double
cosets, so a breadth-first search over coset-id bit-masks (the boolean
"support table") finds the shortest word.

Double-coset tables can be cached on disk. File layout (little endian)::

    magic      4 bytes   b"CPDC"
    version    u16       CACHE_VERSION
    grammar    u16       spec grammar version
    order      u32       |G|
    ncosets    u32       number of double cosets
    subgroup   16 bytes  bit-vector hash of A
    reps       int32[ncosets]
    coset_of   int32[order]
    sizes      int32[ncosets]
    support    ncosets*ncosets masks, ceil(ncosets/8) bytes each, row-major (i, j)
"""

from __future__ import annotations

import math
import os
import struct
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BoundExceeded, HypothesisFailed
from .groups import orbit_labels, quotient_group
from .specs import GRAMMAR_VERSION, spec_hash
from .subgroups import (ENUMERATION_BOUND, ElementSet, SubgroupSet, conjugate_indices,
                        enumerate_subgroups, intersection, is_nilpotent, is_normal,
                        is_solvable, normal_closure, normalizer, p_part, prime_factors,
                        saturate_right, setwise_product, sylow_subgroup, whole_group)

CACHE_VERSION = 1
CACHE_ENV = "CPFACTOR_CACHE"
MAX_STATES = 1 << 24
PRUNE_LIMIT = 4000
ORACLE_BOUND = 2000

_cache_enabled = True


def set_cache_enabled(flag):
    global _cache_enabled
    _cache_enabled = bool(flag)


def cache_dir():
    if not _cache_enabled:
        return None
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


class _Infinity:
    """The value of a factorization length that does not exist."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("cpfactor-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def to_json(self):
        return "inf"


INFINITY = _Infinity()


def jsonable(v):
    return v.to_json() if v is INFINITY else v


def vmin(a, b):
    if a is INFINITY:
        return b
    if b is INFINITY:
        return a
    return min(a, b)


# -- double cosets ------------------------------------------------------------

@dataclass
class DoubleCosetTable:
    group: object
    base: SubgroupSet
    reps: np.ndarray
    coset_of: np.ndarray
    sizes: np.ndarray
    support: list  # support[i][j] is an int bit-mask over coset ids

    @property
    def count(self):
        return len(self.reps)

    def members(self, i):
        return np.flatnonzero(self.coset_of == i)

    def mask_of(self, bits):
        ids = [i for i in range(self.count) if bits >> i & 1]
        return np.isin(self.coset_of, ids)

    def ids_of(self, mask):
        out = 0
        for i in np.unique(self.coset_of[np.asarray(mask, dtype=bool)]):
            out |= 1 << int(i)
        return out


def _coset_decomposition(g, a):
    maps = [g.right_map(x) for x in a.generators] + [g.left_map(x) for x in a.generators]
    labels, n = orbit_labels(g.order, maps)
    reps = np.full(n, g.order, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(g.order))
    sizes = np.bincount(labels, minlength=n)
    return reps.astype(np.int32), labels.astype(np.int32), sizes.astype(np.int32)


def double_coset_table(g, a, use_cache=True):
    """(A, A)-double cosets of G with the boolean product-support table."""
    path = _cache_path(g, a) if use_cache else None
    if path is not None and path.exists():
        t = _load_table(path, g, a)
        if t is not None:
            return t
    reps, coset_of, sizes = _coset_decomposition(g, a)
    n = len(reps)
    members = [np.flatnonzero(coset_of == i) for i in range(n)]
    support = [[0] * n for _ in range(n)]
    for j in range(n):
        rmap = g.right_map(int(reps[j]))
        for i in range(n):
            ids = np.unique(coset_of[rmap[members[i]]])
            bits = 0
            for k in ids.tolist():
                bits |= 1 << k
            support[i][j] = bits
    table = DoubleCosetTable(g, a, reps, coset_of, sizes, support)
    if path is not None:
        _save_table(path, table)
    return table


def _cache_path(g, a):
    d = cache_dir()
    spec = getattr(g, "spec", None)
    if d is None or not spec:
        return None
    return d / f"{spec_hash(spec)}_{a.key().hex()}.cpdc"


_HEADER = struct.Struct("<4sHHII16s")


def _save_table(path, t):
    n = t.count
    nb = (n + 7) // 8
    parts = [_HEADER.pack(b"CPDC", CACHE_VERSION, GRAMMAR_VERSION, t.group.order, n, t.base.key()),
             t.reps.astype("<i4").tobytes(), t.coset_of.astype("<i4").tobytes(),
             t.sizes.astype("<i4").tobytes()]
    for i in range(n):
        for j in range(n):
            parts.append(t.support[i][j].to_bytes(nb, "little"))
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(b"".join(parts))
    tmp.replace(path)


def _load_table(path, g, a):
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        return None
    magic, ver, gram, order, n, key = _HEADER.unpack_from(data)
    if (magic, ver, gram, order, key) != (b"CPDC", CACHE_VERSION, GRAMMAR_VERSION, g.order, a.key()):
        return None
    off = _HEADER.size
    reps = np.frombuffer(data, "<i4", n, off).astype(np.int32)
    off += 4 * n
    coset_of = np.frombuffer(data, "<i4", order, off).astype(np.int32)
    off += 4 * order
    sizes = np.frombuffer(data, "<i4", n, off).astype(np.int32)
    off += 4 * n
    nb = (n + 7) // 8
    if len(data) != off + n * n * nb:
        return None
    support = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            support[i][j] = int.from_bytes(data[off:off + nb], "little")
            off += nb
    return DoubleCosetTable(g, a, reps, coset_of, sizes, support)


# -- witnesses ----------------------------------------------------------------

@dataclass
class FactorizationWitness:
    group: object
    base: SubgroupSet
    conjugators: list
    provenance: str
    verified: object = None
    timing_ms: float = None
    notes: dict = field(default_factory=dict)

    @property
    def k(self):
        return len(self.conjugators)

    def to_json(self):
        g = self.group
        return {
            "group_spec": getattr(g, "spec", None) or g.label(),
            "base_generators": [g.encode(x) for x in self.base.generators],
            "base_hash": self.base.key().hex(),
            "conjugators": [g.encode(int(x)) for x in self.conjugators],
            "k": self.k,
            "provenance": self.provenance,
            "verified": self.verified,
            "timing_ms": self.timing_ms,
        }


def product_of_conjugates(g, base, conjugators, stop_when_full=True):
    """The set ``base^{x1} base^{x2} ... base^{xk}`` as a bit-vector."""
    mask = np.zeros(g.order, dtype=bool)
    if not conjugators:
        mask[0] = True
        return mask
    first = int(conjugators[0])
    mask[conjugate_indices(g, base.indices(), first)] = True
    for x in conjugators[1:]:
        if stop_when_full and mask.all():
            break
        x = int(x)
        # S * x^-1 A x
        if x:
            mask = mask[g.right_map(x)]
        mask = saturate_right(g, mask, base.generators)
        if x:
            mask = mask[g.right_map(g.inverse[x])]
    return mask


def verify_witness(w):
    """Recompute the product; True iff it is the whole group."""
    t0 = time.perf_counter()
    mask = product_of_conjugates(w.group, w.base, w.conjugators)
    w.verified = bool(mask.all())
    w.timing_ms = round((time.perf_counter() - t0) * 1000, 3)
    return w.verified


def conjugators_from_word(g, reps):
    """Conjugators ``1, g1^-1, (g1 g2)^-1, ...`` for the word ``A g1 A g2 A ...``."""
    out = [0]
    acc = 0
    for r in reps:
        acc = g.mul(acc, int(r))
        out.append(int(g.inverse[acc]))
    return out


# -- exact solver ------------------------------------------------------------------

@dataclass
class GammaResult:
    value: object
    witness: FactorizationWitness = None
    word: list = None
    table: DoubleCosetTable = None
    states: int = 0


def _byte_tables(support, n):
    nbytes = (n + 7) // 8
    tables = []
    for j in range(n):
        per_chunk = []
        for c in range(nbytes):
            t = [0] * 256
            for b in range(1, 256):
                low = b & -b
                i = 8 * c + low.bit_length() - 1
                t[b] = t[b & (b - 1)] | (support[i][j] if i < n else 0)
            per_chunk.append(t)
        tables.append(per_chunk)
    return tables


def _prune(level):
    """Drop states contained in another state of the same level."""
    if len(level) > PRUNE_LIMIT:
        return level
    order = sorted(range(len(level)), key=lambda i: -bin(level[i]).count("1"))
    kept = []
    for i in order:
        s = level[i]
        if not any(s & ~t == 0 for t in kept):
            kept.append(s)
    keep = set(kept)
    return [s for s in level if s in keep]


def gamma_cp_exact(g, a, table=None, verify=True, provenance="gamma_cp_exact"):
    """Least k with G a product of k conjugates of A, or INFINITY."""
    if a.order == g.order:
        w = FactorizationWitness(g, a, [0], provenance)
        if verify:
            verify_witness(w)
        return GammaResult(1, w, [])
    if normal_closure(a).order != g.order:
        return GammaResult(INFINITY)
    table = table or double_coset_table(g, a)
    n = table.count
    full = (1 << n) - 1
    tables = _byte_tables(table.support, n)

    def step(s, j):
        r = 0
        chunks = tables[j]
        c = 0
        while s:
            b = s & 255
            if b:
                r |= chunks[c][b]
            s >>= 8
            c += 1
        return r

    parent = {}
    level = []
    for j in range(1, n):
        s = 1 << j
        if s not in parent:
            parent[s] = (None, j)
            level.append(s)
    found = full if full in parent else None
    while found is None and level:
        level = _prune(level)
        nxt = []
        for s in level:
            for j in range(1, n):
                t = step(s, j)
                if t not in parent:
                    parent[t] = (s, j)
                    nxt.append(t)
                    if t == full:
                        found = t
                        break
            if found is not None:
                break
        if len(parent) > MAX_STATES:
            raise BoundExceeded(f"more than {MAX_STATES} support states visited")
        level = nxt
    if found is None:
        return GammaResult(INFINITY, table=table, states=len(parent))
    word = []
    s = found
    while s is not None:
        prev, j = parent[s]
        word.append(j)
        s = prev
    word.reverse()
    k = len(word) + 1
    if k < 3:
        raise AssertionError("proper subgroup factorization shorter than 3")
    conj = conjugators_from_word(g, [table.reps[j] for j in word])
    w = FactorizationWitness(g, a, conj[:k], provenance)
    if verify:
        verify_witness(w)
        if not w.verified:
            raise AssertionError("solver witness failed verification")
    return GammaResult(k, w, word, table, len(parent))


def gamma_cp_oracle(g, a, k_max=12, bound=ORACLE_BOUND):
    """Brute force over words of double-coset representatives, raw products only."""
    if g.order > bound:
        raise BoundExceeded(f"|G| = {g.order} exceeds oracle bound {bound}")
    if a.order == g.order:
        return 1
    reps, _, _ = _coset_decomposition(g, a)
    start = np.array(a.mask)
    seen = {np.packbits(start).tobytes()}
    level = [start]
    k = 1
    while level:
        k += 1
        if k > k_max:
            raise BoundExceeded(f"no factorization of length <= {k_max}")
        nxt = []
        for s in level:
            for r in reps[1:]:
                t = s[g.right_map(g.inverse[int(r)])]
                t = saturate_right(g, t, a.generators)
                if t.all():
                    return k
                key = np.packbits(t).tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(t)
        level = nxt
    return INFINITY


# -- derived quantities -----------------------------------------------------------

def gamma_cp_p(g, p):
    """Length using conjugates of a (solvable) Sylow p-normalizer; INFINITY if not solvable."""
    if g.order % p:
        raise ValueError(f"{p} does not divide |G| = {g.order}")
    n = normalizer(sylow_subgroup(g, p))
    if not is_solvable(n):
        return GammaResult(INFINITY), n
    return gamma_cp_exact(g, n, provenance=f"sylow-normalizer:{p}"), n


@dataclass
class SpecialReport:
    value: object
    base: SubgroupSet
    prime: int = None
    exact: bool = False
    solvable: bool = True
    self_normalizing: bool = True
    aut_condition: str = "certified by Sylow-normalizer provenance"
    witness: FactorizationWitness = None
    per_prime: dict = field(default_factory=dict)

    def to_json(self):
        return {"value": jsonable(self.value), "prime": self.prime, "exact": self.exact,
                "base_order": self.base.order if self.base is not None else None,
                "solvable": self.solvable, "self_normalizing": self.self_normalizing,
                "aut_condition": self.aut_condition,
                "per_prime": {str(k): jsonable(v) for k, v in self.per_prime.items()}}


def gamma_cp_ss_upper(g, sweep=True):
    """Upper bound via Sylow normalizers; exact when 3 or confirmed by a sweep."""
    whole = whole_group(g)
    if is_solvable(whole):
        w = FactorizationWitness(g, whole, [0], "solvable-whole")
        verify_witness(w)
        return SpecialReport(1, whole, exact=True, witness=w, aut_condition="trivial: A = G")
    best = SpecialReport(INFINITY, None)
    for p in prime_factors(g.order):
        res, n = gamma_cp_p(g, p)
        best.per_prime[p] = res.value
        if res.value is not INFINITY and (best.value is INFINITY or res.value < best.value):
            best = SpecialReport(res.value, n, p, witness=res.witness, per_prime=best.per_prime,
                                 self_normalizing=normalizer(n).order == n.order)
    if best.value == 3:
        best.exact = True
    elif sweep and g.order <= ENUMERATION_BOUND:
        low = best.value
        for s in enumerate_subgroups(g, "solvable", up_to_conjugacy=True):
            if s.order == g.order or normalizer(s).order != s.order:
                continue
            r = gamma_cp_exact(g, s, verify=False)
            low = vmin(low, r.value)
        best.exact = low == best.value
    return best


def _heuristic_candidates(g, filt):
    from .structure import normal_lattice, solvable_radical

    cands = []
    for p in prime_factors(g.order):
        s = sylow_subgroup(g, p)
        if filt == "nilpotent":
            cands.append(s)
            continue
        n = normalizer(s)
        cands.append(n)
        try:
            lat = normal_lattice(g)
        except BoundExceeded:
            continue
        r = solvable_radical(g, lat)
        if r.order > 1:
            from .structure import normal_join

            cands.append(normal_join(r, n) if is_normal(r) else n)
        for m in lat.entries:
            if 1 < m.order < g.order:
                inner = normalizer(intersection(s, m), within=m)
                cands.append(normalizer(inner))
    keep = {}
    for c in cands:
        if c.order < g.order and (filt == "solvable" and is_solvable(c) or
                                  filt == "nilpotent" and is_nilpotent(c)):
            keep.setdefault(c.key(), c)
    return sorted(keep.values(), key=lambda s: -s.order)


def _gamma_filtered_exact(g, filt, bound=ENUMERATION_BOUND):
    pred = is_nilpotent if filt == "nilpotent" else is_solvable
    whole = whole_group(g)
    if pred(whole):
        return 1, whole, True
    best, base = INFINITY, None
    if g.order > bound:
        for c in _heuristic_candidates(g, filt):
            if normal_closure(c).order != g.order:
                continue
            r = gamma_cp_exact(g, c, verify=False)
            if r.value is not INFINITY and (best is INFINITY or r.value < best):
                best, base = r.value, c
            if best == 3:
                return 3, base, True
        raise BoundExceeded(f"|G| = {g.order} exceeds enumeration bound {bound} and the "
                            f"structural candidates give only {best}")
    subs = enumerate_subgroups(g, filt, up_to_conjugacy=True, bound=bound)
    for s in sorted(subs, key=lambda s: -s.order):
        if s.order == g.order or normal_closure(s).order != g.order:
            continue
        r = gamma_cp_exact(g, s, verify=False)
        if r.value is not INFINITY and (best is INFINITY or r.value < best):
            best, base = r.value, s
        if best == 3:
            break
    return best, base, True


def gamma_cp_n_exact(g, bound=ENUMERATION_BOUND):
    """``(value, base)`` minimizing over nilpotent A."""
    v, base, _ = _gamma_filtered_exact(g, "nilpotent", bound)
    return v, base


def gamma_cp_s_exact(g, bound=ENUMERATION_BOUND):
    """``(value, base)`` minimizing over solvable A."""
    v, base, _ = _gamma_filtered_exact(g, "solvable", bound)
    return v, base


# -- bound calculus -------------------------------------------------------------------

@dataclass
class ToolReport:
    tool: str
    lhs: object
    rhs: object
    relation: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"tool": self.tool, "lhs": jsonable(self.lhs), "rhs": jsonable(self.rhs),
                "relation": self.relation, "pass": self.passed,
                "detail": {k: jsonable(v) for k, v in self.detail.items()}}


def _mul(a, b):
    if a is INFINITY or b is INFINITY:
        return INFINITY
    return a * b


def tool_a(g, a, p):
    """``gamma_p(G) <= gamma^A(G) * gamma_p(A)`` when A contains a Sylow p-subgroup."""
    if p_part(a.order, p) != p_part(g.order, p):
        raise HypothesisFailed("a", "A does not contain a Sylow p-subgroup of G")
    gp = gamma_cp_p(g, p)[0].value
    ga = gamma_cp_exact(g, a, verify=False).value
    ap = gamma_cp_p(a.as_group(), p)[0].value
    if INFINITY in (gp, ga, ap):
        raise HypothesisFailed("a", "one of the three quantities does not exist")
    rhs = _mul(ga, ap)
    return ToolReport("a", gp, rhs, "<=", gp <= rhs,
                      {"gamma_p(G)": gp, "gamma_A(G)": ga, "gamma_p(A)": ap})


def tool_c(g, n, p):
    """``gamma_p(G) = gamma_p(G/N)`` for solvable normal N inside a Sylow p-normalizer."""
    if not is_normal(n):
        raise HypothesisFailed("c", "N is not normal in G")
    np_ = normalizer(sylow_subgroup(g, p))
    if not n <= np_:
        raise HypothesisFailed("c", "N is not contained in N_G(P)")
    if not is_solvable(n):
        raise HypothesisFailed("c", "N is not solvable")
    lhs = gamma_cp_p(g, p)[0].value
    q, _, _ = quotient_group(g, n)
    rhs = gamma_cp_p(q, p)[0].value if q.order % p == 0 else 1
    return ToolReport("c", lhs, rhs, "==", lhs == rhs)


def _check_p_subgroups(g, p, subs, clause):
    for s in subs:
        if s.order != p_part(s.order, p) or not isinstance(s, SubgroupSet):
            raise HypothesisFailed(clause, "a factor is not a p-subgroup")


def _product_of_subgroups(g, subs):
    acc = ElementSet(g, subs[0].mask)
    for s in subs[1:]:
        acc = setwise_product(acc, s)
    return acc


def tool_e(g, p, subgroups):
    """If G is a product of n p-subgroups and N_G(P) is solvable then gamma_p(G) <= n."""
    _check_p_subgroups(g, p, subgroups, "e")
    if not _product_of_subgroups(g, subgroups).is_full():
        raise HypothesisFailed("e", "the p-subgroups do not multiply to G")
    if not is_solvable(normalizer(sylow_subgroup(g, p))):
        raise HypothesisFailed("e", "N_G(P) is not solvable")
    lhs = gamma_cp_p(g, p)[0].value
    n = len(subgroups)
    return ToolReport("e", lhs, n, "<=", lhs <= n)


def tool_f(g, p, normal, subgroups):
    """As tool_e with a normal N = product of n p-subgroups and G/N a p-group."""
    if not is_normal(normal):
        raise HypothesisFailed("f", "N is not normal in G")
    _check_p_subgroups(g, p, subgroups, "f")
    prod = _product_of_subgroups(g, subgroups)
    if not np.array_equal(prod.mask, normal.mask):
        raise HypothesisFailed("f", "the p-subgroups do not multiply to N")
    idx = g.order // normal.order
    if idx != p_part(idx, p):
        raise HypothesisFailed("f", "G/N is not a p-group")
    if not is_solvable(normalizer(sylow_subgroup(g, p))):
        raise HypothesisFailed("f", "N_G(P) is not solvable")
    lhs = gamma_cp_p(g, p)[0].value
    n = len(subgroups)
    return ToolReport("f", lhs, n, "<=", lhs <= n)


@dataclass
class InequalityReport:
    gamma_s_g: object
    gamma_ss_n_upper: object
    gamma_ss_n_exact: bool
    gamma_s_quotient: object
    passed: bool

    def to_json(self):
        return {"gamma_s(G)": jsonable(self.gamma_s_g),
                "gamma_ss(N)": jsonable(self.gamma_ss_n_upper),
                "gamma_ss(N)_exact": self.gamma_ss_n_exact,
                "gamma_s(G/N)": jsonable(self.gamma_s_quotient),
                "pass": self.passed}


def normal_split_inequality(g, n):
    """``gamma_s(G) <= gamma_ss(N) + gamma_s(G/N)`` for normal N.

    gamma_ss(N) is an upper bound unless flagged exact; the inequality with
    the upper bound is implied by (and weaker than) the exact one.
    """
    if not is_normal(n):
        raise HypothesisFailed("normal-split", "N is not normal in G")
    lhs, _ = gamma_cp_s_exact(g)
    ss = gamma_cp_ss_upper(n.as_group())
    if n.order == g.order:
        quot = 1
    else:
        q, _, _ = quotient_group(g, n)
        quot, _ = gamma_cp_s_exact(q)
    rhs = INFINITY if INFINITY in (ss.value, quot) else ss.value + quot
    return InequalityReport(lhs, ss.value, ss.exact, quot, lhs <= rhs)


def socle_sum_bound(g):
    """Check ``gamma_s(G) <= 1 + sum_i gamma_ss(T_i)`` over socle-series layers."""
    from .structure import socle_series, normal_lattice

    report = socle_series(g)
    total = 1
    per_layer = []
    for layer in report.layers:
        if layer.kind != "socle":
            continue
        best = 0
        per_layer.append(layer.factor_orders)
        q = _layer_group(g, report, layer)
        for f in normal_lattice(q).minimal_normals():
            v = gamma_cp_ss_upper(f.as_group()).value
            best = max(best, v)
        total += best
    lhs, _ = gamma_cp_s_exact(g)
    return {"gamma_s": lhs, "rhs": total, "m": report.m, "pass": lhs <= total,
            "layers": per_layer}


def _layer_group(g, report, layer):
    """N_i = H_{2i}/H_{2i-1} as a group."""
    idx = report.layers.index(layer)
    below = report.layers[idx - 1].subgroup if idx > 0 else None
    top = layer.subgroup.as_group()
    if below is None or below.order == 1:
        return top
    from .structure import restrict_to

    q, _, _ = quotient_group(top, restrict_to(top, below))
    return q


def log_bound(index, c=3 / math.log2(5)):
    """``1 + c log2 index`` with the affine constant by default."""
    return 1 + c * math.log2(index) if index > 1 else 1.0
