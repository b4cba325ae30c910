"""Symmetric and alternating groups as short products of Sylow 2-subgroups.

A Sylow 2-subgroup of ``S_n`` is described by a *layout*: a list of point
blocks of distinct power-of-two sizes, largest first.  The subgroup is the
iterated wreath product acting on each block by halving.  Every layout is a
conjugate of the standard one, whose blocks are contiguous runs taken from
the binary expansion of ``n``; the conjugator sends position ``j`` of the
standard ordering to position ``j`` of the layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import UnsupportedParameter, VerificationFailed
from .factorize import FactorizationWitness, product_of_conjugates, verify_witness
from .perms import Permutation
from .specs import build_group
from .subgroups import subgroup_closure

VERIFY_LIMIT = 10


def merge_blocks(blocks):
    """Merge equal-sized blocks pairwise until all sizes differ; largest first."""
    pool = [list(b) for b in blocks if b]
    while True:
        pool.sort(key=len, reverse=True)
        for i in range(len(pool) - 1):
            if len(pool[i]) == len(pool[i + 1]):
                pool[i] = pool[i] + pool.pop(i + 1)
                break
        else:
            return pool


def standard_layout(n, offset=0):
    blocks, start = [], offset
    for a in reversed(range(n.bit_length())):
        if n >> a & 1:
            blocks.append(list(range(start, start + (1 << a))))
            start += 1 << a
    return blocks


def ordering(layout):
    return [x for b in layout for x in b]


def layout_generators(layout, degree):
    """Permutation generators of the Sylow 2-subgroup with this layout."""
    gens = []
    for block in layout:
        size = len(block)
        for j in range(1, size.bit_length()):
            img = list(range(degree))
            half = 1 << (j - 1)
            for t in range(1 << j):
                img[block[t]] = block[t ^ half]
            gens.append(Permutation(img))
    return gens


def layout_conjugator(layout):
    """``x`` with ``P_std^x`` equal to the layout subgroup: ``(j)x = ordering[j]``."""
    return Permutation(ordering(layout))


def _shift(layout, d):
    return [[x + d for x in b] for b in layout]


@dataclass
class Sylow2Factorization:
    n: int
    layouts: list
    trace: list = field(default_factory=list)

    @property
    def length(self):
        return len(self.layouts)


def _sym_layouts(n, trace, depth=0):
    """Layouts whose subgroups multiply (in order) to ``S_n`` on ``0..n-1``."""
    pad = "  " * depth
    if n <= 2:
        trace.append(f"{pad}S{n}: 2-group")
        return [standard_layout(n)]
    if n % 2:
        m, k = n, n.bit_length() - 1
        trace.append(f"{pad}S{m} = Stab({m - 1}) Q P")
        inner = _sym_layouts(m - 1, trace, depth + 1)
        stab = [merge_blocks(lay + [[m - 1]]) for lay in inner]
        rot = [(j + m - (1 << k)) % m for j in range(m)]
        q = [[rot[x] for x in b] for b in standard_layout(m)]
        return stab + [merge_blocks(q), standard_layout(m)]
    h = n // 2
    trace.append(f"{pad}S{n} = B (S{h} x S{h}) B")
    inner = _sym_layouts(h, trace, depth + 1)
    pairs = merge_blocks([[b, h + b] for b in range(h)])
    mid = [merge_blocks(lay + _shift(lay, h)) for lay in inner]
    return [pairs] + mid + [pairs]


def sym_factor_layouts(n):
    if n < 2:
        raise UnsupportedParameter("n must be at least 2")
    trace = []
    return Sylow2Factorization(n, _sym_layouts(n, trace), trace)


def sym_length(n):
    """Length of the symmetric construction, without building any group."""
    if n <= 2:
        return 1
    if n % 2:
        return sym_length(n - 1) + 2
    return sym_length(n // 2) + 2


def _check_layout(layout, n):
    pts = sorted(ordering(layout))
    if pts != list(range(n)):
        raise VerificationFailed(f"layout is not a partition of 0..{n - 1}")
    sizes = [len(b) for b in layout]
    if sizes != sorted(set(sizes), reverse=True) or any(s & (s - 1) for s in sizes):
        raise VerificationFailed(f"bad block sizes {sizes}")


def symmetric_sylow2(n, verify=None):
    """Witness ``S_n = P^{x_1} ... P^{x_k}`` with ``P`` a Sylow 2-subgroup."""
    fac = sym_factor_layouts(n)
    for lay in fac.layouts:
        _check_layout(lay, n)
    verify = n <= VERIFY_LIMIT if verify is None else verify
    if not verify:
        return None, fac
    g = build_group(f"sym:{n}")
    base = subgroup_closure(g, [g.index_of(p) for p in layout_generators(standard_layout(n), n)])
    conj = [g.index_of(layout_conjugator(lay)) for lay in fac.layouts]
    w = FactorizationWitness(g, base, conj, "sylow2:symmetric")
    w.notes["trace"] = fac.trace
    w.notes["bound"] = 4 * math.log2(n)
    if not verify_witness(w):
        raise VerificationFailed(f"S{n} Sylow-2 witness does not cover the group")
    return w, fac


# -- alternating groups --------------------------------------------------------------

def two_set_stabilizer(g, pts):
    """Setwise stabilizer of ``pts`` in the alternating permutation group ``g``."""
    n = g.domain.degree
    a, b = pts
    rest = [x for x in range(n) if x not in pts]
    gens = []
    for i in range(len(rest) - 1):
        # odd moves on the rest are paired with the swap of the two points
        img = list(range(n))
        img[rest[i]], img[rest[i + 1]] = rest[i + 1], rest[i]
        img[a], img[b] = b, a
        gens.append(g.index_of(Permutation(img)))
    return subgroup_closure(g, gens)


def alternating_triple(n):
    """Check ``A_n = H1 H2 H1`` for the stabilizers of ``{0,1}`` and ``{n-2,n-1}``."""
    g = build_group(f"alt:{n}")
    h1 = two_set_stabilizer(g, (0, 1))
    x = g.index_of(Permutation.from_cycles(n, [[0, n - 2], [1, n - 1]]))
    mask = product_of_conjugates(g, h1, [0, x, 0], stop_when_full=False)
    return bool(mask.all()), h1.order, g


def even_part(gens):
    """Schreier generators for the even elements of the group generated by ``gens``."""
    odd = [p for p in gens if p.sign() < 0]
    if not odd:
        return list(gens)
    t = odd[0]
    ti = t.inverse()
    out = []
    for s in gens:
        out += [s, t * s * ti] if s.sign() > 0 else [s * ti, t * s]
    return out


def _even_conjugator(layout, n):
    x = layout_conjugator(layout)
    if x.sign() < 0:
        x = Permutation.from_cycles(n, [[0, 1]]) * x
    return x


def alt_factor_layouts(n):
    if n < 6:
        raise UnsupportedParameter("the alternating construction needs n >= 6")
    inner = sym_factor_layouts(n - 2)
    h1 = [merge_blocks(_shift(lay, 2) + [[0, 1]]) for lay in inner.layouts]
    swap = {0: n - 2, 1: n - 1, n - 2: 0, n - 1: 1}
    h2 = [[[swap.get(x, x) for x in b] for b in lay] for lay in h1]
    trace = [f"A{n} = H1 H2 H1 with H_i ~ S{n - 2}"] + ["  " + t for t in inner.trace]
    return Sylow2Factorization(n, h1 + h2 + h1, trace)


def alt_length(n):
    return 3 * sym_length(n - 2)


def alternating_sylow2(n, verify=None):
    """Witness ``A_n = Q^{x_1} ... Q^{x_k}`` with ``Q`` a Sylow 2-subgroup of ``A_n``."""
    fac = alt_factor_layouts(n)
    verify = n <= VERIFY_LIMIT if verify is None else verify
    if not verify:
        return None, fac
    g = build_group(f"alt:{n}")
    base = subgroup_closure(g, [g.index_of(p) for p in even_part(layout_generators(standard_layout(n), n))])
    conj = [g.index_of(_even_conjugator(lay, n)) for lay in fac.layouts]
    w = FactorizationWitness(g, base, conj, "sylow2:alternating")
    w.notes["trace"] = fac.trace
    w.notes["bound"] = 12 * math.log2(n)
    if not verify_witness(w):
        raise VerificationFailed(f"A{n} Sylow-2 witness does not cover the group")
    return w, fac
