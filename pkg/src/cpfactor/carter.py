"""Solvable groups as short products of conjugates of a Carter subgroup."""

from __future__ import annotations

import math

import numpy as np

from .affine import C_A, affine_datum, affine_factorization
from .errors import NotSimple, NotSolvable, VerificationFailed
from .factorize import FactorizationWitness, verify_witness
from .groups import ProductGroup, quotient_group
from .structure import (carter_subgroup, minimal_normal_choice, normal_lattice, preimage,
                        restrict_to)
from .subgroups import (SubgroupSet, conjugate_set, core, is_nilpotent, is_solvable,
                        normalizer, subgroup_from_mask, whole_group)


def _image(q, proj, s):
    mask = np.zeros(q.order, dtype=bool)
    mask[proj[s.indices()]] = True
    return subgroup_from_mask(q, mask, check=False)


def _factor(g, c, trace, depth):
    """Conjugators ``x_i`` in ``g`` with ``g = c^{x_1} ... c^{x_k}``."""
    pad = "  " * depth
    if c.order == g.order:
        trace.append(f"{pad}|G| = {g.order}: nilpotent, length 1")
        return [0]
    n = minimal_normal_choice(g, normal_lattice(g))
    q, proj, _ = quotient_group(g, n)
    trace.append(f"{pad}|G| = {g.order}: quotient by minimal normal of order {n.order}")
    xbar = _factor(q, _image(q, proj, c), trace, depth + 1)
    xs = [q.section(x) for x in xbar]
    if len(xs) > 1:
        ck = conjugate_set(c, xs[-1])
        d = preimage(q, proj, _image(q, proj, ck))
        trace.append(f"{pad}recurse into C^x N of order {d.order}")
        dg = d.as_group()
        ys = _factor(dg, restrict_to(dg, ck), trace, depth + 1)
        return xs[:-1] + [g.mul(xs[-1], int(dg.members[y])) for y in ys]
    el = core(c)
    if el.order > 1:
        q2, proj2, _ = quotient_group(g, el)
        trace.append(f"{pad}G = CN; quotient by core(C) of order {el.order}")
        xbar = _factor(q2, _image(q2, proj2, c), trace, depth + 1)
        return [q2.section(x) for x in xbar]
    trace.append(f"{pad}G = CN primitive: affine step with |V| = {n.order}, |H| = {c.order}")
    d = affine_datum(g, n, c)
    return affine_factorization(d, verify=False).conjugators


def carter_bound(index):
    return 1 + C_A * math.log2(index)


def carter_factorization(g, carter=None, seed=None, verify=True):
    """Witness ``G = C^{x_1} ... C^{x_k}`` with ``k <= 1 + (3/log2 5) log2 |G:C|``."""
    whole = whole_group(g)
    if not is_solvable(whole):
        raise NotSolvable("Carter factorizations need a solvable group")
    c = carter if carter is not None else carter_subgroup(g, seed).subgroup
    if not (is_nilpotent(c) and normalizer(c).order == c.order):
        raise VerificationFailed("base is not a Carter subgroup")
    trace = []
    conj = _factor(g, c, trace, 0)
    w = FactorizationWitness(g, c, conj, "carter")
    w.notes["trace"] = trace
    w.notes["bound"] = carter_bound(g.order // c.order)
    if verify and not verify_witness(w):
        raise VerificationFailed("Carter witness does not cover the group")
    if w.k > w.notes["bound"] + 1e-9:
        raise VerificationFailed(f"Carter witness length {w.k} exceeds the bound")
    return w


# -- direct powers of simple groups -----------------------------------------------------

def _check_simple(t):
    lat = normal_lattice(t)
    if len(lat) != 2 or t.is_abelian:
        raise NotSimple(f"group of order {t.order} is not simple non-abelian")


def special_direct_power(t, r, witnesses):
    """Coordinatewise factorization of ``T^r`` from factorizations of ``T``.

    ``witnesses`` is one witness (used in every coordinate) or a list of ``r``.
    Shorter lists are padded by repeating their last conjugator.
    """
    _check_simple(t)
    ws = list(witnesses) if isinstance(witnesses, (list, tuple)) else [witnesses] * r
    if len(ws) != r:
        raise ValueError(f"expected {r} witnesses, got {len(ws)}")
    if r == 1:
        return ws[0]
    k = max(w.k for w in ws)
    padded = [list(w.conjugators) + [w.conjugators[-1]] * (k - w.k) for w in ws]
    g = ProductGroup([t] * r)
    members = g._combine([w.base.indices() for w in ws])
    mask = np.zeros(g.order, dtype=bool)
    mask[members] = True
    gens = []
    for i, w in enumerate(ws):
        comps = [0] * r
        for x in w.base.generators:
            comps[i] = x
            gens.append(g.embed(comps))
    base = SubgroupSet(g, mask, gens)
    conj = [g.embed([padded[i][j] for i in range(r)]) for j in range(k)]
    out = FactorizationWitness(g, base, conj, f"direct-power:{r}")
    out.notes["padded"] = [k - w.k for w in ws]
    if not verify_witness(out):
        raise VerificationFailed("direct-power witness does not cover the group")
    return out
