"""Normal structure: normal lattice, radical, socle, socle series, Carter subgroups."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundExceeded, NotSolvable
from .groups import conjugacy_classes, quotient_group
from .subgroups import (SubgroupSet, enumerate_subgroups, is_nilpotent, is_solvable,
                        normal_closure, normalizer, saturate_right, subgroup_closure,
                        subgroup_from_mask, trivial_subgroup, whole_group)

# Normal subgroups are found from conjugacy classes, which is far cheaper than
# full subgroup enumeration, so this bound sits above the enumeration bound.
NORMAL_LATTICE_BOUND = 20000


@dataclass
class NormalLattice:
    group: object
    entries: list
    solvable: list
    minimal: list

    def minimal_normals(self):
        return [e for e, m in zip(self.entries, self.minimal) if m]

    def __len__(self):
        return len(self.entries)


def normal_join(a, b):
    """Product of two normal subgroups."""
    g = a.parent
    mask = saturate_right(g, a.mask, b.generators)
    gens = list(a.generators) + [x for x in b.generators if not a.mask[x]]
    return SubgroupSet(g, mask, gens)


def normal_lattice(g, bound=NORMAL_LATTICE_BOUND):
    if g.order > bound:
        raise BoundExceeded(f"|G| = {g.order} exceeds normal lattice bound {bound}")
    g.maybe_table()
    found = {}
    for cls in conjugacy_classes(g):
        n = normal_closure(subgroup_closure(g, [int(cls[0])]))
        found.setdefault(n.key(), n)
    items = list(found.values())
    changed = True
    while changed:
        changed = False
        items.sort(key=lambda s: s.order)
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                if a <= b or b <= a:
                    continue
                c = normal_join(a, b)
                if c.key() not in found:
                    found[c.key()] = c
                    items.append(c)
                    changed = True
    entries = sorted(found.values(), key=lambda s: (s.order, tuple(s.indices()[:64])))
    solv = [is_solvable(e) for e in entries]
    minimal = []
    for e in entries:
        if e.order == 1:
            minimal.append(False)
            continue
        minimal.append(not any(1 < f.order < e.order and f <= e for f in entries))
    return NormalLattice(g, entries, solv, minimal)


def solvable_radical(g, lattice=None):
    lat = lattice or normal_lattice(g)
    r = trivial_subgroup(g)
    for e, s in zip(lat.entries, lat.solvable):
        if s and not e <= r:
            r = normal_join(r, e)
    return r


def socle(g, lattice=None):
    lat = lattice or normal_lattice(g)
    s = trivial_subgroup(g)
    for e in lat.minimal_normals():
        if not e <= s:
            s = normal_join(s, e)
    return s


def minimal_normal_choice(g, lattice=None, rng=None):
    """Least minimal normal subgroup by (order, bit-vector); random if ``rng``."""
    lat = lattice or normal_lattice(g)
    mins = sorted(lat.minimal_normals(), key=lambda s: (s.order, tuple(s.indices())))
    if rng is not None:
        return rng.choice(mins)
    return mins[0]


def preimage(q, projection, sub):
    """Preimage in the parent of a subgroup of the quotient ``q``."""
    mask = sub.mask[projection]
    gens = [int(q.reps[x]) for x in sub.generators] + list(q.kernel.generators)
    return SubgroupSet(q.parent, mask, gens)


def lift_from(sub_group, local):
    """A SubgroupSet of an InducedGroup, mapped back into its parent."""
    parent = sub_group.parent
    members = sub_group.members[local.indices()]
    mask = np.zeros(parent.order, dtype=bool)
    mask[members] = True
    return SubgroupSet(parent, mask, [int(sub_group.members[x]) for x in local.generators])


def restrict_to(sub_group, s):
    """The part of ``s`` inside an InducedGroup, as its subgroup."""
    mask = s.mask[sub_group.members]
    return subgroup_from_mask(sub_group, mask, check=False)


@dataclass
class SocleLayer:
    kind: str  # "radical" or "socle"
    subgroup: SubgroupSet
    n: int = 0
    factor_orders: list = field(default_factory=list)


@dataclass
class SocleSeriesReport:
    group: object
    layers: list
    m: int
    n: list
    nab_order: int

    def chain_orders(self):
        return [layer.subgroup.order for layer in self.layers]

    def to_json(self):
        return {
            "group": getattr(self.group, "spec", None) or self.group.label(),
            "order": self.group.order,
            "layers": [{"kind": la.kind, "order": la.subgroup.order, "n": la.n,
                        "factor_orders": la.factor_orders} for la in self.layers],
            "m": self.m,
            "n": self.n,
            "nab_order": self.nab_order,
        }


def socle_series(g):
    """Alternating radical and socle lifts until the whole group is reached."""
    layers = []
    current = trivial_subgroup(g)
    step = 1
    while current.order < g.order:
        if current.order == 1:
            q, proj = g, None
        else:
            q, proj, _ = quotient_group(g, current)
        lat = normal_lattice(q)
        if step % 2:
            top = solvable_radical(q, lat)
            kind = "radical"
        else:
            top = socle(q, lat)
            kind = "socle"
        lifted = top if proj is None else preimage(q, proj, top)
        layer = SocleLayer(kind, lifted)
        if kind == "socle":
            factors = normal_lattice(top.as_group()).minimal_normals()
            if any(is_solvable(f) for f in factors):
                raise AssertionError("socle layer has an abelian factor")
            layer.n = len(factors)
            layer.factor_orders = sorted(f.order for f in factors)
        layers.append(layer)
        current = lifted
        step += 1
    socle_layers = [la for la in layers if la.kind == "socle"]
    m = len(socle_layers)
    nab = 1
    for la in socle_layers:
        for o in la.factor_orders:
            nab *= o
    return SocleSeriesReport(g, layers, m, [la.n for la in socle_layers], nab if m else 2)


@dataclass
class MBoundReport:
    m: int
    bound: float
    passed: bool
    layer_ratios_ok: bool

    def to_json(self):
        return {"m": self.m, "bound": self.bound, "pass": self.passed,
                "layer_ratios_ok": self.layer_ratios_ok}


def check_m_bound(report):
    """``m < log2 log2 |G|_nab / log2 5`` and ``5 n_i <= n_{i-1}``."""
    nab = report.nab_order
    bound = math.log2(math.log2(nab)) / math.log2(5) if nab > 2 else 0.0
    passed = report.m == 0 or report.m < bound
    ratios = all(5 * report.n[i] <= report.n[i - 1] for i in range(1, len(report.n)))
    return MBoundReport(report.m, bound, passed, ratios)


# -- Carter subgroups -------------------------------------------------------------------

@dataclass
class CarterSubgroup:
    subgroup: SubgroupSet
    nilpotent: bool
    self_normalizing: bool
    route: list

    @property
    def certified(self):
        return self.nilpotent and self.self_normalizing


def _carter(g, rng, route):
    whole = whole_group(g)
    if is_nilpotent(whole):
        route.append("nilpotent")
        return whole
    lat = normal_lattice(g)
    n = minimal_normal_choice(g, lat, rng)
    q, proj, _ = quotient_group(g, n)
    cq = _carter(q, rng, route)
    d = preimage(q, proj, cq)
    if d.order < g.order:
        route.append(f"descend {g.order}->{d.order}")
        dg = d.as_group()
        local = _carter(dg, rng, route)
        return lift_from(dg, local)
    route.append(f"search {g.order}")
    subs = enumerate_subgroups(g, "nilpotent")
    subs = sorted(subs, key=lambda s: -s.order)
    if rng is not None:
        # shuffle within each order so different seeds pick different conjugates
        by_order = {}
        for s in subs:
            by_order.setdefault(s.order, []).append(s)
        subs = []
        for o in sorted(by_order, reverse=True):
            block = by_order[o]
            rng.shuffle(block)
            subs.extend(block)
    for s in subs:
        if normalizer(s).order == s.order:
            return s
    raise AssertionError("no self-normalizing nilpotent subgroup found")


def carter_subgroup(g, seed=None):
    """A nilpotent self-normalizing subgroup of the solvable group ``g``."""
    if not is_solvable(whole_group(g)):
        raise NotSolvable("Carter subgroups are only computed for solvable groups")
    rng = random.Random(seed) if seed is not None else None
    route = []
    c = _carter(g, rng, route)
    return CarterSubgroup(c, is_nilpotent(c), normalizer(c).order == c.order, route)
