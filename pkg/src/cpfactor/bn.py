"""Split BN-pair data for small classical groups and unipotent factorizations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotRankOne, UnsupportedParameter, VerificationFailed
from .factorize import (FactorizationWitness, _coset_decomposition, gamma_cp_exact,
                        jsonable, product_of_conjugates, verify_witness)
from .fields import GF
from .matrices import MatrixGF
from .specs import build_group, field_basis, su3_3_data
from .subgroups import (conjugate_set, intersection, join, normalizer, subgroup_closure)

SL2_FIELDS = (2, 3, 4, 5, 7, 8, 9)


@dataclass
class BNDatum:
    group: object
    U: object
    Uminus: object
    H: object
    B: object
    n0: int
    n1: int
    weyl_order: int
    name: str

    def summary(self):
        return {"group": self.name, "order": self.group.order, "U": self.U.order,
                "H": self.H.order, "B": self.B.order, "weyl_order": self.weyl_order}


def _index(g, m):
    i = g.index_of(m)
    if i is None:
        raise VerificationFailed(f"matrix {m} is not in the group")
    return i


def _finish(g, U, H, n0, n1, name):
    Um = conjugate_set(U, n0)
    B = join(H, U)
    d = BNDatum(g, U, Um, H, B, n0, n1, 0, name)
    # the number of (B, B) double cosets is |W|
    _, _, sizes = _coset_decomposition(g, B)
    d.weyl_order = len(sizes)
    _check_datum(d)
    return d


def _check_datum(d):
    g = d.group
    if intersection(d.H, d.U).order != 1:
        raise VerificationFailed("H and U intersect nontrivially")
    if d.B.order != d.H.order * d.U.order:
        raise VerificationFailed("B is not H U")
    if intersection(d.B, d.Uminus).order != 1:
        raise VerificationFailed("B meets U^- nontrivially")
    for s in (d.U, d.Uminus):
        if not d.H <= normalizer(s):
            raise VerificationFailed("H does not normalize U or U^-")
    if g.order % d.B.order:
        raise VerificationFailed("B order does not divide |G|")


def build_sl2(q):
    if q not in SL2_FIELDS:
        raise UnsupportedParameter(f"SL2({q}) not in supported fields {SL2_FIELDS}")
    g = build_group(f"sl:2,{q}")
    f = GF(q)
    ugens = [_index(g, MatrixGF(f, [[1, b], [0, 1]])) for b in field_basis(f)]
    U = subgroup_closure(g, ugens)
    t = f.primitive_element
    H = subgroup_closure(g, [_index(g, MatrixGF.diagonal(f, [t, int(f.inv[t])]))])
    n0 = _index(g, MatrixGF(f, [[0, 1], [int(f.neg[1]), 0]]))
    return _finish(g, U, H, n0, n0, f"SL2({q})")


def build_su3_3():
    g = build_group("su:3,3")
    _, Ue, He, n0m = su3_3_data()
    U = subgroup_closure(g, [_index(g, m) for m in Ue])
    H = subgroup_closure(g, [_index(g, m) for m in He])
    n0 = _index(g, n0m)
    return _finish(g, U, H, n0, n0, "SU3(3)")


def build_sl3_2():
    g = build_group("sl:3,2")
    f = GF(2)
    e12 = MatrixGF(f, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    e23 = MatrixGF(f, [[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    U = subgroup_closure(g, [_index(g, e12), _index(g, e23)])
    H = subgroup_closure(g, [])
    n0 = _index(g, MatrixGF(f, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]))
    n1 = _index(g, MatrixGF(f, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    return _finish(g, U, H, n0, n1, "SL3(2)")


def build_datum(spec):
    """BN datum for ``sl:2,q``, ``su:3,3`` or ``sl:3,2``."""
    s = spec.replace(" ", "").lower()
    if s.startswith("sl:2,"):
        return build_sl2(int(s[5:]))
    if s == "su:3,3":
        return build_su3_3()
    if s == "sl:3,2":
        return build_sl3_2()
    raise UnsupportedParameter(f"no BN datum for {spec!r}")


@dataclass
class Rank1Report:
    h_tilde: list
    cond_a: bool
    cond_b: bool
    cond_c: bool

    @property
    def agree(self):
        return self.cond_a == self.cond_b == self.cond_c

    def to_json(self):
        return {"h_tilde_size": len(self.h_tilde), "cond_a": self.cond_a,
                "cond_b": self.cond_b, "cond_c": self.cond_c}


def _uu_product(d, pattern):
    """Product ``U^{e1} U^{e2} ...`` with ``+`` for U and ``-`` for U^-."""
    conj = [0 if c == "+" else d.n0 for c in pattern]
    return product_of_conjugates(d.group, d.U, conj, stop_when_full=False)


def rank1_criterion(d):
    """The three equivalent rank-1 conditions, computed independently."""
    if d.weyl_order != 2:
        raise NotRankOne(f"Weyl group of {d.name} has order {d.weyl_order}")
    g = d.group
    _, coset_of, _ = _coset_decomposition(g, d.U)
    um_star = d.Uminus.indices()[1:]
    hit = set(coset_of[um_star].tolist())
    h_idx = d.H.indices()
    n1h = g.mul_arrays(np.full(len(h_idx), d.n1), h_idx)
    h_tilde = [int(h) for h, c in zip(h_idx, coset_of[n1h]) if int(c) in hit]
    cond_a = len(h_tilde) == d.H.order
    cond_b = hit == set(coset_of[n1h].tolist())
    cond_c = bool(_uu_product(d, "+-+-").all())
    rep = Rank1Report(h_tilde, cond_a, cond_b, cond_c)
    if not rep.agree:
        raise VerificationFailed(f"rank-1 conditions disagree on {d.name}: {rep.to_json()}")
    return rep


def h_meets_uu_u(d):
    """True iff ``H`` and ``U U^- U`` meet only in the identity."""
    prod = _uu_product(d, "+-+")
    return int(np.count_nonzero(prod & d.H.mask)) == 1


@dataclass
class UnipotentReport:
    name: str
    four: bool
    three: bool
    h_cap_trivial: bool
    witness: FactorizationWitness
    gamma_exact: object = None

    def to_json(self):
        return {"group": self.name, "lengths": {"four": self.four, "three": self.three},
                "h_cap_uu_u_trivial": self.h_cap_trivial,
                "gamma_exact": jsonable(self.gamma_exact),
                "witness": self.witness.to_json()}


def verify_unipotent(d, exact=True):
    """Check ``(U U^-)^2 = G`` and ``U U^- U = G`` and emit the short witness."""
    g = d.group
    four = bool(_uu_product(d, "+-+-").all())
    three = bool(_uu_product(d, "+-+").all())
    h_ok = h_meets_uu_u(d)
    conj = [0, d.n0, 0] if d.H.order == 1 and three else [0, d.n0, 0, d.n0]
    w = FactorizationWitness(g, d.U, conj, f"unipotent:{d.name}")
    if not verify_witness(w):
        raise VerificationFailed(f"unipotent witness fails on {d.name}")
    rep = UnipotentReport(d.name, four, three, h_ok, w)
    if exact:
        rep.gamma_exact = gamma_cp_exact(g, d.U, verify=False).value
    return rep
