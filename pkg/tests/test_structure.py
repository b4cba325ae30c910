from __future__ import annotations

import pytest

from cpfactor.errors import NotSolvable
from cpfactor.specs import build_group
from cpfactor.structure import (carter_subgroup, check_m_bound, normal_lattice, socle,
                                socle_series, solvable_radical)
from cpfactor.subgroups import conjugacy_class_of_subgroup, is_nilpotent, normalizer


@pytest.mark.parametrize("spec,orders", [
    ("sym:4", [1, 4, 12, 24]),
    ("alt:5", [1, 60]),
    ("sym:5", [1, 60, 120]),
    # S3 x C2: 1, C2 (centre), C3, S3, C6, S3' (diagonal), whole group
    ("direct:[sym:3;cyclic:2]", [1, 2, 3, 6, 6, 6, 12]),
])
def test_normal_lattices(spec, orders):
    assert [e.order for e in normal_lattice(build_group(spec)).entries] == orders


def test_radical_and_socle():
    g = build_group("direct:[alt:5;cyclic:6]")
    assert solvable_radical(g).order == 6
    assert socle(build_group("sym:5")).order == 60
    # soc(S4) is the Klein four-group
    assert socle(build_group("sym:4")).order == 4


@pytest.mark.parametrize("spec,chain,m,n,nab", [
    ("sym:5", [1, 60, 120], 1, [1], 60),
    ("sym:4", [24], 0, [], 2),
    ("direct:[sym:4;sym:5]", [24, 1440, 2880], 1, [1], 60),
])
def test_socle_series(spec, chain, m, n, nab):
    rep = socle_series(build_group(spec))
    assert rep.chain_orders() == chain
    assert (rep.m, rep.n, rep.nab_order) == (m, n, nab)
    assert check_m_bound(rep).passed


def test_socle_series_wreath():
    rep = socle_series(build_group("wreath:alt5,2"))
    assert rep.chain_orders() == [1, 3600, 7200]
    assert (rep.m, rep.n, rep.nab_order) == (1, [2], 3600)
    b = check_m_bound(rep)
    assert b.passed and b.bound == pytest.approx(1.534, abs=1e-3)


@pytest.mark.parametrize("spec,order", [("sym:4", 8), ("sym:3", 2), ("dihedral:4", 8),
                                        ("sl:2,3", 6), ("affine:7,1,[2]", 3),
                                        ("affine:3,2,[0,1,2,0;1,1,1,2]", 8)])
def test_carter_orders(spec, order):
    g = build_group(spec)
    c = carter_subgroup(g)
    assert c.certified and c.subgroup.order == order
    keys = {x.key() for x in conjugacy_class_of_subgroup(c.subgroup)}
    for seed in range(4):
        other = carter_subgroup(g, seed).subgroup
        assert other.key() in keys
        assert is_nilpotent(other) and normalizer(other).order == other.order


def test_carter_rejects_nonsolvable():
    with pytest.raises(NotSolvable):
        carter_subgroup(build_group("alt:5"))
