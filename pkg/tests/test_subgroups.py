from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cpfactor.errors import BoundExceeded, NotPGroup
from cpfactor.specs import build_group
from cpfactor.subgroups import (center, commutator_subgroup, conjugate_set, core,
                                derived_series, enumerate_subgroups, is_nilpotent, is_normal,
                                is_solvable, normal_closure, normalizer, setwise_product,
                                subgroup_closure, sylow_over, sylow_subgroup, whole_group)
from cpfactor.perms import Permutation


def perm_index(g, text):
    return g.index_of(Permutation.parse(text, g.domain.degree))


def test_closure_and_membership():
    g = build_group("sym:4")
    h = subgroup_closure(g, [perm_index(g, "(0 1 2 3)"), perm_index(g, "(0 2)")])
    assert h.order == 8
    assert normalizer(h).order == 8


@pytest.mark.parametrize("spec,p,order", [("sym:5", 2, 8), ("sym:5", 3, 3), ("alt:5", 5, 5),
                                          ("psl:2,7", 7, 7), ("sl:2,3", 2, 8)])
def test_sylow_orders(spec, p, order):
    g = build_group(spec)
    assert sylow_subgroup(g, p).order == order


def test_sylow_over_extends():
    g = build_group("sym:5")
    c4 = subgroup_closure(g, [perm_index(g, "(0 1 2 3)")])
    assert sylow_over(c4, 2).order == 8
    with pytest.raises(NotPGroup):
        sylow_over(subgroup_closure(g, [perm_index(g, "(0 1)(2 3 4)")]), 2)


def test_derived_series_s4():
    g = build_group("sym:4")
    orders = [s.order for s in derived_series(whole_group(g))]
    assert orders == [24, 12, 4, 1]
    assert is_solvable(whole_group(g))
    assert not is_solvable(whole_group(build_group("alt:5")))


def test_nilpotency():
    assert is_nilpotent(whole_group(build_group("dihedral:4")))
    assert not is_nilpotent(whole_group(build_group("sym:3")))


def test_center_and_core():
    g = build_group("sl:2,3")
    assert center(g).order == 2
    s4 = build_group("sym:4")
    d8 = normalizer(sylow_subgroup(s4, 2))
    # the core of a Sylow 2-subgroup of S4 is the Klein four-group
    assert core(d8).order == 4
    assert is_normal(core(d8))


def test_normal_closure_of_transposition():
    g = build_group("sym:5")
    t = subgroup_closure(g, [perm_index(g, "(0 1)")])
    assert normal_closure(t).order == 120


def test_commutator_of_a4():
    g = build_group("alt:4")
    assert commutator_subgroup(whole_group(g)).order == 4


def test_enumeration_counts():
    # S3 has subgroups 1, three C2, C3 (nilpotent) and S3 itself (solvable)
    g = build_group("sym:3")
    assert len(enumerate_subgroups(g, "nilpotent")) == 5
    assert len(enumerate_subgroups(g, "solvable")) == 6
    # A5 solvable classes: 1, C2, C3, V4, C5, S3, D10, A4
    a5 = build_group("alt:5")
    orders = sorted(s.order for s in enumerate_subgroups(a5, "solvable", up_to_conjugacy=True))
    assert orders == [1, 2, 3, 4, 5, 6, 10, 12]


def test_subgroup_count_s4():
    # S4 has 30 subgroups in total, all of them solvable
    g = build_group("sym:4")
    assert len(enumerate_subgroups(g, "solvable")) == 30


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        enumerate_subgroups(build_group("sym:7"), "nilpotent")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 119), st.integers(0, 119))
def test_conjugation_preserves_order(x, y):
    g = build_group("sym:5")
    h = subgroup_closure(g, [y])
    c = conjugate_set(h, x)
    assert c.order == h.order
    assert conjugate_set(c, int(g.inverse[x])) == h


def test_setwise_product_sizes():
    g = build_group("sym:4")
    a = sylow_subgroup(g, 2)
    b = sylow_subgroup(g, 3)
    # |AB| = |A||B| / |A ∩ B| = 24
    assert setwise_product(a, b).order == 24
