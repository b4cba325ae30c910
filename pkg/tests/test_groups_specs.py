from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpfactor.errors import CapExceeded, SpecParseError, UnsupportedParameter
from cpfactor.groups import ProductGroup, conjugacy_classes, quotient_group
from cpfactor.specs import build_group, canonical, parse_spec, spec_hash
from cpfactor.subgroups import center


# orders from the standard formulas, not from the code under test
ORDERS = {
    "sym:5": 120, "alt:6": 360, "cyclic:12": 12, "dihedral:7": 14, "dicyclic:3": 12,
    "sl:2,5": 120, "sl:2,4": 60, "psl:2,7": 168, "sl:3,2": 168,
    "affine:5,1,[2]": 20, "affine:3,2,[0,1,2,0;1,1,1,2]": 72,
    "direct:[sym:3;cyclic:2]": 12, "wreath:alt5,2": 7200,
}


@pytest.mark.parametrize("spec,order", sorted(ORDERS.items()))
def test_orders(spec, order):
    assert build_group(spec).order == order


def test_su3_order():
    g = build_group("su:3,3")
    assert g.order == 3**3 * (3**2 - 1) * (3**3 + 1)


def test_class_sizes_s4():
    sizes = sorted(len(c) for c in conjugacy_classes(build_group("sym:4")))
    assert sizes == [1, 3, 6, 6, 8]


def test_class_count_against_sympy():
    sympy = pytest.importorskip("sympy.combinatorics.named_groups")
    for n in (4, 5):
        ours = len(conjugacy_classes(build_group(f"alt:{n}")))
        theirs = len(sympy.AlternatingGroup(n).conjugacy_classes())
        assert ours == theirs


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_associativity_and_inverse(data):
    g = build_group("sl:2,5")
    a, b, c = (data.draw(st.integers(0, g.order - 1)) for _ in range(3))
    assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))
    assert g.mul(a, int(g.inverse[a])) == 0
    # right_map(x)[i] = i * x, so composing maps multiplies on the right
    assert np.array_equal(g.right_map(b)[g.right_map(a)], g.right_map(g.mul(a, b)))


def test_quotient_by_center():
    g = build_group("sl:2,5")
    z = center(g)
    q, proj, _ = quotient_group(g, z)
    assert z.order == 2 and q.order == 60
    assert proj[0] == 0


def test_product_group_indices():
    s3 = build_group("sym:3")
    g = ProductGroup([s3, s3])
    assert g.order == 36
    x = g.embed([2, 5])
    assert [int(c) for c in g.components(x)] == [2, 5]
    assert g.mul(x, int(g.inverse[x])) == 0


@pytest.mark.parametrize("bad,pos", [("sym:", 4), ("foo:3", 0), ("direct:[sym:3;]", None)])
def test_parse_errors_carry_position(bad, pos):
    with pytest.raises(SpecParseError) as info:
        build_group(bad)
    if pos is not None:
        assert info.value.pos == pos


def test_unsupported_field_is_not_a_parse_error():
    with pytest.raises(UnsupportedParameter):
        build_group("sl:2,6")


def test_canonical_and_hash_stable():
    a = canonical(parse_spec(" sym : 5 "))
    assert a == "sym:5"
    assert spec_hash("sym:5") == spec_hash(" sym:5")
    assert spec_hash("sym:5") != spec_hash("alt:5")


def test_cap():
    with pytest.raises(CapExceeded):
        build_group("sym:13")


def test_wreath_order_formula():
    assert build_group("wreath:alt5,2").order == 60**2 * math.factorial(2)
