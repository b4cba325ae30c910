from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpfactor.errors import HypothesisFailed
from cpfactor.factorize import (INFINITY, FactorizationWitness, _coset_decomposition,
                                double_coset_table, gamma_cp_exact, gamma_cp_n_exact,
                                gamma_cp_oracle, gamma_cp_p, gamma_cp_s_exact, gamma_cp_ss_upper,
                                normal_split_inequality, product_of_conjugates, set_cache_enabled,
                                socle_sum_bound, tool_a, tool_c, tool_e, verify_witness)
from cpfactor.perms import Permutation
from cpfactor.specs import build_group
from cpfactor.structure import socle_series
from cpfactor.subgroups import (ElementSet, center, enumerate_subgroups, normalizer, setwise_product,
                                subgroup_closure, sylow_subgroup, whole_group)


def point_stabilizer(g, pt):
    idx = [i for i in range(g.order) if g.encode(i)[pt] == pt]
    return subgroup_closure(g, idx)


def test_whole_group_is_length_one():
    g = build_group("sym:4")
    assert gamma_cp_exact(g, whole_group(g)).value == 1


def test_a5_point_stabilizer():
    g = build_group("alt:5")
    a4 = point_stabilizer(g, 4)
    assert a4.order == 12
    res = gamma_cp_exact(g, a4)
    assert res.value == 3 and res.witness.verified
    assert gamma_cp_oracle(g, a4) == 3


def test_s3_involution():
    g = build_group("sym:3")
    c2 = subgroup_closure(g, [g.index_of(Permutation.parse("(0 1)", 3))])
    assert gamma_cp_exact(g, c2).value == 3
    assert gamma_cp_oracle(g, c2) == 3


def test_normal_subgroup_gives_infinity():
    g = build_group("sym:4")
    a4 = subgroup_closure(g, [g.index_of(Permutation.parse("(0 1 2)", 4)),
                              g.index_of(Permutation.parse("(1 2 3)", 4))])
    assert gamma_cp_exact(g, a4).value is INFINITY
    assert gamma_cp_oracle(g, a4) is INFINITY
    assert INFINITY.to_json() == "inf"


def test_a4_by_c3_oracle():
    g = build_group("alt:4")
    c3 = subgroup_closure(g, [g.index_of(Permutation.parse("(0 1 2)", 4))])
    assert gamma_cp_oracle(g, c3) == 3 == gamma_cp_exact(g, c3).value


def test_deleting_a_conjugator_breaks_minimal_witness():
    g = build_group("alt:5")
    res = gamma_cp_exact(g, point_stabilizer(g, 4))
    short = FactorizationWitness(g, res.witness.base, res.witness.conjugators[:-1], "test")
    assert verify_witness(short) is False


def test_sylow_normalizer_lengths():
    assert gamma_cp_p(build_group("alt:5"), 2)[0].value == 3
    assert gamma_cp_p(build_group("psl:2,7"), 7)[0].value == 3
    assert gamma_cp_p(build_group("dihedral:4"), 2)[0].value == 1


def test_special_and_filtered():
    a5 = build_group("alt:5")
    rep = gamma_cp_ss_upper(a5)
    assert rep.value == 3 and rep.exact and rep.self_normalizing
    assert gamma_cp_s_exact(a5)[0] == 3
    assert gamma_cp_n_exact(build_group("sym:4"))[0] == 3
    assert gamma_cp_n_exact(build_group("dihedral:4"))[0] == 1
    assert gamma_cp_ss_upper(build_group("sym:4")).value == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 59))
def test_conjugation_invariance(x):
    g = build_group("alt:5")
    a = normalizer(sylow_subgroup(g, 5))
    b = subgroup_closure(g, [g.conj(int(y), x) for y in a.generators])
    assert gamma_cp_exact(g, a).value == gamma_cp_exact(g, b).value


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_support_table_matches_raw_products(data):
    g = build_group("sym:4")
    a = sylow_subgroup(g, 3)
    t = double_coset_table(g, a, use_cache=False)
    i = data.draw(st.integers(0, t.count - 1))
    j = data.draw(st.integers(0, t.count - 1))
    prod = setwise_product(ElementSet(g, t.mask_of(1 << i)), ElementSet(g, t.mask_of(1 << j)))
    assert np.array_equal(prod.mask, t.mask_of(t.support[i][j]))


def test_product_of_conjugates_matches_naive():
    g = build_group("sym:4")
    a = sylow_subgroup(g, 2)
    xs = [0, 5, 17]
    mask = product_of_conjugates(g, a, xs, stop_when_full=False)
    naive = {0}
    for x in xs:
        conj = [g.conj(int(y), x) for y in a.indices()]
        naive = {g.mul(s, c) for s in naive for c in conj}
    assert set(np.flatnonzero(mask).tolist()) == naive


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("CPFACTOR_CACHE", str(tmp_path))
    set_cache_enabled(True)
    g = build_group("sl:2,5")
    u = sylow_subgroup(g, 5)
    first = double_coset_table(g, u)
    assert list(tmp_path.iterdir())
    again = double_coset_table(g, u)
    assert np.array_equal(first.coset_of, again.coset_of)
    assert first.support == again.support
    assert gamma_cp_exact(g, u, table=again).value == 4


def test_coset_zero_is_base():
    g = build_group("sym:3")
    a = sylow_subgroup(g, 2)
    reps, coset_of, sizes = _coset_decomposition(g, a)
    assert reps[0] == 0 and sorted(sizes.tolist()) == [2, 4]
    assert np.array_equal(coset_of == 0, a.mask)


def test_bound_tools():
    s5 = build_group("sym:5")
    s4 = point_stabilizer(s5, 4)
    rep = tool_a(s5, s4, 2)
    assert rep.passed and rep.lhs <= rep.rhs
    sl = build_group("sl:2,3")
    rep = tool_c(sl, center(sl), 3)
    assert rep.passed and rep.lhs == rep.rhs
    d8 = build_group("dihedral:4")
    assert tool_e(d8, 2, [whole_group(d8)]).lhs == 1
    with pytest.raises(HypothesisFailed) as info:
        tool_a(s5, sylow_subgroup(s5, 3), 2)
    assert info.value.clause == "a"


def test_normal_split_inequality_s5():
    s5 = build_group("sym:5")
    a5 = socle_series(s5).layers[1].subgroup
    rep = normal_split_inequality(s5, a5)
    assert rep.passed
    assert (rep.gamma_s_g, rep.gamma_ss_n_upper, rep.gamma_s_quotient) == (3, 3, 1)


def test_socle_sum_bound():
    out = socle_sum_bound(build_group("sym:5"))
    assert out["pass"] and out["m"] == 1 and out["gamma_s"] == 3 and out["rhs"] == 4


def test_solver_rejects_nothing_on_sweep():
    g = build_group("dihedral:6")
    for s in enumerate_subgroups(g, "nilpotent", up_to_conjugacy=True):
        assert gamma_cp_exact(g, s).value == gamma_cp_oracle(g, s)
