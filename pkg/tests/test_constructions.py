from __future__ import annotations

import math

import numpy as np
import pytest

from cpfactor.affine import (C_A, affine_datum, affine_factorization, ceiling_log_scan,
                             cover_line, datum_from_affine_group, trick_length)
from cpfactor.bn import (_uu_product, build_datum, build_sl2, h_meets_uu_u, rank1_criterion,
                         verify_unipotent)
from cpfactor.carter import carter_factorization, special_direct_power
from cpfactor.errors import (FixedVector, NotCoreFree, NotIrreducible, NotRankOne, NotSimple,
                             NotSolvable, UnsupportedParameter)
from cpfactor.factorize import gamma_cp_exact, gamma_cp_oracle, gamma_cp_ss_upper
from cpfactor.specs import build_group
from cpfactor.subgroups import SubgroupSet, is_nilpotent, normalizer, sylow_subgroup
from cpfactor.sylow2 import (alt_length, alternating_sylow2, alternating_triple, merge_blocks,
                             sym_factor_layouts, sym_length, symmetric_sylow2)

# -- BN data ---------------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_sl2_datum(q):
    d = build_sl2(q)
    assert d.group.order == q * (q * q - 1)
    assert d.U.order == q and d.H.order == q - 1
    assert d.weyl_order == 2
    rep = rank1_criterion(d)
    assert rep.agree and rep.cond_a
    assert h_meets_uu_u(d)


def test_sl2_unsupported():
    with pytest.raises(UnsupportedParameter):
        build_sl2(11)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_alternating_pattern(q):
    # the alternating word U U^- U ... with k = gamma^U factors covers G
    d = build_sl2(q)
    k = gamma_cp_exact(d.group, d.U).value
    assert _uu_product(d, ("+-" * k)[:k]).all()
    assert not _uu_product(d, ("+-" * k)[:k - 1]).all()


def test_sl2_7_lengths():
    rep = verify_unipotent(build_datum("sl:2,7"))
    assert (rep.four, rep.three, rep.gamma_exact, rep.witness.k) == (True, False, 4, 4)


def test_sl2_2_carter_case():
    d = build_sl2(2)
    assert normalizer(d.U).order == d.U.order
    rep = verify_unipotent(d)
    assert rep.three and rep.witness.k == 3 and rep.gamma_exact == 3


def test_sl3_2():
    d = build_datum("sl:3,2")
    assert d.weyl_order == 6 and d.U.order == 8
    with pytest.raises(NotRankOne):
        rank1_criterion(d)
    rep = verify_unipotent(d)
    assert rep.four and h_meets_uu_u(d)


def test_su3_3():
    d = build_datum("su:3,3")
    assert d.group.order == 6048 and d.U.order == 27
    assert rank1_criterion(d).agree
    assert verify_unipotent(d, exact=False).four


# -- Sylow 2-subgroup products --------------------------------------------------------


def test_merge_blocks():
    assert merge_blocks([[0], [1], [2]]) == [[0, 1], [2]]
    assert [len(b) for b in merge_blocks([[0, 1], [2, 3], [4]])] == [4, 1]


@pytest.mark.parametrize("n", range(2, 33))
def test_symmetric_lengths(n):
    assert sym_factor_layouts(n).length == sym_length(n) < 4 * math.log2(n)


@pytest.mark.parametrize("n,k", [(2, 1), (3, 3), (4, 3), (8, 5)])
def test_symmetric_small(n, k):
    w, _ = symmetric_sylow2(n)
    assert w.verified and w.k == k
    assert w.base.order == 2 ** sum(n // 2**i for i in range(1, 6))


def test_s4_three_is_minimal():
    g = build_group("sym:4")
    assert gamma_cp_oracle(g, sylow_subgroup(g, 2)) == 3


@pytest.mark.parametrize("n", [6, 7, 8])
def test_alternating_triple(n):
    ok, h1_order, _ = alternating_triple(n)
    assert ok and h1_order == math.factorial(n - 2)


@pytest.mark.parametrize("n", [6, 7, 8])
def test_alternating_witness(n):
    w, _ = alternating_sylow2(n)
    assert w.verified and w.k == alt_length(n) < 12 * math.log2(n)


def test_alternating_needs_six():
    with pytest.raises(UnsupportedParameter):
        alternating_sylow2(5)


# -- affine primitive groups ---------------------------------------------------------


@pytest.mark.parametrize("spec", ["affine:5,1,[2]", "affine:2,2,[0,1,1,1]",
                                  "affine:3,2,[0,1,2,0;1,1,1,2]", "affine:7,1,[3]",
                                  "affine:3,1,[2]", "affine:2,3,[0,0,1,1,0,1,0,1,0]"])
def test_affine_witness(spec):
    d = datum_from_affine_group(build_group(spec))
    w = affine_factorization(d)
    assert w.verified
    assert w.k <= 1 + d.n * trick_length(d.p)
    assert w.k <= 1 + C_A * math.log2(d.V.order) + 1e-9


@pytest.mark.parametrize("spec,k", [("affine:5,1,[2]", 3), ("affine:2,2,[0,1,1,1]", 1),
                                    ("affine:3,1,[2]", 2)])
def test_cover_line(spec, k):
    d = datum_from_affine_group(build_group(spec))
    v = int(d.V.indices()[1])
    h = next(int(x) for x in d.H.indices()[1:] if d.act(v, int(x)) != v)
    res = cover_line(d, v, h)
    assert res.k == k and res.covered and len(res.conjugators) == k + 1


def test_cover_line_fixed_vector():
    d = datum_from_affine_group(build_group("affine:5,1,[2]"))
    with pytest.raises(FixedVector):
        cover_line(d, int(d.V.indices()[1]), 0)


def test_affine_exact_values():
    # exact lengths are below the construction's bound
    for spec, exact in [("affine:5,1,[2]", 3), ("affine:2,2,[0,1,1,1]", 3)]:
        d = datum_from_affine_group(build_group(spec))
        assert gamma_cp_oracle(d.group, d.H) == exact <= affine_factorization(d).k


def _mask(g, members):
    mask = np.zeros(g.order, dtype=bool)
    mask[members] = True
    return mask


def test_affine_rejections():
    with pytest.raises(NotIrreducible):
        datum_from_affine_group(build_group("affine:5,2,[0,1,3,3]"))
    # C2 x C2 = V x H with H normal: not core-free
    g = build_group("direct:[cyclic:2;cyclic:2]")
    v = SubgroupSet(g, _mask(g, [0, 2]), [2])
    h = SubgroupSet(g, _mask(g, [0, 1]), [1])
    with pytest.raises(NotCoreFree):
        affine_datum(g, v, h)


def test_ceiling_log_scan():
    assert ceiling_log_scan(10**5) == []
    # equality case: p = 5 gives 5^3 = 5^3
    assert trick_length(5) == 3


# -- Carter factorizations --------------------------------------------------------


@pytest.mark.parametrize("spec,most", [("sym:4", 3), ("affine:7,1,[2]", 4), ("cyclic:10", 1),
                                       ("sl:2,3", 3), ("affine:3,2,[0,1,2,0;1,1,1,2]", 5)])
def test_carter_factorization(spec, most):
    g = build_group(spec)
    w = carter_factorization(g)
    assert w.verified and w.k <= most <= w.notes["bound"] + 1
    assert is_nilpotent(w.base) and normalizer(w.base).order == w.base.order


def test_carter_f21_exact_recorded():
    g = build_group("affine:7,1,[2]")
    w = carter_factorization(g)
    assert gamma_cp_oracle(g, w.base) == 3 <= w.k


def test_carter_nonsolvable():
    with pytest.raises(NotSolvable):
        carter_factorization(build_group("alt:5"))


def test_direct_power():
    a5 = build_group("alt:5")
    base = gamma_cp_ss_upper(a5, sweep=False).witness
    w = special_direct_power(a5, 2, base)
    assert w.verified and w.k == base.k == 3 and w.group.order == 3600
    assert special_direct_power(a5, 1, base) is base
    with pytest.raises(NotSimple):
        special_direct_power(build_group("sym:5"), 2, base)


def test_direct_power_padding():
    a5 = build_group("alt:5")
    base = gamma_cp_ss_upper(a5, sweep=False).witness
    longer = type(base)(a5, base.base, base.conjugators + [base.conjugators[-1]], "padded")
    w = special_direct_power(a5, 2, [base, longer])
    assert w.k == 4 and w.notes["padded"] == [1, 0] and w.verified
