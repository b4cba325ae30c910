from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cpfactor.errors import UnsupportedParameter
from cpfactor.fields import GF
from cpfactor.matrices import MatrixGF
from cpfactor.perms import Permutation

QS = [2, 3, 4, 5, 7, 8, 9, 11]


@pytest.mark.parametrize("q", QS)
def test_field_axioms(q):
    f = GF(q)
    for a in range(q):
        assert f.add[a][0] == a and f.mul[a][1] == a
        assert f.add[a][int(f.neg[a])] == 0
        if a:
            assert f.mul[a][int(f.inv[a])] == 1
    # the multiplicative group is cyclic of order q - 1
    assert f.element_order(f.primitive_element) == q - 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QS), st.data())
def test_distributive(q, data):
    f = GF(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul[a][f.add[b][c]] == f.add[f.mul[a][b]][f.mul[a][c]]


def test_explicit_modulus():
    # x^2 + x + 2 is irreducible over GF(5): its discriminant 3 is a non-square
    f = GF(25, modulus=(2, 1, 1))
    assert f.element_order(f.primitive_element) == 24


def test_missing_modulus_rejected():
    with pytest.raises(UnsupportedParameter):
        GF(27)
    with pytest.raises(UnsupportedParameter):
        GF(6)


def test_frobenius_fixes_prime_field():
    f = GF(9)
    fixed = [a for a in range(9) if f.frobenius(a) == a]
    assert len(fixed) == 3


def test_matrix_inverse_and_det():
    f = GF(5)
    m = MatrixGF(f, [[2, 1], [1, 1]])
    assert m * m.inverse() == MatrixGF.identity(f, 2)
    assert m.det() == 1


def test_right_action_convention():
    a = Permutation.parse("(0 1)", 3)
    b = Permutation.parse("(1 2)", 3)
    # apply a first, then b: 0 -> 1 -> 2
    assert (a * b)(0) == 2
    assert a.conj(b) == b.inverse() * a * b


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_sign_is_multiplicative(p, q):
    a, b = Permutation(p), Permutation(q)
    assert (a * b).sign() == a.sign() * b.sign()
    assert (a * a.inverse()).is_identity()


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Permutation.parse("(0 1) x")
