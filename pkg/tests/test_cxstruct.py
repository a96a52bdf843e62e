import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from crgnla.cxstruct import (STANDARD, ComplexStructure, conjugate, der0_shape, extend_automorphism,
                             invariant_J_exists, j_from_json, normalize_J, validate_J)
from crgnla.errors import UsageError, ValidationError
from crgnla.exact import linalg
from crgnla.gnla.catalog import ell6, ell7, gou, heis3, m_hc, ngou

nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=7).filter(bool)
anyrat = st.fractions(min_value=-9, max_value=9, max_denominator=7)


@given(nonzero, anyrat)
def test_family_squares_to_minus_one(a, b):
    J = ComplexStructure(a, b)
    assert validate_J(J.matrix)
    assert ComplexStructure.from_matrix(J.matrix) == J


def test_from_matrix_rejects_non_complex():
    with pytest.raises(ValidationError):
        ComplexStructure.from_matrix([[1, 0], [0, 1]])
    with pytest.raises(UsageError):
        ComplexStructure(0, 1)


@pytest.mark.parametrize("m,shape", [(heis3(), "gl2"), (m_hc(), "gl2"), (gou(3), "borel"),
                                     (gou(6), "borel"), (ngou(5), "cartan"), (ell6(), "co2"),
                                     (ell7(), "co2")], ids=str)
def test_der0_shapes(m, shape):
    assert der0_shape(m)[0] == shape


@settings(max_examples=30, deadline=None)
@given(nonzero, anyrat, st.sampled_from([gou(3), gou(6), m_hc()]))
def test_borel_and_gl2_reach_standard(a, b, m):
    res = normalize_J(m, ComplexStructure(a, b))
    assert res.normal == STANDARD
    assert conjugate(res.group_element, ComplexStructure(a, b).matrix) == STANDARD.matrix


@settings(max_examples=30, deadline=None)
@given(nonzero, anyrat)
def test_non_goursat_keeps_b(a, b):
    res = normalize_J(ngou(5), ComplexStructure(a, b))
    assert res.normal == ComplexStructure(1, b) and res.shape == "cartan"


@pytest.mark.parametrize("m", [gou(4), gou(6), ngou(5), ngou(7)], ids=lambda m: m.label)
def test_normalize_is_idempotent(m):
    J = ComplexStructure(Fraction(3, 2), Fraction(-2, 5))
    once = normalize_J(m, J).normal
    assert normalize_J(m, once).normal == once


def test_b_survives_twenty_diagonal_conjugations():
    rng = random.Random(7)
    m = ngou(5)
    b = Fraction(5, 3)
    J = ComplexStructure(1, b)
    for _ in range(20):
        p = Fraction(rng.choice([-1, 1]) * rng.randint(1, 12), rng.randint(1, 12))
        s = Fraction(rng.choice([-1, 1]) * rng.randint(1, 12), rng.randint(1, 12))
        Jc = ComplexStructure.from_matrix(conjugate([[p, 0], [0, s]], J.matrix))
        assert Jc.b == b
        assert normalize_J(m, Jc).normal == J


def test_automorphism_is_returned_and_valid():
    m = gou(5)
    res = normalize_J(m, ComplexStructure(2, 3))
    G = res.automorphism
    for i in range(m.dim):
        for j in range(i + 1, m.dim):
            lhs = linalg.mat_vec(G, m.bracket_vec(m.unit(i), m.unit(j)))
            rhs = m.bracket_vec(linalg.mat_vec(G, m.unit(i)), linalg.mat_vec(G, m.unit(j)))
            assert lhs == rhs


def test_extend_automorphism_rejects_non_automorphisms():
    # a shear is not an automorphism of nGou(5)
    with pytest.raises(ValidationError):
        extend_automorphism(ngou(5), [[1, 0], [1, 1]])


def test_co2_only_accepts_the_invariant_J():
    assert normalize_J(ell6(), STANDARD).normal == STANDARD
    with pytest.raises(UsageError):
        normalize_J(ell6(), ComplexStructure(2, 1))


@pytest.mark.parametrize("m,exists", [(heis3(), True), (m_hc(), True), (ell6(), True),
                                      (gou(3), False), (gou(6), False), (ngou(5), False)], ids=str)
def test_invariant_J(m, exists):
    res = invariant_J_exists(m)
    assert res.exists == exists
    if exists:
        w = res.witness
        assert w[0][0] + w[1][1] == 0 and linalg.det2(w) > 0


def test_j_from_json():
    assert j_from_json({"a": "2", "b": "1"}) == ComplexStructure(2, 1).matrix
    assert j_from_json({"traceless_class": [["0", "-1"], ["1", "0"]]}) == STANDARD.matrix
