from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from crgnla.exact import linalg
from crgnla.exact.numbers import GaussRat, I, rat_str, to_rat
from crgnla.exact.poly import PolyRing

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRat, rats, rats)

R = PolyRing(["z", "z_bar", "a"], {"z": "z_bar"})


@st.composite
def polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        e = tuple(draw(st.integers(0, 2)) for _ in range(3))
        terms[e] = draw(gauss)
    return R.zero() + sum((R.monomial(dict(zip(R.names, e)), c) for e, c in terms.items()),
                          R.zero())


def test_to_rat_accepts_strings_and_rejects_floats():
    assert to_rat("3/4") == Fraction(3, 4)
    assert to_rat(-2) == -2
    with pytest.raises((TypeError, ValueError)):
        to_rat(0.1)


def test_rat_str():
    assert rat_str(Fraction(-3, 2)) == "-3/2"
    assert rat_str(Fraction(4)) == "4"


def test_i_squared():
    assert I * I == GaussRat(-1)


@given(gauss, gauss)
def test_conjugation_is_multiplicative(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()


@given(gauss)
def test_inverse(x):
    if x:
        assert x * x.inverse() == GaussRat(1)
    assert (x * x.conj()).is_real()


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == R.zero()


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_conj_and_derivative_rules(p, q):
    assert (p * q).conj() == p.conj() * q.conj()
    assert (p * q).diff("z") == p.diff("z") * q + p * q.diff("z")
    assert p.real_part().conj() == p.real_part()
    assert p.real_part() + p.imag_part().scale(I) == p


def test_subs_composes():
    z, a = R.var("z"), R.var("a")
    p = z * z + a
    assert p.subs({"z": a + 1}) == a * a + a.scale(3) + 1


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(rats, min_size=n, max_size=n), min_size=1, max_size=5))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity(M):
    n = len(M[0])
    N = linalg.nullspace(M, n)
    assert linalg.rank(M) + len(N) == n
    for v in N:
        assert all(sum(r[j] * v[j] for j in range(n)) == 0 for r in M)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_member_reconstructs(M):
    if not M:
        return
    v = [sum(c for c in col) for col in zip(*M)]
    coeffs = linalg.member(v, M)
    assert coeffs is not None
    assert [sum(c * r[j] for c, r in zip(coeffs, M)) for j in range(len(v))] == v


def test_inverse_and_det():
    A = [[Fraction(2), Fraction(1)], [Fraction(5), Fraction(3)]]
    assert linalg.det2(A) == 1
    assert linalg.mat_mul(A, linalg.inverse(A)) == linalg.identity(2)
