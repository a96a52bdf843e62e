import pytest
from hypothesis import given, settings, strategies as st

from crgnla.crmodel import load_fixture
from crgnla.errors import HomogeneityError, UsageError, ValidationError
from crgnla.exact.numbers import GaussRat
from crgnla.exact.poly import PolyRing
from crgnla.gnla.catalog import gou, m_hc
from crgnla.vfield import (DistributionChart, PolyVectorField, bracket, field_weight,
                           g2_borel_chart, goursat_chart, growth_at, hilbert_cartan_chart,
                           is_cauchy_for, j_from_generators, nilpotent_symbol, prolong_chart,
                           rank_at, real_member)

COORDS = ["x", "y", "z"]
R = PolyRing(COORDS)
small = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@st.composite
def fields(draw):
    comps = {}
    for c in COORDS:
        p = R.zero()
        for _ in range(draw(st.integers(0, 2))):
            e = {v: draw(st.integers(0, 2)) for v in COORDS}
            p = p + R.monomial(e, draw(small))
        comps[c] = p
    return PolyVectorField(R, COORDS, comps)


@settings(max_examples=40, deadline=None)
@given(fields(), fields(), fields())
def test_jacobi(X, Y, Z):
    tot = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert tot.is_zero()


@settings(max_examples=40, deadline=None)
@given(fields(), fields())
def test_bracket_antisymmetric_and_acts_as_commutator(X, Y):
    assert (bracket(X, Y) + bracket(Y, X)).is_zero()
    f = R.var("x") * R.var("y") + R.var("z") ** 2
    assert bracket(X, Y)(f) == X(Y(f)) - Y(X(f))


def test_real_member_splits_real_and_imaginary():
    X = PolyVectorField.partial(R, COORDS, "x")
    iX = X.scale(GaussRat(0, 1))
    assert real_member(iX, [X]) is None
    assert real_member(X.scale(3), [X]) == [3]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_goursat_growth(n):
    g = growth_at(goursat_chart(n))
    assert g.reduced == (2,) + (1,) * (n - 1)
    assert g.cumulative == tuple(range(2, n + 2))


def test_hilbert_cartan_and_g2_borel_growth():
    assert growth_at(hilbert_cartan_chart()).reduced == (2, 1, 2)
    assert growth_at(g2_borel_chart()).reduced == (2, 1, 1, 1, 1)
    assert growth_at(prolong_chart(hilbert_cartan_chart())).reduced == (2, 1, 1, 1, 1)


def test_engel_from_plane():
    plane = goursat_chart(1 + 1)  # contact plane in (x, y0, y1)
    assert growth_at(prolong_chart(plane)).reduced == (2, 1, 1)


def test_strong_flag_of_hilbert_cartan():
    g = growth_at(hilbert_cartan_chart(), weak=False)
    assert g.cumulative[:2] == (2, 3) and g.cumulative[-1] == 5


def test_bracket_with_fiber_direction():
    D = g2_borel_chart()
    X, Y = D.generators
    # [D_x, d/dz3] = -d/dz2
    b = bracket(X, Y)
    assert b == PolyVectorField.partial(X.ring, X.coords, "z2").scale(-1)


def test_cauchy_characteristic_of_engel():
    D = goursat_chart(3)  # Engel: rank 2 in 4 dims
    X, Y = D.generators
    span = [X, Y, bracket(X, Y)]
    pts = [{c: 0 for c in X.coords}, {c: 1 for c in X.coords}]
    assert is_cauchy_for(Y, span, pts)
    assert not is_cauchy_for(X, span, pts)


def test_dependent_generators_rejected():
    X = PolyVectorField.partial(R, COORDS, "x")
    with pytest.raises(ValidationError):
        growth_at(DistributionChart([X, X.scale(2)], {}))


def test_rank_at():
    X = PolyVectorField(R, COORDS, {"x": R.var("y")})
    assert rank_at([X], {"x": 0, "y": 0, "z": 0}) == 0
    assert rank_at([X], {"x": 0, "y": 1, "z": 0}) == 1


def test_field_weight_detects_inhomogeneity():
    w = {"x": 1, "y": 2, "z": 3}
    X = PolyVectorField(R, COORDS, {"x": R.const(1), "y": R.var("x")})
    assert field_weight(X, w) == -1
    bad = PolyVectorField(R, COORDS, {"x": R.const(1), "y": R.const(1)})
    with pytest.raises(HomogeneityError):
        field_weight(bad, w)


def _symbol_of(name, params=None):
    model = load_fixture(name)
    gens = [model.field(n).subs_params(params or {}) for n in ("S1'", "S1''")]
    return nilpotent_symbol(gens, model.weights, label=name), gens


def test_symbol_of_hilbert_cartan_model():
    sym, _ = _symbol_of("CAR")
    assert sym.algebra.same_structure(m_hc())


def test_symbol_generators_bracket_to_e2():
    sym, gens = _symbol_of("ENG")
    assert sym.algebra.bracket_names("e1'", "e1''") == {"e2": 1}
    assert sym.algebra.dims == gou(3).dims


def test_j_from_generators():
    _, gens = _symbol_of("CAR")
    assert j_from_generators(*gens) == [[0, -1], [1, 0]]
    with pytest.raises(UsageError):
        nilpotent_symbol(gens[:1], load_fixture("CAR").weights)
