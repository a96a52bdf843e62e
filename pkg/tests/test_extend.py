from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from crgnla.errors import NotFundamentalError, UsageError
from crgnla.exact import linalg
from crgnla.extend import (GradedCochain, action_matrix, classify_hc_extension, coboundaries,
                           coboundary, cocycles, combine, enumerate_211, extend, is_cocycle,
                           normal_form_211, pairing_matrix, top_cocycles)
from crgnla.extend import _det_form
from crgnla.gnla.catalog import ell6, ell7, gou, heis3, m_hc, ngou
from crgnla.gnla.core import is_fundamental, validate
from crgnla.prolong import der0

ALGEBRAS = [heis3(), gou(3), gou(4), gou(5), ngou(5), m_hc(), ell6(), ell7()]
rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.data())
def test_coboundaries_are_cocycles(m, data):
    degree = data.draw(st.integers(2, m.depth))
    alpha = {k: data.draw(rats) for k in m.level_indices(degree)}
    assert is_cocycle(coboundary(alpha, m, degree))


def test_cocycle_basis_is_closed():
    for m in ALGEBRAS:
        for w in cocycles(m):
            assert is_cocycle(w)


@pytest.mark.parametrize("m,deg,dim", [(m_hc(), 4, 3), (gou(4), 5, 2), (gou(3), 4, 1),
                                       (ngou(5), 6, 0), (gou(5), 6, 1), (heis3(), 3, 2)],
                         ids=str)
def test_top_cocycle_dimensions(m, deg, dim):
    assert len(cocycles(m, deg)) == dim


def test_top_degree_has_no_coboundaries():
    assert coboundaries(m_hc(), 4) == []
    assert len(coboundaries(m_hc(), 3)) == 2


def test_even_goursat_cocycles():
    # the second class is the one that produces the non-Goursat bracket [e2, e5] etc.
    Z = cocycles(gou(6))
    assert [str(w) for w in Z] == ["w(e1',e6) = 1",
                                   "w(e1'',e6) = 1, w(e2,e5) = -1, w(e3,e4) = 1"]


def test_non_goursat_five_has_no_extension():
    # every extension of nGou(5) would leave e5 central outside the bottom grade
    m = ngou(5)
    assert cocycles(m) == []
    with pytest.raises(UsageError):
        extend(m, [])


@pytest.mark.parametrize("m", [gou(3), gou(5), m_hc(), ell6()], ids=lambda m: m.label)
def test_extend_then_truncate_recovers(m):
    for w in cocycles(m):
        try:
            ext = extend(m, [w])
        except NotFundamentalError:
            continue
        assert validate(ext).ok
        assert ext.truncate(m.depth).same_structure(m)
        assert top_cocycles(ext)[0].values == w.values


def test_extend_rejects_non_cocycles():
    m = m_hc()
    bad = GradedCochain.from_dict(m, 4, {("e1'", "e3''"): 1})
    assert not is_cocycle(bad)
    with pytest.raises(UsageError):
        extend(m, [bad])


def test_non_fundamental_extension_flagged():
    from crgnla.gnla.core import GNLA

    m = GNLA.from_relations([("a", 1), ("b", 1), ("c", 1), ("d", 2)], [("a", "b", {"d": 1})])
    # pairing d with a only: c stays central above the bottom grade
    w = GradedCochain.from_dict(m, 3, {("a", "d"): 1})
    with pytest.raises(NotFundamentalError):
        extend(m, [w])
    ext = extend(m, [w], require_fundamental=False)
    assert not is_fundamental(ext).ok


def _hc(x, y, z=0):
    return GradedCochain.from_dict(m_hc(), 4, {("e1'", "e3'"): x, ("e1''", "e3''"): y,
                                               ("e1'", "e3''"): z, ("e1''", "e3'"): z})


def test_identity_cocycle_is_ell6():
    w = _hc(1, 1)
    t = classify_hc_extension(w)
    assert t.tag == "elliptic" and t.det == 1
    assert extend(m_hc(), [w], label="ell6").same_structure(ell6())


@pytest.mark.parametrize("x,y,z,tag", [(1, -1, 0, "hyperbolic"), (1, 0, 0, "parabolic"),
                                       (0, 0, 1, "hyperbolic"), (2, 3, 1, "elliptic"),
                                       (1, 1, 1, "parabolic")])
def test_det_sign_classes(x, y, z, tag):
    assert classify_hc_extension(_hc(x, y, z)).tag == tag


def test_mixed_pairings_must_be_symmetric():
    assert not is_cocycle(GradedCochain.from_dict(m_hc(), 4, {("e1'", "e3''"): 1,
                                                             ("e1''", "e3'"): -1}))


def test_pair_classification_matches_ell7():
    ws = top_cocycles(ell7())
    assert classify_hc_extension(ws).tag == "elliptic"
    assert classify_hc_extension([_hc(1, -1), _hc(0, 0, 1)]).tag == "elliptic"
    assert classify_hc_extension([_hc(1, 1), _hc(0, 0, 1)]).tag == "hyperbolic"
    assert classify_hc_extension([_hc(1, 0), _hc(0, 0, 1)]).tag == "parabolic"


def test_det_form_is_conformally_invariant_under_der0():
    Z = cocycles(m_hc(), 4)
    Ms = [pairing_matrix(w) for w in Z]
    G = [[_det_form(A, B) for B in Ms] for A in Ms]
    for A in der0(m_hc()):
        R = action_matrix(A, Z)
        Rt = [list(r) for r in zip(*R)]
        lhs = linalg.mat_mul(Rt, G)
        lhs = [[lhs[i][j] + linalg.mat_mul(G, R)[i][j] for j in range(3)] for i in range(3)]
        # lhs = c * G for a scalar c
        c = next(lhs[i][j] / G[i][j] for i in range(3) for j in range(3) if G[i][j])
        assert lhs == [[c * g for g in row] for row in G]


def test_action_of_der0_is_a_representation():
    Z = cocycles(m_hc(), 4)
    ds = der0(m_hc())
    for A in ds:
        for B in ds:
            AB = linalg.mat_mul(A.matrix, B.matrix)
            BA = linalg.mat_mul(B.matrix, A.matrix)
            C = type(A)(A.algebra, tuple(tuple(AB[i][j] - BA[i][j] for j in range(len(AB)))
                                         for i in range(len(AB))))
            RA, RB = action_matrix(A, Z), action_matrix(B, Z)
            comm = [[x - y for x, y in zip(r1, r2)]
                    for r1, r2 in zip(linalg.mat_mul(RA, RB), linalg.mat_mul(RB, RA))]
            assert action_matrix(C, Z) == comm
    # trace-free part has rank 3: the adjoint representation of sl2
    flat = [[x for r in action_matrix(d, Z) for x in r] for d in ds[1:]]
    assert linalg.rank(flat) == 3


def test_pairing_matrix_requires_hc_degree():
    with pytest.raises(UsageError):
        pairing_matrix(cocycles(gou(3))[0])


def test_combine():
    Z = cocycles(gou(4))
    w = combine(Z, [1, 2])
    assert is_cocycle(w)


def _scramble(m, lam, p, s):
    """Apply e1' -> p e1' + lam e1'', e1'' -> s e1'' and extend to the whole algebra."""
    from crgnla.cxstruct import extend_automorphism

    G = extend_automorphism(m, [[p, 0], [lam, s]])
    cols = [[G[i][j] for i in range(m.dim)] for j in range(m.dim)]
    return m.transform(cols, label="scrambled")


@pytest.mark.parametrize("m,name", [(gou(4), "Gou(4)"), (gou(7), "Gou(7)"), (ngou(5), "nGou(5)"),
                                    (ngou(7), "nGou(7)")], ids=str)
def test_normal_form_recovers_class(m, name):
    # the non-Goursat symbols only admit diagonal automorphisms
    shears = (2, Fraction(-1, 2)) if name.startswith("Gou") else (0, 0)
    for lam, p, s in zip((0,) + shears, (1, 3, Fraction(5, 3)), (1, -1, 2)):
        assert normal_form_211(_scramble(m, lam, p, s)).name == name


def test_normal_form_needs_211_growth():
    with pytest.raises(UsageError):
        normal_form_211(m_hc())


def test_enumeration_to_depth_9():
    rep = enumerate_211(9)
    assert rep.counts() == {3: 1, 4: 1, 5: 2, 6: 1, 7: 2, 8: 1, 9: 2}
    assert rep.per_depth[9] == ["Gou(9)", "nGou(9)"]
    assert all(d <= 2 for d in rep.cocycle_dims.values())
    assert rep.cocycle_dims["nGou(5)"] == 0


def test_enumeration_depth_limits():
    with pytest.raises(UsageError):
        enumerate_211(10)
    with pytest.raises(UsageError):
        enumerate_211(2)
