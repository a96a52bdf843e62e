from fractions import Fraction

import pytest

from crgnla.cxstruct import ComplexStructure
from crgnla.errors import UsageError
from crgnla.exact import linalg
from crgnla.gnla.catalog import ell6, gou, heis3, m_hc, ngou
from crgnla.prolong import (STANDARD_J, cr_g0, der0, grading_element, prolong, symmetry_bound)


def test_der0_starts_with_grading_element():
    for m in (heis3(), gou(4), m_hc()):
        ds = der0(m)
        assert ds[0] == grading_element(m)
        assert all(d.is_derivation() for d in ds)


@pytest.mark.parametrize("m,dim", [(heis3(), 4), (m_hc(), 4), (gou(3), 3), (gou(6), 3),
                                   (ngou(5), 2), (ell6(), 2)], ids=lambda x: str(x))
def test_der0_dimensions(m, dim):
    assert len(der0(m)) == dim


@pytest.mark.parametrize("m,r", [(heis3(), 2), (m_hc(), 2), (gou(4), 1), (ngou(5), 1), (ell6(), 2)],
                         ids=lambda x: str(x))
def test_cr_part_of_der0(m, r):
    assert cr_g0(m, STANDARD_J).r == r


def test_cr_g0_rejects_non_complex_structures():
    with pytest.raises(UsageError):
        cr_g0(heis3(), [[1, 0], [0, -1]])


def test_su12():
    rep = prolong(heis3(), cr_g0(heis3(), STANDARD_J))
    assert rep.dims_negative == [1, 2] and rep.dim_g0 == 2
    assert rep.dims_positive == [2, 1] and rep.terminated and rep.total == 8


def test_heisenberg_with_full_der0_is_infinite_type():
    rep = prolong(heis3(), der0(heis3()), max_degree=4)
    assert not rep.terminated and rep.total is None
    # contact fields: g_k <-> polynomials in (x, y, z) of weighted degree k+2, weights (1, 1, 2)
    count = lambda n: sum(n - 2 * c + 1 for c in range(n // 2 + 1))
    assert rep.dims_positive == [count(k + 2) for k in range(1, 5)]


def test_hilbert_cartan_with_full_der0_is_g2():
    rep = prolong(m_hc(), der0(m_hc()))
    assert rep.dims_positive == [2, 1, 2] and rep.total == 14


@pytest.mark.parametrize("m", [gou(3), gou(5), ngou(5), m_hc(), ell6(), ngou(7)],
                         ids=lambda m: m.label)
@pytest.mark.parametrize("J", [STANDARD_J, ComplexStructure(3, -1).matrix])
def test_rigid_with_cr_g0(m, J):
    assert prolong(m, cr_g0(m, J)).rigid


def _intersected_g1_dim(m, J):
    """Unrestricted g1 first, then keep the part whose values on g_-1 lie in the CR g0."""
    full = der0(m)
    rep = prolong(m, full, max_degree=1)
    if not rep.dims_positive:
        return 0
    g1 = rep.components[1]
    cr = cr_g0(m, J).basis
    flat = lambda mat: [x for row in mat for x in row]
    cr_flat = [flat(d.matrix) for d in cr]
    ones = m.level_indices(1)
    # unknowns: c_s for g1 basis, d_{a,t} for cr coordinates of phi(e_a)
    ns, nt = len(g1), len(cr)
    nvars = ns + len(ones) * nt
    rows = []
    for ai, a in enumerate(ones):
        vals = []
        for phi in g1:
            mat = [[sum((x * full[k].matrix[i][j] for k, x in enumerate(phi[a])), Fraction(0))
                    for j in range(m.dim)] for i in range(m.dim)]
            vals.append(flat(mat))
        for p in range(m.dim * m.dim):
            row = [vals[s][p] for s in range(ns)] + [Fraction(0)] * (len(ones) * nt)
            for t in range(nt):
                row[ns + ai * nt + t] = -cr_flat[t][p]
            rows.append(row)
    sol = linalg.nullspace(rows, nvars)
    return linalg.rank([v[:ns] for v in sol]) if sol else 0


@pytest.mark.parametrize("m", [heis3(), gou(3), m_hc(), ngou(5)], ids=lambda m: m.label)
@pytest.mark.parametrize("J", [STANDARD_J, ComplexStructure(2, 1).matrix,
                               ComplexStructure(Fraction(-1, 3), 2).matrix])
def test_cr_filter_matches_intersection_at_degree_one(m, J):
    restricted = prolong(m, cr_g0(m, J), max_degree=1)
    got = restricted.dims_positive[0] if restricted.dims_positive else 0
    assert got == _intersected_g1_dim(m, J)


def test_symmetry_bound():
    assert symmetry_bound(heis3(), STANDARD_J) == 8
    assert symmetry_bound(m_hc(), STANDARD_J) == 7
    assert symmetry_bound(gou(3), STANDARD_J) == 5
    assert symmetry_bound(ell6(), STANDARD_J) == 8


def test_prolong_needs_positive_degree():
    with pytest.raises(UsageError):
        prolong(gou(3), der0(gou(3)), max_degree=0)
