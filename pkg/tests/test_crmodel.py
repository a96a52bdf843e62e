from fractions import Fraction

import pytest
import sympy as sp

from crgnla.crmodel import (FIXTURES, closure, load_fixture, load_model_file, model_symbol,
                            parse_model, realify, verify_tangency)
from crgnla.crmodel.fixtures import fixture_text
from crgnla.crmodel.model import commuting_subset
from crgnla.crmodel.parser import parse, poly_to_expr
from crgnla.errors import (ClosureError, HomogeneityError, NotFundamentalError, ParseError, RealityError,
                           SpecializeParametersError, ValidationError)
from crgnla.gnla.catalog import m_hc
from crgnla.extend import normal_form_211

HEAD = "coord z : weight 1; coord u : weight 2;"


# ------------------------------------------------------------ parser

def test_parse_basic_model():
    pm = parse(HEAD + "Im(u) = |z|^2; field S = d(z) + 2*i*z*d(u);")
    assert [c for c, _ in pm.coords] == ["z", "u"]
    assert set(pm.equations) == {"u"}
    name, comps = pm.fields[0]
    assert name == "S" and set(comps) == {"z", "u"}


@pytest.mark.parametrize("text,err,match", [
    (HEAD + "Im(u) = i*|z|^2;", RealityError, "not real"),
    (HEAD + "Im(u) = Re(z^3);", HomogeneityError, "weight 3"),
    (HEAD + "Im(u) = |z|^2; field S = conj(z)*d(z);", ParseError, "not holomorphic"),
    (HEAD + "Im(u) = |z|^2; field S = d(z)*d(u);", ParseError, "linear"),
    (HEAD + "Im(u) = |z|^2", ParseError, "missing ';'"),
    (HEAD + "Im(u) = |q|^2;", ParseError, "unknown name"),
    (HEAD + "Im(u) = z/z;", ParseError, "division"),
    (HEAD + "Im(u) = |z|^3;", ParseError, "even"),
    (HEAD + "Im(u) = |z|^2; Im(u) = |z|^2;", ParseError, "second equation"),
    ("coord i : weight 1;", ParseError, "reserved"),
    (HEAD + "Im(u) = |z|^2 $;", ParseError, "unexpected character"),
])
def test_parse_errors(text, err, match):
    with pytest.raises(err, match=match):
        parse(text)


def test_division_by_constant_and_comments():
    pm = parse(HEAD + "# comment\nIm(u) = |z|^2/2;")
    assert pm.equations["u"] == parse(HEAD + "Im(u) = 1/2*z*conj(z);").equations["u"]


@pytest.mark.parametrize("name", FIXTURES)
def test_printing_round_trips(name):
    m = load_fixture(name)
    lines = [f"coord {c} : weight {w};" for c, w in m.coords] + [f"param {p};" for p in m.params]
    lines += [f"Im({c}) = {poly_to_expr(P)};" for c, P in m.equations.items()]
    for n, f in m.fields.items():
        lines.append(f"field {n} = " + " + ".join(f"({poly_to_expr(p)})*d({c})"
                                                 for c, p in f.comps.items()) + ";")
    back = parse_model("\n".join(lines), name)
    assert back.equations == m.equations
    assert all(back.fields[n] == m.fields[n] for n in m.fields)


def test_load_model_file_falls_back_to_fixtures(tmp_path):
    assert load_model_file("fixtures/2123.crm").name == "2123"
    p = tmp_path / "mine.crm"
    p.write_text(HEAD + "Im(u) = |z|^2; field S = d(u);")
    assert load_model_file(str(p)).name == "mine"


# ------------------------------------------------------------ independent tangency oracle

def _to_sympy(p, syms):
    out = 0
    for e, c in p.terms.items():
        term = sp.Rational(c.re.numerator, c.re.denominator) + \
            sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        for n, k in zip(p.ring.names, e):
            if k:
                term *= syms[n] ** k
        out += term
    return out


def sympy_tangent(model, field_name) -> bool:
    """2 Re S(Im w_k - P_k) = Im S^k - 2 Re(sum_c S^c d_c P_k), zero on M."""
    syms = {}
    real = {}
    for c in model.coord_names:
        syms[c] = sp.Symbol(c)
        syms[c + "_bar"] = sp.Symbol(c + "_bar")
        real[c] = (sp.Symbol("X_" + c, real=True), sp.Symbol("Y_" + c, real=True))
    for p in model.params:
        syms[p] = sp.Symbol(p, real=True)
    S = model.field(field_name)
    comps = {c: _to_sympy(S.component(c), syms) for c in model.coord_names}
    # on M: c = X + iY with Y_k = P_k for the defined coordinates
    sub = {}
    for c in model.coord_names:
        X, Y = real[c]
        sub[syms[c]] = X + sp.I * Y
        sub[syms[c + "_bar"]] = X - sp.I * Y
    Ps = {c: _to_sympy(P, syms) for c, P in model.equations.items()}
    ydefs = {}
    for _ in range(len(Ps) + 1):
        for c, P in Ps.items():
            ydefs[real[c][1]] = sp.expand(P.subs(sub, simultaneous=True)).subs(ydefs)
    for c, P in Ps.items():
        hol = sum(comps[d] * sp.diff(P, syms[d]) for d in model.coord_names)
        expr = comps[c] * (-sp.I) - 2 * hol  # S(Im w) = S^w / 2i, doubled; S(P) doubled
        expr = sp.expand(expr.subs(sub, simultaneous=True))
        resid = sp.re(expr)
        for _ in range(len(Ps) + 1):
            resid = sp.expand(resid.subs(ydefs))
        if sp.simplify(resid) != 0:
            return False
    return True


@pytest.mark.parametrize("name", ["ENG", "CAR", "2121", "2121_ainf", "2122_ab0", "G2B", "GOU5"])
def test_tangency_agrees_with_sympy_oracle(name):
    m = load_fixture(name)
    for f in m.fields:
        assert verify_tangency(m, f).ok
        assert sympy_tangent(m, f)


def test_sympy_oracle_rejects_a_wrong_field():
    m = parse_model(fixture_text("2121") + "\nfield S0J = i*z*d(z) + v*d(w) - w*d(v);", "2121")
    assert not verify_tangency(m, "S0J").ok
    assert not sympy_tangent(m, "S0J")


def test_realification_is_ordered():
    re = realify(load_fixture("G2B"))
    assert re.order == ["s", "u", "v", "w"]


def test_cyclic_equations_rejected():
    from crgnla.errors import UsageError

    m = parse_model("coord z : weight 1; coord u : weight 2; coord v : weight 2;"
                    "Im(u) = Re(v); Im(v) = Re(u);")
    with pytest.raises(UsageError, match="cyclic"):
        realify(m)


# ------------------------------------------------------------ closure

@pytest.mark.parametrize("name,dim,abelian", [("ENG", 5, 3), ("CAR", 7, 3), ("2121", 7, 4),
                                              ("2121_ainf", 8, 4), ("2122", 8, 5),
                                              ("2122_ab0", 9, 5), ("2123", 10, 6), ("G2B", 7, 3),
                                              ("GOU5", 7, 5)])
def test_closure(name, dim, abelian):
    rep = closure(load_fixture(name))
    assert rep.closed and rep.dimension == dim
    assert len(rep.commuting) == abelian


def test_g2b_abelian_triple():
    m = load_fixture("G2B")
    fs = [m.field(n) for n in ("S3", "S4", "S5")]
    assert commuting_subset(fs) == [0, 1, 2]


def test_closure_reports_non_tangent_fields():
    m = parse_model(fixture_text("2121") + "\nfield S0J = i*z*d(z) + v*d(w) - w*d(v);", "2121")
    with pytest.raises(ValidationError, match="S0J"):
        closure(m)


def test_closure_detects_escape_from_span():
    # d(z) alone is not tangent; a tangent pair whose bracket leaves the span:
    m = parse_model(HEAD + "Im(u) = |z|^2; field A = d(z) + 2*i*z*d(u); field B = i*d(z) + 2*z*d(u);")
    with pytest.raises(ClosureError):
        closure(m)


# ------------------------------------------------------------ symbols

def test_symbol_of_hilbert_cartan_model():
    sym = model_symbol(load_fixture("CAR"))
    assert sym.algebra.same_structure(m_hc())
    assert sym.r == 2 and sym.bound == 7


def test_symbol_of_engel_model():
    sym = model_symbol(load_fixture("ENG"))
    assert normal_form_211(sym.algebra).name == "Gou(3)"
    assert sym.bound == 5


def test_symbol_needs_parameters():
    with pytest.raises(SpecializeParametersError):
        model_symbol(load_fixture("2121"))


@pytest.mark.parametrize("a,tag", [(2, "elliptic"), (1, "elliptic"), (Fraction(4, 5), "elliptic"),
                                   (Fraction(1, 2), "hyperbolic"), (0, "hyperbolic"),
                                   (Fraction(-7, 10), "hyperbolic"), (-2, "elliptic")])
def test_2121_type_changes_at_three_quarters(a, tag):
    assert model_symbol(load_fixture("2121"), {"a": Fraction(a)}, with_bound=False
                        ).extension_type.tag == tag


@pytest.mark.parametrize("a", [Fraction(3, 4), Fraction(-3, 4)])
def test_2121_symbol_degenerates_on_the_boundary(a):
    # one of the two pairings vanishes, leaving a central element above the bottom grade
    with pytest.raises(NotFundamentalError):
        model_symbol(load_fixture("2121"), {"a": a}, with_bound=False)


@pytest.mark.parametrize("a,b,tag", [(0, 0, "elliptic"), (Fraction(1, 2), 0, "elliptic"),
                                     (Fraction(3, 4), 0, "parabolic"),
                                     (Fraction(9, 20), Fraction(3, 5), "parabolic"),
                                     (Fraction(9, 25), Fraction(12, 25), "elliptic"),
                                     (1, 1, "hyperbolic"), (Fraction(3, 2), 0, "hyperbolic")])
def test_2122_type_boundary_is_nine_sixteenths(a, b, tag):
    sym = model_symbol(load_fixture("2122"), {"a": Fraction(a), "b": Fraction(b)}, with_bound=False)
    assert sym.extension_type.tag == tag


def test_2121_pairing_matches_hand_computation():
    # [S1', S3'] and [S1'', S3''] carry 4a + 3 and 4a - 3; the symbol ratio is their quotient
    a = Fraction(5, 2)
    sym = model_symbol(load_fixture("2121"), {"a": a}, with_bound=False)
    assert sym.algebra.bracket_names("e1''", "e3''") == {"e4": (4 * a - 3) / (4 * a + 3)}


@pytest.mark.parametrize("name,params,r", [("2121_ainf", None, 2), ("2122_ab0", None, 2),
                                           ("2123", None, 2), ("2121", {"a": 1}, 1),
                                           ("GOU5", None, 1)])
def test_r_and_bound(name, params, r):
    m = load_fixture(name)
    sym = model_symbol(m, params)
    assert sym.r == r and sym.bound == m.real_dim + r


def test_goursat_tube_has_rotated_J():
    sym = model_symbol(load_fixture("GOU5"))
    assert sym.J == [[0, 1], [-1, 0]]
    assert normal_form_211(sym.algebra).name == "Gou(5)"
