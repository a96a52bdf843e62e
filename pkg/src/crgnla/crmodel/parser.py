"""Parser for CR model files.

Statements end with ``;``::

    coord z : weight 1;
    param a;
    Im(u) = |z|^2;
    field S1 = d(z) + 2*i*z*d(u);

Expressions use rational literals, ``i``, coordinate and parameter names,
``conj(.)``, ``Re(.)``, ``Im(.)``, ``|.|^2`` and ``+ - * / ^``.  Division is
allowed by nonzero constants only.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import HomogeneityError, ParseError, RealityError
from ..exact.numbers import GaussRat, I, rat_str
from ..exact.poly import MPoly, PolyRing

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[-+*/^()|;:=,])
""", re.VERBOSE)

RESERVED = {"i", "d", "conj", "Re", "Im", "coord", "param", "field", "weight"}


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


def conj_name(c: str) -> str:
    return f"{c}_bar"


def dname(c: str) -> str:
    return f"d({c})"


class _ExprParser:
    def __init__(self, tokens: list[Token], ring: PolyRing, names: dict[str, str]):
        self.toks = tokens
        self.k = 0
        self.ring = ring
        self.names = names  # identifier -> ring variable

    @property
    def cur(self) -> Token:
        return self.toks[self.k]

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.cur
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = text or kind
            got = t.text or "end of statement"
            raise ParseError(f"expected {want!r}, got {got!r}", t.pos)
        self.k += 1
        return t

    def expr(self) -> MPoly:
        out = self.term()
        while self.cur.text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> MPoly:
        out = self.unary()
        while self.cur.text in ("*", "/"):
            t = self.take()
            rhs = self.unary()
            if t.text == "*":
                out = out * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero constants", t.pos)
                out = out.scale(rhs.constant_term().inverse())
        return out

    def unary(self) -> MPoly:
        if self.cur.text == "-":
            self.take()
            return -self.unary()
        if self.cur.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.cur.text == "^":
            self.take()
            t = self.take(kind="num")
            if "." in t.text:
                raise ParseError("exponent must be a nonnegative integer", t.pos)
            base = base ** int(t.text)
        return base

    def atom(self) -> MPoly:
        t = self.cur
        R = self.ring
        if t.kind == "num":
            self.take()
            return R.const(Fraction(t.text))
        if t.text == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t.text == "|":
            self.take()
            e = self.expr()
            self.take("|")
            if self.cur.text != "^":
                raise ParseError("absolute value must be squared: |.|^2", self.cur.pos)
            self.take("^")
            p = self.take(kind="num")
            if p.text != "2" and (not p.text.isdigit() or int(p.text) % 2):
                raise ParseError("only even powers of |.| are polynomial", p.pos)
            return (e * e.conj()) ** (int(p.text) // 2)
        if t.kind == "name":
            self.take()
            if t.text == "i":
                return R.const(I)
            if t.text in ("conj", "Re", "Im"):
                self.take("(")
                e = self.expr()
                self.take(")")
                if t.text == "conj":
                    return e.conj()
                return e.real_part() if t.text == "Re" else e.imag_part()
            if t.text == "d":
                self.take("(")
                c = self.take(kind="name")
                self.take(")")
                v = dname(c.text)
                if v not in R.index:
                    raise ParseError(f"d({c.text}) is not allowed here", c.pos)
                return R.var(v)
            if t.text in self.names:
                return R.var(self.names[t.text])
            raise ParseError(f"unknown name {t.text!r}", t.pos)
        raise ParseError(f"unexpected {t.text or 'end of statement'!r}", t.pos)


@dataclass
class ParsedModel:
    coords: list  # [(name, weight)]
    params: list
    equations: dict  # coordinate -> MPoly (real, in ``ring``)
    fields: list  # [(name, {coord: MPoly})] holomorphic components in ``ring``
    ring: PolyRing
    source: str = field(default="", repr=False)


def _statements(tokens: list[Token]):
    cur = []
    for t in tokens:
        if t.kind == "eof":
            break
        if t.text == ";":
            if cur:
                yield cur + [Token("eof", "", t.pos)]
            cur = []
        else:
            cur.append(t)
    if cur:
        raise ParseError("missing ';' at end of statement", tokens[-1].pos)


def _monomial_str(ring: PolyRing, e) -> str:
    return "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(ring.names, e) if k) or "1"


def parse(text: str) -> ParsedModel:
    tokens = tokenize(text)
    stmts = list(_statements(tokens))
    coords: list[tuple[str, int]] = []
    params: list[str] = []
    seen: set[str] = set()
    rest = []
    for st in stmts:
        head = st[0]
        if head.text == "coord":
            p = _ExprParser(st, PolyRing([]), {})
            p.take("coord")
            n = p.take(kind="name")
            p.take(":")
            p.take("weight")
            w = p.take(kind="num")
            p.take(kind="eof")
            _new_name(n, seen)
            coords.append((n.text, int(w.text)))
        elif head.text == "param":
            p = _ExprParser(st, PolyRing([]), {})
            p.take("param")
            n = p.take(kind="name")
            p.take(kind="eof")
            _new_name(n, seen)
            params.append(n.text)
        elif head.text in ("Im", "field"):
            rest.append(st)
        else:
            raise ParseError(f"unknown statement starting with {head.text!r}", head.pos)
    if not coords:
        raise ParseError("no coordinates declared", 0)
    names = [c for c, _ in coords]
    ring_names = []
    conj = {}
    for c in names:
        ring_names += [c, conj_name(c)]
        conj[c] = conj_name(c)
    ring_names += params
    ring = PolyRing(ring_names, conj)
    ident = {c: c for c in names}
    ident.update({p: p for p in params})
    fring = PolyRing(ring_names + [dname(c) for c in names], conj)
    weights = dict(coords)
    equations: dict[str, MPoly] = {}
    fields = []
    field_names: set[str] = set()
    for st in rest:
        if st[0].text == "Im":
            p = _ExprParser(st, ring, ident)
            p.take("Im")
            p.take("(")
            lhs = p.take(kind="name")
            p.take(")")
            p.take("=")
            rhs = p.expr()
            p.take(kind="eof")
            if lhs.text not in weights:
                raise ParseError(f"Im({lhs.text}) of an undeclared coordinate", lhs.pos)
            if lhs.text in equations:
                raise ParseError(f"second equation for {lhs.text}", lhs.pos)
            _check_real(rhs, lhs.text)
            _check_homogeneous(rhs, weights, lhs.text)
            equations[lhs.text] = rhs
        else:
            p = _ExprParser(st, fring, ident)
            p.take("field")
            n = p.take(kind="name")
            if n.text in field_names:
                raise ParseError(f"duplicate field {n.text}", n.pos)
            field_names.add(n.text)
            p.take("=")
            e = p.expr()
            p.take(kind="eof")
            fields.append((n.text, _split_field(e, names, ring, n)))
    return ParsedModel(coords, params, equations, fields, ring, text)


def _new_name(tok: Token, seen: set):
    if tok.text in RESERVED:
        raise ParseError(f"{tok.text!r} is reserved", tok.pos)
    if tok.text in seen:
        raise ParseError(f"{tok.text!r} declared twice", tok.pos)
    seen.add(tok.text)


def _check_real(P: MPoly, lhs: str):
    Q = P.conj()
    if Q != P:
        diff = P - Q
        e = next(iter(sorted(diff.terms)))
        raise RealityError(f"Im({lhs}) = ... is not real: monomial {_monomial_str(P.ring, e)} "
                           f"has coefficient {P.terms.get(e, GaussRat(0))} but its conjugate "
                           f"partner does not match")


def _check_homogeneous(P: MPoly, weights: dict, lhs: str):
    ring = P.ring
    target = weights[lhs]
    wvec = []
    for n in ring.names:
        base = n[:-4] if n.endswith("_bar") and n[:-4] in weights else n
        wvec.append(weights.get(base, 0))
    for e in P.terms:
        w = sum(a * b for a, b in zip(wvec, e))
        if w != target:
            raise HomogeneityError(f"Im({lhs}) = ...: monomial {_monomial_str(ring, e)} has weight "
                                   f"{w}, expected {target}")


def _split_field(e: MPoly, coords, ring: PolyRing, tok: Token) -> dict:
    fr = e.ring
    didx = {fr.index[dname(c)]: c for c in coords}
    comps: dict[str, dict] = {}
    for exps, c in e.terms.items():
        ds = [(k, p) for k, p in enumerate(exps) if k in didx and p]
        if len(ds) != 1 or ds[0][1] != 1:
            raise ParseError(f"field {tok.text} must be linear in d(.) terms", tok.pos)
        k = ds[0][0]
        base = tuple(p for j, p in enumerate(exps) if j not in didx)
        comps.setdefault(didx[k], {})[base] = c
    out = {}
    for c, terms in comps.items():
        p = MPoly(ring, terms)
        for v in p.variables():
            if v.endswith("_bar"):
                raise ParseError(f"field {tok.text} is not holomorphic (uses conj of {v[:-4]})",
                                 tok.pos)
        out[c] = p
    return out


# ------------------------------------------------------------ printing

def _coeff_str(c: GaussRat) -> str:
    if not c.im:
        return rat_str(c.re)
    if not c.re:
        if abs(c.im) == 1:
            return "i" if c.im == 1 else "-i"
        return f"{rat_str(c.im)}*i"
    return f"({rat_str(c.re)} + {rat_str(c.im)}*i)".replace("+ -", "- ")


def poly_to_expr(p: MPoly) -> str:
    """Grammar-compatible text for a polynomial (conjugates written conj(.))."""
    if p.is_zero():
        return "0"
    ring = p.ring
    names = [f"conj({n[:-4]})" if n.endswith("_bar") else n for n in ring.names]
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if not mono:
            parts.append(_coeff_str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{_coeff_str(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")
