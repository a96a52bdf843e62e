"""Polynomial vector fields, derived flags at a point, the projectivization
chart of a rank-2 distribution and nilpotent symbols of graded fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import HomogeneityError, UsageError, ValidationError
from .exact import linalg
from .exact.numbers import GaussRat
from .exact.poly import MPoly, PolyRing
from .gnla.core import GNLA, check_valid, check_fundamental
from .gnla.ops import standard_names


class PolyVectorField:
    """X = sum_j X^j d/dx_j over a fixed list of coordinates in a polynomial ring.

    Ring variables that are not coordinates (parameters) are constants for
    differentiation.
    """

    __slots__ = ("ring", "coords", "comps")

    def __init__(self, ring: PolyRing, coords: Sequence[str], comps: Mapping[str, MPoly] | None = None):
        self.ring = ring
        self.coords = tuple(coords)
        for c in self.coords:
            if c not in ring.index:
                raise UsageError(f"coordinate {c} is not a ring variable")
        self.comps = {}
        for c, p in (comps or {}).items():
            if c not in self.coords:
                raise UsageError(f"component along unknown coordinate {c}")
            p = p if isinstance(p, MPoly) else ring.const(p)
            if not p.is_zero():
                self.comps[c] = p

    @classmethod
    def partial(cls, ring, coords, c) -> "PolyVectorField":
        return cls(ring, coords, {c: ring.const(1)})

    def component(self, c: str) -> MPoly:
        return self.comps.get(c) or self.ring.zero()

    def __call__(self, f: MPoly) -> MPoly:
        out = self.ring.zero()
        for c, p in self.comps.items():
            d = f.diff(c)
            if not d.is_zero():
                out = out + p * d
        return out

    def _check(self, other):
        if self.coords != other.coords or self.ring != other.ring:
            raise UsageError("vector fields live on different coordinate systems")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.comps)
        for c, p in other.comps.items():
            comps[c] = comps[c] + p if c in comps else p
        return PolyVectorField(self.ring, self.coords, comps)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "PolyVectorField":
        if isinstance(k, MPoly):
            return PolyVectorField(self.ring, self.coords, {c: p * k for c, p in self.comps.items()})
        k = GaussRat.coerce(k)
        return PolyVectorField(self.ring, self.coords, {c: p.scale(k) for c, p in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        return (isinstance(other, PolyVectorField) and self.coords == other.coords
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.coords, tuple(sorted((c, p) for c, p in self.comps.items()))))

    def at(self, point: Mapping[str, object]) -> list:
        """Component values at a point (all ring variables not given stay symbolic)."""
        return [self.component(c).evaluate(point) if c in self.comps else GaussRat(0)
                for c in self.coords]

    def subs_params(self, values: Mapping[str, object]) -> "PolyVectorField":
        return PolyVectorField(self.ring, self.coords,
                               {c: p.subs({k: self.ring.const(v) for k, v in values.items()
                                           if k in self.ring.index})
                                for c, p in self.comps.items()})

    def to_ring(self, ring: PolyRing, coords: Sequence[str] | None = None) -> "PolyVectorField":
        return PolyVectorField(ring, coords or self.coords,
                               {c: p.to_ring(ring) for c, p in self.comps.items()})

    def __str__(self):
        if not self.comps:
            return "0"
        return " + ".join(f"({self.comps[c]})*d({c})" for c in self.coords if c in self.comps)

    __repr__ = __str__

    def to_json(self):
        from .crmodel.parser import poly_to_expr

        return {"coords": list(self.coords),
                "components": {c: poly_to_expr(self.comps[c]) for c in self.coords if c in self.comps}}


def bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """[X, Y]^j = X(Y^j) - Y(X^j)."""
    X._check(Y)
    comps = {}
    for c in X.coords:
        v = X(Y.component(c)) - Y(X.component(c))
        if not v.is_zero():
            comps[c] = v
    return PolyVectorField(X.ring, X.coords, comps)


def _real_coeff_vector(fields: Sequence[PolyVectorField]):
    """Flatten fields into real coordinate vectors (re and im of every coefficient)."""
    keys = []
    seen = set()
    for f in fields:
        for c, p in f.comps.items():
            for e in p.terms:
                if (c, e) not in seen:
                    seen.add((c, e))
                    keys.append((c, e))
    vecs = []
    for f in fields:
        v = []
        for c, e in keys:
            x = f.comps[c].terms.get(e) if c in f.comps else None
            x = x or GaussRat(0)
            v.extend((x.re, x.im))
        vecs.append(v)
    return vecs


def real_member(X: PolyVectorField, S: Sequence[PolyVectorField]):
    """Real coefficients expressing X in the real span of S, or None."""
    vecs = _real_coeff_vector(list(S) + [X])
    return linalg.member(vecs[-1], vecs[:-1])


def _values_at(fields, point, params=None):
    rows = []
    for f in fields:
        if params:
            f = f.subs_params(params)
        vals = f.at(point)
        row = []
        for v in vals:
            if isinstance(v, MPoly):
                if not v.is_constant():
                    raise UsageError(f"field value {v} is not constant at the base point; "
                                     "specialize parameters first")
                v = v.constant_term()
            v = GaussRat.coerce(v)
            row.extend((v.re, v.im))
        rows.append(row)
    return rows


def rank_at(fields: Sequence[PolyVectorField], point, params=None) -> int:
    if not fields:
        return 0
    return linalg.rank(_values_at(fields, point, params))


@dataclass
class DistributionChart:
    generators: list
    base_point: dict

    def __post_init__(self):
        if not self.generators:
            raise UsageError("a distribution needs generators")
        coords = self.generators[0].coords
        for g in self.generators:
            if g.coords != coords:
                raise UsageError("generators use different coordinates")
        for c in coords:
            self.base_point.setdefault(c, 0)

    @property
    def coords(self):
        return self.generators[0].coords

    @property
    def dim(self):
        return len(self.coords)


@dataclass(frozen=True)
class FlagGrowth:
    cumulative: tuple
    reduced: tuple
    weak: bool

    def to_json(self):
        return {"flag": "weak" if self.weak else "strong",
                "cumulative": list(self.cumulative), "reduced": list(self.reduced)}


def _prune(fields):
    """Drop zero fields and Q(i)-linear combinations of earlier ones."""
    fields = [f for f in fields if not f.is_zero()]
    if not fields:
        return []
    keep = linalg.independent_subset(_real_coeff_vector(fields))
    return [fields[i] for i in keep]


def flag_layers(D: DistributionChart, weak: bool = True, max_steps: int | None = None):
    """Spanning sets of the successive members of the weak or strong derived flag."""
    gens = list(D.generators)
    if rank_at(gens, D.base_point) != len(gens):
        raise ValidationError("generators are dependent at the base point")
    steps = max_steps or D.dim + 1
    members = [gens]
    new = gens
    for _ in range(steps):
        cur = members[-1]
        if weak:
            cand = [bracket(g, y) for g in gens for y in new]
        else:
            cand = [bracket(cur[i], cur[j]) for i in range(len(cur)) for j in range(i + 1, len(cur))]
        nxt = _prune(cur + cand)
        new = nxt[len(cur):]
        r_old = rank_at(cur, D.base_point)
        r_new = rank_at(nxt, D.base_point)
        members.append(nxt)
        if r_new == r_old or r_new == D.dim:
            if r_new == r_old:
                members.pop()
            break
    return members


def growth_at(D: DistributionChart, weak: bool = True) -> FlagGrowth:
    members = flag_layers(D, weak)
    cum = [rank_at(m, D.base_point) for m in members]
    red = [cum[0]] + [b - a for a, b in zip(cum, cum[1:])]
    return FlagGrowth(tuple(cum), tuple(red), weak)


def prolong_chart(D: DistributionChart, fiber: str = "p") -> DistributionChart:
    """Affine chart of the projectivization: generators (X + pY, d/dp)."""
    if len(D.generators) != 2:
        raise UsageError("prolongation is defined for rank-2 distributions")
    X, Y = D.generators
    ring = X.ring
    if fiber in ring.index:
        raise UsageError(f"fiber coordinate {fiber} already in use")
    new_ring = PolyRing(ring.names + (fiber,), ring.conjugates)
    coords = X.coords + (fiber,)
    Xn, Yn = X.to_ring(new_ring, coords), Y.to_ring(new_ring, coords)
    p = new_ring.var(fiber)
    gens = [Xn + Yn.scale(p), PolyVectorField.partial(new_ring, coords, fiber)]
    point = dict(D.base_point)
    point[fiber] = 0
    return DistributionChart(gens, point)


def is_cauchy_for(X: PolyVectorField, span: Sequence[PolyVectorField], points: Sequence[Mapping]) -> bool:
    """[X, span] stays in span at each of the sample points (X itself in span)."""
    for pt in points:
        r = rank_at(span, pt)
        if rank_at(list(span) + [X], pt) != r:
            return False
        for Y in span:
            if rank_at(list(span) + [bracket(X, Y)], pt) != r:
                return False
    return True


# ------------------------------------------------------------ charts

def _real_ring(names):
    return PolyRing(names)


def goursat_chart(n: int) -> DistributionChart:
    """Jet coordinates (x, y0, ..., y_{n-1}): D = <d_x + sum y_{k+1} d_{y_k}, d_{y_{n-1}}>."""
    if n < 2:
        raise UsageError("Goursat chart needs n >= 2")
    coords = ["x"] + [f"y{k}" for k in range(n)]
    R = _real_ring(coords)
    comps = {"x": R.const(1)}
    for k in range(n - 1):
        comps[f"y{k}"] = R.var(f"y{k + 1}")
    return DistributionChart([PolyVectorField(R, coords, comps),
                              PolyVectorField.partial(R, coords, f"y{n - 1}")], {})


def _monge_total(R, coords, top: str | None):
    z2 = R.var("z2")
    comps = {"x": R.const(1), "y0": z2 * z2, "z0": R.var("z1"), "z1": z2}
    if top:
        comps["z2"] = R.var(top)
    return PolyVectorField(R, coords, comps)


def hilbert_cartan_chart() -> DistributionChart:
    """y' = (z'')^2 on (x, y0, z0, z1, z2)."""
    coords = ["x", "y0", "z0", "z1", "z2"]
    R = _real_ring(coords)
    return DistributionChart([_monge_total(R, coords, None),
                              PolyVectorField.partial(R, coords, "z2")], {})


def g2_borel_chart() -> DistributionChart:
    """Partial prolongation on (x, y0, z0, z1, z2, z3)."""
    coords = ["x", "y0", "z0", "z1", "z2", "z3"]
    R = _real_ring(coords)
    return DistributionChart([_monge_total(R, coords, "z3"),
                              PolyVectorField.partial(R, coords, "z3")], {})


# ------------------------------------------------------------ symbols

def field_weight(X: PolyVectorField, weights: Mapping[str, int]) -> int:
    """Weight of a homogeneous field; raises HomogeneityError naming a bad monomial."""
    ring = X.ring
    w = None
    for c, p in X.comps.items():
        for e in p.terms:
            mw = sum(weights.get(n, 0) * k for n, k in zip(ring.names, e))
            fw = mw - weights[c]
            if w is None:
                w = fw
            elif fw != w:
                mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(ring.names, e) if k) or "1"
                raise HomogeneityError(
                    f"field {X} is not weight-homogeneous: monomial {mono} in the d({c}) "
                    f"component has weight {fw}, expected {w}")
    if w is None:
        raise HomogeneityError("zero field has no weight")
    return w


@dataclass
class FieldSymbol:
    algebra: GNLA
    fields: list  # PolyVectorField realizing each basis element


def nilpotent_symbol(generators: Sequence[PolyVectorField], weights: Mapping[str, int],
                     label: str | None = None) -> FieldSymbol:
    """Graded Lie algebra generated by two weight -1 fields, with real structure constants.

    Basis: e1', e1'' the generators; each next level is spanned greedily by
    [e1', b], [e1'', b] over the previous level basis b.
    """
    gens = list(generators)
    if len(gens) != 2:
        raise UsageError("expected the two weight -1 generators")
    for g in gens:
        if field_weight(g, weights) != -1:
            raise HomogeneityError(f"generator {g} does not have weight -1")
    levels = [gens]
    if real_member(gens[1], gens[:1]) is not None:
        raise ValidationError("generators are real-linearly dependent")
    max_w = max(weights.values())
    for _ in range(2, max_w + 1):
        if len(levels) == 1:
            cand = [bracket(gens[0], gens[1])]
        else:
            cand = [bracket(g, b) for b in levels[-1] for g in gens]
        cand = [c for c in cand if not c.is_zero()]
        if not cand:
            break
        vecs = _real_coeff_vector(cand)
        keep = linalg.independent_subset(vecs)
        levels.append([cand[i] for i in keep])
    basis = [f for lev in levels for f in lev]
    lev_of = [k + 1 for k, lev in enumerate(levels) for _ in lev]
    names = standard_names(lev_of)
    n = len(basis)
    br = {}
    for i in range(n):
        for j in range(i + 1, n):
            t = lev_of[i] + lev_of[j]
            b = bracket(basis[i], basis[j])
            if b.is_zero():
                continue
            if t > len(levels):
                raise ValidationError(f"bracket of {names[i]}, {names[j]} leaves the graded algebra")
            idx = [k for k in range(n) if lev_of[k] == t]
            c = real_member(b, [basis[k] for k in idx])
            if c is None:
                raise ValidationError(f"[{names[i]},{names[j]}] is not in the span of level {t}")
            terms = {idx[s]: v for s, v in enumerate(c) if v}
            if terms:
                br[(i, j)] = terms
    m = GNLA(names, lev_of, br, label=label)
    check_valid(m)
    check_fundamental(m)
    return FieldSymbol(m, basis)


def j_from_generators(X1: PolyVectorField, X2: PolyVectorField, z: str = "z"):
    """J on span(Re X1, Re X2) at the origin, as a 2x2 matrix in that basis.

    With X1(0) = alpha d_z and X2(0) = beta d_z, J multiplies by i in the
    real basis {alpha, beta} of C.
    """
    origin = {c: 0 for c in X1.coords}
    vals = []
    for X in (X1, X2):
        v = X.component(z).evaluate(origin)
        if isinstance(v, MPoly):
            if not v.is_constant():
                raise UsageError("generator value at the origin depends on parameters")
            v = v.constant_term()
        vals.append(GaussRat.coerce(v))
    alpha, beta = vals
    B = [[alpha.re, beta.re], [alpha.im, beta.im]]
    if linalg.det2(B) == 0:
        raise ValidationError("weight -1 generators do not span the CR distribution at the origin")
    Binv = linalg.inverse(B)
    cols = []
    for v in (alpha * GaussRat(0, 1), beta * GaussRat(0, 1)):
        cols.append(linalg.mat_vec(Binv, [v.re, v.im]))
    return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
