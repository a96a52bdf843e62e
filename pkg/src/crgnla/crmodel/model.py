"""CR models Im(w_k) = P_k with holomorphic symmetry fields."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import ClosureError, UsageError, ValidationError
from ..exact import linalg
from ..exact.numbers import GaussRat, I, rat_str
from ..exact.poly import MPoly, PolyRing
from ..gnla.core import GNLA, growth
from ..vfield import (PolyVectorField, bracket, field_weight, j_from_generators,
                      nilpotent_symbol, real_member, _real_coeff_vector)
from .parser import ParsedModel, conj_name, parse, poly_to_expr

DEFAULT_SAMPLES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(7))


@dataclass
class CRModel:
    name: str
    coords: list  # [(name, weight)]
    params: list
    equations: dict  # coordinate -> P (real polynomial in ``ring``)
    fields: dict  # name -> PolyVectorField (holomorphic)
    ring: PolyRing
    source: str = field(default="", repr=False)
    extra_samples: tuple = ()

    @classmethod
    def from_parsed(cls, name: str, pm: ParsedModel) -> "CRModel":
        names = [c for c, _ in pm.coords]
        fields = {n: PolyVectorField(pm.ring, names, comps) for n, comps in pm.fields}
        return cls(name, pm.coords, pm.params, pm.equations, fields, pm.ring, pm.source)

    @property
    def weights(self) -> dict:
        w = dict(self.coords)
        for c, k in self.coords:
            w[conj_name(c)] = k
        return w

    @property
    def coord_names(self) -> list:
        return [c for c, _ in self.coords]

    @property
    def free_coords(self) -> list:
        return [c for c in self.coord_names if c not in self.equations]

    @property
    def real_dim(self) -> int:
        return 2 * len(self.coords) - len(self.equations)

    def field(self, name: str) -> PolyVectorField:
        try:
            return self.fields[name]
        except KeyError:
            raise UsageError(f"model {self.name} has no field {name!r}") from None

    def to_json(self):
        return {
            "name": self.name,
            "coords": [{"name": c, "weight": w} for c, w in self.coords],
            "params": list(self.params),
            "equations": [{"lhs": f"Im({c})", "rhs": poly_to_expr(P)} for c, P in self.equations.items()],
            "fields": [{"name": n, "components": {c: poly_to_expr(p) for c, p in f.comps.items()}}
                       for n, f in self.fields.items()],
        }


def parse_model(text: str, name: str = "model") -> CRModel:
    return CRModel.from_parsed(name, parse(text))


# ------------------------------------------------------------ realification

@dataclass
class Realification:
    real_ring: PolyRing
    subs: dict  # complex-ring variable -> real polynomial
    order: list  # defined coordinates in substitution order

    def describe(self) -> dict:
        out = {}
        for c in self.subs:
            if not c.endswith("_bar"):
                out[c] = poly_to_expr(self.subs[c])
        return out


def _real_names(model: CRModel):
    taken = set(model.coord_names) | set(model.params)
    names = {}
    for c in model.free_coords:
        x, y = ("x", "y") if c == "z" and len(model.free_coords) == 1 else (f"x_{c}", f"y_{c}")
        if x in taken or y in taken:
            x, y = f"re_{c}", f"im_{c}"
        names[c] = (x, y)
        taken |= {x, y}
    for c in model.equations:
        t = f"t_{c}"
        if t in taken:
            t = f"re_{c}"
        names[c] = t
        taken.add(t)
    return names


def realify(model: CRModel) -> Realification:
    """Free real coordinates x, y (per free coordinate) and t_k; w_k = t_k + i P_k(...)."""
    rn = _real_names(model)
    real_vars = []
    for c in model.free_coords:
        real_vars += list(rn[c])
    for c in model.coord_names:
        if c in model.equations:
            real_vars.append(rn[c])
    real_vars += model.params
    R = PolyRing(real_vars)
    subs: dict[str, MPoly] = {}
    for c in model.free_coords:
        x, y = (R.var(v) for v in rn[c])
        subs[c] = x + y.scale(I)
        subs[conj_name(c)] = x - y.scale(I)
    pending = list(model.equations)
    order = []
    while pending:
        progressed = False
        for c in list(pending):
            P = model.equations[c]
            deps = {v[:-4] if v.endswith("_bar") else v for v in P.variables()} - set(model.params)
            if deps - set(model.free_coords) - set(order):
                continue
            Ph = P.subs(subs, R)
            t = R.var(rn[c])
            subs[c] = t + Ph.scale(I)
            subs[conj_name(c)] = t - Ph.scale(I)
            order.append(c)
            pending.remove(c)
            progressed = True
        if not progressed:
            raise UsageError(f"cyclic dependence among defining equations of {sorted(pending)}")
    return Realification(R, subs, order)


# ------------------------------------------------------------ tangency

@dataclass
class TangencyResult:
    field: str
    ok: bool
    residuals: dict  # coordinate -> residual polynomial (only nonzero ones)

    def to_json(self):
        return {"field": self.field, "tangent": self.ok,
                "residuals": {c: poly_to_expr(p) for c, p in self.residuals.items()}}


def defining_function(model: CRModel, c: str) -> MPoly:
    """rho = (w - conj(w)) / 2i - P."""
    R = model.ring
    w, wb = R.var(c), R.var(conj_name(c))
    return (w - wb).scale(GaussRat(0, -1) / 2) - model.equations[c]


def verify_tangency(model: CRModel, S: PolyVectorField | str, name: str | None = None,
                    real: Realification | None = None) -> TangencyResult:
    """2 Re(S rho_k) pulled back to M vanishes identically for every k."""
    if isinstance(S, str):
        name, S = S, model.field(S)
    if tuple(S.coords) != tuple(model.coord_names):
        raise UsageError("field coordinates do not match the model")
    real = real or realify(model)
    residuals = {}
    for c in model.equations:
        rho = defining_function(model, c)
        s = S(rho)
        val = s + s.conj()
        pulled = val.subs(real.subs, real.real_ring)
        if not pulled.is_zero():
            residuals[c] = pulled
    return TangencyResult(name or "field", not residuals, residuals)


# ------------------------------------------------------------ closure

def parameter_samples(model: CRModel, samples: Sequence = DEFAULT_SAMPLES) -> list[dict]:
    vals = list(dict.fromkeys(list(samples) + list(model.extra_samples)))
    if not model.params:
        return [{}]
    combos = itertools.product(vals, repeat=len(model.params))
    return [dict(zip(model.params, c)) for c in combos]


@dataclass
class SymmetryReport:
    model: str
    tangency: list
    dimension: int
    closed: bool
    structure_constants: dict  # sample label -> {(i, j): {k: c}}
    field_names: list
    commuting: list
    samples: list

    def to_json(self):
        consts = {}
        for lab, sc in self.structure_constants.items():
            consts[lab] = [{"a": self.field_names[i], "b": self.field_names[j],
                            "terms": {self.field_names[k]: rat_str(c) for k, c in t.items()}}
                           for (i, j), t in sorted(sc.items())]
        return {
            "model": self.model,
            "tangency": [t.to_json() for t in self.tangency],
            "all_tangent": all(t.ok for t in self.tangency),
            "dimension": self.dimension,
            "closed": self.closed,
            "structure_constants": consts,
            "commuting_subset": self.commuting,
            "commuting_size": len(self.commuting),
        }


def _sample_label(sample: dict) -> str:
    return ",".join(f"{k}={rat_str(v)}" for k, v in sample.items()) or "-"


def _jacobi_ok(n: int, sc: dict) -> bool:
    def br(i, j):
        if i == j:
            return {}
        if i < j:
            return sc.get((i, j), {})
        return {k: -c for k, c in sc.get((j, i), {}).items()}

    def brv(u: dict, j):
        out: dict = {}
        for i, x in u.items():
            for k, c in br(i, j).items():
                out[k] = out.get(k, 0) + x * c
        return out

    for a, b, c in itertools.combinations(range(n), 3):
        tot: dict = {}
        for (p, q, r) in ((a, b, c), (b, c, a), (c, a, b)):
            # [[p,q],r]
            for k, v in brv(br(p, q), r).items():
                tot[k] = tot.get(k, 0) + v
        if any(tot.values()):
            return False
    return True


def commuting_subset(fields: Sequence[PolyVectorField]) -> list[int]:
    """Largest set of listed fields that pairwise commute identically."""
    n = len(fields)
    comm = [[i == j or bracket(fields[i], fields[j]).is_zero() for j in range(n)] for i in range(n)]
    for size in range(n, 0, -1):
        for combo in itertools.combinations(range(n), size):
            if all(comm[i][j] for i, j in itertools.combinations(combo, 2)):
                return list(combo)
    return []


def closure(model: CRModel, names: Sequence[str] | None = None,
            samples: Sequence = DEFAULT_SAMPLES) -> SymmetryReport:
    """Tangency, bracket closure (per parameter sample), dimension and commuting subset."""
    names = list(names) if names is not None else list(model.fields)
    fields = [model.field(n) for n in names]
    real = realify(model)
    tang = [verify_tangency(model, f, n, real) for n, f in zip(names, fields)]
    bad = [t.field for t in tang if not t.ok]
    if bad:
        raise ValidationError(f"fields not tangent to {model.name}: {', '.join(bad)}")
    sc_all = {}
    dims = set()
    smp = parameter_samples(model, samples)
    for sample in smp:
        fs = [f.subs_params(sample) if sample else f for f in fields]
        vecs = _real_coeff_vector(fs)
        dims.add(linalg.rank(vecs))
        sc = {}
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                b = bracket(fs[i], fs[j])
                if b.is_zero():
                    continue
                c = real_member(b, fs)
                if c is None:
                    raise ClosureError(f"[{names[i]},{names[j]}] = {b} leaves the span "
                                       f"({_sample_label(sample)})")
                # coefficients may be non-unique when the list is dependent
                terms = {k: v for k, v in enumerate(c) if v}
                if terms:
                    sc[(i, j)] = terms
        if not _jacobi_ok(len(fs), sc):
            raise ValidationError(f"structure constants of {model.name} fail Jacobi "
                                  f"({_sample_label(sample)})")
        sc_all[_sample_label(sample)] = sc
    if len(dims) != 1:
        raise ClosureError(f"dimension depends on parameters: {sorted(dims)}")
    comm = commuting_subset(fields)
    return SymmetryReport(model.name, tang, dims.pop(), True, sc_all, names,
                          [names[i] for i in comm], [_sample_label(s) for s in smp])


# ------------------------------------------------------------ symbol

@dataclass
class ModelSymbol:
    algebra: GNLA
    J: list
    generators: list  # field names for e1', e1''
    extension_type: object | None = None
    r: int | None = None
    bound: int | None = None

    def to_json(self):
        out = {
            "generators": self.generators,
            "growth": list(growth(self.algebra).reduced),
            "gnla": self.algebra.to_json(),
            "J": [[rat_str(x) for x in row] for row in self.J],
            "r": self.r,
            "dim_bound": self.bound,
        }
        if self.extension_type is not None:
            out["extension_type"] = self.extension_type.to_json()
        return out


def weight_one_fields(model: CRModel) -> list[str]:
    w = model.weights
    return [n for n, f in model.fields.items() if field_weight(f, w) == -1]


def model_symbol(model: CRModel, params: Mapping | None = None, classify: bool = True,
                 with_bound: bool = True) -> ModelSymbol:
    """Nilpotent symbol of the model read off its weight -1 symmetry fields."""
    from ..extend import classify_hc_extension, top_cocycles
    from ..gnla.catalog import m_hc
    from ..prolong import cr_g0, symmetry_bound

    params = dict(params or {})
    missing = [p for p in model.params if p not in params]
    if missing:
        from ..errors import SpecializeParametersError

        raise SpecializeParametersError(f"specialize parameters first: {', '.join(missing)}")
    gens = weight_one_fields(model)
    if len(gens) != 2:
        raise UsageError(f"expected two weight -1 fields, found {gens}")
    fs = [model.field(n).subs_params(params) for n in gens]
    sym = nilpotent_symbol(fs, model.weights, label=model.name)
    m = sym.algebra
    J = j_from_generators(*fs, z=model.free_coords[0])
    ext = None
    if classify and m.depth == 4 and m.truncate(3).same_structure(m_hc()) and m.dims[3] <= 2:
        ext = classify_hc_extension(top_cocycles(m))
    r = bound = None
    if with_bound:
        r = cr_g0(m, J).r
        bound = symmetry_bound(m, J)
    return ModelSymbol(m, J, gens, ext, r, bound)
