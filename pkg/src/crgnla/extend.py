"""Top-degree 2-cocycles, central extensions and their classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InternalConsistencyError, NotFundamentalError, UsageError
from .exact import linalg
from .exact.numbers import rat_str, to_rat
from .gnla.core import GNLA, check_valid, is_fundamental
from .gnla.ops import cauchy_directions, standard_names
from .prolong import Derivation0


@dataclass(frozen=True)
class GradedCochain:
    """Antisymmetric 2-form on m supported on pairs of total level ``degree``.

    ``values`` maps (i, j) with i < j to a nonzero rational.
    """

    base: GNLA
    degree: int
    values: tuple  # sorted ((i, j), value)

    @classmethod
    def from_dict(cls, m: GNLA, degree: int, values: dict) -> "GradedCochain":
        clean = {}
        for (a, b), v in values.items():
            i = m.index[a] if isinstance(a, str) else a
            j = m.index[b] if isinstance(b, str) else b
            v = to_rat(v)
            if not v:
                continue
            if i == j:
                raise UsageError("a 2-cochain vanishes on the diagonal")
            if m.levels[i] + m.levels[j] != degree:
                raise UsageError(f"pair ({m.names[i]},{m.names[j]}) is not of degree {degree}")
            if i > j:
                i, j, v = j, i, -v
            clean[(i, j)] = clean.get((i, j), Fraction(0)) + v
        return cls(m, degree, tuple(sorted((k, v) for k, v in clean.items() if v)))

    def __call__(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        d = dict(self.values)
        if i < j:
            return d.get((i, j), Fraction(0))
        return -d.get((j, i), Fraction(0))

    def on_vectors(self, u, v) -> Fraction:
        return sum((u[i] * v[j] * self(i, j) for i in range(len(u)) if u[i]
                    for j in range(len(v)) if v[j]), Fraction(0))

    def is_zero(self) -> bool:
        return not self.values

    def to_json(self):
        m = self.base
        return [{"a": m.names[i], "b": m.names[j], "value": rat_str(v)} for (i, j), v in self.values]

    def __str__(self):
        m = self.base
        return ", ".join(f"w({m.names[i]},{m.names[j]}) = {rat_str(v)}" for (i, j), v in self.values) or "0"


def _pairs(m: GNLA, degree: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m.dim) for j in range(i + 1, m.dim)
            if m.levels[i] + m.levels[j] == degree]


def _delta_rows(m: GNLA, degree: int, pairs):
    """Linear conditions dw(x,y,z) = 0 on all basis triples of total level ``degree``."""
    pos = {p: s for s, p in enumerate(pairs)}

    def add(row, u, c, coeff):
        # coeff * w(u, e_c) where u = {k: x}
        for k, x in u.items():
            if k == c:
                continue
            key, sgn = ((k, c), 1) if k < c else ((c, k), -1)
            s = pos.get(key)
            if s is not None:
                row[s] = row.get(s, 0) + coeff * sgn * x

    rows = []
    n = m.dim
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if m.levels[a] + m.levels[b] + m.levels[c] != degree:
                    continue
                row: dict = {}
                add(row, m.bracket(a, b), c, -1)
                add(row, m.bracket(a, c), b, 1)
                add(row, m.bracket(b, c), a, -1)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return rows


def coboundary(alpha: dict, m: GNLA, degree: int) -> GradedCochain:
    """(d alpha)(x, y) = -alpha([x, y]) for a 1-cochain {index: value} of level ``degree``."""
    vals = {}
    for i, j in _pairs(m, degree):
        v = -sum((c * to_rat(alpha.get(k, 0)) for k, c in m.bracket(i, j).items()), Fraction(0))
        if v:
            vals[(i, j)] = v
    return GradedCochain.from_dict(m, degree, vals)


def is_cocycle(w: GradedCochain) -> bool:
    m = w.base
    pairs = _pairs(m, w.degree)
    vec = [w(i, j) for i, j in pairs]
    for row in _delta_rows(m, w.degree, pairs):
        if sum(c * vec[s] for s, c in row.items()):
            return False
    return True


def cocycles(m: GNLA, degree: int | None = None) -> list[GradedCochain]:
    """Basis of closed 2-cochains of the given degree (default depth + 1)."""
    t = m.depth + 1 if degree is None else degree
    pairs = _pairs(m, t)
    ker = linalg.nullspace_sparse(_delta_rows(m, t, pairs), len(pairs))
    return [GradedCochain.from_dict(m, t, {p: v[s] for s, p in enumerate(pairs)}) for v in ker]


def coboundaries(m: GNLA, degree: int) -> list[GradedCochain]:
    """Spanning set of exact 2-cochains of the given degree."""
    out = []
    for k in m.level_indices(degree):
        w = coboundary({k: 1}, m, degree)
        if not w.is_zero():
            out.append(w)
    return out


def combine(ws: Sequence[GradedCochain], coeffs: Sequence) -> GradedCochain:
    m, t = ws[0].base, ws[0].degree
    vals: dict = {}
    for w, c in zip(ws, coeffs):
        for key, v in w.values:
            vals[key] = vals.get(key, Fraction(0)) + to_rat(c) * v
    return GradedCochain.from_dict(m, t, vals)


def extend(m: GNLA, W: Sequence[GradedCochain], label: str | None = None,
           require_fundamental: bool = True) -> GNLA:
    """Central extension [x,y]_new = [x,y]_m + sum_t w_t(x,y) f_t by top-degree cocycles."""
    if not W:
        raise UsageError("need at least one cocycle")
    t = m.depth + 1
    for w in W:
        if w.base is not m and not w.base.same_structure(m):
            raise UsageError("cocycle lives on a different algebra")
        if w.degree != t:
            raise UsageError(f"cocycles must have degree {t}, got {w.degree}")
        if not is_cocycle(w):
            raise UsageError(f"not a cocycle: {w}")
    pairs = _pairs(m, t)
    if linalg.rank([[w(i, j) for i, j in pairs] for w in W]) != len(W):
        raise UsageError("cocycles are linearly dependent")
    d = len(W)
    new_levels = list(m.levels) + [t] * d
    new_names = list(m.names) + standard_names([t] * d)
    br = {k: dict(v) for k, v in m.structure_items()}
    for s, w in enumerate(W):
        for (i, j), v in w.values:
            br.setdefault((i, j), {})[m.dim + s] = v
    out = GNLA(new_names, new_levels, br, label=label)
    check_valid(out)
    if require_fundamental:
        rep = is_fundamental(out)
        if not rep.ok:
            raise NotFundamentalError(f"extension is not fundamental: {rep.witness}",
                                      witness=rep.witness)
    return out


def top_cocycles(m: GNLA) -> list[GradedCochain]:
    """The cocycles that define the top grade of m over m truncated one step."""
    base = m.truncate(m.depth - 1)
    top = m.level_indices(m.depth)
    out = []
    for f in top:
        vals = {}
        for i in range(base.dim):
            for j in range(i + 1, base.dim):
                c = m.bracket(i, j).get(f)
                if c:
                    vals[(i, j)] = c
        out.append(GradedCochain.from_dict(base, m.depth, vals))
    return out


def g0_action(A: Derivation0, w: GradedCochain) -> GradedCochain:
    """(L_A w)(x, y) = -w(Ax, y) - w(x, Ay)."""
    m = w.base
    vals = {}
    for i, j in _pairs(m, w.degree):
        v = -w.on_vectors(A.image(i), m.unit(j)) - w.on_vectors(m.unit(i), A.image(j))
        if v:
            vals[(i, j)] = v
    return GradedCochain.from_dict(m, w.degree, vals)


def action_matrix(A: Derivation0, basis: Sequence[GradedCochain]):
    """Matrix of L_A on span(basis); columns are images of basis elements."""
    m = basis[0].base
    pairs = _pairs(m, basis[0].degree)
    S = [[w(i, j) for i, j in pairs] for w in basis]
    cols = []
    for w in basis:
        img = g0_action(A, w)
        c = linalg.member([img(i, j) for i, j in pairs], S)
        if c is None:
            raise InternalConsistencyError("g0 action does not preserve the cocycle space")
        cols.append(c)
    return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]


# ------------------------------------------------------------ m_HC types

@dataclass(frozen=True)
class ExtensionType:
    tag: str
    matrix: tuple  # M_w for one cocycle, Gram matrix for a pair
    det: Fraction

    def to_json(self):
        return {"type": self.tag, "det": rat_str(self.det),
                "matrix": [[rat_str(x) for x in row] for row in self.matrix]}


def _tag(det: Fraction) -> str:
    return "elliptic" if det > 0 else "hyperbolic" if det < 0 else "parabolic"


def pairing_matrix(w: GradedCochain):
    """M[i][j] = w(e1^(i), e3^(j)) over m_HC."""
    m = w.base
    g1, g3 = m.level_indices(1), m.level_indices(3)
    if len(g1) != 2 or len(g3) != 2 or m.depth != 3 or w.degree != 4:
        raise UsageError("expected a degree-4 cocycle over m_HC")
    M = [[w(a, b) for b in g3] for a in g1]
    if M[0][1] != M[1][0]:
        raise InternalConsistencyError(f"pairing matrix of a cocycle is not symmetric: {M}")
    return M


def _det_form(M, N) -> Fraction:
    # polarization of det on symmetric 2x2 matrices
    return (M[0][0] * N[1][1] + M[1][1] * N[0][0] - 2 * M[0][1] * N[0][1]) / 2


def classify_hc_extension(W: GradedCochain | Sequence[GradedCochain]) -> ExtensionType:
    """Type of a 1- or 2-dimensional extension of m_HC.

    One cocycle: sign of det M_w.  Two cocycles: sign of the Gram determinant
    of the det form on their span (positive means a definite plane, the
    elliptic case).
    """
    ws = [W] if isinstance(W, GradedCochain) else list(W)
    if not ws or len(ws) > 2:
        raise UsageError("classify one or two cocycles")
    for w in ws:
        if not is_cocycle(w):
            raise UsageError(f"not a cocycle: {w}")
    Ms = [pairing_matrix(w) for w in ws]
    if len(Ms) == 1:
        if not any(any(r) for r in Ms[0]):
            raise UsageError("zero cocycle has no type")
        d = linalg.det2(Ms[0])
        return ExtensionType(_tag(d), tuple(tuple(r) for r in Ms[0]), d)
    G = [[_det_form(A, B) for B in Ms] for A in Ms]
    flat = [[x for r in M for x in r] for M in Ms]
    if linalg.rank(flat) != 2:
        raise UsageError("cocycles are dependent")
    d = linalg.det2(G)
    return ExtensionType(_tag(d), tuple(tuple(r) for r in G), d)


# ------------------------------------------------------------ (2,1,...,1) tower

@dataclass
class TowerClass:
    name: str
    algebra: GNLA


def normal_form_211(ext: GNLA) -> TowerClass:
    """Bring a fundamental GNLA of growth (2,1,...,1) to Gou(n) or nGou(n)."""
    from .gnla.catalog import gou, ngou

    n = ext.depth
    if ext.dims != (2,) + (1,) * (n - 1) or n < 3:
        raise UsageError(f"expected growth (2,1,...,1) of depth >= 3, got {ext.dims}")
    cd = cauchy_directions(ext, 2)
    if len(cd) != 1:
        raise InternalConsistencyError(f"level-2 Cauchy space has dimension {len(cd)}: "
                                       f"{ext.relations_str()}")
    x = cd[0]
    g1 = ext.level_indices(1)
    y = ext.unit(next(i for i in g1 if linalg.rank([x, ext.unit(i)]) == 2))

    def chain(y):
        es = [ext.bracket_vec(y, x)]
        for _ in range(3, n):
            es.append(ext.bracket_vec(y, es[-1]))
        return es

    es = chain(y)
    last = es[-1]
    xt = ext.bracket_vec(x, last)
    if not any(xt):
        es.append(ext.bracket_vec(y, last))
        cand, name = gou(n), f"Gou({n})"
    else:
        yt = ext.bracket_vec(y, last)
        top = ext.level_indices(n)[0]
        lam = -yt[top] / xt[top]
        y = [a + lam * b for a, b in zip(y, x)]
        es = chain(y)
        es.append(ext.bracket_vec(x, es[-1]))
        if n < 5 or n % 2 == 0:
            raise InternalConsistencyError(
                f"depth-{n} symbol of growth (2,1,...,1) escapes the Goursat normal form: "
                f"{ext.relations_str()}")
        cand, name = ngou(n), f"nGou({n})"
    basis = [y, x] + es
    if any(not any(v) for v in basis) or linalg.rank(basis) != ext.dim:
        raise InternalConsistencyError(f"adapted basis degenerates for {ext.relations_str()}")
    nf = ext.transform(basis, cand.names, label=name)
    if not nf.same_structure(cand):
        raise InternalConsistencyError(
            f"symbol escapes both normal forms: {nf.relations_str()}")
    return TowerClass(name, cand)


def _sample_points(dim: int, special: Sequence[Sequence[Fraction]]):
    pts = [list(p) for p in special]
    if dim == 1:
        pts.append([1])
    elif dim == 2:
        pts += [[1, 0], [0, 1]] + [[1, l] for l in (-2, -1, 1, 2)]
    else:
        for i in range(dim):
            pts.append([1 if j == i else 0 for j in range(dim)])
        pts.append([1] * dim)
    return [p for p in pts if any(p)]


@dataclass
class EnumerationReport:
    per_depth: dict  # depth -> sorted class names
    cocycle_dims: dict  # class name -> dim of its top cocycle space
    discarded: dict  # depth -> number of sampled non-fundamental extensions

    def counts(self):
        return {n: len(v) for n, v in sorted(self.per_depth.items())}

    def to_json(self):
        return {"classes": {str(k): v for k, v in sorted(self.per_depth.items())},
                "counts": {str(k): len(v) for k, v in sorted(self.per_depth.items())},
                "cocycle_dims": dict(sorted(self.cocycle_dims.items())),
                "discarded": {str(k): v for k, v in sorted(self.discarded.items())}}


MAX_ENUMERATION_DEPTH = 9


def enumerate_211(n_max: int) -> EnumerationReport:
    """Breadth-first enumeration of fundamental (2,1,...,1) symbols from heis3."""
    from .gnla.catalog import heis3

    if n_max > MAX_ENUMERATION_DEPTH:
        raise UsageError(f"enumeration depth is limited to {MAX_ENUMERATION_DEPTH}")
    if n_max < 3:
        raise UsageError("enumeration starts at depth 3")
    current = {"heis3": heis3()}
    per_depth, cdims, discarded = {}, {}, {}
    for n in range(3, n_max + 1):
        found: dict[str, GNLA] = {}
        discarded[n] = 0
        for cname, m in current.items():
            Z = cocycles(m)
            cdims[cname] = len(Z)
            if len(Z) > 2:
                raise InternalConsistencyError(f"{cname} has {len(Z)} top cocycles")
            if not Z:
                continue
            # the line where the pairing with e1'' (the Cauchy direction) vanishes
            top = m.level_indices(m.depth)[0]
            e1pp = m.index["e1''"]
            special = []
            if len(Z) == 2:
                b = [w(e1pp, top) for w in Z]
                if any(b):
                    special.append([b[1], -b[0]])
            for p in _sample_points(len(Z), special):
                w = combine(Z, p)
                try:
                    ext = extend(m, [w])
                except NotFundamentalError:
                    discarded[n] += 1
                    continue
                tc = normal_form_211(ext)
                found.setdefault(tc.name, tc.algebra)
        per_depth[n] = sorted(found)
        current = found
    return EnumerationReport(per_depth, cdims, discarded)
