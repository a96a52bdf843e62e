"""Complex structures on g_-1: normal forms under graded automorphisms and
existence of a g0-invariant J."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import UsageError, ValidationError
from .exact import linalg
from .exact.numbers import rat_str, to_rat
from .gnla.core import GNLA
from .prolong import der0, g1_indices

# 2x2 matrices act on g_-1 in the basis (e1', e1''); columns are images.


@dataclass(frozen=True)
class ComplexStructure:
    """J e1' = a e1'' + b e1', J e1'' = -((1+b^2)/a) e1' - b e1''."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", to_rat(self.a))
        object.__setattr__(self, "b", to_rat(self.b))
        if not self.a:
            raise UsageError("a complex structure needs a != 0")

    @property
    def matrix(self):
        a, b = self.a, self.b
        return [[b, -(1 + b * b) / a], [a, -b]]

    @classmethod
    def from_matrix(cls, J) -> "ComplexStructure":
        J = [[to_rat(x) for x in row] for row in J]
        if not validate_J(J):
            raise ValidationError(f"J^2 != -id for J = {J}")
        return cls(J[1][0], J[0][0])

    def to_json(self):
        return {"a": rat_str(self.a), "b": rat_str(self.b)}


STANDARD = ComplexStructure(1, 0)


def validate_J(J) -> bool:
    J = [[to_rat(x) for x in row] for row in J]
    sq = linalg.mat_mul(J, J)
    return sq == [[-1, 0], [0, -1]]


def conjugate(g, J):
    """g J g^-1."""
    return linalg.mat_mul(linalg.mat_mul(g, J), linalg.inverse(g))


# ------------------------------------------------------------ automorphisms

def extend_automorphism(m: GNLA, g1) -> list[list[Fraction]]:
    """Extend a linear map of g_-1 to a graded automorphism of m.

    Raises ValidationError when the propagated map fails to preserve brackets.
    """
    idx1 = g1_indices(m)
    n = m.dim
    G = [[Fraction(0)] * n for _ in range(n)]
    for s, j in enumerate(idx1):
        for t, i in enumerate(idx1):
            G[i][j] = to_rat(g1[t][s])

    def img(v):
        return linalg.mat_vec(G, v)

    for k in range(2, m.depth + 1):
        idx = m.level_indices(k)
        pairs = [(a, b) for a in idx1 for b in m.level_indices(k - 1)]
        vecs = [m.bracket_vec(m.unit(a), m.unit(b)) for a, b in pairs]
        keep = linalg.independent_subset(vecs)
        if len(keep) != len(idx):
            raise UsageError(f"{m!r} is not generated by g_-1")
        # columns: chosen brackets in level-k coordinates
        B = [[vecs[c][i] for c in keep] for i in idx]
        Binv = linalg.inverse(B)
        images = [m.bracket_vec(img(m.unit(pairs[c][0])), img(m.unit(pairs[c][1]))) for c in keep]
        # G e_i = sum_c Binv[c][i] * image_c
        for s, i in enumerate(idx):
            col = [sum((Binv[c][s] * images[c][r] for c in range(len(keep))), Fraction(0))
                   for r in range(n)]
            for r in range(n):
                G[r][i] = col[r]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = img(m.bracket_vec(m.unit(i), m.unit(j)))
            rhs = m.bracket_vec(img(m.unit(i)), img(m.unit(j)))
            if lhs != rhs:
                raise ValidationError(
                    f"map does not extend to an automorphism: fails on [{m.names[i]},{m.names[j]}]",
                    witness=(m.names[i], m.names[j]))
    if linalg.rank(G) != n:
        raise ValidationError("extended map is singular")
    return G


def der0_shape(m: GNLA) -> tuple[str, list]:
    """Classify the g_-1 restriction of der0(m) and return it as 2x2 blocks."""
    blocks = [d.g1_block for d in der0(m)]
    flat = [[b[i][j] for i in range(2) for j in range(2)] for b in blocks]
    keep = linalg.independent_subset(flat)
    blocks = [blocks[i] for i in keep]
    d = len(blocks)
    if d == 4:
        return "gl2", blocks
    if d == 3 and all(b[0][1] == 0 for b in blocks):
        return "borel", blocks
    if d == 2 and all(b[0][1] == 0 and b[1][0] == 0 for b in blocks):
        return "cartan", blocks
    if invariant_J_exists(m, blocks).exists:
        return "co2", blocks
    return "other", blocks


@dataclass
class NormalizedJ:
    normal: ComplexStructure
    shape: str
    group_element: list  # 2x2 on g_-1, normal = g J g^-1
    factors: list = field(default_factory=list)
    automorphism: list | None = None

    def to_json(self):
        return {
            "normal_form": self.normal.to_json(),
            "shape": self.shape,
            "group_element": [[rat_str(x) for x in r] for r in self.group_element],
            "factors": self.factors,
        }


def _factor_lower(g) -> list:
    """g = diag(p, s) (I + t E21) with E21: e1' -> e1''."""
    p, s = g[0][0], g[1][1]
    t = g[1][0] / s
    out = []
    for val, axis in ((p, "e1'"), (s, "e1''")):
        if val < 0:
            out.append({"kind": "sign_flip", "axis": axis})
        if abs(val) != 1:
            out.append({"kind": "scale", "axis": axis, "exp_of": f"log {rat_str(abs(val))}"})
    if t:
        out.append({"kind": "unipotent", "generator": "e1' -> e1''", "t": rat_str(t)})
    return out


def normalize_J(m: GNLA, J: ComplexStructure | Sequence) -> NormalizedJ:
    """Normal form of J under the graded automorphisms of m."""
    if not isinstance(J, ComplexStructure):
        J = ComplexStructure.from_matrix(J)
    a, b = J.a, J.b
    shape, blocks = der0_shape(m)
    if shape in ("borel", "gl2"):
        if shape == "borel":
            # h lower-triangular with J h = h J_std
            h = [[Fraction(1), Fraction(0)], [a * b / (1 + b * b), a / (1 + b * b)]]
        else:
            h = [[Fraction(1), b], [Fraction(0), a]]
        g = linalg.inverse(h)
        normal = STANDARD
        factors = _factor_lower(g) if shape == "borel" else [{"kind": "gl2", "matrix": [
            [rat_str(x) for x in r] for r in g]}]
    elif shape == "cartan":
        g = [[a, Fraction(0)], [Fraction(0), Fraction(1)]]
        normal = ComplexStructure(1, b)
        factors = _factor_lower(g)
    elif shape == "co2":
        if all(linalg.mat_mul(B, J.matrix) == linalg.mat_mul(J.matrix, B) for B in blocks):
            g = linalg.identity(2)
            normal = J
            factors = []
        else:
            raise UsageError("the co(2) group acts on this J by rotations with no rational "
                             "normal form; only the invariant J is supported")
    else:
        raise UsageError(f"unsupported der0 shape; der0|g_-1 is spanned by {blocks}")
    if conjugate(g, J.matrix) != normal.matrix:
        raise ValidationError("normalizing element does not conjugate J to its normal form")
    aut = extend_automorphism(m, g)
    return NormalizedJ(normal, shape, g, factors, aut)


# ------------------------------------------------------------ invariant J

@dataclass
class InvariantJ:
    exists: bool
    witness: list | None = None  # trace-free, det > 0; J = witness / sqrt(det), up to sign

    def to_json(self):
        return {"exists": self.exists,
                "traceless_class": [[rat_str(x) for x in r] for r in self.witness]
                if self.witness else None,
                "signs": "both" if self.exists else None}


def _det_bilinear(A, B) -> Fraction:
    return (A[0][0] * B[1][1] + A[1][1] * B[0][0] - A[0][1] * B[1][0] - A[1][0] * B[0][1]) / 2


def _positive_vector(vs: list, q) -> list | None:
    """A combination of ``vs`` with q > 0 if one exists (q a quadratic form via bilinear q)."""
    vs = [v for v in vs]
    while vs:
        G = [[q(u, v) for v in vs] for u in vs]
        for i, v in enumerate(vs):
            if G[i][i] > 0:
                return v
        for i in range(len(vs)):
            for j in range(len(vs)):
                if i != j and G[i][j]:
                    if G[i][i] == 0:
                        # q(v_i + t v_j) = 2 t G_ij + t^2 G_jj
                        t = Fraction(G[i][j].numerator.__abs__(), 1) / (abs(G[j][j]) + abs(G[i][j]))
                        t = t if G[i][j] > 0 else -t
                        return _lin(vs[i], vs[j], t)
        # all diagonal entries <= 0; split off a negative one
        piv = next((i for i in range(len(vs)) if G[i][i] < 0), None)
        if piv is None:
            return None
        p = vs[piv]
        vs = [_lin(vs[j], p, -G[piv][j] / G[piv][piv]) for j in range(len(vs)) if j != piv]
    return None


def _lin(u, v, t):
    return [[u[i][j] + t * v[i][j] for j in range(2)] for i in range(2)]


def invariant_J_exists(m: GNLA, blocks: list | None = None) -> InvariantJ:
    """Is there a trace-free A in der0(m)|g_-1 with det A > 0?"""
    if blocks is None:
        blocks = [d.g1_block for d in der0(m)]
    flat = [[B[0][0], B[0][1], B[1][0], B[1][1]] for B in blocks]
    # trace-free combinations
    ker = linalg.nullspace([[f[0] + f[3] for f in flat]], len(flat))
    T = []
    for c in ker:
        M = [[sum((c[s] * blocks[s][i][j] for s in range(len(blocks))), Fraction(0))
              for j in range(2)] for i in range(2)]
        if any(any(r) for r in M):
            T.append(M)
    keep = linalg.independent_subset([[x for r in M for x in r] for M in T])
    T = [T[i] for i in keep]
    w = _positive_vector(T, _det_bilinear)
    if w is None:
        return InvariantJ(False)
    # orient so that w e1' has a positive e1'' component when possible
    if w[1][0] < 0:
        w = [[-x for x in r] for r in w]
    return InvariantJ(True, w)


def j_from_json(data) -> list:
    """J as a 2x2 matrix from {"a","b"}, {"traceless_class"} or {"matrix"}."""
    if "a" in data:
        return ComplexStructure(to_rat(data["a"]), to_rat(data.get("b", 0))).matrix
    key = "traceless_class" if "traceless_class" in data else "matrix"
    return [[to_rat(x) for x in r] for r in data[key]]
