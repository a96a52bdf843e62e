"""Degree-0 derivations, CR-restricted g0 and Tanaka prolongation.

An element of degree k >= 0 of the prolongation is stored as a map on the
basis of m: ``phi[a]`` is the coordinate vector of phi(e_a) in the target
space T(k, l) for l = level(e_a).  T(k, l) is the grade l-k part of m when
k < l, and the previously computed component g_{k-l} otherwise.  Degree-0
elements are ordinary grading-preserving derivations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InternalConsistencyError, UsageError
from .exact import linalg
from .gnla.core import GNLA

Matrix2 = list  # 2x2 list of Fractions, columns are images of (e1', e1'')


@dataclass(frozen=True)
class Derivation0:
    """Grading-preserving endomorphism; ``matrix[i][j]`` = coefficient of e_i in A e_j."""

    algebra: GNLA
    matrix: tuple

    def apply(self, v):
        return linalg.mat_vec(self.matrix, v)

    def image(self, j: int):
        return [row[j] for row in self.matrix]

    def block(self, level: int):
        idx = self.algebra.level_indices(level)
        return [[self.matrix[i][j] for j in idx] for i in idx]

    @property
    def g1_block(self):
        return self.block(1)

    def as_map(self) -> dict:
        m = self.algebra
        return {j: tuple(self.matrix[i][j] for i in m.level_indices(m.levels[j]))
                for j in range(m.dim)}

    def is_derivation(self) -> bool:
        m = self.algebra
        for i in range(m.dim):
            for j in range(i + 1, m.dim):
                ei, ej = m.unit(i), m.unit(j)
                lhs = self.apply(m.bracket_vec(ei, ej))
                rhs1 = m.bracket_vec(self.apply(ei), ej)
                rhs2 = m.bracket_vec(ei, self.apply(ej))
                if any(a - b - c for a, b, c in zip(lhs, rhs1, rhs2)):
                    return False
        return True


def grading_element(m: GNLA) -> Derivation0:
    n = m.dim
    mat = tuple(tuple(Fraction(-m.levels[i]) if i == j else Fraction(0) for j in range(n))
                for i in range(n))
    return Derivation0(m, mat)


def _der0_unknowns(m: GNLA):
    var = {}
    for j in range(m.dim):
        for i in m.level_indices(m.levels[j]):
            var[(i, j)] = len(var)
    return var


def der0(m: GNLA) -> list[Derivation0]:
    """Basis of der_0(m); the grading element Z comes first."""
    var = _der0_unknowns(m)
    n = m.dim
    rows = []
    depth = m.depth
    for a in range(n):
        for b in range(a + 1, n):
            if m.levels[a] + m.levels[b] > depth:
                continue
            eq: dict[int, dict] = {}  # component k -> row
            # A[e_a, e_b]
            for c, cf in m.bracket(a, b).items():
                for k in m.level_indices(m.levels[c]):
                    r = eq.setdefault(k, {})
                    v = var[(k, c)]
                    r[v] = r.get(v, 0) + cf
            # - [A e_a, e_b]
            for t in m.level_indices(m.levels[a]):
                for k, cf in m.bracket(t, b).items():
                    r = eq.setdefault(k, {})
                    v = var[(t, a)]
                    r[v] = r.get(v, 0) - cf
            # - [e_a, A e_b]
            for t in m.level_indices(m.levels[b]):
                for k, cf in m.bracket(a, t).items():
                    r = eq.setdefault(k, {})
                    v = var[(t, b)]
                    r[v] = r.get(v, 0) - cf
            rows.extend({k2: v2 for k2, v2 in r.items() if v2} for r in eq.values())
    kernel = linalg.nullspace_sparse([r for r in rows if r], len(var))
    Z = grading_element(m)
    zvec = [Z.matrix[i][j] for (i, j) in var]
    order = linalg.independent_subset([zvec] + kernel)
    if order[0] != 0:
        raise InternalConsistencyError("grading element is not a derivation")
    vecs = [zvec] + [kernel[i - 1] for i in order[1:]]
    if len(vecs) != len(kernel):
        raise InternalConsistencyError("grading element not in computed der0")
    out = []
    for v in vecs:
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), s in var.items():
            mat[i][j] = v[s]
        out.append(Derivation0(m, tuple(tuple(r) for r in mat)))
    return out


def g1_indices(m: GNLA) -> list[int]:
    idx = m.level_indices(1)
    if len(idx) != 2:
        raise UsageError(f"complex structures need dim g_-1 = 2, got {len(idx)}")
    return idx


def commutator2(A, B):
    AB = linalg.mat_mul(A, B)
    BA = linalg.mat_mul(B, A)
    return [[AB[i][j] - BA[i][j] for j in range(2)] for i in range(2)]


def commutant_in(ders: Sequence[Derivation0], J: Matrix2) -> list[Derivation0]:
    """Elements of span(ders) whose g_-1 block commutes with J."""
    if not ders:
        return []
    m = ders[0].algebra
    cols = [commutator2(d.g1_block, J) for d in ders]
    rows = [[cols[s][i][j] for s in range(len(ders))] for i in range(2) for j in range(2)]
    ker = linalg.nullspace(rows, len(ders))
    out = []
    for v in ker:
        mat = [[sum((v[s] * ders[s].matrix[i][j] for s in range(len(ders))), Fraction(0))
                for j in range(m.dim)] for i in range(m.dim)]
        out.append(Derivation0(m, tuple(tuple(r) for r in mat)))
    # put Z first when it lies in the span
    Z = grading_element(m)
    flat = [_flat(Z)] + [_flat(d) for d in out]
    order = linalg.independent_subset(flat)
    if order and order[0] == 0:
        out = [Z] + [out[i - 1] for i in order[1:]]
    return out


def _flat(d: Derivation0):
    return [x for row in d.matrix for x in row]


@dataclass
class CRg0:
    basis: list[Derivation0]

    @property
    def r(self) -> int:
        return len(self.basis)


def cr_g0(m: GNLA, J: Matrix2) -> CRg0:
    """der0(m) intersected with the commutant of J on g_-1.

    J may be an honest complex structure or any trace-free matrix with
    positive determinant (a positive multiple of one); the commutant agrees.
    """
    J = [[Fraction(x) for x in row] for row in J]
    tr = J[0][0] + J[1][1]
    if tr or linalg.det2(J) <= 0:
        raise UsageError("J must be trace-free with positive determinant")
    return CRg0(commutant_in(der0(m), J))


# ------------------------------------------------------------------ prolongation

@dataclass
class ProlongationReport:
    dims_negative: list[int]
    dim_g0: int
    dims_positive: list[int]
    rigid: bool
    terminated: bool
    total: int | None
    max_degree: int
    components: list = field(default_factory=list, repr=False)

    def to_json(self):
        return {
            "dims_negative": self.dims_negative,
            "dim_g0": self.dim_g0,
            "dims_positive": self.dims_positive,
            "rigid": self.rigid,
            "total": self.total,
            "terminated": self.terminated,
            "max_degree": self.max_degree,
        }


class _Tower:
    """Components g_0, g_1, ... stored in the common map format."""

    def __init__(self, m: GNLA, g0: Sequence[Derivation0]):
        self.m = m
        self.comp: list[list[dict]] = [[d.as_map() for d in g0]]

    def target_dim(self, k: int, level: int) -> int:
        if k < level:
            lev = level - k
            return len(self.m.level_indices(lev)) if lev <= self.m.depth else 0
        return len(self.comp[k - level])

    def _evaluate_into(self, k: int, a_level: int, coords_of, b: int, sign, row_for):
        """Accumulate sign*[phi(e_a), e_b] where phi(e_a) = sum coords_of(s) * f_s."""
        m = self.m
        lb = m.levels[b]
        if k < a_level:
            src = m.level_indices(a_level - k)
            for s, t in enumerate(src):
                for c, cf in m.bracket(t, b).items():
                    # c lies in level a_level - k + lb; coordinate position in that level
                    pos = self._m_pos(c)
                    for var, x in coords_of(s):
                        row_for(pos)[var] = row_for(pos).get(var, 0) + sign * x * cf
        else:
            comp = self.comp[k - a_level]
            for s, u in enumerate(comp):
                val = u[b]
                for pos, y in enumerate(val):
                    if y:
                        for var, x in coords_of(s):
                            row_for(pos)[var] = row_for(pos).get(var, 0) + sign * x * y

    def _m_pos(self, c: int) -> int:
        return self.m.level_indices(self.m.levels[c]).index(c)

    def step(self) -> list[dict]:
        """Compute the next component g_k (k = len(comp)) without storing it."""
        m = self.m
        k = len(self.comp)
        var = {}
        for a in range(m.dim):
            for s in range(self.target_dim(k, m.levels[a])):
                var[(a, s)] = len(var)
        nvars = len(var)
        if nvars == 0:
            return []
        rows: list[dict] = []
        for a in range(m.dim):
            for b in range(a + 1, m.dim):
                la, lb = m.levels[a], m.levels[b]
                if self.target_dim(k, la + lb) == 0:
                    continue
                eq: dict[int, dict] = {}

                def row_for(pos, eq=eq):
                    return eq.setdefault(pos, {})

                # phi([e_a, e_b])
                for c, cf in m.bracket(a, b).items():
                    for s in range(self.target_dim(k, m.levels[c])):
                        r = row_for(s)
                        v = var[(c, s)]
                        r[v] = r.get(v, 0) + cf
                # - [phi(e_a), e_b]
                self._evaluate_into(k, la, lambda s, a=a: [(var[(a, s)], 1)], b, -1, row_for)
                # - [e_a, phi(e_b)] = + [phi(e_b), e_a]
                self._evaluate_into(k, lb, lambda s, b=b: [(var[(b, s)], 1)], a, +1, row_for)
                for r in eq.values():
                    r = {x: y for x, y in r.items() if y}
                    if r:
                        rows.append(r)
        kernel = linalg.nullspace_sparse(rows, nvars)
        out = []
        for v in kernel:
            phi = {}
            for a in range(m.dim):
                d = self.target_dim(k, m.levels[a])
                phi[a] = tuple(v[var[(a, s)]] for s in range(d))
            out.append(phi)
        return out

    def push(self, comp: list[dict]):
        self.comp.append(comp)


DEFAULT_MAX_DEGREE = 6


def prolong(m: GNLA, g0: Sequence[Derivation0] | CRg0, max_degree: int = DEFAULT_MAX_DEGREE
            ) -> ProlongationReport:
    """Tanaka prolongation pr(m, g0), computed degree by degree.

    Positive components take values in the previously computed components, so
    brackets with g_-1 land in the given g0 (the CR filter).
    """
    if isinstance(g0, CRg0):
        g0 = g0.basis
    if max_degree < 1:
        raise UsageError("max_degree must be >= 1")
    tower = _Tower(m, g0)
    dims_pos = []
    terminated = False
    for _ in range(1, max_degree + 1):
        comp = tower.step()
        if not comp:
            terminated = True
            break
        tower.push(comp)
        dims_pos.append(len(comp))
    dneg = list(reversed(m.dims))
    total = m.dim + len(g0) + sum(dims_pos) if terminated else None
    return ProlongationReport(
        dims_negative=dneg, dim_g0=len(g0), dims_positive=dims_pos,
        rigid=terminated and not dims_pos, terminated=terminated, total=total,
        max_degree=max_degree, components=tower.comp,
    )


def next_component_after(report: ProlongationReport, m: GNLA) -> int:
    """Dimension of the component following the last computed one."""
    tower = _Tower(m, [])
    tower.comp = list(report.components)
    return len(tower.step())


def symmetry_bound(m: GNLA, J: Matrix2) -> int:
    """dim m + r, after checking the prolongation is rigid (depth > 2)."""
    g0 = cr_g0(m, J)
    if m.depth > 2:
        rep = prolong(m, g0, max_degree=1)
        if not rep.rigid:
            raise InternalConsistencyError(
                f"g_1 has dimension {rep.dims_positive[0]} for a depth-{m.depth} symbol "
                f"(contradicts prolongation rigidity): {m.relations_str()}"
            )
        return m.dim + g0.r
    rep = prolong(m, g0)
    if not rep.terminated:
        raise UsageError("prolongation did not terminate: infinite type")
    return rep.total


STANDARD_J = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
