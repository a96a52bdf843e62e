"""Quotients, Cauchy directions, symbol-level deprolongation and sl2-isotypic
parts of graded components."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import NotDeprolongableError, NotFundamentalError, UsageError
from ..exact import linalg
from .core import GNLA, Vec, check_valid, is_fundamental


def standard_names(levels: Sequence[int]) -> list[str]:
    """e1', e1'' at level 1; e_k (or e_k', e_k'', ... when repeated) above."""
    counts = {k: levels.count(k) for k in set(levels)}
    seen: dict[int, int] = {}
    names = []
    for k in levels:
        seen[k] = seen.get(k, 0) + 1
        if counts[k] == 1 and k > 1:
            names.append(f"e{k}")
        else:
            names.append(f"e{k}" + "'" * seen[k])
    return names


def ideal_generated(m: GNLA, W: Sequence[Vec]) -> dict[int, list[Vec]]:
    """Graded ideal generated by homogeneous vectors, as bases per level."""
    by_level: dict[int, list[Vec]] = {}
    for w in W:
        ls = {m.levels[i] for i, x in enumerate(w) if x}
        if len(ls) > 1:
            raise UsageError("quotient needs homogeneous vectors")
        if ls:
            by_level.setdefault(ls.pop(), []).append(list(w))
    for k in sorted(by_level):
        keep = linalg.independent_subset(by_level[k])
        by_level[k] = [by_level[k][i] for i in keep]
    for k in range(1, m.depth + 1):
        cur = by_level.get(k)
        if not cur:
            continue
        for l in range(1, m.depth - k + 1):
            new = [m.bracket_vec(m.unit(b), v) for b in m.level_indices(l) for v in cur]
            tgt = by_level.setdefault(k + l, [])
            cand = tgt + new
            keep = linalg.independent_subset(cand)
            by_level[k + l] = [cand[i] for i in keep]
    return {k: v for k, v in by_level.items() if v}


def quotient(m: GNLA, W: Sequence[Vec], names: Sequence[str] | None = None,
             label: str | None = None) -> GNLA:
    """m / <W>, kept on the surviving (non-pivot) basis elements."""
    ideal = ideal_generated(m, W)
    reducers = []  # (pivot index, row) with row[pivot] = 1
    for k, vecs in ideal.items():
        R, piv = linalg.rref(vecs, m.dim)
        reducers.extend(zip(piv, R))
    dead = {p for p, _ in reducers}
    keep = [i for i in range(m.dim) if i not in dead]
    pos = {i: t for t, i in enumerate(keep)}

    def reduce(v):
        v = list(v)
        for p, row in reducers:
            if v[p]:
                c = v[p]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    br = {}
    for s, i in enumerate(keep):
        for t in range(s + 1, len(keep)):
            j = keep[t]
            w = reduce(m.bracket_vec(m.unit(i), m.unit(j)))
            terms = {pos[k]: c for k, c in enumerate(w) if c}
            if terms:
                br[(s, t)] = terms
    q = GNLA(list(names) if names else [m.names[i] for i in keep], [m.levels[i] for i in keep], br,
             label=label)
    check_valid(q)
    rep = is_fundamental(q)
    if not rep.ok:
        raise NotFundamentalError(f"quotient is not fundamental: {rep.witness}", witness=rep.witness)
    return q


def cauchy_directions(m: GNLA, level: int = 1) -> list[Vec]:
    """x in g_-1 with [x, m] = 0 (level 1) or [x, g_-2] = 0 (level 2)."""
    g1 = m.level_indices(1)
    if level == 1:
        targets = range(m.dim)
    elif level == 2:
        targets = m.level_indices(2)
    else:
        raise UsageError("level must be 1 or 2")
    rows = []
    for b in targets:
        per_k: dict[int, dict] = {}
        for s, a in enumerate(g1):
            for k, c in m.bracket(a, b).items():
                per_k.setdefault(k, {})[s] = c
        rows.extend(per_k.values())
    ker = linalg.nullspace_sparse(rows, len(g1))
    out = []
    for v in ker:
        full = m.zero()
        for s, a in enumerate(g1):
            full[a] = v[s]
        out.append(full)
    return out


def deprolong(m: GNLA) -> GNLA:
    """Symbol of the deprolonged distribution.

    New g_-1 is (g_-1 / <x>) + g_-2 for the level-2 Cauchy direction x,
    new g_-k is g_-(k+1).  Brackets are those of m whose grades match the new
    grading; components that would jump a grade are dropped.
    """
    d = m.dims
    if len(d) < 3 or d[0] != 2 or d[1] != 1 or d[2] != 1:
        raise NotDeprolongableError(f"not deprolongable: growth {d} does not start (2,1,1)")
    cd = cauchy_directions(m, 2)
    if len(cd) != 1:
        raise NotDeprolongableError(
            f"not deprolongable: level-2 Cauchy directions have dimension {len(cd)}")
    x = cd[0]
    g1 = m.level_indices(1)
    y = next(i for i in g1 if linalg.rank([x, m.unit(i)]) == 2)
    old = [y] + [i for i in range(m.dim) if m.levels[i] >= 2]
    new_level = [1] + [m.levels[i] - 1 for i in old[1:]]
    pos = {i: t for t, i in enumerate(old)}
    br = {}
    for s in range(len(old)):
        for t in range(s + 1, len(old)):
            i, j = old[s], old[t]
            want = new_level[s] + new_level[t] + 1  # old level of the expected result
            terms = {pos[k]: c for k, c in m.bracket(i, j).items() if m.levels[k] == want}
            if terms:
                br[(s, t)] = terms
    out = GNLA(standard_names(new_level), new_level, br,
               label=f"deprolong({m.label})" if m.label else None)
    rep = check_valid(out) and is_fundamental(out)
    if not rep.ok:
        raise NotDeprolongableError(f"not deprolongable: induced symbol is not fundamental "
                                    f"({rep.witness})")
    return out


# ------------------------------------------------------------ sl2 structure

def sl2_triple(m: GNLA):
    """Derivations acting on g_-1 as H = diag(1,-1), E, F (requires gl(2) in der0)."""
    from ..prolong import der0

    ders = der0(m)
    blocks = [d.g1_block for d in ders]
    targets = {
        "H": [[1, 0], [0, -1]],
        "E": [[0, 1], [0, 0]],
        "F": [[0, 0], [1, 0]],
    }
    out = {}
    for key, T in targets.items():
        S = [[b[i][j] for i in range(2) for j in range(2)] for b in blocks]
        c = linalg.member([T[i][j] for i in range(2) for j in range(2)], S)
        if c is None:
            raise UsageError(f"der0 of {m!r} does not contain gl(2)")
        n = m.dim
        out[key] = [[sum((c[s] * ders[s].matrix[i][j] for s in range(len(ders))), Fraction(0))
                     for j in range(n)] for i in range(n)]
    return out


def casimir_block(m: GNLA, level: int):
    """Casimir H^2/2 + EF + FE of the sl2 in der0, restricted to one level."""
    tr = sl2_triple(m)
    idx = m.level_indices(level)

    def blk(M):
        return [[M[i][j] for j in idx] for i in idx]

    H, E, F = blk(tr["H"]), blk(tr["E"]), blk(tr["F"])
    HH = linalg.mat_mul(H, H)
    EF = linalg.mat_mul(E, F)
    FE = linalg.mat_mul(F, E)
    n = len(idx)
    return [[HH[i][j] / 2 + EF[i][j] + FE[i][j] for j in range(n)] for i in range(n)]


def isotypic_part(m: GNLA, level: int, t: int) -> list[Vec]:
    """Basis of the Gamma_t-isotypic part of g_-level (as full vectors)."""
    C = casimir_block(m, level)
    lam = Fraction(t * (t + 2), 2)
    n = len(C)
    shifted = [[C[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    ker = linalg.nullspace(shifted, n)
    idx = m.level_indices(level)
    out = []
    for v in ker:
        full = m.zero()
        for s, i in enumerate(idx):
            full[i] = v[s]
        out.append(full)
    return out


def free_in_paper_basis(depth: int) -> GNLA:
    """free(depth) with levels <= 4 renamed to the e-notation of the depth-4 relations."""
    from .free import free_gnla

    f = free_gnla(depth)
    paper = {"e1'": ("e1'", 1), "e1''": ("e1''", 1), "e_12": ("e2", 1), "e_112": ("e3'", 1),
             "e_122": ("e3''", -1), "e_1112": ("e4'", 1), "e_1122": ("e4''", -1),
             "e_1222": ("e4'''", 1)}
    vecs, names = [], []
    for i, n in enumerate(f.names):
        new, sign = paper.get(n, (n, 1))
        v = f.unit(i)
        v[i] = Fraction(sign)
        vecs.append(v)
        names.append(new)
    return f.transform(vecs, names, label=f"free({depth})")


def subfree5(keep_t: int) -> GNLA:
    """free(5) modulo the complementary sl2-isotypic part of g_-5.

    keep_t = 1 gives m'_5 (growth (2,1,2,3,2)); keep_t = 3 gives m''_5
    (growth (2,1,2,3,4)).
    """
    if keep_t not in (1, 3):
        raise UsageError("g_-5 of the free algebra is Gamma_1 + Gamma_3")
    f = free_in_paper_basis(5)
    drop = isotypic_part(f, 5, 4 - keep_t)
    q = quotient(f, drop)
    names = standard_names(q.levels)
    label = "mprime5" if keep_t == 1 else "mdblprime5"
    return q.rename(names, label=label)
