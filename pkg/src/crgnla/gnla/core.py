"""Graded nilpotent Lie algebras with exact structure constants.

Basis elements carry a positive *level* k meaning they live in g_{-k}.  The
JSON form stores the grade -k.  Basis order is by level, then as given.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ..errors import NotFundamentalError, ValidationError
from ..exact import linalg
from ..exact.numbers import rat_str, to_rat

Vec = list  # list[Fraction] of length dim


class GNLA:
    """m = g_{-nu} + ... + g_{-1} given by a named basis and brackets.

    ``brackets`` maps index pairs (i, j), i < j, to {k: coefficient}.
    """

    def __init__(self, names: Sequence[str], levels: Sequence[int],
                 brackets: dict[tuple[int, int], dict[int, Fraction]], label: str | None = None):
        order = sorted(range(len(names)), key=lambda k: levels[k])
        if order != list(range(len(names))):
            raise ValueError("basis must be listed in increasing level")
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names")
        self.names = tuple(names)
        self.levels = tuple(int(k) for k in levels)
        if any(k < 1 for k in self.levels):
            raise ValueError("levels must be positive (element of g_{-k} has level k)")
        self.index = {n: i for i, n in enumerate(self.names)}
        clean = {}
        for (i, j), terms in brackets.items():
            t = {k: Fraction(c) for k, c in terms.items() if c}
            if not t:
                continue
            if i == j:
                raise ValidationError(f"[{names[i]},{names[i]}] must vanish (antisymmetry)",
                                      witness=(names[i], names[i]))
            if i > j:
                i, j = j, i
                t = {k: -c for k, c in t.items()}
            if (i, j) in clean:
                raise ValueError(f"bracket [{names[i]},{names[j]}] given twice")
            clean[(i, j)] = t
        self._br = clean
        self.label = label

    # -- basic data
    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def depth(self) -> int:
        return max(self.levels, default=0)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.levels.count(k) for k in range(1, self.depth + 1))

    def level_indices(self, k: int) -> list[int]:
        return [i for i, l in enumerate(self.levels) if l == k]

    def zero(self) -> Vec:
        return [Fraction(0)] * self.dim

    def unit(self, i: int) -> Vec:
        v = self.zero()
        v[i] = Fraction(1)
        return v

    def vec(self, terms: dict) -> Vec:
        """Vector from {name or index: coefficient}."""
        v = self.zero()
        for key, c in terms.items():
            i = self.index[key] if isinstance(key, str) else key
            v[i] += to_rat(c)
        return v

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self._br.get((i, j), {})
        return {k: -c for k, c in self._br.get((j, i), {}).items()}

    def bracket_names(self, a: str, b: str) -> dict[str, Fraction]:
        return {self.names[k]: c for k, c in self.bracket(self.index[a], self.index[b]).items()}

    def bracket_vec(self, u: Vec, v: Vec) -> Vec:
        out = self.zero()
        nu = [(i, x) for i, x in enumerate(u) if x]
        nv = [(j, y) for j, y in enumerate(v) if y]
        for i, x in nu:
            for j, y in nv:
                if i == j:
                    continue
                for k, c in self.bracket(i, j).items():
                    out[k] += x * y * c
        return out

    def structure_items(self):
        """Nonzero (i, j, {k: c}) with i < j, in index order."""
        return sorted(self._br.items())

    def ad_matrix(self, u: Vec) -> list[list[Fraction]]:
        cols = [self.bracket_vec(u, self.unit(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    # -- comparisons
    def same_structure(self, other: "GNLA") -> bool:
        return (self.names == other.names and self.levels == other.levels
                and self._br == other._br)

    def __eq__(self, other):
        return isinstance(other, GNLA) and self.same_structure(other)

    def __hash__(self):
        return hash((self.names, self.levels, tuple(sorted((k, tuple(sorted(v.items())))
                                                          for k, v in self._br.items()))))

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<GNLA{tag} dims={self.dims}>"

    def relations_str(self) -> str:
        parts = []
        for (i, j), t in self.structure_items():
            rhs = _terms_str(self.names, sorted(t.items()))
            parts.append(f"[{self.names[i]},{self.names[j]}] = {rhs}")
        return "; ".join(parts)

    # -- constructors
    @classmethod
    def from_relations(cls, basis: Iterable[tuple[str, int]], relations: Iterable,
                       label: str | None = None) -> "GNLA":
        """``relations``: iterable of (a, b, {c: coeff}) using names."""
        basis = list(basis)
        names = [b[0] for b in basis]
        levels = [b[1] for b in basis]
        idx = {n: i for i, n in enumerate(names)}
        br: dict = {}
        for a, b, terms in relations:
            i, j = idx[a], idx[b]
            t = {idx[c]: to_rat(v) for c, v in terms.items()}
            if i > j:
                i, j = j, i
                t = {k: -v for k, v in t.items()}
            if (i, j) in br:
                raise ValueError(f"relation [{a},{b}] given twice")
            br[(i, j)] = t
        return cls(names, levels, br, label=label)

    def transform(self, new_basis: Sequence[Vec], names: Sequence[str] | None = None,
                  levels: Sequence[int] | None = None, label: str | None = None) -> "GNLA":
        """Same algebra in a new basis; ``new_basis[t]`` are old coordinates.

        New basis vectors must be homogeneous; their levels are inferred
        unless given.
        """
        n = self.dim
        if len(new_basis) != n:
            raise ValueError("new basis has wrong size")
        if levels is None:
            levels = []
            for v in new_basis:
                ls = {self.levels[i] for i, x in enumerate(v) if x}
                if len(ls) != 1:
                    raise ValueError("new basis vectors must be nonzero and homogeneous")
                levels.append(ls.pop())
        names = list(names) if names is not None else list(self.names)
        P = [[new_basis[t][i] for t in range(n)] for i in range(n)]  # columns are new vectors
        Pinv = linalg.inverse(P)
        br = {}
        for s in range(n):
            for t in range(s + 1, n):
                w = self.bracket_vec(new_basis[s], new_basis[t])
                if any(w):
                    coords = linalg.mat_vec(Pinv, w)
                    br[(s, t)] = {k: c for k, c in enumerate(coords) if c}
        return GNLA(names, levels, br, label=label)

    def rename(self, names: Sequence[str], label: str | None = None) -> "GNLA":
        return GNLA(names, self.levels, self._br, label=label if label is not None else self.label)

    def truncate(self, depth: int) -> "GNLA":
        """Quotient by all grades below -depth."""
        keep = [i for i, l in enumerate(self.levels) if l <= depth]
        pos = {i: t for t, i in enumerate(keep)}
        br = {}
        for (i, j), terms in self._br.items():
            if i in pos and j in pos:
                t = {pos[k]: c for k, c in terms.items() if k in pos}
                if t:
                    br[(pos[i], pos[j])] = t
        return GNLA([self.names[i] for i in keep], [self.levels[i] for i in keep], br)

    # -- JSON
    def to_json(self) -> dict:
        brackets = []
        for (i, j), t in self.structure_items():
            brackets.append({
                "a": self.names[i], "b": self.names[j],
                "terms": [{"c": self.names[k], "coeff": rat_str(c)} for k, c in sorted(t.items())],
            })
        return {
            "depth": self.depth,
            "dims": list(self.dims),
            "basis": [{"name": n, "grade": -l} for n, l in zip(self.names, self.levels)],
            "brackets": brackets,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict | str) -> "GNLA":
        if isinstance(data, str):
            data = json.loads(data)
        basis = [(b["name"], -int(b["grade"])) for b in data["basis"]]
        names = [b[0] for b in basis]
        idx = {n: i for i, n in enumerate(names)}
        raw: dict = {}
        for entry in data.get("brackets", []):
            i, j = idx[entry["a"]], idx[entry["b"]]
            t = {}
            for term in entry.get("terms", []):
                k = idx[term["c"]]
                t[k] = t.get(k, Fraction(0)) + to_rat(term["coeff"])
            t = {k: c for k, c in t.items() if c}
            if i == j:
                if t:
                    raise ValidationError(f"antisymmetry violated: [{names[i]},{names[i]}] != 0",
                                          witness=(names[i], names[i]))
                continue
            key, tt = ((i, j), t) if i < j else ((j, i), {k: -c for k, c in t.items()})
            if key in raw and raw[key] != tt:
                a, b = names[key[0]], names[key[1]]
                raise ValidationError(f"antisymmetry violated for pair ({a},{b})", witness=(a, b))
            raw[key] = tt
        m = cls(names, [b[1] for b in basis], raw)
        if "dims" in data and list(data["dims"]) != list(m.dims):
            raise ValidationError(f"declared dims {data['dims']} disagree with basis {list(m.dims)}")
        return m


# ---------------------------------------------------------------- checks

@dataclass
class ValidationReport:
    ok: bool
    message: str = "ok"
    witness: tuple | None = None

    def to_json(self):
        return {"ok": self.ok, "message": self.message,
                "witness": list(self.witness) if self.witness else None}


def validate(m: GNLA) -> ValidationReport:
    """Antisymmetry, grading additivity and Jacobi, checked exactly.

    A Jacobi failure is reported ahead of a grading violation, since an
    injected off-grade bracket usually breaks both.
    """
    graded = None
    for (i, j), terms in m.structure_items():
        target = m.levels[i] + m.levels[j]
        for k in terms:
            if m.levels[k] != target and graded is None:
                graded = ValidationReport(
                    False,
                    f"grading violated: [{m.names[i]},{m.names[j]}] has a component on "
                    f"{m.names[k]} in g_-{m.levels[k]}, expected g_-{target}",
                    (m.names[i], m.names[j]),
                )
    n = m.dim
    triples = sorted(combinations(range(n), 3),
                     key=lambda t: (sum(m.levels[x] for x in t), t))
    for a, b, c in triples:
        if graded is None and m.levels[a] + m.levels[b] + m.levels[c] > m.depth:
            break
        ea, eb, ec = m.unit(a), m.unit(b), m.unit(c)
        s = m.bracket_vec(ea, m.bracket_vec(eb, ec))
        t = m.bracket_vec(eb, m.bracket_vec(ec, ea))
        u = m.bracket_vec(ec, m.bracket_vec(ea, eb))
        tot = [x + y + z for x, y, z in zip(s, t, u)]
        if any(tot):
            return ValidationReport(
                False,
                f"Jacobi identity fails on ({m.names[a]}, {m.names[b]}, {m.names[c]})",
                (m.names[a], m.names[b], m.names[c]),
            )
    return graded or ValidationReport(True)


def check_valid(m: GNLA) -> GNLA:
    rep = validate(m)
    if not rep.ok:
        raise ValidationError(rep.message, witness=rep.witness)
    return m


def generated_levels(m: GNLA) -> list[list[Vec]]:
    """Bases (as vectors) of the subspaces spanned by iterated brackets of g_{-1}."""
    g1 = [m.unit(i) for i in m.level_indices(1)]
    out = [g1]
    cur = g1
    for _ in range(2, m.depth + 1):
        cand = [m.bracket_vec(x, y) for x in g1 for y in cur]
        keep = linalg.independent_subset(cand)
        cur = [cand[i] for i in keep]
        out.append(cur)
    return out


def center(m: GNLA) -> list[Vec]:
    """Basis of the center."""
    n = m.dim
    rows = []
    for b in range(n):
        # [x, e_b] = sum_a x_a [e_a, e_b]
        per_k: dict[int, dict] = {}
        for a in range(n):
            for k, c in m.bracket(a, b).items():
                per_k.setdefault(k, {})[a] = c
        rows.extend(per_k.values())
    return linalg.nullspace_sparse(rows, n)


@dataclass
class FundamentalReport:
    ok: bool
    witness: str | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"fundamental": self.ok, "witness": self.witness}


def is_fundamental(m: GNLA) -> FundamentalReport:
    gen = generated_levels(m)
    for k, vecs in enumerate(gen, start=1):
        idx = m.level_indices(k)
        if len(vecs) < len(idx):
            # name an ungenerated basis element
            for i in idx:
                if linalg.member(m.unit(i), vecs) is None:
                    return FundamentalReport(False, f"{m.names[i]} is not bracket-generated by g_-1",
                                             {"ungenerated": m.names[i]})
    top = set(m.level_indices(m.depth))
    for z in center(m):
        extra = [i for i, x in enumerate(z) if x and i not in top]
        if extra:
            return FundamentalReport(False, f"central element {_vec_str(m, z)} outside g_-{m.depth}",
                                     {"central": _vec_str(m, z)})
    # top grade must be central (automatic by grading) and nonzero
    return FundamentalReport(True)


def check_fundamental(m: GNLA) -> GNLA:
    rep = is_fundamental(m)
    if not rep.ok:
        raise NotFundamentalError(rep.witness, witness=rep.witness)
    return m


@dataclass(frozen=True)
class GrowthReport:
    cumulative: tuple[int, ...]
    reduced: tuple[int, ...]

    def to_json(self):
        return {"cumulative": list(self.cumulative), "reduced": list(self.reduced)}


def growth(m: GNLA) -> GrowthReport:
    red = m.dims
    cum = []
    s = 0
    for d in red:
        s += d
        cum.append(s)
    return GrowthReport(tuple(cum), tuple(red))


def _terms_str(names, items) -> str:
    parts = []
    for i, x in items:
        if x == 1:
            parts.append(names[i])
        elif x == -1:
            parts.append("-" + names[i])
        else:
            parts.append(f"{rat_str(x)}*{names[i]}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _vec_str(m: GNLA, v: Vec) -> str:
    return _terms_str(m.names, [(i, x) for i, x in enumerate(v) if x])


vec_str = _vec_str
