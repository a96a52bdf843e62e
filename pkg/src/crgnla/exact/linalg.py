"""Exact linear algebra over Q.

Rows are scaled to integers and eliminated fraction-free (cross
multiplication followed by content removal), so intermediate growth stays
bounded.  Matrices are accepted as lists of rows; entries may be ints,
Fractions, "p/q" strings, real GaussRats or constant MPolys.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from ..errors import SpecializeParametersError
from .numbers import GaussRat


def _entry(x) -> Fraction:
    if type(x) is int or type(x) is Fraction:
        return Fraction(x)
    if isinstance(x, GaussRat):
        if x.im:
            raise ValueError(f"complex entry {x}; split into real and imaginary parts")
        return x.re
    # late import keeps numbers/poly free of linalg
    from .poly import MPoly

    if isinstance(x, MPoly):
        if not x.is_constant():
            raise SpecializeParametersError(
                f"specialize parameters first (entry depends on {sorted(x.variables())})"
            )
        return _entry(x.constant_term())
    return Fraction(x)


def _int_row(row: dict) -> dict:
    """Scale a sparse rational row to a primitive integer row."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        d = v.denominator if isinstance(v, Fraction) else 1
        den = den * d // gcd(den, d)
    out = {k: int(v * den) for k, v in row.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def _sparse_rows(M) -> tuple[list[dict], int]:
    rows = []
    ncols = 0
    for r in M:
        if isinstance(r, dict):
            rows.append({k: _entry(v) for k, v in r.items() if _entry(v)})
        else:
            ncols = max(ncols, len(r))
            rows.append({k: _entry(v) for k, v in enumerate(r) if _entry(v)})
    return rows, ncols


def echelon(rows: list[dict]) -> tuple[list[dict], list[int]]:
    """Fully reduced echelon form of integer sparse rows.

    Returns primitive integer rows (pivot entries positive) and their pivot
    columns, sorted by pivot.  Every pivot column is zero in all other rows.
    """
    work = [r for r in (_int_row(r) for r in rows) if r]
    basis: dict[int, dict] = {}  # pivot col -> row
    for r in work:
        # reduce against existing pivots
        r = dict(r)
        for p in sorted(basis):
            if p in r:
                r = _eliminate(r, basis[p], p)
                if not r:
                    break
        if not r:
            continue
        p = min(r)
        if r[p] < 0:
            r = {k: -v for k, v in r.items()}
        # back-reduce existing rows
        for q, br in list(basis.items()):
            if p in br:
                basis[q] = _eliminate(br, r, p)
        basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def _eliminate(r: dict, piv: dict, p: int) -> dict:
    a = piv[p]
    b = r[p]
    g = gcd(a, b)
    fa, fb = a // g, b // g
    out = {k: v * fa for k, v in r.items()}
    for k, v in piv.items():
        s = out.get(k, 0) - fb * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    if fa < 0:
        out = {k: -v for k, v in out.items()}
    c = 0
    for v in out.values():
        c = gcd(c, v)
    if c > 1:
        out = {k: v // c for k, v in out.items()}
    return out


def rank(M) -> int:
    rows, _ = _sparse_rows(M)
    return len(echelon(rows)[0])


def rref(M, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    rows, nc = _sparse_rows(M)
    ncols = nc if ncols is None else ncols
    ech, pivots = echelon(rows)
    out = []
    for r, p in zip(ech, pivots):
        lead = r[p]
        dense = [Fraction(0)] * ncols
        for k, v in r.items():
            dense[k] = Fraction(v, lead)
        out.append(dense)
    return out, pivots


def nullspace_sparse(rows: list[dict], ncols: int) -> list[list[Fraction]]:
    """Kernel basis of a sparse system; one vector per free column."""
    ech, pivots = echelon(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(ech, pivots):
            c = r.get(f)
            if c:
                v[p] = Fraction(-c, r[p])
        basis.append(v)
    return basis


def nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : Mv = 0}.  ``ncols`` is needed when M has no rows."""
    rows, nc = _sparse_rows(M)
    if ncols is None:
        ncols = nc
    return nullspace_sparse(rows, ncols)


def member(v: Sequence, S: Sequence[Sequence]) -> list[Fraction] | None:
    """Coefficients c with sum c_k S_k = v, or None if v is not in span(S).

    When S is dependent the returned decomposition is one particular
    solution (free coefficients set to zero).
    """
    n = len(v)
    if any(len(s) != n for s in S):
        raise ValueError("vectors of different lengths")
    m = len(S)
    # columns are the S_k, augmented with -v
    rows = []
    for i in range(n):
        row = {k: _entry(S[k][i]) for k in range(m) if _entry(S[k][i])}
        vi = _entry(v[i])
        if vi:
            row[m] = -vi
        rows.append(row)
    ech, pivots = echelon(rows)
    if m in pivots:
        return None
    coeffs = [Fraction(0)] * m
    for r, p in zip(ech, pivots):
        coeffs[p] = Fraction(-r.get(m, 0), r[p])
    return coeffs


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    chosen = []
    basis: list[dict] = []
    for idx, v in enumerate(vectors):
        trial = basis + [{k: _entry(x) for k, x in enumerate(v) if _entry(x)}]
        if len(echelon(trial)[0]) > len(basis):
            basis = trial
            chosen.append(idx)
    return chosen


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(m)]
            for i in range(n)]


def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(A):
    n = len(A)
    aug = [list(map(Fraction, A[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R[:n]]


def det2(A) -> Fraction:
    return Fraction(A[0][0]) * A[1][1] - Fraction(A[0][1]) * A[1][0]
