"""Free nilpotent GNLA on two generators, realized on the Lyndon basis.

Lie elements are expanded in the free associative algebra on letters
1 < 2.  The standard bracketing P_w of a Lyndon word w equals w plus
lexicographically larger words, so coordinates in the Lyndon basis follow
from the Lyndon-word coefficients by forward substitution.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache

from ..errors import ResourceLimitError
from .core import GNLA

DEFAULT_MAX_DEPTH = 10


def max_depth_limit() -> int:
    env = os.environ.get("GNLA_MAX_DEPTH")
    return int(env) if env else DEFAULT_MAX_DEPTH


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def necklace_dim(k: int) -> int:
    """Number of Lyndon words of length k on two letters."""
    if k < 1:
        raise ValueError("k must be >= 1")
    total = sum(mobius(d) * 2 ** (k // d) for d in range(1, k + 1) if k % d == 0)
    assert total % k == 0
    return total // k


def lyndon_words(max_len: int, alphabet: int = 2) -> list[tuple[int, ...]]:
    """Lyndon words up to max_len in lexicographic order (Duval)."""
    out = []
    w = [0]
    while w:
        out.append(tuple(x + 1 for x in w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()
        if w:
            w[-1] += 1
    return out


def standard_factorization(w: tuple[int, ...]) -> tuple[tuple, tuple]:
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError(f"{w} has no standard factorization")


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            k = a + b
            out[k] = out.get(k, 0) + x * y
    return out


def _commutator(p: dict, q: dict) -> dict:
    out = _mul(p, q)
    for k, v in _mul(q, p).items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def word_name(w: tuple) -> str:
    if w == (1,):
        return "e1'"
    if w == (2,):
        return "e1''"
    return "e_" + "".join(map(str, w))


@lru_cache(maxsize=None)
def _free_data(depth: int):
    words = lyndon_words(depth)
    words.sort(key=lambda w: (len(w), w))
    expansion: dict[tuple, dict] = {}
    for w in sorted(words, key=len):
        if len(w) == 1:
            expansion[w] = {w: 1}
        else:
            u, v = standard_factorization(w)
            expansion[w] = _commutator(expansion[u], expansion[v])
    by_len: dict[int, list] = {}
    for w in words:
        by_len.setdefault(len(w), []).append(w)
    return words, expansion, by_len


def free_gnla(depth: int) -> GNLA:
    """Free 2-generator GNLA truncated at the given depth."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    limit = max_depth_limit()
    if depth > limit:
        raise ResourceLimitError(f"free GNLA depth {depth} exceeds limit {limit} (GNLA_MAX_DEPTH)")
    words, P, by_len = _free_data(depth)
    index = {w: i for i, w in enumerate(words)}
    br = {}
    for i, u in enumerate(words):
        for j in range(i + 1, len(words)):
            v = words[j]
            n = len(u) + len(v)
            if n > depth:
                continue
            lyn = by_len.get(n, [])
            pu, pv = P[u], P[v]
            lu, lv = len(u), len(v)
            # coefficient of x = P_u P_v - P_v P_u on each Lyndon word of length n
            x = {}
            for w in lyn:
                c = pu.get(w[:lu], 0) * pv.get(w[lu:], 0) - pv.get(w[:lv], 0) * pu.get(w[lv:], 0)
                if c:
                    x[w] = c
            if not x:
                continue
            coeffs = {}
            for w in lyn:  # increasing lexicographic order
                c = x.get(w, 0)
                for t, ct in coeffs.items():
                    c -= ct * P[t].get(w, 0)
                if c:
                    coeffs[w] = c
            br[(i, j)] = {index[w]: Fraction(c) for w, c in coeffs.items()}
    m = GNLA([word_name(w) for w in words], [len(w) for w in words], br, label=f"free({depth})")
    return m


def lyndon_basis_words(depth: int) -> list[tuple]:
    return list(_free_data(depth)[0])
