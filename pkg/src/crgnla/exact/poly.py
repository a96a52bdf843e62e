"""Multivariate polynomials over Q(i) with named indeterminates.

A :class:`PolyRing` fixes an ordered tuple of variable names; exponent
vectors are dense tuples of that width.  Some variables may be declared as
conjugates of each other (``z`` and ``zb``); :meth:`MPoly.conj` swaps them and
conjugates coefficients.  All other variables (real coordinates, parameters)
are treated as real.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .numbers import GaussRat, ONE, ZERO


class PolyRing:
    def __init__(self, names: Iterable[str], conjugates: Mapping[str, str] | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self.index = {n: k for k, n in enumerate(self.names)}
        self.nvars = len(self.names)
        perm = list(range(self.nvars))
        for a, b in (conjugates or {}).items():
            ia, ib = self.index[a], self.index[b]
            perm[ia], perm[ib] = ib, ia
        self._conj_perm = tuple(perm)
        self.conjugates = dict(conjugates or {})
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names and \
            self._conj_perm == other._conj_perm

    def __hash__(self):
        return hash((self.names, self._conj_perm))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def const(self, c) -> "MPoly":
        c = GaussRat.coerce(c)
        return MPoly(self, {self._zero_exp: c} if c else {})

    def var(self, name: str) -> "MPoly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return MPoly(self, {tuple(e): ONE})

    def gens(self):
        return [self.var(n) for n in self.names]

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "MPoly":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.index[n]] += k
        c = GaussRat.coerce(coeff)
        return MPoly(self, {tuple(e): c} if c else {})


class MPoly:
    """Sparse polynomial; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- construction helpers
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MPoly":
        c = GaussRat.coerce(c)
        if not c:
            return MPoly(self.ring, {})
        return MPoly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                out[e] = c if s is None else s + c
        return MPoly(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if not other.is_constant():
                raise ValueError("polynomial division only by constants")
            other = other.constant_term()
        return self.scale(GaussRat.coerce(other).inverse())

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = self.ring.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> GaussRat:
        return self.terms.get(self.ring._zero_exp, ZERO)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            used.update(k for k, x in enumerate(e) if x)
        return {self.ring.names[k] for k in used}

    def degree_in(self, name: str) -> int:
        k = self.ring.index[name]
        return max((e[k] for e in self.terms), default=0)

    # -- calculus and substitution
    def diff(self, name: str) -> "MPoly":
        k = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            p = e[k]
            if p:
                e2 = e[:k] + (p - 1,) + e[k + 1:]
                out[e2] = c * p
        return MPoly(self.ring, out)

    def conj(self) -> "MPoly":
        perm = self.ring._conj_perm
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[perm[k]] for k in range(len(e)))] = c.conj()
        return MPoly(self.ring, out)

    def real_part(self) -> "MPoly":
        return (self + self.conj()).scale(GaussRat(1, 0) / 2)

    def imag_part(self) -> "MPoly":
        return (self - self.conj()) * GaussRat(0, -1) / 2

    def subs(self, mapping: Mapping[str, "MPoly"], ring: PolyRing | None = None) -> "MPoly":
        """Substitute polynomials for variables.

        Unmapped variables are carried over by name into ``ring`` (default:
        own ring) and must exist there.
        """
        ring = ring or self.ring
        sub_idx = {}
        keep_idx = {}
        for k, n in enumerate(self.ring.names):
            if n in mapping:
                p = mapping[n]
                sub_idx[k] = p if isinstance(p, MPoly) else ring.const(p)
            else:
                keep_idx[k] = ring.index.get(n)
        powers: dict = {}

        def power(k, p):
            key = (k, p)
            if key not in powers:
                powers[key] = sub_idx[k] ** p
            return powers[key]

        acc: dict = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            term = None
            for k, p in enumerate(e):
                if not p:
                    continue
                if k in sub_idx:
                    q = power(k, p)
                    term = q if term is None else term * q
                else:
                    j = keep_idx[k]
                    if j is None:
                        raise ValueError(f"variable {self.ring.names[k]} not in target ring")
                    ne[j] += p
            mono = MPoly(ring, {tuple(ne): c})
            term = mono if term is None else term * mono
            for e2, c2 in term.terms.items():
                s = acc.get(e2)
                acc[e2] = c2 if s is None else s + c2
        return MPoly(ring, {e: c for e, c in acc.items() if c})

    def to_ring(self, ring: PolyRing) -> "MPoly":
        if ring == self.ring:
            return MPoly(ring, self.terms)
        return self.subs({}, ring)

    def evaluate(self, point: Mapping[str, object]) -> "MPoly | GaussRat":
        """Evaluate the listed variables; returns GaussRat when nothing is left."""
        mapping = {n: self.ring.const(v) for n, v in point.items() if n in self.ring.index}
        out = self.subs(mapping)
        if out.is_constant():
            return out.constant_term()
        return out

    def coefficients(self):
        return list(self.terms.values())

    def items(self):
        return self.terms.items()

    # -- display
    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if p == 1 else f"{n}^{p}" for n, p in zip(self.ring.names, e) if p
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_is_zero(p: MPoly) -> bool:
    """True iff ``p`` is identically zero, in every variable and parameter."""
    return p.is_zero()
