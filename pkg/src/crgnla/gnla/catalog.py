"""Named symbols: Goursat and non-Goursat towers, Hilbert-Cartan and its
elliptic extensions, sub-free quotients of the free algebra."""

from __future__ import annotations

from ..errors import UsageError
from .core import GNLA, check_fundamental, check_valid

P1, P2 = "e1'", "e1''"


def _e(k: int) -> str:
    return f"e{k}"


def heis3() -> GNLA:
    m = gou(2)
    m.label = "heis3"
    return m


def gou(n: int) -> GNLA:
    """[e1',e1''] = e2, [e1',e_k] = e_{k+1}; depth n, dimension n+1."""
    if n < 2:
        raise UsageError("Gou(n) needs n >= 2")
    basis = [(P1, 1), (P2, 1)] + [(_e(k), k) for k in range(2, n + 1)]
    rel = [(P1, P2, {_e(2): 1})]
    rel += [(P1, _e(k), {_e(k + 1): 1}) for k in range(2, n)]
    return GNLA.from_relations(basis, rel, label=f"Gou({n})")


def ngou(n: int) -> GNLA:
    """Non-Goursat symbol for odd n = 2k+1 >= 5.

    Goursat chain up to e_{n-1}, then [e_j, e_{n-j}] = (-1)^{j-1} e_n for
    j = 1..k with e_1 read as e1''.
    """
    if n < 5 or n % 2 == 0:
        raise UsageError(f"nGou(n) exists only for odd n >= 5, got {n}")
    k = (n - 1) // 2
    basis = [(P1, 1), (P2, 1)] + [(_e(j), j) for j in range(2, n + 1)]
    rel = [(P1, P2, {_e(2): 1})]
    rel += [(P1, _e(j), {_e(j + 1): 1}) for j in range(2, n - 1)]
    for j in range(1, k + 1):
        a = P2 if j == 1 else _e(j)
        rel.append((a, _e(n - j), {_e(n): (-1) ** (j - 1)}))
    return GNLA.from_relations(basis, rel, label=f"nGou({n})")


_HC_BASIS = [(P1, 1), (P2, 1), ("e2", 2), ("e3'", 3), ("e3''", 3)]
_HC_REL = [(P1, P2, {"e2": 1}), (P1, "e2", {"e3'": 1}), (P2, "e2", {"e3''": 1})]


def m_hc() -> GNLA:
    return GNLA.from_relations(_HC_BASIS, _HC_REL, label="m_HC")


def ell6() -> GNLA:
    rel = _HC_REL + [(P1, "e3'", {"e4": 1}), (P2, "e3''", {"e4": 1})]
    return GNLA.from_relations(_HC_BASIS + [("e4", 4)], rel, label="ell6")


def ell7() -> GNLA:
    rel = _HC_REL + [
        (P1, "e3'", {"e4'": 1}), (P2, "e3''", {"e4'": -1}),
        (P1, "e3''", {"e4''": 1}), (P2, "e3'", {"e4''": 1}),
    ]
    return GNLA.from_relations(_HC_BASIS + [("e4'", 4), ("e4''", 4)], rel, label="ell7")


def ell8() -> GNLA:
    rel = _HC_REL + [(P1, "e3'", {"e4": 1}), (P2, "e3''", {"e4": 1})] + [
        (P1, "e4", {"e5'": 1}), ("e2", "e3''", {"e5'": 1}),
        (P2, "e4", {"e5''": 1}), ("e2", "e3'", {"e5''": -1}),
    ]
    basis = _HC_BASIS + [("e4", 4), ("e5'", 5), ("e5''", 5)]
    return GNLA.from_relations(basis, rel, label="ell8")


FREE4_BASIS = _HC_BASIS + [("e4'", 4), ("e4''", 4), ("e4'''", 4)]
FREE4_REL = _HC_REL + [
    (P1, "e3'", {"e4'": 1}), (P1, "e3''", {"e4''": 1}),
    (P2, "e3'", {"e4''": 1}), (P2, "e3''", {"e4'''": 1}),
]


def free4_paper() -> GNLA:
    """Free depth-4 algebra in the e-notation (growth (2,1,2,3))."""
    return GNLA.from_relations(FREE4_BASIS, FREE4_REL, label="free4")


def mprime5() -> GNLA:
    from .ops import subfree5
    return subfree5(1)


def mdblprime5() -> GNLA:
    from .ops import subfree5
    return subfree5(3)


def free(depth: int) -> GNLA:
    from .free import free_gnla
    return free_gnla(depth)


_FIXED = {
    "heis3": heis3, "m_HC": m_hc, "mHC": m_hc, "HC": m_hc,
    "ell6": ell6, "ell7": ell7, "ell8": ell8,
    "mprime5": mprime5, "mdblprime5": mdblprime5,
}
_PARAM = {"Gou": gou, "nGou": ngou, "free": free}

NAMES = ["Gou(n)", "nGou(n)", "heis3", "m_HC", "ell6", "ell7", "ell8", "mprime5", "mdblprime5",
         "free(depth)"]


def catalog(name: str, param: int | None = None) -> GNLA:
    """Look up a catalog symbol; ``name`` may also be written like ``Gou(5)``."""
    name = name.strip()
    if "(" in name and name.endswith(")"):
        base, arg = name[:-1].split("(", 1)
        name, param = base.strip(), int(arg)
    if name in _FIXED:
        if param is not None:
            raise UsageError(f"{name} takes no parameter")
        m = _FIXED[name]()
    elif name in _PARAM:
        if param is None:
            raise UsageError(f"{name} needs a parameter")
        m = _PARAM[name](int(param))
    else:
        raise UsageError(f"unknown catalog algebra {name!r}; known: {', '.join(NAMES)}")
    check_valid(m)
    check_fundamental(m)
    return m


def parse_growth(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    return tuple(int(c) for c in text)
