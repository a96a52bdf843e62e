"""Command-line front end: ``crgnla <group> <command> ...``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
3 internal-consistency error (a bug).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import CheckFailure, CRGnlaError, InternalConsistencyError, UsageError
from .exact.numbers import rat_str, to_rat

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Usage(Exception):
    """argparse errors, kept apart from SystemExit so main() can map them."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


class Output:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, data: dict, text: str):
        if self.as_json:
            self.stream.write(json.dumps(data, indent=2, sort_keys=False) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


# ------------------------------------------------------------ loading

def load_algebra(spec: str):
    """A catalog name such as ``Gou(5)`` or ``m_HC``, or a path to GNLA JSON."""
    from .gnla.catalog import catalog
    from .gnla.core import GNLA

    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as e:
                raise UsageError(f"{spec}: not valid JSON ({e})") from None
        try:
            m = GNLA.from_json(data)
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"{spec}: malformed GNLA JSON ({e})") from None
        m.label = os.path.splitext(os.path.basename(spec))[0]
        return m
    return catalog(spec)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: not valid JSON ({e})") from None


def load_J(spec: str | None):
    """``standard``, ``a,b``, or a JSON file with {"a","b"}, {"matrix"} or {"traceless_class"}."""
    from .cxstruct import ComplexStructure, j_from_json
    from .prolong import STANDARD_J

    if spec is None or spec == "standard":
        return STANDARD_J
    if os.path.exists(spec):
        return j_from_json(_read_json(spec))
    try:
        a, b = (to_rat(x) for x in spec.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--cr-J expects 'standard', 'a,b' or a JSON file, got {spec!r}") from None
    return ComplexStructure(a, b).matrix


def load_cochain(m, path: str):
    from .extend import GradedCochain

    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("cocycle", data.get("values"))
    if not isinstance(data, list) or not data:
        raise UsageError(f"{path}: expected a list of {{'a','b','value'}} entries")
    vals = {}
    for e in data:
        try:
            a, b = e["a"], e["b"]
        except (KeyError, TypeError):
            raise UsageError(f"{path}: each entry needs 'a', 'b' and 'value'") from None
        for n in (a, b):
            if n not in m.index:
                raise UsageError(f"{path}: unknown basis element {n!r}")
        vals[(a, b)] = to_rat(e["value"])
    degs = {m.levels[m.index[a]] + m.levels[m.index[b]] for a, b in vals}
    if len(degs) != 1:
        raise UsageError(f"{path}: cochain mixes degrees {sorted(degs)}")
    return GradedCochain.from_dict(m, degs.pop(), vals)


def parse_params(items) -> dict:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise UsageError(f"--param expects name=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            out[k.strip()] = to_rat(v.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--param {k}: {v!r} is not a rational") from None
    return out


def _depth_limit(requested: int | None, default: int) -> int:
    env = os.environ.get("GNLA_MAX_DEPTH")
    limit = int(env) if env else default
    if requested is None:
        return limit
    if requested > limit:
        raise UsageError(f"depth {requested} exceeds limit {limit} (set GNLA_MAX_DEPTH)")
    return requested


# ------------------------------------------------------------ gnla

def cmd_gnla_check(args, out):
    from .gnla.core import is_fundamental, validate

    m = load_algebra(args.algebra)
    v = validate(m)
    f = is_fundamental(m) if v.ok else None
    data = {"algebra": m.label, "valid": v.to_json(),
            "fundamental": f.to_json() if f is not None else None}
    lines = [f"{m.label}: dims {list(m.dims)}", f"valid: {v.message}"]
    if f is not None:
        lines.append("fundamental: yes" if f.ok else f"fundamental: no ({f.witness})")
    out.emit(data, "\n".join(lines))
    return EXIT_OK if v.ok and f.ok else EXIT_CHECK


def cmd_gnla_growth(args, out):
    from .gnla.core import growth

    m = load_algebra(args.algebra)
    g = growth(m)
    out.emit({"algebra": m.label, **g.to_json()},
             f"{m.label}: reduced {list(g.reduced)}, cumulative {list(g.cumulative)}")
    return EXIT_OK


def cmd_gnla_catalog(args, out):
    from .gnla.catalog import NAMES

    if not args.name:
        out.emit({"names": NAMES}, "\n".join(NAMES))
        return EXIT_OK
    m = load_algebra(args.name)
    out.emit(m.to_json(), f"{m.label}: dims {list(m.dims)}\n{m.relations_str()}")
    return EXIT_OK


def cmd_gnla_free(args, out):
    from .gnla.free import free_gnla

    depth = _depth_limit(args.depth, 10)
    m = free_gnla(depth)
    data = {"depth": depth, "dims": list(m.dims)}
    if args.full:
        data["gnla"] = m.to_json()
    out.emit(data, f"free({depth}): dims {list(m.dims)}, total {m.dim}")
    return EXIT_OK


def cmd_gnla_deprolong(args, out):
    from .gnla.ops import deprolong

    m = load_algebra(args.algebra)
    chain = [m]
    while True:
        nxt = deprolong(chain[-1])
        chain.append(nxt)
        if not args.iterate or nxt.depth <= 2:
            break
    last = chain[-1]
    data = {"chain": [list(x.dims) for x in chain], "result": last.to_json()}
    text = " -> ".join(str(list(x.dims)) for x in chain) + "\n" + last.relations_str()
    out.emit(data, text)
    return EXIT_OK


# ------------------------------------------------------------ prolong

def cmd_prolong_run(args, out):
    from .prolong import cr_g0, der0, prolong

    m = load_algebra(args.algebra)
    if args.full_g0:
        g0 = der0(m)
    else:
        g0 = cr_g0(m, load_J(args.cr_J)).basis
    rep = prolong(m, g0, max_degree=args.max_degree)
    pos = ",".join(str(d) for d in rep.dims_positive) or "0"
    neg = ",".join(str(d) for d in rep.dims_negative)
    text = (f"{m.label}: ({neg}|{rep.dim_g0}|{pos})"
            + (f", total {rep.total}" if rep.terminated else ", not terminated")
            + (", rigid" if rep.rigid else ""))
    out.emit({"algebra": m.label, **rep.to_json()}, text)
    return EXIT_OK


# ------------------------------------------------------------ extend

def cmd_extend_cocycles(args, out):
    from .extend import coboundaries, cocycles

    m = load_algebra(args.algebra)
    deg = args.degree or m.depth + 1
    Z = cocycles(m, deg)
    B = coboundaries(m, deg)
    data = {"algebra": m.label, "degree": deg, "dim_Z": len(Z), "dim_B": len(B),
            "cocycles": [w.to_json() for w in Z]}
    text = "\n".join([f"{m.label}: dim Z^2_{deg} = {len(Z)}, dim B^2_{deg} = {len(B)}"]
                     + [f"  {w}" for w in Z])
    out.emit(data, text)
    return EXIT_OK


def cmd_extend_apply(args, out):
    from .extend import extend

    m = load_algebra(args.algebra)
    w = load_cochain(m, args.cocycle)
    ext = extend(m, [w], label=args.label, require_fundamental=not args.allow_nonfundamental)
    out.emit(ext.to_json(), f"dims {list(ext.dims)}\n{ext.relations_str()}")
    return EXIT_OK


def cmd_extend_classify(args, out):
    from .extend import classify_hc_extension
    from .gnla.catalog import m_hc

    m = m_hc()
    ws = [load_cochain(m, p) for p in args.cocycle]
    t = classify_hc_extension(ws)
    out.emit(t.to_json(), f"{t.tag} (det {rat_str(t.det)})")
    return EXIT_OK


def cmd_extend_enumerate(args, out):
    from .extend import MAX_ENUMERATION_DEPTH, enumerate_211
    from .gnla.catalog import parse_growth

    g = parse_growth(args.growth)
    if g[:2] != (2, 1) or any(x != 1 for x in g[1:]):
        raise UsageError(f"only growth (2,1,...,1) is enumerated, got {args.growth}")
    n = _depth_limit(args.max_depth, MAX_ENUMERATION_DEPTH)
    rep = enumerate_211(n)
    text = "\n".join(f"depth {k}: {len(v)} ({', '.join(v)})" for k, v in sorted(rep.per_depth.items()))
    out.emit(rep.to_json(), text)
    return EXIT_OK


# ------------------------------------------------------------ jnorm

def cmd_jnorm(args, out):
    from .cxstruct import ComplexStructure, invariant_J_exists, normalize_J

    m = load_algebra(args.algebra)
    if args.invariant:
        inv = invariant_J_exists(m)
        out.emit({"algebra": m.label, **inv.to_json()},
                 f"{m.label}: invariant J {'exists' if inv.exists else 'does not exist'}")
        return EXIT_OK
    J = ComplexStructure.from_matrix(load_J(args.J))
    nf = normalize_J(m, J)
    n = nf.normal
    out.emit({"algebra": m.label, "input": J.to_json(), **nf.to_json()},
             f"{m.label} ({nf.shape}): ({rat_str(J.a)}, {rat_str(J.b)}) -> "
             f"({rat_str(n.a)}, {rat_str(n.b)})")
    return EXIT_OK


# ------------------------------------------------------------ model

def _model(args):
    from .crmodel import load_model_file

    return load_model_file(args.file)


def cmd_model_parse(args, out):
    m = _model(args)
    out.emit(m.to_json(), f"{m.name}: {len(m.coords)} coordinates, {len(m.equations)} equations, "
                          f"{len(m.fields)} fields, dim M = {m.real_dim}")
    return EXIT_OK


def cmd_model_verify(args, out):
    from .crmodel import realify, verify_tangency

    m = _model(args)
    real = realify(m)
    res = [verify_tangency(m, n, real=real) for n in m.fields]
    ok = all(r.ok for r in res)
    lines = [f"{r.field}: {'tangent' if r.ok else 'NOT tangent ' + str(sorted(r.residuals))}"
             for r in res]
    out.emit({"model": m.name, "all_tangent": ok, "fields": [r.to_json() for r in res]},
             "\n".join(lines))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_model_closure(args, out):
    from .crmodel import closure

    m = _model(args)
    rep = closure(m)
    out.emit(rep.to_json(), f"{m.name}: closed, dimension {rep.dimension}, largest commuting "
                            f"subset {rep.commuting} (size {len(rep.commuting)})")
    return EXIT_OK


def _symbol_text(m, sym):
    from .gnla.core import growth

    lines = [f"{m.name}: growth {list(growth(sym.algebra).reduced)}",
             sym.algebra.relations_str(),
             f"r = {sym.r}, dim bound = {sym.bound}"]
    if sym.extension_type is not None:
        lines.append(f"type: {sym.extension_type.tag}")
    return "\n".join(lines)


def cmd_model_symbol(args, out):
    from .crmodel import model_symbol

    m = _model(args)
    sym = model_symbol(m, parse_params(args.param))
    out.emit({"model": m.name, **sym.to_json()}, _symbol_text(m, sym))
    return EXIT_OK


def cmd_model_all(args, out):
    from .crmodel import closure, model_symbol

    m = _model(args)
    rep = closure(m)
    params = parse_params(args.param)
    for p in m.params:
        params.setdefault(p, Fraction(1))
    sym = model_symbol(m, params)
    dim_ok = rep.dimension == sym.bound == m.real_dim + sym.r
    data = {"model": m.name, "closure": rep.to_json(), "symbol": sym.to_json(),
            "dimension": rep.dimension, "dim_M": m.real_dim, "r": sym.r,
            "matches_bound": dim_ok}
    text = (f"{m.name}: all fields tangent, dimension {rep.dimension} = dim M {m.real_dim} + r {sym.r}"
            if dim_ok else
            f"{m.name}: dimension {rep.dimension} but bound {sym.bound} (dim M {m.real_dim}, r {sym.r})")
    out.emit(data, text)
    return EXIT_OK if dim_ok else EXIT_CHECK


# ------------------------------------------------------------ suite

def cmd_paper_suite(args, out):
    from .suite import run_suite

    results = run_suite(args.only)
    data = {"checks": [r.to_json() for r in results],
            "passed": sum(r.passed for r in results), "total": len(results)}
    text = "\n".join(r.line() for r in results)
    text += f"\n{data['passed']}/{data['total']} passed"
    out.emit(data, text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="crgnla", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = sub.add_parser("gnla", help="graded nilpotent Lie algebras").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    s = g.add_parser("check", parents=[common], help="validate and test fundamentality")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_gnla_check)
    s = g.add_parser("growth", parents=[common])
    s.add_argument("algebra")
    s.set_defaults(func=cmd_gnla_growth)
    s = g.add_parser("catalog", parents=[common], help="list or print catalog symbols")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_gnla_catalog)
    s = g.add_parser("free", parents=[common], help="free GNLA on two generators")
    s.add_argument("--depth", type=int)
    s.add_argument("--full", action="store_true", help="include the structure constants")
    s.set_defaults(func=cmd_gnla_free)
    s = g.add_parser("deprolong", parents=[common])
    s.add_argument("algebra")
    s.add_argument("--iterate", action="store_true", help="repeat down to depth 2")
    s.set_defaults(func=cmd_gnla_deprolong)

    g = sub.add_parser("prolong", help="Tanaka prolongation").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    s = g.add_parser("run", parents=[common])
    s.add_argument("algebra")
    s.add_argument("--max-degree", type=int, default=6)
    s.add_argument("--cr-J", default="standard", help="'standard', 'a,b' or a J JSON file")
    s.add_argument("--full-g0", action="store_true", help="use all of der0 instead of the CR part")
    s.set_defaults(func=cmd_prolong_run)

    g = sub.add_parser("extend", help="cocycles and central extensions").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    s = g.add_parser("cocycles", parents=[common])
    s.add_argument("algebra")
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_extend_cocycles)
    s = g.add_parser("apply", parents=[common])
    s.add_argument("algebra")
    s.add_argument("cocycle", help="cocycle JSON file")
    s.add_argument("--label")
    s.add_argument("--allow-nonfundamental", action="store_true")
    s.set_defaults(func=cmd_extend_apply)
    s = g.add_parser("classify", parents=[common], help="type of an extension of m_HC")
    s.add_argument("cocycle", nargs="+", help="one or two cocycle JSON files")
    s.set_defaults(func=cmd_extend_classify)
    s = g.add_parser("enumerate", parents=[common])
    s.add_argument("--growth", default="2,1,1")
    s.add_argument("--max-depth", type=int)
    s.set_defaults(func=cmd_extend_enumerate)

    s = sub.add_parser("jnorm", parents=[common], help="normal form of a complex structure")
    s.add_argument("algebra")
    s.add_argument("--J", default="standard", help="'standard', 'a,b' or a J JSON file")
    s.add_argument("--invariant", action="store_true", help="decide if a der0-invariant J exists")
    s.set_defaults(func=cmd_jnorm)

    g = sub.add_parser("model", help="coordinate CR models").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("parse", cmd_model_parse), ("verify", cmd_model_verify),
                     ("closure", cmd_model_closure), ("symbol", cmd_model_symbol),
                     ("all", cmd_model_all)):
        s = g.add_parser(name, parents=[common])
        s.add_argument("file", help="model file (shipped fixture names also resolve)")
        if name in ("symbol", "all"):
            s.add_argument("--param", action="append", help="name=value")
        s.set_defaults(func=fn)

    s = sub.add_parser("paper-suite", parents=[common], help="run every reproduction check")
    s.add_argument("--only", type=int, nargs="*", help="check ids to run")
    s.set_defaults(func=cmd_paper_suite)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as e:
        stderr.write(f"{e}\n")
        return EXIT_USAGE
    out = Output(args.json, stdout)
    try:
        return args.func(args, out)
    except CheckFailure as e:
        stderr.write(f"check failed: {e}\n")
        return EXIT_CHECK
    except InternalConsistencyError as e:
        stderr.write(f"internal consistency error: {e}\n")
        return EXIT_INTERNAL
    except UsageError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except CRGnlaError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
